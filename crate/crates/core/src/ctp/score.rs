//! Result scoring and TOP-k selection.

use super::{ResultTree, SearchError};
use crate::eql::ast::CtpFilters;
use std::collections::BTreeMap;

/// Scores each result on its own.
pub trait ScoreFunction: Send + Sync {
    fn score(&self, t: &ResultTree) -> f64;
}

impl<F: Fn(&ResultTree) -> f64 + Send + Sync> ScoreFunction for F {
    fn score(&self, t: &ResultTree) -> f64 {
        self(t)
    }
}

/// Scores that need the whole result list; called once after the search.
/// Returns one score per input result, in order.
pub trait BatchScoreFunction: Send + Sync {
    fn score_all(&self, results: &[ResultTree]) -> Vec<f64>;
}

enum Scorer {
    Single(Box<dyn ScoreFunction>),
    Batch(Box<dyn BatchScoreFunction>),
}

/// Named score functions. The default registry knows `edgecount` (fewer
/// edges score higher) and `unit` (every result scores 0).
pub struct ScoreRegistry {
    scorers: BTreeMap<String, Scorer>,
}

impl Default for ScoreRegistry {
    fn default() -> Self {
        let mut r = ScoreRegistry::empty();
        r.register("edgecount", |t: &ResultTree| -(t.edges.len() as f64));
        r.register("unit", |_: &ResultTree| 0.0);
        r
    }
}

impl ScoreRegistry {
    pub fn empty() -> Self {
        ScoreRegistry {
            scorers: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &str, f: impl ScoreFunction + 'static) {
        self.scorers.insert(name.to_string(), Scorer::Single(Box::new(f)));
    }

    pub fn register_batch(&mut self, name: &str, f: impl BatchScoreFunction + 'static) {
        self.scorers.insert(name.to_string(), Scorer::Batch(Box::new(f)));
    }

    pub fn contains(&self, name: &str) -> bool {
        self.scorers.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.scorers.keys().map(String::as_str)
    }

    fn scores(&self, name: &str, results: &[ResultTree]) -> Result<Vec<f64>, SearchError> {
        match self.scorers.get(name) {
            Some(Scorer::Single(f)) => Ok(results.iter().map(|t| f.score(t)).collect()),
            Some(Scorer::Batch(f)) => {
                let s = f.score_all(results);
                assert_eq!(s.len(), results.len(), "batch score `{name}` returned a wrong count");
                Ok(s)
            }
            None => Err(SearchError::UnknownScore(name.to_string())),
        }
    }
}

/// Attaches scores and keeps the `TOP k` best, ordered by descending score.
/// Ties go to the lexicographically smaller edge list. Without a SCORE
/// filter the results are returned unchanged.
pub fn apply_score_topk(
    results: Vec<ResultTree>,
    filters: &CtpFilters,
    registry: &ScoreRegistry,
) -> Result<Vec<ResultTree>, SearchError> {
    let Some(name) = &filters.score else {
        return Ok(results);
    };
    let scores = registry.scores(name, &results)?;
    let mut scored: Vec<ResultTree> = results
        .into_iter()
        .zip(scores)
        .map(|(mut t, s)| {
            t.score = Some(s);
            t
        })
        .collect();
    scored.sort_by(|a, b| {
        b.score
            .unwrap()
            .total_cmp(&a.score.unwrap())
            .then_with(|| a.key().cmp(&b.key()))
    });
    if let Some(k) = filters.top_k {
        scored.truncate(k as usize);
    }
    Ok(scored)
}
