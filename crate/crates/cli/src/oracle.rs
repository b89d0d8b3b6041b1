use crate::workload_ctp;
use anyhow::{bail, Result};
use clap::Args;
use eql_core::ctp::{classify_result, run_search, Algorithm, ResultTree, SearchConfig, SeedSets};
use eql_core::graph::{EdgeId, Graph, NodeId};
use eql_core::synth::{random_instance, RandomSpec, Workload};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Args)]
pub struct OracleArgs {
    /// Check the tree pattern of this workload directory.
    #[arg(long, conflicts_with = "random")]
    workload: Option<PathBuf>,
    /// Check this many random instances instead.
    #[arg(long)]
    random: Option<u64>,
    #[arg(long, default_value_t = 12)]
    max_nodes: usize,
    #[arg(long, default_value_t = 20)]
    max_edges: usize,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    max_set_size: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long, default_value = "molesp")]
    algo: Algorithm,
    /// Provenance budget for the exhaustive search.
    #[arg(long, default_value_t = 2_000_000)]
    budget: u64,
}

type Key = (Vec<EdgeId>, Option<NodeId>);

enum Verdict {
    Pass { oracle: usize, found: usize },
    Fail { missing: Vec<Key>, unsound: Vec<Key> },
    Budget,
}

fn keys(rs: &[ResultTree]) -> BTreeSet<Key> {
    rs.iter().map(ResultTree::key).collect()
}

fn check(g: &Graph, seeds: &SeedSets, algo: Algorithm, budget: u64) -> Result<Verdict> {
    let mut oracle_cfg = SearchConfig::new(Algorithm::Bft);
    oracle_cfg.budget = Some(budget);
    let oracle = run_search(g, seeds, &oracle_cfg)?;
    if oracle.stats.budget_exhausted || oracle.stats.timed_out {
        return Ok(Verdict::Budget);
    }
    let got = run_search(g, seeds, &SearchConfig::new(algo))?;
    let (want, have) = (keys(&oracle.results), keys(&got.results));
    let mut missing = Vec::new();
    for r in &oracle.results {
        let class = classify_result(g, &r.edges, seeds)?;
        if class.guaranteed_for(algo, seeds.m()) && !have.contains(&r.key()) {
            missing.push(r.key());
        }
    }
    let unsound: Vec<Key> = have.difference(&want).cloned().collect();
    if got.results.len() != have.len() {
        bail!("{} reported a result twice", algo.name());
    }
    Ok(if missing.is_empty() && unsound.is_empty() {
        Verdict::Pass {
            oracle: want.len(),
            found: have.len(),
        }
    } else {
        Verdict::Fail { missing, unsound }
    })
}

fn show(k: &Key) -> String {
    match k {
        (edges, _) if !edges.is_empty() => {
            let ids: Vec<String> = edges.iter().map(|e| e.0.to_string()).collect();
            format!("{{{}}}", ids.join(","))
        }
        (_, Some(n)) => format!("node {}", n.0),
        _ => "{}".into(),
    }
}

pub fn run(a: &OracleArgs) -> Result<ExitCode> {
    let instances: Vec<(String, Graph, SeedSets)> = match (&a.workload, a.random) {
        (Some(dir), _) => {
            let w = Workload::read_from(dir)?;
            let (seeds, _) = workload_ctp(&w)?;
            vec![(dir.display().to_string(), w.graph, seeds)]
        }
        (None, Some(n)) => {
            let spec = RandomSpec {
                max_nodes: a.max_nodes,
                max_edges: a.max_edges,
                labels: 3,
                m: a.m,
                max_set_size: a.max_set_size,
            };
            (0..n)
                .map(|k| {
                    let seed = a.rng_seed + k;
                    let (g, s) = random_instance(&spec, seed);
                    (format!("random #{seed}"), g, s)
                })
                .collect()
        }
        (None, None) => bail!("give --workload DIR or --random N"),
    };
    let (mut failed, mut over_budget) = (0, 0);
    for (name, g, seeds) in &instances {
        match check(g, seeds, a.algo, a.budget)? {
            Verdict::Pass { oracle, found } => {
                println!("PASS {name}: {} found {found}, exhaustive search {oracle}", a.algo.name())
            }
            Verdict::Fail { missing, unsound } => {
                failed += 1;
                println!("FAIL {name}");
                for k in &missing {
                    println!("  missing {}", show(k));
                }
                for k in &unsound {
                    println!("  not a result {}", show(k));
                }
            }
            Verdict::Budget => {
                over_budget += 1;
                println!("BUDGET {name}: exhaustive search exceeded {} provenances", a.budget);
            }
        }
    }
    Ok(if failed > 0 {
        ExitCode::from(1)
    } else if over_budget > 0 {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}
