use super::{seed_label, Built, Ids, SynthError};

fn require(ok: bool, msg: &str) -> Result<(), SynthError> {
    if ok {
        Ok(())
    } else {
        Err(SynthError::Invalid(msg.to_string()))
    }
}

/// Nodes 1..=N+1; consecutive nodes joined by two parallel edges. The first
/// pair is labelled `a`,`a`, later pairs `a`,`b`.
pub(crate) fn chain(n: u64) -> Result<Built, SynthError> {
    require(n >= 1, "chain needs N >= 1")?;
    require(n <= 62, "chain N above 62 overflows the result count")?;
    let mut ids = Ids::new();
    let nodes: Vec<u64> = (0..=n).map(|_| ids.plain()).collect();
    for i in 0..n as usize {
        ids.edge(nodes[i], "a", nodes[i + 1]);
        ids.edge(nodes[i], if i == 0 { "a" } else { "b" }, nodes[i + 1]);
    }
    Ok(Built {
        graph: ids.build(),
        seed_sets: Some(vec![vec![nodes[0]], vec![nodes[n as usize]]]),
        query: None,
        expected: 1 << n,
    })
}

fn singletons(seeds: &[u64]) -> Option<Vec<Vec<u64>>> {
    Some(seeds.iter().map(|&s| vec![s]).collect())
}

/// m seeds in a row, nl intermediary nodes between neighbours.
pub(crate) fn line(m: u64, nl: u64) -> Result<Built, SynthError> {
    require(m >= 2, "line needs m >= 2")?;
    let mut ids = Ids::new();
    let gaps: Vec<Vec<u64>> = (1..m).map(|_| (0..nl).map(|_| ids.plain()).collect()).collect();
    let seeds: Vec<u64> = (0..m as usize).map(|i| ids.labelled(&seed_label(i))).collect();
    for (i, gap) in gaps.iter().enumerate() {
        let mut prev = seeds[i];
        for &n in gap.iter().chain([seeds[i + 1]].iter()) {
            ids.edge(prev, "next", n);
            prev = n;
        }
    }
    Ok(Built {
        graph: ids.build(),
        seed_sets: singletons(&seeds),
        query: None,
        expected: 1,
    })
}

/// A spine of na seeds with dba intermediary nodes between neighbours; each
/// spine seed carries a bristle of ns segments of sl edges, every segment
/// ending in a seed.
pub(crate) fn comb(na: u64, ns: u64, sl: u64, dba: u64) -> Result<Built, SynthError> {
    require(na >= 1 && ns >= 1 && sl >= 1 && dba >= 1, "comb needs nA, nS, sL, dBA >= 1")?;
    require(na * (ns + 1) <= 64, "comb has more than 64 seeds")?;
    let mut ids = Ids::new();
    let spine_gaps: Vec<Vec<u64>> = (1..na).map(|_| (0..dba).map(|_| ids.plain()).collect()).collect();
    let bristle_inner: Vec<Vec<Vec<u64>>> = (0..na)
        .map(|_| (0..ns).map(|_| (1..sl).map(|_| ids.plain()).collect()).collect())
        .collect();
    let mut k = 0;
    let mut next_seed = |ids: &mut Ids| {
        let id = ids.labelled(&seed_label(k));
        k += 1;
        id
    };
    let spine: Vec<u64> = (0..na).map(|_| next_seed(&mut ids)).collect();
    let tips: Vec<Vec<u64>> = (0..na)
        .map(|_| (0..ns).map(|_| next_seed(&mut ids)).collect())
        .collect();
    for (i, gap) in spine_gaps.iter().enumerate() {
        let mut prev = spine[i];
        for &n in gap.iter().chain([spine[i + 1]].iter()) {
            ids.edge(prev, "next", n);
            prev = n;
        }
    }
    for a in 0..na as usize {
        let mut prev = spine[a];
        for s in 0..ns as usize {
            for &n in bristle_inner[a][s].iter().chain([tips[a][s]].iter()) {
                ids.edge(prev, "bristle", n);
                prev = n;
            }
        }
    }
    let mut seeds = spine;
    seeds.extend(tips.into_iter().flatten());
    Ok(Built {
        graph: ids.build(),
        seed_sets: singletons(&seeds),
        query: None,
        expected: 1,
    })
}

/// A center joined to each of m seeds by an arm of sl edges.
pub(crate) fn star(m: u64, sl: u64) -> Result<Built, SynthError> {
    require(m >= 2 && sl >= 1, "star needs m >= 2 and sL >= 1")?;
    require(m <= 64, "star has more than 64 seeds")?;
    let mut ids = Ids::new();
    let arms: Vec<Vec<u64>> = (0..m).map(|_| (1..sl).map(|_| ids.plain()).collect()).collect();
    let center = ids.plain();
    let seeds: Vec<u64> = (0..m as usize).map(|i| ids.labelled(&seed_label(i))).collect();
    for (arm, &seed) in arms.iter().zip(&seeds) {
        let mut prev = center;
        for &n in arm.iter().chain([seed].iter()) {
            ids.edge(prev, "arm", n);
            prev = n;
        }
    }
    Ok(Built {
        graph: ids.build(),
        seed_sets: singletons(&seeds),
        query: None,
        expected: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{generate, GenSpec};
    use crate::graph::NodeId;
    use proptest::prelude::*;

    fn counts(spec: GenSpec) -> (usize, usize) {
        let w = generate(&spec).unwrap();
        (w.graph.node_count(), w.graph.edge_count())
    }

    #[test]
    fn chain_shapes() {
        assert_eq!(counts(GenSpec::Chain { n: 1 }), (2, 2));
        assert_eq!(counts(GenSpec::Chain { n: 3 }), (4, 6));
        let w = generate(&GenSpec::Chain { n: 8 }).unwrap();
        assert_eq!(w.manifest.expected_results, Some(256));
        let labels: Vec<&str> = w.graph.edges().iter().map(|e| e.label.as_str()).collect();
        assert_eq!(&labels[..4], &["a", "a", "a", "b"]);
    }

    #[test]
    fn line_shapes() {
        assert_eq!(counts(GenSpec::Line { m: 3, nl: 1 }), (5, 4));
        assert_eq!(counts(GenSpec::Line { m: 2, nl: 0 }), (2, 1));
        assert_eq!(counts(GenSpec::Line { m: 5, nl: 2 }), (13, 12));
        let w = generate(&GenSpec::Line { m: 3, nl: 1 }).unwrap();
        let labels: Vec<&str> = w.graph.nodes().iter().map(|n| n.label.as_str()).collect();
        assert_eq!(labels, vec!["1", "2", "A", "B", "C"]);
    }

    #[test]
    fn comb_shapes() {
        let w = generate(&GenSpec::Comb { na: 3, ns: 1, sl: 2, dba: 3 }).unwrap();
        assert_eq!(w.manifest.seed_sets.as_ref().unwrap().len(), 6);
        // 3 spine seeds, 2 gaps of 3, 3 bristles of one 2-edge segment.
        assert_eq!((w.graph.node_count(), w.graph.edge_count()), (3 + 6 + 3 * 2, 8 + 6));
        assert_eq!(counts(GenSpec::Comb { na: 1, ns: 1, sl: 1, dba: 1 }), (2, 1));
        let w = generate(&GenSpec::Comb { na: 2, ns: 2, sl: 2, dba: 1 }).unwrap();
        assert_eq!(w.manifest.seed_sets.unwrap().len(), 6);
    }

    #[test]
    fn star_shapes() {
        let w = generate(&GenSpec::Star { m: 4, sl: 2 }).unwrap();
        assert_eq!((w.graph.node_count(), w.graph.edge_count()), (9, 8));
        // The center comes right after the four arm nodes.
        assert_eq!(w.graph.node(NodeId(5)).unwrap().label, "5");
        assert_eq!(w.graph.degree(NodeId(5)), Some(4));
        assert_eq!(counts(GenSpec::Star { m: 2, sl: 1 }), (3, 2));
        assert_eq!(counts(GenSpec::Star { m: 6, sl: 2 }), (13, 12));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn family_counts_follow_formulas(m in 2u64..7, nl in 0u64..4, na in 1u64..4, ns in 1u64..3, sl in 1u64..4, dba in 1u64..4) {
            prop_assert_eq!(counts(GenSpec::Line { m, nl }), ((m + (m - 1) * nl) as usize, ((m - 1) * (nl + 1)) as usize));
            prop_assert_eq!(counts(GenSpec::Star { m, sl }), ((1 + m * sl) as usize, (m * sl) as usize));
            let seeds = na * (ns + 1);
            let nodes = seeds + (na - 1) * dba + na * ns * (sl - 1);
            let edges = (na - 1) * (dba + 1) + na * ns * sl;
            prop_assert_eq!(counts(GenSpec::Comb { na, ns, sl, dba }), (nodes as usize, edges as usize));
        }
    }
}
