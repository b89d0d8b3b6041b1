mod common;

use common::*;
use eql_core::ctp::{
    check_result, classify_result, is_tree, minimize, run_search, Algorithm, MultiQueue, PriorityPolicy, Provenance,
    SearchConfig, SearchState, SeedSets,
};
use eql_core::eql::ast::CtpFilters;
use eql_core::graph::{EdgeId, Graph};
use eql_core::synth::{random_instance, RandomSpec};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn instance(m: usize, seed: u64) -> (Graph, SeedSets) {
    random_instance(&RandomSpec { m, ..RandomSpec::default() }, seed)
}

fn search(g: &Graph, s: &SeedSets, alg: Algorithm) -> BTreeSet<Key> {
    keys(&run_search(g, s, &SearchConfig::new(alg)).unwrap())
}

fn edge_ids(k: &Key) -> Vec<EdgeId> {
    k.0.iter().map(|&e| EdgeId(e)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn bft_variants_match_reference(m in 1usize..5, seed in any::<u64>()) {
        let (g, s) = instance(m, seed);
        let want = reference_keys(&g, &seed_vecs(&s));
        for alg in [Algorithm::Bft, Algorithm::BftM, Algorithm::BftAm, Algorithm::Gam] {
            prop_assert_eq!(&search(&g, &s, alg), &want, "{}", alg.name());
        }
    }

    #[test]
    fn every_algorithm_is_sound(m in 1usize..6, seed in any::<u64>()) {
        let (g, s) = instance(m, seed);
        let want = reference_keys(&g, &seed_vecs(&s));
        for alg in Algorithm::ALL {
            let out = run_search(&g, &s, &SearchConfig::new(alg)).unwrap();
            let got = keys(&out);
            prop_assert_eq!(got.len(), out.results.len(), "{} reported a duplicate", alg.name());
            for r in &out.results {
                prop_assert!(is_tree(&g, &r.edges));
                let single = if r.edges.is_empty() { r.nodes.first().copied() } else { None };
                prop_assert_eq!(check_result(&g, &r.edges, single, &s), Ok(()), "{} {:?}", alg.name(), r.edges);
            }
            prop_assert!(got.is_subset(&want), "{} reported a non-result", alg.name());
        }
    }

    #[test]
    fn molesp_complete_up_to_three_sets(m in 1usize..4, seed in any::<u64>()) {
        let (g, s) = instance(m, seed);
        let want = reference_keys(&g, &seed_vecs(&s));
        prop_assert_eq!(search(&g, &s, Algorithm::MoLesp), want.clone());
        if m <= 2 {
            for alg in [Algorithm::Esp, Algorithm::MoEsp, Algorithm::Lesp] {
                prop_assert_eq!(&search(&g, &s, alg), &want, "{}", alg.name());
            }
        }
    }

    #[test]
    fn completeness_ignores_queue_order(m in 2usize..4, seed in any::<u64>(), order in any::<u64>()) {
        let (g, s) = instance(m, seed);
        let want = reference_keys(&g, &seed_vecs(&s));
        let mut cfg = SearchConfig::new(Algorithm::MoLesp);
        cfg.priority = PriorityPolicy::Shuffled(order);
        prop_assert_eq!(keys(&run_search(&g, &s, &cfg).unwrap()), want.clone());
        cfg.multi_queue = MultiQueue::On;
        prop_assert_eq!(keys(&run_search(&g, &s, &cfg).unwrap()), want);
    }

    #[test]
    fn guaranteed_classes_are_found(m in 4usize..7, seed in any::<u64>()) {
        let (g, s) = instance(m, seed);
        let found: Vec<(Algorithm, BTreeSet<Key>)> = [Algorithm::MoEsp, Algorithm::Lesp, Algorithm::MoLesp]
            .into_iter()
            .map(|a| (a, search(&g, &s, a)))
            .collect();
        for r in reference(&g, &seed_vecs(&s)) {
            let k = r.key();
            let class = classify_result(&g, &edge_ids(&k), &s).unwrap();
            for (alg, got) in &found {
                if class.guaranteed_for(*alg, m) {
                    prop_assert!(got.contains(&k), "{} missed {:?} (p = {})", alg.name(), k, class.p);
                }
            }
            if class.is_path || class.p <= 2 {
                prop_assert!(found[0].1.contains(&k), "moesp missed a 2ps result");
            }
            if class.p <= 3 {
                prop_assert!(found[2].1.contains(&k), "molesp missed a 3ps result");
            }
        }
    }

    #[test]
    fn gam_family_results_are_minimal(m in 2usize..5, seed in any::<u64>()) {
        let (g, s) = instance(m, seed);
        for alg in Algorithm::ALL.into_iter().filter(|a| !a.is_bft()) {
            for r in run_search(&g, &s, &SearchConfig::new(alg)).unwrap().results {
                prop_assert_eq!(minimize(&g, &r.edges, &s).unwrap(), r.edges.clone());
            }
        }
    }

    #[test]
    fn sat_algebra_and_monotone_signatures(m in 2usize..6, seed in any::<u64>(), alg_ix in 3usize..8) {
        let (g, s) = instance(m, seed);
        let alg = Algorithm::ALL[alg_ix];
        let mut st = SearchState::start(&g, &s, SearchConfig::new(alg)).unwrap();
        st.initialize();
        let sigs = |st: &SearchState| (0..g.node_count() as u32).map(|n| st.signature(n)).collect::<Vec<_>>();
        let mut prev = sigs(&st);
        while st.advance() {
            let now = sigs(&st);
            for (a, b) in prev.iter().zip(&now) {
                prop_assert_eq!(a & b, *a, "a signature bit was cleared");
            }
            prev = now;
        }
        let trees = st.trees();
        for t in trees {
            match t.provenance() {
                Provenance::Init => prop_assert!(t.sat().count_ones() <= m as u32),
                Provenance::Grow { parent, .. } => {
                    let p = trees[parent as usize].sat();
                    prop_assert_eq!(t.sat() & p, p);
                    prop_assert!((t.sat() & !p).count_ones() <= 1);
                }
                Provenance::Merge { left, right } => {
                    let (l, r) = (trees[left as usize].sat(), trees[right as usize].sat());
                    prop_assert_eq!(t.sat(), l | r);
                    // Only a seed root may be counted on both sides.
                    let root_sat = trees.iter().find(|x| x.edges().is_empty() && x.root() == t.root()).map_or(0, |x| x.sat());
                    prop_assert_eq!(l & r & !root_sat, 0);
                }
                Provenance::Mo { parent } => prop_assert_eq!(t.sat(), trees[parent as usize].sat()),
            }
        }
    }

    #[test]
    fn runs_are_deterministic(m in 2usize..5, seed in any::<u64>()) {
        let (g, s) = instance(m, seed);
        for alg in Algorithm::ALL {
            let a = run_search(&g, &s, &SearchConfig::new(alg)).unwrap();
            let b = run_search(&g, &s, &SearchConfig::new(alg)).unwrap();
            prop_assert_eq!(&a.results, &b.results);
            prop_assert_eq!(&a.stats, &b.stats);
        }
    }

    #[test]
    fn pushed_filters_match_post_filtering(m in 1usize..4, seed in any::<u64>(), max in 1u64..5) {
        let (g, s) = instance(m, seed);
        let all = reference(&g, &seed_vecs(&s));
        let run = |f: CtpFilters| keys(&run_search(&g, &s, &SearchConfig::new(Algorithm::MoLesp).with_filters(f)).unwrap());
        let post = |keep: &dyn Fn(&RefResult) -> bool| all.iter().filter(|r| keep(r)).map(RefResult::key).collect::<BTreeSet<_>>();

        let uni = CtpFilters { uni: true, ..CtpFilters::default() };
        prop_assert_eq!(run(uni), post(&|r| is_unidirectional(&g, &r.edges)));
        let labels = CtpFilters { labels: Some(["l0".to_string(), "l1".to_string()].into()), ..CtpFilters::default() };
        prop_assert_eq!(run(labels), post(&|r| labels_within(&g, &r.edges, &["l0", "l1"])));
        let capped = CtpFilters { max_edges: Some(max), ..CtpFilters::default() };
        prop_assert_eq!(run(capped), post(&|r| r.edges.len() as u64 <= max));
    }
}

#[test]
fn uni_results_carry_their_root() {
    for seed in 0..30 {
        let (g, s) = instance(3, seed);
        let f = CtpFilters { uni: true, ..CtpFilters::default() };
        for r in run_search(&g, &s, &SearchConfig::new(Algorithm::MoLesp).with_filters(f)).unwrap().results {
            if r.edges.is_empty() {
                continue;
            }
            assert_eq!(r.root, eql_core::ctp::directed_root(&g, &r.edges));
            assert!(r.root.is_some());
        }
    }
}

#[test]
fn budget_and_timeout_flag_partial_outcomes() {
    let w = eql_core::synth::generate(&eql_core::synth::GenSpec::Chain { n: 16 }).unwrap();
    let s = w.seed_sets().unwrap();
    for alg in Algorithm::ALL {
        let mut cfg = SearchConfig::new(alg);
        cfg.budget = Some(100);
        let out = run_search(&w.graph, &s, &cfg).unwrap();
        assert!(out.stats.budget_exhausted && out.partial(), "{}", alg.name());
        assert!((out.results.len() as u64) < 1 << 16);
    }
}
