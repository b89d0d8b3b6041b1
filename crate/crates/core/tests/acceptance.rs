//! Acceptance gate: prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use common::*;
use eql_core::ctp::{
    check_result, classify_result, run_search, Algorithm, SearchConfig, SearchOutcome, SeedSets,
};
use eql_core::engine::{evaluate_query, Value};
use eql_core::eql::ast::CtpFilters;
use eql_core::eql::compile;
use eql_core::graph::{load_graph_files, Graph};
use eql_core::synth::{generate, random_instance, GenSpec, RandomSpec, Workload};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

const LIMIT_1: Duration = Duration::from_secs(1);
const LIMIT_2: Duration = Duration::from_secs(30);
const LIMIT_3: Duration = Duration::from_secs(5 * 60);
const LIMIT_4: Duration = Duration::from_secs(10 * 60);
const LIMIT_6: Duration = Duration::from_secs(60);
const LIMIT_7: Duration = Duration::from_secs(60);
const LIMIT_8: Duration = Duration::from_secs(60);

const SUITE3_INSTANCES: u64 = 200;
const SUITE3_RNG_BASE: u64 = 10_000;
const SUITE4_INSTANCES: u64 = 100;
const SUITE4_RNG_BASE: u64 = 20_000;
const LABEL_FILTER: [&str; 2] = ["l0", "l1"];
const MAX_FILTER: u64 = 3;

/// Verdict detail plus a transcript of everything observable, compared
/// across two runs for the determinism criterion.
struct Run {
    ok: Result<String, String>,
    transcript: Vec<String>,
}

fn record(t: &mut Vec<String>, name: &str, o: &SearchOutcome) {
    let ks: Vec<Key> = o.results.iter().map(key_of).collect();
    t.push(format!("{name} {ks:?} {:?}", o.stats));
}

fn search(g: &Graph, s: &SeedSets, alg: Algorithm) -> SearchOutcome {
    run_search(g, s, &SearchConfig::new(alg)).expect("search runs")
}

struct Instance {
    name: String,
    g: Graph,
    seeds: SeedSets,
}

fn random_suite(count: u64, base: u64, m_of: impl Fn(u64) -> usize) -> Vec<Instance> {
    (0..count)
        .map(|k| {
            let spec = RandomSpec {
                max_nodes: 12,
                max_edges: 20,
                labels: 3,
                m: m_of(k),
                max_set_size: 2,
            };
            let (g, seeds) = random_instance(&spec, base + k);
            Instance {
                name: format!("random #{}", base + k),
                g,
                seeds,
            }
        })
        .collect()
}

fn suite3() -> Vec<Instance> {
    random_suite(SUITE3_INSTANCES, SUITE3_RNG_BASE, |k| 1 + (k % 3) as usize)
}

fn suite4() -> Vec<Instance> {
    random_suite(SUITE4_INSTANCES, SUITE4_RNG_BASE, |k| 4 + (k % 3) as usize)
}

fn sample_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/sample")
}

fn sample() -> Graph {
    let d = sample_dir();
    load_graph_files(&d.join("nodes.tsv"), &d.join("edges.tsv")).expect("sample data")
}

/// Seeds of one member of the sample query: nodes of `ty` with a `citizenOf` edge to `country`.
fn citizens(g: &Graph, ty: &str, country: &str) -> Vec<u64> {
    let set: BTreeSet<u64> = g
        .edges()
        .iter()
        .filter(|e| e.label == "citizenOf" && g.node(e.target).unwrap().label == country)
        .map(|e| e.source)
        .filter(|&n| g.node(n).unwrap().types.contains(ty))
        .map(|n| n.0)
        .collect();
    set.into_iter().collect()
}

fn c1_worked_example() -> Run {
    let mut t = Vec::new();
    let g = sample();
    let text = std::fs::read_to_string(sample_dir().join("query.eql")).unwrap();
    let q = compile(&text).unwrap();
    let r = evaluate_query(&g, &q, &SearchConfig::new(Algorithm::MoLesp)).unwrap();
    let got: BTreeSet<(Vec<u64>, Vec<u64>)> = r
        .rows
        .iter()
        .map(|row| {
            let mut ids = Vec::new();
            let mut edges = Vec::new();
            for v in row {
                match v {
                    Value::Node(n) => ids.push(n.0),
                    Value::Tree(tr) => edges = tr.edges.iter().map(|e| e.0).collect(),
                    Value::Edge(e) => ids.push(e.0),
                }
            }
            (ids, edges)
        })
        .collect();
    t.push(format!("{got:?}"));

    // The query result by hand: seed sets from the three BGPs, CTP table from BFT,
    // and the join reduces to reading each tree's seeds.
    let sets = vec![
        citizens(&g, "entrepreneur", "USA"),
        citizens(&g, "entrepreneur", "France"),
        citizens(&g, "politician", "France"),
    ];
    let bft = search(&g, &SeedSets::of_ids(sets.clone()), Algorithm::Bft);
    let want: BTreeSet<(Vec<u64>, Vec<u64>)> = bft
        .results
        .iter()
        .map(|r| (r.seeds.iter().map(|n| n.0).collect(), r.edges.iter().map(|e| e.0).collect()))
        .collect();
    if keys(&bft) != reference_keys(&g, &sets) {
        return Run {
            ok: Err("BFT disagrees with the subtree enumeration".into()),
            transcript: t,
        };
    }
    let t_alpha = (vec![4, 6, 9], vec![9, 10, 11]);
    let t_beta = (vec![2, 3, 9], vec![1, 2, 16, 17]);
    let ok = if !got.contains(&t_alpha) || !got.contains(&t_beta) {
        Err("a worked-example row is missing".into())
    } else if got != want {
        Err(format!("{} rows, oracle evaluation has {}", got.len(), want.len()))
    } else {
        Ok(format!("{} rows equal the oracle evaluation", got.len()))
    };
    Run { ok, transcript: t }
}

fn c2_chain_counts() -> Run {
    let mut t = Vec::new();
    let mut bad = Vec::new();
    for n in 1..=8u64 {
        let w = generate(&GenSpec::Chain { n }).unwrap();
        let s = w.seed_sets().unwrap();
        for alg in [Algorithm::Bft, Algorithm::MoLesp] {
            let o = search(&w.graph, &s, alg);
            record(&mut t, &format!("chain {n} {}", alg.name()), &o);
            if o.results.len() as u64 != 1 << n {
                bad.push(format!("N={n} {}: {}", alg.name(), o.results.len()));
            }
        }
    }
    let ok = if bad.is_empty() {
        Ok("2^N results for N = 1..8 under bft and molesp".into())
    } else {
        Err(bad.join("; "))
    };
    Run { ok, transcript: t }
}

fn c3_completeness(suite: &[Instance]) -> Run {
    let mut t = Vec::new();
    let mut bad = Vec::new();
    for i in suite {
        let bft = search(&i.g, &i.seeds, Algorithm::Bft);
        let mo = search(&i.g, &i.seeds, Algorithm::MoLesp);
        record(&mut t, &format!("{} bft", i.name), &bft);
        record(&mut t, &format!("{} molesp", i.name), &mo);
        if keys(&bft) != keys(&mo) {
            bad.push(i.name.clone());
        }
    }
    let ok = if bad.is_empty() {
        Ok(format!("{} instances, molesp = bft on all", suite.len()))
    } else {
        Err(format!("{} of {} differ: {}", bad.len(), suite.len(), bad.join(", ")))
    };
    Run { ok, transcript: t }
}

fn c4_guaranteed_classes(suite: &[Instance]) -> Run {
    let mut t = Vec::new();
    let mut bad = Vec::new();
    let mut checked = 0;
    for i in suite {
        let bft = search(&i.g, &i.seeds, Algorithm::Bft);
        let mo = search(&i.g, &i.seeds, Algorithm::MoLesp);
        record(&mut t, &format!("{} bft", i.name), &bft);
        record(&mut t, &format!("{} molesp", i.name), &mo);
        let have = keys(&mo);
        for r in &bft.results {
            let class = classify_result(&i.g, &r.edges, &i.seeds).unwrap();
            if class.molesp_guaranteed() {
                checked += 1;
                if !have.contains(&key_of(r)) {
                    bad.push(format!("{} {:?}", i.name, key_of(r)));
                }
            }
        }
    }
    let ok = if bad.is_empty() {
        Ok(format!("{checked} guaranteed results over {} instances, all found", suite.len()))
    } else {
        Err(format!("{} guaranteed results missed: {}", bad.len(), bad.join(", ")))
    };
    Run { ok, transcript: t }
}

fn workload_instances(specs: &[GenSpec]) -> Vec<Instance> {
    specs
        .iter()
        .map(|s| {
            let w = generate(s).unwrap();
            Instance {
                name: s.id(),
                seeds: w.seed_sets().unwrap(),
                g: w.graph,
            }
        })
        .collect()
}

fn suite6_specs() -> Vec<GenSpec> {
    let mut v = Vec::new();
    for m in [3, 5] {
        for nl in [1, 2] {
            v.push(GenSpec::Line { m, nl });
        }
    }
    for na in [2, 3] {
        v.push(GenSpec::Comb { na, ns: 2, sl: 2, dba: 1 });
    }
    for m in 3..=6 {
        v.push(GenSpec::Star { m, sl: 2 });
    }
    v
}

fn suite7_specs() -> Vec<GenSpec> {
    vec![GenSpec::Comb { na: 4, ns: 2, sl: 2, dba: 1 }, GenSpec::Star { m: 6, sl: 2 }]
}

fn chain_instances() -> Vec<Instance> {
    workload_instances(&(1..=8).map(|n| GenSpec::Chain { n }).collect::<Vec<_>>())
}

fn sample_instance() -> Instance {
    let g = sample();
    let sets = vec![
        citizens(&g, "entrepreneur", "USA"),
        citizens(&g, "entrepreneur", "France"),
        citizens(&g, "politician", "France"),
    ];
    Instance {
        name: "sample query".into(),
        seeds: SeedSets::of_ids(sets),
        g,
    }
}

fn c5_soundness(groups: &[&[Instance]]) -> Run {
    let mut t = Vec::new();
    let mut bad = Vec::new();
    let mut total = 0;
    for i in groups.iter().flat_map(|g| g.iter()) {
        let oracle = keys(&search(&i.g, &i.seeds, Algorithm::Bft));
        for alg in Algorithm::ALL {
            let o = search(&i.g, &i.seeds, alg);
            record(&mut t, &format!("{} {}", i.name, alg.name()), &o);
            let ks = keys(&o);
            if ks.len() != o.results.len() {
                bad.push(format!("{} {}: duplicate result", i.name, alg.name()));
            }
            if !ks.is_subset(&oracle) {
                bad.push(format!("{} {}: result outside bft", i.name, alg.name()));
            }
            for r in &o.results {
                total += 1;
                let single = if r.edges.is_empty() { r.nodes.first().copied() } else { None };
                if let Err(v) = check_result(&i.g, &r.edges, single, &i.seeds) {
                    bad.push(format!("{} {}: {v}", i.name, alg.name()));
                }
            }
        }
    }
    let ok = if bad.is_empty() {
        Ok(format!("{total} reported results checked, all minimal, distinct and within bft"))
    } else {
        Err(bad.join("; "))
    };
    Run { ok, transcript: t }
}

fn c6_single_result() -> Run {
    let mut t = Vec::new();
    let mut bad = Vec::new();
    for (spec, i) in suite6_specs().iter().zip(workload_instances(&suite6_specs())) {
        let mo = search(&i.g, &i.seeds, Algorithm::MoLesp);
        record(&mut t, &format!("{} molesp", i.name), &mo);
        if mo.results.len() != 1 {
            bad.push(format!("{}: molesp found {}", i.name, mo.results.len()));
            continue;
        }
        let also = match spec {
            GenSpec::Star { .. } => Algorithm::Lesp,
            _ => Algorithm::MoEsp,
        };
        let other = search(&i.g, &i.seeds, also);
        record(&mut t, &format!("{} {}", i.name, also.name()), &other);
        if keys(&other) != keys(&mo) {
            bad.push(format!("{}: {} found {}", i.name, also.name(), other.results.len()));
        }
    }
    let ok = if bad.is_empty() {
        Ok("each workload has exactly its one result; lesp on stars and moesp on lines and combs agree".into())
    } else {
        Err(bad.join("; "))
    };
    Run { ok, transcript: t }
}

fn c7_pruning_effect() -> Run {
    let mut t = Vec::new();
    let mut parts = Vec::new();
    let mut ok = true;
    for i in workload_instances(&suite7_specs()) {
        let gam = search(&i.g, &i.seeds, Algorithm::Gam);
        let mo = search(&i.g, &i.seeds, Algorithm::MoLesp);
        record(&mut t, &format!("{} gam", i.name), &gam);
        record(&mut t, &format!("{} molesp", i.name), &mo);
        let (a, b) = (mo.stats.provenances_built, gam.stats.provenances_built);
        ok &= a < b;
        // Trees that survived pruning, reported for context only.
        let kept = |o: &SearchOutcome| o.stats.provenances_built - o.stats.trees_pruned;
        parts.push(format!("{}: molesp {a} vs gam {b} (kept {} vs {})", i.name, kept(&mo), kept(&gam)));
    }
    let detail = parts.join(", ");
    Run {
        ok: if ok { Ok(detail) } else { Err(detail) },
        transcript: t,
    }
}

fn c8_cdf() -> Run {
    let mut t = Vec::new();
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    let (nt, sl) = (8u64, 3u64);
    for m in [2u64, 3] {
        for nl in [16u64, 32] {
            let w = generate(&GenSpec::Cdf { m, nt, nl, sl, seed: 1 }).unwrap();
            let want_edges = 12 * nt + nl * sl;
            let want_nodes = if m == 2 { 14 * nt + nl * (sl - 1) } else { 14 * nt + nl * sl };
            let (nodes, edges) = (w.graph.node_count() as u64, w.graph.edge_count() as u64);
            if edges != want_edges {
                bad.push(format!("m={m} NL={nl}: {edges} edges, formula {want_edges}"));
            }
            if nodes != want_nodes {
                bad.push(format!("m={m} NL={nl}: {nodes} nodes, formula {want_nodes}"));
            }
            let q = compile(w.manifest.query.as_ref().unwrap()).unwrap();
            let r = evaluate_query(&w.graph, &q, &SearchConfig::new(Algorithm::MoLesp)).unwrap();
            t.push(format!("m={m} NL={nl} rows={} raw={} {:?}", r.rows.len(), r.ctps[0].results, r.ctps[0].stats));
            notes.push(format!("m={m} NL={nl}: {} rows", r.rows.len()));
            if r.rows.len() as u64 != nl || r.partial {
                bad.push(format!("m={m} NL={nl}: {} rows, expected {nl}", r.rows.len()));
            }
        }
    }
    let ok = if bad.is_empty() { Ok(notes.join(", ")) } else { Err(bad.join("; ")) };
    Run { ok, transcript: t }
}

fn c9_filters(suite: &[Instance]) -> Run {
    let mut t = Vec::new();
    let mut bad = Vec::new();
    for i in suite {
        let all = search(&i.g, &i.seeds, Algorithm::Bft);
        let post = |keep: &dyn Fn(&[u64]) -> bool| -> BTreeSet<Key> {
            all.results.iter().map(key_of).filter(|k| keep(&k.0)).collect()
        };
        let cases: [(&str, CtpFilters, BTreeSet<Key>); 3] = [
            (
                "uni",
                CtpFilters { uni: true, ..CtpFilters::default() },
                post(&|e| is_unidirectional(&i.g, e)),
            ),
            (
                "label",
                CtpFilters {
                    labels: Some(LABEL_FILTER.iter().map(|s| s.to_string()).collect()),
                    ..CtpFilters::default()
                },
                post(&|e| labels_within(&i.g, e, &LABEL_FILTER)),
            ),
            (
                "max",
                CtpFilters { max_edges: Some(MAX_FILTER), ..CtpFilters::default() },
                post(&|e| e.len() as u64 <= MAX_FILTER),
            ),
        ];
        for (name, f, want) in cases {
            let o = run_search(&i.g, &i.seeds, &SearchConfig::new(Algorithm::MoLesp).with_filters(f)).unwrap();
            record(&mut t, &format!("{} {name}", i.name), &o);
            if keys(&o) != want {
                bad.push(format!("{} {name}", i.name));
            }
        }
    }
    let ok = if bad.is_empty() {
        Ok(format!("{} instances x UNI, LABEL, MAX{MAX_FILTER}: pushed = post-filtered", suite.len()))
    } else {
        Err(format!("mismatches: {}", bad.join(", ")))
    };
    Run { ok, transcript: t }
}

/// Generated files of every workload family used above.
fn generated_files() -> Vec<Vec<u8>> {
    let mut specs = suite6_specs();
    specs.extend(suite7_specs());
    specs.extend((1..=8).map(|n| GenSpec::Chain { n }));
    for m in [2, 3] {
        for nl in [16, 32] {
            specs.push(GenSpec::Cdf { m, nt: 8, nl, sl: 3, seed: 1 });
        }
    }
    let dir = std::env::temp_dir().join(format!("eql-acceptance-{}", std::process::id()));
    let mut out = Vec::new();
    for s in &specs {
        let w: Workload = generate(s).unwrap();
        w.write_to(&dir).unwrap();
        for f in ["nodes.tsv", "edges.tsv", "workload.json"] {
            out.push(std::fs::read(dir.join(f)).unwrap());
        }
    }
    std::fs::remove_dir_all(&dir).unwrap();
    out
}

fn report(n: u32, title: &str, limit: Option<Duration>, run: impl FnOnce() -> Run) -> (bool, Vec<String>) {
    let start = Instant::now();
    let r = run();
    let took = start.elapsed();
    let mut verdict = r.ok;
    if let (Some(l), Ok(d)) = (limit, &verdict) {
        if took >= l {
            verdict = Err(format!("{d}, but took {took:.2?} (limit {l:?})"));
        }
    }
    let pass = verdict.is_ok();
    let detail = match verdict {
        Ok(d) | Err(d) => d,
    };
    println!(
        "criterion {n:>2} {title}: {} [{took:.2?}] {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    (pass, r.transcript)
}

/// Runs criteria 1 to 9 and returns their pass flags and transcripts.
fn run_all(print: bool) -> (Vec<bool>, Vec<Vec<String>>) {
    let s3 = suite3();
    let s4 = suite4();
    let chains = chain_instances();
    let s6 = workload_instances(&suite6_specs());
    let s7 = workload_instances(&suite7_specs());
    let f1 = [sample_instance()];
    let mut flags = Vec::new();
    let mut transcripts = Vec::new();
    let mut go = |n: u32, title: &str, limit: Option<Duration>, f: &dyn Fn() -> Run| {
        let (pass, t) = if print {
            report(n, title, limit, f)
        } else {
            let r = f();
            (r.ok.is_ok(), r.transcript)
        };
        flags.push(pass);
        transcripts.push(t);
    };
    go(1, "sample query on data/sample", Some(LIMIT_1), &c1_worked_example);
    go(2, "chain result counts", Some(LIMIT_2), &c2_chain_counts);
    go(3, "molesp completeness for m <= 3", Some(LIMIT_3), &|| c3_completeness(&s3));
    go(4, "guaranteed classes for m in 4..6", Some(LIMIT_4), &|| c4_guaranteed_classes(&s4));
    go(5, "soundness of all algorithms", None, &|| c5_soundness(&[&f1, &chains, &s3, &s4, &s6, &s7]));
    go(6, "single-result workloads", Some(LIMIT_6), &c6_single_result);
    go(7, "pruning reduces provenances", Some(LIMIT_7), &c7_pruning_effect);
    go(8, "CDF end to end", Some(LIMIT_8), &c8_cdf);
    go(9, "pushed filters", None, &|| c9_filters(&s3));
    (flags, transcripts)
}

fn main() {
    let (mut flags, first) = run_all(true);
    let start = Instant::now();
    let (_, second) = run_all(false);
    let same_runs = first == second;
    let same_files = generated_files() == generated_files();
    let pass = same_runs && same_files;
    let detail = match (same_runs, same_files) {
        (true, true) => "second run identical: results, stats and generated files".to_string(),
        (false, _) => {
            let diff: Vec<String> = (0..first.len())
                .filter(|&k| first[k] != second[k])
                .map(|k| (k + 1).to_string())
                .collect();
            format!("transcripts differ for criteria {}", diff.join(", "))
        }
        (true, false) => "generated files differ".to_string(),
    };
    println!(
        "criterion 10 determinism: {} [{:.2?}] {detail}",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed()
    );
    flags.push(pass);
    let failed: Vec<String> = flags
        .iter()
        .enumerate()
        .filter(|(_, &p)| !p)
        .map(|(k, _)| (k + 1).to_string())
        .collect();
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: failing criteria {}", failed.join(", "));
        std::process::exit(1);
    }
}
