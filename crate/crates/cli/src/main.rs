//! `eql`: run queries, generate benchmark graphs, time the search algorithms
//! and compare them against exhaustive search.

mod bench;
mod oracle;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use eql_core::ctp::{Algorithm, SearchConfig, SeedSets};
use eql_core::engine::{bgp_tables, compute_seed_sets, evaluate_query};
use eql_core::eql::ast::CtpFilters;
use eql_core::eql::compile;
use eql_core::graph::load_graph_files;
use eql_core::synth::{generate, GenSpec, Workload};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "eql", version, about = "Graph queries with connecting tree patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an EQL query on a graph.
    Run(RunArgs),
    /// Write a synthetic workload (nodes.tsv, edges.tsv, workload.json).
    Gen(GenArgs),
    /// Time search algorithms on a workload's tree pattern.
    Bench(bench::BenchArgs),
    /// Compare an algorithm against exhaustive search.
    OracleCheck(oracle::OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Tsv,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    graph_nodes: PathBuf,
    #[arg(long)]
    graph_edges: PathBuf,
    /// File holding the query text.
    #[arg(long)]
    query: PathBuf,
    #[arg(long, default_value = "molesp")]
    algo: Algorithm,
    /// Fallback per-search timeout when the query gives none.
    #[arg(long)]
    timeout_ms: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    output: Output,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    family: String,
    #[arg(long = "N")]
    n: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long = "nL")]
    nl: Option<u64>,
    #[arg(long = "nA")]
    na: Option<u64>,
    #[arg(long = "nS")]
    ns: Option<u64>,
    #[arg(long = "sL")]
    sl: Option<u64>,
    #[arg(long = "dBA")]
    dba: Option<u64>,
    #[arg(long = "NT")]
    nt: Option<u64>,
    #[arg(long = "NL")]
    big_nl: Option<u64>,
    #[arg(long = "SL")]
    big_sl: Option<u64>,
    /// Random seed for link placement (cdf only).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn need(v: Option<u64>, name: &str, family: &str) -> Result<u64> {
    v.with_context(|| format!("family {family} needs --{name}"))
}

impl GenArgs {
    fn spec(&self) -> Result<GenSpec> {
        let f = self.family.as_str();
        Ok(match f {
            "chain" => GenSpec::Chain { n: need(self.n, "N", f)? },
            "line" => GenSpec::Line {
                m: need(self.m, "m", f)?,
                nl: need(self.nl, "nL", f)?,
            },
            "comb" => GenSpec::Comb {
                na: need(self.na, "nA", f)?,
                ns: need(self.ns, "nS", f)?,
                sl: need(self.sl, "sL", f)?,
                dba: need(self.dba, "dBA", f)?,
            },
            "star" => GenSpec::Star {
                m: need(self.m, "m", f)?,
                sl: need(self.sl, "sL", f)?,
            },
            "cdf" => GenSpec::Cdf {
                m: need(self.m, "m", f)?,
                nt: need(self.nt, "NT", f)?,
                nl: need(self.big_nl, "NL", f)?,
                sl: need(self.big_sl, "SL", f)?,
                seed: self.seed,
            },
            other => bail!("unknown family `{other}` (expected chain, line, comb, star or cdf)"),
        })
    }
}

fn cmd_run(a: &RunArgs) -> Result<ExitCode> {
    let g = load_graph_files(&a.graph_nodes, &a.graph_edges).context("loading graph")?;
    let text = fs::read_to_string(&a.query).with_context(|| format!("reading {}", a.query.display()))?;
    let q = compile(&text)?;
    let mut cfg = SearchConfig::new(a.algo);
    cfg.timeout_ms = a.timeout_ms;
    let r = evaluate_query(&g, &q, &cfg)?;
    match a.output {
        Output::Json => println!("{}", r.to_json()),
        Output::Tsv => print!("{}", r.to_tsv()),
    }
    Ok(if r.partial { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn cmd_gen(a: &GenArgs) -> Result<ExitCode> {
    let spec = a.spec()?;
    let w = generate(&spec)?;
    w.write_to(&a.out)?;
    println!(
        "{}: {} nodes, {} edges -> {}",
        spec.id(),
        w.graph.node_count(),
        w.graph.edge_count(),
        a.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

/// The tree pattern a workload asks for: its seed sets directly, or the
/// first CTP of its query with seed sets computed from the BGPs.
pub(crate) fn workload_ctp(w: &Workload) -> Result<(SeedSets, CtpFilters)> {
    if let Some(s) = w.seed_sets() {
        return Ok((s, CtpFilters::default()));
    }
    let Some(text) = &w.manifest.query else {
        bail!("workload has neither seed sets nor a query");
    };
    let q = compile(text)?;
    let Some(ctp) = q.ast.ctps.first() else {
        bail!("workload query has no connecting tree pattern");
    };
    let tables = bgp_tables(&w.graph, &q)?;
    let sets = compute_seed_sets(&w.graph, &q, &tables)?.swap_remove(0);
    Ok((sets, ctp.filters.clone()))
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for partial results, so usage errors map to 1.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let res = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => bench::run(a),
        Command::OracleCheck(a) => oracle::run(a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
