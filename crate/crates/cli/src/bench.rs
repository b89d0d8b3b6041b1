use crate::workload_ctp;
use anyhow::{Context, Result};
use clap::Args;
use eql_core::ctp::{run_search, Algorithm, SearchConfig};
use eql_core::synth::Workload;
use serde::Serialize;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Args)]
pub struct BenchArgs {
    /// Directory written by `eql gen`.
    #[arg(long)]
    workload: PathBuf,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',', required = true)]
    algos: Vec<Algorithm>,
    #[arg(long, default_value_t = 3)]
    reps: u32,
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Write records here instead of standard output.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct BenchRecord {
    pub algo: &'static str,
    pub workload: String,
    pub m: usize,
    pub rep: u32,
    pub runtime_ms: f64,
    pub provenances_built: u64,
    pub results_found: u64,
    pub timed_out: bool,
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

pub fn run(a: &BenchArgs) -> Result<ExitCode> {
    let w = Workload::read_from(&a.workload).with_context(|| format!("reading workload {}", a.workload.display()))?;
    let id = w.manifest.spec().map(|s| s.id()).unwrap_or_else(|| {
        a.workload
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_else(|| "workload".into())
    });
    let (seeds, filters) = workload_ctp(&w)?;
    let out: Box<dyn Write> = match &a.csv {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout()),
    };
    let mut csv = csv::Writer::from_writer(out);
    let mut summary = Vec::new();
    for &algo in &a.algos {
        let mut cfg = SearchConfig::new(algo).with_filters(filters.clone());
        cfg.timeout_ms = a.timeout_ms;
        let mut times = Vec::new();
        for rep in 1..=a.reps.max(1) {
            let start = Instant::now();
            let outcome = run_search(&w.graph, &seeds, &cfg)?;
            let ms = start.elapsed().as_secs_f64() * 1000.0;
            times.push(ms);
            csv.serialize(BenchRecord {
                algo: algo.name(),
                workload: id.clone(),
                m: seeds.m(),
                rep,
                runtime_ms: (ms * 1000.0).round() / 1000.0,
                provenances_built: outcome.stats.provenances_built,
                results_found: outcome.stats.results_found,
                timed_out: outcome.stats.timed_out,
            })?;
        }
        let mean = times.iter().sum::<f64>() / times.len() as f64;
        summary.push(format!(
            "{:<8} {} median {:.3} ms, mean {:.3} ms over {} reps",
            algo.name(),
            id,
            median(&mut times),
            mean,
            times.len()
        ));
    }
    csv.flush()?;
    // Keep standard output pure CSV when records go there.
    for line in summary {
        if a.csv.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
