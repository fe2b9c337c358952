//! (nts, iters) sweeps: one optimized dictionary per cell, then distributed phase estimation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use hybridq_core::circuits::GateDictionary;
use hybridq_core::dpe::run_phase_estimation;
use hybridq_core::grape::{dictionary_jobs, job_seed, optimize_gate, GrapeOptions, GrapeResult};
use hybridq_core::hamiltonians::ModelParams;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};

pub const ROW_SEED_STRIDE: u64 = 10_007;

/// Same result as the sequential core build, with the eight optimizations run on the pool.
pub fn build_dictionary_parallel(
    options: &GrapeOptions,
    params: &ModelParams,
) -> Result<(GateDictionary, BTreeMap<String, GrapeResult>)> {
    let jobs = dictionary_jobs();
    let results: Vec<_> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, job)| {
            let opts = GrapeOptions { seed: job_seed(options.seed, i), ..options.clone() };
            optimize_gate(job, params, &opts, None)
        })
        .collect();
    let mut dict = GateDictionary::new();
    let mut out = BTreeMap::new();
    for (job, r) in jobs.iter().zip(results) {
        let r = r?;
        dict.insert(job.key.clone(), r.final_map.clone());
        out.insert(job.key.clone(), r);
    }
    Ok((dict, out))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub zeta: f64,
    pub nts: usize,
    pub iters: usize,
    /// None when the row failed.
    pub mean_probability_of_target: Option<f64>,
    pub per_shot_outcomes: Vec<String>,
    pub wall_time: f64,
    pub error: Option<String>,
}

pub fn row_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add(index as u64 * ROW_SEED_STRIDE)
}

/// Cells in row-major order over (nts, iters).
pub fn sweep_cells(config: &ExperimentConfig) -> Vec<(usize, usize)> {
    config.nts_list.iter().flat_map(|&n| config.iters_list.iter().map(move |&i| (n, i))).collect()
}

pub fn run_cell(config: &ExperimentConfig, nts: usize, iters: usize, seed: u64) -> Result<(f64, Vec<String>)> {
    let options = GrapeOptions { n_ts: nts, max_iter: iters, seed, ..config.grape.clone() };
    let (dict, _) = build_dictionary_parallel(&options, &config.model)?;
    let pe = run_phase_estimation(config.phase, config.counting_qubits, Some(&dict), config.shots, seed)?;
    let outcomes = pe.records.iter().map(|r| r.outcome.clone()).collect();
    Ok((pe.probability(config.target_outcome()), outcomes))
}

/// Runs every cell. Failures are recorded per row and the sweep continues.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let rows = sweep_cells(config)
        .into_par_iter()
        .enumerate()
        .map(|(idx, (nts, iters))| {
            let start = Instant::now();
            let res = run_cell(config, nts, iters, row_seed(config.seed, idx));
            let wall_time = start.elapsed().as_secs_f64();
            let (p, outcomes, error) = match res {
                Ok((p, o)) => (Some(p), o, None),
                Err(e) => (None, Vec::new(), Some(e.to_string())),
            };
            ResultRow { zeta: config.zeta, nts, iters, mean_probability_of_target: p, per_shot_outcomes: outcomes, wall_time, error }
        })
        .collect();
    Ok(rows)
}

/// CSV `zeta,nts,iters,mean_probability,outcomes,status`. Wall times are kept out so that
/// reruns are byte-identical.
pub fn rows_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Csv(e.to_string());
    w.write_record(["zeta", "nts", "iters", "mean_probability", "outcomes", "status"]).map_err(io)?;
    for r in rows {
        let p = r.mean_probability_of_target.map(|p| format!("{p:.12}")).unwrap_or_default();
        let status = r.error.clone().unwrap_or_else(|| "ok".into());
        w.write_record([r.zeta.to_string(), r.nts.to_string(), r.iters.to_string(), p, r.per_shot_outcomes.join(";"), status])
            .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// TSV `nts iters wall_time_s`.
pub fn timing_tsv(rows: &[ResultRow]) -> String {
    let mut out = String::from("nts\titers\twall_time_s\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{}\t{:.3}", r.nts, r.iters, r.wall_time);
    }
    out
}

/// nts × iters matrix of probabilities with a header row of iteration counts and a header
/// column of slice counts. Missing or failed cells render as `NaN`.
pub fn emit_plot_data(rows: &[ResultRow]) -> Result<String> {
    let nts: BTreeSet<usize> = rows.iter().map(|r| r.nts).collect();
    let iters: BTreeSet<usize> = rows.iter().map(|r| r.iters).collect();
    let mut cells = BTreeMap::new();
    for r in rows {
        if cells.insert((r.nts, r.iters), r.mean_probability_of_target).is_some() {
            return Err(Error::Grid(format!("duplicate cell nts={} iters={}", r.nts, r.iters)));
        }
        if rows[0].zeta.to_bits() != r.zeta.to_bits() {
            return Err(Error::Grid("rows mix different ζ values".into()));
        }
    }
    let mut out = String::from("nts\\iters");
    for i in &iters {
        let _ = write!(out, "\t{i}");
    }
    out.push('\n');
    for n in &nts {
        let _ = write!(out, "{n}");
        for i in &iters {
            match cells.get(&(*n, *i)).copied().flatten() {
                Some(p) => {
                    let _ = write!(out, "\t{p:.6}");
                }
                None => out.push_str("\tNaN"),
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Largest mean probability over successful rows.
pub fn best_probability(rows: &[ResultRow]) -> Option<f64> {
    rows.iter().filter_map(|r| r.mean_probability_of_target).fold(None, |acc, p| Some(acc.map_or(p, |a: f64| a.max(p))))
}
