//! Noiseless phase-estimation checks against the analytic expectations.

use std::f64::consts::PI;
use std::fmt::Write as _;

use hybridq_core::dpe::{bit_string, run_phase_estimation};

use crate::error::Result;

pub const EXACT_TOL: f64 = 1e-9;

/// 4/π², the lower bound on each of the two outcomes nearest a phase halfway between grid points.
pub fn neighbor_bound() -> f64 {
    4.0 / (PI * PI) - 1e-6
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub counting_qubits: usize,
    pub phase: f64,
    /// (outcome, probability, required minimum)
    pub expectations: Vec<(usize, f64, f64)>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// TSV `check t phase outcome probability minimum result`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("check\tt\tphase\toutcome\tprobability\tminimum\tresult\n");
        for c in &self.checks {
            for &(a, p, min) in &c.expectations {
                let verdict = if p >= min { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{:.12}\t{:.12}\t{verdict}",
                    c.name,
                    c.counting_qubits,
                    c.phase,
                    bit_string(a, c.counting_qubits),
                    p,
                    min
                );
            }
        }
        out
    }
}

fn check(name: &str, t: usize, phase: f64, expected: &[(usize, f64)], seed: u64) -> Result<Check> {
    let pe = run_phase_estimation(phase, t, None, 1, seed)?;
    let expectations: Vec<_> = expected.iter().map(|&(a, min)| (a, pe.probability(a), min)).collect();
    let passed = expectations.iter().all(|&(_, p, min)| p >= min);
    Ok(Check { name: name.into(), counting_qubits: t, phase, expectations, passed })
}

/// t=2 exact (φ=1/4), t=2 halfway (φ=1/8), t=3 exact (φ=5/8) and t=4 exact (φ=3/16).
pub fn validate_noiseless(seed: u64) -> Result<ValidationReport> {
    let exact = 1.0 - EXACT_TOL;
    Ok(ValidationReport {
        checks: vec![
            check("t2_exact", 2, 0.25, &[(0b01, exact)], seed)?,
            check("t2_halfway", 2, 0.125, &[(0b00, neighbor_bound()), (0b01, neighbor_bound())], seed)?,
            check("t3_exact", 3, 0.625, &[(0b101, exact)], seed)?,
            check("t4_exact", 4, 3.0 / 16.0, &[(0b0011, exact)], seed)?,
        ],
    })
}
