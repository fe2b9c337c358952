//! JSON record of one optimized gate.

use std::path::Path;

use serde::{Deserialize, Serialize};

use hybridq_core::grape::{GradientMode, GrapeOptions, GrapeResult};
use hybridq_core::{ComplexMatrix, C64};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// Row-major real parts.
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let mut re = Vec::with_capacity(m.rows() * m.cols());
        let mut im = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for z in m.row(i) {
                re.push(z.re);
                im.push(z.im);
            }
        }
        Self { rows: m.rows(), cols: m.cols(), re, im }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.rows * self.cols;
        if self.re.len() != n || self.im.len() != n {
            return Err(Error::GateFile("matrix entry count does not match its shape".into()));
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| C64::new(self.re[i * self.cols + j], self.im[i * self.cols + j])))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsJson {
    pub n_ts: usize,
    pub evo_time: f64,
    pub fid_err_targ: f64,
    pub max_iter: usize,
    pub init_pulse: String,
    pub init_amplitude: f64,
    pub amplitude_bound: Option<f64>,
    pub gradient: String,
    pub seed: u64,
    pub zeta: f64,
    pub noise: bool,
}

impl OptionsJson {
    pub fn new(o: &GrapeOptions, zeta: f64, noise: bool) -> Self {
        Self {
            n_ts: o.n_ts,
            evo_time: o.evo_time,
            fid_err_targ: o.fid_err_targ,
            max_iter: o.max_iter,
            init_pulse: o.init_pulse.name().into(),
            init_amplitude: o.init_amplitude,
            amplitude_bound: o.amplitude_bound,
            gradient: match o.gradient {
                GradientMode::Exact => "exact".into(),
                GradientMode::FirstOrder => "first-order".into(),
            },
            seed: o.seed,
            zeta,
            noise,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateFile {
    pub gate: String,
    pub system: String,
    pub n_qubits: usize,
    /// Superoperator of the optimized map, column-stacking convention.
    pub map: MatrixJson,
    pub fidelity_error: f64,
    pub iterations: usize,
    pub terminated_by: String,
    pub options: OptionsJson,
}

impl GateFile {
    pub fn new(gate: &str, system: &str, n_qubits: usize, result: &GrapeResult, options: OptionsJson) -> Self {
        Self {
            gate: gate.into(),
            system: system.into(),
            n_qubits,
            map: MatrixJson::from_matrix(&result.final_map),
            fidelity_error: result.fidelity_error,
            iterations: result.iterations_used,
            terminated_by: format!("{:?}", result.terminated_by),
            options,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(|e| Error::GateFile(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::GateFile(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
