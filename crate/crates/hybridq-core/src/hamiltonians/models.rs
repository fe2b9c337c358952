//! Drift, control and noise models used for pulse optimization.
//!
//! Frequencies and rates are rescaled from rad/ns to the optimizer time unit
//! (`time_unit_ns`, default 1 ps).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use super::flux::{flux_lindblads, FluxParams};
use super::rydberg::{rydberg_lindblads, RydbergParams};
use super::TAU;
use crate::error::{Error, Result};
use crate::lindblad::LindbladSet;
use crate::linalg::ComplexMatrix;
use crate::ops::{embed, identity, sigma_x, sigma_y, sigma_z};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GrapeSystem {
    Rydberg,
    Flux,
}

impl GrapeSystem {
    /// Gate-dictionary suffix.
    pub fn tag(self) -> &'static str {
        match self {
            GrapeSystem::Rydberg => "ryd",
            GrapeSystem::Flux => "flux",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub rydberg: RydbergParams,
    pub flux: FluxParams,
    /// Optimizer time unit in ns.
    pub time_unit_ns: f64,
    /// Include collapse operators.
    pub noise: bool,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { rydberg: RydbergParams::default(), flux: FluxParams::default(), time_unit_ns: 1e-3, noise: true }
    }
}

/// Drift, collapse operators, control Hamiltonians and the initial propagator.
#[derive(Clone, Debug)]
pub struct GrapeModel {
    pub drift: ComplexMatrix,
    pub lindblads: LindbladSet,
    pub controls: Vec<ComplexMatrix>,
    pub initial: ComplexMatrix,
}

fn controls(n_qubits: usize) -> Vec<ComplexMatrix> {
    let paulis = [sigma_x(), sigma_y(), sigma_z()];
    if n_qubits == 1 {
        return paulis.to_vec();
    }
    let dims = [2, 2];
    let mut out: Vec<ComplexMatrix> = Vec::with_capacity(7);
    for k in 0..2 {
        for p in &paulis {
            out.push(embed(p, k, &dims));
        }
    }
    out.push(paulis.iter().map(|p| p.kron(p)).fold(ComplexMatrix::zeros(4, 4), |a, b| a + b));
    out
}

fn rydberg_drift(p: &RydbergParams, n_qubits: usize) -> ComplexMatrix {
    let om = C64::new(p.rabi, 0.0);
    if n_qubits == 1 {
        let mut h = sigma_z();
        h.axpy(om, &(sigma_x() + sigma_y()));
        h
    } else {
        let mut h = sigma_z().kron(&sigma_z());
        h.axpy(om, &(sigma_x().kron(&sigma_x()) + sigma_y().kron(&sigma_y())));
        h.axpy(C64::new(p.blockade_shift(), 0.0), &identity(4));
        h
    }
}

fn flux_local_drift(p: &FluxParams) -> ComplexMatrix {
    let mut h = sigma_z().scale_re(-0.5 * TAU * p.eps_bias);
    h.axpy(C64::new(-0.5 * TAU * p.delta_tunnel, 0.0), &sigma_x());
    h
}

fn flux_drift(p: &FluxParams, n_qubits: usize) -> ComplexMatrix {
    let local = flux_local_drift(p);
    if n_qubits == 1 {
        return local;
    }
    let dims = [2, 2];
    let mut h = embed(&local, 0, &dims) + embed(&local, 1, &dims);
    h.axpy(C64::new(TAU * p.g_res, 0.0), &sigma_y().kron(&sigma_y()));
    h
}

fn flux_noise(p: &FluxParams, n_qubits: usize) -> Result<LindbladSet> {
    let single = flux_lindblads(p)?;
    if n_qubits == 1 {
        return Ok(single);
    }
    let mut set = LindbladSet::new();
    for k in 0..n_qubits {
        for t in &single.terms {
            set.push(embed(&t.operator, k, &vec![2; n_qubits]), t.rate);
        }
    }
    Ok(set)
}

/// Optimization model for one or two qubits of the given hardware.
pub fn grape_problem(system: GrapeSystem, n_qubits: usize, params: &ModelParams) -> Result<GrapeModel> {
    if !(1..=2).contains(&n_qubits) {
        return Err(Error::InvalidArgument(alloc::format!("unsupported qubit count {n_qubits}")));
    }
    if !(params.time_unit_ns > 0.0) {
        return Err(Error::InvalidArgument("time unit must be positive".into()));
    }
    let (drift, noise) = match system {
        GrapeSystem::Rydberg => (rydberg_drift(&params.rydberg, n_qubits), rydberg_lindblads(&params.rydberg, n_qubits)?),
        GrapeSystem::Flux => (flux_drift(&params.flux, n_qubits), flux_noise(&params.flux, n_qubits)?),
    };
    let s = params.time_unit_ns;
    let mut lindblads = LindbladSet::new();
    if params.noise {
        for t in noise.terms {
            lindblads.push(t.operator, t.rate * s);
        }
    }
    let d = 1usize << n_qubits;
    Ok(GrapeModel { drift: drift.scale_re(s), lindblads, controls: controls(n_qubits), initial: identity(d) })
}
