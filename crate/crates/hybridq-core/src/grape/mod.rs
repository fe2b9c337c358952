//! Open-system GRAPE: piecewise-constant controls optimized with L-BFGS.
//!
//! The achieved map M = S_N ⋯ S_1 X₀ with S_l = exp(Δt·L_l) is compared with the target
//! superoperator C through f = Re Tr(C†M)/Tr(C†C). The optimizer minimizes ε = 1 − f.

pub mod lbfgs;
pub mod pulse;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;

pub use lbfgs::{lbfgs_minimize, wolfe_line_search, LbfgsOptions, LbfgsResult, LineSearchStep, Termination, WolfeParams};
pub use pulse::{initial_pulse, ControlPulse, InitPulse};

use crate::circuits::{gate_matrix, GateDictionary};
use crate::error::{Error, Result};
use crate::expm::{expm_frechet, matrix_exponential};
use crate::hamiltonians::models::{grape_problem, GrapeModel, GrapeSystem, ModelParams};
use crate::lindblad::{dissipator, hamiltonian_superop, unitary_superop, LindbladSet};
use crate::linalg::ComplexMatrix;

#[derive(Clone, Debug)]
pub struct GrapeProblem {
    pub drift: ComplexMatrix,
    pub controls: Vec<ComplexMatrix>,
    pub lindblads: LindbladSet,
    /// Initial map X₀ (superoperator).
    pub initial: ComplexMatrix,
    /// Target map C (superoperator).
    pub target: ComplexMatrix,
    drift_generator: ComplexMatrix,
    control_generators: Vec<ComplexMatrix>,
    target_norm: f64,
}

impl GrapeProblem {
    /// Problem with identity initial map and target superoperator conj(U) ⊗ U.
    pub fn new(drift: ComplexMatrix, controls: Vec<ComplexMatrix>, lindblads: LindbladSet, target_unitary: &ComplexMatrix) -> Result<Self> {
        let d = drift.rows();
        if !drift.is_square() || target_unitary.rows() != d || controls.iter().any(|c| c.rows() != d || !c.is_square()) {
            return Err(Error::Dimension("GRAPE operators must share one dimension"));
        }
        let target = unitary_superop(target_unitary);
        Self::with_maps(drift, controls, lindblads, ComplexMatrix::identity(d * d), target)
    }

    pub fn with_maps(
        drift: ComplexMatrix,
        controls: Vec<ComplexMatrix>,
        lindblads: LindbladSet,
        initial: ComplexMatrix,
        target: ComplexMatrix,
    ) -> Result<Self> {
        let d = drift.rows();
        if initial.rows() != d * d || target.rows() != d * d || !initial.is_square() || !target.is_square() {
            return Err(Error::Dimension("GRAPE maps must be superoperators of the drift dimension"));
        }
        let mut drift_generator = dissipator(&lindblads, d)?;
        drift_generator.axpy(C64::new(1.0, 0.0), &hamiltonian_superop(&drift));
        let control_generators = controls.iter().map(hamiltonian_superop).collect();
        let target_norm = target.inner(&target).re;
        if !(target_norm > 0.0) {
            return Err(Error::InvalidArgument("target map is zero".into()));
        }
        Ok(Self { drift, controls, lindblads, initial, target, drift_generator, control_generators, target_norm })
    }

    pub fn from_model(model: &GrapeModel, target_unitary: &ComplexMatrix) -> Result<Self> {
        let d = model.drift.rows();
        let mut p = Self::new(model.drift.clone(), model.controls.clone(), model.lindblads.clone(), target_unitary)?;
        p.initial = unitary_superop(&model.initial);
        if p.initial.rows() != d * d {
            return Err(Error::Dimension("initial propagator"));
        }
        Ok(p)
    }

    pub fn n_controls(&self) -> usize {
        self.controls.len()
    }

    /// Generator Δt·L_l of one slice.
    fn slice_generator(&self, amps: &[f64], dt: f64) -> ComplexMatrix {
        let mut l = self.drift_generator.clone();
        for (u, g) in amps.iter().zip(&self.control_generators) {
            l.axpy(C64::new(*u, 0.0), g);
        }
        l.scale_re(dt)
    }

    /// Normalized overlap f of a map with the target.
    pub fn fidelity(&self, map: &ComplexMatrix) -> f64 {
        self.target.inner(map).re / self.target_norm
    }
}

/// exp{Δt·(L_drift + Σ u_k L_k)} for one slice.
pub fn step_propagator(problem: &GrapeProblem, amps: &[f64], dt: f64) -> Result<ComplexMatrix> {
    if amps.len() != problem.n_controls() {
        return Err(Error::Dimension("slice amplitude count"));
    }
    matrix_exponential(&problem.slice_generator(amps, dt))
}

fn check_pulse(problem: &GrapeProblem, pulse: &ControlPulse) -> Result<()> {
    if pulse.n_controls != problem.n_controls() {
        return Err(Error::Dimension("pulse controls differ from problem controls"));
    }
    Ok(())
}

/// Final map S_N ⋯ S_1 X₀.
pub fn evolve_map(problem: &GrapeProblem, pulse: &ControlPulse) -> Result<ComplexMatrix> {
    check_pulse(problem, pulse)?;
    let mut m = problem.initial.clone();
    for l in 0..pulse.n_slices {
        m = step_propagator(problem, pulse.slice(l), pulse.dt)?.matmul(&m);
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradientMode {
    /// Exact derivative of each slice exponential.
    Exact,
    /// −iΔt commutator approximation.
    FirstOrder,
}

/// Returns f and ∂f/∂u_k(l), the latter slice-major like [`ControlPulse::amplitudes`].
pub fn performance_and_gradient(problem: &GrapeProblem, pulse: &ControlPulse, mode: GradientMode) -> Result<(f64, Vec<f64>)> {
    check_pulse(problem, pulse)?;
    let n = pulse.n_slices;
    let m = pulse.n_controls;
    let dt = pulse.dt;
    let mut gens = Vec::with_capacity(n);
    let mut props = Vec::with_capacity(n);
    let mut fwd = Vec::with_capacity(n + 1);
    fwd.push(problem.initial.clone());
    for l in 0..n {
        let a = problem.slice_generator(pulse.slice(l), dt);
        let s = matrix_exponential(&a)?;
        fwd.push(s.matmul(&fwd[l]));
        props.push(s);
        gens.push(a);
    }
    let f = problem.fidelity(&fwd[n]);
    let norm = problem.target_norm;
    let mut grad = alloc::vec![0.0; n * m];
    let mut lambda = problem.target.clone();
    for l in (0..n).rev() {
        match mode {
            GradientMode::Exact => {
                let g = lambda.matmul(&fwd[l].adjoint());
                let (_, w) = expm_frechet(&gens[l].adjoint(), &g)?;
                for k in 0..m {
                    grad[l * m + k] = dt * w.inner(&problem.control_generators[k]).re / norm;
                }
            }
            GradientMode::FirstOrder => {
                for k in 0..m {
                    let d = problem.control_generators[k].matmul(&fwd[l + 1]);
                    grad[l * m + k] = dt * lambda.inner(&d).re / norm;
                }
            }
        }
        lambda = props[l].adjoint_matmul(&lambda);
    }
    if !f.is_finite() || grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("GRAPE objective"));
    }
    Ok((f, grad))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrapeOptions {
    pub n_ts: usize,
    /// Total evolution time in model time units.
    pub evo_time: f64,
    pub fid_err_targ: f64,
    pub max_iter: usize,
    /// Seconds.
    pub max_wall_time: f64,
    pub init_pulse: InitPulse,
    /// Scale of the initial amplitudes in model units.
    pub init_amplitude: f64,
    /// Optional symmetric bound |u| ≤ b enforced through u = b·tanh(v).
    pub amplitude_bound: Option<f64>,
    pub gradient: GradientMode,
    pub seed: u64,
}

impl Default for GrapeOptions {
    fn default() -> Self {
        Self {
            n_ts: 50,
            evo_time: 50.0,
            fid_err_targ: 1e-10,
            max_iter: 500,
            max_wall_time: 200.0,
            init_pulse: InitPulse::Rnd,
            init_amplitude: core::f64::consts::TAU * 0.1,
            amplitude_bound: None,
            gradient: GradientMode::Exact,
            seed: 0,
        }
    }
}

impl GrapeOptions {
    pub fn validate(&self) -> Result<()> {
        if self.n_ts < 2 {
            return Err(Error::InvalidArgument("n_ts must be at least 2".into()));
        }
        if !(self.evo_time > 0.0) {
            return Err(Error::InvalidArgument("evolution time must be positive".into()));
        }
        if !(self.fid_err_targ > 0.0 && self.fid_err_targ <= 1.0) {
            return Err(Error::InvalidArgument("fidelity error target must lie in (0, 1]".into()));
        }
        if let Some(b) = self.amplitude_bound {
            if !(b > 0.0) {
                return Err(Error::InvalidArgument("amplitude bound must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GrapeResult {
    pub final_map: ComplexMatrix,
    pub fidelity_error: f64,
    pub iterations_used: usize,
    pub wall_time_used: f64,
    pub terminated_by: Termination,
    pub pulse: ControlPulse,
    /// ε after each accepted iteration.
    pub history: Vec<f64>,
}

/// Optimizes the pulse for `problem`. `clock` returns seconds; without it the wall-time cap is inactive.
pub fn optimize_pulse(problem: &GrapeProblem, options: &GrapeOptions, clock: Option<&dyn Fn() -> f64>) -> Result<GrapeResult> {
    options.validate()?;
    let m = problem.n_controls();
    let dt = options.evo_time / options.n_ts as f64;
    let init = initial_pulse(options.init_pulse, options.n_ts, m, dt, options.init_amplitude, options.seed);
    let bound = options.amplitude_bound;
    let to_amps = |v: &[f64]| -> Vec<f64> {
        match bound {
            Some(b) => v.iter().map(|x| b * x.tanh()).collect(),
            None => v.to_vec(),
        }
    };
    let x0: Vec<f64> = match bound {
        Some(b) => init.amplitudes.iter().map(|u| (u / b).clamp(-0.999_999, 0.999_999).atanh()).collect(),
        None => init.amplitudes.clone(),
    };
    let mode = options.gradient;
    let mut objective = |v: &[f64]| -> Result<(f64, Vec<f64>)> {
        let p = ControlPulse { n_slices: options.n_ts, n_controls: m, dt, amplitudes: to_amps(v) };
        let (f, g) = performance_and_gradient(problem, &p, mode)?;
        let grad = match bound {
            Some(b) => g.iter().zip(v).map(|(gi, x)| -gi * b * (1.0 - x.tanh().powi(2))).collect(),
            None => g.iter().map(|gi| -gi).collect(),
        };
        Ok((1.0 - f, grad))
    };
    let start = clock.map(|c| c());
    let lopts = LbfgsOptions {
        max_iter: options.max_iter,
        f_target: options.fid_err_targ,
        max_wall_time: options.max_wall_time,
        grad_tol: 1e-14,
        ..LbfgsOptions::default()
    };
    let res = lbfgs_minimize(&mut objective, &x0, &lopts, clock)?;
    let pulse = ControlPulse { n_slices: options.n_ts, n_controls: m, dt, amplitudes: to_amps(&res.x) };
    let final_map = evolve_map(problem, &pulse)?;
    let fidelity_error = (1.0 - problem.fidelity(&final_map)).max(0.0);
    let wall_time_used = match (clock, start) {
        (Some(c), Some(s)) => c() - s,
        _ => 0.0,
    };
    Ok(GrapeResult {
        final_map,
        fidelity_error,
        iterations_used: res.iterations,
        wall_time_used,
        terminated_by: res.termination,
        pulse,
        history: res.history,
    })
}

/// One entry of the optimized gate dictionary.
#[derive(Clone, Debug)]
pub struct GateJob {
    pub key: String,
    pub system: GrapeSystem,
    pub n_qubits: usize,
    pub gate: &'static str,
}

impl GateJob {
    pub fn target(&self) -> ComplexMatrix {
        gate_matrix(self.gate, &[]).expect("dictionary gates are parameter-free")
    }
}

/// The eight jobs {snot, x, z} × {ryd, flux} and cnot × {ryd, flux}, in a fixed order.
pub fn dictionary_jobs() -> Vec<GateJob> {
    let mut out = Vec::with_capacity(8);
    for system in [GrapeSystem::Rydberg, GrapeSystem::Flux] {
        for (base, gate, n) in [("snot", "H", 1), ("x", "X", 1), ("z", "Z", 1), ("cnot", "CNOT", 2)] {
            out.push(GateJob { key: alloc::format!("{base}_{}", system.tag()), system, n_qubits: n, gate });
        }
    }
    out
}

/// Seed used for job `index` of a dictionary build.
pub fn job_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn optimize_gate(job: &GateJob, params: &ModelParams, options: &GrapeOptions, clock: Option<&dyn Fn() -> f64>) -> Result<GrapeResult> {
    let model = grape_problem(job.system, job.n_qubits, params)?;
    let problem = GrapeProblem::from_model(&model, &job.target())?;
    optimize_pulse(&problem, options, clock)
}

/// Optimized maps keyed by `gate_system`, together with the per-entry results.
pub fn build_gate_dictionary(
    options: &GrapeOptions,
    params: &ModelParams,
    clock: Option<&dyn Fn() -> f64>,
) -> Result<(GateDictionary, BTreeMap<String, GrapeResult>)> {
    let mut dict = GateDictionary::new();
    let mut results = BTreeMap::new();
    for (i, job) in dictionary_jobs().iter().enumerate() {
        let opts = GrapeOptions { seed: job_seed(options.seed, i), ..options.clone() };
        let r = optimize_gate(job, params, &opts, clock)?;
        dict.insert(job.key.to_string(), r.final_map.clone());
        results.insert(job.key.clone(), r);
    }
    Ok((dict, results))
}
