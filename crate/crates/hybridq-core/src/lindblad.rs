//! Lindblad master equation: Liouvillian construction, piecewise-constant evolution
//! and best-fidelity time search.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::linalg::{ComplexMatrix, I};
use crate::state::{state_fidelity, QuantumState};

/// Largest Hilbert-space dimension propagated with the exact interval exponential.
pub const EXACT_PROPAGATOR_MAX_DIM: usize = 16;

/// Collapse operator with a non-negative rate multiplying its dissipator.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladTerm {
    pub operator: ComplexMatrix,
    pub rate: f64,
}

impl LindbladTerm {
    pub fn new(operator: ComplexMatrix, rate: f64) -> Self {
        assert!(operator.is_square(), "collapse operator must be square");
        assert!(rate >= 0.0 && rate.is_finite(), "rate must be finite and non-negative");
        Self { operator, rate }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LindbladSet {
    pub terms: Vec<LindbladTerm>,
}

impl LindbladSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, operator: ComplexMatrix, rate: f64) {
        self.terms.push(LindbladTerm::new(operator, rate));
    }

    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(|t| t.rate == 0.0)
    }
}

/// Superoperator of ρ ↦ U ρ U†.
pub fn unitary_superop(u: &ComplexMatrix) -> ComplexMatrix {
    u.conj().kron(u)
}

/// Superoperator of ρ ↦ A ρ B.
pub fn sandwich_superop(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    b.transpose().kron(a)
}

/// −i[H, ·] in superoperator form.
pub fn hamiltonian_superop(h: &ComplexMatrix) -> ComplexMatrix {
    let n = h.rows();
    let id = ComplexMatrix::identity(n);
    (&id.kron(h) - &h.transpose().kron(&id)).scale(-I)
}

/// Dissipator A ρ A† − ½{A†A, ρ} without the rate.
pub fn dissipator_superop(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let id = ComplexMatrix::identity(n);
    let ada = a.adjoint_matmul(a);
    let mut out = a.conj().kron(a);
    out.axpy(C64::new(-0.5, 0.0), &id.kron(&ada));
    out.axpy(C64::new(-0.5, 0.0), &ada.transpose().kron(&id));
    out
}

/// Dissipative part Σ γ_k D[A_k] of the Liouvillian.
pub fn dissipator(lindblads: &LindbladSet, n: usize) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::zeros(n * n, n * n);
    for t in &lindblads.terms {
        if t.operator.rows() != n {
            return Err(Error::Dimension("collapse operator differs from Hamiltonian dimension"));
        }
        if t.rate != 0.0 {
            out.axpy(C64::new(t.rate, 0.0), &dissipator_superop(&t.operator));
        }
    }
    Ok(out)
}

/// Column-stacked Liouvillian −i[H,·] + Σ γ_k D[A_k].
pub fn liouvillian(h: &ComplexMatrix, lindblads: &LindbladSet) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::Dimension("Hamiltonian must be square"));
    }
    let mut l = dissipator(lindblads, h.rows())?;
    l.axpy(C64::new(1.0, 0.0), &hamiltonian_superop(h));
    Ok(l)
}

/// Applies a superoperator to a density matrix.
pub fn apply_superop(s: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let n = rho.rows();
    ComplexMatrix::unvec_cols(&s.matvec(&rho.vec_cols()), n, n)
}

/// Uniform time grid including both end points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub n_points: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 || !(t_end > t_start) || !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::InvalidArgument("time grid needs n_points >= 2 and t_end > t_start".into()));
        }
        Ok(Self { t_start, t_end, n_points })
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_points - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t_start + self.dt() * i as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.time(i)).collect()
    }
}

/// Piecewise-constant Hamiltonian: segment k is active from `starts[k]` until the next start.
#[derive(Clone, Debug)]
pub struct Schedule {
    segments: Vec<(f64, ComplexMatrix)>,
}

impl Schedule {
    pub fn constant(h: ComplexMatrix) -> Self {
        Self { segments: alloc::vec![(f64::NEG_INFINITY, h)] }
    }

    /// Segments must be given in increasing start time.
    pub fn piecewise(segments: Vec<(f64, ComplexMatrix)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument("empty schedule".into()));
        }
        if segments.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidArgument("schedule starts must increase".into()));
        }
        Ok(Self { segments })
    }

    fn index_at(&self, t: f64) -> usize {
        self.segments.iter().rposition(|(s, _)| *s <= t).unwrap_or(0)
    }

    pub fn at(&self, t: f64) -> &ComplexMatrix {
        &self.segments[self.index_at(t)].1
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<QuantumState>,
}

fn rk4_step(l: &ComplexMatrix, v: &[C64], dt: f64, substeps: usize) -> Vec<C64> {
    let h = dt / substeps as f64;
    let mut x = v.to_vec();
    let add = |a: &[C64], b: &[C64], s: f64| -> Vec<C64> { a.iter().zip(b).map(|(x, y)| x + y * s).collect() };
    for _ in 0..substeps {
        let k1 = l.matvec(&x);
        let k2 = l.matvec(&add(&x, &k1, h / 2.0));
        let k3 = l.matvec(&add(&x, &k2, h / 2.0));
        let k4 = l.matvec(&add(&x, &k3, h));
        for i in 0..x.len() {
            x[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
    }
    x
}

/// Evolves ρ₀ over the grid. Each interval uses the Hamiltonian active at its midpoint.
pub fn evolve(schedule: &Schedule, rho0: &QuantumState, lindblads: &LindbladSet, grid: &TimeGrid) -> Result<Trajectory> {
    let rho0 = rho0.to_density();
    let n = rho0.dim();
    let dims = rho0.dims().to_vec();
    let dt = grid.dt();
    let diss = dissipator(lindblads, n)?;
    let mut v = rho0.matrix().vec_cols();
    let mut times = Vec::with_capacity(grid.n_points);
    let mut states = Vec::with_capacity(grid.n_points);
    times.push(grid.t_start);
    states.push(rho0.clone());
    let mut cached: Option<(usize, ComplexMatrix)> = None;
    for i in 0..grid.n_points - 1 {
        let mid = grid.time(i) + 0.5 * dt;
        let seg = schedule.index_at(mid);
        let h = schedule.at(mid);
        if h.rows() != n {
            return Err(Error::Dimension("Hamiltonian differs from state dimension"));
        }
        if cached.as_ref().map_or(true, |(k, _)| *k != seg) {
            let mut l = hamiltonian_superop(h);
            l.axpy(C64::new(1.0, 0.0), &diss);
            let prop = if n <= EXACT_PROPAGATOR_MAX_DIM {
                matrix_exponential(&l.scale_re(dt))?
            } else {
                l
            };
            cached = Some((seg, prop));
        }
        let prop = &cached.as_ref().unwrap().1;
        v = if n <= EXACT_PROPAGATOR_MAX_DIM {
            prop.matvec(&v)
        } else {
            let substeps = ((prop.norm_1() * dt) / 0.1).ceil().max(1.0) as usize;
            rk4_step(prop, &v, dt, substeps)
        };
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("evolution step"));
        }
        times.push(grid.time(i + 1));
        states.push(QuantumState::density_unchecked(&dims, ComplexMatrix::unvec_cols(&v, n, n)));
    }
    Ok(Trajectory { times, states })
}

/// Time and value of the best fidelity against `target`; ties resolve to the earliest time.
pub fn find_optimal_time(traj: &Trajectory, target: &QuantumState) -> Result<(f64, f64)> {
    if traj.states.is_empty() {
        return Err(Error::InvalidArgument("empty trajectory".into()));
    }
    let mut best = (traj.times[0], -1.0);
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let f = state_fidelity(target, s)?;
        if f > best.1 {
            best = (*t, f);
        }
    }
    Ok(best)
}

/// Fidelity of each stored state against `target`.
pub fn fidelity_series(traj: &Trajectory, target: &QuantumState) -> Result<Vec<f64>> {
    traj.states.iter().map(|s| state_fidelity(target, s)).collect()
}
