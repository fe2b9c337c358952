//! Driven Rydberg atoms, pair interactions and the blockade CZ gate.
//!
//! Single-atom basis: index 0 is the ground state |g⟩, index 1 the Rydberg state |r⟩.
//! For the three-level blockade gate the basis is {|0⟩, |1⟩, |r⟩}.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;

use super::TAU;
use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::lindblad::LindbladSet;
use crate::linalg::{ComplexMatrix, ONE};
use crate::ops::{embed, projector, sigma_x, sigma_y};
use crate::state::QuantumState;

#[derive(Clone, Debug, PartialEq)]
pub struct RydbergParams {
    /// Rabi frequency Ω (rad/ns).
    pub rabi: f64,
    /// Laser detuning δ (rad/ns).
    pub detuning: f64,
    /// Laser phase (rad).
    pub phase: f64,
    /// Dipolar coefficient C₃ (GHz·μm³).
    pub c3: f64,
    /// Van der Waals coefficient C₆ (GHz·μm⁶).
    pub c6: f64,
    /// Interatomic distance (μm).
    pub distance: f64,
    /// Dephasing rate Γ on |r⟩⟨r| (rad/ns). Overridden by the Langevin pair when both are set.
    pub dephasing: f64,
    /// Spontaneous decay rate γ_e of |r⟩ (1/ns).
    pub decay: f64,
    /// Inverse correlation time γ of laser phase noise (1/ns).
    pub langevin_gamma: Option<f64>,
    /// Diffusion constant D of laser phase noise (rad²/ns).
    pub langevin_diffusion: Option<f64>,
}

impl Default for RydbergParams {
    fn default() -> Self {
        Self {
            rabi: TAU * 6.8,
            detuning: 0.0,
            phase: 0.0,
            c3: 32.45,
            c6: 801.98,
            distance: 3.5,
            dephasing: TAU * 0.47,
            decay: 1.0 / 375_000.0,
            langevin_gamma: None,
            langevin_diffusion: None,
        }
    }
}

impl RydbergParams {
    /// Van der Waals shift C₆/R⁶ of |rr⟩.
    pub fn blockade_shift(&self) -> f64 {
        self.c6 / self.distance.powi(6)
    }

    /// Γ = 2D/γ² when the Langevin parameters are set, otherwise the direct dephasing rate.
    pub fn effective_dephasing(&self) -> f64 {
        match (self.langevin_diffusion, self.langevin_gamma) {
            (Some(d), Some(g)) if g > 0.0 => 2.0 * d / (g * g),
            _ => self.dephasing,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [self.dephasing, self.decay];
        if rates.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::InvalidArgument("Rydberg rates must be finite and non-negative".into()));
        }
        if !(self.distance > 0.0) {
            return Err(Error::InvalidArgument("interatomic distance must be positive".into()));
        }
        Ok(())
    }
}

fn single_atom(p: &RydbergParams) -> ComplexMatrix {
    let (s, c) = p.phase.sin_cos();
    let mut h = sigma_x().scale_re(0.5 * p.rabi * c);
    h.axpy(C64::new(0.5 * p.rabi * s, 0.0), &sigma_y());
    h.axpy(C64::new(-p.detuning, 0.0), &projector(2, 1, 1));
    h
}

/// Σᵢ Hᵢ + (C₆/R⁶) n₁n₂ for one or two atoms.
pub fn rydberg_hamiltonian(p: &RydbergParams, n_atoms: usize) -> Result<ComplexMatrix> {
    p.validate()?;
    let h1 = single_atom(p);
    match n_atoms {
        1 => Ok(h1),
        2 => {
            let dims = [2, 2];
            let n = projector(2, 1, 1);
            let mut h = embed(&h1, 0, &dims) + embed(&h1, 1, &dims);
            h.axpy(C64::new(p.blockade_shift(), 0.0), &n.kron(&n));
            Ok(h)
        }
        _ => Err(Error::InvalidArgument(alloc::format!("unsupported atom count {n_atoms}"))),
    }
}

/// Eigenvalues (E₊, E₋) of the pair Hamiltonian [[0, V], [V, Δ_F]].
pub fn rydberg_pair_eigenenergies(defect: f64, coupling: f64) -> (f64, f64) {
    let r = 0.5 * (defect * defect + 4.0 * coupling * coupling).sqrt();
    (0.5 * defect + r, 0.5 * defect - r)
}

/// R_vdW = |C₆/Δ_F|^{1/6}.
pub fn vdw_crossover_radius(c6: f64, defect: f64) -> Result<f64> {
    if defect == 0.0 {
        return Err(Error::InvalidArgument("Förster defect must be non-zero".into()));
    }
    Ok((c6 / defect).abs().powf(1.0 / 6.0))
}

/// Per-atom dephasing on |r⟩⟨r| and decay |g⟩⟨r|.
pub fn rydberg_lindblads(p: &RydbergParams, n_atoms: usize) -> Result<LindbladSet> {
    p.validate()?;
    if !(1..=2).contains(&n_atoms) {
        return Err(Error::InvalidArgument(alloc::format!("unsupported atom count {n_atoms}")));
    }
    let dims: Vec<usize> = alloc::vec![2; n_atoms];
    let gamma = p.effective_dephasing();
    let mut set = LindbladSet::new();
    for k in 0..n_atoms {
        if gamma > 0.0 {
            set.push(embed(&projector(2, 1, 1), k, &dims), gamma);
        }
        if p.decay > 0.0 {
            set.push(embed(&projector(2, 0, 1), k, &dims), p.decay);
        }
    }
    Ok(set)
}

const R: usize = 2;

fn drive_0r(atom: usize, rabi: f64) -> ComplexMatrix {
    let mut x = ComplexMatrix::zeros(3, 3);
    x[(0, R)] = C64::new(0.5 * rabi, 0.0);
    x[(R, 0)] = C64::new(0.5 * rabi, 0.0);
    embed(&x, atom, &[3, 3])
}

/// Nine-dimensional unitary of the π, 2π, π pulse sequence on two three-level atoms.
/// Atom 0 is the control.
pub fn blockade_cz_unitary(rabi: f64, blockade: f64) -> Result<ComplexMatrix> {
    if !(rabi > 0.0) {
        return Err(Error::InvalidArgument("Rabi frequency must be positive".into()));
    }
    let nr = projector(3, R, R);
    let v = nr.kron(&nr).scale_re(blockade);
    let pi = core::f64::consts::PI;
    let pulse = |atom: usize, area: f64| -> Result<ComplexMatrix> {
        let h = drive_0r(atom, rabi) + v.clone();
        matrix_exponential(&h.scale(C64::new(0.0, -area / rabi)))
    };
    let u1 = pulse(0, pi)?;
    let u2 = pulse(1, 2.0 * pi)?;
    Ok(u1.matmul(&u2).matmul(&u1))
}

/// Restriction of the blockade sequence to the {0, 1}⊗{0, 1} subspace.
pub fn cz_subspace_map(rabi: f64, blockade: f64) -> Result<ComplexMatrix> {
    let u = blockade_cz_unitary(rabi, blockade)?;
    let idx = [0, 1, 3, 4];
    Ok(ComplexMatrix::from_fn(4, 4, |i, j| u[(idx[i], idx[j])]))
}

/// Applies the blockade CZ sequence to a state of two three-level atoms.
pub fn simulate_blockade_cz(state: &QuantumState, rabi: f64, blockade: f64) -> Result<QuantumState> {
    if state.dims() != [3, 3] {
        return Err(Error::Dimension("blockade CZ needs two three-level atoms"));
    }
    let u = blockade_cz_unitary(rabi, blockade)?;
    match state.amplitudes() {
        Some(a) => QuantumState::ket(&[3, 3], u.matvec(a)),
        None => Ok(QuantumState::density_unchecked(&[3, 3], u.matmul(state.matrix()).matmul(&u.adjoint()))),
    }
}

/// diag(1, 1, 1, −1).
pub fn ideal_cz() -> ComplexMatrix {
    ComplexMatrix::diag(&[ONE, ONE, ONE, -ONE])
}

/// 1 − |Tr(A†B)|/d, insensitive to global phase.
pub fn subspace_infidelity(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    1.0 - a.inner(b).norm() / a.rows() as f64
}
