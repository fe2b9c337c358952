//! C-shunt flux qubit: potential landscape, two-level model and noise rates.
//!
//! Energies are given in GHz and converted to rad/ns (×2π) by the constructors.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;

use super::TAU;
use crate::error::{Error, Result};
use crate::lindblad::LindbladSet;
use crate::linalg::ComplexMatrix;
use crate::ops::{create, destroy, embed, identity, sigma_x, sigma_y, sigma_z};

#[derive(Clone, Debug, PartialEq)]
pub struct FluxParams {
    /// Josephson energy E_J (GHz).
    pub e_j: f64,
    /// Charging energy E_C (GHz).
    pub e_c: f64,
    /// Small-junction ratio α.
    pub alpha: f64,
    /// Magnetic frustration f_ε.
    pub f_eps: f64,
    /// Shunt factor ζ.
    pub zeta: f64,
    /// Tunnel splitting Δ (GHz).
    pub delta_tunnel: f64,
    /// Bias ε (GHz).
    pub eps_bias: f64,
    /// Qubit-resonator coupling g (GHz).
    pub g_res: f64,
    /// Resonator frequency (GHz).
    pub omega_res: f64,
    /// Purcell decay rate (MHz, i.e. 1/μs).
    pub purcell_rate: f64,
    /// Flux fluctuation amplitude δf.
    pub delta_f: f64,
    /// Charge fluctuation amplitude δn₋.
    pub delta_n: f64,
}

impl Default for FluxParams {
    fn default() -> Self {
        Self {
            e_j: 65.0,
            e_c: 1.0,
            alpha: 0.8,
            f_eps: 0.53,
            zeta: 10.0,
            delta_tunnel: 0.82,
            eps_bias: 6.7,
            g_res: 2.0,
            omega_res: 6.75,
            purcell_rate: 9.19,
            delta_f: 1e-6,
            delta_n: 1.0,
        }
    }
}

impl FluxParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) {
            return Err(Error::InvalidArgument("α must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.f_eps) {
            return Err(Error::InvalidArgument("f_ε must lie in [0, 1]".into()));
        }
        if !(self.zeta >= 1.0) {
            return Err(Error::InvalidArgument("ζ must be at least 1".into()));
        }
        if [self.purcell_rate, self.delta_f, self.delta_n].iter().any(|x| !(*x >= 0.0)) {
            return Err(Error::InvalidArgument("noise amplitudes must be non-negative".into()));
        }
        Ok(())
    }

    /// Qubit splitting √(ε² + Δ²) in GHz.
    pub fn qubit_splitting(&self) -> f64 {
        self.eps_bias.hypot(self.delta_tunnel)
    }
}

/// U/E_J = 2 + α − cos φ₁ − cos φ₂ − α cos(2πf_ε + φ₁ − φ₂).
pub fn flux_potential(phi1: f64, phi2: f64, alpha: f64, f_eps: f64) -> f64 {
    2.0 + alpha - phi1.cos() - phi2.cos() - alpha * (TAU * f_eps + phi1 - phi2).cos()
}

/// Critical frustration f_c for α ≥ 0.5.
pub fn critical_frustration(alpha: f64) -> Result<f64> {
    if alpha >= 1.0 {
        Ok((1.0 / alpha).asin() / TAU)
    } else if alpha >= 0.5 {
        let q = 1.0 - alpha * alpha;
        let a = 2.0 * (2.0 * (q / 3.0).sqrt()).acos();
        let b = (2.0 * (q / (3.0 * alpha * alpha)).sqrt()).acos();
        Ok((a - b) / TAU)
    } else {
        Err(Error::InvalidArgument(alloc::format!("critical frustration undefined for α = {alpha} < 0.5")))
    }
}

/// Potential along φ₁ = −φ₂ = φ, up to a constant.
fn profile(phi: f64, alpha: f64, f_eps: f64) -> f64 {
    -2.0 * phi.cos() - alpha * (TAU * f_eps + 2.0 * phi).cos()
}

fn profile_curvature(phi: f64, alpha: f64, f_eps: f64) -> f64 {
    2.0 * phi.cos() + 4.0 * alpha * (TAU * f_eps + 2.0 * phi).cos()
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    for _ in 0..200 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
        if (b - a).abs() < 1e-14 {
            break;
        }
    }
    0.5 * (a + b)
}

/// Local minima φ* of the symmetric potential cut φ₁ = −φ₂ = φ on (−π, π], ascending in φ.
pub fn potential_minima(alpha: f64, f_eps: f64) -> Vec<f64> {
    let n = 4096;
    let xs: Vec<f64> = (0..=n).map(|k| -core::f64::consts::PI + TAU * k as f64 / n as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| profile(x, alpha, f_eps)).collect();
    let mut out = Vec::new();
    for k in 1..n {
        if ys[k] <= ys[k - 1] && ys[k] < ys[k + 1] {
            out.push(golden_min(|x| profile(x, alpha, f_eps), xs[k - 1], xs[k + 1]));
        }
    }
    out
}

/// Derived quantities entering the flux noise rates.
#[derive(Clone, Debug, PartialEq)]
pub struct FluxNoiseModel {
    /// Minimum φ* of the negative-phase well.
    pub phi_min: f64,
    /// E_{C,−} (rad/ns).
    pub e_c_minus: f64,
    /// E_{J,−} (rad/ns).
    pub e_j_minus: f64,
    /// n_z = (E_{J,−}/4E_{C,−})^{1/4}.
    pub n_z: f64,
    /// I_m Φ₀ (rad/ns).
    pub i_m_phi0: f64,
}

impl FluxNoiseModel {
    pub fn new(p: &FluxParams) -> Result<Self> {
        p.validate()?;
        let phi_min = potential_minima(p.alpha, p.f_eps)
            .into_iter()
            .filter(|&x| x < 0.0)
            .last()
            .ok_or_else(|| Error::InvalidArgument("no negative-phase potential minimum".into()))?;
        let e_c_minus = TAU * p.e_c / (p.zeta + p.alpha + 1.0);
        let e_j_minus = profile_curvature(phi_min, p.alpha, p.f_eps) * TAU * p.e_j;
        let n_z = (e_j_minus / (4.0 * e_c_minus)).powf(0.25);
        let theta = TAU * p.f_eps + 2.0 * phi_min;
        let i_m_phi0 = 4.0 * TAU * p.alpha * theta.cos().abs() * TAU * p.e_j;
        Ok(Self { phi_min, e_c_minus, e_j_minus, n_z, i_m_phi0 })
    }

    /// Rates (σ_z, σ_x, σ_y charge, σ_y Purcell) in 1/ns.
    pub fn rates(&self, p: &FluxParams) -> [f64; 4] {
        let flux = 0.5 * self.i_m_phi0 * p.delta_f;
        let ratio = p.eps_bias / p.qubit_splitting();
        [ratio * flux, flux, 0.5 * self.n_z * self.e_c_minus * p.delta_n, p.purcell_rate * 1e-3]
    }
}

/// ½(εσ_z + Δσ_x) ⊗ I + I ⊗ ω(a†a + ½) + g σ_y ⊗ (a† + a), in rad/ns.
pub fn flux_system_hamiltonian(p: &FluxParams, resonator_dim: usize) -> Result<ComplexMatrix> {
    p.validate()?;
    if resonator_dim == 0 {
        return Err(Error::InvalidArgument("resonator dimension must be positive".into()));
    }
    let dims = [2, resonator_dim];
    let mut q = sigma_z().scale_re(0.5 * TAU * p.eps_bias);
    q.axpy(C64::new(0.5 * TAU * p.delta_tunnel, 0.0), &sigma_x());
    let a = destroy(resonator_dim);
    let ad = create(resonator_dim);
    let mut osc = ad.matmul(&a);
    osc.axpy(C64::new(0.5, 0.0), &identity(resonator_dim));
    let mut h = embed(&q, 0, &dims) + embed(&osc.scale_re(TAU * p.omega_res), 1, &dims);
    h.axpy(C64::new(TAU * p.g_res, 0.0), &sigma_y().kron(&(ad + a)));
    Ok(h)
}

/// Flux, charge and Purcell collapse operators of one flux qubit.
pub fn flux_lindblads(p: &FluxParams) -> Result<LindbladSet> {
    let model = FluxNoiseModel::new(p)?;
    let [rz, rx, ry, rp] = model.rates(p);
    let mut set = LindbladSet::new();
    for (op, rate) in [(sigma_z(), rz), (sigma_x(), rx), (sigma_y(), ry), (sigma_y(), rp)] {
        if rate > 0.0 {
            set.push(op, rate);
        }
    }
    Ok(set)
}
