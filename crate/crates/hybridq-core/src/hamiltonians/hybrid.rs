//! Flux qubit, LC resonator and Rydberg atom coupled into one 12-dimensional system.
//!
//! Tensor order is flux {L, R} ⊗ photon {0, 1} ⊗ atom {e, g, u}. Rates and frequencies
//! are in rad/ns, times in ns.

use num_complex::Complex64 as C64;
use num_traits::Float;

use super::TAU;
use crate::eigh::eigh;
use crate::error::{Error, Result};
use crate::lindblad::LindbladSet;
use crate::linalg::ComplexMatrix;
use crate::ops::{create, destroy, embed, identity, projector, sigma_x, sigma_z};

pub const DIMS: [usize; 3] = [2, 2, 3];
pub const FLUX_L: usize = 0;
pub const FLUX_R: usize = 1;
pub const ATOM_E: usize = 0;
pub const ATOM_G: usize = 1;
pub const ATOM_U: usize = 2;

const HBAR: f64 = 1.054_571_817e-34;
const FLUX_QUANTUM: f64 = 2.067_833_848e-15;

/// Index of |flux, photon, atom⟩ in the 12-dimensional basis.
pub fn basis_index(flux: usize, photon: usize, atom: usize) -> usize {
    flux * 6 + photon * 3 + atom
}

/// Labels L0e … R1u in basis order.
pub fn basis_labels() -> [&'static str; 12] {
    ["L0e", "L0g", "L0u", "L1e", "L1g", "L1u", "R0e", "R0g", "R0u", "R1e", "R1g", "R1u"]
}

/// Slope scale of the linear atomic level maps ω_μ(E).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelSlopes {
    /// 10⁻⁴ THz per V/cm scale.
    Fine,
    /// 10⁻¹ THz per V/cm scale.
    Coarse,
}

/// Interpretation of the tabulated γ_φ/2π = 0.1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DephasingScale {
    Mhz,
    Ghz,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HybridParams {
    /// Resonator frequency ω₀ (rad/ns).
    pub omega0: f64,
    /// Atomic e–g drive Ω (rad/ns).
    pub rabi_a1: f64,
    /// Atomic e–u drive Ω′ (rad/ns).
    pub rabi_a2: f64,
    /// Atom–resonator coupling on e–g (rad/ns).
    pub g_a: f64,
    /// Atom–resonator coupling on e–u (rad/ns).
    pub g_a_prime: f64,
    /// Flux tunnel splitting Δ (rad/ns).
    pub delta_tunnel: f64,
    /// Flux bias γ_q.
    pub gamma_q: f64,
    /// Electric field (V/cm).
    pub e_field: f64,
    pub slopes: LevelSlopes,
    /// Mutual inductance (pH).
    pub mutual_inductance: f64,
    /// Resonator inductance (nH).
    pub inductance: f64,
    /// Resonator capacitance (aF).
    pub capacitance: f64,
    /// Persistent current (A).
    pub persistent_current: f64,
    /// Resonator quality factor, κ = ω₀/Q.
    pub quality_factor: f64,
    /// Rydberg decay Γ (1/ns).
    pub gamma_ryd: f64,
    /// Flux relaxation (1/ns).
    pub gamma_relax: f64,
    /// γ_φ/2π as tabulated, scaled by `dephasing_scale`.
    pub gamma_phi_table: f64,
    pub dephasing_scale: DephasingScale,
}

impl Default for HybridParams {
    fn default() -> Self {
        Self {
            omega0: TAU * 20.0,
            rabi_a1: TAU * 4.6,
            rabi_a2: TAU * 3.2,
            g_a: TAU * 1.0,
            g_a_prime: TAU * 0.5,
            delta_tunnel: TAU * 5.0,
            gamma_q: -5e-3,
            e_field: 500.0,
            slopes: LevelSlopes::Fine,
            mutual_inductance: 27.0,
            inductance: 247.0,
            capacitance: 256.0,
            persistent_current: 0.8e-6,
            quality_factor: 1e5,
            gamma_ryd: TAU * 0.15e-3,
            gamma_relax: TAU * 0.03e-3,
            gamma_phi_table: 0.1,
            dephasing_scale: DephasingScale::Mhz,
        }
    }
}

impl HybridParams {
    pub fn validate(&self) -> Result<()> {
        let rates = [self.gamma_ryd, self.gamma_relax, self.gamma_phi_table];
        if rates.iter().any(|r| !(r.is_finite() && *r >= 0.0)) || !(self.quality_factor > 0.0) {
            return Err(Error::InvalidArgument("hybrid noise rates must be non-negative".into()));
        }
        if !(500.0..=600.0).contains(&self.e_field) {
            return Err(Error::InvalidArgument(alloc::format!("field {} V/cm outside [500, 600]", self.e_field)));
        }
        Ok(())
    }

    pub fn with_setpoint(&self, e_field: f64, gamma_q: f64) -> Self {
        Self { e_field, gamma_q, ..self.clone() }
    }

    /// Noise-free copy.
    pub fn noiseless(&self) -> Self {
        Self { gamma_ryd: 0.0, gamma_relax: 0.0, gamma_phi_table: 0.0, quality_factor: f64::INFINITY, ..self.clone() }
    }

    /// 1/√(LC) (rad/ns).
    pub fn lc_frequency(&self) -> f64 {
        1e-9 / (self.inductance * 1e-9 * self.capacitance * 1e-18).sqrt()
    }

    /// I_p Φ₀/ħ (rad/ns).
    pub fn persistent_energy(&self) -> f64 {
        self.persistent_current * FLUX_QUANTUM / HBAR * 1e-9
    }

    /// ε = 2 I_p Φ₀ γ_q/ħ (rad/ns).
    pub fn flux_bias(&self) -> f64 {
        2.0 * self.persistent_energy() * self.gamma_q
    }

    /// g_f = (M I_p/ħ)√(ħω₀/2L) (rad/ns).
    pub fn g_f(&self) -> f64 {
        let l = self.inductance * 1e-9;
        let w = self.omega0 * 1e9;
        self.mutual_inductance * 1e-12 * self.persistent_current / HBAR * (HBAR * w / (2.0 * l)).sqrt() * 1e-9
    }

    /// Atomic level energies (ω_e, ω_g, ω_u) in rad/ns, with their field-dependent mean removed.
    pub fn atom_levels(&self) -> [f64; 3] {
        let [e, g, u] = atom_levels_thz(self.e_field, self.slopes);
        let mean = (e + g + u) / 3.0;
        [e, g, u].map(|x| (x - mean) * TAU * 1e3)
    }

    pub fn kappa(&self) -> f64 {
        self.omega0 / self.quality_factor
    }

    pub fn gamma_phi(&self) -> f64 {
        match self.dephasing_scale {
            DephasingScale::Mhz => TAU * self.gamma_phi_table * 1e-3,
            DephasingScale::Ghz => TAU * self.gamma_phi_table,
        }
    }

    /// Bias at which |R,1⟩ and |L,0⟩ are degenerate in the decoupled model.
    pub fn resonant_gamma_q_closed_form(&self) -> Result<f64> {
        let s = self.omega0 * self.omega0 - self.delta_tunnel * self.delta_tunnel;
        if s <= 0.0 {
            return Err(Error::InvalidArgument("tunnel splitting exceeds resonator frequency".into()));
        }
        Ok(-s.sqrt() / (2.0 * self.persistent_energy()))
    }

    /// Predicted |R,1⟩/|L,0⟩ gap 2g_fΔ/ω_q at the resonant bias.
    pub fn anticrossing_closed_form(&self) -> f64 {
        2.0 * self.g_f() * self.delta_tunnel / self.omega0
    }
}

/// (ω_e, ω_g, ω_u) in THz.
pub fn atom_levels_thz(e_field: f64, slopes: LevelSlopes) -> [f64; 3] {
    let x = e_field - 500.0;
    match slopes {
        LevelSlopes::Fine => [-7.81 - x * 7.3e-4, -7.92 + x * 5.5e-4, -7.88 + x * 6.3e-4],
        LevelSlopes::Coarse => [-7.81 - x * 7.3e-1, -7.92 + x * 5.5e-1, -7.88 + x * 6.6e-1],
    }
}

fn flux_part(hp: &HybridParams) -> ComplexMatrix {
    let mut h = sigma_z().scale_re(-0.5 * hp.flux_bias());
    h.axpy(C64::new(-0.5 * hp.delta_tunnel, 0.0), &sigma_x());
    h
}

fn resonator_part(hp: &HybridParams) -> ComplexMatrix {
    let mut h = create(2).matmul(&destroy(2));
    h.axpy(C64::new(0.5, 0.0), &identity(2));
    h.scale_re(hp.omega0)
}

/// H_LC + H_a + H_f + V_a + V_f.
pub fn hybrid_hamiltonian(hp: &HybridParams) -> Result<ComplexMatrix> {
    hp.validate()?;
    let [we, wg, wu] = hp.atom_levels();
    let mut ha = ComplexMatrix::diag(&[we, wg, wu].map(|w| C64::new(w, 0.0)));
    let eg = projector(3, ATOM_E, ATOM_G) + projector(3, ATOM_G, ATOM_E);
    let eu = projector(3, ATOM_E, ATOM_U) + projector(3, ATOM_U, ATOM_E);
    ha.axpy(C64::new(0.5 * hp.rabi_a1, 0.0), &eg);
    ha.axpy(C64::new(0.5 * hp.rabi_a2, 0.0), &eu);

    let b = destroy(2);
    let bd = create(2);
    let i2 = identity(2);
    let ge = projector(3, ATOM_G, ATOM_E);
    let ue = projector(3, ATOM_U, ATOM_E);
    let mut va_local = bd.kron(&ge).scale_re(0.5 * hp.g_a);
    va_local.axpy(C64::new(0.5 * hp.g_a_prime, 0.0), &bd.kron(&ue));
    let va_local = va_local.clone() + va_local.adjoint();
    let va = i2.kron(&va_local);

    let vf = sigma_z().kron(&(bd + b)).kron(&identity(3)).scale_re(-hp.g_f());

    let mut h = embed(&resonator_part(hp), 1, &DIMS);
    h = h + embed(&ha, 2, &DIMS) + embed(&flux_part(hp), 0, &DIMS) + va + vf;
    Ok(h)
}

/// Flux relaxation |L⟩ → |R⟩, flux dephasing, photon loss and Rydberg decay.
pub fn hybrid_lindblads(hp: &HybridParams) -> Result<LindbladSet> {
    hp.validate()?;
    let mut set = LindbladSet::new();
    let mut add = |op: ComplexMatrix, k: usize, rate: f64| {
        if rate > 0.0 {
            set.push(embed(&op, k, &DIMS), rate);
        }
    };
    add(projector(2, FLUX_R, FLUX_L), 0, hp.gamma_relax);
    add(sigma_z(), 0, 0.5 * hp.gamma_phi());
    add(destroy(2), 1, hp.kappa());
    add(projector(3, ATOM_G, ATOM_E), 2, hp.gamma_ryd);
    add(projector(3, ATOM_G, ATOM_U), 2, hp.gamma_ryd);
    Ok(set)
}

/// Flux ⊗ photon block H_LC + H_f + V_f.
pub fn flux_resonator_hamiltonian(hp: &HybridParams) -> ComplexMatrix {
    let vf = sigma_z().kron(&(create(2) + destroy(2))).scale_re(-hp.g_f());
    embed(&resonator_part(hp), 1, &[2, 2]) + embed(&flux_part(hp), 0, &[2, 2]) + vf
}

/// Gap between the two middle levels of the flux ⊗ photon block, i.e. the |R,1⟩/|L,0⟩ pair.
pub fn anticrossing_gap(hp: &HybridParams) -> Result<f64> {
    let e = eigh(&flux_resonator_hamiltonian(hp))?;
    Ok(e.values[2] - e.values[1])
}

/// Bias minimizing the |R,1⟩/|L,0⟩ gap, searched within ±30% of the closed-form value.
pub fn resonant_gamma_q(hp: &HybridParams) -> Result<(f64, f64)> {
    let g0 = hp.resonant_gamma_q_closed_form()?;
    let gap = |g: f64| anticrossing_gap(&hp.with_setpoint(hp.e_field, g)).unwrap_or(f64::INFINITY);
    let (mut a, mut b) = (1.3 * g0, 0.7 * g0);
    let r = 0.5 * (5.0f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if gap(c) < gap(d) {
            b = d;
        } else {
            a = c;
        }
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    let g = 0.5 * (a + b);
    Ok((g, gap(g)))
}

/// Fields at which the atomic transitions meet their resonance conditions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomResonances {
    /// ω_e = ω_g.
    pub eg_degenerate: f64,
    /// ω_e − ω_u = ω₀.
    pub eu_photon: f64,
    /// ω_e = ω_u.
    pub eu_degenerate: f64,
    /// ω_e − ω_g = ω₀.
    pub eg_photon: f64,
}

fn solve_linear(f: impl Fn(f64) -> f64) -> f64 {
    let (x0, x1) = (500.0, 600.0);
    let (y0, y1) = (f(x0), f(x1));
    x0 - y0 * (x1 - x0) / (y1 - y0)
}

pub fn atom_resonances(hp: &HybridParams) -> AtomResonances {
    let w0_thz = hp.omega0 / (TAU * 1e3);
    let lv = |e: f64| atom_levels_thz(e, hp.slopes);
    AtomResonances {
        eg_degenerate: solve_linear(|e| lv(e)[0] - lv(e)[1]),
        eu_photon: solve_linear(|e| lv(e)[0] - lv(e)[2] - w0_thz),
        eu_degenerate: solve_linear(|e| lv(e)[0] - lv(e)[2]),
        eg_photon: solve_linear(|e| lv(e)[0] - lv(e)[1] - w0_thz),
    }
}

fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5.0f64.sqrt() - 1.0);
    while (b - a).abs() > tol {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

/// Splitting of the two eigenstates of the full Hamiltonian with the largest weight on
/// span{|a⟩, |b⟩}.
pub fn dressed_pair_gap(hp: &HybridParams, a: usize, b: usize) -> Result<f64> {
    let e = eigh(&hybrid_hamiltonian(hp)?)?;
    let n = e.values.len();
    let mut w: alloc::vec::Vec<(f64, usize)> =
        (0..n).map(|k| (e.vectors[(a, k)].norm_sqr() + e.vectors[(b, k)].norm_sqr(), k)).collect();
    w.sort_by(|x, y| y.0.total_cmp(&x.0));
    Ok((e.values[w[0].1] - e.values[w[1].1]).abs())
}

/// Field within ±`half_width` of `guess` minimizing the dressed |a⟩/|b⟩ splitting.
pub fn dressed_field_resonance(hp: &HybridParams, a: usize, b: usize, guess: f64, half_width: f64) -> Result<(f64, f64)> {
    let gap = |e: f64| dressed_pair_gap(&hp.with_setpoint(e, hp.gamma_q), a, b).unwrap_or(f64::INFINITY);
    let e = golden(gap, guess - half_width, guess + half_width, 1e-10);
    Ok((e, gap(e)))
}

/// Bias within ±20% of `guess` minimizing the dressed |a⟩/|b⟩ splitting.
pub fn dressed_bias_resonance(hp: &HybridParams, a: usize, b: usize, guess: f64) -> Result<(f64, f64)> {
    let gap = |g: f64| dressed_pair_gap(&hp.with_setpoint(hp.e_field, g), a, b).unwrap_or(f64::INFINITY);
    let g = golden(gap, 1.2 * guess, 0.8 * guess, 1e-13);
    Ok((g, gap(g)))
}
