//! Kets and density matrices over tensor-product registers.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::eigh::{eigh, hermitian_function};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};

/// Tolerance for norm, trace, hermiticity and positivity checks.
pub const STATE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Ket,
    Density,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    kind: StateKind,
    dims: Vec<usize>,
    data: ComplexMatrix,
}

impl QuantumState {
    /// Normalized ket; errors if the norm is off by more than [`STATE_TOL`].
    pub fn ket(dims: &[usize], amplitudes: Vec<C64>) -> Result<Self> {
        let d: usize = dims.iter().product();
        if amplitudes.len() != d {
            return Err(Error::Dimension("ket length differs from register dimension"));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("ket norm {norm}")));
        }
        Ok(Self { kind: StateKind::Ket, dims: dims.to_vec(), data: ComplexMatrix::column(&amplitudes) })
    }

    /// Ket normalized on construction.
    pub fn ket_normalized(dims: &[usize], amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::ket(dims, amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// Computational basis ket with per-subsystem labels.
    pub fn basis(dims: &[usize], labels: &[usize]) -> Result<Self> {
        if dims.len() != labels.len() || labels.iter().zip(dims).any(|(l, d)| l >= d) {
            return Err(Error::InvalidArgument("basis labels out of range".into()));
        }
        let d: usize = dims.iter().product();
        let mut idx = 0;
        for (l, dd) in labels.iter().zip(dims) {
            idx = idx * dd + l;
        }
        let mut amps = vec![ZERO; d];
        amps[idx] = C64::new(1.0, 0.0);
        Self::ket(dims, amps)
    }

    /// Validated density matrix. Hermitian and positivity defects within tolerance are clamped.
    pub fn density(dims: &[usize], rho: ComplexMatrix) -> Result<Self> {
        let d: usize = dims.iter().product();
        if rho.rows() != d || rho.cols() != d {
            return Err(Error::Dimension("density matrix size differs from register dimension"));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let herm_err = rho.max_abs_diff(&rho.adjoint());
        if herm_err > STATE_TOL {
            return Err(Error::InvalidState(format!("hermiticity defect {herm_err:e}")));
        }
        let sym = ComplexMatrix::from_fn(d, d, |i, j| (rho[(i, j)] + rho[(j, i)].conj()) * 0.5);
        let e = eigh(&sym)?;
        let min = e.values[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        let data = if min < 0.0 { hermitian_function(&sym, |x| x.max(0.0))? } else { sym };
        Ok(Self { kind: StateKind::Density, dims: dims.to_vec(), data })
    }

    /// Density matrix without validation, for solver internals.
    pub fn density_unchecked(dims: &[usize], rho: ComplexMatrix) -> Self {
        Self { kind: StateKind::Density, dims: dims.to_vec(), data: rho }
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.data
    }

    pub fn amplitudes(&self) -> Option<&[C64]> {
        match self.kind {
            StateKind::Ket => Some(self.data.as_slice()),
            StateKind::Density => None,
        }
    }

    /// |ψ⟩⟨ψ| for kets, a clone for densities.
    pub fn to_density(&self) -> Self {
        match self.kind {
            StateKind::Density => self.clone(),
            StateKind::Ket => Self {
                kind: StateKind::Density,
                dims: self.dims.clone(),
                data: self.data.matmul(&self.data.adjoint()),
            },
        }
    }

    /// Diagonal of the density matrix in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        match self.kind {
            StateKind::Ket => self.data.as_slice().iter().map(|z| z.norm_sqr()).collect(),
            StateKind::Density => (0..self.dim()).map(|i| self.data[(i, i)].re).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        match self.kind {
            StateKind::Ket => self.data.as_slice().iter().map(|z| z.norm_sqr()).sum(),
            StateKind::Density => self.data.trace().re,
        }
    }
}

/// Kronecker product.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Tensor product of two states; the result is a ket only if both inputs are kets.
pub fn tensor_states(a: &QuantumState, b: &QuantumState) -> QuantumState {
    let dims: Vec<usize> = a.dims.iter().chain(&b.dims).copied().collect();
    if a.kind == StateKind::Ket && b.kind == StateKind::Ket {
        QuantumState { kind: StateKind::Ket, dims, data: a.data.kron(&b.data) }
    } else {
        let (da, db) = (a.to_density(), b.to_density());
        QuantumState { kind: StateKind::Density, dims, data: da.data.kron(&db.data) }
    }
}

/// Reduced density matrix over the subsystems in `keep`, returned in ascending subsystem order.
pub fn partial_trace(rho: &QuantumState, keep: &[usize]) -> Result<QuantumState> {
    let dims = rho.dims();
    let n = dims.len();
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || keep_sorted.iter().any(|&k| k >= n) {
        return Err(Error::InvalidArgument("invalid subsystem index set".into()));
    }
    let rho = rho.to_density();
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let traced: Vec<usize> = (0..n).filter(|k| !keep_sorted.contains(k)).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    // Strides of each subsystem in the full index.
    let mut strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let offset = |sub: &[usize], sub_dims: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for p in (0..sub.len()).rev() {
            off += (idx % sub_dims[p]) * strides[sub[p]];
            idx /= sub_dims[p];
        }
        off
    };
    let kept_off: Vec<usize> = (0..dk).map(|i| offset(&keep_sorted, &kept_dims, i)).collect();
    let traced_off: Vec<usize> = (0..dt).map(|i| offset(&traced, &traced_dims, i)).collect();
    let m = rho.matrix();
    let out = ComplexMatrix::from_fn(dk, dk, |i, j| {
        traced_off.iter().map(|&t| m[(kept_off[i] + t, kept_off[j] + t)]).sum()
    });
    Ok(QuantumState::density_unchecked(&kept_dims, out))
}

fn check_same_dims(a: &QuantumState, b: &QuantumState) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension("fidelity inputs differ in dimension"));
    }
    Ok(())
}

/// Amplitude-convention fidelity: sqrt(⟨ψ|ρ|ψ⟩) when either side is pure,
/// Uhlmann Tr√(√ρ σ √ρ) for two density matrices.
pub fn state_fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    check_same_dims(a, b)?;
    let f = match (a.kind, b.kind) {
        (StateKind::Ket, StateKind::Ket) => {
            let ov: C64 = a.data.as_slice().iter().zip(b.data.as_slice()).map(|(x, y)| x.conj() * y).sum();
            ov.norm()
        }
        (StateKind::Ket, StateKind::Density) => pure_overlap(a, b).sqrt(),
        (StateKind::Density, StateKind::Ket) => pure_overlap(b, a).sqrt(),
        (StateKind::Density, StateKind::Density) => {
            let sa = hermitian_function(&a.data, |x| x.max(0.0).sqrt())?;
            let inner = sa.matmul(&b.data).matmul(&sa);
            let e = eigh(&inner)?;
            e.values.iter().map(|&x| x.max(0.0).sqrt()).sum()
        }
    };
    Ok(f.clamp(0.0, 1.0))
}

fn pure_overlap(psi: &QuantumState, rho: &QuantumState) -> f64 {
    let v = psi.data.as_slice();
    let rv = rho.data.matvec(v);
    v.iter().zip(&rv).map(|(x, y)| x.conj() * y).sum::<C64>().re.max(0.0)
}

/// ½‖ρ − σ‖₁.
pub fn trace_distance(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    check_same_dims(a, b)?;
    let diff = &a.to_density().data - &b.to_density().data;
    let e = eigh(&diff)?;
    Ok(0.5 * e.values.iter().map(|x| x.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let bell = QuantumState::ket(&[2, 2], vec![c(FRAC_1_SQRT_2), ZERO, ZERO, c(FRAC_1_SQRT_2)]).unwrap();
        let r = partial_trace(&bell, &[0]).unwrap();
        assert!(r.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_re(0.5)) < 1e-15);
    }

    #[test]
    fn ghz3_pair_marginal_by_brute_force() {
        let mut amps = vec![ZERO; 8];
        amps[0] = c(FRAC_1_SQRT_2);
        amps[7] = c(FRAC_1_SQRT_2);
        let ghz = QuantumState::ket(&[2, 2, 2], amps.clone()).unwrap();
        let r = partial_trace(&ghz, &[0, 1]).unwrap();
        // Oracle: explicit index contraction over the last qubit.
        let mut oracle = ComplexMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                for t in 0..2 {
                    oracle[(i, j)] += amps[2 * i + t] * amps[2 * j + t].conj();
                }
            }
        }
        assert!(r.matrix().max_abs_diff(&oracle) < 1e-15);
        assert!(r.matrix().max_abs_diff(&ComplexMatrix::diag(&[c(0.5), ZERO, ZERO, c(0.5)])) < 1e-15);
    }

    #[test]
    fn fidelity_plus_vs_mixed() {
        let plus = QuantumState::ket(&[2], vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        let mixed = QuantumState::density(&[2], ComplexMatrix::identity(2).scale_re(0.5)).unwrap();
        let f = state_fidelity(&plus, &mixed).unwrap();
        assert!((f - FRAC_1_SQRT_2).abs() < 1e-12);
        let f2 = state_fidelity(&plus.to_density(), &mixed).unwrap();
        assert!((f2 - FRAC_1_SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn orthogonal_kets() {
        let a = QuantumState::basis(&[2], &[0]).unwrap();
        let b = QuantumState::basis(&[2], &[1]).unwrap();
        assert_eq!(state_fidelity(&a, &b).unwrap(), 0.0);
    }
}
