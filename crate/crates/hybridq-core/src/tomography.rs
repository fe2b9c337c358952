//! χ-matrix process tomography over the Pauli operator basis.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{kron_all, ComplexMatrix};
use crate::ops::{identity, sigma_x, sigma_y, sigma_z};

/// Pauli strings on n qubits, ordered I, X, Y, Z per qubit with qubit 0 most significant.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    pub n_qubits: usize,
    pub elements: Vec<ComplexMatrix>,
    pub labels: Vec<String>,
}

impl OperatorBasis {
    pub fn pauli(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("basis needs at least one qubit".into()));
        }
        let singles = [identity(2), sigma_x(), sigma_y(), sigma_z()];
        let names = ['i', 'x', 'y', 'z'];
        let count = 1usize << (2 * n_qubits);
        let mut elements = Vec::with_capacity(count);
        let mut labels = Vec::with_capacity(count);
        for idx in 0..count {
            let digits: Vec<usize> = (0..n_qubits).map(|q| (idx >> (2 * (n_qubits - 1 - q))) & 3).collect();
            let factors: Vec<ComplexMatrix> = digits.iter().map(|&d| singles[d].clone()).collect();
            elements.push(kron_all(&factors));
            labels.push(digits.iter().map(|&d| names[d]).collect());
        }
        Ok(Self { n_qubits, elements, labels })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }
}

#[derive(Clone, Debug)]
pub struct ChiMatrix {
    pub entries: ComplexMatrix,
    pub basis: OperatorBasis,
}

/// Superoperator of ρ ↦ E_m ρ E_n†.
fn pair_superop(em: &ComplexMatrix, en: &ComplexMatrix) -> ComplexMatrix {
    en.conj().kron(em)
}

/// Solves S = Σ χ_mn (E_n* ⊗ E_m) for χ through the linear system M χ = vec(S).
pub fn chi_from_map(map: &ComplexMatrix, basis: &OperatorBasis) -> Result<ChiMatrix> {
    let d = basis.dim();
    if map.rows() != d * d || map.cols() != d * d {
        return Err(Error::Dimension("map must be a superoperator on the basis dimension"));
    }
    let k = basis.len();
    let rows = d * d * d * d;
    let mut m = ComplexMatrix::zeros(rows, k * k);
    for a in 0..k {
        for b in 0..k {
            let s = pair_superop(&basis.elements[a], &basis.elements[b]);
            for (r, v) in s.as_slice().iter().enumerate() {
                m[(r, a * k + b)] = *v;
            }
        }
    }
    let rhs = ComplexMatrix::column(map.as_slice());
    let sol = m.solve(&rhs).map_err(|_| Error::Singular)?;
    let entries = ComplexMatrix::from_fn(k, k, |a, b| sol[(a * k + b, 0)]);
    Ok(ChiMatrix { entries, basis: basis.clone() })
}

/// Superoperator Σ χ_mn (E_n* ⊗ E_m).
pub fn map_from_chi(chi: &ChiMatrix) -> ComplexMatrix {
    let d = chi.basis.dim();
    let k = chi.basis.len();
    let mut s = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..k {
        for b in 0..k {
            let c = chi.entries[(a, b)];
            if c != C64::new(0.0, 0.0) {
                s.axpy(c, &pair_superop(&chi.basis.elements[a], &chi.basis.elements[b]));
            }
        }
    }
    s
}

/// max |Σ χ_mn E_n†E_m − I|.
pub fn completeness_defect(chi: &ChiMatrix) -> f64 {
    let d = chi.basis.dim();
    let k = chi.basis.len();
    let mut acc = ComplexMatrix::zeros(d, d);
    for a in 0..k {
        for b in 0..k {
            let c = chi.entries[(a, b)];
            acc.axpy(c, &chi.basis.elements[b].adjoint_matmul(&chi.basis.elements[a]));
        }
    }
    acc.max_abs_diff(&ComplexMatrix::identity(d))
}

/// Tr(χ_re χ_th†)/(‖χ_th‖ ‖χ_re‖).
pub fn process_fidelity(chi_th: &ChiMatrix, chi_re: &ChiMatrix) -> Result<f64> {
    let a = &chi_th.entries;
    let b = &chi_re.entries;
    if a.rows() != b.rows() {
        return Err(Error::Dimension("χ matrices use different bases"));
    }
    let na = a.inner(a).re.sqrt();
    let nb = b.inner(b).re.sqrt();
    if !(na > 0.0 && nb > 0.0) {
        return Err(Error::InvalidArgument("zero-norm χ matrix".into()));
    }
    let overlap = a.inner(b);
    if overlap.im.abs() > 1e-9 * na * nb {
        return Err(Error::InvalidArgument(format!("process fidelity has imaginary part {:e}", overlap.im)));
    }
    Ok(overlap.re / (na * nb))
}

/// CSV `row_label,col_label,abs,phase` over all χ entries.
pub fn chi_report(chi: &ChiMatrix) -> String {
    let mut out = String::from("row_label,col_label,abs,phase\n");
    let labels = &chi.basis.labels;
    for (a, la) in labels.iter().enumerate() {
        for (b, lb) in labels.iter().enumerate() {
            let z = chi.entries[(a, b)];
            let phase = if z.norm() > 1e-12 { z.arg() } else { 0.0 };
            let _ = writeln!(out, "{la},{lb},{:.12},{:.12}", z.norm(), phase);
        }
    }
    out
}
