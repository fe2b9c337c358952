//! Local-operator application on qubit registers.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::linalg::{ComplexMatrix, ZERO};

/// Offsets of each local basis index and the list of base indices with the local bits cleared.
fn layout(n: usize, qubits: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = qubits.len();
    let bits: Vec<usize> = qubits.iter().map(|&q| n - 1 - q).collect();
    let offsets: Vec<usize> = (0..1usize << k)
        .map(|l| (0..k).filter(|i| l >> (k - 1 - i) & 1 == 1).map(|i| 1usize << bits[i]).sum())
        .collect();
    let mask: usize = bits.iter().map(|b| 1usize << b).sum();
    let bases: Vec<usize> = (0..1usize << n).filter(|i| i & mask == 0).collect();
    (offsets, bases)
}

/// Full-register matrix of a local operator.
pub fn expand_operator(u: &ComplexMatrix, qubits: &[usize], n: usize) -> ComplexMatrix {
    let d = 1usize << n;
    let (offsets, bases) = layout(n, qubits);
    let mut out = ComplexMatrix::zeros(d, d);
    for &b in &bases {
        for (i, &oi) in offsets.iter().enumerate() {
            for (j, &oj) in offsets.iter().enumerate() {
                out[(b + oi, b + oj)] = u[(i, j)];
            }
        }
    }
    out
}

/// ψ ← U ψ on the given qubits.
pub fn apply_ket(amps: &mut [C64], n: usize, qubits: &[usize], u: &ComplexMatrix) {
    let (offsets, bases) = layout(n, qubits);
    let m = offsets.len();
    let mut buf = vec![ZERO; m];
    for &b in &bases {
        for (l, &o) in offsets.iter().enumerate() {
            buf[l] = amps[b + o];
        }
        for (i, &oi) in offsets.iter().enumerate() {
            amps[b + oi] = (0..m).map(|j| u[(i, j)] * buf[j]).sum();
        }
    }
}

/// ρ ← U ρ U† on the given qubits.
pub fn apply_density(rho: &mut ComplexMatrix, n: usize, qubits: &[usize], u: &ComplexMatrix) {
    let d = 1usize << n;
    let (offsets, bases) = layout(n, qubits);
    let m = offsets.len();
    let mut buf = vec![ZERO; m];
    // Row index.
    for c in 0..d {
        for &b in &bases {
            for (l, &o) in offsets.iter().enumerate() {
                buf[l] = rho[(b + o, c)];
            }
            for (i, &oi) in offsets.iter().enumerate() {
                rho[(b + oi, c)] = (0..m).map(|j| u[(i, j)] * buf[j]).sum();
            }
        }
    }
    // Column index with conj(U).
    for r in 0..d {
        for &b in &bases {
            for (l, &o) in offsets.iter().enumerate() {
                buf[l] = rho[(r, b + o)];
            }
            for (i, &oi) in offsets.iter().enumerate() {
                rho[(r, b + oi)] = (0..m).map(|j| u[(i, j)].conj() * buf[j]).sum();
            }
        }
    }
}

/// ρ ← S(ρ) for a local superoperator S acting on column-stacked local blocks.
pub fn apply_density_superop(rho: &mut ComplexMatrix, n: usize, qubits: &[usize], s: &ComplexMatrix) {
    let (offsets, bases) = layout(n, qubits);
    let m = offsets.len();
    debug_assert_eq!(s.rows(), m * m);
    let mut block = vec![ZERO; m * m];
    for &br in &bases {
        for &bc in &bases {
            for j in 0..m {
                for i in 0..m {
                    block[j * m + i] = rho[(br + offsets[i], bc + offsets[j])];
                }
            }
            let out = s.matvec(&block);
            for j in 0..m {
                for i in 0..m {
                    rho[(br + offsets[i], bc + offsets[j])] = out[j * m + i];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::gate::gate_matrix;
    use crate::lindblad::unitary_superop;

    #[test]
    fn expand_cnot_reversed_qubits() {
        // CNOT with control 1, target 0 on two qubits.
        let u = gate_matrix("CNOT", &[]).unwrap();
        let full = expand_operator(&u, &[1, 0], 2);
        // |01⟩ (q1 = 1) → |11⟩
        assert_eq!(full[(3, 1)], crate::linalg::ONE);
        assert_eq!(full[(2, 2)], crate::linalg::ONE);
    }

    #[test]
    fn density_paths_agree() {
        let n = 3;
        let d = 8;
        let psi: Vec<C64> = (0..d).map(|i| C64::new(1.0 + i as f64, 0.5 * i as f64)).collect();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi: Vec<C64> = psi.into_iter().map(|z| z / norm).collect();
        let rho0 = ComplexMatrix::column(&psi).matmul(&ComplexMatrix::column(&psi).adjoint());
        let u = gate_matrix("U", &[0.4, 1.0, -0.3]).unwrap().kron(&gate_matrix("H", &[]).unwrap());
        let qs = [2, 0];
        let full = expand_operator(&u, &qs, n);
        let expect = full.matmul(&rho0).matmul(&full.adjoint());
        let mut a = rho0.clone();
        apply_density(&mut a, n, &qs, &u);
        let mut b = rho0.clone();
        apply_density_superop(&mut b, n, &qs, &unitary_superop(&u));
        let mut k = psi.clone();
        apply_ket(&mut k, n, &qs, &u);
        let c = ComplexMatrix::column(&k).matmul(&ComplexMatrix::column(&k).adjoint());
        assert!(a.max_abs_diff(&expect) < 1e-14);
        assert!(b.max_abs_diff(&expect) < 1e-14);
        assert!(c.max_abs_diff(&expect) < 1e-14);
    }
}
