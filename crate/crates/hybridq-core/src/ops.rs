//! Named operators and register embedding.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::linalg::{kron_all, ComplexMatrix, I, ONE, ZERO};

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n)
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]])
}

/// Lowering operator |0⟩⟨1| on a qubit.
pub fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ZERO, ZERO]])
}

/// Truncated annihilation operator, a|n⟩ = √n |n−1⟩.
pub fn destroy(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| if j == i + 1 { C64::new((j as f64).sqrt(), 0.0) } else { ZERO })
}

pub fn create(n: usize) -> ComplexMatrix {
    destroy(n).adjoint()
}

pub fn number(n: usize) -> ComplexMatrix {
    ComplexMatrix::diag(&(0..n).map(|k| C64::new(k as f64, 0.0)).collect::<Vec<_>>())
}

/// |i⟩⟨j| in dimension n.
pub fn projector(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

/// Embeds `op` acting on subsystem `k` of a register with subsystem dimensions `dims`.
pub fn embed(op: &ComplexMatrix, k: usize, dims: &[usize]) -> ComplexMatrix {
    assert_eq!(op.rows(), dims[k], "operator size must match subsystem");
    let factors: Vec<ComplexMatrix> =
        dims.iter().enumerate().map(|(i, &d)| if i == k { op.clone() } else { identity(d) }).collect();
    kron_all(&factors)
}

/// Named operator set returned by [`standard_operators`].
#[derive(Clone, Debug)]
pub struct StandardOperators {
    pub id: ComplexMatrix,
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
    pub a: ComplexMatrix,
    pub adag: ComplexMatrix,
}

/// Pauli set plus ladder operators of the given truncation.
pub fn standard_operators(ladder_dim: usize) -> StandardOperators {
    StandardOperators {
        id: identity(2),
        sx: sigma_x(),
        sy: sigma_y(),
        sz: sigma_z(),
        a: destroy(ladder_dim),
        adag: create(ladder_dim),
    }
}
