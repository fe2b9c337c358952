//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Eigenvalues in ascending order and the unitary whose columns are the eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub fn eigh(h: &ComplexMatrix) -> Result<Eigh> {
    if !h.is_square() {
        return Err(Error::Dimension("eigh requires a square matrix"));
    }
    if !h.is_finite() {
        return Err(Error::NonFinite("eigh input"));
    }
    let n = h.rows();
    // Symmetrize to kill round-off asymmetry.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.norm_fro().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let c = a[(p, q)];
                let cabs = c.norm();
                if cabs <= 1e-300 {
                    continue;
                }
                let phase = c / cabs;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * cabs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // J = diag(phase, 1) * [[cs, sn], [-sn, cs]] acting on (p, q).
                let j_pp = phase * cs;
                let j_pq = phase * sn;
                let j_qp = C64::new(-sn, 0.0);
                let j_qq = C64::new(cs, 0.0);
                // A <- A J
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j_pp + akq * j_qp;
                    a[(k, q)] = akp * j_pq + akq * j_qq;
                }
                // A <- J^† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
                    a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * j_pp + vkq * j_qp;
                    v[(k, q)] = vkp * j_pq + vkq * j_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigh { values, vectors })
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let e = eigh(h)?;
    let n = h.rows();
    let fv: Vec<f64> = e.values.iter().map(|&x| f(x)).collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| e.vectors[(i, k)] * fv[k] * e.vectors[(j, k)].conj()).sum()
    }))
}
