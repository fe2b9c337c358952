//! Matrix exponential by Padé scaling and squaring, with its Fréchet derivative.

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn coeffs(m: usize) -> &'static [f64] {
    match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        9 => &B9,
        _ => &B13,
    }
}

/// Matrix paired with a directional derivative.
struct Dual {
    x: ComplexMatrix,
    dx: Option<ComplexMatrix>,
}

impl Dual {
    fn mul(&self, o: &Dual) -> Dual {
        let x = self.x.matmul(&o.x);
        let dx = match (&self.dx, &o.dx) {
            (Some(a), Some(b)) => Some(&a.matmul(&o.x) + &self.x.matmul(b)),
            _ => None,
        };
        Dual { x, dx }
    }

    fn lin(terms: &[(f64, &Dual)], n: usize, id_coeff: f64) -> Dual {
        let mut x = ComplexMatrix::identity(n).scale_re(id_coeff);
        let has_d = terms.first().map_or(false, |t| t.1.dx.is_some());
        let mut dx = if has_d { Some(ComplexMatrix::zeros(n, n)) } else { None };
        for &(c, t) in terms {
            x.axpy(C64::new(c, 0.0), &t.x);
            if let (Some(d), Some(td)) = (dx.as_mut(), t.dx.as_ref()) {
                d.axpy(C64::new(c, 0.0), td);
            }
        }
        Dual { x, dx }
    }
}

/// Returns (U, V) of the degree-m Padé approximant, r_m = (V - U)^{-1} (V + U).
fn pade_uv(a: &Dual, m: usize) -> (Dual, Dual) {
    let n = a.x.rows();
    let b = coeffs(m);
    let a2 = a.mul(a);
    if m == 13 {
        let a4 = a2.mul(&a2);
        let a6 = a2.mul(&a4);
        let w1 = Dual::lin(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], n, 0.0);
        let w2 = Dual::lin(&[(b[7], &a6), (b[5], &a4), (b[3], &a2)], n, b[1]);
        let z1 = Dual::lin(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], n, 0.0);
        let z2 = Dual::lin(&[(b[6], &a6), (b[4], &a4), (b[2], &a2)], n, b[0]);
        let w = Dual::lin(&[(1.0, &a6.mul(&w1)), (1.0, &w2)], n, 0.0);
        let u = a.mul(&w);
        let v = Dual::lin(&[(1.0, &a6.mul(&z1)), (1.0, &z2)], n, 0.0);
        return (u, v);
    }
    let mut powers = alloc::vec![a2];
    while 2 * (powers.len() + 1) < m + 1 {
        let next = powers.last().unwrap().mul(&powers[0]);
        powers.push(next);
    }
    // powers[k] = A^{2(k+1)}
    let odd: alloc::vec::Vec<(f64, &Dual)> =
        powers.iter().enumerate().map(|(k, p)| (b[2 * k + 3], p)).collect();
    let even: alloc::vec::Vec<(f64, &Dual)> =
        powers.iter().enumerate().map(|(k, p)| (b[2 * k + 2], p)).collect();
    let w = Dual::lin(&odd, n, b[1]);
    let u = a.mul(&w);
    let v = Dual::lin(&even, n, b[0]);
    (u, v)
}

fn expm_dual(a: &ComplexMatrix, e: Option<&ComplexMatrix>) -> Result<(ComplexMatrix, Option<ComplexMatrix>)> {
    if !a.is_square() {
        return Err(Error::Dimension("matrix exponential requires a square matrix"));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("matrix exponential input"));
    }
    let norm = a.norm_1();
    let mut degree = 13;
    let mut s = 0i32;
    match THETA.iter().find(|(_, t)| norm <= *t) {
        Some(&(m, _)) => degree = m,
        None => {
            s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
        }
    }
    let scale = 0.5f64.powi(s);
    let ad = Dual { x: a.scale_re(scale), dx: e.map(|e| e.scale_re(scale)) };
    let (u, v) = pade_uv(&ad, degree);
    let q = &v.x - &u.x;
    let p = &v.x + &u.x;
    let mut r = q.solve(&p)?;
    let mut l = match (&u.dx, &v.dx) {
        (Some(du), Some(dv)) => {
            let rhs = &(du + dv) + &(du - dv).matmul(&r);
            Some(q.solve(&rhs)?)
        }
        _ => None,
    };
    for _ in 0..s {
        if let Some(lm) = l.as_ref() {
            l = Some(&r.matmul(lm) + &lm.matmul(&r));
        }
        r = r.matmul(&r);
    }
    Ok((r, l))
}

/// e^A.
pub fn matrix_exponential(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(expm_dual(a, None)?.0)
}

/// Returns (e^A, L_A(E)) where L_A(E) is the Fréchet derivative of exp at A in direction E.
pub fn expm_frechet(a: &ComplexMatrix, e: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if (e.rows(), e.cols()) != (a.rows(), a.cols()) {
        return Err(Error::Dimension("Fréchet direction must match the matrix"));
    }
    let (r, l) = expm_dual(a, Some(e))?;
    Ok((r, l.expect("direction supplied")))
}
