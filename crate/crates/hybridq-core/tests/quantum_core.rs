use std::f64::consts::{FRAC_1_SQRT_2, PI};

use hybridq_core::expm::{expm_frechet, matrix_exponential};
use hybridq_core::linalg::kron_all;
use hybridq_core::ops::{create, destroy, identity, projector, sigma_x, sigma_y, sigma_z, standard_operators};
use hybridq_core::state::{partial_trace, state_fidelity, tensor_product, tensor_states, trace_distance};
use hybridq_core::{ComplexMatrix, QuantumState, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn ket(dims: &[usize], amps: &[C64]) -> QuantumState {
    QuantumState::ket_normalized(dims, amps.to_vec()).unwrap()
}

fn random_matrix(n: usize, vals: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| c(vals[2 * (i * n + j)], vals[2 * (i * n + j) + 1]))
}

fn random_density(n: usize, vals: &[f64]) -> ComplexMatrix {
    let a = random_matrix(n, vals);
    let rho = a.matmul(&a.adjoint());
    let tr = rho.trace().re;
    rho.scale_re(1.0 / tr)
}

/// Brute-force Taylor series, summed until the terms vanish.
fn taylor_exp(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..200 {
        term = term.matmul(a).scale_re(1.0 / k as f64);
        sum.axpy(c(1.0, 0.0), &term);
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    sum
}

#[test]
fn kron_of_basis_vectors() {
    let k0 = ComplexMatrix::column(&[c(1.0, 0.0), c(0.0, 0.0)]);
    let k1 = ComplexMatrix::column(&[c(0.0, 0.0), c(1.0, 0.0)]);
    let v = tensor_product(&k0, &k1);
    assert_eq!(v.as_slice(), &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    assert_eq!(tensor_product(&identity(2), &identity(2)), identity(4));
}

#[test]
fn kron_component_order() {
    let b = [c(1.0, 2.0), c(-0.5, 0.3)];
    let a = [c(0.7, -1.0), c(2.0, 0.0)];
    let v = tensor_product(&ComplexMatrix::column(&b), &ComplexMatrix::column(&a));
    let expected = [b[0] * a[0], b[0] * a[1], b[1] * a[0], b[1] * a[1]];
    assert_eq!(v.as_slice(), &expected);
}

#[test]
fn bell_marginal_is_maximally_mixed() {
    let bell = ket(&[2, 2], &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let r = partial_trace(&bell, &[0]).unwrap();
    assert!(r.matrix().max_abs_diff(&identity(2).scale_re(0.5)) < 1e-15);
}

#[test]
fn product_state_marginal() {
    let a = ket(&[2], &[c(0.6, 0.0), c(0.0, 0.8)]);
    let b = ket(&[3], &[c(1.0, 0.0), c(1.0, 1.0), c(0.0, -1.0)]);
    let ab = tensor_states(&a, &b);
    let ra = partial_trace(&ab, &[0]).unwrap();
    let rb = partial_trace(&ab, &[1]).unwrap();
    assert!(ra.matrix().max_abs_diff(a.to_density().matrix()) < 1e-14);
    assert!(rb.matrix().max_abs_diff(b.to_density().matrix()) < 1e-14);
}

#[test]
fn ghz3_trace_over_last_qubit() {
    let mut amps = vec![c(0.0, 0.0); 8];
    amps[0] = c(1.0, 0.0);
    amps[7] = c(1.0, 0.0);
    let ghz = ket(&[2, 2, 2], &amps);
    let r = partial_trace(&ghz, &[0, 1]).unwrap();
    // Oracle: ρ'_{ij} = Σ_k ρ_{(i,k),(j,k)} by direct summation.
    let rho = ghz.to_density();
    let oracle = ComplexMatrix::from_fn(4, 4, |i, j| (0..2).map(|k| rho.matrix()[(2 * i + k, 2 * j + k)]).sum());
    assert!(r.matrix().max_abs_diff(&oracle) < 1e-15);
    let expected = ComplexMatrix::diag(&[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
    assert!(r.matrix().max_abs_diff(&expected) < 1e-15);
}

#[test]
fn partial_trace_rejects_bad_index_sets() {
    let s = QuantumState::basis(&[2, 2], &[0, 1]).unwrap();
    assert!(partial_trace(&s, &[2]).is_err());
    assert!(partial_trace(&s, &[0, 0]).is_err());
}

#[test]
fn exponential_special_cases() {
    assert!(matrix_exponential(&ComplexMatrix::zeros(3, 3)).unwrap().max_abs_diff(&identity(3)) < 1e-15);
    let u = matrix_exponential(&sigma_x().scale(c(0.0, -PI / 2.0))).unwrap();
    assert!(u.max_abs_diff(&sigma_x().scale(c(0.0, -1.0))) < 1e-14);
    assert!(matrix_exponential(&ComplexMatrix::zeros(2, 3)).is_err());
}

#[test]
fn exponential_matches_taylor_oracle() {
    let vals: Vec<f64> = (0..32).map(|k| ((k * 37 % 17) as f64 - 8.0) / 6.0).collect();
    let a = random_matrix(4, &vals);
    let e = matrix_exponential(&a).unwrap();
    let t = taylor_exp(&a);
    assert!(e.max_abs_diff(&t) / t.max_abs() < 1e-12);
}

#[test]
fn frechet_matches_finite_difference() {
    let vals: Vec<f64> = (0..18).map(|k| ((k * 13 % 11) as f64 - 5.0) / 4.0).collect();
    let a = random_matrix(3, &vals);
    let e = random_matrix(3, &vals.iter().rev().copied().collect::<Vec<_>>());
    let (expa, l) = expm_frechet(&a, &e).unwrap();
    assert!(expa.max_abs_diff(&matrix_exponential(&a).unwrap()) < 1e-12);
    let h = 1e-6;
    let mut ap = a.clone();
    ap.axpy(c(h, 0.0), &e);
    let mut am = a.clone();
    am.axpy(c(-h, 0.0), &e);
    let fd = (&matrix_exponential(&ap).unwrap() - &matrix_exponential(&am).unwrap()).scale_re(0.5 / h);
    assert!(fd.max_abs_diff(&l) / l.max_abs() < 1e-7);
}

#[test]
fn fidelity_examples() {
    let zero = QuantumState::basis(&[2], &[0]).unwrap();
    let one = QuantumState::basis(&[2], &[1]).unwrap();
    let plus = ket(&[2], &[c(1.0, 0.0), c(1.0, 0.0)]);
    let mixed = QuantumState::density(&[2], identity(2).scale_re(0.5)).unwrap();
    assert!(state_fidelity(&zero, &one).unwrap().abs() < 1e-15);
    assert!((state_fidelity(&plus, &mixed).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
    assert!((state_fidelity(&mixed, &mixed).unwrap() - 1.0).abs() < 1e-9);
    assert!(state_fidelity(&zero, &QuantumState::basis(&[3], &[0]).unwrap()).is_err());
}

#[test]
fn trace_distance_of_orthogonal_states() {
    let zero = QuantumState::basis(&[2], &[0]).unwrap();
    let one = QuantumState::basis(&[2], &[1]).unwrap();
    assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn standard_operator_identities() {
    let ops = standard_operators(2);
    assert!(ops.sx.matmul(&ops.sx).max_abs_diff(&identity(2)) < 1e-15);
    let k1 = [c(0.0, 0.0), c(1.0, 0.0)];
    assert_eq!(ops.a.matvec(&k1), vec![c(1.0, 0.0), c(0.0, 0.0)]);
    // σ_z = |e⟩⟨e| − |g⟩⟨g| with e at index 0.
    let sz = &projector(2, 0, 0) - &projector(2, 1, 1);
    assert_eq!(sz, sigma_z());
    assert_eq!(ops.adag, destroy(2).adjoint());
    let n3 = create(3).matmul(&destroy(3));
    assert!(n3.max_abs_diff(&ComplexMatrix::diag(&[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)])) < 1e-15);
    let comm = sigma_x().commutator(&sigma_y());
    assert!(comm.max_abs_diff(&sigma_z().scale(c(0.0, 2.0))) < 1e-15);
}

#[test]
fn state_construction_validates() {
    assert!(QuantumState::ket(&[2], vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    assert!(QuantumState::density(&[2], identity(2)).is_err());
    assert!(QuantumState::density(&[2], ComplexMatrix::diag(&[c(1.5, 0.0), c(-0.5, 0.0)])).is_err());
    assert!(QuantumState::basis(&[2, 3], &[1, 3]).is_err());
}

#[test]
fn solve_and_inverse() {
    let vals: Vec<f64> = (0..32).map(|k| ((k * 7 % 13) as f64 - 6.0) / 3.0).collect();
    let a = random_matrix(4, &vals);
    let inv = a.inverse().unwrap();
    assert!(a.matmul(&inv).max_abs_diff(&identity(4)) < 1e-11);
    assert!(ComplexMatrix::zeros(3, 3).inverse().is_err());
}

#[test]
fn vectorization_identity() {
    let vals: Vec<f64> = (0..18).map(|k| (k as f64 * 0.37).sin()).collect();
    let a = random_matrix(3, &vals);
    let x = random_matrix(3, &vals[3..].iter().chain(&vals[..3]).copied().collect::<Vec<_>>());
    let b = a.adjoint();
    let lhs = a.matmul(&x).matmul(&b).vec_cols();
    let rhs = b.transpose().kron(&a).matvec(&x.vec_cols());
    for (l, r) in lhs.iter().zip(&rhs) {
        assert!((l - r).norm() < 1e-13);
    }
    assert_eq!(ComplexMatrix::unvec_cols(&x.vec_cols(), 3, 3), x);
}

proptest! {
    #[test]
    fn kron_is_associative(v in prop::collection::vec(-2.0f64..2.0, 24)) {
        let a = random_matrix(2, &v[0..8]);
        let b = random_matrix(2, &v[8..16]);
        let cm = random_matrix(2, &v[16..24]);
        let left = a.kron(&b).kron(&cm);
        let right = a.kron(&b.kron(&cm));
        prop_assert!(left.max_abs_diff(&right) <= 1e-15 * left.max_abs().max(1.0));
        prop_assert!(left.max_abs_diff(&kron_all(&[a, b, cm])) <= 1e-15 * left.max_abs().max(1.0));
    }

    #[test]
    fn partial_trace_preserves_trace(v in prop::collection::vec(-1.0f64..1.0, 128), keep in 0usize..3) {
        let rho = QuantumState::density(&[2, 2, 2], random_density(8, &v)).unwrap();
        let r = partial_trace(&rho, &[keep]).unwrap();
        prop_assert!((r.trace() - 1.0).abs() <= 1e-12);
        let all = partial_trace(&rho, &[0, 1, 2]).unwrap();
        prop_assert!(all.matrix().max_abs_diff(rho.matrix()) <= 1e-15);
    }

    #[test]
    fn anti_hermitian_exponential_is_unitary(v in prop::collection::vec(-3.0f64..3.0, 32)) {
        let m = random_matrix(4, &v);
        let h = &m + &m.adjoint();
        let u = matrix_exponential(&h.scale(c(0.0, -1.0))).unwrap();
        prop_assert!(u.is_unitary(1e-10));
    }

    #[test]
    fn exponential_relative_error_for_moderate_norm(v in prop::collection::vec(-1.0f64..1.0, 18)) {
        let m = random_matrix(3, &v);
        let scale = 10.0 / m.norm_1().max(1e-3);
        let a = m.scale_re(scale.min(3.0));
        let e = matrix_exponential(&a).unwrap();
        let t = taylor_exp(&a);
        prop_assert!(e.max_abs_diff(&t) <= 1e-12 * t.max_abs().max(1.0) * 10.0);
    }

    #[test]
    fn density_fidelity_is_symmetric(v in prop::collection::vec(-1.0f64..1.0, 32), w in prop::collection::vec(-1.0f64..1.0, 32)) {
        let a = QuantumState::density(&[4], random_density(4, &v)).unwrap();
        let b = QuantumState::density(&[4], random_density(4, &w)).unwrap();
        let fab = state_fidelity(&a, &b).unwrap();
        let fba = state_fidelity(&b, &a).unwrap();
        prop_assert!((fab - fba).abs() <= 1e-9);
        prop_assert!((0.0..=1.0).contains(&fab));
    }

    #[test]
    fn pure_fidelity_is_one_only_for_equal_states(v in prop::collection::vec(-1.0f64..1.0, 8)) {
        let amps: Vec<C64> = (0..4).map(|i| c(v[2 * i], v[2 * i + 1])).collect();
        prop_assume!(amps.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-3);
        let a = ket(&[4], &amps);
        prop_assert!((state_fidelity(&a, &a).unwrap() - 1.0).abs() <= 1e-9);
        let mut other = amps.clone();
        other[0] += c(1.0, 0.0);
        other[1] -= c(0.0, 1.0);
        let b = ket(&[4], &other);
        let f = state_fidelity(&a, &b).unwrap();
        let dist = trace_distance(&a, &b).unwrap();
        prop_assert!(f < 1.0 - 1e-9 || dist < 1e-6);
    }
}
