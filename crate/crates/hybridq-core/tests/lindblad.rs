use hybridq_core::eigh::eigh;
use hybridq_core::expm::matrix_exponential;
use hybridq_core::lindblad::{
    apply_superop, evolve, fidelity_series, find_optimal_time, liouvillian, unitary_superop, LindbladSet, Schedule, TimeGrid,
    EXACT_PROPAGATOR_MAX_DIM,
};
use hybridq_core::linalg::ComplexMatrix;
use hybridq_core::ops::{create, destroy, projector, sigma_minus, sigma_x, sigma_z};
use hybridq_core::{QuantumState, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ground() -> QuantumState {
    QuantumState::basis(&[2], &[0]).unwrap()
}

fn excited() -> QuantumState {
    QuantumState::basis(&[2], &[1]).unwrap()
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (&a + &a.adjoint()).scale_re(0.5)
}

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn random_density(n: usize, rng: &mut ChaCha8Rng) -> QuantumState {
    let a = random_matrix(n, rng);
    let rho = a.matmul(&a.adjoint());
    let tr = rho.trace().re;
    QuantumState::density(&[n], rho.scale_re(1.0 / tr)).unwrap()
}

#[test]
fn empty_liouvillian_keeps_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rho = random_density(3, &mut rng);
    let grid = TimeGrid::new(0.0, 5.0, 11).unwrap();
    let traj = evolve(&Schedule::constant(ComplexMatrix::zeros(3, 3)), &rho, &LindbladSet::new(), &grid).unwrap();
    assert_eq!(traj.times.len(), 11);
    assert_eq!(traj.states.len(), 11);
    for s in &traj.states {
        assert!(s.matrix().max_abs_diff(rho.matrix()) < 1e-14);
    }
}

#[test]
fn grid_validation() {
    assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
    assert!(TimeGrid::new(1.0, 1.0, 5).is_err());
    let g = TimeGrid::new(1.0, 2.0, 5).unwrap();
    assert_eq!(g.times(), vec![1.0, 1.25, 1.5, 1.75, 2.0]);
    assert!(Schedule::piecewise(vec![]).is_err());
    assert!(Schedule::piecewise(vec![(1.0, sigma_x()), (1.0, sigma_z())]).is_err());
}

#[test]
fn dimension_mismatch() {
    let mut set = LindbladSet::new();
    set.push(ComplexMatrix::identity(3), 1.0);
    assert!(liouvillian(&sigma_x(), &set).is_err());
    assert!(liouvillian(&ComplexMatrix::zeros(2, 3), &LindbladSet::new()).is_err());
    let grid = TimeGrid::new(0.0, 1.0, 3).unwrap();
    assert!(evolve(&Schedule::constant(ComplexMatrix::zeros(3, 3)), &ground(), &LindbladSet::new(), &grid).is_err());
}

#[test]
fn spontaneous_decay_is_exponential() {
    let gamma = 0.7;
    let mut set = LindbladSet::new();
    set.push(sigma_minus(), gamma);
    let grid = TimeGrid::new(0.0, 4.0, 401).unwrap();
    let traj = evolve(&Schedule::constant(ComplexMatrix::zeros(2, 2)), &excited(), &set, &grid).unwrap();
    for (t, s) in traj.times.iter().zip(&traj.states) {
        assert!((s.matrix()[(1, 1)].re - (-gamma * t).exp()).abs() < 1e-6);
    }
    let l = liouvillian(&ComplexMatrix::zeros(2, 2), &set).unwrap();
    let rate = apply_superop(&l, excited().to_density().matrix());
    assert!((rate[(1, 1)].re + gamma).abs() < 1e-15);
}

#[test]
fn pure_dephasing_of_plus_state() {
    let gamma = 0.4;
    let mut set = LindbladSet::new();
    set.push(projector(2, 1, 1), gamma);
    let plus = QuantumState::ket(&[2], vec![C64::new(0.5f64.sqrt(), 0.0); 2]).unwrap();
    let grid = TimeGrid::new(0.0, 3.0, 31).unwrap();
    let traj = evolve(&Schedule::constant(ComplexMatrix::zeros(2, 2)), &plus, &set, &grid).unwrap();
    // Analytic: D[|1⟩⟨1|] damps the coherence at rate γ/2.
    for (t, s) in traj.times.iter().zip(&traj.states) {
        assert!((s.matrix()[(0, 1)].re - 0.5 * (-0.5 * gamma * t).exp()).abs() < 1e-12);
        assert!((s.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
    }
}

#[test]
fn resonant_rabi_drive() {
    let omega = 2.0;
    let h = sigma_x().scale_re(0.5 * omega);
    let grid = TimeGrid::new(0.0, 10.0, 1000).unwrap();
    let traj = evolve(&Schedule::constant(h), &ground(), &LindbladSet::new(), &grid).unwrap();
    let mut drift: f64 = 0.0;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let pe = s.matrix()[(1, 1)].re;
        assert!((pe - (omega * t / 2.0).sin().powi(2)).abs() < 1e-6);
        drift = drift.max((s.trace() - 1.0).abs());
    }
    assert!(drift <= 1e-8);
    let (t_star, f_star) = find_optimal_time(&traj, &excited()).unwrap();
    assert!((t_star - std::f64::consts::PI / omega).abs() <= grid.dt());
    assert!(f_star > 0.99999);
}

#[test]
fn optimal_time_prefers_earliest() {
    let mut set = LindbladSet::new();
    set.push(sigma_minus(), 1.0);
    let grid = TimeGrid::new(0.5, 3.0, 26).unwrap();
    let traj = evolve(&Schedule::constant(ComplexMatrix::zeros(2, 2)), &excited(), &set, &grid).unwrap();
    let (t, f) = find_optimal_time(&traj, &excited()).unwrap();
    assert_eq!(t, 0.5);
    assert!((f - 1.0).abs() < 1e-12);
    // A stationary state ties everywhere.
    let traj = evolve(&Schedule::constant(ComplexMatrix::zeros(2, 2)), &ground(), &set, &grid).unwrap();
    assert_eq!(find_optimal_time(&traj, &ground()).unwrap().0, 0.5);
    let series = fidelity_series(&traj, &ground()).unwrap();
    assert!(series.iter().all(|f| (f - 1.0).abs() < 1e-12));
}

#[test]
fn piecewise_schedule_switches_hamiltonian() {
    let omega = 1.0;
    let pi = std::f64::consts::PI;
    let sched = Schedule::piecewise(vec![(0.0, sigma_x().scale_re(0.5 * omega)), (pi, ComplexMatrix::zeros(2, 2))]).unwrap();
    let grid = TimeGrid::new(0.0, 2.0 * pi, 201).unwrap();
    let traj = evolve(&sched, &ground(), &LindbladSet::new(), &grid).unwrap();
    let last = traj.states.last().unwrap();
    assert!((last.matrix()[(1, 1)].re - 1.0).abs() < 1e-10);
}

#[test]
fn large_systems_use_substepped_integrator() {
    let n = EXACT_PROPAGATOR_MAX_DIM + 2;
    let a = destroy(n);
    let h = &create(n).matmul(&a) + &(&a + &create(n)).scale_re(0.3);
    let rho0 = QuantumState::basis(&[n], &[0]).unwrap();
    let grid = TimeGrid::new(0.0, 1.0, 11).unwrap();
    let traj = evolve(&Schedule::constant(h.clone()), &rho0, &LindbladSet::new(), &grid).unwrap();
    let u = matrix_exponential(&h.scale(C64::new(0.0, -1.0))).unwrap();
    let exact = unitary_superop(&u);
    let expected = apply_superop(&exact, rho0.to_density().matrix());
    assert!(traj.states.last().unwrap().matrix().max_abs_diff(&expected) < 1e-8);
}

#[test]
fn unitary_evolution_matches_propagator() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let h = random_hermitian(4, &mut rng);
        let rho = random_density(4, &mut rng);
        let grid = TimeGrid::new(0.0, 2.0, 41).unwrap();
        let traj = evolve(&Schedule::constant(h.clone()), &rho, &LindbladSet::new(), &grid).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let u = matrix_exponential(&h.scale(C64::new(0.0, -t))).unwrap();
            let expect = u.matmul(rho.matrix()).matmul(&u.adjoint());
            assert!(s.matrix().max_abs_diff(&expect) < 1e-8);
        }
    }
}

#[test]
fn halving_step_is_converged() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let h = random_hermitian(3, &mut rng);
    let mut set = LindbladSet::new();
    set.push(random_matrix(3, &mut rng), 0.2);
    let rho = random_density(3, &mut rng);
    let coarse = evolve(&Schedule::constant(h.clone()), &rho, &set, &TimeGrid::new(0.0, 3.0, 101).unwrap()).unwrap();
    let fine = evolve(&Schedule::constant(h), &rho, &set, &TimeGrid::new(0.0, 3.0, 201).unwrap()).unwrap();
    let a = coarse.states.last().unwrap();
    let b = fine.states.last().unwrap();
    assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn open_evolution_stays_physical(seed in any::<u64>(), rate in 0.0f64..2.0, t_end in 0.1f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(3, &mut rng);
        let mut set = LindbladSet::new();
        set.push(random_matrix(3, &mut rng), rate);
        set.push(random_hermitian(3, &mut rng), 0.5 * rate);
        let rho = random_density(3, &mut rng);
        let traj = evolve(&Schedule::constant(h), &rho, &set, &TimeGrid::new(0.0, t_end, 50).unwrap()).unwrap();
        for s in &traj.states {
            prop_assert!((s.trace() - 1.0).abs() <= 1e-8);
            prop_assert!(s.matrix().is_hermitian(1e-9));
            let min = eigh(s.matrix()).unwrap().values[0];
            prop_assert!(min >= -1e-7);
        }
    }

    #[test]
    fn dissipator_is_linear_in_rate(seed in any::<u64>(), scale in 0.0f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(2, &mut rng);
        let zero = ComplexMatrix::zeros(2, 2);
        let mut one = LindbladSet::new();
        one.push(a.clone(), 1.0);
        let mut scaled = LindbladSet::new();
        scaled.push(a, scale);
        let l1 = liouvillian(&zero, &one).unwrap();
        let ls = liouvillian(&zero, &scaled).unwrap();
        prop_assert!(ls.max_abs_diff(&l1.scale_re(scale)) < 1e-12);
    }
}
