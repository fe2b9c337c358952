use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use hybridq::config::ExperimentConfig;
use hybridq::sweep::{best_probability, run_sweep};
use hybridq_core::circuits::gate::cphase;
use hybridq_core::circuits::{apply_circuit, cphase_decomposition, gate_matrix, qft_circuit, QubitCircuit, Simulator};
use hybridq_core::dpe::{distributed_inverse_qft, local_inverse_qft_circuit, non_local_cphase, run_phase_estimation, DistributedRegister};
use hybridq_core::ghz::{run_ghz_sequence, GhzOptions};
use hybridq_core::grape::{evolve_map, optimize_gate, performance_and_gradient, ControlPulse, GateJob, GradientMode, GrapeOptions, GrapeProblem};
use hybridq_core::hamiltonians::{GrapeSystem, HybridParams, ModelParams};
use hybridq_core::lindblad::{evolve, unitary_superop, LindbladSet, Schedule, TimeGrid};
use hybridq_core::linalg::kron_all;
use hybridq_core::ops::{sigma_minus, sigma_x, sigma_y, sigma_z};
use hybridq_core::state::{partial_trace, trace_distance};
use hybridq_core::tomography::{chi_from_map, process_fidelity, OperatorBasis};
use hybridq_core::{ComplexMatrix, QuantumState, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn expi(a: f64) -> C64 {
    C64::from_polar(1.0, a)
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn noiseless_exactness() -> Check {
    let start = Instant::now();
    let res = run_phase_estimation(3.0 / 16.0, 4, None, 1, 0).map_err(|e| e.to_string())?;
    let p = res.probability(0b0011);
    let secs = start.elapsed().as_secs_f64();
    ensure((p - 1.0).abs() <= 1e-9 && secs < 10.0, format!("P(0011) = {p:.12}, {secs:.2} s"))
}

fn precision_bound() -> Check {
    let res = run_phase_estimation(1.0 / 8.0, 2, None, 1, 0).map_err(|e| e.to_string())?;
    let bound = 4.0 / (PI * PI) - 1e-6;
    let (p0, p1) = (res.probability(0b00), res.probability(0b01));
    ensure(p0 >= bound && p1 >= bound, format!("P(00) = {p0:.6}, P(01) = {p1:.6}, bound {bound:.6}"))
}

fn qft_oracle() -> Check {
    let mut worst: f64 = 0.0;
    for n in 1..=5 {
        let d = 1usize << n;
        let s = 1.0 / (d as f64).sqrt();
        let dft = ComplexMatrix::from_fn(d, d, |k, j| expi(2.0 * PI * (j * k) as f64 / d as f64) * s);
        worst = worst.max(qft_circuit(n).unitary().max_abs_diff(&dft));
    }
    let n = 4;
    let u = qft_circuit(n).unitary();
    let mut product_worst: f64 = 0.0;
    for j in 0..1usize << n {
        let factors: Vec<ComplexMatrix> = (1..=n)
            .map(|l| ComplexMatrix::column(&[c(FRAC_1_SQRT_2, 0.0), expi(2.0 * PI * j as f64 / (1u64 << l) as f64) * FRAC_1_SQRT_2]))
            .collect();
        let column = ComplexMatrix::from_fn(1 << n, 1, |k, _| u[(k, j)]);
        product_worst = product_worst.max(column.max_abs_diff(&kron_all(&factors)));
    }
    ensure(worst <= 1e-10 && product_worst <= 1e-10, format!("DFT deviation {worst:.1e}, product form deviation {product_worst:.1e}"))
}

fn random_register_state(reg: &DistributedRegister, rng: &mut ChaCha8Rng) -> QuantumState {
    let n = reg.n_qubits();
    let amps = (0..1usize << n)
        .map(|i| {
            let free = (i >> (n - 1 - reg.channel_a)) & 1 == 0 && (i >> (n - 1 - reg.channel_b)) & 1 == 0;
            if free {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                c(0.0, 0.0)
            }
        })
        .collect();
    QuantumState::ket_normalized(&vec![2; n], amps).unwrap()
}

fn non_local_matches_local() -> Check {
    let reg = DistributedRegister::new(4).map_err(|e| e.to_string())?;
    let keep: Vec<usize> = (0..reg.n_qubits()).filter(|&q| q != reg.channel_a && q != reg.channel_b).collect();
    let reduce = |s: &QuantumState| partial_trace(s, &keep).unwrap();
    let iqft = local_inverse_qft_circuit(&reg);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut cp_worst, mut iqft_worst): (f64, f64) = (0.0, 0.0);
    for k in 0..20u64 {
        let s = random_register_state(&reg, &mut rng);
        let angle = rng.gen_range(-PI..PI);
        let control = reg.counting_b[k as usize % reg.counting_b.len()];
        let mut sim = Simulator::new(s.clone(), k).unwrap();
        non_local_cphase(&mut sim, &reg, angle, control, reg.phase).unwrap();
        let mut local = QubitCircuit::new(reg.n_qubits());
        local.gate(cphase(control, reg.phase, angle));
        let oracle = apply_circuit(&local, &s, None, false, 0).unwrap().0;
        cp_worst = cp_worst.max(trace_distance(&reduce(sim.state()), &reduce(&oracle)).unwrap());

        let mut sim = Simulator::new(s.clone(), 100 + k).unwrap();
        distributed_inverse_qft(&mut sim, &reg).unwrap();
        let oracle = apply_circuit(&iqft, &s, None, false, 0).unwrap().0;
        iqft_worst = iqft_worst.max(trace_distance(&reduce(sim.state()), &reduce(&oracle)).unwrap());
    }
    ensure(cp_worst <= 1e-8 && iqft_worst <= 1e-8, format!("CPHASE distance {cp_worst:.1e}, inverse QFT distance {iqft_worst:.1e}"))
}

fn cphase_decomposition_exact() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let phi = rng.gen_range(-2.0 * PI..2.0 * PI);
        let mut circ = QubitCircuit::new(2);
        circ.gates(cphase_decomposition(0, 1, phi));
        let expected = gate_matrix("CPHASE", &[phi]).unwrap().scale(expi(-phi / 4.0));
        worst = worst.max(circ.unitary().max_abs_diff(&expected));
    }
    ensure(worst <= 1e-12, format!("max deviation {worst:.1e} over 100 angles"))
}

fn solver_physics() -> Check {
    let ground = QuantumState::basis(&[2], &[0]).unwrap();
    let excited = QuantumState::basis(&[2], &[1]).unwrap();
    let omega = 2.0;
    let grid = TimeGrid::new(0.0, 10.0, 1000).unwrap();
    let rabi = evolve(&Schedule::constant(sigma_x().scale_re(0.5 * omega)), &ground, &LindbladSet::new(), &grid).unwrap();
    let mut rabi_err: f64 = 0.0;
    let mut drift: f64 = 0.0;
    for (t, s) in rabi.times.iter().zip(&rabi.states) {
        rabi_err = rabi_err.max((s.matrix()[(1, 1)].re - (omega * t / 2.0).sin().powi(2)).abs());
        drift = drift.max((s.trace() - 1.0).abs());
    }
    let gamma = 0.7;
    let mut decay = LindbladSet::new();
    decay.push(sigma_minus(), gamma);
    let grid = TimeGrid::new(0.0, 4.0, 401).unwrap();
    let traj = evolve(&Schedule::constant(ComplexMatrix::zeros(2, 2)), &excited, &decay, &grid).unwrap();
    let mut decay_err: f64 = 0.0;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        decay_err = decay_err.max((s.matrix()[(1, 1)].re - (-gamma * t).exp()).abs());
        drift = drift.max((s.trace() - 1.0).abs());
    }
    decay.push(sigma_z(), 0.3);
    let driven = evolve(&Schedule::constant(sigma_x().scale_re(1.3)), &ground, &decay, &grid).unwrap();
    for s in &driven.states {
        drift = drift.max((s.trace() - 1.0).abs());
    }
    ensure(
        drift <= 1e-8 && rabi_err <= 1e-6 && decay_err <= 1e-6,
        format!("trace drift {drift:.1e}, Rabi error {rabi_err:.1e}, decay error {decay_err:.1e}"),
    )
}

fn ghz_protocol() -> Check {
    let start = Instant::now();
    let hp = HybridParams::default();
    let opts = GhzOptions::new(&hp).map_err(|e| e.to_string())?;
    let clean = run_ghz_sequence(&hp, false, &opts).map_err(|e| e.to_string())?;
    let noisy = run_ghz_sequence(&hp, true, &opts).map_err(|e| e.to_string())?;
    let gap = clean.fidelity_vs_ghz - noisy.fidelity_vs_ghz;
    let secs = start.elapsed().as_secs_f64();
    ensure(
        clean.fidelity_vs_ghz >= 0.90 && (8.0..=25.0).contains(&clean.total_time) && gap.abs() <= 0.02 && secs < 120.0,
        format!(
            "noiseless F = {:.4} at {:.3} ns, noisy F = {:.4}, gap {gap:.4}, {secs:.1} s",
            clean.fidelity_vs_ghz, clean.total_time, noisy.fidelity_vs_ghz
        ),
    )
}

fn grape_gradient() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let a = ComplexMatrix::from_fn(2, 2, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let drift = (&a + &a.adjoint()).scale_re(0.5);
        let mut set = LindbladSet::new();
        set.push(sigma_minus(), rng.gen_range(0.0..0.3));
        set.push(sigma_z(), rng.gen_range(0.0..0.3));
        let target = gate_matrix("H", &[]).unwrap();
        let p = GrapeProblem::new(drift, vec![sigma_x(), sigma_y(), sigma_z()], set, &target).unwrap();
        let n = rng.gen_range(3..8);
        let pulse = ControlPulse::new(n, 3, 0.2, (0..3 * n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let (_, g) = performance_and_gradient(&p, &pulse, GradientMode::Exact).unwrap();
        let fd: Vec<f64> = (0..pulse.amplitudes.len())
            .map(|k| {
                let mut plus = pulse.clone();
                plus.amplitudes[k] += h;
                let mut minus = pulse.clone();
                minus.amplitudes[k] -= h;
                (p.fidelity(&evolve_map(&p, &plus).unwrap()) - p.fidelity(&evolve_map(&p, &minus).unwrap())) / (2.0 * h)
            })
            .collect();
        let scale = fd.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        worst = worst.max(g.iter().zip(&fd).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale);
    }
    ensure(worst <= 1e-4, format!("max relative error {worst:.1e} over 30 problems"))
}

fn gate_process_fidelity(system: GrapeSystem, gate: &'static str, n_qubits: usize, n_ts: usize, max_iter: usize, zeta: f64) -> f64 {
    let mut model = ModelParams::default();
    model.flux.zeta = zeta;
    let key = format!("{}_{}", gate.to_ascii_lowercase(), system.tag());
    let job = GateJob { key, system, n_qubits, gate };
    let opts = GrapeOptions { n_ts, max_iter, max_wall_time: f64::INFINITY, ..GrapeOptions::default() };
    let r = optimize_gate(&job, &model, &opts, None).unwrap();
    let basis = OperatorBasis::pauli(n_qubits).unwrap();
    let ideal = chi_from_map(&unitary_superop(&gate_matrix(gate, &[]).unwrap()), &basis).unwrap();
    process_fidelity(&ideal, &chi_from_map(&r.final_map, &basis).unwrap()).unwrap()
}

fn grape_gate_quality() -> Check {
    let start = Instant::now();
    let h = gate_process_fidelity(GrapeSystem::Rydberg, "H", 1, 50, 500, 10.0);
    let cnot = gate_process_fidelity(GrapeSystem::Rydberg, "CNOT", 2, 200, 1000, 10.0);
    let flux = gate_process_fidelity(GrapeSystem::Flux, "CNOT", 2, 200, 1000, 10.0);
    let secs = start.elapsed().as_secs_f64();
    ensure(
        h >= 0.99 && cnot >= 0.95 && flux < cnot && secs <= 1800.0,
        format!("Rydberg H {h:.5}, Rydberg CNOT {cnot:.5}, flux CNOT (zeta 10) {flux:.5}, {secs:.0} s"),
    )
}

fn chi_matrix() -> Check {
    let basis = OperatorBasis::pauli(1).unwrap();
    let chi = chi_from_map(&unitary_superop(&gate_matrix("H", &[]).unwrap()), &basis).unwrap();
    let half = ["xx", "xz", "zx", "zz"];
    let mut worst: f64 = 0.0;
    for (a, la) in basis.labels.iter().enumerate() {
        for (b, lb) in basis.labels.iter().enumerate() {
            let expect = if half.contains(&format!("{la}{lb}").as_str()) { 0.5 } else { 0.0 };
            worst = worst.max((chi.entries[(a, b)] - c(expect, 0.0)).norm());
        }
    }
    let f = process_fidelity(&chi, &chi).unwrap();
    ensure(worst <= 1e-12 && (f - 1.0).abs() <= 1e-12, format!("max deviation {worst:.1e}, F(chi, chi) = {f:.12}"))
}

fn sweep_trend() -> Check {
    let start = Instant::now();
    let mut best = Vec::new();
    for zeta in [10.0, 1000.0] {
        let mut c = ExperimentConfig::default();
        c.set_zeta(zeta);
        c.nts_list = vec![50, 200];
        c.iters_list = vec![100, 800];
        c.shots = 10;
        c.seed = 7;
        let rows = run_sweep(&c).map_err(|e| e.to_string())?;
        best.push(best_probability(&rows).unwrap_or(f64::NAN));
    }
    let secs = start.elapsed().as_secs_f64();
    let gap = best[1] - best[0];
    ensure(gap >= 0.2 && secs <= 7200.0, format!("best zeta=1000 {:.4}, best zeta=10 {:.4}, difference {gap:.4}, {secs:.0} s", best[1], best[0]))
}

fn run_cli(dir: &Path, tag: &str, args: &[&str]) -> Result<Vec<(String, Vec<u8>)>, String> {
    let sub = dir.join(tag);
    std::fs::create_dir_all(&sub).map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_hybridq"))
        .args(args)
        .arg("--out")
        .arg(sub.join("out"))
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&sub)
        .map_err(|e| e.to_string())?
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files.push(("stdout".into(), out.stdout));
    Ok(files)
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    std::fs::write(dir.path().join("ghz.toml"), "version = 1\n[ghz]\ngrid_density = 2000\n").map_err(|e| e.to_string())?;
    let commands: [&[&str]; 5] = [
        &["validate", "--seed", "3"],
        &["tomography", "--ideal", "cnot"],
        &["grape-gate", "--gate", "h", "--system", "flux", "--nts", "20", "--iters", "30", "--seed", "11"],
        &["sweep", "--nts", "8,12", "--iters", "5", "--shots", "3", "--seed", "2"],
        &["--config", "ghz.toml", "ghz"],
    ];
    let mut files = 0;
    for (k, args) in commands.iter().enumerate() {
        let first = run_cli(dir.path(), &format!("a{k}"), args)?;
        let second = run_cli(dir.path(), &format!("b{k}"), args)?;
        for ((na, a), (nb, b)) in first.iter().zip(&second) {
            if na != nb || a != b {
                return Err(format!("{args:?} differs in {na}"));
            }
        }
        if first.len() != second.len() {
            return Err(format!("{args:?} wrote different file sets"));
        }
        files += first.len();
    }
    Ok(format!("{} commands, {files} outputs byte-identical across reruns", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("noiseless exactness", noiseless_exactness),
        ("precision bound", precision_bound),
        ("QFT oracle", qft_oracle),
        ("non-local equals local", non_local_matches_local),
        ("CPHASE decomposition", cphase_decomposition_exact),
        ("solver physics", solver_physics),
        ("GHZ protocol", ghz_protocol),
        ("GRAPE gradient", grape_gradient),
        ("GRAPE gate quality", grape_gate_quality),
        ("chi matrix", chi_matrix),
        ("sweep trend", sweep_trend),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
