//! Phase estimation split across two machines that share ebits.
//!
//! Machine B (Rydberg, tag `ryd`) holds `t − 1` counting qubits and one channel qubit.
//! Machine A (flux, tag `flux`) holds one channel qubit, one counting qubit and the phase qubit.
//! Register layout for `t` counting qubits: B counting `0..t−1`, B channel `t−1`,
//! A channel `t`, A counting `t+1`, phase `t+2`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuits::gate::{cnot, cphase, cphase_decomposition, h, x, z, Gate};
use crate::circuits::{GateDictionary, QubitCircuit, Simulator};
use crate::error::{Error, Result};
use crate::state::QuantumState;

pub const SYSTEM_B: &str = "ryd";
pub const SYSTEM_A: &str = "flux";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Machine {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Correction {
    X,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalMessage {
    pub from: Machine,
    pub bit: u8,
    pub purpose: Correction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistributedRegister {
    pub counting_b: Vec<usize>,
    pub channel_b: usize,
    pub channel_a: usize,
    pub counting_a: usize,
    pub phase: usize,
}

impl DistributedRegister {
    pub fn new(counting_total: usize) -> Result<Self> {
        if counting_total == 0 {
            return Err(Error::InvalidArgument("at least one counting qubit is required".into()));
        }
        let t = counting_total;
        Ok(Self {
            counting_b: (0..t - 1).collect(),
            channel_b: t - 1,
            channel_a: t,
            counting_a: t + 1,
            phase: t + 2,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.phase + 1
    }

    pub fn counting_total(&self) -> usize {
        self.counting_b.len() + 1
    }

    pub fn machine_a_qubits(&self) -> Vec<usize> {
        vec![self.channel_a, self.counting_a, self.phase]
    }

    pub fn machine_b_qubits(&self) -> Vec<usize> {
        self.counting_b.iter().copied().chain([self.channel_b]).collect()
    }

    pub fn machine_of(&self, q: usize) -> Machine {
        if self.machine_a_qubits().contains(&q) {
            Machine::A
        } else {
            Machine::B
        }
    }

    /// Counting qubits ordered by phase weight: entry j receives the kick 2π·φ·2ʲ.
    pub fn counting_by_weight(&self) -> Vec<usize> {
        self.counting_b.iter().copied().chain([self.counting_a]).collect()
    }

    /// Counting qubits in readout order, most significant estimate bit first.
    pub fn readout_order(&self) -> Vec<usize> {
        self.counting_by_weight()
    }

    fn tag(&self, g: Gate) -> Gate {
        let qs = g.qubits();
        let m = self.machine_of(qs[0]);
        if qs.iter().all(|&q| self.machine_of(q) == m) {
            g.with_system(if m == Machine::A { SYSTEM_A } else { SYSTEM_B })
        } else {
            g
        }
    }

    /// Initial basis state: everything |0⟩ except the phase qubit in |1⟩.
    pub fn initial_state(&self) -> QuantumState {
        let n = self.n_qubits();
        let mut labels = vec![0usize; n];
        labels[self.phase] = 1;
        QuantumState::basis(&vec![2; n], &labels).expect("valid labels")
    }
}

fn apply(sim: &mut Simulator<'_>, reg: &DistributedRegister, g: Gate) -> Result<()> {
    sim.apply_gate(&reg.tag(g))
}

fn apply_all(sim: &mut Simulator<'_>, reg: &DistributedRegister, gs: Vec<Gate>) -> Result<()> {
    for g in gs {
        apply(sim, reg, g)?;
    }
    Ok(())
}

/// Resets both channel qubits and prepares (|00⟩ + |11⟩)/√2 between them.
/// The ebit source is modeled as ideal.
pub fn initialize_e2(sim: &mut Simulator<'_>, reg: &DistributedRegister) -> Result<()> {
    sim.reset(reg.channel_b)?;
    sim.reset(reg.channel_a)?;
    sim.apply_gate(&h(reg.channel_b))?;
    sim.apply_gate(&cnot(reg.channel_b, reg.channel_a))?;
    Ok(())
}

/// Controlled phase from a B qubit to an A qubit through one ebit.
pub fn non_local_cphase(
    sim: &mut Simulator<'_>,
    reg: &DistributedRegister,
    angle: f64,
    control_b: usize,
    target_a: usize,
) -> Result<Vec<ClassicalMessage>> {
    if reg.machine_of(control_b) != Machine::B || reg.machine_of(target_a) != Machine::A {
        return Err(Error::InvalidArgument("control must live on B and target on A".into()));
    }
    let (cb, ca) = (reg.channel_b, reg.channel_a);
    let mut msgs = Vec::with_capacity(2);
    initialize_e2(sim, reg)?;
    apply(sim, reg, cnot(control_b, cb))?;
    let m1 = sim.measure(cb)?.outcome;
    msgs.push(ClassicalMessage { from: Machine::B, bit: m1, purpose: Correction::X });
    if m1 == 1 {
        apply(sim, reg, x(ca))?;
        apply(sim, reg, x(cb))?;
    }
    apply_all(sim, reg, cphase_decomposition(ca, target_a, angle))?;
    apply(sim, reg, h(ca))?;
    let m2 = sim.measure(ca)?.outcome;
    msgs.push(ClassicalMessage { from: Machine::A, bit: m2, purpose: Correction::Z });
    if m2 == 1 {
        apply(sim, reg, z(control_b))?;
        apply(sim, reg, x(ca))?;
    }
    Ok(msgs)
}

/// Controlled phases from the A counting qubit onto several B qubits, sharing one ebit.
pub fn non_local_cphase_group(
    sim: &mut Simulator<'_>,
    reg: &DistributedRegister,
    control_a: usize,
    targets_b: &[(usize, f64)],
) -> Result<Vec<ClassicalMessage>> {
    let (cb, ca) = (reg.channel_b, reg.channel_a);
    let mut msgs = Vec::with_capacity(2);
    initialize_e2(sim, reg)?;
    apply(sim, reg, cnot(control_a, ca))?;
    let m1 = sim.measure(ca)?.outcome;
    msgs.push(ClassicalMessage { from: Machine::A, bit: m1, purpose: Correction::X });
    if m1 == 1 {
        apply(sim, reg, x(cb))?;
        apply(sim, reg, x(ca))?;
    }
    for &(t, angle) in targets_b {
        apply_all(sim, reg, cphase_decomposition(cb, t, angle))?;
    }
    apply(sim, reg, h(cb))?;
    let m2 = sim.measure(cb)?.outcome;
    msgs.push(ClassicalMessage { from: Machine::B, bit: m2, purpose: Correction::Z });
    if m2 == 1 {
        apply(sim, reg, x(cb))?;
        apply(sim, reg, z(control_a))?;
    }
    Ok(msgs)
}

/// Kicks 2π·φ·2ʲ onto counting qubit j from the phase qubit.
pub fn pulse_phase_sequence(sim: &mut Simulator<'_>, reg: &DistributedRegister, phi: f64) -> Result<Vec<ClassicalMessage>> {
    let mut msgs = Vec::new();
    for (j, &q) in reg.counting_by_weight().iter().enumerate() {
        let angle = 2.0 * PI * phi * (1u64 << j) as f64;
        if q == reg.counting_a {
            apply_all(sim, reg, cphase_decomposition(q, reg.phase, angle))?;
        } else {
            msgs.extend(non_local_cphase(sim, reg, angle, q, reg.phase)?);
        }
    }
    Ok(msgs)
}

/// Inverse Fourier ladder over the counting qubits ordered by weight:
/// for p from high to low, H on p then CPHASE(p → q, −π/2^{p−q}) for every q < p.
fn iqft_schedule(reg: &DistributedRegister) -> Vec<(usize, Vec<(usize, f64)>)> {
    let c = reg.counting_by_weight();
    (0..c.len())
        .rev()
        .map(|p| (c[p], (0..p).rev().map(|q| (c[q], -PI / (1u64 << (p - q)) as f64)).collect()))
        .collect()
}

/// Inverse QFT across both machines. Rotations controlled from machine A are grouped through one ebit.
pub fn distributed_inverse_qft(sim: &mut Simulator<'_>, reg: &DistributedRegister) -> Result<Vec<ClassicalMessage>> {
    let mut msgs = Vec::new();
    for (p, rotations) in iqft_schedule(reg) {
        apply(sim, reg, h(p))?;
        if rotations.is_empty() {
            continue;
        }
        if reg.machine_of(p) == Machine::A {
            msgs.extend(non_local_cphase_group(sim, reg, p, &rotations)?);
        } else {
            for (q, angle) in rotations {
                apply_all(sim, reg, cphase_decomposition(p, q, angle))?;
            }
        }
    }
    Ok(msgs)
}

/// The same inverse QFT with direct (single-machine) controlled phases, as a reference.
pub fn local_inverse_qft_circuit(reg: &DistributedRegister) -> QubitCircuit {
    let mut c = QubitCircuit::new(reg.n_qubits());
    for (p, rotations) in iqft_schedule(reg) {
        c.gate(h(p));
        for (q, angle) in rotations {
            c.gate(cphase(p, q, angle));
        }
    }
    c
}

/// Number of ebits consumed by one run.
pub fn e2_count(reg: &DistributedRegister) -> usize {
    let groups = iqft_schedule(reg)
        .iter()
        .filter(|(p, r)| reg.machine_of(*p) == Machine::A && !r.is_empty())
        .count();
    reg.counting_b.len() + groups
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub phase_true: f64,
    pub outcome: String,
    pub messages: Vec<ClassicalMessage>,
    pub shot: usize,
}

#[derive(Clone, Debug)]
pub struct PhaseEstimationResult {
    pub counting_qubits: usize,
    /// Mean over shots of the exact outcome distribution, indexed by the estimate integer.
    pub mean_distribution: Vec<f64>,
    /// Sampled outcome counts, indexed by the estimate integer.
    pub counts: Vec<usize>,
    pub records: Vec<RunRecord>,
}

impl PhaseEstimationResult {
    pub fn probability(&self, outcome: usize) -> f64 {
        self.mean_distribution[outcome]
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let total: usize = self.counts.iter().sum();
        self.counts.iter().map(|&c| c as f64 / total as f64).collect()
    }

    pub fn most_probable(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.mean_distribution.iter().enumerate() {
            if p > self.mean_distribution[best] {
                best = i;
            }
        }
        best
    }
}

/// Bit string of `value` with `width` digits, most significant first.
pub fn bit_string(value: usize, width: usize) -> String {
    (0..width).rev().map(|b| if value >> b & 1 == 1 { '1' } else { '0' }).collect()
}

/// Exact distribution of the counting register, indexed by the estimate integer.
pub fn counting_distribution(state: &QuantumState, reg: &DistributedRegister) -> Vec<f64> {
    let n = reg.n_qubits();
    let order = reg.readout_order();
    let t = order.len();
    let mut dist = vec![0.0; 1 << t];
    for (i, p) in state.probabilities().into_iter().enumerate() {
        let mut a = 0;
        for &q in &order {
            a = (a << 1) | (i >> (n - 1 - q) & 1);
        }
        dist[a] += p;
    }
    let total: f64 = dist.iter().sum();
    dist.iter().map(|p| p / total).collect()
}

/// Seed of shot `k` derived from the run seed.
pub fn shot_seed(seed: u64, shot: usize) -> u64 {
    seed ^ (shot as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// One shot: Hadamard layer, phase kickback, distributed inverse QFT, readout.
pub fn run_shot(
    phi: f64,
    reg: &DistributedRegister,
    dictionary: Option<&GateDictionary>,
    seed: u64,
    shot: usize,
) -> Result<(Vec<f64>, RunRecord)> {
    let mut sim = Simulator::new(reg.initial_state(), shot_seed(seed, shot))?.with_dictionary(dictionary, false);
    let mut messages = Vec::new();
    for q in reg.counting_by_weight() {
        apply(&mut sim, reg, h(q))?;
    }
    messages.extend(pulse_phase_sequence(&mut sim, reg, phi)?);
    messages.extend(distributed_inverse_qft(&mut sim, reg)?);
    let dist = counting_distribution(sim.state(), reg);
    let u: f64 = sim.rng().gen();
    let mut acc = 0.0;
    let mut outcome = dist.len() - 1;
    for (a, p) in dist.iter().enumerate() {
        acc += p;
        if u < acc {
            outcome = a;
            break;
        }
    }
    let record = RunRecord { phase_true: phi, outcome: bit_string(outcome, reg.counting_total()), messages, shot };
    Ok((dist, record))
}

pub fn run_phase_estimation(
    phi: f64,
    counting_total: usize,
    dictionary: Option<&GateDictionary>,
    shots: usize,
    seed: u64,
) -> Result<PhaseEstimationResult> {
    if !(0.0..1.0).contains(&phi) {
        return Err(Error::InvalidArgument(format!("phase {phi} outside [0, 1)")));
    }
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    let reg = DistributedRegister::new(counting_total)?;
    let size = 1usize << counting_total;
    let mut mean = vec![0.0; size];
    let mut counts = vec![0usize; size];
    let mut records = Vec::with_capacity(shots);
    for shot in 0..shots {
        let (dist, rec) = run_shot(phi, &reg, dictionary, seed, shot)?;
        for (m, p) in mean.iter_mut().zip(&dist) {
            *m += p / shots as f64;
        }
        counts[usize::from_str_radix(&rec.outcome, 2).expect("binary outcome")] += 1;
        records.push(rec);
    }
    Ok(PhaseEstimationResult { counting_qubits: counting_total, mean_distribution: mean, counts, records })
}

/// Independent generator for callers that need extra randomness tied to a seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
