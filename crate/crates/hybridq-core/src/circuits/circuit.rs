use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gate::Gate;
use super::register::{apply_density, apply_density_superop, apply_ket, expand_operator};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};
use crate::state::{QuantumState, StateKind};

/// Gate realizations keyed by `"name_system"`, e.g. `snot_ryd` or `cnot_flux`.
/// A value is either a 2ᵏ×2ᵏ operator or a 4ᵏ×4ᵏ column-stacked superoperator.
pub type GateDictionary = BTreeMap<String, ComplexMatrix>;

#[derive(Clone, Debug, PartialEq)]
pub enum CircuitItem {
    Gate(Gate),
    /// Measures a qubit; the outcome becomes classical bit number `k` for the k-th measurement.
    Measure(usize),
    /// Applies the gate when the referenced classical bit is 1.
    Conditional { bit: usize, gate: Gate },
}

#[derive(Clone, Debug, PartialEq)]
pub struct QubitCircuit {
    pub n_qubits: usize,
    items: Vec<CircuitItem>,
    measurements: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub outcome: u8,
    pub probabilities: (f64, f64),
}

impl QubitCircuit {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits > 0, "register must hold at least one qubit");
        Self { n_qubits, items: Vec::new(), measurements: 0 }
    }

    pub fn items(&self) -> &[CircuitItem] {
        &self.items
    }

    fn check_gate(&self, g: &Gate) -> Result<()> {
        if g.qubits().iter().any(|&q| q >= self.n_qubits) {
            return Err(Error::InvalidArgument(format!("gate {} addresses a qubit out of range", g.name)));
        }
        Ok(())
    }

    pub fn push(&mut self, item: CircuitItem) -> Result<()> {
        match &item {
            CircuitItem::Gate(g) => self.check_gate(g)?,
            CircuitItem::Measure(q) => {
                if *q >= self.n_qubits {
                    return Err(Error::InvalidArgument(format!("measured qubit {q} out of range")));
                }
                self.measurements += 1;
            }
            CircuitItem::Conditional { bit, gate } => {
                self.check_gate(gate)?;
                if *bit >= self.measurements {
                    return Err(Error::InvalidArgument(format!("condition bit {bit} precedes its measurement")));
                }
            }
        }
        self.items.push(item);
        Ok(())
    }

    pub fn gate(&mut self, g: Gate) -> &mut Self {
        self.push(CircuitItem::Gate(g)).expect("gate in range");
        self
    }

    pub fn gates(&mut self, gs: impl IntoIterator<Item = Gate>) -> &mut Self {
        for g in gs {
            self.gate(g);
        }
        self
    }

    pub fn measure(&mut self, q: usize) -> &mut Self {
        self.push(CircuitItem::Measure(q)).expect("qubit in range");
        self
    }

    /// Product of all gates, ignoring measurements and conditionals.
    pub fn unitary(&self) -> ComplexMatrix {
        let d = 1usize << self.n_qubits;
        let mut u = ComplexMatrix::identity(d);
        for item in &self.items {
            if let CircuitItem::Gate(g) = item {
                u = expand_operator(&g.matrix, &g.qubits(), self.n_qubits).matmul(&u);
            }
        }
        u
    }
}

/// Stateful executor of gates and measurements on a qubit register.
pub struct Simulator<'a> {
    n: usize,
    state: QuantumState,
    dictionary: Option<&'a GateDictionary>,
    strict: bool,
    rng: ChaCha8Rng,
    records: Vec<MeasurementRecord>,
}

impl<'a> Simulator<'a> {
    pub fn new(state: QuantumState, seed: u64) -> Result<Self> {
        let d = state.dim();
        if !d.is_power_of_two() || state.dims().iter().any(|&x| x != 2) {
            return Err(Error::Dimension("simulator registers are made of qubits"));
        }
        Ok(Self {
            n: d.trailing_zeros() as usize,
            state,
            dictionary: None,
            strict: false,
            rng: ChaCha8Rng::seed_from_u64(seed),
            records: Vec::new(),
        })
    }

    /// Installs a gate dictionary. Superoperator entries switch the state to density form.
    pub fn with_dictionary(mut self, dictionary: Option<&'a GateDictionary>, strict: bool) -> Self {
        if let Some(dict) = dictionary {
            let has_superop = dict.iter().any(|(k, m)| {
                let arity = if k.starts_with("cnot") { 2 } else { 1 };
                m.rows() == 1 << (2 * arity)
            });
            if has_superop {
                self.state = self.state.to_density();
            }
        }
        self.dictionary = dictionary;
        self.strict = strict;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn state(&self) -> &QuantumState {
        &self.state
    }

    pub fn into_state(self) -> QuantumState {
        self.state
    }

    pub fn records(&self) -> &[MeasurementRecord] {
        &self.records
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn lookup(&self, g: &Gate) -> Result<Option<&'a ComplexMatrix>> {
        let Some(dict) = self.dictionary else { return Ok(None) };
        let Some(key) = g.dictionary_key() else { return Ok(None) };
        match dict.get(&key) {
            Some(m) => Ok(Some(m)),
            None if self.strict => Err(Error::MissingGate(key)),
            None => Ok(None),
        }
    }

    fn renormalize(&mut self) {
        let tr = self.state.trace();
        if tr > 0.0 && (tr - 1.0).abs() > 0.0 {
            let dims = self.state.dims().to_vec();
            let kind = self.state.kind();
            let m = self.state.matrix().clone();
            let m = match kind {
                StateKind::Ket => m.scale_re(1.0 / tr.sqrt()),
                StateKind::Density => m.scale_re(1.0 / tr),
            };
            self.state = match kind {
                StateKind::Ket => QuantumState::ket(&dims, m.into_vec()).expect("normalized"),
                StateKind::Density => QuantumState::density_unchecked(&dims, m),
            };
        }
    }

    /// Applies an operator (2ᵏ×2ᵏ) or superoperator (4ᵏ×4ᵏ) to the listed qubits.
    pub fn apply_matrix(&mut self, m: &ComplexMatrix, qubits: &[usize]) -> Result<()> {
        let k = qubits.len();
        if qubits.iter().any(|&q| q >= self.n) {
            return Err(Error::InvalidArgument("qubit out of range".into()));
        }
        let dims = self.state.dims().to_vec();
        if m.rows() == 1 << k {
            match self.state.kind() {
                StateKind::Ket => {
                    let mut amps = self.state.matrix().clone().into_vec();
                    apply_ket(&mut amps, self.n, qubits, m);
                    self.state = ket_from_column(&dims, amps);
                }
                StateKind::Density => {
                    let mut rho = self.state.matrix().clone();
                    apply_density(&mut rho, self.n, qubits, m);
                    self.state = QuantumState::density_unchecked(&dims, rho);
                }
            }
        } else if m.rows() == 1 << (2 * k) {
            let mut rho = self.state.to_density().into_matrix();
            apply_density_superop(&mut rho, self.n, qubits, m);
            self.state = QuantumState::density_unchecked(&dims, rho);
        } else {
            return Err(Error::Dimension("gate matrix does not match its qubit count"));
        }
        Ok(())
    }

    /// Applies a gate, substituting the dictionary realization when one exists.
    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        let qubits = g.qubits();
        match self.lookup(g)? {
            Some(m) => {
                self.apply_matrix(m, &qubits)?;
                self.renormalize();
            }
            None => self.apply_matrix(&g.matrix, &qubits)?,
        }
        Ok(())
    }

    /// Probability of reading 1 on qubit q.
    pub fn prob_one(&self, q: usize) -> f64 {
        let bit = self.n - 1 - q;
        self.state
            .probabilities()
            .iter()
            .enumerate()
            .filter(|(i, _)| i >> bit & 1 == 1)
            .map(|(_, p)| p)
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    /// Projects qubit q onto `outcome` and renormalizes. Returns the outcome probability.
    pub fn project(&mut self, q: usize, outcome: u8) -> Result<f64> {
        let p1 = self.prob_one(q);
        let p = if outcome == 1 { p1 } else { 1.0 - p1 };
        if p < 1e-12 {
            return Err(Error::DegenerateMeasurement(p));
        }
        let bit = self.n - 1 - q;
        let keep = |i: usize| (i >> bit & 1) as u8 == outcome;
        let dims = self.state.dims().to_vec();
        let m = self.state.matrix();
        self.state = match self.state.kind() {
            StateKind::Ket => {
                let amps: Vec<C64> = m
                    .as_slice()
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| if keep(i) { a / p.sqrt() } else { ZERO })
                    .collect();
                ket_from_column(&dims, amps)
            }
            StateKind::Density => {
                let d = m.rows();
                let rho = ComplexMatrix::from_fn(d, d, |i, j| if keep(i) && keep(j) { m[(i, j)] / p } else { ZERO });
                QuantumState::density_unchecked(&dims, rho)
            }
        };
        Ok(p)
    }

    /// Projective measurement with POVM {|0⟩⟨0|, |1⟩⟨1|} on qubit q.
    pub fn measure(&mut self, q: usize) -> Result<MeasurementRecord> {
        if q >= self.n {
            return Err(Error::InvalidArgument(format!("qubit {q} out of range")));
        }
        let p1 = self.prob_one(q);
        let outcome = if self.rng.gen::<f64>() < p1 { 1 } else { 0 };
        self.project(q, outcome)?;
        let rec = MeasurementRecord { qubit: q, outcome, probabilities: (1.0 - p1, p1) };
        self.records.push(rec);
        Ok(rec)
    }

    /// Returns qubit q to |0⟩. Exact channel for densities; measure-and-flip for kets.
    pub fn reset(&mut self, q: usize) -> Result<()> {
        let x = super::gate::gate_matrix("X", &[])?;
        match self.state.kind() {
            StateKind::Ket => {
                let p1 = self.prob_one(q);
                let outcome = if self.rng.gen::<f64>() < p1 { 1 } else { 0 };
                self.project(q, outcome)?;
                if outcome == 1 {
                    self.apply_matrix(&x, &[q])?;
                }
            }
            StateKind::Density => {
                let bit = self.n - 1 - q;
                let dims = self.state.dims().to_vec();
                let m = self.state.matrix();
                let d = m.rows();
                let mask = 1usize << bit;
                let rho = ComplexMatrix::from_fn(d, d, |i, j| {
                    if i & mask != 0 || j & mask != 0 {
                        ZERO
                    } else {
                        m[(i, j)] + m[(i | mask, j | mask)]
                    }
                });
                self.state = QuantumState::density_unchecked(&dims, rho);
            }
        }
        Ok(())
    }
}

fn ket_from_column(dims: &[usize], amps: Vec<C64>) -> QuantumState {
    QuantumState::ket_normalized(dims, amps).expect("non-zero ket")
}

/// Runs a circuit. Gates with a dictionary entry for their `name_system` key use it;
/// with `strict`, a tagged gate without an entry is an error.
pub fn apply_circuit(
    circuit: &QubitCircuit,
    state: &QuantumState,
    dictionary: Option<&GateDictionary>,
    strict: bool,
    seed: u64,
) -> Result<(QuantumState, Vec<MeasurementRecord>)> {
    if state.dim() != 1usize << circuit.n_qubits {
        return Err(Error::Dimension("state does not match circuit register"));
    }
    let mut sim = Simulator::new(state.clone(), seed)?.with_dictionary(dictionary, strict);
    let mut bits: Vec<u8> = Vec::new();
    for item in circuit.items() {
        match item {
            CircuitItem::Gate(g) => sim.apply_gate(g)?,
            CircuitItem::Measure(q) => bits.push(sim.measure(*q)?.outcome),
            CircuitItem::Conditional { bit, gate } => {
                if bits[*bit] == 1 {
                    sim.apply_gate(gate)?;
                }
            }
        }
    }
    let records = sim.records().to_vec();
    Ok((sim.into_state(), records))
}

/// Standalone POVM measurement of one qubit.
pub fn measure_qubit_povm(state: &QuantumState, qubit: usize, rng: &mut ChaCha8Rng) -> Result<(MeasurementRecord, QuantumState)> {
    let mut sim = Simulator::new(state.clone(), 0)?;
    let n = sim.n_qubits();
    if qubit >= n {
        return Err(Error::InvalidArgument(format!("qubit {qubit} out of range")));
    }
    let p1 = sim.prob_one(qubit);
    let outcome = if rng.gen::<f64>() < p1 { 1 } else { 0 };
    sim.project(qubit, outcome)?;
    Ok((MeasurementRecord { qubit, outcome, probabilities: (1.0 - p1, p1) }, sim.into_state()))
}
