//! Gate-level circuits, measurement and Fourier-transform builders.

pub mod circuit;
pub mod gate;
pub mod qft;
pub mod register;
pub mod text;

pub use circuit::{apply_circuit, measure_qubit_povm, CircuitItem, GateDictionary, MeasurementRecord, QubitCircuit, Simulator};
pub use gate::{cphase_decomposition, gate_matrix, Gate};
pub use qft::{inverse_qft_circuit, qft_circuit};
