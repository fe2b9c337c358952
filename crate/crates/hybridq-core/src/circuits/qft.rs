use core::f64::consts::PI;

use super::circuit::QubitCircuit;
use super::gate::{cphase, h, swap};

/// Quantum Fourier transform on n qubits, qubit 0 most significant.
/// Hadamard plus controlled-phase ladder, then the reversal swaps, so the matrix is the DFT
/// `F[k][j] = e^{2πijk/2ⁿ}/√2ⁿ`.
pub fn qft_circuit(n: usize) -> QubitCircuit {
    let mut c = QubitCircuit::new(n);
    for j in 0..n {
        c.gate(h(j));
        for k in j + 1..n {
            c.gate(cphase(k, j, 2.0 * PI / (1u64 << (k - j + 1)) as f64));
        }
    }
    for j in 0..n / 2 {
        c.gate(swap(j, n - 1 - j));
    }
    c
}

/// Inverse of [`qft_circuit`]: swaps first, then the conjugate ladder in reverse order.
pub fn inverse_qft_circuit(n: usize) -> QubitCircuit {
    let mut c = QubitCircuit::new(n);
    for j in 0..n / 2 {
        c.gate(swap(j, n - 1 - j));
    }
    for j in (0..n).rev() {
        for k in (j + 1..n).rev() {
            c.gate(cphase(k, j, -2.0 * PI / (1u64 << (k - j + 1)) as f64));
        }
        c.gate(h(j));
    }
    c
}
