use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, I, ONE, ZERO};

/// A gate placed on a register. The local matrix acts on `controls ++ targets`,
/// with the first listed qubit as the most significant local bit.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub name: String,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
    pub params: Vec<f64>,
    /// Hardware tag used for dictionary lookup, e.g. `ryd` or `flux`.
    pub system: Option<String>,
    pub matrix: ComplexMatrix,
}

fn expi(x: f64) -> C64 {
    C64::new(0.0, x).exp()
}

fn arity(name: &str) -> Option<(usize, usize, usize)> {
    // (controls, targets, params)
    Some(match name {
        "H" | "SNOT" | "X" | "Y" | "Z" => (0, 1, 0),
        "RZ" => (0, 1, 1),
        "U" => (0, 1, 3),
        "CNOT" | "CZ" => (1, 1, 0),
        "CPHASE" => (1, 1, 1),
        "RN" | "RN_INV" => (0, 2, 1),
        "SWAP" => (0, 2, 0),
        _ => return None,
    })
}

/// Exact matrix for a named gate.
///
/// * `RZ(λ) = diag(e^{−iλ/2}, e^{iλ/2})`
/// * `CPHASE(φ) = diag(1, 1, 1, e^{iφ})`
/// * `RN(n) = diag(1, e^{−2πi/2ⁿ}, 1, e^{2πi/2ⁿ})`, and `RN_INV` its inverse
/// * `U(θ, φ, γ) = [[cos θ/2, −e^{iγ} sin θ/2], [e^{iφ} sin θ/2, e^{i(φ+γ)} cos θ/2]]`
pub fn gate_matrix(name: &str, params: &[f64]) -> Result<ComplexMatrix> {
    let (_, _, np) = arity(name).ok_or_else(|| Error::UnknownGate(name.to_string()))?;
    if params.len() != np {
        return Err(Error::InvalidArgument(format!("{name} expects {np} parameter(s), got {}", params.len())));
    }
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    Ok(match name {
        "H" | "SNOT" => ComplexMatrix::from_rows(&[&[h, h], &[h, -h]]),
        "X" => ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
        "Y" => ComplexMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]]),
        "Z" => ComplexMatrix::diag(&[ONE, -ONE]),
        "RZ" => ComplexMatrix::diag(&[expi(-params[0] / 2.0), expi(params[0] / 2.0)]),
        "U" => {
            let (t, p, g) = (params[0], params[1], params[2]);
            let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
            ComplexMatrix::from_rows(&[
                &[C64::new(c, 0.0), -expi(g) * s],
                &[expi(p) * s, expi(p + g) * c],
            ])
        }
        "CNOT" => {
            let mut m = ComplexMatrix::zeros(4, 4);
            m[(0, 0)] = ONE;
            m[(1, 1)] = ONE;
            m[(2, 3)] = ONE;
            m[(3, 2)] = ONE;
            m
        }
        "CZ" => ComplexMatrix::diag(&[ONE, ONE, ONE, -ONE]),
        "CPHASE" => ComplexMatrix::diag(&[ONE, ONE, ONE, expi(params[0])]),
        "RN" | "RN_INV" => {
            let sign = if name == "RN" { 1.0 } else { -1.0 };
            let a = sign * 2.0 * PI / 2f64.powf(params[0]);
            ComplexMatrix::diag(&[ONE, expi(-a), ONE, expi(a)])
        }
        "SWAP" => {
            let mut m = ComplexMatrix::zeros(4, 4);
            m[(0, 0)] = ONE;
            m[(1, 2)] = ONE;
            m[(2, 1)] = ONE;
            m[(3, 3)] = ONE;
            m
        }
        _ => unreachable!(),
    })
}

impl Gate {
    pub fn new(name: &str, targets: &[usize], controls: &[usize], params: &[f64]) -> Result<Self> {
        let upper = name.to_ascii_uppercase();
        let (nc, nt, _) = arity(&upper).ok_or_else(|| Error::UnknownGate(name.to_string()))?;
        if controls.len() != nc || targets.len() != nt {
            return Err(Error::InvalidArgument(format!(
                "{upper} expects {nc} control(s) and {nt} target(s)"
            )));
        }
        let mut all: Vec<usize> = controls.iter().chain(targets).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != nc + nt {
            return Err(Error::InvalidArgument("targets and controls must be distinct".into()));
        }
        let matrix = gate_matrix(&upper, params)?;
        Ok(Self {
            name: upper,
            targets: targets.to_vec(),
            controls: controls.to_vec(),
            params: params.to_vec(),
            system: None,
            matrix,
        })
    }

    pub fn with_system(mut self, system: &str) -> Self {
        self.system = Some(system.to_string());
        self
    }

    /// Qubits in local-matrix order.
    pub fn qubits(&self) -> Vec<usize> {
        self.controls.iter().chain(&self.targets).copied().collect()
    }

    /// Base name used in gate dictionaries.
    pub fn dictionary_base(&self) -> Option<&'static str> {
        match self.name.as_str() {
            "H" | "SNOT" => Some("snot"),
            "X" => Some("x"),
            "Z" => Some("z"),
            "CNOT" => Some("cnot"),
            _ => None,
        }
    }

    pub fn dictionary_key(&self) -> Option<String> {
        match (self.dictionary_base(), &self.system) {
            (Some(b), Some(s)) => Some(format!("{b}_{s}")),
            _ => None,
        }
    }
}

pub fn h(q: usize) -> Gate {
    Gate::new("H", &[q], &[], &[]).unwrap()
}

pub fn x(q: usize) -> Gate {
    Gate::new("X", &[q], &[], &[]).unwrap()
}

pub fn z(q: usize) -> Gate {
    Gate::new("Z", &[q], &[], &[]).unwrap()
}

pub fn rz(q: usize, lambda: f64) -> Gate {
    Gate::new("RZ", &[q], &[], &[lambda]).unwrap()
}

pub fn cnot(control: usize, target: usize) -> Gate {
    Gate::new("CNOT", &[target], &[control], &[]).unwrap()
}

pub fn cphase(control: usize, target: usize, phi: f64) -> Gate {
    Gate::new("CPHASE", &[target], &[control], &[phi]).unwrap()
}

pub fn swap(a: usize, b: usize) -> Gate {
    Gate::new("SWAP", &[a, b], &[], &[]).unwrap()
}

/// RZ(φ/2) on target, RZ(φ/2) on control, CNOT, RZ(−φ/2) on target, CNOT.
/// The product equals e^{−iφ/4} · CPHASE(φ).
pub fn cphase_decomposition(control: usize, target: usize, phi: f64) -> Vec<Gate> {
    vec![
        rz(target, phi / 2.0),
        rz(control, phi / 2.0),
        cnot(control, target),
        rz(target, -phi / 2.0),
        cnot(control, target),
    ]
}
