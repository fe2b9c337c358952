//! Simulation core for hybrid Rydberg-atom / flux-qubit quantum hardware.
//!
//! The crate is `no_std` with `alloc`. Everything that touches files, threads or the
//! wall clock lives in the companion `hybridq` crate.
//!
//! Conventions used throughout:
//!
//! * Subsystem 0 is the leftmost tensor factor and the most significant bit of a basis label.
//! * Superoperators act on column-stacked density matrices, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
//! * State fidelity uses the amplitude convention, `F = sqrt(⟨ψ|ρ|ψ⟩)`.
//! * Physical dynamics use ħ = 1 with angular frequencies in rad/ns and times in ns.

#![no_std]
#![allow(unused_imports)]

extern crate alloc;

pub mod circuits;
pub mod dpe;
pub mod eigh;
pub mod error;
pub mod expm;
pub mod ghz;
pub mod grape;
pub mod hamiltonians;
pub mod lindblad;
pub mod linalg;
pub mod ops;
pub mod state;
pub mod tomography;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use num_complex::Complex64 as C64;
pub use state::{QuantumState, StateKind};
