//! Physical Hamiltonians and noise models for the Rydberg, flux-qubit and hybrid systems.

pub mod flux;
pub mod hybrid;
pub mod models;
pub mod rydberg;

pub use flux::{critical_frustration, flux_lindblads, flux_potential, flux_system_hamiltonian, FluxParams};
pub use hybrid::{hybrid_hamiltonian, hybrid_lindblads, HybridParams};
pub use models::{grape_problem, GrapeSystem, ModelParams};
pub use rydberg::{rydberg_hamiltonian, rydberg_lindblads, rydberg_pair_eigenenergies, vdw_crossover_radius, RydbergParams};

/// 2π.
pub const TAU: f64 = core::f64::consts::TAU;
