//! Exact dynamics of a spin-1/2 star (one central qubit, L ligands) with
//! isotropic Heisenberg coupling: pairwise concurrence, spin observables,
//! W-state detection and closed-form verification.

pub mod analysis;
pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod tolerances;

pub use error::{Error, Result};
pub use model::{OneParticleAmplitudes, StarModel};
