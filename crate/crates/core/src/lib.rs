//! Doubly-entangled-photon (DEP) purification and nested quantum repeater
//! simulation, with an exact density-matrix oracle for every closed-form
//! fidelity recursion.

pub mod chain;
pub mod error;
pub mod experiments;
pub mod noise;
pub mod oracle;
pub mod purification;
pub mod register;
pub mod state;

pub use error::{Error, Result};
pub use noise::NoiseParams;
pub use state::{DepBasisState, FullPairState, PairEnsemble};
