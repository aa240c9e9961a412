//! Noise-addition measures for qubit channels and one-mode Gaussian channels.
//!
//! Two functionals quantify how far a channel is from being entanglement
//! breaking (EB): the smallest admixture `μ_c` of a completely depolarizing
//! channel that makes it EB, and the smallest number of self-compositions
//! `n_c` after which it is EB.

pub mod amendable;
pub mod channel;
pub mod error;
pub mod fixtures;
pub mod gad;
pub mod gaussian;
pub mod measures;
pub mod numerics;
pub mod optim;
pub mod sample;
pub mod separability;
pub mod sweep;
pub mod verify;

pub use channel::{BlochVector, Channel, DensityMatrix, GadParams, KrausChannel, UnitalChannel};
pub use error::{Error, Result};
pub use measures::{NcResult, NoiseReport, OptimizerConfig};
