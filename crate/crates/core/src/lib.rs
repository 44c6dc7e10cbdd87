//! Exact dynamics of spin-1/2 chains with always-on nearest and
//! next-nearest-neighbor Ising coupling.
//!
//! The crate covers four layers:
//!
//! - [`operator`] and [`linalg`]: Pauli-string operators, Hermitian
//!   exponentials, spectral norms and the phase-optimized gate distance.
//! - [`chain`]: the XXZ chain Hamiltonians and piecewise-constant control
//!   evolution, with [`sector`] blocks for excitation-conserving schedules.
//! - [`deviation`]: gate deviation caused by ignoring the next-nearest
//!   coupling, compared against closed-form lower bounds.
//! - [`encoded`]: the two-spins-per-qubit blockade encoding and its CPHASE,
//!   sigma^x and sigma^z gates, verified by full-chain simulation.
//! - [`josephson`]: capacitance networks of Cooper-pair boxes mapped onto
//!   effective Ising couplings.
//!
//! The [`cli`] module backs the `spinchain` binary.

pub mod chain;
pub mod cli;
pub mod deviation;
pub mod encoded;
pub mod error;
pub mod josephson;
pub mod linalg;
pub mod operator;
pub mod sector;

pub use error::{Error, Result};
