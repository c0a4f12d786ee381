//! Quantum capacities of correlated dephasing channels.
//!
//! A dephasing "memory channel" applies a random string of diagonal phase
//! unitaries to the transmitted systems, with string probabilities set by the
//! computational-basis diagonal of a many-body environment (a Markov chain, a
//! classical Ising chain, or a rank-1 matrix product state). The quantum
//! capacity of such a channel is `log d` minus the per-site limit of the
//! diagonal entropy of the environment.
//!
//! The crate computes that entropy rate through three mutually cross-checking
//! routes (brute-force finite-size enumeration, the Perron data of a 2x2
//! transfer matrix, and a thermodynamic free-energy derivative), constructs
//! the channels explicitly at small use counts (Kraus sets, Choi states,
//! hashing bound, coherent information, teleportation through the Choi
//! state), and checks the forgetfulness conditions that make the capacity
//! formula operational.

pub mod channels;
pub mod cli;
pub mod env;
pub mod error;
pub mod forgetfulness;
pub mod numerics;
pub mod rates;

pub use error::{Error, Result};
