//! Fault masking for N-modular-redundant digital systems.
//!
//! The crate provides bit-by-bit majority, distance-metric majority and
//! history-record adaptive majority voters, and the adaptive voter with
//! incoherence scoring together with its dynamically regulated variant.
//! Around them sits a small simulation plant (a 16-bit full adder with
//! stuck-at faults and a bit-flipping sine channel) and the experiment
//! harness used by the `nmr-vote` binary.

pub mod cli;
pub mod config;
pub mod error;
pub mod harness;
pub mod plant;
pub mod voters;
pub mod word;

pub use error::{Error, Result};
pub use voters::{Voter, VoterDecision, VoterKind, VoterParams};
pub use word::{hamming_distance, incoherence, Incoherence, Word};
