//! Experiment runners: the progressive-failure adder availability scenario
//! and the noisy-channel BER sweep.

mod ber;
mod scenario;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::voters::{IncoherenceVoterState, VoterKind};

pub use ber::{run_ber_sweep, BerConfig, BerReport, BerRow, BitCounts};
pub use scenario::{
    run_availability_scenario, DiagnosisRecord, RunReport, ScenarioConfig, SystemRow,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FaultStatus {
    FaultFree,
    Faulty,
}

impl FaultStatus {
    pub fn symbol(self) -> char {
        match self {
            FaultStatus::FaultFree => 'N',
            FaultStatus::Faulty => 'F',
        }
    }
}

/// Fault status of every module during one test session, in module order:
/// `FNNNN` means module 1 is faulty and modules 2-5 are fault-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SessionPattern {
    statuses: Vec<FaultStatus>,
}

impl SessionPattern {
    pub fn new(statuses: Vec<FaultStatus>) -> Self {
        Self { statuses }
    }

    /// Modules `0..n_faulty` faulty, the rest fault-free.
    pub fn progressive(k: usize, n_faulty: usize) -> Self {
        let statuses = (0..k)
            .map(|i| {
                if i < n_faulty {
                    FaultStatus::Faulty
                } else {
                    FaultStatus::FaultFree
                }
            })
            .collect();
        Self { statuses }
    }

    /// The `k`-session progressive-failure scenario: module 1 fails first,
    /// then module 2, and so on until every module is faulty.
    pub fn progressive_scenario(k: usize) -> Vec<Self> {
        (1..=k).map(|n| Self::progressive(k, n)).collect()
    }

    pub fn statuses(&self) -> &[FaultStatus] {
        &self.statuses
    }

    pub fn len(&self) -> usize {
        self.statuses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statuses.is_empty()
    }

    pub fn has_fault_free(&self) -> bool {
        self.statuses.contains(&FaultStatus::FaultFree)
    }

    pub fn faulty_count(&self) -> usize {
        self.statuses
            .iter()
            .filter(|s| **s == FaultStatus::Faulty)
            .count()
    }
}

impl fmt::Display for SessionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.statuses
            .iter()
            .try_for_each(|s| write!(f, "{}", s.symbol()))
    }
}

impl FromStr for SessionPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let statuses = s
            .chars()
            .map(|c| match c {
                'N' | 'n' => Ok(FaultStatus::FaultFree),
                'F' | 'f' => Ok(FaultStatus::Faulty),
                other => Err(Error::Parse(format!(
                    "session pattern `{s}`: expected N or F, found `{other}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if statuses.is_empty() {
            return Err(Error::Parse("empty session pattern".into()));
        }
        Ok(Self { statuses })
    }
}

/// A row label in a report: a raw replica or a voter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum System {
    Module(usize),
    Channel(usize),
    Voter(VoterKind),
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            System::Module(i) => write!(f, "module{}", i + 1),
            System::Channel(i) => write!(f, "channel{}", i + 1),
            System::Voter(kind) => write!(f, "{kind}"),
        }
    }
}

impl Serialize for System {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Correct-output tally for one system.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub n_correct: u64,
    pub n_total: u64,
}

impl Counts {
    pub fn record(&mut self, correct: bool) {
        self.n_total += 1;
        self.n_correct += u64::from(correct);
    }

    pub fn merge(&mut self, other: &Counts) {
        self.n_correct += other.n_correct;
        self.n_total += other.n_total;
    }

    pub fn availability(&self) -> Result<f64> {
        availability(self.n_correct, self.n_total)
    }
}

/// Fraction of correct outputs, `n_correct / n_total`.
pub fn availability(n_correct: u64, n_total: u64) -> Result<f64> {
    if n_total == 0 {
        return Err(Error::EmptyCount);
    }
    if n_correct > n_total {
        return Err(Error::Config(format!(
            "n_correct ({n_correct}) exceeds n_total ({n_total})"
        )));
    }
    Ok(n_correct as f64 / n_total as f64)
}

/// Module `i` is diagnosed faulty iff its incoherence history exceeds `v_th`.
pub fn diagnose_modules(state: &IncoherenceVoterState, v_th: f64) -> Vec<FaultStatus> {
    state
        .histories()
        .iter()
        .map(|&rs| {
            if rs > v_th {
                FaultStatus::Faulty
            } else {
                FaultStatus::FaultFree
            }
        })
        .collect()
}

pub(crate) fn seeded_stream(seed: u64, stream: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
