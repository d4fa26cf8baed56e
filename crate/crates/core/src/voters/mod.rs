//! The voting algorithms and a uniform stateful [`Voter`] over them.

mod adaptive;
mod incoherence;
mod majority;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::word::Word;

pub use adaptive::{adaptive_majority_decide, adaptive_majority_vote, AgreementHistoryState};
pub use incoherence::{
    adaptive_incoherence_vote, dynamic_beta_update, incoherence_score, update_incoherence_history,
    DynamicRegulationConfig, IncoherenceVerdict, IncoherenceVoterState, DEFAULT_ALPHA,
    DEFAULT_BETA,
};
pub use majority::{
    bitwise_majority, distance_metric_vote, majority_group, MajorityGroupConfig, MAX_GROUP_MODULES,
};

/// A voter's output word, and which module it was taken from when the
/// voter selected rather than synthesized it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VoterDecision {
    pub output: Word,
    pub source_index: Option<usize>,
}

impl VoterDecision {
    pub(crate) fn selected(outputs: &[Word], index: usize) -> Self {
        Self {
            output: outputs[index],
            source_index: Some(index),
        }
    }

    pub(crate) fn synthesized(output: Word) -> Self {
        Self {
            output,
            source_index: None,
        }
    }
}

pub(crate) fn check_module_count(outputs: &[Word]) -> Result<()> {
    if outputs.len() < 2 {
        return Err(Error::TooFewModules(outputs.len()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VoterKind {
    /// Majority voter using the distance metric.
    DistanceMetric,
    /// Bit-by-bit majority voter.
    Bitwise,
    /// History-record adaptive majority voter.
    AdaptiveMajority,
    /// Adaptive voter with incoherence scoring, fixed beta.
    Incoherence,
    /// Incoherence voter with two-state beta regulation.
    DynamicIncoherence,
}

impl VoterKind {
    pub const ALL: [VoterKind; 5] = [
        VoterKind::DistanceMetric,
        VoterKind::Bitwise,
        VoterKind::AdaptiveMajority,
        VoterKind::Incoherence,
        VoterKind::DynamicIncoherence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VoterKind::DistanceMetric => "distance",
            VoterKind::Bitwise => "bitwise",
            VoterKind::AdaptiveMajority => "adaptive-majority",
            VoterKind::Incoherence => "incoherence",
            VoterKind::DynamicIncoherence => "dynamic",
        }
    }
}

impl fmt::Display for VoterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl serde::Serialize for VoterKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl FromStr for VoterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VoterKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown voter `{s}` (expected one of: distance, bitwise, adaptive-majority, incoherence, dynamic)"
                ))
            })
    }
}

/// Parameters shared by every voter in an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoterParams {
    pub alpha: f64,
    pub beta: f64,
    pub regulation: DynamicRegulationConfig,
    pub group: MajorityGroupConfig,
}

impl Default for VoterParams {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            regulation: DynamicRegulationConfig::default(),
            group: MajorityGroupConfig::default(),
        }
    }
}

/// One voter instance with whatever state its algorithm carries.
#[derive(Debug, Clone, PartialEq)]
pub enum Voter {
    Bitwise,
    DistanceMetric(MajorityGroupConfig),
    AdaptiveMajority {
        group: MajorityGroupConfig,
        history: AgreementHistoryState,
    },
    Incoherence(IncoherenceVoterState),
    DynamicIncoherence {
        state: IncoherenceVoterState,
        regulation: DynamicRegulationConfig,
    },
}

impl Voter {
    pub fn new(kind: VoterKind, k: usize, params: &VoterParams) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewModules(k));
        }
        Ok(match kind {
            VoterKind::Bitwise => Voter::Bitwise,
            VoterKind::DistanceMetric => Voter::DistanceMetric(params.group),
            VoterKind::AdaptiveMajority => Voter::AdaptiveMajority {
                group: params.group,
                history: AgreementHistoryState::new(k)?,
            },
            VoterKind::Incoherence => {
                Voter::Incoherence(IncoherenceVoterState::new(k, params.alpha, params.beta)?)
            }
            VoterKind::DynamicIncoherence => {
                params.regulation.validate()?;
                Voter::DynamicIncoherence {
                    state: IncoherenceVoterState::new(k, params.alpha, params.regulation.beta_low)?,
                    regulation: params.regulation,
                }
            }
        })
    }

    pub fn kind(&self) -> VoterKind {
        match self {
            Voter::Bitwise => VoterKind::Bitwise,
            Voter::DistanceMetric(_) => VoterKind::DistanceMetric,
            Voter::AdaptiveMajority { .. } => VoterKind::AdaptiveMajority,
            Voter::Incoherence(_) => VoterKind::Incoherence,
            Voter::DynamicIncoherence { .. } => VoterKind::DynamicIncoherence,
        }
    }

    /// One decision followed by exactly one state update.
    pub fn vote_step(&mut self, outputs: &[Word]) -> Result<VoterDecision> {
        check_module_count(outputs)?;
        match self {
            Voter::Bitwise => bitwise_majority(outputs).map(VoterDecision::synthesized),
            Voter::DistanceMetric(group) => distance_metric_vote(outputs, group),
            Voter::AdaptiveMajority { group, history } => {
                adaptive_majority_vote(outputs, history, group)
            }
            Voter::Incoherence(state) => incoherence_step(state, outputs),
            Voter::DynamicIncoherence { state, regulation } => {
                dynamic_beta_update(state, regulation)?;
                incoherence_step(state, outputs)
            }
        }
    }

    /// Incoherence state, for the two incoherence-scoring variants.
    pub fn incoherence_state(&self) -> Option<&IncoherenceVoterState> {
        match self {
            Voter::Incoherence(state) | Voter::DynamicIncoherence { state, .. } => Some(state),
            _ => None,
        }
    }

    /// Back to the freshly constructed state.
    pub fn reset(&mut self) {
        match self {
            Voter::Bitwise | Voter::DistanceMetric(_) => {}
            Voter::AdaptiveMajority { history, .. } => history.reset(),
            Voter::Incoherence(state) => state.reset(),
            Voter::DynamicIncoherence { state, regulation } => {
                state.reset();
                state.beta = regulation.beta_low.clamp(0.0, 1.0);
            }
        }
    }
}

fn incoherence_step(state: &mut IncoherenceVoterState, outputs: &[Word]) -> Result<VoterDecision> {
    let verdict = adaptive_incoherence_vote(outputs, state)?;
    update_incoherence_history(state, outputs, &verdict.decision.output)?;
    Ok(verdict.decision)
}
