//! History-record adaptive majority voter used as a comparison baseline.
//!
//! The majority group is formed as for the distance-metric voter. When it
//! holds at least `(k + 1) / 2` modules, the member with the largest
//! history record wins. Otherwise the voter has no result of its own and
//! falls back to the distance-metric decision.
//!
//! History records accumulate agreement with the emitted decision:
//! `h[i] += 1 - inc(y_i, y)`. Larger means more reliable.

use crate::error::{Error, Result};
use crate::word::{incoherence, Word};

use super::majority::{majority_group, select_central, MajorityGroupConfig};
use super::VoterDecision;

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementHistoryState {
    h: Vec<f64>,
}

impl AgreementHistoryState {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewModules(k));
        }
        Ok(Self { h: vec![0.0; k] })
    }

    /// Starts from explicit records. Entries must be finite and non-negative.
    pub fn with_records(h: Vec<f64>) -> Result<Self> {
        if h.len() < 2 {
            return Err(Error::TooFewModules(h.len()));
        }
        if let Some(&bad) = h.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::ParameterOutOfRange {
                name: "h",
                value: bad,
                range: "[0, inf)",
            });
        }
        Ok(Self { h })
    }

    pub fn records(&self) -> &[f64] {
        &self.h
    }

    pub fn k(&self) -> usize {
        self.h.len()
    }

    pub fn reset(&mut self) {
        self.h.iter_mut().for_each(|v| *v = 0.0);
    }

    /// Credits every module with its agreement against `decision`.
    pub fn record(&mut self, outputs: &[Word], decision: &Word) -> Result<()> {
        check_len(self.k(), outputs)?;
        for (h, y) in self.h.iter_mut().zip(outputs) {
            *h += 1.0 - incoherence(y, decision)?.value();
        }
        Ok(())
    }
}

fn check_len(k: usize, outputs: &[Word]) -> Result<()> {
    if outputs.len() != k {
        return Err(Error::ModuleCountMismatch {
            expected: k,
            got: outputs.len(),
        });
    }
    Ok(())
}

/// Decision only; the history is left untouched.
pub fn adaptive_majority_decide(
    outputs: &[Word],
    state: &AgreementHistoryState,
    cfg: &MajorityGroupConfig,
) -> Result<VoterDecision> {
    check_len(state.k(), outputs)?;
    let group = majority_group(outputs, cfg)?;
    if 2 * group.len() < outputs.len() + 1 {
        // no result: use the distance-metric majority output
        return select_central(outputs, &group);
    }
    let mut best = group[0];
    for &i in &group[1..] {
        if state.h[i] > state.h[best] {
            best = i;
        }
    }
    Ok(VoterDecision::selected(outputs, best))
}

/// Decides, then credits each module's history against the decision.
pub fn adaptive_majority_vote(
    outputs: &[Word],
    state: &mut AgreementHistoryState,
    cfg: &MajorityGroupConfig,
) -> Result<VoterDecision> {
    let decision = adaptive_majority_decide(outputs, state, cfg)?;
    state.record(outputs, &decision.output)?;
    Ok(decision)
}
