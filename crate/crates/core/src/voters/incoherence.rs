//! Adaptive voter with incoherence scoring.
//!
//! Each step:
//! 1. `y_c` = per-bit majority of the module outputs.
//! 2. score each module: `Is_i = beta * inc(y_i, y_c) + (1 - beta) * Rs_i`.
//! 3. output the module with the minimum score.
//! 4. update every history: `Rs_i <- alpha * inc(y_i, y) + (1 - alpha) * Rs_i`.
//!
//! `alpha` sets the memory length of the history (high = short memory),
//! `beta` the weight of the current majority against the history.

use crate::error::{check_unit, Error, Result};
use crate::word::{common_width, incoherence, Word};

use super::majority::bitwise_majority;
use super::{check_module_count, VoterDecision};

pub const DEFAULT_ALPHA: f64 = 0.3;
pub const DEFAULT_BETA: f64 = 0.3;

/// `weight * current + (1 - weight) * previous`, exact at both ends of the
/// weight range.
fn blend(weight: f64, current: f64, previous: f64) -> f64 {
    let mixed = if weight == 1.0 {
        current
    } else {
        previous + weight * (current - previous)
    };
    mixed.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IncoherenceVoterState {
    alpha: f64,
    pub(crate) beta: f64,
    rs: Vec<f64>,
}

impl IncoherenceVoterState {
    /// Fresh state for `k` modules with every history at zero.
    pub fn new(k: usize, alpha: f64, beta: f64) -> Result<Self> {
        Self::with_histories(vec![0.0; k], alpha, beta)
    }

    pub fn with_histories(rs: Vec<f64>, alpha: f64, beta: f64) -> Result<Self> {
        if rs.len() < 2 {
            return Err(Error::TooFewModules(rs.len()));
        }
        check_unit("alpha", alpha)?;
        check_unit("beta", beta)?;
        for &r in &rs {
            check_unit("rs", r)?;
        }
        Ok(Self { alpha, beta, rs })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn set_beta(&mut self, beta: f64) -> Result<()> {
        check_unit("beta", beta)?;
        self.beta = beta;
        Ok(())
    }

    pub fn histories(&self) -> &[f64] {
        &self.rs
    }

    pub fn k(&self) -> usize {
        self.rs.len()
    }

    pub fn reset(&mut self) {
        self.rs.iter_mut().for_each(|r| *r = 0.0);
    }

    fn check_outputs(&self, outputs: &[Word]) -> Result<()> {
        check_module_count(outputs)?;
        if outputs.len() != self.k() {
            return Err(Error::ModuleCountMismatch {
                expected: self.k(),
                got: outputs.len(),
            });
        }
        Ok(())
    }
}

/// Incoherence score of one module output against the majority word.
pub fn incoherence_score(y_i: &Word, y_c: &Word, rs_i: f64, beta: f64) -> Result<f64> {
    check_unit("rs", rs_i)?;
    check_unit("beta", beta)?;
    Ok(blend(beta, incoherence(y_i, y_c)?.value(), rs_i))
}

/// Everything computed during one decision, for inspection and reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct IncoherenceVerdict {
    pub decision: VoterDecision,
    /// Per-bit majority word `y_c`.
    pub majority: Word,
    pub scores: Vec<f64>,
}

/// Decision steps 1-3. The state is not modified.
pub fn adaptive_incoherence_vote(
    outputs: &[Word],
    state: &IncoherenceVoterState,
) -> Result<IncoherenceVerdict> {
    state.check_outputs(outputs)?;
    let majority = bitwise_majority(outputs)?;
    let scores = outputs
        .iter()
        .zip(&state.rs)
        .map(|(y, &rs)| incoherence_score(y, &majority, rs, state.beta))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s < scores[best] {
            best = i;
        }
    }
    Ok(IncoherenceVerdict {
        decision: VoterDecision::selected(outputs, best),
        majority,
        scores,
    })
}

/// Step 4: fold the latest incoherence against `decision` into every history.
pub fn update_incoherence_history(
    state: &mut IncoherenceVoterState,
    outputs: &[Word],
    decision: &Word,
) -> Result<()> {
    state.check_outputs(outputs)?;
    let width = common_width(outputs)?;
    decision.ensure_same_width(&Word::zero(width)?)?;
    let alpha = state.alpha;
    for (rs, y) in state.rs.iter_mut().zip(outputs) {
        *rs = blend(alpha, incoherence(y, decision)?.value(), *rs);
    }
    Ok(())
}

/// Two-state beta regulation: a module is diagnosed faulty when its history
/// exceeds `v_th`; when every module is faulty the voter leans on the
/// majority (`beta_high`), otherwise on the history (`beta_low`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicRegulationConfig {
    pub v_th: f64,
    pub beta_high: f64,
    pub beta_low: f64,
}

impl Default for DynamicRegulationConfig {
    fn default() -> Self {
        Self {
            v_th: 0.001,
            beta_high: 0.8,
            beta_low: 0.3,
        }
    }
}

impl DynamicRegulationConfig {
    pub fn validate(&self) -> Result<()> {
        check_unit("v_th", self.v_th)?;
        check_unit("beta_high", self.beta_high)?;
        check_unit("beta_low", self.beta_low)
    }
}

pub fn dynamic_beta_update(
    state: &mut IncoherenceVoterState,
    cfg: &DynamicRegulationConfig,
) -> Result<()> {
    cfg.validate()?;
    let all_faulty = state.rs.iter().all(|&rs| rs > cfg.v_th);
    state.set_beta(if all_faulty {
        cfg.beta_high
    } else {
        cfg.beta_low
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(bits: &[u64], width: u32) -> Vec<Word> {
        bits.iter().map(|&b| Word::new(b, width).unwrap()).collect()
    }

    #[test]
    fn score_limits_and_arithmetic() {
        // inc = 0.5
        let y = Word::new(0b0011, 4).unwrap();
        let yc = Word::new(0b0000, 4).unwrap();
        assert_eq!(incoherence_score(&y, &yc, 0.37, 1.0).unwrap(), 0.5);
        assert_eq!(incoherence_score(&y, &yc, 0.37, 0.0).unwrap(), 0.37);
        assert_eq!(incoherence_score(&y, &yc, 0.1, 0.3).unwrap(), 0.22);
        assert!(incoherence_score(&y, &yc, 1.2, 0.3).is_err());
        assert!(incoherence_score(&y, &yc, 0.1, -0.1).is_err());
    }

    #[test]
    fn history_update_limits_and_arithmetic() {
        // inc against decision 0: module0 = 0.6 (3 of 5 bits), module1 = 0.2
        let outputs = words(&[0b00111, 0b00001], 5);
        let decision = Word::zero(5).unwrap();

        let mut s = IncoherenceVoterState::with_histories(vec![0.9, 0.1], 1.0, 0.3).unwrap();
        update_incoherence_history(&mut s, &outputs, &decision).unwrap();
        assert_eq!(s.histories(), &[0.6, 0.2]);

        let mut s = IncoherenceVoterState::with_histories(vec![0.9, 0.1], 0.0, 0.3).unwrap();
        update_incoherence_history(&mut s, &outputs, &decision).unwrap();
        assert_eq!(s.histories(), &[0.9, 0.1]);

        let mut s = IncoherenceVoterState::with_histories(vec![0.2, 0.2], 0.5, 0.3).unwrap();
        update_incoherence_history(&mut s, &outputs, &decision).unwrap();
        assert_eq!(s.histories()[0], 0.4);
    }

    #[test]
    fn identical_outputs_pick_index_zero() {
        let w = words(&[0x3c; 5], 8);
        let s =
            IncoherenceVoterState::with_histories(vec![0.4, 0.1, 0.1, 0.4, 0.9], 0.3, 0.0).unwrap();
        // beta = 0 reduces to argmin rs, even when outputs agree
        let v = adaptive_incoherence_vote(&w, &s).unwrap();
        assert_eq!(v.decision.source_index, Some(1));
        let s = IncoherenceVoterState::new(5, 0.3, 0.3).unwrap();
        let v = adaptive_incoherence_vote(&w, &s).unwrap();
        assert_eq!(v.decision.source_index, Some(0));
    }

    #[test]
    fn beta_zero_follows_history() {
        let w = words(&[0x00, 0xff, 0x0f, 0x00, 0x00], 8);
        let s =
            IncoherenceVoterState::with_histories(vec![0.5, 0.5, 0.0, 0.5, 0.5], 0.3, 0.0).unwrap();
        let v = adaptive_incoherence_vote(&w, &s).unwrap();
        assert_eq!(v.decision.source_index, Some(2));
        assert_eq!(v.decision.output.bits(), 0x0f);
    }

    #[test]
    fn trusted_outlier_beats_majority() {
        let w = words(&[0xa5, 0xa5, 0xa4, 0xa5, 0xa5], 8);
        let s =
            IncoherenceVoterState::with_histories(vec![0.6, 0.6, 0.0, 0.6, 0.6], 0.3, 0.3).unwrap();
        let v = adaptive_incoherence_vote(&w, &s).unwrap();
        assert_eq!(v.majority.bits(), 0xa5);
        assert_eq!(v.decision.source_index, Some(2));
        assert!((v.scores[2] - 0.0375).abs() < 1e-12);
        for i in [0, 1, 3, 4] {
            assert!((v.scores[i] - 0.42).abs() < 1e-12);
        }
    }

    #[test]
    fn dynamic_beta_examples() {
        let cfg = DynamicRegulationConfig::default();
        let mut s = IncoherenceVoterState::new(5, 0.3, 0.55).unwrap();
        dynamic_beta_update(&mut s, &cfg).unwrap();
        assert_eq!(s.beta(), 0.3);

        let mut s =
            IncoherenceVoterState::with_histories(vec![0.002, 0.5, 0.9, 0.3, 0.7], 0.3, 0.3)
                .unwrap();
        dynamic_beta_update(&mut s, &cfg).unwrap();
        assert_eq!(s.beta(), 0.8);

        let mut s =
            IncoherenceVoterState::with_histories(vec![0.0005, 0.5, 0.9, 0.3, 0.7], 0.3, 0.8)
                .unwrap();
        dynamic_beta_update(&mut s, &cfg).unwrap();
        assert_eq!(s.beta(), 0.3);
    }

    #[test]
    fn state_contract() {
        assert!(IncoherenceVoterState::new(1, 0.3, 0.3).is_err());
        assert!(matches!(
            IncoherenceVoterState::new(3, 1.5, 0.3),
            Err(Error::ParameterOutOfRange { name: "alpha", .. })
        ));
        assert!(IncoherenceVoterState::new(3, 0.3, f64::NAN).is_err());
        let s = IncoherenceVoterState::new(3, 0.3, 0.3).unwrap();
        assert!(matches!(
            adaptive_incoherence_vote(&words(&[1, 2], 4), &s),
            Err(Error::ModuleCountMismatch { .. })
        ));
        let bad = DynamicRegulationConfig {
            v_th: 2.0,
            ..Default::default()
        };
        let mut s = IncoherenceVoterState::new(3, 0.3, 0.3).unwrap();
        assert!(dynamic_beta_update(&mut s, &bad).is_err());
    }
}
