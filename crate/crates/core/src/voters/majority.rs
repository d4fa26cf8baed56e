//! Majority voters: per-bit majority and the Hamming-distance majority group.

use crate::error::{Error, Result};
use crate::word::{common_width, hamming_distance, Word};

use super::{check_module_count, VoterDecision};

/// Largest module count accepted by the majority-group search, which
/// enumerates all `2^k` index subsets.
pub const MAX_GROUP_MODULES: usize = 20;

/// Per-bit majority over `outputs`. A bit is set only when strictly more
/// than half of the inputs set it, so ties at even `k` resolve to 0.
///
/// The result may differ from every input word.
pub fn bitwise_majority(outputs: &[Word]) -> Result<Word> {
    check_module_count(outputs)?;
    let width = common_width(outputs)?;
    let k = outputs.len();
    let mut bits = 0u64;
    for position in 0..width {
        let ones = outputs
            .iter()
            .filter(|w| w.bits() >> position & 1 == 1)
            .count();
        if 2 * ones > k {
            bits |= 1 << position;
        }
    }
    Word::new(bits, width)
}

/// Consensus threshold `a` for the majority group: members must be pairwise
/// within `a` bits of each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MajorityGroupConfig {
    pub consensus_threshold: u32,
}

impl MajorityGroupConfig {
    pub fn new(consensus_threshold: u32) -> Self {
        Self {
            consensus_threshold,
        }
    }

    pub fn validate(&self, width: u32) -> Result<()> {
        if self.consensus_threshold > width {
            return Err(Error::ParameterOutOfRange {
                name: "consensus_threshold",
                value: f64::from(self.consensus_threshold),
                range: "[0, word width]",
            });
        }
        Ok(())
    }
}

/// Largest set of module indices whose outputs are pairwise within the
/// consensus threshold. Equal-size candidates resolve to the
/// lexicographically smallest index set. Indices are returned ascending.
pub fn majority_group(outputs: &[Word], cfg: &MajorityGroupConfig) -> Result<Vec<usize>> {
    check_module_count(outputs)?;
    let width = common_width(outputs)?;
    cfg.validate(width)?;
    let k = outputs.len();
    if k > MAX_GROUP_MODULES {
        return Err(Error::TooManyModules {
            got: k,
            max: MAX_GROUP_MODULES,
        });
    }

    // adjacency[i]: modules within threshold of i, including i itself
    let mut adjacency = vec![0u32; k];
    for i in 0..k {
        for j in 0..k {
            if hamming_distance(&outputs[i], &outputs[j])? <= cfg.consensus_threshold {
                adjacency[i] |= 1 << j;
            }
        }
    }

    let mut best = 0u32;
    for subset in 1u32..(1 << k) {
        let size = subset.count_ones();
        let best_size = best.count_ones();
        if size < best_size || (size == best_size && !lex_smaller(subset, best)) {
            continue;
        }
        let is_clique = (0..k)
            .filter(|i| subset >> i & 1 == 1)
            .all(|i| adjacency[i] & subset == subset);
        if is_clique {
            best = subset;
        }
    }
    Ok((0..k).filter(|i| best >> i & 1 == 1).collect())
}

/// For two equal-size index sets, the one holding the lowest index where
/// they differ sorts first.
fn lex_smaller(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

/// Picks the majority-group member with minimum total Hamming distance to
/// the other members (ties go to the lowest index).
pub fn distance_metric_vote(outputs: &[Word], cfg: &MajorityGroupConfig) -> Result<VoterDecision> {
    let group = majority_group(outputs, cfg)?;
    select_central(outputs, &group)
}

pub(crate) fn select_central(outputs: &[Word], group: &[usize]) -> Result<VoterDecision> {
    let mut best: Option<(u32, usize)> = None;
    for &i in group {
        let mut total = 0;
        for &j in group {
            total += hamming_distance(&outputs[i], &outputs[j])?;
        }
        if best.is_none_or(|(t, _)| total < t) {
            best = Some((total, i));
        }
    }
    let (_, index) = best.ok_or(Error::TooFewModules(0))?;
    Ok(VoterDecision::selected(outputs, index))
}
