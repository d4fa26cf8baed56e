//! Brute-force oracles shared by the property and acceptance suites.
#![allow(dead_code)]

use itertools::Itertools;
use nmr_voting::voters::{
    adaptive_incoherence_vote, bitwise_majority, majority_group, update_incoherence_history,
    IncoherenceVoterState, MajorityGroupConfig, Voter, VoterKind, VoterParams,
};
use nmr_voting::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn word(bits: u64, width: u32) -> Word {
    Word::new(bits, width).unwrap()
}

/// Decodes combination number `n` into `k` words of width `m`.
pub fn nth_combination(mut n: u64, k: usize, m: u32) -> Vec<Word> {
    (0..k)
        .map(|_| {
            let w = word(n % (1 << m), m);
            n >>= m;
            w
        })
        .collect()
}

/// Per-bit majority by counting booleans position by position.
pub fn oracle_bitwise(words: &[Word]) -> Vec<bool> {
    let m = words[0].width() as usize;
    let as_bools: Vec<Vec<bool>> = words
        .iter()
        .map(|w| (0..m).map(|i| (w.bits() >> i) & 1 == 1).collect())
        .collect();
    (0..m)
        .map(|i| {
            let ones = as_bools.iter().filter(|b| b[i]).count();
            ones > as_bools.len() - ones
        })
        .collect()
}

pub fn oracle_distance(a: &Word, b: &Word) -> u32 {
    (0..a.width())
        .filter(|&i| a.bit(i).unwrap() != b.bit(i).unwrap())
        .count() as u32
}

/// Largest pairwise-close index set, scanning sizes downward and index sets
/// in lexicographic order.
pub fn oracle_group(words: &[Word], threshold: u32) -> Vec<usize> {
    let k = words.len();
    for size in (1..=k).rev() {
        for set in (0..k).combinations(size) {
            let ok = set
                .iter()
                .tuple_combinations()
                .all(|(&i, &j)| oracle_distance(&words[i], &words[j]) <= threshold);
            if ok {
                return set;
            }
        }
    }
    unreachable!("singletons always qualify")
}

pub fn first_argmin(values: &[f64]) -> usize {
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    values.iter().position(|&v| v == min).unwrap()
}

/// Fraction of uniform adder inputs for which a module with the given
/// stuck bits still produces the exact sum, estimated from `samples` draws.
/// The sum is formed with plain integer arithmetic.
pub fn oracle_module_availability<R: Rng>(rng: &mut R, stuck: &[(u32, bool)], samples: u64) -> f64 {
    let mut hits = 0u64;
    for _ in 0..samples {
        let a: u16 = rng.random();
        let b: u16 = rng.random();
        let c: bool = rng.random();
        let sum = a as u64 + b as u64 + c as u64;
        if stuck.iter().all(|&(p, v)| (sum >> p & 1 == 1) == v) {
            hits += 1;
        }
    }
    hits as f64 / samples as f64
}

/// Bitwise majority against [`oracle_bitwise`] for every word tuple with
/// `m <= 4` and `k <= 5`.
pub fn check_bitwise_exhaustive() -> Result<(), String> {
    for m in 1..=4u32 {
        for k in 2..=5usize {
            for n in 0..1u64 << (m as usize * k) {
                let words = nth_combination(n, k, m);
                let got = bitwise_majority(&words).map_err(|e| e.to_string())?;
                let expect = oracle_bitwise(&words);
                for (i, bit) in expect.iter().enumerate() {
                    if got.bit(i as u32).unwrap() != *bit {
                        return Err(format!("bitwise_majority({words:?}) = {got}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Majority group against [`oracle_group`] for every word tuple with
/// `m <= 4`, `k <= 5` and every threshold `0..=m`.
pub fn check_group_exhaustive() -> Result<(), String> {
    for m in 1..=4u32 {
        for k in 2..=5usize {
            for n in 0..1u64 << (m as usize * k) {
                let words = nth_combination(n, k, m);
                for a in 0..=m {
                    let got = majority_group(&words, &MajorityGroupConfig::new(a))
                        .map_err(|e| e.to_string())?;
                    let expect = oracle_group(&words, a);
                    if got != expect {
                        return Err(format!("{words:?} a={a}: {got:?} != {expect:?}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Drives static and dynamic incoherence voters with random parameters and
/// outputs for `steps` cycles, checking every score and history.
pub fn check_bounded(seed: u64, steps: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < steps {
        let k = rng.random_range(2..=7);
        let m = rng.random_range(1..=64);
        let params = VoterParams {
            alpha: rng.random(),
            beta: rng.random(),
            ..Default::default()
        };
        let mut stat = Voter::new(VoterKind::Incoherence, k, &params).unwrap();
        let mut dynm = Voter::new(VoterKind::DynamicIncoherence, k, &params).unwrap();
        for _ in 0..1000 {
            let outputs: Vec<Word> = (0..k)
                .map(|_| Word::truncating(rng.random(), m).unwrap())
                .collect();
            for v in [&mut stat, &mut dynm] {
                let state = v.incoherence_state().unwrap().clone();
                let verdict = adaptive_incoherence_vote(&outputs, &state).unwrap();
                if !verdict.scores.iter().all(|s| (0.0..=1.0).contains(s)) {
                    return Err(format!("scores {:?}", verdict.scores));
                }
                v.vote_step(&outputs).unwrap();
                let rs = v.incoherence_state().unwrap().histories();
                if !rs.iter().all(|r| (0.0..=1.0).contains(r)) {
                    return Err(format!("histories {rs:?}"));
                }
            }
            done += 1;
        }
    }
    Ok(())
}

/// Five 8-bit modules, one healthy; each faulty module flips a random
/// non-empty set of bits per cycle, and no bit is flipped by more than two of
/// them, so the per-bit majority stays correct. Once the healthy module is
/// chosen it must stay chosen and keep the lowest history.
pub fn lock_on_trial(alpha: f64, healthy: usize, seed: u64, cycles: usize) -> Result<(), String> {
    const M: u32 = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = IncoherenceVoterState::new(5, alpha, 0.3).unwrap();
    for cycle in 0..cycles {
        let truth = word(rng.random_range(0..256), M);
        let outputs: Vec<Word> = loop {
            let errors: Vec<u64> = (0..4).map(|_| rng.random_range(1..256)).collect();
            let majority_safe =
                (0..M).all(|b| errors.iter().filter(|e| *e >> b & 1 == 1).count() <= 2);
            if majority_safe {
                let mut faulty = errors.into_iter().map(|e| word(truth.bits() ^ e, M));
                break (0..5)
                    .map(|i| {
                        if i == healthy {
                            truth
                        } else {
                            faulty.next().unwrap()
                        }
                    })
                    .collect();
            }
        };
        let verdict = adaptive_incoherence_vote(&outputs, &state).unwrap();
        if verdict.decision.source_index != Some(healthy) {
            return Err(format!(
                "alpha {alpha} seed {seed} cycle {cycle}: chose {:?}, healthy {healthy}",
                verdict.decision.source_index
            ));
        }
        update_incoherence_history(&mut state, &outputs, &verdict.decision.output).unwrap();
        let rs = state.histories();
        if rs
            .iter()
            .enumerate()
            .any(|(i, r)| i != healthy && rs[healthy] >= *r)
        {
            return Err(format!(
                "alpha {alpha} seed {seed} cycle {cycle}: rs {rs:?}"
            ));
        }
    }
    Ok(())
}
