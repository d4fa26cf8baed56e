use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::plant::{inject_channel_errors, sine_sample, ChannelNoise, SAMPLE_WIDTH};
use crate::voters::{Voter, VoterKind, VoterParams, MAX_GROUP_MODULES};
use crate::word::{hamming_distance, Word};

use super::scenario::validate_params;
use super::{seeded_stream, System};

#[derive(Debug, Clone, PartialEq)]
pub struct BerConfig {
    pub channels: usize,
    pub samples: u64,
    /// Sweep covers `0..=e_max` flipped bits per sample.
    pub e_max: u32,
    /// Sine period in samples.
    pub period: u64,
    pub seed: u64,
    pub params: VoterParams,
    pub voters: Vec<VoterKind>,
}

impl Default for BerConfig {
    fn default() -> Self {
        Self {
            channels: 5,
            samples: 10_000,
            e_max: 5,
            period: 64,
            seed: 0,
            params: VoterParams::default(),
            voters: VoterKind::ALL.to_vec(),
        }
    }
}

impl BerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.channels < 2 {
            return Err(Error::TooFewModules(self.channels));
        }
        if self.channels > MAX_GROUP_MODULES {
            return Err(Error::TooManyModules {
                got: self.channels,
                max: MAX_GROUP_MODULES,
            });
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        if self.period == 0 {
            return Err(Error::Config("period must be positive".into()));
        }
        if self.e_max > SAMPLE_WIDTH {
            return Err(Error::TooManyBits {
                requested: self.e_max,
                width: SAMPLE_WIDTH,
            });
        }
        validate_params(&self.params, SAMPLE_WIDTH)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BitCounts {
    pub bits_total: u64,
    pub bits_wrong: u64,
}

impl BitCounts {
    pub fn ber(&self) -> f64 {
        if self.bits_total == 0 {
            0.0
        } else {
            self.bits_wrong as f64 / self.bits_total as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerRow {
    pub system: System,
    /// Indexed by error-bit count `e`.
    pub levels: Vec<BitCounts>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerReport {
    pub e_max: u32,
    /// Raw channels first, then voters in configuration order.
    pub rows: Vec<BerRow>,
}

impl BerReport {
    pub fn row(&self, system: System) -> Option<&BerRow> {
        self.rows.iter().find(|r| r.system == system)
    }

    pub fn ber(&self, system: System, e: u32) -> Option<f64> {
        Some(self.row(system)?.levels.get(e as usize)?.ber())
    }
}

/// Sweeps the flipped-bit count `e` from 0 to `e_max`. Every channel carries
/// the same sine and independently flips `e` bits of each sample; voter
/// state starts fresh at each level.
pub fn run_ber_sweep(cfg: &BerConfig) -> Result<BerReport> {
    cfg.validate()?;
    let levels = (0..=cfg.e_max)
        .into_par_iter()
        .map(|e| run_level(cfg, e))
        .collect::<Result<Vec<_>>>()?;

    let systems = (0..cfg.channels)
        .map(System::Channel)
        .chain(cfg.voters.iter().copied().map(System::Voter));
    let rows = systems
        .enumerate()
        .map(|(idx, system)| BerRow {
            system,
            levels: levels.iter().map(|l| l[idx]).collect(),
        })
        .collect();
    Ok(BerReport {
        e_max: cfg.e_max,
        rows,
    })
}

fn run_level(cfg: &BerConfig, e: u32) -> Result<Vec<BitCounts>> {
    let mut rng = seeded_stream(cfg.seed, u64::from(e));
    let noise = ChannelNoise { error_bits: e };
    let mut voters = cfg
        .voters
        .iter()
        .map(|&kind| Voter::new(kind, cfg.channels, &cfg.params))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = vec![BitCounts::default(); cfg.channels + voters.len()];
    let mut received: Vec<Word> = Vec::with_capacity(cfg.channels);

    for n in 0..cfg.samples {
        let clean = sine_sample(n, cfg.period)?;
        received.clear();
        for _ in 0..cfg.channels {
            received.push(inject_channel_errors(clean, noise, &mut rng)?);
        }
        let decisions = voters
            .iter_mut()
            .map(|v| v.vote_step(&received).map(|d| d.output))
            .collect::<Result<Vec<_>>>()?;
        for (c, word) in counts.iter_mut().zip(received.iter().chain(&decisions)) {
            c.bits_total += u64::from(SAMPLE_WIDTH);
            c.bits_wrong += u64::from(hamming_distance(word, &clean)?);
        }
    }
    Ok(counts)
}
