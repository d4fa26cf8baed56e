//! Configuration files, flag overrides and the text formats accepted on the
//! command line (hex words, session patterns, voter lists).
//!
//! Config files are JSON objects whose keys are all optional; unknown keys are
//! rejected. Command-line flags override file values, and built-in defaults
//! fill whatever is left. See `config.schema.json` at the crate root.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{BerConfig, ScenarioConfig, SessionPattern};
use crate::voters::{
    DynamicRegulationConfig, MajorityGroupConfig, VoterKind, VoterParams, DEFAULT_ALPHA,
    DEFAULT_BETA,
};
use crate::word::{Word, MAX_WIDTH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Either one stuck-bit count for every module or one per module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StuckBits {
    Uniform(u32),
    PerModule(Vec<u32>),
}

impl StuckBits {
    fn expand(&self, k: usize) -> Result<Vec<u32>> {
        match self {
            StuckBits::Uniform(n) => Ok(vec![*n; k]),
            StuckBits::PerModule(v) if v.len() == k => Ok(v.clone()),
            StuckBits::PerModule(v) => Err(Error::Config(format!(
                "n_stuck lists {} modules, expected {k}",
                v.len()
            ))),
        }
    }
}

/// Every recognised setting. In a file, all keys are optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_high: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_th: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consensus_threshold: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub voters: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    // adder scenario
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modules: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sessions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inputs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repeats: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_stuck: Option<StuckBits>,
    // BER sweep
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<u64>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),* $(,)?) => {
        Settings { $($field: $top.$field.or($base.$field),)* }
    };
}

impl Settings {
    /// Parses a JSON config document.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    /// Values present in `overrides` win over `self`.
    pub fn overlay(self, overrides: Settings) -> Settings {
        let base = self;
        let top = overrides;
        overlay!(base, top;
            alpha, beta, beta_low, beta_high, v_th, dynamic, seed,
            consensus_threshold, voters, output, format, modules, sessions,
            inputs, repeats, n_stuck, channels, samples, e_max, period,
        )
    }

    pub fn voter_params(&self) -> VoterParams {
        let regulation = DynamicRegulationConfig::default();
        VoterParams {
            alpha: self.alpha.unwrap_or(DEFAULT_ALPHA),
            beta: self.beta.unwrap_or(DEFAULT_BETA),
            regulation: DynamicRegulationConfig {
                v_th: self.v_th.unwrap_or(regulation.v_th),
                beta_high: self.beta_high.unwrap_or(regulation.beta_high),
                beta_low: self.beta_low.unwrap_or(regulation.beta_low),
            },
            group: MajorityGroupConfig::new(self.consensus_threshold.unwrap_or(0)),
        }
    }

    /// Selected voters; `dynamic: false` drops the dynamic variant.
    pub fn voter_kinds(&self) -> Result<Vec<VoterKind>> {
        let mut kinds = match &self.voters {
            Some(names) => parse_voter_list(names.iter().map(String::as_str))?,
            None => VoterKind::ALL.to_vec(),
        };
        if self.dynamic == Some(false) {
            kinds.retain(|k| *k != VoterKind::DynamicIncoherence);
        }
        Ok(kinds)
    }

    pub fn scenario_config(&self) -> Result<ScenarioConfig> {
        let k = self.modules.unwrap_or(5);
        let defaults = ScenarioConfig::progressive(k);
        let sessions = match &self.sessions {
            Some(list) => list
                .iter()
                .map(|s| s.parse::<SessionPattern>())
                .collect::<Result<Vec<_>>>()?,
            None => defaults.sessions,
        };
        let n_stuck = match &self.n_stuck {
            Some(n) => n.expand(k)?,
            None => defaults.n_stuck,
        };
        let cfg = ScenarioConfig {
            k,
            sessions,
            inputs_per_session: self.inputs.unwrap_or(defaults.inputs_per_session),
            repeats: self.repeats.unwrap_or(defaults.repeats),
            seed: self.seed.unwrap_or(defaults.seed),
            params: self.voter_params(),
            n_stuck,
            voters: self.voter_kinds()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn ber_config(&self) -> Result<BerConfig> {
        let defaults = BerConfig::default();
        let cfg = BerConfig {
            channels: self.channels.unwrap_or(defaults.channels),
            samples: self.samples.unwrap_or(defaults.samples),
            e_max: self.e_max.unwrap_or(defaults.e_max),
            period: self.period.unwrap_or(defaults.period),
            seed: self.seed.unwrap_or(defaults.seed),
            params: self.voter_params(),
            voters: self.voter_kinds()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses voter names, keeping the given order and dropping repeats.
pub fn parse_voter_list<'a>(names: impl IntoIterator<Item = &'a str>) -> Result<Vec<VoterKind>> {
    let mut kinds = Vec::new();
    for name in names {
        let kind: VoterKind = name.trim().parse()?;
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    if kinds.is_empty() {
        return Err(Error::Config("voter list is empty".into()));
    }
    Ok(kinds)
}

/// Parses a hex word, most significant digit first, with an optional `0x`
/// prefix. Without an explicit `width` the word is four bits per digit.
pub fn parse_hex_word(text: &str, width: Option<u32>) -> Result<Word> {
    let digits = text
        .strip_prefix("0x")
        .or_else(|| text.strip_prefix("0X"))
        .unwrap_or(text);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(Error::Parse(format!("`{text}` is not a hex word")));
    }
    let significant = digits.trim_start_matches('0');
    if significant.len() > 16 {
        return Err(Error::Parse(format!(
            "`{text}` is wider than {MAX_WIDTH} bits"
        )));
    }
    let bits = u64::from_str_radix(
        if significant.is_empty() {
            "0"
        } else {
            significant
        },
        16,
    )
    .map_err(|e| Error::Parse(format!("`{text}`: {e}")))?;
    let width = match width {
        Some(w) => w,
        None => u32::try_from(digits.len() * 4)
            .ok()
            .filter(|w| *w <= MAX_WIDTH)
            .ok_or_else(|| Error::Parse(format!("`{text}` is wider than {MAX_WIDTH} bits")))?,
    };
    Word::new(bits, width)
}

/// Parses same-width hex words. Without `width`, all words must use the
/// same number of digits.
pub fn parse_hex_words<S: AsRef<str>>(texts: &[S], width: Option<u32>) -> Result<Vec<Word>> {
    let words = texts
        .iter()
        .map(|t| parse_hex_word(t.as_ref(), width))
        .collect::<Result<Vec<_>>>()?;
    if let Some(first) = words.first() {
        for w in &words[1..] {
            first.ensure_same_width(w)?;
        }
    }
    Ok(words)
}

/// Parses a comma-separated list of reals.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("`{s}`: {e}")))
        })
        .collect()
}
