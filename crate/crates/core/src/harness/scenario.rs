use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_unit, Error, Result};
use crate::plant::{
    apply_stuck_faults, full_adder_16, make_faulty_module_spec, AdderInput, FaultSpec, ADDER_WIDTH,
};
use crate::voters::{Voter, VoterKind, VoterParams, MAX_GROUP_MODULES};
use crate::word::Word;

use super::{diagnose_modules, seeded_stream, Counts, FaultStatus, SessionPattern, System};

pub const DEFAULT_N_STUCK: u32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub k: usize,
    pub sessions: Vec<SessionPattern>,
    pub inputs_per_session: u64,
    pub repeats: u64,
    pub seed: u64,
    pub params: VoterParams,
    /// Stuck bits drawn for each module when it becomes faulty.
    pub n_stuck: Vec<u32>,
    pub voters: Vec<VoterKind>,
}

impl ScenarioConfig {
    /// Five modules failing one after another, 10,000 inputs per session,
    /// ten repeats, every voter.
    pub fn five_modular() -> Self {
        Self::progressive(5)
    }

    pub fn progressive(k: usize) -> Self {
        Self {
            k,
            sessions: SessionPattern::progressive_scenario(k),
            inputs_per_session: 10_000,
            repeats: 10,
            seed: 0,
            params: VoterParams::default(),
            n_stuck: vec![DEFAULT_N_STUCK; k],
            voters: VoterKind::ALL.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::TooFewModules(self.k));
        }
        if self.k > MAX_GROUP_MODULES {
            return Err(Error::TooManyModules {
                got: self.k,
                max: MAX_GROUP_MODULES,
            });
        }
        if self.sessions.is_empty() {
            return Err(Error::Config("at least one session is required".into()));
        }
        if let Some(bad) = self.sessions.iter().find(|s| s.len() != self.k) {
            return Err(Error::Config(format!(
                "session `{bad}` has {} entries, expected {}",
                bad.len(),
                self.k
            )));
        }
        if self.inputs_per_session == 0 {
            return Err(Error::Config("inputs must be positive".into()));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be positive".into()));
        }
        if self.n_stuck.len() != self.k {
            return Err(Error::Config(format!(
                "n_stuck has {} entries, expected {}",
                self.n_stuck.len(),
                self.k
            )));
        }
        if let Some(&n) = self.n_stuck.iter().find(|&&n| n > ADDER_WIDTH) {
            return Err(Error::TooManyBits {
                requested: n,
                width: ADDER_WIDTH,
            });
        }
        validate_params(&self.params, ADDER_WIDTH)
    }
}

pub(crate) fn validate_params(params: &VoterParams, width: u32) -> Result<()> {
    check_unit("alpha", params.alpha)?;
    check_unit("beta", params.beta)?;
    params.regulation.validate()?;
    params.group.validate(width)
}

/// Health of the incoherence voters' self-diagnosis at the end of a session.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosisRecord {
    pub repeat: u64,
    pub session: usize,
    pub voter: VoterKind,
    pub flags: Vec<FaultStatus>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemRow {
    pub system: System,
    /// One entry per session, pooled over repeats.
    pub sessions: Vec<Counts>,
    pub total: Counts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub sessions: Vec<SessionPattern>,
    pub rows: Vec<SystemRow>,
    pub diagnoses: Vec<DiagnosisRecord>,
}

impl RunReport {
    pub fn row(&self, system: System) -> Option<&SystemRow> {
        self.rows.iter().find(|r| r.system == system)
    }

    /// Availability of `system` in session `session`.
    pub fn availability(&self, system: System, session: usize) -> Option<f64> {
        self.row(system)?.sessions.get(session)?.availability().ok()
    }

    pub fn total_availability(&self, system: System) -> Option<f64> {
        self.row(system)?.total.availability().ok()
    }
}

struct RepeatResult {
    rows: Vec<Vec<Counts>>,
    diagnoses: Vec<DiagnosisRecord>,
}

/// Runs every repeat of the scenario and pools the counts.
///
/// Repeats are independent (voter state and fault specs are reset) and run
/// in parallel on distinct random streams; results are merged in repeat
/// order so the report depends only on the configuration.
pub fn run_availability_scenario(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    let systems: Vec<System> = (0..cfg.k)
        .map(System::Module)
        .chain(cfg.voters.iter().copied().map(System::Voter))
        .collect();

    let repeats = (0..cfg.repeats)
        .into_par_iter()
        .map(|r| run_repeat(cfg, r))
        .collect::<Result<Vec<_>>>()?;

    let mut rows: Vec<SystemRow> = systems
        .iter()
        .map(|&system| SystemRow {
            system,
            sessions: vec![Counts::default(); cfg.sessions.len()],
            total: Counts::default(),
        })
        .collect();
    let mut diagnoses = Vec::new();
    for repeat in repeats {
        for (row, counts) in rows.iter_mut().zip(&repeat.rows) {
            for (pooled, c) in row.sessions.iter_mut().zip(counts) {
                pooled.merge(c);
                row.total.merge(c);
            }
        }
        diagnoses.extend(repeat.diagnoses);
    }
    Ok(RunReport {
        sessions: cfg.sessions.clone(),
        rows,
        diagnoses,
    })
}

fn run_repeat(cfg: &ScenarioConfig, repeat: u64) -> Result<RepeatResult> {
    let mut rng = seeded_stream(cfg.seed, repeat);
    let mut voters = cfg
        .voters
        .iter()
        .map(|&kind| Voter::new(kind, cfg.k, &cfg.params))
        .collect::<Result<Vec<_>>>()?;
    let mut faults: Vec<Option<FaultSpec>> = vec![None; cfg.k];
    let n_systems = cfg.k + voters.len();
    let mut rows = vec![vec![Counts::default(); cfg.sessions.len()]; n_systems];
    let mut diagnoses = Vec::new();
    let mut outputs: Vec<Word> = Vec::with_capacity(cfg.k);

    for (s, session) in cfg.sessions.iter().enumerate() {
        // a fault, once drawn, persists until the module is marked healthy again
        for (i, status) in session.statuses().iter().enumerate() {
            match status {
                FaultStatus::Faulty if faults[i].is_none() => {
                    faults[i] = Some(make_faulty_module_spec(
                        &mut rng,
                        ADDER_WIDTH,
                        cfg.n_stuck[i],
                    )?);
                }
                FaultStatus::FaultFree => faults[i] = None,
                FaultStatus::Faulty => {}
            }
        }

        for _ in 0..cfg.inputs_per_session {
            let truth = full_adder_16(AdderInput::random(&mut rng));
            outputs.clear();
            for fault in &faults {
                outputs.push(match fault {
                    Some(spec) => apply_stuck_faults(truth, spec)?,
                    None => truth,
                });
            }
            for (i, out) in outputs.iter().enumerate() {
                rows[i][s].record(*out == truth);
            }
            for (j, voter) in voters.iter_mut().enumerate() {
                let decision = voter.vote_step(&outputs)?;
                rows[cfg.k + j][s].record(decision.output == truth);
            }
        }

        for voter in &voters {
            if let Some(state) = voter.incoherence_state() {
                diagnoses.push(DiagnosisRecord {
                    repeat,
                    session: s,
                    voter: voter.kind(),
                    flags: diagnose_modules(state, cfg.params.regulation.v_th),
                });
            }
        }
    }
    Ok(RepeatResult { rows, diagnoses })
}
