//! The `nmr-vote` command line.
//!
//! Exit codes: 0 on success, 2 for usage or configuration errors, 3 for
//! I/O failures.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::builder::BoolishValueParser;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::config::{parse_hex_words, parse_real_list, OutputFormat, Settings, StuckBits};
use crate::harness::{
    run_availability_scenario, run_ber_sweep, BerConfig, BerReport, RunReport, ScenarioConfig,
};
use crate::voters::{
    adaptive_incoherence_vote, dynamic_beta_update, update_incoherence_history,
    IncoherenceVoterState, VoterKind,
};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "nmr-vote",
    version,
    about = "Adaptive fault-masking voters and N-modular redundancy experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Availability of raw modules and voters over a progressive-failure scenario on a 16-bit adder.
    AdderScenario(AdderArgs),
    /// Bit error rate of each voter fed by noisy channels carrying a sine.
    BerSweep(BerArgs),
    /// One incoherence-scoring vote over hex words, printing every score.
    VoteOnce(VoteArgs),
}

#[derive(Debug, Args)]
struct RegulationArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Memory regulation parameter.
    #[arg(long)]
    alpha: Option<f64>,
    /// Impulsiveness regulation parameter of the static incoherence voter.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    beta_low: Option<f64>,
    #[arg(long)]
    beta_high: Option<f64>,
    /// History threshold above which a module is diagnosed faulty.
    #[arg(long)]
    v_th: Option<f64>,
    /// Enable the dynamic-beta voter (on/off).
    #[arg(long, value_parser = BoolishValueParser::new())]
    dynamic: Option<bool>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[command(flatten)]
    regulation: RegulationArgs,
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum pairwise Hamming distance inside a majority group.
    #[arg(long)]
    consensus_threshold: Option<u32>,
    /// Comma-separated voters: distance, bitwise, adaptive-majority, incoherence, dynamic.
    #[arg(long, value_delimiter = ',')]
    voters: Option<Vec<String>>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AdderArgs {
    #[command(flatten)]
    common: ExperimentArgs,
    /// Random inputs per session.
    #[arg(long)]
    inputs: Option<u64>,
    #[arg(long)]
    repeats: Option<u64>,
    /// Stuck bits per faulty module: one count, or a comma-separated count per module.
    #[arg(long)]
    n_stuck: Option<String>,
    #[arg(long)]
    modules: Option<usize>,
    /// Comma-separated session patterns in module order, e.g. FNNNN,FFNNN.
    #[arg(long, value_delimiter = ',')]
    sessions: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct BerArgs {
    #[command(flatten)]
    common: ExperimentArgs,
    #[arg(long)]
    samples: Option<u64>,
    /// Largest number of flipped bits per sample.
    #[arg(long)]
    e_max: Option<u32>,
    /// Sine period in samples.
    #[arg(long)]
    period: Option<u64>,
    #[arg(long)]
    channels: Option<usize>,
}

#[derive(Debug, Args)]
struct VoteArgs {
    #[command(flatten)]
    regulation: RegulationArgs,
    /// Comma-separated incoherence histories, one per word (default all 0).
    #[arg(long)]
    rs: Option<String>,
    /// Word width in bits (default: four bits per hex digit).
    #[arg(long)]
    width: Option<u32>,
    /// Module outputs as hex words, most significant digit first.
    words: Vec<String>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::AdderScenario(args) => cmd_adder_scenario(args, stdout, stderr),
        Command::BerSweep(args) => cmd_ber_sweep(args, stdout, stderr),
        Command::VoteOnce(args) => cmd_vote_once(args, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}

fn load_settings(path: Option<&Path>) -> Result<Settings, CliError> {
    match path {
        None => Ok(Settings::default()),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            Ok(Settings::from_json(&text)?)
        }
    }
}

impl RegulationArgs {
    fn settings(&self) -> Settings {
        Settings {
            alpha: self.alpha,
            beta: self.beta,
            beta_low: self.beta_low,
            beta_high: self.beta_high,
            v_th: self.v_th,
            dynamic: self.dynamic,
            format: self.format,
            ..Default::default()
        }
    }
}

impl ExperimentArgs {
    fn settings(&self) -> Settings {
        Settings {
            seed: self.seed,
            consensus_threshold: self.consensus_threshold,
            voters: self.voters.clone(),
            output: self.output.clone(),
            ..self.regulation.settings()
        }
    }
}

fn parse_stuck_bits(text: &str) -> Result<StuckBits, CliError> {
    let counts = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|e| CliError::Usage(format!("--n-stuck `{s}`: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match counts.as_slice() {
        [n] => StuckBits::Uniform(*n),
        _ => StuckBits::PerModule(counts),
    })
}

/// Shared by every experiment report: the seed and a complete config that
/// reproduces the run when fed back through `--config`.
#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    seed: u64,
    config: &'a Settings,
    data: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnoses: Option<&'a [crate::harness::DiagnosisRecord]>,
}

fn voter_names(voters: &[VoterKind]) -> Vec<String> {
    voters.iter().map(|v| v.name().to_owned()).collect()
}

fn scenario_echo(cfg: &ScenarioConfig, format: OutputFormat) -> Settings {
    let p = &cfg.params;
    Settings {
        alpha: Some(p.alpha),
        beta: Some(p.beta),
        beta_low: Some(p.regulation.beta_low),
        beta_high: Some(p.regulation.beta_high),
        v_th: Some(p.regulation.v_th),
        dynamic: Some(cfg.voters.contains(&VoterKind::DynamicIncoherence)),
        seed: Some(cfg.seed),
        consensus_threshold: Some(p.group.consensus_threshold),
        voters: Some(voter_names(&cfg.voters)),
        format: Some(format),
        modules: Some(cfg.k),
        sessions: Some(cfg.sessions.iter().map(|s| s.to_string()).collect()),
        inputs: Some(cfg.inputs_per_session),
        repeats: Some(cfg.repeats),
        n_stuck: Some(StuckBits::PerModule(cfg.n_stuck.clone())),
        ..Default::default()
    }
}

fn ber_echo(cfg: &BerConfig, format: OutputFormat) -> Settings {
    let p = &cfg.params;
    Settings {
        alpha: Some(p.alpha),
        beta: Some(p.beta),
        beta_low: Some(p.regulation.beta_low),
        beta_high: Some(p.regulation.beta_high),
        v_th: Some(p.regulation.v_th),
        dynamic: Some(cfg.voters.contains(&VoterKind::DynamicIncoherence)),
        seed: Some(cfg.seed),
        consensus_threshold: Some(p.group.consensus_threshold),
        voters: Some(voter_names(&cfg.voters)),
        format: Some(format),
        channels: Some(cfg.channels),
        samples: Some(cfg.samples),
        e_max: Some(cfg.e_max),
        period: Some(cfg.period),
        ..Default::default()
    }
}

#[derive(Debug, Serialize)]
struct AvailabilityRecord {
    system: String,
    session: String,
    n_correct: u64,
    n_total: u64,
    availability: f64,
}

fn availability_records(report: &RunReport) -> Result<Vec<AvailabilityRecord>, CliError> {
    let mut records = Vec::new();
    for row in &report.rows {
        let labelled = report
            .sessions
            .iter()
            .map(|s| s.to_string())
            .zip(&row.sessions)
            .chain(std::iter::once(("total".to_owned(), &row.total)));
        for (session, counts) in labelled {
            records.push(AvailabilityRecord {
                system: row.system.to_string(),
                session,
                n_correct: counts.n_correct,
                n_total: counts.n_total,
                availability: counts.availability()?,
            });
        }
    }
    Ok(records)
}

#[derive(Debug, Serialize)]
struct BerRecord {
    system: String,
    error_bits: u32,
    bits_total: u64,
    bits_wrong: u64,
    ber: f64,
}

/// Voter series only; raw channels always sit at exactly `e / 8`.
fn ber_records(report: &BerReport) -> Vec<BerRecord> {
    report
        .rows
        .iter()
        .filter(|r| matches!(r.system, crate::harness::System::Voter(_)))
        .flat_map(|row| {
            row.levels.iter().zip(0u32..).map(|(c, e)| BerRecord {
                system: row.system.to_string(),
                error_bits: e,
                bits_total: c.bits_total,
                bits_wrong: c.bits_wrong,
                ber: c.ber(),
            })
        })
        .collect()
}

fn to_csv<T: Serialize>(records: &[T]) -> Result<Vec<u8>, CliError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in records {
        writer
            .serialize(r)
            .map_err(|e| CliError::Io(format!("csv: {e}")))?;
    }
    writer
        .into_inner()
        .map_err(|e| CliError::Io(format!("csv: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes =
        serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(format!("json: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn emit<T: Serialize>(
    envelope: &Envelope<'_, &[T]>,
    format: OutputFormat,
    output: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let body = match format {
        OutputFormat::Csv => to_csv(envelope.data)?,
        OutputFormat::Json => to_json(envelope)?,
    };
    // CSV has no room for the config echo, so it travels alongside
    let meta = match format {
        OutputFormat::Csv => Some(to_json(&json!({
            "command": envelope.command,
            "seed": envelope.seed,
            "config": envelope.config,
        }))?),
        OutputFormat::Json => None,
    };
    match output {
        Some(path) => {
            fs::write(path, &body).map_err(|e| io_error(path, e))?;
            if let Some(meta) = meta {
                let mut meta_path = path.as_os_str().to_owned();
                meta_path.push(".meta.json");
                let meta_path = PathBuf::from(meta_path);
                fs::write(&meta_path, meta).map_err(|e| io_error(&meta_path, e))?;
            }
        }
        None => {
            stdout
                .write_all(&body)
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?;
            if let Some(meta) = meta {
                let compact: serde_json::Value = serde_json::from_slice(&meta)
                    .map_err(|e| CliError::Io(format!("json: {e}")))?;
                writeln!(stderr, "# effective config: {compact}")
                    .map_err(|e| CliError::Io(format!("stderr: {e}")))?;
            }
        }
    }
    Ok(())
}

fn cmd_adder_scenario(
    args: AdderArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let file = load_settings(args.common.regulation.config.as_deref())?;
    let flags = Settings {
        inputs: args.inputs,
        repeats: args.repeats,
        n_stuck: args.n_stuck.as_deref().map(parse_stuck_bits).transpose()?,
        modules: args.modules,
        sessions: args.sessions,
        ..args.common.settings()
    };
    let settings = file.overlay(flags);
    let cfg = settings.scenario_config()?;
    let format = settings.format.unwrap_or_default();
    let report = run_availability_scenario(&cfg)?;
    let records = availability_records(&report)?;
    let echo = scenario_echo(&cfg, format);
    let envelope = Envelope {
        command: "adder-scenario",
        seed: cfg.seed,
        config: &echo,
        data: records.as_slice(),
        diagnoses: Some(&report.diagnoses),
    };
    emit(
        &envelope,
        format,
        settings.output.as_deref(),
        stdout,
        stderr,
    )
}

fn cmd_ber_sweep(
    args: BerArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let file = load_settings(args.common.regulation.config.as_deref())?;
    let flags = Settings {
        samples: args.samples,
        e_max: args.e_max,
        period: args.period,
        channels: args.channels,
        ..args.common.settings()
    };
    let settings = file.overlay(flags);
    let cfg = settings.ber_config()?;
    let format = settings.format.unwrap_or_default();
    let report = run_ber_sweep(&cfg)?;
    let records = ber_records(&report);
    let echo = ber_echo(&cfg, format);
    let envelope = Envelope {
        command: "ber-sweep",
        seed: cfg.seed,
        config: &echo,
        data: records.as_slice(),
        diagnoses: None,
    };
    emit(
        &envelope,
        format,
        settings.output.as_deref(),
        stdout,
        stderr,
    )
}

#[derive(Debug, Serialize)]
struct VoteOnceReport {
    majority: String,
    beta: f64,
    words: Vec<String>,
    rs: Vec<f64>,
    scores: Vec<f64>,
    index: usize,
    decision: String,
    rs_after: Vec<f64>,
}

fn cmd_vote_once(args: VoteArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let settings =
        load_settings(args.regulation.config.as_deref())?.overlay(args.regulation.settings());
    if args.words.len() < 2 {
        return Err(CliError::Usage(format!(
            "at least 2 words are required, got {}",
            args.words.len()
        )));
    }
    let words = parse_hex_words(&args.words, args.width)?;
    let rs = match &args.rs {
        Some(text) => parse_real_list(text)?,
        None => vec![0.0; words.len()],
    };
    if rs.len() != words.len() {
        return Err(CliError::Usage(format!(
            "--rs has {} entries for {} words",
            rs.len(),
            words.len()
        )));
    }
    let params = settings.voter_params();
    let mut state = IncoherenceVoterState::with_histories(rs.clone(), params.alpha, params.beta)?;
    if settings.dynamic == Some(true) {
        dynamic_beta_update(&mut state, &params.regulation)?;
    }
    let verdict = adaptive_incoherence_vote(&words, &state)?;
    let beta = state.beta();
    update_incoherence_history(&mut state, &words, &verdict.decision.output)?;
    let index = verdict.decision.source_index.unwrap_or_default();

    let report = VoteOnceReport {
        majority: verdict.majority.to_string(),
        beta,
        words: words.iter().map(|w| w.to_string()).collect(),
        rs,
        scores: verdict.scores,
        index,
        decision: verdict.decision.output.to_string(),
        rs_after: state.histories().to_vec(),
    };
    let text = match settings.format {
        Some(OutputFormat::Json) => to_json(&report)?,
        _ => render_vote(&report).into_bytes(),
    };
    stdout
        .write_all(&text)
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn render_vote(r: &VoteOnceReport) -> String {
    let mut s = format!("majority y_c: {}\nbeta: {}\n", r.majority, r.beta);
    for (i, ((word, rs), score)) in r.words.iter().zip(&r.rs).zip(&r.scores).enumerate() {
        s += &format!("module {}: word {word} rs {rs} score {score}\n", i + 1);
    }
    s += &format!(
        "decision: {} index {} score {}\n",
        r.decision, r.index, r.scores[r.index]
    );
    let after: Vec<String> = r.rs_after.iter().map(|v| v.to_string()).collect();
    s += &format!("rs after update: {}\n", after.join(","));
    s
}
