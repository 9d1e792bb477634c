//! Command-line surface: `fuse`, `report`, `eval`, `simulate` and
//! `inspect-rules`.
//!
//! Exit codes: 0 success, 1 output write failure, 2 usage error, 3 parse
//! error, 4 alignment error, 5 inference error. Failures print a single
//! `error: <module>: <detail>` line on stderr.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analytics::{build_report, DiversityMode};
use crate::fusion::fuse_session;
use crate::fuzzy::{default_system, InferenceSystem, RulesMode};
use crate::sim::{simulate, Archetype};
use crate::timeline::{align, parse_audio_labels, parse_video_csv, SessionMeta, SessionTimeline};

pub const EXIT_OK: i32 = 0;
pub const EXIT_WRITE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_ALIGN: i32 = 4;
pub const EXIT_INFERENCE: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "emofuse",
    version,
    about = "Fuzzy audio-video emotion fusion and session reports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fuse audio and video streams into a per-second intensity CSV.
    Fuse(FuseArgs),
    /// Fuse streams and write the session report JSON.
    Report(ReportArgs),
    /// Fuse a single pair of audio/video intensities (percent).
    #[command(allow_negative_numbers = true)]
    Eval(EvalArgs),
    /// Generate a synthetic session for a game archetype.
    Simulate(SimulateArgs),
    /// Print the inference system definition as JSON.
    InspectRules(SystemArgs),
}

/// Which inference system to use. `--system` and `--rules` are exclusive.
#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// System definition JSON replacing the built-in system.
    #[arg(long, value_name = "PATH", conflicts_with = "rules")]
    pub system: Option<PathBuf>,
    /// Reading of the built-in rule base: completed | verbatim.
    #[arg(long, value_name = "MODE")]
    pub rules: Option<RulesMode>,
    /// Number of samples over the output domain.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(2..))]
    pub grid: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct StreamArgs {
    /// Audio label CSV (`t,label[,confidence]`).
    #[arg(long, value_name = "PATH")]
    pub audio: PathBuf,
    /// Video score CSV (`t,angry,...,surprise`).
    #[arg(long, value_name = "PATH")]
    pub video: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct FuseArgs {
    #[command(flatten)]
    pub streams: StreamArgs,
    #[command(flatten)]
    pub system: SystemArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub streams: StreamArgs,
    #[command(flatten)]
    pub system: SystemArgs,
    /// Session value fuzzified for diversity: mean | peak.
    #[arg(long, value_name = "MODE", default_value = "mean")]
    pub diversity: DiversityMode,
    /// Game name echoed into the report.
    #[arg(long, default_value = "session")]
    pub game: String,
    #[arg(long)]
    pub participant: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long, value_name = "X")]
    pub audio_pct: f64,
    #[arg(long, value_name = "Y")]
    pub video_pct: f64,
    #[command(flatten)]
    pub system: SystemArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// fight | racing | logic
    #[arg(long)]
    pub archetype: Archetype,
    /// Session length in seconds (at least 2).
    #[arg(long)]
    pub duration: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "PATH")]
    pub out_audio: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out_video: PathBuf,
}

/// A failure reported as `error: <module>: <detail>` with a stable exit code.
#[derive(Debug)]
pub struct CliError {
    pub module: &'static str,
    pub code: i32,
    pub detail: String,
}

impl CliError {
    fn new(module: &'static str, code: i32, detail: impl fmt::Display) -> Self {
        Self {
            module,
            code,
            detail: detail.to_string().replace('\n', " "),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: {}: {}", self.module, self.detail)
    }
}

type Warnings = Vec<String>;

fn read_input(module: &'static str, path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::new(module, EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::new("cli", EXIT_WRITE, format!("{}: {e}", path.display())))
}

pub fn load_system(args: &SystemArgs) -> Result<InferenceSystem, CliError> {
    let system = match &args.system {
        Some(path) => {
            let bytes = read_input("fuzzy_core", path)?;
            let text = String::from_utf8(bytes)
                .map_err(|e| CliError::new("fuzzy_core", EXIT_PARSE, format!("{}: {e}", path.display())))?;
            InferenceSystem::from_json(&text)
                .map_err(|e| CliError::new("fuzzy_core", EXIT_PARSE, format!("{}: {e}", path.display())))?
        }
        None => default_system(args.rules.unwrap_or_default()),
    };
    match args.grid {
        Some(n) if n as usize != system.grid_resolution() => system
            .with_grid_resolution(n as usize)
            .map_err(|e| CliError::new("fuzzy_core", EXIT_USAGE, e)),
        _ => Ok(system),
    }
}

fn load_session(streams: &StreamArgs, warnings: &mut Warnings) -> Result<SessionTimeline, CliError> {
    let parse_err = |path: &Path, e: crate::timeline::TimelineError| {
        CliError::new("timeline_io", EXIT_PARSE, format!("{}: {e}", path.display()))
    };
    let audio_bytes = read_input("timeline_io", &streams.audio)?;
    let video_bytes = read_input("timeline_io", &streams.video)?;
    let audio = parse_audio_labels(&audio_bytes).map_err(|e| parse_err(&streams.audio, e))?;
    let video = parse_video_csv(&video_bytes).map_err(|e| parse_err(&streams.video, e))?;
    for (path, diags) in [
        (&streams.audio, &audio.diagnostics),
        (&streams.video, &video.diagnostics),
    ] {
        warnings.extend(diags.iter().map(|d| format!("timeline_io: {}: {d}", path.display())));
    }
    align(&audio.points, &video.points).map_err(|e| CliError::new("timeline_io", EXIT_ALIGN, e))
}

fn cmd_fuse(args: &FuseArgs, warnings: &mut Warnings) -> Result<(), CliError> {
    let system = load_system(&args.system)?;
    let session = load_session(&args.streams, warnings)?;
    let fused = fuse_session(&system, &session).map_err(|e| CliError::new("fusion_pipeline", EXIT_INFERENCE, e))?;
    write_output(&args.streams.out, &fused.to_csv())
}

fn cmd_report(args: &ReportArgs, warnings: &mut Warnings) -> Result<(), CliError> {
    let system = load_system(&args.system)?;
    let session = load_session(&args.streams, warnings)?.with_meta(SessionMeta {
        game: args.game.clone(),
        participant: args.participant.clone(),
    });
    let fused = fuse_session(&system, &session).map_err(|e| CliError::new("fusion_pipeline", EXIT_INFERENCE, e))?;
    let report = build_report(&session, &fused, &system, args.diversity)
        .map_err(|e| CliError::new("analytics", EXIT_INFERENCE, e))?;
    let mut json = report.to_json();
    json.push('\n');
    write_output(&args.streams.out, json.as_bytes())
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write, warnings: &mut Warnings) -> Result<(), CliError> {
    let system = load_system(&args.system)?;
    if !args.audio_pct.is_finite() || !args.video_pct.is_finite() {
        return Err(CliError::new("cli", EXIT_USAGE, "intensities must be finite"));
    }
    let inference = system
        .infer(&[args.audio_pct, args.video_pct])
        .map_err(|e| CliError::new("fuzzy_core", EXIT_INFERENCE, e))?;
    for (var, x) in &inference.clamped {
        warnings.push(format!("fuzzy_core: {var}={x} clamped to [0,100]"));
    }
    let value = crate::fuzzy::defuzzify_centroid(&inference.aggregate)
        .map_err(|e| CliError::new("fuzzy_core", EXIT_INFERENCE, e))?;
    writeln!(out, "{value:.2}").map_err(|e| CliError::new("cli", EXIT_WRITE, e))
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let session =
        simulate(args.archetype, args.duration, args.seed).map_err(|e| CliError::new("session_sim", EXIT_USAGE, e))?;
    write_output(&args.out_audio, &session.audio_csv)?;
    write_output(&args.out_video, &session.video_csv)
}

fn cmd_inspect_rules(args: &SystemArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let system = load_system(args)?;
    writeln!(out, "{}", system.to_json()).map_err(|e| CliError::new("cli", EXIT_WRITE, e))
}

pub fn execute(cli: &Cli, out: &mut dyn Write, warnings: &mut Warnings) -> Result<(), CliError> {
    match &cli.command {
        Command::Fuse(a) => cmd_fuse(a, warnings),
        Command::Report(a) => cmd_report(a, warnings),
        Command::Eval(a) => cmd_eval(a, out, warnings),
        Command::Simulate(a) => cmd_simulate(a),
        Command::InspectRules(a) => cmd_inspect_rules(a, out),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
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
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    let mut warnings = Vec::new();
    let result = execute(&cli, stdout, &mut warnings);
    for w in &warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.code
        }
    }
}
