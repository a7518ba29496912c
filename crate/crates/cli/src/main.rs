mod settings;
mod source;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use dpsadc::analysis::{compare, evaluate, run, sweep, sweep_to_csv};
use dpsadc::{read_events, reconstruct_stream, write_events};
use serde::Serialize;

use settings::{AdcArgs, DpsArgs, Settings, DEFAULT_FS_HZ};
use source::SourceArgs;

const AFTER_HELP: &str = "\
Exit status: 0 on success, 1 on data or I/O errors, 2 on usage or configuration errors.

The --config file holds key=value lines. Recognized keys: bits, v_min, v_max, fs_hz,
delta_mv, timestamp_bits, emit_startup_pair, lc_spacing_mv, e_window_comparison,
e_sar_bit, e_dac_setting, e_digital_cycle. Flags take precedence over the file.

Every command is deterministic. DPS_SIM_SEED is reserved and currently ignored.";

#[derive(Debug, Parser)]
#[command(name = "dpsadc", version, about = "Dynamic predictive sampling ADC simulator", after_help = AFTER_HELP)]
struct Cli {
    /// key=value file with defaults for converter options and energy weights
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode a trace into an event file and print a run report
    Simulate(SimulateArgs),
    /// Rebuild a `t,v` trace from an event file
    Reconstruct(ReconstructArgs),
    /// Score an event file against the trace it encodes
    Evaluate(EvaluateArgs),
    /// Compression and error over a list of window widths
    Sweep(SweepArgs),
    /// Event counts of DPS, level-crossing and Nyquist sampling on one trace
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    adc: AdcArgs,
    #[command(flatten)]
    dps: DpsArgs,
    /// Event file to write
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    /// Event file to decode
    #[arg(long, value_name = "FILE")]
    events: PathBuf,
    /// Output CSV [default: stdout]
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Event file to score
    #[arg(long, value_name = "FILE")]
    events: PathBuf,
    /// Rate of a generated input [default: the event file's rate]
    #[arg(long, value_name = "HZ")]
    fs: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    adc: AdcArgs,
    /// Comma-separated window half-widths in millivolts
    #[arg(long, value_name = "MV,MV,...", value_delimiter = ',', required = true)]
    delta_mv_list: Vec<f64>,
    /// Timestamp counter width [default: 10]
    #[arg(long)]
    ts_bits: Option<u32>,
    /// Output CSV [default: stdout]
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    adc: AdcArgs,
    #[command(flatten)]
    dps: DpsArgs,
    /// Level-crossing grid pitch in millivolts [default: the DPS window half-width]
    #[arg(long, value_name = "MV")]
    lc_spacing_mv: Option<f64>,
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<dpsadc::Error> for Failure {
    fn from(e: dpsadc::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

trait UsageExt<T> {
    fn usage(self) -> Result<T, Failure>;
}

impl<T> UsageExt<T> for anyhow::Result<T> {
    fn usage(self) -> Result<T, Failure> {
        self.map_err(Failure::Usage)
    }
}

type CmdResult = Result<(), Failure>;

fn print_json<T: Serialize>(value: &T) -> CmdResult {
    let mut text = serde_json::to_string_pretty(value).context("serializing report")?;
    text.push('\n');
    write_text(None, &text)
}

fn write_text(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // A reader that stops early (`| head`) is not an error.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            r => r.context("writing to stdout")?,
        },
    }
    Ok(())
}

fn require_delta(settings: &Settings, dps: &DpsArgs) -> Result<f64, Failure> {
    settings.delta_mv(dps).usage()?.ok_or_else(|| {
        Failure::Usage(anyhow!(
            "--delta-mv is required (or set delta_mv in --config)"
        ))
    })
}

fn simulate(settings: &Settings, args: &SimulateArgs) -> CmdResult {
    let adc = settings.adc(&args.adc).usage()?;
    let delta_mv = require_delta(settings, &args.dps)?;
    let cfg = settings.dps(adc, &args.dps, delta_mv).usage()?;
    let model = settings.energy().usage()?;
    let fs = settings.fs_override(&args.adc).usage()?;
    let signal = args.source.load(fs, DEFAULT_FS_HZ)?;
    let (stream, report) = run(&signal, &cfg, &model)?;
    if let Some(out) = &args.out {
        write_events(out, &stream)?;
    }
    print_json(&report)
}

fn reconstruct(args: &ReconstructArgs) -> CmdResult {
    let stream = read_events(&args.events)?;
    let signal = reconstruct_stream(&stream)
        .with_context(|| format!("reconstructing {}", args.events.display()))?;
    write_text(args.out.as_deref(), &signal.to_csv_string())
}

fn evaluate_cmd(settings: &Settings, args: &EvaluateArgs) -> CmdResult {
    let model = settings.energy().usage()?;
    let stream = read_events(&args.events)?;
    let signal = args.source.load(args.fs, stream.fs_hz())?;
    print_json(&evaluate(&signal, &stream, &model)?)
}

fn sweep_cmd(settings: &Settings, args: &SweepArgs) -> CmdResult {
    if args.delta_mv_list.len() < 2 {
        return Err(Failure::Usage(anyhow!(
            "--delta-mv-list needs at least two values, got {}",
            args.delta_mv_list.len()
        )));
    }
    let adc = settings.adc(&args.adc).usage()?;
    let ts = settings.timestamp_bits(args.ts_bits).usage()?;
    let fs = settings.fs_override(&args.adc).usage()?;
    let signal = args.source.load(fs, DEFAULT_FS_HZ)?;
    let rows = sweep(&signal, &adc, ts, &args.delta_mv_list).map_err(|e| match e {
        dpsadc::Error::InvalidConfig(_) => Failure::Usage(e.into()),
        e => e.into(),
    })?;
    write_text(args.out.as_deref(), &sweep_to_csv(&rows))
}

fn compare_cmd(settings: &Settings, args: &CompareArgs) -> CmdResult {
    let adc = settings.adc(&args.adc).usage()?;
    let delta_mv = require_delta(settings, &args.dps)?;
    let dps = settings.dps(adc, &args.dps, delta_mv).usage()?;
    let lc = settings.lc(adc, args.lc_spacing_mv, delta_mv).usage()?;
    let fs = settings.fs_override(&args.adc).usage()?;
    let signal = args.source.load(fs, DEFAULT_FS_HZ)?;
    print_json(&compare(&signal, &dps, &lc)?)
}

fn dispatch(cli: &Cli) -> CmdResult {
    let settings = Settings::load(cli.config.as_deref()).usage()?;
    match &cli.command {
        Command::Simulate(args) => simulate(&settings, args),
        Command::Evaluate(args) => evaluate_cmd(&settings, args),
        Command::Sweep(args) => sweep_cmd(&settings, args),
        Command::Compare(args) => compare_cmd(&settings, args),
        Command::Reconstruct(args) => reconstruct(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
