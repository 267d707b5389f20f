//! Command-line front end: loads a TOML run configuration, applies flag
//! overrides, and prints or writes deterministic tables. Exit codes separate
//! the failure families: 2 for unparseable or inconsistent configuration,
//! 3 for violated model contracts, 4 for fields the model does not cover,
//! 5 for output I/O, and 1 when the validation suite reports failures.

mod commands;
mod config;
mod table;
mod validate;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cfspec::CoreError;
use commands::Resolved;
use config::{AxisToken, ConfigError, FormatToken, PolToken, RunConfig};

#[derive(Parser)]
#[command(name = "cfspec", version, about = "Optical spectra of Kramers ions in ordered magnets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Single-ion energy levels with the zero-field g-factors
    Levels(FieldArgs),
    /// Transition line table at one field value
    Lines(FieldArgs),
    /// Two-ion transition lines at one field value
    PairLines(FieldArgs),
    /// Line table over the configured field grid
    Sweep(CommonArgs),
    /// Broadened intensity map over the configured field grid
    Render(CommonArgs),
    /// Built-in physics and serialization checks
    Validate(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Run configuration (TOML); built-in defaults apply when omitted
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override sweep.field_axis
    #[arg(long, value_enum, value_name = "AXIS")]
    field_axis: Option<AxisArg>,
    /// Override sweep.polarisations
    #[arg(long, value_enum, value_name = "POL")]
    polarisation: Option<PolArg>,
    /// Write output here instead of the configured destination
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Override output.format
    #[arg(long, value_enum, value_name = "FMT")]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct FieldArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Field value in tesla (line tables default to 0)
    #[arg(long, value_name = "TESLA", allow_negative_numbers = true)]
    field: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    C,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolArg {
    Pi,
    Sigma,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

enum CmdError {
    Config(ConfigError),
    Core(CoreError),
    Io(std::io::Error),
}

impl CmdError {
    fn message(&self) -> String {
        match self {
            CmdError::Config(e) => e.to_string(),
            CmdError::Core(e) => e.to_string(),
            CmdError::Io(e) => format!("cannot write output: {e}"),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CmdError::Config(_) | CmdError::Core(CoreError::Config(_)) => 2,
            CmdError::Core(CoreError::Argument(_) | CoreError::Contract(_)) => 3,
            CmdError::Core(CoreError::UnmodeledPhase(_)) => 4,
            CmdError::Io(_) => 5,
        }
    }
}

impl From<CoreError> for CmdError {
    fn from(e: CoreError) -> Self {
        CmdError::Core(e)
    }
}

fn load_config(common: &CommonArgs) -> Result<RunConfig, CmdError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path).map_err(CmdError::Config)?,
        None => RunConfig::default(),
    };
    if let Some(axis) = common.field_axis {
        cfg.sweep.field_axis = match axis {
            AxisArg::C => AxisToken::C,
            AxisArg::B => AxisToken::B,
        };
    }
    if let Some(pol) = common.polarisation {
        cfg.sweep.polarisations = match pol {
            PolArg::Pi => vec![PolToken::Pi],
            PolArg::Sigma => vec![PolToken::Sigma],
            PolArg::Both => vec![PolToken::Pi, PolToken::Sigma],
        };
    }
    if let Some(fmt) = common.format {
        cfg.output.format = match fmt {
            FormatArg::Csv => FormatToken::Csv,
            FormatArg::Json => FormatToken::Json,
        };
    }
    if let Some(out) = &common.out {
        cfg.output.path = Some(out.display().to_string());
    }
    cfg.validate().map_err(CmdError::Config)?;
    Ok(cfg)
}

fn write_output(cfg: &RunConfig, text: &str) -> Result<(), CmdError> {
    match &cfg.output.path {
        Some(path) => std::fs::write(path, text).map_err(CmdError::Io),
        // a downstream reader closing the pipe (e.g. `cfspec sweep | head`)
        // is not a failure of this run
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CmdError::Io(e)),
            _ => Ok(()),
        },
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CmdError> {
    let (common, field) = match &cli.cmd {
        Cmd::Levels(a) | Cmd::Lines(a) | Cmd::PairLines(a) => (&a.common, a.field),
        Cmd::Sweep(c) | Cmd::Render(c) | Cmd::Validate(c) => (c, None),
    };
    let cfg = load_config(common)?;
    let res = Resolved::new(&cfg)?;
    let (text, ok) = match &cli.cmd {
        Cmd::Levels(_) => (commands::cmd_levels(&res, field)?, true),
        Cmd::Lines(_) => (commands::cmd_lines(&res, field)?, true),
        Cmd::PairLines(_) => (commands::cmd_pair_lines(&res, field)?, true),
        Cmd::Sweep(_) => (commands::cmd_sweep(&res)?, true),
        Cmd::Render(_) => (commands::cmd_render(&res)?, true),
        Cmd::Validate(_) => validate::run(&res),
    };
    write_output(&cfg, &text)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
