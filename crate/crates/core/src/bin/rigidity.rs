use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rigidity::pipeline::cli::{self, CommandOutput, EXIT_INPUT_ERROR};
use rigidity::pipeline::{GroupSource, PipelineConfig, PipelineMode, ReportFormat};

#[derive(Parser)]
#[command(
    name = "rigidity",
    version,
    about = "Certify or disprove conformal rigidity of graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Lower,
    Upper,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Numeric,
}

#[derive(Args)]
struct Common {
    /// Group source: auto, file:<path> or fix:<v1,v2,...>.
    #[arg(long, default_value = "auto")]
    group: String,
    /// Seed for randomized steps; falls back to RIGIDITY_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Print JSON instead of a text summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum, default_value = "both")]
    target: Target,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// SDP feasibility tolerance.
    #[arg(long)]
    tol_sdp: Option<f64>,
    /// Report CERTIFIED_NUMERIC from the SDP solution when the multiplicity bound fails.
    #[arg(long)]
    allow_numeric: bool,
    /// Include per-stage timings in the report.
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full certification flow on one graph file.
    Check {
        file: PathBuf,
        #[command(flatten)]
        args: CheckArgs,
        /// Write the JSON report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the automorphism group and its edge orbits.
    Orbits {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print the Laplacian spectrum and the extremal eigenvalue multiplicities.
    Spectrum {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search for edge weights beating the uniform weighting.
    Disprove {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Run `check` on every graph file in a directory.
    Batch {
        dir: PathBuf,
        #[command(flatten)]
        args: CheckArgs,
    },
}

fn targets(t: Target) -> Vec<rigidity::certify::Kind> {
    let s = match t {
        Target::Lower => "lower",
        Target::Upper => "upper",
        Target::Both => "both",
    };
    cli::parse_targets(s).expect("valid target")
}

fn format(json: bool) -> ReportFormat {
    if json {
        ReportFormat::Json
    } else {
        ReportFormat::Text
    }
}

fn config(common: &Common) -> rigidity::Result<PipelineConfig> {
    let env = std::env::var("RIGIDITY_SEED").ok();
    Ok(PipelineConfig {
        group: GroupSource::parse(&common.group)?,
        seed: cli::resolve_seed(common.seed, env.as_deref())?,
        ..Default::default()
    })
}

fn check_config(args: &CheckArgs) -> rigidity::Result<PipelineConfig> {
    let mut cfg = config(&args.common)?;
    if let Some(t) = args.tol_sdp {
        cfg.sdp_tol = t;
    }
    cfg.mode = match args.mode {
        Mode::Exact => PipelineMode::ExactFirst,
        Mode::Numeric => PipelineMode::NumericOnly,
    };
    cfg.allow_numeric_downgrade = args.allow_numeric;
    cfg.include_timings = args.timings;
    Ok(cfg)
}

fn run(command: Command) -> rigidity::Result<CommandOutput> {
    match command {
        Command::Check { file, args, report } => {
            let cfg = check_config(&args)?;
            cli::check(
                &file,
                &targets(args.target),
                &cfg,
                format(args.common.json),
                report.as_deref(),
            )
        }
        Command::Orbits { file, common } => {
            cli::orbits(&file, &config(&common)?, format(common.json))
        }
        Command::Spectrum { file, json } => {
            cli::spectrum(&file, &PipelineConfig::default(), format(json))
        }
        Command::Disprove {
            file,
            target,
            common,
        } => cli::disprove(
            &file,
            &targets(target),
            &config(&common)?,
            format(common.json),
        ),
        Command::Batch { dir, args } => {
            let cfg = check_config(&args)?;
            cli::batch(&dir, &targets(args.target), &cfg, format(args.common.json))
        }
    }
}

fn main() -> ExitCode {
    let parsed = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    match run(parsed.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            if !out.stdout.ends_with('\n') {
                println!();
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}
