use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ncinv_cli::config::{Mode, RunConfig};
use ncinv_cli::runner::{self, RunOutcome};
use ncinv_cli::selftest;

/// Exit status: 0 on success/PASS, 1 on verification FAIL, 2 on input error.
const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "ncinv",
    about = "Constructive invariants of Lie nilpotent relatively free algebras and enveloping algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the mode selected by the config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        verify_degree: Option<usize>,
        #[arg(long)]
        group_cap: Option<usize>,
        #[arg(long)]
        quiet: bool,
    },
    /// Tabulate dimensions of the tensor, relatively free, and enveloping
    /// algebra components.
    Dims {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Print the Lyndon basis of the nilpotent free Lie algebra.
    LieBasis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Compute only the commutative minimal generating system.
    Comm {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        degree_bound: Option<usize>,
        #[arg(long)]
        group_cap: Option<usize>,
        #[arg(long)]
        quiet: bool,
    },
    /// Re-verify the generators stored in a result file against the config's
    /// group.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        result: PathBuf,
        #[arg(long)]
        verify_degree: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Run a polarization verification configured by the config's
    /// "polarize" section.
    Polarize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        verify_degree: Option<usize>,
        #[arg(long)]
        group_cap: Option<usize>,
        #[arg(long)]
        quiet: bool,
    },
    /// Run the randomized invariant suites.
    Selftest {
        /// Seed for the randomized checks; never affects pipeline output.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        quiet: bool,
    },
}

fn log_enabled() -> bool {
    matches!(std::env::var("NCINV_LOG").as_deref(), Ok("info") | Ok("debug"))
}

fn load_config(
    path: &Path,
    max_degree: Option<usize>,
    verify_degree: Option<usize>,
    group_cap: Option<usize>,
    force_mode: Option<Mode>,
) -> Result<(RunConfig, PathBuf), String> {
    let mut config = RunConfig::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(cap) = max_degree {
        config.caps.max_degree = cap;
    }
    if let Some(cap) = group_cap {
        config.caps.group_order = cap;
    }
    if let Some(d) = verify_degree {
        config.verify_degree = Some(d);
    }
    if let Some(mode) = force_mode {
        config.mode = mode;
    }
    config.validate().map_err(|e| format!("{}: {e}", path.display()))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((config, dir))
}

fn emit(outcome: &RunOutcome, out: Option<&Path>, quiet: bool) -> Result<(), String> {
    let json = outcome.result.to_json();
    if let Some(path) = out {
        std::fs::write(path, &json).map_err(|e| format!("{}: {e}", path.display()))?;
        if log_enabled() {
            eprintln!("ncinv: wrote {}", path.display());
        }
    }
    if !quiet {
        print!("{}", outcome.summary());
        if out.is_none() {
            print!("{json}");
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Run { config, out, max_degree, verify_degree, group_cap, quiet } => {
            let (cfg, dir) = load_config(&config, max_degree, verify_degree, group_cap, None)?;
            if log_enabled() {
                eprintln!("ncinv: running mode {}", cfg.mode.as_str());
            }
            let outcome = runner::execute(&cfg, Some(&dir)).map_err(|e| e.to_string())?;
            emit(&outcome, out.as_deref(), quiet)?;
            Ok(outcome.pass)
        }
        Command::Dims { n, p, max_degree, out, quiet } => {
            let cfg = RunConfig {
                mode: Mode::Dims,
                dim_v: Some(n),
                p: Some(p),
                group: None,
                external_generators: None,
                degree_bound: None,
                verify_degree: None,
                caps: ncinv_cli::config::Caps {
                    group_order: ncinv_cli::config::DEFAULT_GROUP_CAP,
                    max_degree,
                },
                polarize: None,
            };
            cfg.validate().map_err(|e| e.to_string())?;
            let outcome = runner::execute(&cfg, None).map_err(|e| e.to_string())?;
            emit(&outcome, out.as_deref(), quiet)?;
            Ok(outcome.pass)
        }
        Command::LieBasis { n, p, out, quiet } => {
            let outcome = runner::run_lie_basis(n, p).map_err(|e| e.to_string())?;
            emit(&outcome, out.as_deref(), quiet)?;
            Ok(outcome.pass)
        }
        Command::Comm { config, out, degree_bound, group_cap, quiet } => {
            let (mut cfg, dir) = load_config(&config, None, None, group_cap, Some(Mode::CommOnly))?;
            if degree_bound.is_some() {
                cfg.degree_bound = degree_bound;
            }
            let outcome = runner::execute(&cfg, Some(&dir)).map_err(|e| e.to_string())?;
            emit(&outcome, out.as_deref(), quiet)?;
            Ok(outcome.pass)
        }
        Command::Verify { config, result, verify_degree, out, quiet } => {
            let (cfg, _dir) = load_config(&config, None, None, None, None)?;
            let text = std::fs::read_to_string(&result)
                .map_err(|e| format!("{}: {e}", result.display()))?;
            let outcome =
                runner::execute_verify(&cfg, &text, verify_degree).map_err(|e| e.to_string())?;
            emit(&outcome, out.as_deref(), quiet)?;
            Ok(outcome.pass)
        }
        Command::Polarize { config, out, max_degree, verify_degree, group_cap, quiet } => {
            let (cfg, dir) =
                load_config(&config, max_degree, verify_degree, group_cap, Some(Mode::Polarize))?;
            let outcome = runner::execute(&cfg, Some(&dir)).map_err(|e| e.to_string())?;
            emit(&outcome, out.as_deref(), quiet)?;
            Ok(outcome.pass)
        }
        Command::Selftest { seed, quiet } => {
            let outcome = selftest::run(seed);
            if !quiet {
                print!("{}", outcome.log);
            }
            Ok(outcome.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(message) => {
            eprintln!("ncinv: {message}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
