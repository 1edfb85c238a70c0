use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use symwh_cli::commands::{self, default_workers};
use symwh_cli::config::RunConfig;
use symwh_cli::{CliError, EXIT_INVARIANT, EXIT_OK};

#[derive(Parser)]
#[command(name = "symwh", version, about = "Canonical Wiener-Hopf factorisation of symmetric 2x2 rational matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker cap for grid rows; overrides the config.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct Point {
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    v: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Factorise at one point and write a TOML report.
    Factorize {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: Point,
    },
    /// Sweep the config grid and write a table of metric fields.
    Grid {
        #[command(flatten)]
        common: Common,
    },
    /// Run the invariant suite at the config points.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: Point,
    },
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Factorize { common, point } => {
            let cfg = RunConfig::load(&common.config)?;
            let (rho, v) = commands::select_points(&cfg, point.rho, point.v)?[0];
            let report = commands::factorize(&cfg, rho, v)?;
            let out = common.out.or(cfg.output.report.clone());
            write_out(out.as_deref(), &report.to_toml()?)?;
            if !report.pass {
                eprintln!("error[InvariantFailure]: residuals above tolerance {:e}", report.residuals.tol);
                return Ok(EXIT_INVARIANT);
            }
            Ok(EXIT_OK)
        }
        Command::Grid { common } => {
            let cfg = RunConfig::load(&common.config)?;
            let workers = match common.workers.or(cfg.workers) {
                Some(0) => return Err(CliError::Config("workers must be at least 1".into())),
                Some(w) => w,
                None => default_workers(),
            };
            let rows = commands::grid(&cfg, workers)?;
            let out = common.out.or(cfg.output.table.clone());
            write_out(out.as_deref(), &commands::format_table(&rows, cfg.output.table_format))?;
            let failed = rows.iter().filter(|r| !r.ok()).count();
            if failed > 0 {
                eprintln!("{failed} of {} rows failed", rows.len());
            }
            Ok(commands::grid_exit(&rows))
        }
        Command::Verify { common, point } => {
            let cfg = RunConfig::load(&common.config)?;
            let points = commands::select_points(&cfg, point.rho, point.v)?;
            let summary = commands::verify(&cfg, &points)?;
            let text = summary.render();
            write_out(common.out.as_deref(), &text)?;
            if !summary.pass() {
                eprint!("{}", text.lines().filter(|l| !l.ends_with(" ok")).map(|l| format!("{l}\n")).collect::<String>());
            }
            Ok(summary.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { symwh_cli::EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("{e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
