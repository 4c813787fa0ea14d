//! `hp`: runs the verification suites and writes CSV or JSON reports.
//!
//! Exit status: 0 when every check passes, 1 when a check fails or cannot be
//! computed, 2 on usage or I/O errors.

mod config;
mod report;
mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Format, GridSpec, RunConfig, Suite, ToleranceOverrides};
use suites::Context;

#[derive(Parser, Debug)]
#[command(
    name = "hp",
    version,
    about = "Verification suites for the zeta-zero eigenfunction construction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the embedded zeros table, or regenerate it by scanning Ξ.
    Zeros {
        /// Rebuild the table from scratch (slow) instead of checking it.
        #[arg(long)]
        regenerate: bool,
        /// Number of zeros to check or generate.
        #[arg(long)]
        count: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a named suite.
    Verify {
        suite: VerifySuite,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Self-Fourier, theta-equation and antiderivative checks for η.
    EtaCheck {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Series vs quadrature for F_ρ and the eigen-equation residual.
    EigenCheck {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Three-way agreement of the counterterm routes.
    #[command(alias = "delta")]
    DeltaCheck {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Partial sums, counterterms and residuals on a grid.
    Reconstruct {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// L² residual norms over l and their log-log slope.
    Rate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Every suite with its defaults.
    All {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifySuite {
    Eta,
    Eigen,
    Delta,
    Zeros,
    Reconstruct,
    Rate,
    All,
}

impl From<VerifySuite> for Suite {
    fn from(v: VerifySuite) -> Self {
        match v {
            VerifySuite::Eta => Suite::EtaCheck,
            VerifySuite::Eigen => Suite::EigenCheck,
            VerifySuite::Delta => Suite::DeltaCheck,
            VerifySuite::Zeros => Suite::Zeros,
            VerifySuite::Reconstruct => Suite::Reconstruct,
            VerifySuite::Rate => Suite::Rate,
            VerifySuite::All => Suite::All,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// 1-based index of the zeta zero ρ = 1/2 + iγ.
    #[arg(long, default_value_t = 1)]
    rho_index: usize,
    /// Comma-separated truncation orders.
    #[arg(long = "l", value_delimiter = ',')]
    l: Option<Vec<u32>>,
    /// Comma-separated evaluation points.
    #[arg(long = "x", value_delimiter = ',', conflicts_with = "domain")]
    x: Option<Vec<f64>>,
    /// Log-spaced grid `x_min:x_max:n`.
    #[arg(long, value_parser = GridSpec::parse_domain)]
    domain: Option<GridSpec>,
    /// Absolute quadrature tolerance.
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Maximum bisection depth in adaptive quadrature.
    #[arg(long)]
    max_depth: Option<u32>,
    /// Also compute closed form B of the counterterm in reconstruction.
    #[arg(long)]
    verify_delta: bool,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Worker threads for grid evaluation (default: logical cores).
    #[arg(long)]
    jobs: Option<usize>,
}

impl CommonArgs {
    fn into_config(self, command: Suite) -> RunConfig {
        let grid = match (self.x, self.domain) {
            (Some(xs), _) => Some(GridSpec::List(xs)),
            (None, d) => d,
        };
        let mut c = RunConfig::new(command);
        c.rho_index = self.rho_index;
        c.l_list = self.l;
        c.grid = grid;
        c.tolerances = ToleranceOverrides {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_depth: self.max_depth,
        };
        c.output_path = self.out;
        c.format = match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
        c.jobs = self.jobs;
        c.verify_delta = self.verify_delta;
        c
    }
}

fn config_from(cli: Cli) -> RunConfig {
    match cli.command {
        Command::Zeros {
            regenerate,
            count,
            common,
        } => {
            let mut c = common.into_config(Suite::Zeros);
            c.regenerate = regenerate;
            c.zero_count = count;
            c
        }
        Command::Verify { suite, common } => common.into_config(suite.into()),
        Command::EtaCheck { common } => common.into_config(Suite::EtaCheck),
        Command::EigenCheck { common } => common.into_config(Suite::EigenCheck),
        Command::DeltaCheck { common } => common.into_config(Suite::DeltaCheck),
        Command::Reconstruct { common } => common.into_config(Suite::Reconstruct),
        Command::Rate { common } => common.into_config(Suite::Rate),
        Command::All { common } => common.into_config(Suite::All),
    }
}

enum Failure {
    Usage(String),
    Check(String),
}

fn execute(config: &RunConfig) -> Result<bool, Failure> {
    let ctx = Context::resolve(config).map_err(Failure::Usage)?;
    let report = with_jobs(config.jobs, || suites::run(&ctx, config.command)).map_err(|e| {
        Failure::Check(format!(
            "{} suite could not complete: {e}",
            config.command.name()
        ))
    })?;
    let text = report.render(config.format, &ctx.header());
    match &config.output_path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))?,
    }
    eprintln!(
        "{}: {}",
        report.suite,
        if report.pass { "PASS" } else { "FAIL" }
    );
    Ok(report.pass)
}

#[cfg(feature = "parallel")]
fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<R: Send>(_jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    f()
}

fn main() -> ExitCode {
    let config = config_from(Cli::parse());
    match execute(&config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("hp: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("hp: {msg}");
            ExitCode::from(2)
        }
    }
}
