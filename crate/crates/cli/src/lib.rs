//! Command-line front end for `ldp`.
//!
//! ```text
//! ldp rate     --dist exp:1 --rate 1 --u-grid 0:4:0.05 [--discrete] [--closed-form]
//! ldp simulate --dist exp:1 --rate 1 --t 10 --paths 5 --seed 7
//! ldp estimate --method is --dist exp:1 --u 4 --delta 0.1 --t 50 --paths 100000
//! ldp validate
//! ```
//!
//! Exit codes: 0 success, 1 failed validation check, 2 usage error,
//! 3 numerical failure.

pub mod commands;
pub mod config;
pub mod error;
pub mod validate;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Format, Method, RunConfig};
pub use error::{CliError, EXIT_CHECK_FAILED, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE};
pub use validate::{nominal_cumulant, CumulantFactory};

#[derive(Debug, Parser)]
#[command(name = "ldp", version, about = "Large deviations of compound Poisson processes")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Flat key=value file; command-line flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file (default: stdout).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Master seed (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Mark law: exp:<mean>, gamma:<shape>:<scale>, point:<c>, zeroinf:<p0>:<spec>, emp:<path>.
    #[arg(long, global = true)]
    pub dist: Option<String>,

    /// Jump rate r (default 1).
    #[arg(long, global = true)]
    pub rate: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the rate function I(u).
    Rate {
        /// start:stop:step
        #[arg(long, value_name = "START:STOP:STEP")]
        u_grid: Option<String>,
        /// i.i.d. rate function of the marks instead of the continuous-time one.
        #[arg(long)]
        discrete: bool,
        /// Add the exponential closed form as an oracle column when it applies.
        #[arg(long)]
        closed_form: bool,
    },
    /// Dump simulated jumps as CSV (path_id,tau,xi).
    Simulate {
        #[arg(long)]
        t: Option<f64>,
        /// Number of paths (default 1).
        #[arg(long)]
        paths: Option<u64>,
    },
    /// Estimate a probability and its decay rate.
    Estimate {
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long)]
        u: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        /// Number of paths (default 100000).
        #[arg(long)]
        paths: Option<u64>,
        /// Tail level for --method chernoff.
        #[arg(long)]
        j: Option<f64>,
        /// Tilt for --method laplace and chernoff.
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
    },
    /// Run the built-in self-checks; exit 1 if any fails.
    Validate,
}

impl Cli {
    /// Settings given on the command line, without the config file.
    pub fn flags(&self) -> RunConfig {
        let c = &self.common;
        let mut cfg = RunConfig {
            dist: c.dist.clone(),
            rate: c.rate,
            seed: c.seed,
            out: c.out.clone(),
            format: c.format,
            workers: c.workers,
            ..Default::default()
        };
        match &self.command {
            Command::Rate { u_grid, discrete, closed_form } => {
                cfg.u_grid = u_grid.clone();
                cfg.discrete = discrete.then_some(true);
                cfg.closed_form = closed_form.then_some(true);
            }
            Command::Simulate { t, paths } => {
                cfg.t = *t;
                cfg.paths = *paths;
            }
            Command::Estimate { method, u, delta, t, paths, j, lambda } => {
                cfg.method = *method;
                cfg.u = *u;
                cfg.delta = *delta;
                cfg.t = *t;
                cfg.paths = *paths;
                cfg.j = *j;
                cfg.lambda = *lambda;
            }
            Command::Validate => {}
        }
        cfg
    }

    /// Defaults < config file < flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.common.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        Ok(file.overlay(self.flags()))
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, stdout, stderr, &nominal_cumulant)
}

/// [`run`] with the cumulant used by `validate` replaced.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, factory: &CumulantFactory) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, stdout, stderr, factory) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write, factory: &CumulantFactory) -> Result<(), CliError> {
    let cfg = cli.resolve()?;
    let mut file;
    let out: &mut dyn Write = match &cfg.out {
        Some(path) => {
            file = BufWriter::new(File::create(path).map_err(|e| CliError::Io(path.display().to_string(), e))?);
            &mut file
        }
        None => stdout,
    };
    let result = match cli.command {
        Command::Rate { .. } => commands::cmd_rate(&cfg, out, stderr),
        Command::Simulate { .. } => commands::cmd_simulate(&cfg, out, stderr),
        Command::Estimate { .. } => commands::cmd_estimate(&cfg, out, stderr),
        Command::Validate => validate::cmd_validate_with(&cfg, factory, out, stderr),
    };
    out.flush().map_err(|e| CliError::Io("flush failed".into(), e))?;
    result
}
