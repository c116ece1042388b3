//! Experiment runner behind the `esdkit` binary.
//!
//! Every run starts from a [`SweepSpec`], either read from `--config` or
//! empty, overridden by command-line flags and then resolved so that all
//! defaults are explicit. The resolved spec is written at the top of each
//! output. Grid points may be evaluated on any number of worker threads;
//! rows are always emitted in grid order.

mod experiments;
mod spec;
mod table;

use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub use experiments::run;
pub use spec::{parse_angles, Experiment, Format, ModelKind, ScanConfig, SweepSpec};
pub use table::{Cell, Table};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "esdkit", version, about = "Entanglement sudden death experiments")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Concurrences and Σ for the cavity model.
    Jc(Common),
    /// Concurrences, Σ and death/birth times for the bath model.
    Ww(Common),
    /// Geometric entanglement hierarchy of the cavity state.
    Hierarchy(Common),
    /// Discord across the pure cuts and for the atom pair.
    Discord(Common),
    /// Deviation of Σ from sin 2θ.
    Invariant {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        model: Option<ModelKind>,
    },
    /// Collective-mode concurrence against the spectral window.
    PartitionScan(Common),
    /// Fully separable geometric entanglement over (θ, Jt).
    Age4Surface(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Comma list; accepts `pi/4`, `2pi/5`, `0.3pi` and `a:b:n` ranges.
    #[arg(long)]
    theta: Option<String>,
    /// End of the time grid, in 1/J (cavity) or 1/Γ (bath).
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of time intervals.
    #[arg(long)]
    steps: Option<usize>,
    /// Seed for the optimizer restarts.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON sweep spec; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
    /// Exit with status 3 if any optimizer cell did not converge.
    #[arg(long)]
    strict: bool,
}

impl Command {
    fn split(self) -> (Experiment, Common, Option<ModelKind>) {
        match self {
            Command::Jc(c) => (Experiment::JcEvolution, c, None),
            Command::Ww(c) => (Experiment::WwEvolution, c, None),
            Command::Hierarchy(c) => (Experiment::Hierarchy, c, None),
            Command::Discord(c) => (Experiment::Discord, c, None),
            Command::Invariant { common, model } => (Experiment::Invariant, common, model),
            Command::PartitionScan(c) => (Experiment::PartitionScan, c, None),
            Command::Age4Surface(c) => (Experiment::Age4Surface, c, None),
        }
    }
}

fn build_spec(exp: Experiment, c: &Common, model: Option<ModelKind>) -> Result<SweepSpec> {
    let mut spec = match &c.config {
        Some(path) => SweepSpec::from_json(&std::fs::read_to_string(path)?)?,
        None => SweepSpec::default(),
    };
    if let Some(named) = spec.experiment.filter(|&e| e != exp) {
        return Err(Error::InvalidInput(format!(
            "config is for '{}' but the command runs '{}'",
            named.name(),
            exp.name()
        )));
    }
    spec.experiment = Some(exp);
    if let Some(t) = &c.theta {
        spec.thetas = Some(parse_angles(t)?);
    }
    spec.t_max = c.t_max.or(spec.t_max);
    spec.steps = c.steps.or(spec.steps);
    spec.seed = c.seed.unwrap_or(spec.seed);
    spec.format = c.format.unwrap_or(spec.format);
    spec.out = c.out.clone().or(spec.out);
    spec.workers = c.workers.unwrap_or(spec.workers);
    if let Some(m) = model {
        spec.model = m;
    }
    spec.resolve()
}

/// Resolved spec in, rendered document out, on a pool of `spec.workers`.
pub fn render(spec: &SweepSpec) -> Result<(String, bool)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::Numeric(format!("cannot start worker pool: {e}")))?;
    let table = pool.install(|| run(spec))?;
    let text = match spec.format {
        Format::Csv => table.to_csv(spec),
        Format::Json => table.to_json(spec),
    };
    Ok((text, table.unconverged))
}

fn execute(cli: Cli) -> Result<i32> {
    let (exp, common, model) = cli.command.split();
    let strict = common.strict;
    let spec = build_spec(exp, &common, model)?;
    let (text, unconverged) = render(&spec)?;
    match &spec.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    if unconverged {
        eprintln!("warning: some optimizer cells did not converge (see the converged column)");
        if strict {
            return Ok(EXIT_NUMERIC);
        }
    }
    Ok(EXIT_OK)
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) | Error::Json(_) => EXIT_INVALID,
        Error::Numeric(_) => EXIT_NUMERIC,
        Error::Io(_) => EXIT_IO,
    }
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
