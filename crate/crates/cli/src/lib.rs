//! Command-line front end for `mcturing-core`.
//!
//! [`dispatch`] parses an argument vector, runs one subcommand and writes
//! its output to the given sink. The binary is a thin wrapper around it so
//! tests can drive the CLI in-process.

mod commands;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use mcturing_core::kleene::DEFAULT_CAPACITY;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mcturing", version, about = "Metastability-containing circuits and Turing machines")]
pub struct Cli {
    /// Emit machine-readable JSON instead of human-readable lines.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for every sampling step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Maximum number of unstable positions to enumerate.
    #[arg(long, global = true, env = "MCTURING_CAPACITY", default_value_t = DEFAULT_CAPACITY)]
    pub capacity: usize,

    /// Write a run manifest describing this invocation.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a netlist on a ternary input.
    EvalCircuit {
        file: PathBuf,
        #[arg(long)]
        input: String,
        /// Boolean evaluation (input must be stable).
        #[arg(long)]
        boolean: bool,
    },
    /// Compare Kleene evaluation against the closure of the circuit.
    HazardCheck {
        file: PathBuf,
        /// Force sampling with this many inputs.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Check a ternary table (or every output of a netlist) for naturalness.
    CheckNatural { file: PathBuf },
    /// Print the netlist of the CMUX tree with the given number of levels.
    EmitCmux {
        #[arg(long)]
        levels: usize,
    },
    /// Run a machine on one input.
    Simulate {
        machine: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long)]
        budget: u64,
        #[arg(long, value_enum)]
        trace: Option<TraceFormat>,
    },
    /// Compare head trajectories over random inputs of one length.
    ObliviousProbe {
        machine: PathBuf,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
    /// Simulate the universal metastability-containing machine.
    ClosureSim {
        machine: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        /// Aggregate bounded outcomes instead of requiring every run to halt.
        #[arg(long)]
        bounded: bool,
    },
    /// Select a data cell with the tape CMUX algorithm.
    Cmux {
        #[arg(long)]
        select: String,
        #[arg(long)]
        data: String,
    },
    /// Measure universal-machine steps on u^n for a machine family.
    BenchBlowup {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// Decide whether the single u of the input changes the bounded outcome.
    Detect1 {
        machine: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long)]
        bound: u64,
    },
    /// Decide whether every resolution yields the same bit within |x|^c steps.
    DetectPoly {
        machine: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long)]
        exp: u32,
    },
    /// Map an instance to another problem and write it as a bundle.
    #[command(subcommand)]
    Reduce(Reduction),
    /// Brute-force tautology check for every formula in a file.
    Tautology {
        file: PathBuf,
        /// Also decide the mapped detect-poly instance.
        #[arg(long)]
        via_reduction: bool,
    },
    /// Bundled fixtures.
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Re-run the invocation recorded in a manifest.
    Replay { manifest: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum Reduction {
    /// Bounded halting to bounded halting with a bound 2^i + 1.
    PexpBhp {
        machine: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long)]
        bound: u64,
        #[command(flatten)]
        out: OutDir,
    },
    /// Bounded halting with a 2^i + 1 bound to single-u detection.
    Detect1 {
        machine: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long)]
        bound: u64,
        #[command(flatten)]
        out: OutDir,
    },
    /// One formula of a file to polynomial u-detection.
    Tautology {
        file: PathBuf,
        /// Zero-based index among the formulas of the file.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[command(flatten)]
        out: OutDir,
    },
}

#[derive(Debug, Args)]
pub struct OutDir {
    /// Directory receiving manifest.json and machine.tm.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    List,
    /// Print one fixture.
    Show { name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TraceFormat {
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Parity,
    And,
    Or,
    Majority,
    Constant,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub seed: u64,
    pub artifacts: Vec<PathBuf>,
    /// The argument vector, without the program name and `--manifest`.
    pub argv: Vec<String>,
}

/// Failure of a subcommand, mapped to an exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Domain(e.into())
    }
}

pub(crate) struct Ctx<'a> {
    pub out: &'a mut dyn Write,
    pub json: bool,
    pub seed: u64,
    pub capacity: usize,
    pub artifacts: Vec<PathBuf>,
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let matches = match Cli::command().try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };

    if let Command::Replay { manifest } = &cli.command {
        return replay(manifest, out, err);
    }

    let mut ctx = Ctx {
        out,
        json: cli.json,
        seed: cli.seed,
        capacity: cli.capacity,
        artifacts: Vec::new(),
    };
    let result = commands::run(&cli.command, &mut ctx).and_then(|()| {
        if let Some(path) = &cli.manifest {
            let manifest = RunManifest {
                command: command_path(&matches),
                inputs: inputs(&matches),
                seed: cli.seed,
                artifacts: ctx.artifacts.clone(),
                argv: strip_manifest_flag(&argv[1..]),
            };
            std::fs::write(path, serde_json::to_string_pretty(&manifest)? + "\n")?;
        }
        Ok(())
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Domain(e))
            if e
                .downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            EXIT_OK
        }
        Err(CliError::Domain(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_DOMAIN
        }
    }
}

fn replay(path: &PathBuf, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let manifest: RunManifest = match std::fs::read_to_string(path)
        .map_err(anyhow::Error::from)
        .and_then(|s| serde_json::from_str(&s).map_err(anyhow::Error::from))
    {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e:#}", path.display());
            return EXIT_DOMAIN;
        }
    };
    if manifest.argv.first().map(String::as_str) == Some("replay") {
        let _ = writeln!(err, "error: a manifest cannot replay another manifest");
        return EXIT_USAGE;
    }
    let argv = std::iter::once("mcturing".to_string()).chain(manifest.argv);
    dispatch(argv, out, err)
}

fn command_path(m: &ArgMatches) -> String {
    let mut parts = Vec::new();
    let mut cur = m;
    while let Some((name, sub)) = cur.subcommand() {
        parts.push(name.to_string());
        cur = sub;
    }
    parts.join(" ")
}

fn leaf(m: &ArgMatches) -> &ArgMatches {
    match m.subcommand() {
        Some((_, sub)) => leaf(sub),
        None => m,
    }
}

fn inputs(m: &ArgMatches) -> BTreeMap<String, String> {
    let m = leaf(m);
    m.ids()
        .filter(|id| !matches!(id.as_str(), "manifest"))
        .filter_map(|id| {
            let raw = m.try_get_raw(id.as_str()).ok().flatten()?;
            let vals: Vec<String> = raw.map(|v| v.to_string_lossy().into_owned()).collect();
            Some((id.to_string(), vals.join(",")))
        })
        .collect()
}

fn strip_manifest_flag(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--manifest" {
            it.next();
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}
