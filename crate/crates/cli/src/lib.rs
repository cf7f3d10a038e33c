//! Command-line front end for `balpoint`.
//!
//! Every command reads one JSON document (see [`document`]) and writes one
//! JSON report wrapped in an [`output::Envelope`].

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Read, Write};

use clap::{Parser, Subcommand};

pub mod commands;
pub mod document;
pub mod output;

use commands::{Outcome, EXIT_INPUT};
use document::{InputError, LoadedDocument, Overrides, Settings};

#[derive(Debug, Parser)]
#[command(name = "balpoint", version, about = "Balancing checks and solvers for weighted point blow-ups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Input document, or `-` for stdin.
    #[arg(long, short, global = true, default_value = "-")]
    pub input: String,

    /// Where to write the JSON report; `-` is stdout.
    #[arg(long, short, global = true, default_value = "-")]
    pub output: String,

    /// Per-sample CSV trace (sample and certify only).
    #[arg(long, global = true)]
    pub csv: Option<String>,

    #[arg(long, global = true)]
    pub tol_res: Option<f64>,

    #[arg(long, global = true)]
    pub tol_pd: Option<f64>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true)]
    pub samples: Option<usize>,

    /// Relative weight radius for certify.
    #[arg(long, global = true)]
    pub radius: Option<f64>,

    /// Grid nodes per weight axis for certify.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Evaluate genericity, balancing and general position.
    Check,
    /// Move the configuration along its orbit to a balanced one.
    Solve,
    /// Balanced heights for two weighted points on the ruled surface.
    Heights,
    /// Balance two points on the ruled surface by bisection in flow time.
    Bisect,
    /// Classify a pair of heights on the ruled surface.
    Classify,
    /// Scan a weight grid around an admissible configuration.
    Certify,
    /// Sample random configurations and try to balance each.
    Sample,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            tol_res: self.tol_res,
            tol_pd: self.tol_pd,
            seed: self.seed,
            samples: self.samples,
            radius: self.radius,
            grid: self.grid,
        }
    }
}

fn load(path: &str) -> Result<LoadedDocument, InputError> {
    if path == "-" {
        let mut bytes = Vec::new();
        io::stdin().read_to_end(&mut bytes).map_err(|e| InputError(format!("stdin: {e}")))?;
        LoadedDocument::parse("<stdin>", &bytes)
    } else {
        LoadedDocument::read(path)
    }
}

fn write_to(path: &str, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), InputError> {
    let res = if path == "-" {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        f(&mut lock)
    } else {
        File::create(path).and_then(|mut file| f(&mut file))
    };
    res.map_err(|e| InputError(format!("{path}: {e}")))
}

/// Execute a parsed command line and return its outcome.
pub fn execute(cli: &Cli) -> Result<Outcome, InputError> {
    let doc = load(&cli.input)?;
    let settings = Settings::resolve(&doc.doc.options, &cli.overrides())?;
    match cli.command {
        Command::Check => commands::check(&doc, &settings),
        Command::Solve => commands::solve(&doc, &settings),
        Command::Heights => commands::heights(&doc, &settings),
        Command::Bisect => commands::bisect(&doc, &settings),
        Command::Classify => commands::classify(&doc, &settings),
        Command::Certify => commands::certify(&doc, &settings),
        Command::Sample => commands::sample(&doc, &settings),
    }
}

fn run_parsed(cli: &Cli) -> Result<i32, InputError> {
    let outcome = execute(cli)?;
    write_to(&cli.output, |w| writeln!(w, "{}", outcome.json))?;
    if let Some(path) = &cli.csv {
        match &outcome.experiment {
            Some(report) => write_to(path, |w| report.write_csv(w))?,
            None => return Err(InputError("--csv applies to sample and certify only".into())),
        }
    }
    if let Some(t) = outcome.wall_clock() {
        eprintln!("wall clock: {:.3} s", t.as_secs_f64());
    }
    Ok(outcome.exit)
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    match run_parsed(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
