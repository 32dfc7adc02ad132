//! coniveau: verify Milnor-operation certificates, DH tables and quadric
//! rank reports from the command line.

mod commands;
mod scenarios;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coniveau::certificates::{Report, ScenarioParams, SCHEMA_VERSION};
use coniveau::Error;
use serde::Serialize;

use commands::Outcome;
use scenarios::{resolve, UserScenarios};

#[derive(Parser)]
#[command(
    name = "coniveau",
    version,
    about = "Certificates for coniveau filtrations via Milnor operations",
    after_help = "EXIT STATUS:\n  0  all certificates verified / tables consistent\n  1  a mathematical check failed\n  2  input or configuration error\n\nEXAMPLES:\n  coniveau list\n  coniveau verify g2 --I 1\n  coniveau dh-table elementary --p 2 --n 3\n  coniveau rost --n 3 --format markdown\n  coniveau report --all --out report.json"
)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for reports when --out is not given
    #[arg(long, env = "CONIVEAU_OUT_DIR", global = true)]
    out_dir: Option<PathBuf>,
    /// Additional scenario file (repeatable)
    #[arg(long = "scenario-file", global = true)]
    scenario_files: Vec<PathBuf>,
    /// Directories searched for *.scenario files
    #[arg(long, env = "CONIVEAU_SCENARIO_PATH", global = true)]
    scenario_path: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Args, Clone)]
struct Select {
    /// Scenario or family name (see `list`)
    scenario: String,
    /// Prime
    #[arg(long)]
    p: Option<u32>,
    /// Rank parameter
    #[arg(long)]
    n: Option<usize>,
    /// SO_{2m+1} parameter
    #[arg(long)]
    m: Option<usize>,
    /// Lower the degree cap
    #[arg(long)]
    cap: Option<u32>,
}

impl Select {
    fn params(&self) -> ScenarioParams {
        ScenarioParams { p: self.p, n: self.n, m: self.m, cap: self.cap }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List built-in families and scenarios
    List,
    /// Issue a certificate for one class (default: the first candidate)
    Verify {
        #[command(flatten)]
        select: Select,
        /// Index sequence I, e.g. 1,2; searched when omitted
        #[arg(long = "I", value_delimiter = ',')]
        indices: Option<Vec<u32>>,
        /// Class to certify
        #[arg(long)]
        element: Option<String>,
    },
    /// Certify every candidate of a scenario
    DhTable {
        #[command(flatten)]
        select: Select,
    },
    /// Basis of the ring modulo the declared N^1 generators
    StableQuotient {
        #[command(flatten)]
        select: Select,
    },
    /// Graded dimensions up to the degree cap
    Hilbert {
        #[command(flatten)]
        select: Select,
    },
    /// Apply Q_{i_1}...Q_{i_k} to an element
    Qop {
        #[command(flatten)]
        select: Select,
        #[arg(long = "I", value_delimiter = ',', required = true)]
        indices: Vec<u32>,
        #[arg(long)]
        element: String,
    },
    /// Rost motive and quadric rings, N^1 searches and the DH check
    Rost {
        #[arg(long)]
        n: u32,
    },
    /// Full reproduction run, or one scenario's section
    Report {
        /// Run every scenario
        #[arg(long)]
        all: bool,
        scenario: Option<String>,
    },
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    schema_version: u32,
    kind: &'static str,
    reason: &'a str,
    message: String,
}

fn fail(reason: &str, message: String, code: u8) -> ExitCode {
    let r = ErrorReport { schema_version: SCHEMA_VERSION, kind: "error", reason, message };
    eprintln!("{}", serde_json::to_string(&r).expect("serializes"));
    ExitCode::from(code)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let user = UserScenarios::load(&cli.scenario_files, cli.scenario_path.as_deref())?;
    let target = |s: &Select| resolve(&s.scenario, s.params(), &user);
    match &cli.command {
        Command::List => commands::list(&user),
        Command::Verify { select, indices, element } => {
            commands::verify(target(select)?, indices.as_deref(), element.as_deref())
        }
        Command::DhTable { select } => commands::dh(target(select)?),
        Command::StableQuotient { select } => commands::stable(target(select)?),
        Command::Hilbert { select } => commands::hilbert(target(select)?),
        Command::Qop { select, indices, element } => commands::qop(target(select)?, indices, element),
        Command::Rost { n } => {
            if !(1..=6).contains(n) {
                return Err(Error::OutOfRange(format!("rost needs 1 ≤ n ≤ 6, got {n}")));
            }
            commands::rost(*n)
        }
        Command::Report { all: true, scenario: None } => commands::report_all(&user),
        Command::Report { all: false, scenario: Some(name) } => {
            commands::report_one(resolve(name, ScenarioParams::default(), &user)?)
        }
        Command::Report { .. } => Err(Error::Unsupported("report takes either --all or one scenario".into())),
    }
}

fn file_stem(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn write(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            return fail("usage", msg.trim_end().to_string(), 2);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => return fail(e.reason(), e.to_string(), if e.is_math_failure() { 1 } else { 2 }),
    };
    let text = match cli.format {
        Format::Json => Report::new(outcome.kind, &outcome.scenario, &outcome.scenario_hash, outcome.ok, &outcome.body).to_json(),
        Format::Markdown => outcome.markdown.clone(),
    };
    let ext = if cli.format == Format::Json { "json" } else { "md" };
    let dest = cli.out.clone().or_else(|| {
        cli.out_dir
            .as_ref()
            .map(|d| d.join(format!("{}-{}.{ext}", outcome.kind, file_stem(&outcome.scenario))))
    });
    match dest {
        Some(path) => {
            if let Err(e) = write(&path, &text) {
                return fail("io", format!("cannot write {}: {e}", path.display()), 2);
            }
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
