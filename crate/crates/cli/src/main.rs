mod commands;
mod selftest;
mod session;

use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use branchdiv::Error;
use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{MapSpec, Report};
use session::Session;

/// Errors surfaced by the front end.
#[derive(Debug)]
pub enum CliError {
    /// Malformed arguments, fixture files or branch addresses.
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Core(e) => e.code(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::Parse(_) | Error::UnknownBranch(_)) => 2,
            CliError::Core(Error::Invariant(_)) => 4,
            CliError::Core(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(name = "branchdiv", version, about = "Branches, divisors and linear series on plane curves")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Series precision for displayed expansions and oracle checks.
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// File of `curve <name>: <form>` lines.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Branches at a point, or at every singular point.
    Branches {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        point: Option<String>,
    },
    /// The weighted set cut by a form, with the Bezout check.
    Intersect {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        form: String,
    },
    /// Divisor of a rational function `num/den`.
    Div {
        #[arg(long)]
        curve: String,
        #[arg(long = "fn")]
        func: String,
    },
    /// `(ord, val)` of a function at a branch `P/i`.
    Ordval {
        #[arg(long)]
        curve: String,
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        branch: String,
    },
    /// Dimension, order and fixed part of the series cut by a system.
    Series {
        #[arg(long)]
        curve: String,
        /// Forms of one degree; repeat the flag or separate with commas.
        #[arg(long = "form", required = true)]
        forms: Vec<String>,
    },
    /// Basis of L(G).
    Rrspace {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        divisor: String,
    },
    /// A function f with div f = A - B, or NO.
    Equiv {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// The complete series |G|.
    Complete {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        divisor: String,
    },
    /// Genus of the curve.
    Genus {
        #[arg(long)]
        curve: String,
    },
    /// Push a divisor forward (or pull it back) along a birational map.
    Transport {
        /// JSON document with source, target, map, inverse, divisor and
        /// direction; `-` reads standard input.
        #[arg(long, conflicts_with_all = ["source", "target", "map"])]
        input: Option<String>,
        #[arg(long, requires_all = ["target", "map", "divisor"])]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
        /// Three forms separated by commas.
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        inverse: Option<String>,
        #[arg(long)]
        divisor: Option<String>,
        /// Treat the divisor as living on the target and pull it back.
        #[arg(long)]
        pullback: bool,
    },
    /// Run the oracle battery on the built-in fixtures.
    Selftest,
}

fn read_input(path: &str) -> Result<serde_json::Value, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("transport input is not JSON: {e}")))
}

fn dispatch(s: &Session, cmd: Command) -> Result<(Report, bool), CliError> {
    let ok = |r: Report| Ok((r, true));
    match cmd {
        Command::Branches { curve, point } => ok(commands::branches(s, &curve, point.as_deref())?),
        Command::Intersect { curve, form } => ok(commands::intersect_cmd(s, &curve, &form)?),
        Command::Div { curve, func } => ok(commands::div(s, &curve, &func)?),
        Command::Ordval { curve, func, branch } => ok(commands::ordval(s, &curve, &func, &branch)?),
        Command::Series { curve, forms } => ok(commands::series(s, &curve, &forms)?),
        Command::Rrspace { curve, divisor } => ok(commands::rrspace(s, &curve, &divisor)?),
        Command::Equiv { curve, a, b } => ok(commands::equiv(s, &curve, &a, &b)?),
        Command::Complete { curve, divisor } => ok(commands::complete(s, &curve, &divisor)?),
        Command::Genus { curve } => ok(commands::genus_cmd(s, &curve)?),
        Command::Transport { input, source, target, map, inverse, divisor, pullback } => {
            let spec = match input {
                Some(path) => MapSpec::from_json(&read_input(&path)?)?,
                None => MapSpec {
                    source: source.ok_or_else(|| CliError::Usage("transport needs --source or --input".into()))?,
                    target: target.unwrap_or_default(),
                    forms: map.unwrap_or_default(),
                    inverse,
                    divisor: divisor.unwrap_or_default(),
                    pullback,
                },
            };
            ok(commands::transport(s, &spec)?)
        }
        Command::Selftest => selftest::run(s.seed, s.precision),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut session = Session::default();
    session.json = cli.json;
    session.precision = cli.precision;
    session.seed = cli.seed;
    let result = match &cli.fixtures {
        Some(path) => session.load_fixtures(path),
        None => Ok(()),
    }
    .and_then(|_| dispatch(&session, cli.command));
    match result {
        Ok((report, pass)) => {
            if session.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable report"));
            } else {
                print!("{}", report.text);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(e) => {
            let body = json!({ "error": { "code": e.code(), "message": e.message(), "exit": e.exit_code() } });
            if session.json {
                println!("{}", serde_json::to_string_pretty(&body).expect("serializable error"));
            } else {
                eprintln!("error [{}]: {}", e.code(), e.message());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
