use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use invshift::format::{parse_circle_support, parse_document};
use invshift::{run, AnalysisRequest, CircleInput, CliError, Command};

/// Exact analysis of X + Y ~ X for independent laws on finite abelian groups.
#[derive(Parser)]
#[command(name = "invshift", version)]
struct Cli {
    /// Request document (JSON). Read from stdin when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Λ, the invariance subgroup A, verdicts and the fixed-point basis.
    Analyze {
        /// Cross-check the fixed-point space with the brute-force solver.
        #[arg(long)]
        oracle: bool,
    },
    /// Cosets of A describing every law X with X + Y ~ X.
    FixedPoints {
        #[arg(long)]
        oracle: bool,
    },
    /// Check that X + Y and Y are independent for a fixed-point pair.
    Independence,
    /// Monte Carlo check of the law of X + Y (or of Y alone).
    Sample {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Classify a rational support on the circle [0, 1).
    Circle {
        /// Comma-separated fractions, e.g. "1/4,1/6".
        #[arg(long, default_value = "")]
        support: String,
        /// Y has irrational mass or infinitely many rational atoms.
        #[arg(long)]
        nonrational: bool,
    },
    /// Run the command named in the document.
    Run,
}

fn read_document(path: Option<&PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(CliError::from),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn build_request(cli: &Cli) -> Result<AnalysisRequest, CliError> {
    if let Cmd::Circle { support, nonrational } = &cli.command {
        let request = AnalysisRequest {
            group: None,
            distributions: BTreeMap::new(),
            command: Command::Circle,
            sample_count: None,
            seed: None,
            circle: Some(CircleInput { support: parse_circle_support(support)?, nonrational: *nonrational }),
            oracle: false,
        };
        request.validate()?;
        return Ok(request);
    }
    let mut request = parse_document(&read_document(cli.input.as_ref())?)?;
    match &cli.command {
        Cmd::Analyze { oracle } => {
            request.command = Command::Analyze;
            request.oracle |= oracle;
        }
        Cmd::FixedPoints { oracle } => {
            request.command = Command::FixedPoints;
            request.oracle |= oracle;
        }
        Cmd::Independence => request.command = Command::Independence,
        Cmd::Sample { n, seed } => {
            request.command = Command::Sample;
            request.sample_count = n.or(request.sample_count);
            request.seed = seed.or(request.seed);
        }
        Cmd::Run | Cmd::Circle { .. } => {}
    }
    request.validate()?;
    Ok(request)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let request = match build_request(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let outcome = run(&request);
    match cli.output {
        Output::Json => print!("{}", outcome.to_json()),
        Output::Text => print!("{}", outcome.to_text()),
    }
    ExitCode::from(outcome.exit_code)
}
