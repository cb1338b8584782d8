use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use endoscopy::Error;

mod verbs;

#[derive(Parser, Debug)]
#[command(name = "endoscopy", version, about = "Root data, norm maps and matching for twisted endoscopy")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Ascii,
    Dot,
}

#[derive(Args, Debug, Clone)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// JSON file, or inline JSON starting with `{`.
    #[arg(long = "in")]
    input: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    /// Working precision; defaults to $ENDOSCOPY_PRECISION, then 8.
    #[arg(long = "K")]
    k: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// A built-in root datum, or its endoscopic datum.
    Datum {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        endoscopic: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Extended Dynkin diagrams.
    Diagram {
        #[arg(long, required_unless_present_any = ["table", "kind"])]
        family: Option<String>,
        #[arg(long, requires = "family")]
        n: Option<usize>,
        /// All six blocks of the folding table.
        #[arg(long)]
        table: bool,
        /// A simple type such as `G2`, with the trivial involution.
        #[arg(long = "type")]
        kind: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Root system of `(G^{tΘ})°` for a torus point given as
    /// `{"order": m, "exponents": [...]}`.
    FixedSystem {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Types of the proper subdiagrams of an extended diagram.
    Classify {
        /// `A4` uses the twisted diagram of `PGL_5`; other letters the
        /// untwisted one.
        #[arg(long = "type")]
        kind: String,
        #[command(flatten)]
        output: Output,
    },
    /// Norm of a twisted representative, or the image test over `Q_p`.
    Norm {
        #[arg(long)]
        kind: Option<String>,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Topological Jordan decomposition.
    Jordan {
        #[arg(long)]
        twisted: bool,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// BC-matching of torus points, or a composed matched pair.
    Match {
        #[arg(long)]
        kind: Option<String>,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// `i_2(γ)` against `γ²`.
    Bc1 {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Integral conjugacy or congruence transfer.
    Transfer {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// The acceptance suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include wall-clock timings (the report is then not reproducible).
        #[arg(long)]
        timings: bool,
        /// Comma-separated criterion ids; all by default.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        #[command(flatten)]
        output: Output,
    },
}

/// What a verb produced: a JSON report, an optional text rendering and
/// whether all checks passed.
pub struct Report {
    pub json: Value,
    pub text: Option<String>,
    pub ok: bool,
}

impl Report {
    pub fn ok(json: Value) -> Self {
        Report { json, text: None, ok: true }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::NotUnit(_) => "not_unit",
        Error::Singular(_) => "singular",
        Error::Precision(_) => "precision",
        Error::Dimension(_) => "dimension",
        Error::Precondition(_) => "precondition",
        Error::Unsupported(_) => "unsupported",
        Error::Obstruction(_) => "obstruction",
        Error::Parse(_) => "parse",
    }
}

fn error_json(e: &Error) -> Value {
    json!({ "error": { "kind": error_kind(e), "message": e.to_string() } })
}

fn emit(output: &Output, report: &Report) -> std::io::Result<()> {
    let body = match (output.format, &report.text) {
        (Format::Json, _) | (_, None) => serde_json::to_string_pretty(&report.json).expect("serializable") + "\n",
        (_, Some(t)) => t.clone(),
    };
    match &output.out {
        Some(path) => fs::write(path, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (output, result) = verbs::execute(cli.verb);
    match result {
        Ok(report) => {
            if let Err(e) = emit(&output, &report) {
                eprintln!("{}", json!({ "error": { "kind": "io", "message": e.to_string() } }));
                return ExitCode::from(2);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            println!("{}", serde_json::to_string_pretty(&error_json(&e)).expect("serializable"));
            ExitCode::from(2)
        }
    }
}
