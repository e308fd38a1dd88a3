//! `operadica`: dimensions, duals, series checks and the registry verifier.
//!
//! Exit codes: 0 success (warnings allowed), 1 a check failed, 2 usage or
//! parse error, 3 a budget was exceeded.

mod commands;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "operadica", version, about = "Computer algebra for operads given by generators and relations")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Print the elapsed time on stderr.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Ns,
    Symmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Ordinary,
    Exponential,
}

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// A registry name or a path to a `.operad` file.
    pub source: String,
    /// Parameter override, `name=value` (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions of the free operad and of the quotient, arity by arity.
    Dims {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long)]
        max_arity: Option<usize>,
        /// Largest number of tree monomials handled in one arity.
        #[arg(long)]
        max_basis: Option<usize>,
        /// Read the presentation as ns or symmetric regardless of its `mode` line.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// The quadratic Koszul dual, as DSL text.
    Dual {
        #[command(flatten)]
        src: SourceArgs,
    },
    /// Checks f_Q(-f_P(-t)) = t.
    KoszulCheck {
        p: String,
        /// Defaults to the registry dual of `p`, else the computed dual.
        q: Option<String>,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Replays the registry checks.
    Verify {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
        #[arg(long, default_value_t = 7)]
        ns_max: usize,
        #[arg(long, default_value_t = 5)]
        sym_max: usize,
        #[arg(long, default_value_t = 12)]
        series_order: usize,
        /// Comma-separated subset of dims,series,dual,model,tableau.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
    },
    /// Relation suites on free-algebra models.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// d∘d = 0 on the Hochschild, Chevalley–Eilenberg and Leibniz complexes.
    Complex {
        #[command(subcommand)]
        action: ComplexAction,
    },
    /// Registry entries.
    List {
        /// Only entries with this property.
        #[arg(long)]
        property: Option<String>,
    },
    /// One registry entry in full.
    Show { name: String },
    /// Coefficients of a closed-form series, a catalog name or a registry entry's series.
    Series {
        expr: String,
        #[arg(long, default_value_t = 10)]
        order: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Ordinary)]
        kind: KindArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum ModelsAction {
    /// Checks a presentation's relations on a model.
    Check {
        id: String,
        #[arg(long, default_value_t = 4)]
        size: usize,
        /// Registry entry or file to check; defaults to the model's own operad.
        #[arg(long)]
        operad: Option<String>,
    },
    /// Known model ids.
    List,
}

#[derive(Subcommand, Debug)]
pub enum ComplexAction {
    Check {
        kind: String,
        #[arg(long, default_value_t = 4)]
        size: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let out = commands::run(&cli);
    if cli.timings {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match out {
        Ok(doc) => {
            match cli.format {
                Format::Text => print!("{}", doc.text),
                Format::Json => {
                    let v = serde_json::json!({ "command": commands::echo(), "result": doc.json });
                    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
                }
            }
            ExitCode::from(doc.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
