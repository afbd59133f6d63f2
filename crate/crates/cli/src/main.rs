use std::io::Write;
use std::process::ExitCode;

use bhmirror::catalog::parse_catalog;
use bhmirror::symmetry::group_cap_from_env;
use bhmirror::Error;
use bhmirror_cli::{
    cmd_analyze, cmd_k3, cmd_mirror, cmd_table, cmd_verify, default_catalog, error_output, resolve_case, Format,
    Options, Output, VerifyTarget, EXIT_INPUT,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bhmirror", version, about = "Berglund-Hubsch mirror symmetry for W = x0^k + f")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Acting group: J | SL | full | trivial | gen:[..];gen:[..]
    #[arg(long, global = true)]
    group: Option<String>,
    /// Invariance group K inside Aut_f: min | trivial | SL | J | gen:[..]
    #[arg(long = "K", global = true)]
    k: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    format: FormatArg,
    /// Split cells by s-weight.
    #[arg(long, global = true)]
    weights: bool,
    /// Split cells by bidegree.
    #[arg(long, global = true)]
    diamonds: bool,
    /// Catalog file, one `name | polynomial | K` per line.
    #[arg(long, global = true)]
    catalog: Option<String>,
    /// Run on one named catalog case.
    #[arg(long, global = true)]
    case: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Weights, degree, atoms and symmetry groups of a polynomial.
    Analyze { polynomial: String },
    /// Transpose polynomial and dual groups.
    Mirror { polynomial: Option<String> },
    /// Sector grid of the state space, rows d_s and columns d_j.
    Table { polynomial: Option<String> },
    /// Mirror theorems and cross-checks over a catalog, a case, or one polynomial.
    Verify { polynomial: Option<String> },
    /// K3 table fit, fixed loci and lattice invariants.
    K3 { polynomial: Option<String> },
}

fn run(cli: &Cli, opts: &Options) -> Result<Output, Error> {
    let catalog = match &cli.catalog {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Syntax { pos: 0, msg: format!("cannot read catalog {path}: {e}") })?;
            parse_catalog(&text)?
        }
        None => default_catalog(),
    };
    let k = cli.k.as_deref();
    let case = cli.case.as_deref();
    match &cli.command {
        Command::Analyze { polynomial } => cmd_analyze(polynomial, cli.group.as_deref(), opts),
        Command::Mirror { polynomial } => {
            let c = resolve_case(polynomial.as_deref(), k, case, &catalog)?;
            cmd_mirror(&c.polynomial, cli.group.as_deref().unwrap_or("J"), &c.group, opts)
        }
        Command::Table { polynomial } => cmd_table(&resolve_case(polynomial.as_deref(), k, case, &catalog)?, opts),
        Command::K3 { polynomial } => cmd_k3(&resolve_case(polynomial.as_deref(), k, case, &catalog)?, opts),
        Command::Verify { polynomial } => {
            let target = match (polynomial, case) {
                (None, None) => VerifyTarget::Cases(catalog.clone()),
                _ => {
                    let c = resolve_case(polynomial.as_deref(), k, case, &catalog)?;
                    let splits = bhmirror::InvertiblePolynomial::parse(&c.polynomial)?.split_cyclic().is_ok();
                    if splits {
                        VerifyTarget::Cases(vec![c])
                    } else {
                        VerifyTarget::Polynomial(c.polynomial)
                    }
                }
            };
            let krawitz = polynomial.is_none() && case.is_none() && cli.catalog.is_none();
            cmd_verify(&target, krawitz, opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let opts = Options { format, weights: cli.weights, diamonds: cli.diamonds, cap: group_cap_from_env() };
    let out = run(&cli, &opts).unwrap_or_else(|e| error_output(&e, format));
    if out.code == EXIT_INPUT && format != Format::Json {
        let _ = std::io::stderr().write_all(out.text.as_bytes());
    } else {
        let _ = std::io::stdout().write_all(out.text.as_bytes());
    }
    ExitCode::from(out.code as u8)
}
