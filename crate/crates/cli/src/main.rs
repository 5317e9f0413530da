mod commands;
mod plot;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lipfree_core::NormKind;

/// Lipschitz-free spaces over finite-dimensional normed spaces: free norms,
/// pairings, linearity tests, projections and quotient distances.
///
/// Reports are JSON on standard output. Exit status is 0 on success, 1 when
/// a check fails or a linearity witness is found, and 2 on usage or input
/// errors.
#[derive(Debug, Parser)]
#[command(name = "lipfree", version)]
pub struct Cli {
    /// Arithmetic mode. Functions using sin/cos always run in float mode.
    #[arg(long, global = true, env = "LIPFREE_MODE", value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,

    /// Also write whitespace-separated column files into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub plot_data: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

/// Domain and codomain of a function given on the command line.
#[derive(Debug, Clone, clap::Args)]
pub struct FnSpaces {
    /// Dimension of the domain.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,

    /// Norm on the domain (l1, l2, linf).
    #[arg(long, default_value = "l2", value_parser = parse_norm)]
    pub norm: NormKind,

    /// Norm on the codomain; its dimension is the number of `;`-separated components.
    #[arg(long, default_value = "linf", value_parser = parse_norm)]
    pub codomain_norm: NormKind,
}

fn parse_norm(s: &str) -> Result<NormKind, String> {
    s.parse()
        .map_err(|_| format!("unknown norm {s:?}; use l1, l2 or linf"))
}

fn parse_box(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err("LO must be below HI".into())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free norm of a molecule with its potential and flow certificates.
    Norm { file: PathBuf },
    /// Barycenter Σ aᵢ xᵢ of a molecule.
    Beta { file: PathBuf },
    /// Pairing Σ aᵢ f(xᵢ); the domain is the molecule's space.
    Pair {
        function: String,
        file: PathBuf,
        #[arg(long, default_value = "linf", value_parser = parse_norm)]
        codomain_norm: NormKind,
    },
    /// Pairs f with random generators of the kernel of β.
    Lintest {
        function: String,
        #[command(flatten)]
        spaces: FnSpaces,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Range for the random coordinates and ratios.
        #[arg(long = "box", default_value = "-10,10", value_parser = parse_box, allow_hyphen_values = true)]
        bounds: (f64, f64),
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Projects f onto linear maps by window averaging (always float).
    Project {
        function: String,
        #[command(flatten)]
        spaces: FnSpaces,
        /// Box for the Lipschitz sample used by the norm bounds.
        #[arg(long = "box", default_value = "-5,5", value_parser = parse_box, allow_hyphen_values = true)]
        bounds: (f64, f64),
    },
    /// Distance from f to the linear maps on a sample, both as a minimum
    /// over matrices and as a supremum over the kernel of β.
    Quotient {
        function: String,
        #[command(flatten)]
        spaces: FnSpaces,
        /// Points separated by `;`, coordinates by `,`; the origin is added.
        #[arg(long, allow_hyphen_values = true)]
        sample: String,
    },
    /// The step function image of a molecule on the line.
    Phi { file: PathBuf },
    /// Runs the seeded verification suites.
    Verify {
        #[arg(long, default_value = "all", value_parser = ["all", "s2", "s3", "s4", "s5", "s6"])]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Rational arithmetic (also implied by the exact mode).
        #[arg(long)]
        exact: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.report).expect("reports serialize");
            // A reader closing the pipe early is not a failure.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
