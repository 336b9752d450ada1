//! `bbz`: batch front-end for root multiplicities, denominator checks,
//! characters, Monster multiplicities and the quiver and flag oracles.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "bbz",
    version,
    about = "Exact root multiplicities for Borcherds-Bozec algebras",
    after_help = "Exit codes: 0 ok, 1 check failed, 2 bad input, 3 invariant breach, 4 cap exceeded.\n\
                  TSV output starts with a header row naming the columns."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "tsv")]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Monster,
}

/// Where the datum comes from and which box and `J` to use.
#[derive(Args, Debug, Clone)]
pub struct DatumArgs {
    /// Datum JSON file (`-` for stdin).
    #[arg(long, required_unless_present = "preset")]
    pub input: Option<PathBuf>,
    /// Built-in datum; `monster` uses the rule-based matrix with
    /// j-coefficient charge and `J = {-1}`. Its window is read off the box.
    #[arg(long, value_enum, conflicts_with = "input")]
    pub preset: Option<Preset>,
    /// Degree box: positional `4,4` or labelled `1:4,2:4`.
    #[arg(long = "box", allow_hyphen_values = true)]
    pub bx: String,
    /// Kac-Moody slice `J` as comma-separated vertices; `""` is the empty
    /// set. Defaults to every real vertex.
    #[arg(long = "J", allow_hyphen_values = true)]
    pub j: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Root multiplicities `dim g_alpha` for every alpha in the box.
    /// TSV columns: alpha, mult.
    Mult(DatumArgs),
    /// Twisted and untwisted denominator identities in the box.
    /// TSV columns: identity, verdict, first discrepancy.
    DenomCheck {
        #[command(flatten)]
        datum: DatumArgs,
        /// Adds one to the multiplicity of this root before checking.
        #[arg(long, hide = true, allow_hyphen_values = true)]
        corrupt: Option<String>,
    },
    /// Character of the irreducible module with the given pairings
    /// `<h_i, lambda>`. TSV columns: depth (lambda - mu), coeff.
    Character {
        #[command(flatten)]
        datum: DatumArgs,
        /// Pairings `<h_i, lambda>`: positional `1,0` or labelled `1:1`.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        lambda: String,
    },
    /// Monster multiplicities. TSV columns: m, n, dim (or alpha, dim).
    Monster {
        #[arg(value_enum)]
        algebra: MonsterKind,
        /// First grade.
        #[arg(long)]
        m: Option<u32>,
        /// Second grade.
        #[arg(long)]
        n: Option<u32>,
        /// Root over {-1, 1, 2, ...} as `-1:2,1:4,2:2` (root mode only).
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Coefficients c(n) of j(q) - 744. TSV columns: n, c.
    Jcoeffs {
        /// Largest n.
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Counting polynomial of absolutely indecomposable 1-nilpotent
    /// representations. TSV columns: q, count; then the fitted polynomial.
    QuiverKac {
        /// Quiver JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Dimension vector, positional or labelled.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Sample field orders.
        #[arg(long, default_value = "2,3,4,5")]
        fields: String,
        /// Enumeration cap.
        #[arg(long, default_value_t = 1 << 24)]
        cap: u64,
    },
    /// Compares root multiplicities of the quiver's algebra with the
    /// constant terms of the counting polynomials.
    /// TSV columns: alpha, mult, kac_constant, polynomial, agree.
    QuiverRoots {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: String,
        #[arg(long, default_value = "2,3,4,5")]
        fields: String,
        #[arg(long, default_value_t = 1 << 24)]
        cap: u64,
    },
    /// Flag counts and the pairing <w, M>. With `--module-n`, primed
    /// letters act on the second module. TSV columns: q, count; then
    /// polynomial and chi.
    SchofieldPair {
        /// Quiver JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Module JSON file.
        #[arg(long)]
        module: PathBuf,
        /// Second module for words with primed letters.
        #[arg(long)]
        module_n: Option<PathBuf>,
        /// Word such as `S(1,2)S(2,1)`.
        #[arg(long)]
        word: String,
        /// Sample field orders; extended automatically when the degree
        /// bound needs more.
        #[arg(long, default_value = "2,3,4,5")]
        fields: String,
        #[arg(long, default_value_t = 1 << 24)]
        cap: u64,
    },
    /// Pairs a Serre-type element against every 1-nilpotent module of its
    /// degree over each prime field. TSV columns: p, module, pairing.
    SerreCheck {
        #[arg(long)]
        input: PathBuf,
        /// `ad:i,j[,l]` for (ad S_i)^(1 - l a_ij)(S_(j,l)), or
        /// `commute:i,k,j,l` for [S_(i,k), S_(j,l)].
        #[arg(long, allow_hyphen_values = true)]
        relation: String,
        /// Prime fields.
        #[arg(long, default_value = "2,3")]
        fields: String,
        #[arg(long, default_value_t = 1 << 24)]
        cap: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MonsterKind {
    Lie,
    Bozec,
    Root,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &outcome.text),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
