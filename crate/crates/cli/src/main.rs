//! `ddg`: build divisible design graphs and strongly regular graphs from
//! affine designs and symmetric Latin squares, and certify them.
//!
//! Exit codes: 0 success, 2 bad input or spec, 3 a mathematical check failed.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ddg_core::construct::ConstructError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn from_construct(e: ConstructError) -> Self {
        Self::Input(e.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            Self::Input(_) => 2,
            Self::Check(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "ddg", version, about = "Construct and certify divisible design graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph from a TOML spec or inline flags; writes graph6 and a JSON report.
    Construct(ConstructArgs),
    /// Exhaustively certify DDG or SRG parameters of a graph6 file.
    Verify(VerifyArgs),
    /// Predicted eigenvalues with multiplicities confirmed by exact kernel dimensions.
    Spectrum(GraphArg),
    /// Rank of the adjacency matrix over GF(p).
    Prank(PrankArgs),
    /// Group graph6 inputs into isomorphism classes.
    Classify(ClassifyArgs),
    /// Convert between Hadamard SRGs and graphical regular Hadamard matrices.
    Hadamard(HadamardArgs),
    /// Intersection array of a distance-regular graph or its complement.
    Distance(DistanceArgs),
    /// Closed-form parameters of a construction.
    Expected(ExpectedArgs),
    /// Latin square utilities.
    #[command(subcommand)]
    Latin(LatinCommand),
}

#[derive(Args)]
pub struct ConstructArgs {
    /// TOML spec file; replaces the inline construction flags.
    #[arg(long, conflicts_with_all = ["construction", "q", "d", "latin", "h", "mask", "bijections", "numbering"])]
    pub spec: Option<PathBuf>,
    #[arg(long, required_unless_present = "spec")]
    pub construction: Option<u8>,
    #[arg(long, required_unless_present = "spec")]
    pub q: Option<usize>,
    #[arg(long, required_unless_present = "spec")]
    pub d: Option<u32>,
    /// Latin square file, or the name of a shipped fixture.
    #[arg(long, required_unless_present = "spec")]
    pub latin: Option<String>,
    /// Row/column of the source square to delete (construction 2, 1-based).
    #[arg(long)]
    pub h: Option<usize>,
    /// Diagonal mask bits, e.g. 010 (construction 2).
    #[arg(long)]
    pub mask: Option<String>,
    /// Lines of `i j s_1 .. s_q`, all 1-based.
    #[arg(long)]
    pub bijections: Option<PathBuf>,
    /// Lines of `design c_1 .. c_m`, all 1-based.
    #[arg(long)]
    pub numbering: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Primes whose ranks go in the report; repeatable.
    #[arg(long = "prank")]
    pub primes: Vec<u64>,
    #[arg(long)]
    pub no_canonical: bool,
    #[arg(long)]
    pub no_spectrum: bool,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, conflicts_with = "srg")]
    pub ddg: bool,
    #[arg(long)]
    pub srg: bool,
    pub graph: PathBuf,
}

#[derive(Args)]
pub struct GraphArg {
    pub graph: PathBuf,
}

#[derive(Args)]
pub struct PrankArgs {
    #[arg(long = "p", required = true)]
    pub primes: Vec<u64>,
    pub graph: PathBuf,
}

#[derive(Args)]
pub struct ClassifyArgs {
    #[arg(required = true)]
    pub graphs: Vec<PathBuf>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("direction").required(true).args(["from_srg", "to_srg"])))]
pub struct HadamardArgs {
    #[arg(long)]
    pub from_srg: Option<PathBuf>,
    #[arg(long)]
    pub to_srg: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "minus")]
    pub sign: Sign,
    /// Matrix text (from an SRG) or graph6 (to an SRG).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Sign {
    Minus,
    Plus,
}

#[derive(Args)]
pub struct DistanceArgs {
    #[arg(long)]
    pub complement: bool,
    pub graph: PathBuf,
}

#[derive(Args)]
pub struct ExpectedArgs {
    #[arg(long)]
    pub construction: u8,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub d: u32,
}

#[derive(Subcommand)]
pub enum LatinCommand {
    /// Reduced symmetric Latin squares of a side, one per class.
    Enumerate {
        #[arg(long)]
        side: usize,
        #[arg(long, value_enum, default_value = "loop")]
        equivalence: EquivalenceArg,
        /// Write each square to DIR/square_<k>.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Latin, symmetric and reduced flags of a square file or fixture.
    Check { square: String },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum EquivalenceArg {
    /// Commutative loop isomorphism.
    Loop,
    /// One permutation on rows and columns, another on symbols.
    RowColumnSymbol,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => commands::construct(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Prank(a) => commands::prank(&a),
        Command::Classify(a) => commands::classify(&a),
        Command::Hadamard(a) => commands::hadamard(&a),
        Command::Distance(a) => commands::distance(&a),
        Command::Expected(a) => commands::expected(&a),
        Command::Latin(c) => commands::latin(&c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ddg: {e}");
            ExitCode::from(e.code())
        }
    }
}
