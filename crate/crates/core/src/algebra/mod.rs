//! Linear algebra over graphs: exact ranks, predicted and measured spectra,
//! and Hadamard matrices.

mod hadamard;
mod rank;
mod spectrum;

pub use hadamard::{hadamard_to_srg, integer_sqrt, srg_to_hadamard, HadamardMatrix, HadamardSign};
pub use rank::{
    bareiss_rank, exact_multiplicity, gf2_rank, p_rank, polynomial_nullity, rank_mod_p, rational_rank, IntMatrix,
};
pub use spectrum::{
    certify_spectrum, ddg_spectrum, measured_multiplicities, srg_spectrum, Eigenvalue, Spectrum, SpectrumEntry,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("wrong parameters: {0}")]
    WrongParameters(String),
    #[error("matrix is not graphical (needs symmetric with constant diagonal)")]
    NotGraphical,
    #[error("matrix does not have constant row sums")]
    NotRegularH,
    #[error("rows {0} and {1} are not orthogonal")]
    NotHadamard(usize, usize),
    #[error("infeasible parameters {0}")]
    Infeasible(String),
    #[error("spectrum mismatch: {0}")]
    SpectrumMismatch(String),
}
