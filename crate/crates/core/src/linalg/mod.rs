//! Exact linear algebra over the rationals and Gaussian rationals.

mod elim;
mod gaussian;
mod herm;
mod matrix;
mod rational;

pub use elim::{integer_rank, kernel_line, rational_rank, solve_exact, SolveOutcome};
pub use gaussian::{GaussianInt, GaussianRational};
pub use herm::{
    char_poly, herm_rank, herm_rank_charpoly, herm_rank_elimination, psd_check, psd_check_ldl,
    HermMatrix,
};
pub use matrix::Matrix;
pub use rational::{
    common_denominator, format_rational, parse_rational, primitive_integer_row, rat, ratio, Rational,
};
