use alloc::string::String;

use crate::space::Point;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// A mapping or scalar function produced a non-finite value.
    #[error("non-finite evaluation of {what} at {input:?}")]
    Evaluation { what: String, input: alloc::vec::Vec<f64> },
    /// `S(S^-1(w))` did not reproduce `w` during Jungck-Schaefer iteration.
    #[error("inverse of S inconsistent at iteration {iteration}: ||S(S^-1(w)) - w|| = {mismatch:e}")]
    Inverse { iteration: usize, mismatch: f64, w: Point },
    #[error("no root bracketed on [{lo}, {hi}]")]
    NoRootBracketed { lo: f64, hi: f64 },
}
