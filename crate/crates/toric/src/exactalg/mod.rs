//! Exact rational arithmetic, sparse multivariate polynomials, and exact
//! linear algebra over the rationals.

mod matrix;
mod poly;

pub use matrix::{QMatrix, RowInsertion, RowSpace};
pub use poly::{base_var, face_var, param_y, MPoly, Monomial, RatFun, VarId};

use num_bigint::BigInt;
use thiserror::Error;

/// Exact rational number: arbitrary-precision, always reduced, positive
/// denominator, zero stored as 0/1.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactAlgError {
    /// The divisor does not divide the dividend exactly.
    #[error("polynomial division left a nonzero remainder")]
    NotDivisible,
    /// Division by the zero polynomial.
    #[error("division by zero polynomial")]
    DivisionByZero,
    /// Matrix has no inverse.
    #[error("matrix is singular")]
    Singular,
    /// Operation requires a square matrix.
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Rational from an integer.
pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Rational p/q; panics if q = 0.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse a rational written as `p` or `p/q` in decimal, with optional sign.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| format!("invalid integer `{num}`"))?;
    let q: BigInt = match den {
        Some(d) => d.parse().map_err(|_| format!("invalid integer `{d}`"))?,
        None => BigInt::from(1),
    };
    if q == BigInt::from(0) {
        return Err("zero denominator".into());
    }
    Ok(Rat::new(p, q))
}

/// Render a rational as `p` or `p/q` (denominator omitted when 1).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
