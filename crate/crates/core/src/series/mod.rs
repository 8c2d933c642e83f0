//! Exact truncated power series in `z` whose coefficients are polynomials in the
//! catalytic variables `u`, `v`, `y`, together with the solvers built on them.
//!
//! Every coefficient is an arbitrary-precision rational. Any division that the
//! combinatorics guarantees to be exact (slice quotients, divided differences,
//! closed-form denominators) is checked: a nonzero remainder is an error, never
//! silently dropped.

mod multiseries;
mod parse;
mod poly;
mod roots;
mod solve;

pub use multiseries::{exact_division_count, MultiSeries, SeriesJson, SliceForm, TermJson};
pub use poly::{Division, Exponents, Poly, Var, VarSet};
pub use roots::{real_roots, RealPolynomial, RealRoot};
pub use solve::{fixed_point_solve, newton_algebraic, Truncated};

use thiserror::Error;

/// Default truncation order: twelve published terms plus headroom.
pub const DEFAULT_ORDER: usize = 16;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("denominator is not a unit: constant term in z vanishes")]
    NonUnitDenominator,
    #[error("{op}: nonzero remainder at z^{z_degree}")]
    InexactDivision { op: &'static str, z_degree: usize },
    #[error("shift by z^{shift} requires valuation >= {shift}, found a nonzero z^{found} coefficient")]
    Valuation { shift: usize, found: usize },
    #[error("square root requires constant term 1")]
    ConstantTermNotOne,
    #[error("variable {0} is not a catalytic variable of this series")]
    UnknownVariable(Var),
    #[error("fixed-point iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("derivative of the algebraic equation is not a unit at the seed")]
    NonUnitDerivative,
    #[error("seed does not satisfy the algebraic equation at z^0")]
    BadSeed,
    #[error("catalytic degree bound violated at z^{z_degree}: {var}-degree {degree} > {bound}")]
    DegreeBound {
        z_degree: usize,
        var: Var,
        degree: u32,
        bound: usize,
    },
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("polynomial has no nonzero coefficient")]
    ZeroPolynomial,
}
