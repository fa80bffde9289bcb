//! Exact Laurent polynomials and rational functions in `q1, q2, t1..tr` and
//! auxiliary variables.

mod equality;
pub mod factor;
pub mod monomial;
mod parse;
pub mod poly;
pub mod ratfn;
mod serial;

pub use equality::{eq, EqMode};
pub use factor::{normalize, Product};
pub use monomial::{Monomial, Symbol, MAX_AUX, MAX_RANK};
pub use parse::{parse_poly, parse_ratfn};
pub use poly::{frac, int, Coeff, LaurentPoly};
pub use ratfn::{gcd_mode, set_gcd_mode, GcdMode, RationalFn};
pub use serial::{poly_from_json, poly_to_json, ratfn_from_json, ratfn_to_json};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("DenominatorVanishes")]
    DenominatorVanishes,
    #[error("HalfExponent: only q1 may carry a half-integral exponent")]
    HalfExponent,
    #[error("Parse: {0}")]
    Parse(String),
}

impl ScalarError {
    pub fn name(&self) -> &'static str {
        match self {
            ScalarError::DivisionByZero => "DivisionByZero",
            ScalarError::DenominatorVanishes => "DenominatorVanishes",
            ScalarError::HalfExponent => "HalfExponent",
            ScalarError::Parse(_) => "Parse",
        }
    }
}

/// `q = q1 q2`, expanded: it is never a symbol of its own.
pub fn q() -> Monomial {
    Monomial::from_pairs(&[(Symbol::Q1, 1), (Symbol::Q2, 1)])
}

pub fn q1() -> Monomial {
    Monomial::var(Symbol::Q1)
}

pub fn q2() -> Monomial {
    Monomial::var(Symbol::Q2)
}

pub fn t(i: usize) -> Monomial {
    Monomial::var(Symbol::t(i))
}

pub fn z(j: usize) -> Monomial {
    Monomial::var(Symbol::aux(j))
}
