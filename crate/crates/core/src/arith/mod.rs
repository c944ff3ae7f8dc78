//! Exact arithmetic: rationals, sparse polynomials in the Chern-root
//! variables `y_1..y_r` and `z`, products of linear forms, reduced rational
//! expressions, nilpotent expansions, and binary forms.

mod binary;
mod factored;
mod linear_form;
mod monomial;
mod nilexp;
mod poly;
mod ratexpr;
mod scalar;
pub mod univariate;

pub use binary::{binary_gcd, multiplicity_decomposition, BinaryForm};
pub use factored::FactoredRational;
pub use linear_form::LinearForm;
pub use monomial::Monomial;
pub use nilexp::{NilExpansion, NilpotentExpand};
pub use poly::SparsePoly;
pub use ratexpr::RatExpr;
pub use scalar::{parse_scalar, Scalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("linear form has all coefficients zero")]
    ZeroForm,
    #[error("linear form is not in normalized (primitive, positive-leading) form")]
    NotNormalized,
    #[error("polynomial is not divisible by the linear form")]
    NotDivisible,
    #[error("every binary form is zero")]
    AllZero,
    #[error("substitution matrix is singular")]
    SingularMatrix,
    #[error("a denominator form has no z term and cannot be expanded")]
    NonExpandable,
    #[error("a denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("coefficient does not fit the scalar backend")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}
