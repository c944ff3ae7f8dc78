//! Exact computations for quasimaps to GIT quotients `V//G`.
//!
//! The crate decides GIT (semi)stability of coordinate supports, checks
//! ε-stability of explicit polynomial quasimaps from `P^1`, enumerates the
//! C*-fixed components of the quasimap graph space, and computes quasimap
//! I-function coefficients through the abelian/nonabelian correspondence.
//!
//! All algebra is exact. The arithmetic types are generic over a rational
//! [`Scalar`]; the aliases below fix the production backend, `BigRational`.

pub mod arith;
pub mod fixed_locus;
pub mod git;
pub mod ifunction;
pub mod lattice;
pub mod quasimap;

pub use arith::{ArithError, LinearForm, Monomial, Scalar};

/// Arbitrary-precision rational.
pub type Rat = num_rational::BigRational;
pub type Poly = arith::SparsePoly<Rat>;
pub type Factored = arith::FactoredRational<Rat>;
pub type Expr = arith::RatExpr<Rat>;
pub type Expansion = arith::NilExpansion<Rat>;
pub type Form = arith::BinaryForm<Rat>;
pub type Quasimap = quasimap::PolyQuasimap<Rat>;
pub type Coefficient = ifunction::IFunCoefficient<Rat>;
pub type Series = ifunction::IFunctionSeries<Rat>;
