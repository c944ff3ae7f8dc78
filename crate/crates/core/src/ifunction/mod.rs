//! Quasimap I-function coefficients: the toric formula, the root twist,
//! the nonabelian sum over lifted degrees, and the Euler-class identities
//! that pin down the moving-part conventions.

mod emit;

pub use emit::{parse_json, to_json, to_latex, to_text, SeriesJson};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, FactoredRational, NilExpansion, NilpotentExpand, RatExpr, Scalar};
use crate::fixed_locus::{enumerate_effective, DegreeVec, FixedLocusError, GroupDegree};
use crate::git::{levi_roots, Preset, Target};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IFunctionError {
    #[error(transparent)]
    Enumeration(#[from] FixedLocusError),
    #[error("pole {forms:?} survived summation for degree {beta:?}")]
    PoleSurvived { beta: GroupDegree, forms: Vec<String> },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("cohomology reduction needs a projective-space target")]
    NotProjective,
    #[error("degree bound must be at least 1")]
    BadBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cohomology {
    H0,
    H1,
}

/// `ξ + k z` as integer coefficients over `y_1..y_r, z`.
fn shifted(xi: &[i64], k: i64) -> Vec<i64> {
    let mut raw = xi.to_vec();
    raw.push(k);
    raw
}

fn pairing(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `∏_{k in ks} (ξ + kz)^exponent`.
fn product_over<S: Scalar>(xi: &[i64], ks: impl IntoIterator<Item = i64>, exponent: i32) -> FactoredRational<S> {
    ks.into_iter().fold(FactoredRational::one(xi.len() + 1), |acc, k| {
        let f = FactoredRational::power_of_ints(&shifted(xi, k), exponent).expect("ξ + kz is nonzero: ξ ≠ 0 or k ≠ 0");
        acc.multiply(&f)
    })
}

/// Contribution of one weight `ξ` with `m = β̃(ξ)` to the toric coefficient.
pub fn toric_factor<S: Scalar>(xi: &[i64], m: i64) -> FactoredRational<S> {
    if m >= 0 {
        product_over(xi, 1..=m, -1)
    } else {
        product_over(xi, m + 1..=0, 1)
    }
}

/// `∏_j ∏_{k ≤ 0} (ξ_j + kz) / ∏_{k ≤ β̃(ξ_j)} (ξ_j + kz)`.
pub fn toric_coefficient<S: Scalar>(t: &Target, beta_t: &[i64]) -> FactoredRational<S> {
    t.weights()
        .iter()
        .fold(FactoredRational::one(t.rank() + 1), |acc, xi| acc.multiply(&toric_factor(xi, pairing(beta_t, xi))))
}

/// `∏_{k ≤ m} (α + kz) / ∏_{k ≤ 0} (α + kz)`.
pub fn root_factor_literal<S: Scalar>(alpha: &[i64], m: i64) -> FactoredRational<S> {
    if m >= 0 {
        product_over(alpha, 1..=m, 1)
    } else {
        product_over(alpha, m + 1..=0, -1)
    }
}

/// `(−1)^m (α + mz) / α`: the literal factors of `α` and `−α` combined.
pub fn root_pair_factor<S: Scalar>(alpha: &[i64], m: i64) -> FactoredRational<S> {
    let nvars = alpha.len() + 1;
    if m == 0 {
        return FactoredRational::one(nvars);
    }
    let sign = if m % 2 == 0 { S::one() } else { -S::one() };
    let num = FactoredRational::power_of_ints(&shifted(alpha, m), 1).expect("nonzero root");
    let den = FactoredRational::power_of_ints(&shifted(alpha, 0), -1).expect("nonzero root");
    num.multiply(&den).scale(&sign)
}

/// `∏` over one root of each `±α` pair of the root pair factor.
pub fn twist_factor<S: Scalar>(t: &Target, beta_t: &[i64]) -> FactoredRational<S> {
    t.root_pairs().iter().fold(FactoredRational::one(t.rank() + 1), |acc, alpha| {
        acc.multiply(&root_pair_factor(alpha, pairing(beta_t, alpha)))
    })
}

/// Moving part of the equivariant Euler class of `H^i(P^1, O(m))` twisted
/// by a line with Chern root `ξ`; the `k = 0` weight is fixed.
pub fn euler_pushforward_factor<S: Scalar>(xi: &[i64], m: i64, which: Cohomology) -> FactoredRational<S> {
    match which {
        Cohomology::H0 if m >= 0 => product_over(xi, 1..=m, 1),
        Cohomology::H1 if m <= -2 => product_over(xi, m + 1..=-1, 1),
        _ => FactoredRational::one(xi.len() + 1),
    }
}

/// Checks both localization identities at `β̃`: the weight side
/// reproduces the toric coefficient and the root side reproduces the twist.
pub fn verify_proof_identities<S: Scalar>(t: &Target, beta_t: &[i64]) -> bool {
    let nvars = t.rank() + 1;
    let one = FactoredRational::<S>::one(nvars);
    let mut b_side = one.clone();
    for xi in t.weights() {
        let m = pairing(beta_t, xi);
        if m < 0 {
            b_side = b_side.multiply(&FactoredRational::power_of_ints(&shifted(xi, 0), 1).expect("ξ ≠ 0"));
        }
        let h0 = euler_pushforward_factor::<S>(xi, m, Cohomology::H0);
        let h1 = euler_pushforward_factor::<S>(xi, m, Cohomology::H1);
        b_side = b_side.multiply(&h1).divide(&h0).expect("nonzero");
    }
    let mut a_side = one;
    for alpha in t.roots() {
        let m = pairing(beta_t, alpha);
        if m < 0 {
            let c1 = FactoredRational::power_of_ints(&shifted(alpha, 0), 1).expect("α ≠ 0");
            a_side = a_side.divide(&c1).expect("nonzero");
        }
        let h0 = euler_pushforward_factor::<S>(alpha, m, Cohomology::H0);
        let h1 = euler_pushforward_factor::<S>(alpha, m, Cohomology::H1);
        a_side = a_side.multiply(&h0).divide(&h1).expect("nonzero");
    }
    // Negatively paired roots are the negatives of the positive part.
    let split = levi_roots(t, beta_t);
    let negatives = t.roots().iter().filter(|a| pairing(beta_t, a) < 0).count();
    b_side.canonical() == toric_coefficient::<S>(t, beta_t).canonical()
        && a_side.canonical() == twist_factor::<S>(t, beta_t).canonical()
        && negatives == split.positive_part.len()
}

/// A coefficient `I_β`: the per-`β̃` terms and their reduced sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IFunCoefficient<S> {
    pub beta: GroupDegree,
    pub terms: Vec<(DegreeVec, FactoredRational<S>)>,
    pub expr: RatExpr<S>,
}

impl<S: Scalar> IFunCoefficient<S> {
    pub fn evaluate_terms(&self, point: &[S]) -> Result<S, ArithError> {
        self.terms.iter().try_fold(S::zero(), |acc, (_, f)| Ok(acc + f.evaluate(point)?))
    }
}

/// The term of `I_β` indexed by one lifted degree.
pub fn lifted_term<S: Scalar>(t: &Target, beta_t: &[i64]) -> FactoredRational<S> {
    twist_factor::<S>(t, beta_t).multiply(&toric_coefficient(t, beta_t))
}

pub fn nonabelian_coefficient<S: Scalar>(
    t: &Target,
    beta: &[i64],
    bound: Option<i64>,
) -> Result<IFunCoefficient<S>, IFunctionError> {
    let lifts = enumerate_effective(t, beta, bound)?;
    let terms: Vec<(DegreeVec, FactoredRational<S>)> =
        lifts.into_iter().map(|b| (b.clone(), lifted_term(t, &b))).collect();
    let expr = if terms.is_empty() {
        RatExpr::new(crate::arith::SparsePoly::zero(t.rank() + 1), BTreeMap::new())
    } else {
        let factored: Vec<FactoredRational<S>> = terms.iter().map(|(_, f)| f.clone()).collect();
        RatExpr::clear_and_sum(&factored)
    };
    let poles = expr.pure_y_poles();
    if !poles.is_empty() {
        return Err(IFunctionError::PoleSurvived {
            beta: beta.to_vec(),
            forms: poles.iter().map(|f| f.to_string()).collect(),
        });
    }
    Ok(IFunCoefficient { beta: beta.to_vec(), terms, expr })
}

/// `1 + Σ_{β ≠ 0} q^β I_β(z)`, truncated to `Σ |β_i| ≤ degree_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IFunctionSeries<S> {
    pub target: String,
    pub variables: Vec<String>,
    pub degree_bound: u32,
    pub coefficients: BTreeMap<GroupDegree, IFunCoefficient<S>>,
}

/// All `β ∈ Z^m` with `0 < Σ|β_i| ≤ bound`.
fn group_degrees(m: usize, bound: i64) -> Vec<GroupDegree> {
    fn rec(m: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<GroupDegree>) {
        if cur.len() == m {
            if cur.iter().any(|&v| v != 0) {
                out.push(cur.clone());
            }
            return;
        }
        for v in -left..=left {
            cur.push(v);
            rec(m, left - v.abs(), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, bound, &mut Vec::new(), &mut out);
    out
}

pub fn assemble_series<S: Scalar>(
    t: &Target,
    degree_bound: u32,
    bound: Option<i64>,
) -> Result<IFunctionSeries<S>, IFunctionError> {
    if degree_bound == 0 {
        return Err(IFunctionError::BadBound);
    }
    let mut coefficients = BTreeMap::new();
    for beta in group_degrees(t.group_degree_rank(), i64::from(degree_bound)) {
        let c = nonabelian_coefficient::<S>(t, &beta, bound)?;
        if !c.terms.is_empty() {
            coefficients.insert(beta, c);
        }
    }
    Ok(IFunctionSeries { target: t.name().to_string(), variables: t.variable_names(), degree_bound, coefficients })
}

/// Every Weyl generator fixes the reduced expression.
pub fn check_weyl_invariance<S: Scalar>(t: &Target, expr: &RatExpr<S>) -> bool {
    let canonical = expr.canonical();
    t.weyl_gens().iter().all(|m| expr.substitute_linear(m).is_ok_and(|e| e.canonical() == canonical))
}

/// Expansion of a projective-space coefficient modulo `H^{n+1}`.
pub fn reduce_in_cohomology<S: Scalar>(t: &Target, c: &IFunCoefficient<S>) -> Result<NilExpansion<S>, IFunctionError> {
    let Preset::Projective { n } = *t.preset() else {
        return Err(IFunctionError::NotProjective);
    };
    Ok(c.expr.nilpotent_expand(&[n as u32 + 1])?)
}
