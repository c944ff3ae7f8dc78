use std::collections::BTreeMap;
use std::fmt;

use super::{ArithError, LinearForm, Scalar, SparsePoly};

/// `scalar · ∏ form^exponent` with primitive linear forms.
///
/// Canonical by construction: forms are normalized, zero exponents are
/// dropped, and a zero scalar carries no factors. Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredRational<S> {
    nvars: usize,
    scalar: S,
    factors: BTreeMap<LinearForm, i32>,
}

impl<S: Scalar> FactoredRational<S> {
    pub fn constant(nvars: usize, scalar: S) -> Self {
        FactoredRational { nvars, scalar, factors: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    /// `(Σ raw_i v_i)^exponent` for integer coefficients; the content and
    /// sign of `raw` move into the scalar.
    pub fn power_of_ints(raw: &[i64], exponent: i32) -> Result<Self, ArithError> {
        let (form, scale) = LinearForm::from_ints(raw)?;
        let scalar = pow_scalar(&S::from_int(scale), exponent);
        Ok(Self::from_parts(raw.len(), scalar, [(form, exponent)]))
    }

    pub fn power_of_form(form: LinearForm, exponent: i32) -> Self {
        Self::from_parts(form.nvars(), S::one(), [(form, exponent)])
    }

    pub fn from_parts<I: IntoIterator<Item = (LinearForm, i32)>>(nvars: usize, scalar: S, factors: I) -> Self {
        let mut out = Self::constant(nvars, scalar);
        for (f, e) in factors {
            assert_eq!(f.nvars(), nvars, "form arity mismatch");
            out.bump(f, e);
        }
        out.fix_zero();
        out
    }

    fn bump(&mut self, form: LinearForm, e: i32) {
        if e == 0 {
            return;
        }
        let slot = self.factors.entry(form.clone()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&form);
        }
    }

    fn fix_zero(&mut self) {
        if self.scalar.is_zero() {
            self.factors.clear();
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn scalar(&self) -> &S {
        &self.scalar
    }

    /// Factors in canonical (coefficient-vector) order.
    pub fn factors(&self) -> impl Iterator<Item = (&LinearForm, i32)> {
        self.factors.iter().map(|(f, &e)| (f, e))
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.scalar.is_one() && self.factors.is_empty()
    }

    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        out.scalar = out.scalar * other.scalar.clone();
        for (f, &e) in &other.factors {
            out.bump(f.clone(), e);
        }
        out.fix_zero();
        out
    }

    pub fn inverse(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(FactoredRational {
            nvars: self.nvars,
            scalar: S::one() / self.scalar.clone(),
            factors: self.factors.iter().map(|(f, &e)| (f.clone(), -e)).collect(),
        })
    }

    pub fn divide(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self.multiply(&other.inverse()?))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = self.clone();
        out.scalar = out.scalar * c.clone();
        out.fix_zero();
        out
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Self>>(nvars: usize, items: I) -> Self {
        items.into_iter().fold(Self::one(nvars), |acc, x| acc.multiply(x))
    }

    /// Numerator as a polynomial: scalar times the positive-exponent forms.
    pub fn numerator_poly(&self) -> SparsePoly<S> {
        let mut p = SparsePoly::constant(self.nvars, self.scalar.clone());
        for (f, &e) in &self.factors {
            if e > 0 {
                p = &p * &SparsePoly::from_linear_form(f).pow(e as u32);
            }
        }
        p
    }

    /// Denominator forms with positive multiplicities.
    pub fn denominator(&self) -> BTreeMap<LinearForm, u32> {
        self.factors.iter().filter(|(_, &e)| e < 0).map(|(f, &e)| (f.clone(), e.unsigned_abs())).collect()
    }

    pub fn evaluate(&self, point: &[S]) -> Result<S, ArithError> {
        let mut acc = self.scalar.clone();
        if acc.is_zero() {
            return Ok(acc);
        }
        let mut vanishes = false;
        for (f, &e) in &self.factors {
            let v = f.evaluate(point);
            if v.is_zero() {
                if e < 0 {
                    return Err(ArithError::PoleAtPoint);
                }
                vanishes = true;
            } else if !vanishes {
                acc = acc * pow_scalar(&v, e);
            }
        }
        Ok(if vanishes { S::zero() } else { acc })
    }

    /// Applies `y_i ↦ Σ_j m[i][j] y_j` to every factor.
    pub fn substitute_linear(&self, m: &[Vec<i64>]) -> Result<Self, ArithError> {
        if crate::lattice::int_rank(m) < self.nvars - 1 {
            return Err(ArithError::SingularMatrix);
        }
        let mut out = Self::constant(self.nvars, self.scalar.clone());
        for (f, &e) in &self.factors {
            let (g, scale) = f.substitute(m)?;
            out.scalar = out.scalar * pow_scalar(&S::from_int(scale), e);
            out.bump(g, e);
        }
        Ok(out)
    }

    /// Canonical text: `p/q` scalar followed by ` * [coeffs]^e` per factor.
    pub fn canonical(&self) -> String {
        let mut s = self.scalar.canonical();
        for (f, e) in &self.factors {
            s.push_str(&format!(" * {f}^{e}"));
        }
        s
    }
}

impl<S: Scalar> fmt::Display for FactoredRational<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

pub(crate) fn pow_scalar<S: Scalar>(base: &S, e: i32) -> S {
    let mut acc = S::one();
    for _ in 0..e.unsigned_abs() {
        acc = acc * base.clone();
    }
    if e < 0 {
        S::one() / acc
    } else {
        acc
    }
}
