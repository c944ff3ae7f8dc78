use std::collections::BTreeMap;
use std::fmt;

use super::{ArithError, FactoredRational, LinearForm, RatExpr, Scalar, SparsePoly};

/// Element of `Q[y]/(y_i^{b_i}) ⊗ Q[z, z^{-1}]`: a truncated expansion with
/// nilpotent `y` variables and Laurent coefficients in `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilExpansion<S> {
    bounds: Vec<u32>,
    terms: BTreeMap<Vec<u32>, BTreeMap<i64, S>>,
}

impl<S: Scalar> NilExpansion<S> {
    pub fn zero(bounds: &[u32]) -> Self {
        NilExpansion { bounds: bounds.to_vec(), terms: BTreeMap::new() }
    }

    pub fn one(bounds: &[u32]) -> Self {
        let mut e = Self::zero(bounds);
        e.add_term(vec![0; bounds.len()], 0, S::one());
        e
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `y^mono · z^zexp`.
    pub fn coeff(&self, mono: &[u32], zexp: i64) -> S {
        self.terms.get(mono).and_then(|row| row.get(&zexp)).cloned().unwrap_or_else(S::zero)
    }

    /// `(y-monomial, z-exponent, coefficient)` in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i64, &S)> {
        self.terms.iter().flat_map(|(m, row)| row.iter().map(move |(k, c)| (m.as_slice(), *k, c)))
    }

    fn add_term(&mut self, mono: Vec<u32>, zexp: i64, c: S) {
        if c.is_zero() || mono.iter().zip(&self.bounds).any(|(e, b)| e >= b) {
            return;
        }
        let row = self.terms.entry(mono.clone()).or_default();
        let sum = row.get(&zexp).cloned().unwrap_or_else(S::zero) + c;
        if sum.is_zero() {
            row.remove(&zexp);
            if row.is_empty() {
                self.terms.remove(&mono);
            }
        } else {
            row.insert(zexp, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, k, c) in other.terms() {
            out.add_term(m.to_vec(), k, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.bounds);
        for (ma, ka, ca) in self.terms() {
            for (mb, kb, cb) in other.terms() {
                let m: Vec<u32> = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ka + kb, ca.clone() * cb.clone());
            }
        }
        out
    }

    fn from_poly(p: &SparsePoly<S>, bounds: &[u32]) -> Self {
        let r = bounds.len();
        let mut out = Self::zero(bounds);
        for (m, c) in p.terms() {
            let e = m.exponents();
            out.add_term(e[..r].to_vec(), e[r] as i64, c.clone());
        }
        out
    }

    /// `1/(c z + ℓ(y)) = Σ_j (-ℓ)^j / (c z)^{j+1}`, truncated where `ℓ^j`
    /// vanishes in the nilpotent ring.
    fn inverse_of_form(form: &LinearForm, bounds: &[u32]) -> Result<Self, ArithError> {
        let c = form.z_coeff();
        if c == 0 {
            return Err(ArithError::NonExpandable);
        }
        let r = bounds.len();
        let mut ell = Self::zero(bounds);
        for (i, &a) in form.y_coeffs().iter().enumerate() {
            let mut m = vec![0; r];
            m[i] = 1;
            ell.add_term(m, 0, S::from_int(-a));
        }
        let inv_c = S::one() / S::from_int(c);
        // ℓ^j = 0 once j exceeds the top nonvanishing y-degree
        let max_j: u32 = bounds.iter().map(|b| b.saturating_sub(1)).sum();
        let mut out = Self::zero(bounds);
        let mut power = Self::one(bounds);
        let mut c_pow = inv_c.clone();
        for j in 0..=max_j {
            for (m, k, v) in power.terms() {
                out.add_term(m.to_vec(), k - (j as i64 + 1), v.clone() * c_pow.clone());
            }
            power = power.mul(&ell);
            c_pow = c_pow * inv_c.clone();
            if power.is_zero() {
                break;
            }
        }
        Ok(out)
    }

    /// Canonical text: `(p/q)[y-exponents]z^k` terms joined by ` + `.
    pub fn canonical(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms()
            .map(|(m, k, c)| {
                let m: Vec<String> = m.iter().map(|e| e.to_string()).collect();
                format!("({})[{}]z^{}", c.canonical(), m.join(","), k)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Human-readable rendering, `names` covering the `y` variables then `z`.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, k, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            out.push_str(match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let abs = c.abs();
            let mut factors = Vec::new();
            if !abs.is_one() {
                factors.push(abs.to_string());
            }
            for (e, n) in m.iter().zip(names) {
                match e {
                    0 => {}
                    1 => factors.push(n.clone()),
                    e => factors.push(format!("{n}^{e}")),
                }
            }
            let zname = names.last().map(String::as_str).unwrap_or("z");
            match k {
                0 => {}
                1 => factors.push(zname.to_string()),
                k => factors.push(format!("{zname}^{k}")),
            }
            if factors.is_empty() {
                factors.push("1".to_string());
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl<S: Scalar> fmt::Display for NilExpansion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// Expressions that can be expanded with nilpotent `y` variables.
pub trait NilpotentExpand<S: Scalar> {
    /// Expands around `z = ∞` with `y_i^{bounds[i]} = 0`.
    ///
    /// Every denominator form needs a nonzero `z` coefficient; a pure-`y`
    /// denominator is [`ArithError::NonExpandable`].
    fn nilpotent_expand(&self, bounds: &[u32]) -> Result<NilExpansion<S>, ArithError>;
}

fn check_bounds(nvars: usize, bounds: &[u32]) -> Result<(), ArithError> {
    if bounds.len() + 1 != nvars || bounds.contains(&0) {
        return Err(ArithError::DimensionMismatch);
    }
    Ok(())
}

impl<S: Scalar> NilpotentExpand<S> for RatExpr<S> {
    fn nilpotent_expand(&self, bounds: &[u32]) -> Result<NilExpansion<S>, ArithError> {
        check_bounds(self.nvars(), bounds)?;
        let mut acc = NilExpansion::from_poly(self.numerator(), bounds);
        for (f, &e) in self.denominator() {
            let inv = NilExpansion::inverse_of_form(f, bounds)?;
            for _ in 0..e {
                acc = acc.mul(&inv);
            }
        }
        Ok(acc)
    }
}

impl<S: Scalar> NilpotentExpand<S> for FactoredRational<S> {
    fn nilpotent_expand(&self, bounds: &[u32]) -> Result<NilExpansion<S>, ArithError> {
        check_bounds(self.nvars(), bounds)?;
        let mut acc = NilExpansion::one(bounds);
        let mut scalar = NilExpansion::zero(bounds);
        scalar.add_term(vec![0; bounds.len()], 0, self.scalar().clone());
        acc = acc.mul(&scalar);
        for (f, e) in self.factors() {
            let base = if e > 0 {
                NilExpansion::from_poly(&SparsePoly::from_linear_form(f), bounds)
            } else {
                NilExpansion::inverse_of_form(f, bounds)?
            };
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(&base);
            }
        }
        Ok(acc)
    }
}
