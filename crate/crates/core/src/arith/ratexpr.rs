use std::collections::BTreeMap;
use std::fmt;

use super::factored::pow_scalar;
use super::{ArithError, FactoredRational, LinearForm, Scalar, SparsePoly};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// A polynomial over a product of linear forms, fully cancelled.
///
/// No denominator form divides the numerator, and the zero expression has
/// an empty denominator. Given normalized forms this representation is
/// unique, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatExpr<S> {
    numerator: SparsePoly<S>,
    denominator: BTreeMap<LinearForm, u32>,
}

const MODULUS: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

fn int_mod(v: &BigInt) -> u64 {
    (v % BigInt::from(MODULUS) + BigInt::from(MODULUS)).to_u64().map(|x| x % MODULUS).expect("residue fits")
}

fn scalar_mod<S: Scalar>(s: &S) -> Option<u64> {
    let (n, d) = s.to_big();
    let d = int_mod(&d);
    (d != 0).then(|| mul_mod(int_mod(&n), pow_mod(d, MODULUS - 2)))
}

/// Whether `p` might vanish on the hyperplane `form = 0`, tested at one
/// point modulo a prime. `false` proves `form ∤ p`.
fn may_vanish_on<S: Scalar>(p: &SparsePoly<S>, form: &LinearForm) -> bool {
    const SEEDS: [u64; 8] = [37, 101, 239, 461, 797, 1213, 1733, 2357];
    let c = form.coeffs();
    let pivot = c.iter().rposition(|&v| v != 0).expect("forms are nonzero");
    let to_mod = |v: i64| int_mod(&BigInt::from(v));
    let mut point: Vec<u64> = (0..c.len()).map(|i| SEEDS[i % SEEDS.len()] + i as u64).collect();
    let rest = (0..c.len()).filter(|&i| i != pivot).fold(0, |acc, i| (acc + mul_mod(to_mod(c[i]), point[i])) % MODULUS);
    point[pivot] = mul_mod(MODULUS - rest, pow_mod(to_mod(c[pivot]), MODULUS - 2)) % MODULUS;
    let mut acc = 0;
    for (m, coeff) in p.terms() {
        let Some(mut t) = scalar_mod(coeff) else { return true };
        for (&x, &e) in point.iter().zip(m.exponents()) {
            if e > 0 {
                t = mul_mod(t, pow_mod(x, u64::from(e)));
            }
        }
        acc = (acc + t) % MODULUS;
    }
    acc == 0
}

impl<S: Scalar> RatExpr<S> {
    /// Builds and reduces `numerator / ∏ form^e`.
    pub fn new(numerator: SparsePoly<S>, denominator: BTreeMap<LinearForm, u32>) -> Self {
        let mut e = RatExpr { numerator, denominator };
        e.reduce();
        e
    }

    pub fn from_factored(f: &FactoredRational<S>) -> Self {
        Self::new(f.numerator_poly(), f.denominator())
    }

    pub fn numerator(&self) -> &SparsePoly<S> {
        &self.numerator
    }

    pub fn denominator(&self) -> &BTreeMap<LinearForm, u32> {
        &self.denominator
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Denominator forms free of `z`, i.e. poles that did not cancel.
    pub fn pure_y_poles(&self) -> Vec<&LinearForm> {
        self.denominator.keys().filter(|f| f.is_pure_y()).collect()
    }

    fn reduce(&mut self) {
        if self.numerator.is_zero() {
            self.denominator.clear();
            return;
        }
        let forms: Vec<LinearForm> = self.denominator.keys().cloned().collect();
        for f in forms {
            while let Some(&e) = self.denominator.get(&f) {
                if !may_vanish_on(&self.numerator, &f) {
                    break;
                }
                match self.numerator.divide_by_linear_form(&f) {
                    Ok(q) => {
                        self.numerator = q;
                        if e == 1 {
                            self.denominator.remove(&f);
                        } else {
                            self.denominator.insert(f.clone(), e - 1);
                        }
                    }
                    Err(_) => break,
                }
            }
        }
    }

    /// Sums factored terms over the multiset-max common denominator and
    /// cancels every linear factor that divides the result.
    ///
    /// Terms are accumulated in input order; since polynomial addition is
    /// exact the result does not depend on that order.
    pub fn clear_and_sum(terms: &[FactoredRational<S>]) -> Self {
        let nvars = terms.first().expect("clear_and_sum needs at least one term").nvars();
        let mut common: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for t in terms {
            for (f, e) in t.denominator() {
                let slot = common.entry(f).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
        let mut numerator = SparsePoly::zero(nvars);
        for t in terms.iter().filter(|t| !t.is_zero()) {
            let own = t.denominator();
            let mut p = t.numerator_poly();
            for (f, &e) in &common {
                let missing = e - own.get(f).copied().unwrap_or(0);
                if missing > 0 {
                    p = &p * &SparsePoly::from_linear_form(f).pow(missing);
                }
            }
            numerator = &numerator + &p;
        }
        Self::new(numerator, common)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut common = self.denominator.clone();
        for (f, &e) in &other.denominator {
            let slot = common.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        let lift = |x: &Self| {
            let mut p = x.numerator.clone();
            for (f, &e) in &common {
                let missing = e - x.denominator.get(f).copied().unwrap_or(0);
                if missing > 0 {
                    p = &p * &SparsePoly::from_linear_form(f).pow(missing);
                }
            }
            p
        };
        Self::new(&lift(self) + &lift(other), common)
    }

    /// Applies `y_i ↦ Σ_j m[i][j] y_j`; denominator forms are renormalized
    /// and their scale folded into the numerator.
    pub fn substitute_linear(&self, m: &[Vec<i64>]) -> Result<Self, ArithError> {
        let mut num = self.numerator.substitute_linear(m)?;
        let mut den = BTreeMap::new();
        let mut scale = S::one();
        for (f, &e) in &self.denominator {
            let (g, s) = f.substitute(m)?;
            scale = scale * pow_scalar(&S::from_int(s), e as i32);
            *den.entry(g).or_insert(0) += e;
        }
        num = num.scale(&(S::one() / scale));
        Ok(Self::new(num, den))
    }

    pub fn evaluate(&self, point: &[S]) -> Result<S, ArithError> {
        let mut den = S::one();
        for (f, &e) in &self.denominator {
            let v = f.evaluate(point);
            if v.is_zero() {
                return Err(ArithError::PoleAtPoint);
            }
            den = den * pow_scalar(&v, e as i32);
        }
        Ok(self.numerator.evaluate(point) / den)
    }

    /// Factored view of the denominator: `∏ form^{-e}` with unit scalar.
    pub fn denominator_factored(&self) -> FactoredRational<S> {
        FactoredRational::from_parts(
            self.nvars(),
            S::one(),
            self.denominator.iter().map(|(f, &e)| (f.clone(), -(e as i32))),
        )
    }

    /// Canonical text: `(<numerator>) / (<forms>)`, with `1` for an empty
    /// denominator.
    pub fn canonical(&self) -> String {
        let den = if self.denominator.is_empty() {
            "1".to_string()
        } else {
            self.denominator.iter().map(|(f, e)| format!("{f}^{e}")).collect::<Vec<_>>().join(" * ")
        };
        format!("({}) / ({})", self.numerator.canonical(), den)
    }

    pub fn render(&self, names: &[String]) -> String {
        let num = self.numerator.render(names);
        if self.denominator.is_empty() {
            return num;
        }
        let den = self
            .denominator
            .iter()
            .map(|(f, &e)| {
                let body = SparsePoly::<S>::from_linear_form(f).render(names);
                match e {
                    1 => format!("({body})"),
                    e => format!("({body})^{e}"),
                }
            })
            .collect::<Vec<_>>()
            .join("*");
        format!("({num})/({den})")
    }

    pub fn render_latex(&self, names: &[String]) -> String {
        let num = self.numerator.render_latex(names);
        if self.denominator.is_empty() {
            return num;
        }
        let den = self
            .denominator
            .iter()
            .map(|(f, &e)| {
                let body = SparsePoly::<S>::from_linear_form(f).render_latex(names);
                match e {
                    1 => format!("\\left({body}\\right)"),
                    e => format!("\\left({body}\\right)^{{{e}}}"),
                }
            })
            .collect::<Vec<_>>()
            .join(" ");
        format!("\\frac{{{num}}}{{{den}}}")
    }
}

impl<S: Scalar> fmt::Display for RatExpr<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    type F = FactoredRational<Rat>;

    #[test]
    fn opposite_terms_cancel() {
        let a = F::power_of_ints(&[1, 0], -1).unwrap();
        let b = a.scale(&Rat::from_int(-1));
        let s = RatExpr::clear_and_sum(&[a, b]);
        assert!(s.is_zero());
        assert!(s.denominator().is_empty());
    }

    #[test]
    fn sums_over_common_denominator() {
        // ((y+z) + (-y+z)) / (y-z) = 2z/(y-z)
        let inv = F::power_of_ints(&[1, -1], -1).unwrap();
        let a = inv.multiply(&F::power_of_ints(&[1, 1], 1).unwrap());
        let b = inv.multiply(&F::power_of_ints(&[-1, 1], 1).unwrap());
        let s = RatExpr::clear_and_sum(&[a, b]);
        assert_eq!(s.canonical(), "((2/1)[0,1]) / ([1,-1]^1)");
        let pt = [Rat::from_int(3), Rat::from_int(1)];
        assert_eq!(s.evaluate(&pt).unwrap(), Rat::from_int(1));
    }

    #[test]
    fn dividing_factor_cancels() {
        // (y^2 - z^2)/(y - z) = y + z
        let num = F::power_of_ints(&[1, 1], 1).unwrap().multiply(&F::power_of_ints(&[1, -1], 1).unwrap());
        let num = num.numerator_poly();
        let den: BTreeMap<_, _> = [(LinearForm::from_ints(&[1, -1]).unwrap().0, 1)].into();
        let e = RatExpr::new(num, den);
        assert!(e.denominator().is_empty());
    }

    #[test]
    fn evaluation_reports_poles() {
        let e = RatExpr::from_factored(&F::power_of_ints(&[1, -1], -1).unwrap());
        let pt = [Rat::from_int(1), Rat::from_int(1)];
        assert_eq!(e.evaluate(&pt), Err(ArithError::PoleAtPoint));
    }
}
