//! Dense univariate polynomials over an exact field, with squarefree
//! decomposition and factorization over Q (Kronecker's method).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::big_to_scalar;
use super::Scalar;

/// Ascending coefficients, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly<S>(Vec<S>);

impl<S: Scalar> UniPoly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn one() -> Self {
        UniPoly(vec![S::one()])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&S> {
        self.0.last()
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => {
                let l = l.clone();
                UniPoly(self.0.iter().map(|c| c.clone() / l.clone()).collect())
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(S::zero) + other.0.get(i).cloned().unwrap_or_else(S::zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.0.iter().map(|v| v.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.lead().unwrap().clone();
        let mut rem = self.0.clone();
        let mut quot = vec![S::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = rem[top].clone() / lead.clone();
            if !c.is_zero() {
                let shift = top - dd;
                for (k, d) in divisor.0.iter().enumerate() {
                    rem[shift + k] = rem[shift + k].clone() - c.clone() * d.clone();
                }
                quot[shift] = c;
            }
            rem.pop();
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c.clone() * S::from_int(i as i64)).collect())
    }

    pub fn eval(&self, x: &S) -> S {
        self.0.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Yun's squarefree decomposition: monic pairwise coprime `a_i` with
    /// `self = lead · ∏ a_i^i`. Entries with trivial `a_i` are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let c = df.exact_div(&a0).expect("gcd divides");
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            b = b.exact_div(&a).expect("gcd divides");
            let c = d.exact_div(&a).expect("gcd divides");
            d = c.sub(&b.derivative());
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// Monic factors irreducible over Q of a squarefree polynomial.
    ///
    /// Uses Kronecker's interpolation search. If the divisor search would
    /// exceed [`KRONECKER_COMBINATION_CAP`] the remaining cofactor is
    /// returned unsplit.
    pub fn factor_squarefree(&self) -> Vec<Self> {
        let Some(deg) = self.degree() else { return Vec::new() };
        if deg == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut pending = vec![to_primitive_integer(self)];
        while let Some(q) = pending.pop() {
            match kronecker_split(&q) {
                Some((h, rest)) => {
                    out.push(from_integer(&h).monic());
                    if rest.len() > 1 {
                        pending.push(rest);
                    }
                }
                None => out.push(from_integer(&q).monic()),
            }
        }
        out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0)));
        out
    }
}

/// Upper bound on divisor combinations tried per candidate factor degree.
pub const KRONECKER_COMBINATION_CAP: u64 = 2_000_000;

type IntPoly = Vec<BigInt>;

fn to_primitive_integer<S: Scalar>(p: &UniPoly<S>) -> IntPoly {
    let parts: Vec<(BigInt, BigInt)> = p.0.iter().map(Scalar::to_big).collect();
    let lcm = parts.iter().fold(BigInt::one(), |l, (_, d)| l.lcm(d));
    let ints: Vec<BigInt> = parts.iter().map(|(n, d)| n * (&lcm / d)).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    ints.iter().map(|c| c / &g * &sign).collect()
}

fn from_integer<S: Scalar>(p: &IntPoly) -> UniPoly<S> {
    UniPoly::new(p.iter().map(big_to_scalar).collect())
}

fn int_eval(p: &IntPoly, x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Positive divisors of `n > 0` by trial division; `None` when `n` is too
/// large to enumerate cheaply.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let root = n.sqrt();
    if root > BigInt::from(10_000_000u64) {
        return None;
    }
    let limit = root.to_u64()?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    for d in 1..=limit {
        let d = BigInt::from(d);
        if (&n % &d).is_zero() {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d);
        }
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

fn interpolation_points(q: &IntPoly, count: usize) -> Vec<(BigInt, BigInt)> {
    std::iter::once(0i64)
        .chain((1i64..).flat_map(|k| [k, -k]))
        .map(BigInt::from)
        .map(|x| {
            let v = int_eval(q, &x);
            (x, v)
        })
        .filter(|(_, v)| !v.is_zero())
        .take(count)
        .collect()
}

/// Lagrange interpolation over Q; `None` unless the result has integer
/// coefficients of exactly the requested degree.
fn interpolate(xs: &[BigInt], ys: &[BigInt], degree: usize) -> Option<IntPoly> {
    use crate::Rat;
    let mut acc: UniPoly<Rat> = UniPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis: UniPoly<Rat> = UniPoly::one();
        let mut denom = BigInt::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&UniPoly::new(vec![Rat::from_integer(-xj), Rat::one()]));
                denom *= xi - xj;
            }
        }
        acc = acc.add(&basis.scale(&Rat::new(yi.clone(), denom)));
    }
    if acc.degree() != Some(degree) || acc.0.iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(acc.0.iter().map(|c| c.to_integer()).collect())
}

fn int_exact_div(q: &IntPoly, h: &IntPoly) -> Option<IntPoly> {
    use crate::Rat;
    let qq: UniPoly<Rat> = from_integer(q);
    let hh: UniPoly<Rat> = from_integer(h);
    let quot = qq.exact_div(&hh)?;
    if quot.0.iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(quot.0.iter().map(|c| c.to_integer()).collect())
}

/// Finds a factor of least degree `1 ≤ k ≤ deg/2`; returns it with its
/// cofactor, or `None` if `q` is irreducible (or the search was capped).
fn kronecker_split(q: &IntPoly) -> Option<(IntPoly, IntPoly)> {
    let n = q.len() - 1;
    if n <= 1 {
        return None;
    }
    if q[0].is_zero() {
        let rest = q[1..].to_vec();
        return Some((vec![BigInt::zero(), BigInt::one()], rest));
    }
    for k in 1..=n / 2 {
        let pts = interpolation_points(q, k + 1);
        let xs: Vec<BigInt> = pts.iter().map(|(x, _)| x.clone()).collect();
        let mut lists: Vec<Vec<BigInt>> = Vec::new();
        for (i, (_, v)) in pts.iter().enumerate() {
            let ds = divisors(v)?;
            let mut signed = ds.clone();
            if i > 0 {
                signed.extend(ds.iter().map(|d| -d));
            }
            lists.push(signed);
        }
        let combos = lists.iter().try_fold(1u64, |acc, l| acc.checked_mul(l.len() as u64))?;
        if combos > KRONECKER_COMBINATION_CAP {
            return None;
        }
        let mut idx = vec![0usize; lists.len()];
        loop {
            let ys: Vec<BigInt> = idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
            if let Some(mut h) = interpolate(&xs, &ys, k) {
                if h.last().unwrap().is_negative() {
                    h = h.iter().map(|c| -c).collect();
                }
                if let Some(rest) = int_exact_div(q, &h) {
                    return Some((h, rest));
                }
            }
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < lists[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    None
}
