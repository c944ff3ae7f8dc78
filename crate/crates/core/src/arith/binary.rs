//! Homogeneous binary forms in `x, y` over an exact field.

use std::fmt;

use super::univariate::UniPoly;
use super::{ArithError, Scalar};

/// `Σ c_i x^{d-i} y^i`, stored as `[c_0, …, c_d]`. The zero form keeps its
/// declared degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm<S> {
    degree: u32,
    coeffs: Vec<S>,
}

impl<S: Scalar> BinaryForm<S> {
    pub fn new(degree: u32, coeffs: Vec<S>) -> Result<Self, ArithError> {
        if coeffs.len() != degree as usize + 1 {
            return Err(ArithError::DimensionMismatch);
        }
        Ok(BinaryForm { degree, coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        let degree = coeffs.len().checked_sub(1).expect("at least one coefficient") as u32;
        BinaryForm { degree, coeffs: coeffs.iter().map(|&c| S::from_int(c)).collect() }
    }

    pub fn zero(degree: u32) -> Self {
        BinaryForm { degree, coeffs: vec![S::zero(); degree as usize + 1] }
    }

    pub fn constant(c: S) -> Self {
        BinaryForm { degree: 0, coeffs: vec![c] }
    }

    pub fn x() -> Self {
        Self::from_ints(&[1, 0])
    }

    pub fn y() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `b·x − a·y`, the form vanishing at `[a:b]`.
    pub fn vanishing_at(a: &S, b: &S) -> Result<Self, ArithError> {
        if a.is_zero() && b.is_zero() {
            return Err(ArithError::ZeroForm);
        }
        Ok(BinaryForm { degree: 1, coeffs: vec![b.clone(), -a.clone()] }.normalized())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        BinaryForm { degree: self.degree, coeffs: self.coeffs.iter().map(|v| v.clone() * c.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ArithError> {
        if self.degree != other.degree {
            return Err(ArithError::DimensionMismatch);
        }
        Ok(BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        let mut coeffs = vec![S::zero(); degree as usize + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        BinaryForm { degree, coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(S::one()), |acc, _| acc.mul(self))
    }

    pub fn evaluate(&self, x: &S, y: &S) -> S {
        let d = self.degree as usize;
        self.coeffs.iter().enumerate().fold(S::zero(), |acc, (i, c)| {
            let mut t = c.clone();
            for _ in 0..d - i {
                t = t * x.clone();
            }
            for _ in 0..i {
                t = t * y.clone();
            }
            acc + t
        })
    }

    /// Scales so the first nonzero coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(c) => self.scale(&(S::one() / c.clone())),
        }
    }

    /// Order of vanishing at `[1:0]`, i.e. the power of `y` dividing the
    /// form. `None` for the zero form.
    pub fn y_order(&self) -> Option<u32> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| i as u32)
    }

    /// `f(x, 1)` as an ascending polynomial in `x`.
    fn dehomogenize(&self) -> UniPoly<S> {
        UniPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// `y^{y_power} · Y^{deg u} u(x/y)`.
    fn homogenize(u: &UniPoly<S>, y_power: u32) -> Self {
        let du = u.degree().unwrap_or(0);
        let degree = du as u32 + y_power;
        let mut coeffs = vec![S::zero(); degree as usize + 1];
        for (k, c) in u.coeffs().iter().enumerate() {
            coeffs[degree as usize - k] = c.clone();
        }
        BinaryForm { degree, coeffs }
    }

    /// Exact quotient, if `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return self.degree.checked_sub(divisor.degree).map(Self::zero);
        }
        let (a, b) = (self.y_order()?, divisor.y_order()?);
        let y_power = a.checked_sub(b)?;
        let q = self.dehomogenize().exact_div(&divisor.dehomogenize())?;
        let out = Self::homogenize(&q, y_power);
        (out.degree + divisor.degree == self.degree).then_some(out)
    }

    /// Composition `f(a x + b y, c x + d y)`.
    pub fn compose_linear(&self, a: &S, b: &S, c: &S, d: &S) -> Self {
        let lx = BinaryForm { degree: 1, coeffs: vec![a.clone(), b.clone()] };
        let ly = BinaryForm { degree: 1, coeffs: vec![c.clone(), d.clone()] };
        let n = self.degree;
        let mut out = Self::zero(n);
        for (i, coeff) in self.coeffs.iter().enumerate() {
            let term = lx.pow(n - i as u32).mul(&ly.pow(i as u32)).scale(coeff);
            out = out.add(&term).expect("same degree");
        }
        out
    }

    /// Human-readable text in `x`, `y`.
    pub fn render(&self) -> String {
        let d = self.degree as usize;
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            out.push_str(match (out.is_empty(), neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            });
            let mut mono = String::new();
            for (var, e) in [("x", d - i), ("y", i)] {
                match e {
                    0 => {}
                    1 => mono.push_str(var),
                    e => mono.push_str(&format!("{var}^{e}")),
                }
            }
            let abs = c.abs();
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}{mono}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses sums of monomials such as `3x^2y - 2/3 xy + y^2`, `x*y` or `0`
    /// into a form of the declared degree.
    pub fn parse(text: &str, degree: u32) -> Result<Self, ArithError> {
        let err = |msg: &str| ArithError::Parse(format!("{msg} in `{text}`"));
        let mut coeffs = vec![S::zero(); degree as usize + 1];
        let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty form"));
        }
        let mut pos = 0;
        let read_int = |pos: &mut usize| -> Option<String> {
            let start = *pos;
            while *pos < s.len() && s[*pos].is_ascii_digit() {
                *pos += 1;
            }
            (*pos > start).then(|| s[start..*pos].iter().collect())
        };
        while pos < s.len() {
            let mut sign = S::one();
            while pos < s.len() && (s[pos] == '+' || s[pos] == '-') {
                if s[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let mut coeff = S::one();
            if let Some(n) = read_int(&mut pos) {
                let mut text = n;
                if pos < s.len() && s[pos] == '/' {
                    pos += 1;
                    let d = read_int(&mut pos).ok_or_else(|| err("missing denominator"))?;
                    text = format!("{text}/{d}");
                }
                coeff = super::parse_scalar(&text).ok_or_else(|| err("bad coefficient"))?;
            }
            let (mut ex, mut ey) = (0u32, 0u32);
            let mut saw_var = false;
            loop {
                if pos < s.len() && s[pos] == '*' {
                    pos += 1;
                }
                if pos >= s.len() || !(s[pos] == 'x' || s[pos] == 'y') {
                    break;
                }
                let var = s[pos];
                pos += 1;
                let mut e = 1u32;
                if pos < s.len() && s[pos] == '^' {
                    pos += 1;
                    e = read_int(&mut pos).and_then(|n| n.parse().ok()).ok_or_else(|| err("bad exponent"))?;
                }
                if var == 'x' {
                    ex += e;
                } else {
                    ey += e;
                }
                saw_var = true;
            }
            if !saw_var && coeff.is_one() && !(pos > 0 && s[pos - 1].is_ascii_digit()) {
                return Err(err("expected a term"));
            }
            if pos < s.len() && s[pos] != '+' && s[pos] != '-' {
                return Err(err(&format!("unexpected character `{}`", s[pos])));
            }
            let coeff = coeff * sign;
            if coeff.is_zero() {
                continue;
            }
            if ex + ey != degree {
                return Err(err(&format!("term of degree {} in a form of degree {degree}", ex + ey)));
            }
            let i = ey as usize;
            coeffs[i] = coeffs[i].clone() + coeff;
        }
        Ok(BinaryForm { degree, coeffs })
    }
}

impl<S: Scalar> fmt::Display for BinaryForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Normalized gcd of binary forms; zero entries are ignored.
///
/// The `y`-power is the minimum `y`-order; the rest is the gcd of the
/// dehomogenized polynomials, homogenized back.
pub fn binary_gcd<S: Scalar>(forms: &[BinaryForm<S>]) -> Result<BinaryForm<S>, ArithError> {
    let nonzero: Vec<&BinaryForm<S>> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(ArithError::AllZero);
    }
    let y_power = nonzero.iter().filter_map(|f| f.y_order()).min().expect("nonempty");
    let g = nonzero.iter().fold(UniPoly::zero(), |g: UniPoly<S>, f| g.gcd(&f.dehomogenize()));
    Ok(BinaryForm::homogenize(&g, y_power).normalized())
}

/// Factors irreducible over Q with multiplicities: `g = c · ∏ f_i^{m_i}`.
///
/// Each factor is normalized (first nonzero coefficient 1); a factor of
/// degree above one stands for a conjugate set of points sharing its
/// multiplicity. Factors are listed by ascending degree, then coefficients.
pub fn multiplicity_decomposition<S: Scalar>(g: &BinaryForm<S>) -> Result<Vec<(BinaryForm<S>, u32)>, ArithError> {
    let y_power = g.y_order().ok_or(ArithError::AllZero)?;
    let mut out = Vec::new();
    if y_power > 0 {
        out.push((BinaryForm::y(), y_power));
    }
    for (part, mult) in g.dehomogenize().squarefree_decomposition() {
        for factor in part.factor_squarefree() {
            out.push((BinaryForm::homogenize(&factor, 0).normalized(), mult));
        }
    }
    out.sort_by(|(a, _), (b, _)| a.degree.cmp(&b.degree).then_with(|| b.coeffs.cmp(&a.coeffs)));
    Ok(out)
}
