use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{ArithError, LinearForm, Monomial, Scalar};

/// Sparse polynomial in `y_1, …, y_r, z` with exact coefficients.
///
/// No zero coefficient is ever stored, so structural equality is equality
/// of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly<S> {
    nvars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> SparsePoly<S> {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, index), S::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, S)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn from_linear_form(form: &LinearForm) -> Self {
        Self::from_int_coeffs(form.coeffs())
    }

    /// `Σ c_i v_i` for integer coefficients over all variables.
    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        Self::from_terms(n, coeffs.iter().enumerate().map(|(i, &c)| (Monomial::var(n, i), S::from_int(c))))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &S)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient by a linear form.
    ///
    /// A single polynomial is a Gröbner basis of the ideal it generates, so
    /// the division algorithm leaves a zero remainder iff `form` divides
    /// `self`; the first leading term not divisible by the leading variable
    /// of `form` proves non-divisibility.
    pub fn divide_by_linear_form(&self, form: &LinearForm) -> Result<Self, ArithError> {
        assert_eq!(form.nvars(), self.nvars, "form arity mismatch");
        let divisor = Self::from_linear_form(form);
        let (lead_m, lead_c) = divisor.leading_term().expect("forms are nonzero");
        let (lead_m, lead_c) = (lead_m.clone(), lead_c.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.checked_div(&lead_m).ok_or(ArithError::NotDivisible)?;
            let qc = c.clone() / lead_c.clone();
            let step = SparsePoly::from_terms(self.nvars, [(qm.clone(), qc.clone())]);
            rem = &rem - &(&step * &divisor);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Linear change of the `y` variables: `y_i ↦ Σ_j m[i][j] y_j`, `z` fixed.
    pub fn substitute_linear(&self, m: &[Vec<i64>]) -> Result<Self, ArithError> {
        let r = self.nvars - 1;
        if m.len() != r || m.iter().any(|row| row.len() != r) {
            return Err(ArithError::DimensionMismatch);
        }
        if crate::lattice::int_rank(m) < r {
            return Err(ArithError::SingularMatrix);
        }
        if let Some(sigma) = permutation(m) {
            let terms = self.terms.iter().map(|(mono, c)| {
                let mut e = vec![0; self.nvars];
                for (i, &x) in mono.exponents().iter().enumerate() {
                    e[if i < r { sigma[i] } else { i }] = x;
                }
                (Monomial::new(e), c.clone())
            });
            return Ok(Self::from_terms(self.nvars, terms));
        }
        let images: Vec<SparsePoly<S>> = (0..self.nvars)
            .map(|i| {
                if i < r {
                    let mut coeffs = m[i].clone();
                    coeffs.push(0);
                    Self::from_int_coeffs(&coeffs)
                } else {
                    Self::var(self.nvars, i)
                }
            })
            .collect();
        let mut out = Self::zero(self.nvars);
        for (mono, c) in &self.terms {
            let mut t = Self::constant(self.nvars, c.clone());
            for (img, &e) in images.iter().zip(mono.exponents()) {
                if e > 0 {
                    t = &t * &img.pow(e);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars, "point arity mismatch");
        let mut powers: Vec<Vec<S>> = point.iter().map(|v| vec![S::one(), v.clone()]).collect();
        for m in self.terms.keys() {
            for (table, &e) in powers.iter_mut().zip(m.exponents()) {
                while table.len() <= e as usize {
                    let next = table[table.len() - 1].clone() * table[1].clone();
                    table.push(next);
                }
            }
        }
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (table, &e) in powers.iter().zip(m.exponents()) {
                if e > 0 {
                    t = t * table[e as usize].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Canonical text: terms from the leading monomial down, `(p/q)[e_1,…]`
    /// joined by ` + `; the zero polynomial is `0`.
    pub fn canonical(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            s.push('(');
            c.write_canonical(&mut s).expect("write to String");
            s.push(')');
            s.push('[');
            for (j, e) in m.exponents().iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                s.push_str(&e.to_string());
            }
            s.push(']');
        }
        s
    }

    /// Human-readable rendering with the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        render_terms(self.terms.iter().rev(), names, false)
    }

    /// LaTeX rendering with the given variable names.
    pub fn render_latex(&self, names: &[String]) -> String {
        render_terms(self.terms.iter().rev(), names, true)
    }
}

/// `σ` with `m[i][σ(i)] = 1` and zeros elsewhere, if `m` is a permutation
/// matrix.
fn permutation(m: &[Vec<i64>]) -> Option<Vec<usize>> {
    let mut seen = vec![false; m.len()];
    let mut sigma = Vec::with_capacity(m.len());
    for row in m {
        let mut hits = row.iter().enumerate().filter(|(_, &v)| v != 0);
        let (j, &v) = hits.next()?;
        if v != 1 || hits.next().is_some() || seen[j] {
            return None;
        }
        seen[j] = true;
        sigma.push(j);
    }
    Some(sigma)
}

fn render_terms<'a, S: Scalar>(
    terms: impl Iterator<Item = (&'a Monomial, &'a S)>,
    names: &[String],
    latex: bool,
) -> String {
    let mut out = String::new();
    for (i, (m, c)) in terms.enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = render_monomial(m, names, latex);
        let coeff = if abs.is_integer() {
            abs.to_big().0.to_string()
        } else if latex {
            let (n, d) = abs.to_big();
            format!("\\frac{{{n}}}{{{d}}}")
        } else {
            abs.to_string()
        };
        if mono.is_empty() {
            out.push_str(&coeff);
        } else if abs.is_one() {
            out.push_str(&mono);
        } else if latex {
            out.push_str(&format!("{coeff} {mono}"));
        } else {
            out.push_str(&format!("{coeff}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn render_monomial(m: &Monomial, names: &[String], latex: bool) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .zip(names)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, n)| match (e, latex) {
            (1, _) => n.clone(),
            (e, true) => format!("{n}^{{{e}}}"),
            (e, false) => format!("{n}^{e}"),
        })
        .collect();
    parts.join(if latex { " " } else { "*" })
}

impl<S: Scalar> fmt::Display for SparsePoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl<S: Scalar> Add for &SparsePoly<S> {
    type Output = SparsePoly<S>;

    fn add(self, rhs: Self) -> SparsePoly<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &SparsePoly<S> {
    type Output = SparsePoly<S>;

    fn sub(self, rhs: Self) -> SparsePoly<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &SparsePoly<S> {
    type Output = SparsePoly<S>;

    fn neg(self) -> SparsePoly<S> {
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl<S: Scalar> Mul for &SparsePoly<S> {
    type Output = SparsePoly<S>;

    fn mul(self, rhs: Self) -> SparsePoly<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = SparsePoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}
