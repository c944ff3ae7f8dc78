//! Explicit polynomial quasimaps `P^1 → P^n` and `P^1 → Gr(k, n)`:
//! basepoints, lengths and ε-stability.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{binary_gcd, multiplicity_decomposition, ArithError, BinaryForm, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuasimapError {
    #[error("malformed quasimap: {0}")]
    Malformed(String),
    #[error("quasimap is not prestable: {0}")]
    NotPrestable(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QuasimapTarget {
    Pn { n: usize },
    Gr { k: usize, n: usize },
}

impl QuasimapTarget {
    fn shape(&self) -> (usize, usize) {
        match *self {
            QuasimapTarget::Pn { n } => (1, n + 1),
            QuasimapTarget::Gr { k, n } => (k, n),
        }
    }
}

impl fmt::Display for QuasimapTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuasimapTarget::Pn { n } => write!(f, "P^{n}"),
            QuasimapTarget::Gr { k, n } => write!(f, "Gr({k},{n})"),
        }
    }
}

/// A quasimap from `P^1` given by a `k × n` matrix of binary forms (one row
/// of `n + 1` forms for `P^n`), with marked points.
///
/// Marks are stored as normalized irreducible forms; a ℚ-point `[a:b]` is
/// the linear form vanishing there, and a higher-degree form marks its
/// conjugate points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyQuasimap<S> {
    target: QuasimapTarget,
    row_degrees: Vec<u32>,
    entries: Vec<Vec<BinaryForm<S>>>,
    marks: Vec<BinaryForm<S>>,
}

/// Basepoints as normalized irreducible forms with their lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasepointDivisor<S> {
    pub points: Vec<(BinaryForm<S>, u32)>,
}

impl<S: Scalar> BasepointDivisor<S> {
    /// `Σ deg(form) · length`.
    pub fn total_length(&self) -> u32 {
        self.points.iter().map(|(f, l)| f.degree() * l).sum()
    }

    /// Largest length at a single point, 0 without basepoints.
    pub fn max_length(&self) -> u32 {
        self.points.iter().map(|(_, l)| *l).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Numerical data of one component of a prestable curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentData {
    pub genus: u32,
    /// Marks plus nodes on the component.
    pub special_points: u32,
    pub line_degree: i64,
}

/// `2g − 2 + n + ε·deg > 0`.
pub fn component_stable<S: Scalar>(c: &ComponentData, eps: &S) -> bool {
    let base = 2 * i64::from(c.genus) - 2 + i64::from(c.special_points);
    (S::from_int(base) + eps.clone() * S::from_int(c.line_degree)).is_positive()
}

/// The set of `ε > 0` for which a quasimap is ε-stable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonInterval<S> {
    pub lower: S,
    pub lower_strict: bool,
    /// `None` is `+∞`.
    pub upper: Option<S>,
    pub upper_strict: bool,
    pub empty: bool,
}

impl<S: Scalar> EpsilonInterval<S> {
    fn build(lower: S, upper: Option<S>) -> Self {
        let empty = upper.as_ref().is_some_and(|u| *u <= lower);
        EpsilonInterval { lower, lower_strict: true, upper, upper_strict: false, empty }
    }

    pub fn never() -> Self {
        EpsilonInterval {
            lower: S::zero(),
            lower_strict: true,
            upper: Some(S::zero()),
            upper_strict: true,
            empty: true,
        }
    }

    pub fn contains(&self, eps: &S) -> bool {
        if self.empty {
            return false;
        }
        let above = if self.lower_strict { *eps > self.lower } else { *eps >= self.lower };
        let below = match &self.upper {
            None => true,
            Some(u) if self.upper_strict => eps < u,
            Some(u) => eps <= u,
        };
        above && below
    }
}

/// `p` for integers, `p/q` otherwise.
pub fn plain_scalar<S: Scalar>(s: &S) -> String {
    let (n, d) = s.to_big();
    if s.is_integer() {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

impl<S: Scalar> fmt::Display for EpsilonInterval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return write!(f, "never stable");
        }
        let open = if self.lower_strict { '(' } else { '[' };
        match &self.upper {
            None => write!(f, "{open}{}, ∞)", plain_scalar(&self.lower)),
            Some(u) => {
                let close = if self.upper_strict { ')' } else { ']' };
                write!(f, "{open}{}, {}{close}", plain_scalar(&self.lower), plain_scalar(u))
            }
        }
    }
}

fn irreducible_mark<S: Scalar>(form: &BinaryForm<S>) -> Result<BinaryForm<S>, QuasimapError> {
    if form.is_zero() || form.degree() == 0 {
        return Err(QuasimapError::Malformed("a mark must be a nonconstant form".into()));
    }
    let parts = multiplicity_decomposition(form)?;
    if parts.len() != 1 || parts[0].1 != 1 {
        return Err(QuasimapError::Malformed(format!("mark {} is not irreducible over Q", form.render())));
    }
    Ok(form.normalized())
}

fn coprime<S: Scalar>(a: &BinaryForm<S>, b: &BinaryForm<S>) -> bool {
    binary_gcd(&[a.clone(), b.clone()]).is_ok_and(|g| g.degree() == 0)
}

/// Laplace expansion along the first row; every term has degree `Σ d_i`.
fn determinant<S: Scalar>(rows: &[Vec<&BinaryForm<S>>], degree: u32) -> BinaryForm<S> {
    match rows.len() {
        0 => BinaryForm::constant(S::one()),
        1 => rows[0][0].clone(),
        k => {
            let mut acc = BinaryForm::zero(degree);
            for c in 0..k {
                if rows[0][c].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<&BinaryForm<S>>> = rows[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, f)| *f).collect())
                    .collect();
                let sub_degree = degree - rows[0][c].degree();
                let term = rows[0][c].mul(&determinant(&sub, sub_degree));
                acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) }.expect("equal degrees");
            }
            acc
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl<S: Scalar> PolyQuasimap<S> {
    pub fn new(
        target: QuasimapTarget,
        row_degrees: Vec<u32>,
        entries: Vec<Vec<BinaryForm<S>>>,
        marks: Vec<BinaryForm<S>>,
    ) -> Result<Self, QuasimapError> {
        let (k, n) = target.shape();
        if let QuasimapTarget::Gr { k, n } = target {
            if k == 0 || k > n {
                return Err(QuasimapError::Malformed(format!("Gr({k},{n}) needs 1 ≤ k ≤ n")));
            }
        }
        if row_degrees.len() != k {
            return Err(QuasimapError::Malformed(format!("expected {k} row degrees, got {}", row_degrees.len())));
        }
        if entries.len() != k {
            return Err(QuasimapError::Malformed(format!("expected {k} rows, got {}", entries.len())));
        }
        for (i, (row, &d)) in entries.iter().zip(&row_degrees).enumerate() {
            if row.len() != n {
                return Err(QuasimapError::Malformed(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
            }
            if let Some(j) = row.iter().position(|f| f.degree() != d) {
                return Err(QuasimapError::Malformed(format!(
                    "entry ({},{}) has degree {}, expected {d}",
                    i + 1,
                    j + 1,
                    row[j].degree()
                )));
            }
        }
        let marks = marks.iter().map(irreducible_mark).collect::<Result<Vec<_>, _>>()?;
        for (i, a) in marks.iter().enumerate() {
            if marks[..i].iter().any(|b| !coprime(a, b)) {
                return Err(QuasimapError::Malformed(format!("mark {} is repeated", a.render())));
            }
        }
        Ok(PolyQuasimap { target, row_degrees, entries, marks })
    }

    pub fn target(&self) -> QuasimapTarget {
        self.target
    }

    pub fn row_degrees(&self) -> &[u32] {
        &self.row_degrees
    }

    pub fn entries(&self) -> &[Vec<BinaryForm<S>>] {
        &self.entries
    }

    pub fn marks(&self) -> &[BinaryForm<S>] {
        &self.marks
    }

    /// Number of marked points over `C` (a degree-`e` mark counts `e` times).
    pub fn mark_count(&self) -> u32 {
        self.marks.iter().map(BinaryForm::degree).sum()
    }

    /// `Σ d_i`.
    pub fn degree(&self) -> u32 {
        self.row_degrees.iter().sum()
    }

    /// Forms cutting out the unstable pullback: the entries for `P^n`, the
    /// maximal minors for `Gr(k, n)`.
    pub fn unstable_forms(&self) -> Vec<BinaryForm<S>> {
        match self.target {
            QuasimapTarget::Pn { .. } => self.entries[0].clone(),
            QuasimapTarget::Gr { k, n } => combinations(n, k)
                .into_iter()
                .map(|cols| {
                    let rows: Vec<Vec<&BinaryForm<S>>> =
                        self.entries.iter().map(|row| cols.iter().map(|&c| &row[c]).collect()).collect();
                    determinant(&rows, self.degree())
                })
                .collect(),
        }
    }

    fn basepoint_gcd(&self) -> Result<BinaryForm<S>, QuasimapError> {
        binary_gcd(&self.unstable_forms()).map_err(|_| {
            QuasimapError::NotPrestable(match self.target {
                QuasimapTarget::Pn { .. } => "every entry is zero".into(),
                QuasimapTarget::Gr { .. } => "every maximal minor vanishes identically".into(),
            })
        })
    }

    pub fn basepoint_divisor(&self) -> Result<BasepointDivisor<S>, QuasimapError> {
        let g = self.basepoint_gcd()?;
        Ok(BasepointDivisor { points: multiplicity_decomposition(&g)? })
    }

    /// Generically stable image and no basepoint at a mark.
    pub fn is_prestable(&self) -> bool {
        match self.basepoint_gcd() {
            Ok(g) => self.marks.iter().all(|m| coprime(m, &g)),
            Err(_) => false,
        }
    }

    fn ensure_prestable(&self) -> Result<BinaryForm<S>, QuasimapError> {
        let g = self.basepoint_gcd()?;
        if let Some(m) = self.marks.iter().find(|m| !coprime(m, &g)) {
            return Err(QuasimapError::NotPrestable(format!("basepoint at mark {}", m.render())));
        }
        Ok(g)
    }

    /// True when the induced rational map is constant: after removing the
    /// basepoint gcd, all forms are proportional.
    pub fn is_constant_map(&self) -> Result<bool, QuasimapError> {
        let g = self.ensure_prestable()?;
        let reduced: Vec<BinaryForm<S>> =
            self.unstable_forms().iter().map(|f| f.exact_div(&g).expect("gcd divides every form")).collect();
        let Some(pivot) = reduced.iter().find(|f| !f.is_zero()) else {
            return Ok(true);
        };
        let p = pivot.coeffs().iter().position(|c| !c.is_zero()).expect("nonzero");
        Ok(reduced.iter().all(|f| *f == pivot.scale(&(f.coeffs()[p].clone() / pivot.coeffs()[p].clone()))))
    }

    /// ε-stability range on an irreducible genus-0 source with this
    /// quasimap's marks: `ε > (2 − #marks)/deg` and `ε ≤ 1/ℓ` for every
    /// basepoint length `ℓ`.
    pub fn epsilon_stability_range(&self) -> Result<EpsilonInterval<S>, QuasimapError> {
        self.ensure_prestable()?;
        let marks = i64::from(self.mark_count());
        let degree = i64::from(self.degree());
        let lower = if degree == 0 {
            if marks > 2 {
                S::zero()
            } else {
                return Ok(EpsilonInterval::never());
            }
        } else {
            let bound = S::from_int(2 - marks) / S::from_int(degree);
            if bound.is_positive() {
                bound
            } else {
                S::zero()
            }
        };
        let max_len = self.basepoint_divisor()?.max_length();
        let upper = (max_len > 0).then(|| S::one() / S::from_int(i64::from(max_len)));
        Ok(EpsilonInterval::build(lower, upper))
    }

    /// Multiplies every entry by `c ≠ 0`.
    pub fn scaled(&self, c: &S) -> Self {
        let entries = self.entries.iter().map(|row| row.iter().map(|f| f.scale(c)).collect()).collect();
        PolyQuasimap { entries, ..self.clone() }
    }

    /// Replaces the entry matrix `M` by `A·M`, where `A[ℓ][i]` has degree
    /// `d_ℓ − d_i`.
    pub fn left_multiplied(&self, a: &[Vec<BinaryForm<S>>]) -> Result<Self, QuasimapError> {
        let (k, n) = self.target.shape();
        if a.len() != k || a.iter().any(|row| row.len() != k) {
            return Err(QuasimapError::Malformed("left factor must be k × k".into()));
        }
        let mut entries = Vec::with_capacity(k);
        for (l, arow) in a.iter().enumerate() {
            let d = self.row_degrees[l];
            let mut row = vec![BinaryForm::zero(d); n];
            for (i, f) in arow.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                if f.degree() + self.row_degrees[i] != d {
                    return Err(QuasimapError::Malformed(format!(
                        "left factor entry ({},{}) has the wrong degree",
                        l + 1,
                        i + 1
                    )));
                }
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = slot.add(&f.mul(&self.entries[i][j]))?;
                }
            }
            entries.push(row);
        }
        PolyQuasimap::new(self.target, self.row_degrees.clone(), entries, self.marks.clone())
    }

    /// Precomposes with `[x:y] ↦ [ax + by : cx + dy]`, moving marks along.
    pub fn reparametrized(&self, a: &S, b: &S, c: &S, d: &S) -> Result<Self, QuasimapError> {
        if (a.clone() * d.clone() - b.clone() * c.clone()).is_zero() {
            return Err(QuasimapError::Arith(ArithError::SingularMatrix));
        }
        let entries =
            self.entries.iter().map(|row| row.iter().map(|f| f.compose_linear(a, b, c, d)).collect()).collect();
        let marks = self.marks.iter().map(|m| m.compose_linear(a, b, c, d)).collect();
        PolyQuasimap::new(self.target, self.row_degrees.clone(), entries, marks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Form, Rat};

    fn f(text: &str, d: u32) -> Form {
        Form::parse(text, d).unwrap()
    }

    fn point(a: i64, b: i64) -> Form {
        Form::vanishing_at(&Rat::from_int(a), &Rat::from_int(b)).unwrap()
    }

    fn pn(forms: &[&str], d: u32, marks: Vec<Form>) -> PolyQuasimap<Rat> {
        let row = forms.iter().map(|t| f(t, d)).collect();
        PolyQuasimap::new(QuasimapTarget::Pn { n: forms.len() - 1 }, vec![d], vec![row], marks).unwrap()
    }

    fn figure() -> PolyQuasimap<Rat> {
        pn(&["0", "xy", "y^2"], 2, vec![point(1, 1), point(2, 1)])
    }

    fn constant() -> PolyQuasimap<Rat> {
        pn(&["x^2", "3x^2", "x^2"], 2, vec![])
    }

    #[test]
    fn degrees() {
        assert_eq!(figure().degree(), 2);
        let gr = |d: Vec<u32>| {
            let rows = d.iter().map(|&e| vec![Form::zero(e); 4]).collect();
            PolyQuasimap::new(QuasimapTarget::Gr { k: 2, n: 4 }, d, rows, vec![]).unwrap()
        };
        assert_eq!(gr(vec![1, 0]).degree(), 1);
        assert_eq!(gr(vec![2, 1]).degree(), 3);
    }

    #[test]
    fn basepoints() {
        assert_eq!(figure().basepoint_divisor().unwrap().points, vec![(Form::y(), 1)]);
        assert_eq!(constant().basepoint_divisor().unwrap().points, vec![(Form::x(), 2)]);
        let diag = PolyQuasimap::new(
            QuasimapTarget::Gr { k: 2, n: 2 },
            vec![1, 1],
            vec![vec![Form::x(), Form::zero(1)], vec![Form::zero(1), Form::y()]],
            vec![],
        )
        .unwrap();
        assert_eq!(diag.basepoint_divisor().unwrap().points, vec![(Form::x(), 1), (Form::y(), 1)]);
    }

    #[test]
    fn prestability() {
        assert!(!pn(&["0", "0", "0"], 2, vec![]).is_prestable());
        let rank_one = PolyQuasimap::new(
            QuasimapTarget::Gr { k: 2, n: 4 },
            vec![1, 1],
            vec![vec![Form::x(), Form::y(), Form::x(), Form::y()], vec![Form::zero(1); 4]],
            vec![],
        )
        .unwrap();
        assert!(!rank_one.is_prestable());
        assert!(figure().is_prestable());
        assert!(!pn(&["0", "xy", "y^2"], 2, vec![point(1, 0)]).is_prestable());
    }

    #[test]
    fn constant_maps() {
        assert!(constant().is_constant_map().unwrap());
        assert!(!figure().is_constant_map().unwrap());
        assert!(!pn(&["x", "y"], 1, vec![]).is_constant_map().unwrap());
    }

    #[test]
    fn components() {
        let c = ComponentData { genus: 0, special_points: 1, line_degree: 1 };
        assert!(component_stable(&c, &Rat::from_int(2)));
        assert!(!component_stable(&c, &Rat::from_int(1)));
        let c = ComponentData { genus: 0, special_points: 2, line_degree: 2 };
        assert!(component_stable(&c, &Rat::new(1.into(), 1000.into())));
        let c = ComponentData { genus: 1, special_points: 0, line_degree: 0 };
        assert!(!component_stable(&c, &Rat::from_int(5)));
    }

    #[test]
    fn stability_ranges() {
        assert_eq!(figure().epsilon_stability_range().unwrap().to_string(), "(0, 1]");
        let free = pn(&["x^2", "xy", "y^2"], 2, vec![point(1, 1), point(2, 1)]);
        assert_eq!(free.epsilon_stability_range().unwrap().to_string(), "(0, ∞)");
        let never = constant().epsilon_stability_range().unwrap();
        assert!(never.empty);
        assert_eq!(never.to_string(), "never stable");
        let one_mark = pn(&["x", "y"], 1, vec![point(1, 1)]);
        let r = one_mark.epsilon_stability_range().unwrap();
        assert_eq!(r.to_string(), "(1, ∞)");
        assert!(r.contains(&Rat::from_int(2)) && !r.contains(&Rat::from_int(1)));
    }

    #[test]
    fn irrational_marks() {
        let q = pn(&["x", "y"], 1, vec![f("x^2 - 2y^2", 2)]);
        assert_eq!(q.mark_count(), 2);
        assert!(PolyQuasimap::new(
            QuasimapTarget::Pn { n: 1 },
            vec![1],
            vec![vec![Form::x(), Form::y()]],
            vec![f("x^2 - y^2", 2)],
        )
        .is_err());
    }
}
