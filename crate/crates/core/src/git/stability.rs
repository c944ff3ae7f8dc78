use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{Cone, GitError, Target};
use crate::lattice::spans_full_lattice;

/// Default cap on `dim V` for support enumeration.
pub const DEFAULT_ENUM_CAP: usize = 20;

/// A set of coordinate indices of `V` (0-based; displayed 1-based).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Support(BTreeSet<usize>);

impl Support {
    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Support(indices.into_iter().collect())
    }

    /// Builds a support from 1-based indices.
    pub fn from_one_based<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Support(indices.into_iter().map(|i| i - 1).collect())
    }

    pub fn full(n: usize) -> Self {
        Support((0..n).collect())
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

fn support_cone(t: &Target, s: &Support) -> Result<Cone, GitError> {
    if let Some(i) = s.indices().find(|&i| i >= t.dim()) {
        return Err(GitError::IndexOutOfRange(i + 1));
    }
    let gens: Vec<Vec<i64>> = s.indices().map(|i| t.weights()[i].clone()).collect();
    Ok(Cone::generated_by(t.rank(), &gens))
}

/// King's criterion on a coordinate support: θ lies in the cone spanned by
/// the weights of `s`, i.e. some monomial on `s` is a relative invariant of
/// weight `θ^m`, `m ≥ 1`.
pub fn semistable_support(t: &Target, s: &Support) -> Result<bool, GitError> {
    Ok(support_cone(t, s)?.contains(t.theta()))
}

/// θ lies in the interior of a full-dimensional weight cone of `s`.
pub fn stable_support(t: &Target, s: &Support) -> Result<bool, GitError> {
    Ok(support_cone(t, s)?.interior_contains(t.theta()))
}

/// Coordinates grouped by equal weight. Stability of a support only depends
/// on which groups it meets.
fn weight_groups(t: &Target) -> Vec<Vec<usize>> {
    let mut groups: Vec<(Vec<i64>, Vec<usize>)> = Vec::new();
    for (i, w) in t.weights().iter().enumerate() {
        match groups.iter_mut().find(|(g, _)| g == w) {
            Some((_, idx)) => idx.push(i),
            None => groups.push((w.clone(), vec![i])),
        }
    }
    groups.into_iter().map(|(_, idx)| idx).collect()
}

struct SupportTable {
    groups: Vec<Vec<usize>>,
    semistable: Vec<bool>,
    stable: Vec<bool>,
}

impl SupportTable {
    fn build(t: &Target, cap: usize) -> Result<SupportTable, GitError> {
        if t.dim() > cap {
            return Err(GitError::TooLarge { n: t.dim(), cap });
        }
        let groups = weight_groups(t);
        let count = 1usize << groups.len();
        let mut semistable = Vec::with_capacity(count);
        let mut stable = Vec::with_capacity(count);
        for mask in 0..count {
            let gens: Vec<Vec<i64>> =
                (0..groups.len()).filter(|g| mask >> g & 1 == 1).map(|g| t.weights()[groups[g][0]].clone()).collect();
            let cone = Cone::generated_by(t.rank(), &gens);
            semistable.push(cone.contains(t.theta()));
            stable.push(cone.interior_contains(t.theta()));
        }
        Ok(SupportTable { groups, semistable, stable })
    }

    fn support(&self, mask: usize) -> Support {
        Support::new((0..self.groups.len()).filter(|g| mask >> g & 1 == 1).flat_map(|g| self.groups[g].iter().copied()))
    }

    fn generators(&self, t: &Target, mask: usize) -> Vec<Vec<i64>> {
        (0..self.groups.len()).filter(|g| mask >> g & 1 == 1).map(|g| t.weights()[self.groups[g][0]].clone()).collect()
    }
}

/// Maximal supports (under inclusion) that are not semistable; every
/// unstable point has its support inside one of them.
pub fn maximal_unstable_supports(t: &Target) -> Result<Vec<Support>, GitError> {
    maximal_unstable_supports_with_cap(t, DEFAULT_ENUM_CAP)
}

pub fn maximal_unstable_supports_with_cap(t: &Target, cap: usize) -> Result<Vec<Support>, GitError> {
    let table = SupportTable::build(t, cap)?;
    let ngroups = table.groups.len();
    let mut out: Vec<Support> = (0..1usize << ngroups)
        .filter(|&mask| !table.semistable[mask])
        .filter(|&mask| (0..ngroups).all(|g| mask >> g & 1 == 1 || table.semistable[mask | 1 << g]))
        .map(|mask| table.support(mask))
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssumptionFailure {
    /// Semistable but not stable.
    StrictlySemistable,
    /// Stable with a nontrivial torus stabilizer.
    NonFreeTorus,
}

/// Outcome of checking the standing assumptions on `(V, G, θ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssumptionReport {
    pub ss_equals_s: bool,
    pub semistable_nonempty: bool,
    /// Torus freeness on every stable support, and declared freeness of the
    /// full group for nonabelian targets.
    pub action_free_on_stable: bool,
    pub torus_free_on_stable: bool,
    pub nonabelian_free_declared: bool,
    pub witnesses: Vec<(AssumptionFailure, Support)>,
}

impl AssumptionReport {
    pub fn all_hold(&self) -> bool {
        self.ss_equals_s && self.semistable_nonempty && self.action_free_on_stable
    }
}

pub fn verify_assumptions(t: &Target) -> Result<AssumptionReport, GitError> {
    verify_assumptions_with_cap(t, DEFAULT_ENUM_CAP)
}

pub fn verify_assumptions_with_cap(t: &Target, cap: usize) -> Result<AssumptionReport, GitError> {
    let table = SupportTable::build(t, cap)?;
    let full = (1usize << table.groups.len()) - 1;
    let mut witnesses = Vec::new();
    let mut ss_equals_s = true;
    let mut torus_free = true;
    for mask in 0..=full {
        if table.semistable[mask] && !table.stable[mask] {
            ss_equals_s = false;
            witnesses.push((AssumptionFailure::StrictlySemistable, table.support(mask)));
        }
        if table.stable[mask] {
            let gens = table.generators(t, mask);
            let rows: Vec<Vec<i64>> = (0..t.rank()).map(|i| gens.iter().map(|g| g[i]).collect()).collect();
            if !spans_full_lattice(&rows) {
                torus_free = false;
                witnesses.push((AssumptionFailure::NonFreeTorus, table.support(mask)));
            }
        }
    }
    let nonabelian = t.roots().is_empty() || t.nonabelian_free();
    Ok(AssumptionReport {
        ss_equals_s,
        semistable_nonempty: table.semistable[full],
        action_free_on_stable: torus_free && nonabelian,
        torus_free_on_stable: torus_free,
        nonabelian_free_declared: nonabelian,
        witnesses,
    })
}

/// Roots split by their pairing with a lifted degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviSplit {
    /// Roots with `β̃·α = 0`.
    pub levi: Vec<Vec<i64>>,
    /// The positively paired member of each remaining `±α` pair, sorted
    /// lexicographically.
    pub positive_part: Vec<Vec<i64>>,
}

pub fn levi_roots(t: &Target, beta_t: &[i64]) -> LeviSplit {
    let pairing = |a: &[i64]| -> i64 { a.iter().zip(beta_t).map(|(x, y)| x * y).sum() };
    let levi = t.roots().iter().filter(|a| pairing(a) == 0).cloned().collect();
    let mut positive_part: Vec<Vec<i64>> = t.roots().iter().filter(|a| pairing(a) > 0).cloned().collect();
    positive_part.sort();
    LeviSplit { levi, positive_part }
}
