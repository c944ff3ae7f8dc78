//! Effective lifted degrees, fixed-component dimensions on the graph space,
//! and Weyl orbits of lifted degrees.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::git::{semistable_support, EffectivityMode, Support, Target};
use crate::lattice::solve_rational;

/// A lifted degree `β̃ ∈ Hom(χ(T), Z)` in the dual basis.
pub type DegreeVec = Vec<i64>;
/// A degree `β ∈ Hom(χ(G), Z)`.
pub type GroupDegree = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixedLocusError {
    #[error("lifted degree {0:?} is not effective")]
    NotEffective(DegreeVec),
    #[error("effective lifted degrees are unbounded; supply a bound")]
    UnboundedEnumeration,
    #[error("degree set is not closed under the Weyl group: {0:?} is missing")]
    NotClosed(DegreeVec),
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedComponent {
    pub beta_t: DegreeVec,
    pub dim_v: usize,
    pub dim_p: usize,
    pub dim_f: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylOrbit {
    pub representative: DegreeVec,
    pub size: usize,
    pub stabilizer_order: usize,
}

fn pairing(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_len(expected: usize, v: &[i64]) -> Result<(), FixedLocusError> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(FixedLocusError::DimensionMismatch { expected, got: v.len() })
    }
}

fn toric_effective(t: &Target, beta_t: &[i64]) -> bool {
    let support = Support::new((0..t.dim()).filter(|&j| pairing(beta_t, &t.weights()[j]) >= 0));
    semistable_support(t, &support).unwrap_or(false)
}

pub fn is_effective(t: &Target, beta_t: &[i64]) -> bool {
    if beta_t.len() != t.rank() {
        return false;
    }
    match t.effectivity() {
        EffectivityMode::Toric | EffectivityMode::CustomBounded => toric_effective(t, beta_t),
        EffectivityMode::NonnegativeGl => beta_t.iter().all(|&d| d >= 0),
    }
}

/// False when effectivity is only a necessary condition (custom targets).
pub fn effectivity_is_exact(t: &Target) -> bool {
    t.effectivity() != EffectivityMode::CustomBounded
}

/// `τ(β̃)`.
pub fn apply_tau(t: &Target, beta_t: &[i64]) -> GroupDegree {
    t.tau().iter().map(|row| pairing(row, beta_t)).collect()
}

/// Per-coordinate upper bounds for nonnegative solutions of `τβ̃ = β`, read
/// off rows of `τ` with nonnegative entries.
fn nonnegative_bounds(t: &Target, beta: &[i64]) -> Option<Vec<i64>> {
    let mut bounds = vec![None::<i64>; t.rank()];
    for (row, &b) in t.tau().iter().zip(beta) {
        if row.iter().any(|&c| c < 0) {
            continue;
        }
        for (i, &c) in row.iter().enumerate() {
            if c > 0 {
                let cap = b.div_euclid(c);
                bounds[i] = Some(bounds[i].map_or(cap, |old: i64| old.min(cap)));
            }
        }
    }
    bounds.into_iter().collect()
}

/// Walks the box `lo[i] ..= hi[i]` in descending lexicographic order.
fn descending_box(lo: &[i64], hi: &[i64], mut visit: impl FnMut(&[i64])) {
    let r = lo.len();
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return;
    }
    let mut cur: Vec<i64> = hi.to_vec();
    loop {
        visit(&cur);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] > lo[i] {
                cur[i] -= 1;
                cur[i + 1..].copy_from_slice(&hi[i + 1..]);
                break;
            }
        }
    }
}

/// All effective `β̃` with `τ(β̃) = β`, in descending lexicographic order.
pub fn enumerate_effective(t: &Target, beta: &[i64], bound: Option<i64>) -> Result<Vec<DegreeVec>, FixedLocusError> {
    check_len(t.group_degree_rank(), beta)?;
    let r = t.rank();
    let mut out = Vec::new();
    match (t.effectivity(), bound) {
        (EffectivityMode::Toric, _) => {
            if let Some(sol) = solve_rational(t.tau(), beta) {
                if sol.iter().all(|q| q.denom().is_one()) {
                    let v: Option<Vec<i64>> = sol.iter().map(|q| q.numer().to_i64()).collect();
                    if let Some(v) = v.filter(|v| toric_effective(t, v)) {
                        out.push(v);
                    }
                }
            }
        }
        (EffectivityMode::NonnegativeGl, _) => {
            if beta.iter().any(|b| b.is_negative()) && t.tau().iter().all(|row| row.iter().all(|&c| c >= 0)) {
                return Ok(out);
            }
            let hi = match (nonnegative_bounds(t, beta), bound) {
                (Some(hi), Some(b)) => hi.into_iter().map(|h| h.min(b)).collect(),
                (Some(hi), None) => hi,
                (None, Some(b)) => vec![b; r],
                (None, None) => return Err(FixedLocusError::UnboundedEnumeration),
            };
            descending_box(&vec![0; r], &hi, |v| {
                if apply_tau(t, v) == beta {
                    out.push(v.to_vec());
                }
            });
        }
        (EffectivityMode::CustomBounded, None) => return Err(FixedLocusError::UnboundedEnumeration),
        (EffectivityMode::CustomBounded, Some(b)) => {
            descending_box(&vec![-b; r], &vec![b; r], |v| {
                if apply_tau(t, v) == beta && toric_effective(t, v) {
                    out.push(v.to_vec());
                }
            });
        }
    }
    Ok(out)
}

pub fn dim_fixed_component(t: &Target, beta_t: &[i64]) -> Result<FixedComponent, FixedLocusError> {
    check_len(t.rank(), beta_t)?;
    if !is_effective(t, beta_t) {
        return Err(FixedLocusError::NotEffective(beta_t.to_vec()));
    }
    let dim_v = t.weights().iter().filter(|w| pairing(beta_t, w) >= 0).count();
    let dim_p = t.rank() + t.roots().iter().filter(|a| pairing(beta_t, a) >= 0).count();
    Ok(FixedComponent { beta_t: beta_t.to_vec(), dim_v, dim_p, dim_f: dim_v as i64 - dim_p as i64 })
}

/// `dim ℙ^N` with `N = dn + d + n`.
pub fn graph_space_dim_pn(n: u64, d: u64) -> u64 {
    d * n + d + n
}

/// The Weyl orbit of `β̃` in first-visit order.
pub fn weyl_orbit(t: &Target, beta_t: &[i64]) -> Vec<DegreeVec> {
    let mut seen = BTreeSet::new();
    let mut orbit = Vec::new();
    for g in t.weyl_group() {
        let image = crate::git::mat_vec(g, beta_t);
        if seen.insert(image.clone()) {
            orbit.push(image);
        }
    }
    orbit
}

/// Partitions a Weyl-stable set of lifted degrees into orbits, each
/// represented by its lexicographically largest member. Orbits are listed by
/// descending representative.
pub fn weyl_orbit_partition(t: &Target, degs: &[DegreeVec]) -> Result<Vec<WeylOrbit>, FixedLocusError> {
    for d in degs {
        check_len(t.rank(), d)?;
    }
    let input: BTreeSet<&DegreeVec> = degs.iter().collect();
    let mut assigned: BTreeSet<DegreeVec> = BTreeSet::new();
    let mut out = Vec::new();
    for d in &input {
        if assigned.contains(*d) {
            continue;
        }
        let orbit = weyl_orbit(t, d);
        if let Some(missing) = orbit.iter().find(|v| !input.contains(v)) {
            return Err(FixedLocusError::NotClosed(missing.clone()));
        }
        let representative = orbit.iter().max().cloned().unwrap_or_default();
        let stabilizer_order = t.weyl_group().iter().filter(|g| crate::git::mat_vec(g, d) == **d).count();
        out.push(WeylOrbit { representative, size: orbit.len(), stabilizer_order });
        assigned.extend(orbit);
    }
    out.sort_by(|a, b| b.representative.cmp(&a.representative));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::git::TargetSpec;

    fn gr24() -> Target {
        Target::grassmannian(2, 4).unwrap()
    }

    #[test]
    fn effectivity() {
        let gr = gr24();
        assert!(is_effective(&gr, &[1, 0]));
        assert!(!is_effective(&gr, &[2, -1]));
        let p2 = Target::projective(2).unwrap();
        assert!(is_effective(&p2, &[3]));
        assert!(is_effective(&p2, &[0]));
        assert!(!is_effective(&p2, &[-1]));
        let p1p1 = Target::toric("P1xP1", &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]], &[1, 1]).unwrap();
        assert!(!is_effective(&p1p1, &[1, -1]));
        assert!(is_effective(&p1p1, &[1, 2]));
    }

    #[test]
    fn enumeration() {
        let gr = gr24();
        assert_eq!(enumerate_effective(&gr, &[1], None).unwrap(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(enumerate_effective(&gr, &[2], None).unwrap(), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert!(enumerate_effective(&gr, &[-1], None).unwrap().is_empty());
        let p3 = Target::projective(3).unwrap();
        assert_eq!(enumerate_effective(&p3, &[4], None).unwrap(), vec![vec![4]]);
        assert!(enumerate_effective(&p3, &[-4], None).unwrap().is_empty());
    }

    fn custom_gl2() -> Target {
        let gr = gr24();
        Target::custom(TargetSpec {
            name: "custom".into(),
            rank: 2,
            weights: gr.weights().to_vec(),
            theta: vec![1, 1],
            roots: gr.roots().to_vec(),
            weyl_gens: gr.weyl_gens().to_vec(),
            tau: vec![vec![1, 1]],
            effectivity: EffectivityMode::CustomBounded,
            nonabelian_free: true,
        })
        .unwrap()
    }

    #[test]
    fn custom_needs_bound() {
        let t = custom_gl2();
        assert_eq!(enumerate_effective(&t, &[1], None), Err(FixedLocusError::UnboundedEnumeration));
        assert_eq!(enumerate_effective(&t, &[1], Some(3)).unwrap(), vec![vec![1, 0], vec![0, 1]]);
        assert!(!effectivity_is_exact(&t));
    }

    #[test]
    fn dimensions() {
        for n in 1..=5 {
            let p = Target::projective(n).unwrap();
            for d in 1..=4 {
                assert_eq!(dim_fixed_component(&p, &[d]).unwrap().dim_f, n as i64);
            }
        }
        let c = dim_fixed_component(&gr24(), &[1, 0]).unwrap();
        assert_eq!((c.dim_v, c.dim_p, c.dim_f), (8, 3, 5));
        let c = dim_fixed_component(&gr24(), &[1, 1]).unwrap();
        assert_eq!((c.dim_p, c.dim_f), (4, 4));
        assert_eq!(dim_fixed_component(&gr24(), &[2, -1]), Err(FixedLocusError::NotEffective(vec![2, -1])));
    }

    #[test]
    fn graph_space() {
        assert_eq!(graph_space_dim_pn(2, 2), 8);
        assert_eq!(graph_space_dim_pn(1, 0), 1);
        assert_eq!(graph_space_dim_pn(3, 1), 7);
    }

    #[test]
    fn orbits() {
        let gr = gr24();
        let o = weyl_orbit_partition(&gr, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(o, vec![WeylOrbit { representative: vec![1, 0], size: 2, stabilizer_order: 1 }]);
        let o = weyl_orbit_partition(&gr, &[vec![1, 1]]).unwrap();
        assert_eq!(o, vec![WeylOrbit { representative: vec![1, 1], size: 1, stabilizer_order: 2 }]);
        assert_eq!(weyl_orbit_partition(&gr, &[vec![1, 0]]), Err(FixedLocusError::NotClosed(vec![0, 1])));
        let p1p1 = Target::toric("P1xP1", &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]], &[1, 1]).unwrap();
        let o = weyl_orbit_partition(&p1p1, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(o.len(), 2);
        assert!(o.iter().all(|w| w.size == 1 && w.stabilizer_order == 1));
    }
}
