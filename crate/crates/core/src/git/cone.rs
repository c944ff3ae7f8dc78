//! Exact H-representations of finitely generated rational cones by
//! Fourier–Motzkin elimination.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::lattice::int_rank;

/// `{x : a·x = 0 for a in equalities, a·x ≥ 0 for a in inequalities}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    rank: usize,
    equalities: Vec<Vec<BigInt>>,
    inequalities: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<BigInt>,
    /// Original `λ_j ≥ 0` constraints this row was combined from.
    history: BTreeSet<usize>,
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && g != BigInt::from(1) {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    v
}

impl Cone {
    /// The cone generated by `generators` in `Q^dim`.
    ///
    /// Writes `x = Σ λ_j g_j, λ ≥ 0`, substitutes away as many `λ` as the
    /// equalities allow, then eliminates the rest by Fourier–Motzkin with
    /// Chernikov's history rule to discard redundant combinations.
    pub fn generated_by(dim: usize, generators: &[Vec<i64>]) -> Cone {
        let gens: Vec<&Vec<i64>> =
            generators.iter().filter(|g| g.iter().any(|&v| v != 0)).collect::<BTreeSet<_>>().into_iter().collect();
        let s = gens.len();
        let width = dim + s;
        let mut eqs: Vec<Vec<BigInt>> = (0..dim)
            .map(|i| {
                let mut row = vec![BigInt::zero(); width];
                row[i] = BigInt::from(1);
                for (j, g) in gens.iter().enumerate() {
                    row[dim + j] = BigInt::from(-g[i]);
                }
                row
            })
            .collect();
        let mut ineqs: Vec<Row> = (0..s)
            .map(|j| {
                let mut coeffs = vec![BigInt::zero(); width];
                coeffs[dim + j] = BigInt::from(1);
                Row { coeffs, history: BTreeSet::from([j]) }
            })
            .collect();

        let mut remaining = Vec::new();
        for v in dim..width {
            let Some(p) = eqs.iter().position(|row| !row[v].is_zero()) else {
                remaining.push(v);
                continue;
            };
            let pivot = eqs.remove(p);
            let pv = pivot[v].clone();
            let eliminate = |row: &[BigInt], flip: bool| -> Vec<BigInt> {
                let c = &row[v];
                let mut out: Vec<BigInt> = row.iter().zip(&pivot).map(|(a, b)| a * &pv - b * c).collect();
                if flip && pv.is_negative() {
                    for x in out.iter_mut() {
                        *x = -&*x;
                    }
                }
                primitive(out)
            };
            for row in eqs.iter_mut() {
                if !row[v].is_zero() {
                    *row = eliminate(row, false);
                }
            }
            for row in ineqs.iter_mut() {
                if !row.coeffs[v].is_zero() {
                    row.coeffs = eliminate(&row.coeffs, true);
                }
            }
        }

        for (step, &v) in remaining.iter().enumerate() {
            let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
            for row in ineqs {
                match row.coeffs[v].sign() {
                    num_bigint::Sign::Plus => pos.push(row),
                    num_bigint::Sign::Minus => neg.push(row),
                    num_bigint::Sign::NoSign => keep.push(row),
                }
            }
            let limit = step + 2;
            for p in &pos {
                for n in &neg {
                    let history: BTreeSet<usize> = p.history.union(&n.history).copied().collect();
                    if history.len() > limit {
                        continue;
                    }
                    let a = &p.coeffs[v];
                    let b = -&n.coeffs[v];
                    let coeffs = primitive(p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| x * &b + y * a).collect());
                    keep.push(Row { coeffs, history });
                }
            }
            let mut seen = BTreeSet::new();
            keep.retain(|row| seen.insert(row.coeffs.clone()));
            ineqs = keep;
        }

        let project = |row: &[BigInt]| row[..dim].to_vec();
        let equalities: Vec<Vec<BigInt>> = eqs
            .iter()
            .map(|r| project(r))
            .filter(|r| r.iter().any(|c| !c.is_zero()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let inequalities: Vec<Vec<BigInt>> = ineqs
            .iter()
            .map(|r| project(&r.coeffs))
            .filter(|r| r.iter().any(|c| !c.is_zero()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let gens_owned: Vec<Vec<i64>> = gens.into_iter().cloned().collect();
        let rank = if gens_owned.is_empty() { 0 } else { int_rank(&gens_owned) };
        Cone { dim, rank, equalities, inequalities }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the linear span of the generators.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.rank == self.dim
    }

    pub fn equalities(&self) -> &[Vec<BigInt>] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Vec<BigInt>] {
        &self.inequalities
    }

    fn eval(row: &[BigInt], p: &[i64]) -> BigInt {
        row.iter().zip(p).map(|(a, &b)| a * BigInt::from(b)).sum()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.equalities.iter().all(|a| Self::eval(a, p).is_zero())
            && self.inequalities.iter().all(|a| !Self::eval(a, p).is_negative())
    }

    /// Topological interior: full-dimensional and every valid inequality
    /// strict at `p`.
    pub fn interior_contains(&self, p: &[i64]) -> bool {
        self.is_full_dimensional() && self.inequalities.iter().all(|a| Self::eval(a, p).is_positive())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_line() {
        let c = Cone::generated_by(1, &[vec![-1]]);
        assert!(!c.contains(&[1]));
        assert!(c.contains(&[-3]));
        assert!(c.interior_contains(&[-3]));
        assert!(!c.interior_contains(&[0]));
    }

    #[test]
    fn whole_line() {
        let c = Cone::generated_by(1, &[vec![1], vec![-1]]);
        assert!(c.contains(&[1]) && c.contains(&[-1]));
        assert!(c.interior_contains(&[1]));
        assert!(c.interior_contains(&[0]));
    }

    #[test]
    fn quadrant_and_ray() {
        let q = Cone::generated_by(2, &[vec![1, 0], vec![0, 1]]);
        assert!(q.interior_contains(&[1, 1]));
        assert!(q.contains(&[1, 0]) && !q.interior_contains(&[1, 0]));
        let ray = Cone::generated_by(2, &[vec![1, 0]]);
        assert!(!ray.contains(&[1, 1]));
        assert!(ray.contains(&[5, 0]));
        assert!(!ray.is_full_dimensional());
    }

    #[test]
    fn empty_generators_give_origin() {
        let c = Cone::generated_by(2, &[]);
        assert!(c.contains(&[0, 0]));
        assert!(!c.contains(&[1, 0]));
    }

    #[test]
    fn three_dimensional_cone() {
        let c = Cone::generated_by(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 1], vec![0, 0, 1]]);
        assert!(c.contains(&[1, 1, 1]));
        assert!(!c.contains(&[-1, 0, 0]));
        assert!(c.interior_contains(&[2, 2, 1]));
    }
}
