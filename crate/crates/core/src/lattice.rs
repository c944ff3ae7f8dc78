#![allow(clippy::needless_range_loop)]

//! Integer and rational linear algebra: rank and Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rat;

/// Rank over Q of an integer matrix given by rows.
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    let m: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&v| Rat::from_integer(v.into())).collect()).collect();
    rat_rank(m)
}

pub fn rat_rank(mut m: Vec<Vec<Rat>>) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone() / pivot.clone();
                for j in col..ncols {
                    let v = m[rank][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `a x = b` over Q for square invertible `a`; `None` if singular.
pub fn solve_rational(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            row.iter()
                .map(|&v| Rat::from_integer(v.into()))
                .chain(std::iter::once(Rat::from_integer(bi.into())))
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for j in col..=n {
            m[col][j] = m[col][j].clone() / pivot.clone();
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=n {
                    let v = m[col][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Nonzero elementary divisors `d_1 | d_2 | …` of an integer matrix.
pub fn smith_invariants(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            let q = m[i][t].div_floor(&m[t][t]);
            if !q.is_zero() {
                for j in t..ncols {
                    let v = &m[t][j] * &q;
                    m[i][j] -= v;
                }
            }
            clean &= m[i][t].is_zero();
        }
        for j in t + 1..ncols {
            let q = m[t][j].div_floor(&m[t][t]);
            if !q.is_zero() {
                for i in t..nrows {
                    let v = &m[i][t] * &q;
                    m[i][j] -= v;
                }
            }
            clean &= m[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // divisibility: fold a non-divisible entry into the pivot row
        let pivot = m[t][t].clone();
        let bad = (t + 1..nrows)
            .flat_map(|i| (t + 1..ncols).map(move |j| (i, j)))
            .find(|&(i, j)| !(&m[i][j] % &pivot).is_zero());
        if let Some((i, _)) = bad {
            for j in t..ncols {
                let v = m[i][j].clone();
                m[t][j] += v;
            }
            continue;
        }
        diag.push(pivot.abs());
        t += 1;
    }
    diag
}

/// True when the integer columns of `rows` span all of `Z^{rows.len()}`.
pub fn spans_full_lattice(rows: &[Vec<i64>]) -> bool {
    let inv = smith_invariants(rows);
    inv.len() == rows.len() && inv.iter().all(|d| d.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_detects_dependence() {
        assert_eq!(int_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(int_rank(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(int_rank(&[]), 0);
    }

    #[test]
    fn smith_form_of_classic_example() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let d = smith_invariants(&m);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn weight_two_does_not_span() {
        assert!(!spans_full_lattice(&[vec![2]]));
        assert!(spans_full_lattice(&[vec![2, 3]]));
        assert!(!spans_full_lattice(&[vec![1, 1], vec![1, -1]]));
    }

    #[test]
    fn solves_small_system() {
        let x = solve_rational(&[vec![2, 0], vec![0, 4]], &[1, 2]).unwrap();
        assert_eq!(x, vec![Rat::new(1.into(), 2.into()), Rat::new(1.into(), 2.into())]);
        assert!(solve_rational(&[vec![1, 1], vec![1, 1]], &[0, 0]).is_none());
    }
}
