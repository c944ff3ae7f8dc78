use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GitError;
use crate::lattice::{int_rank, solve_rational};

pub type IntMatrix = Vec<Vec<i64>>;

/// Bound on the size of a Weyl group generated from user matrices.
pub const WEYL_GROUP_CAP: usize = 100_000;

/// How effective lifted degrees are recognized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EffectivityMode {
    /// `{j : β̃(ξ_j) ≥ 0}` must be a semistable support.
    Toric,
    /// All entries nonnegative (GL-type groups such as Grassmannians).
    NonnegativeGl,
    /// The toric test as a necessary condition, enumerated inside a box.
    CustomBounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    Projective { n: usize },
    Grassmannian { k: usize, n: usize },
    Toric,
    Custom,
}

/// Full description of a GIT datum prior to validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSpec {
    pub name: String,
    pub rank: usize,
    /// Torus weights `ξ_1..ξ_n`, each of length `rank`.
    pub weights: Vec<Vec<i64>>,
    pub theta: Vec<i64>,
    pub roots: Vec<Vec<i64>>,
    pub weyl_gens: Vec<IntMatrix>,
    /// `m × rank`, the degree map to `Hom(χ(G), Z)`.
    pub tau: IntMatrix,
    pub effectivity: EffectivityMode,
    /// Declared freeness of the full group action on the stable locus.
    pub nonabelian_free: bool,
}

/// A validated GIT datum `(V, G, T, θ)` seen through the maximal torus.
///
/// Weyl matrices `M` act on Chern roots by `y_i ↦ Σ_j M_ij y_j`, hence on
/// characters by `ξ ↦ Mᵀξ` and on lifted degrees by `β̃ ↦ M⁻¹β̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Target {
    name: String,
    preset: Preset,
    rank: usize,
    weights: Vec<Vec<i64>>,
    theta: Vec<i64>,
    roots: Vec<Vec<i64>>,
    weyl_gens: Vec<IntMatrix>,
    weyl_group: Vec<IntMatrix>,
    tau: IntMatrix,
    effectivity: EffectivityMode,
    nonabelian_free: bool,
}

impl Target {
    /// `P^n = C^{n+1} //_{id} C*`.
    pub fn projective(n: usize) -> Result<Target, GitError> {
        if n == 0 {
            return Err(GitError::Malformed("projective space needs n ≥ 1".into()));
        }
        Self::build(
            Preset::Projective { n },
            TargetSpec {
                name: format!("P{n}"),
                rank: 1,
                weights: vec![vec![1]; n + 1],
                theta: vec![1],
                roots: Vec::new(),
                weyl_gens: Vec::new(),
                tau: vec![vec![1]],
                effectivity: EffectivityMode::Toric,
                nonabelian_free: true,
            },
        )
    }

    /// `Gr(k, n) = M_{k×n} //_{det} GL_k`.
    pub fn grassmannian(k: usize, n: usize) -> Result<Target, GitError> {
        if k == 0 || k > n {
            return Err(GitError::Malformed(format!("Gr({k},{n}) needs 1 ≤ k ≤ n")));
        }
        let unit = |i: usize| (0..k).map(|j| i64::from(i == j)).collect::<Vec<_>>();
        let weights = (0..k).flat_map(|i| std::iter::repeat_n(unit(i), n)).collect();
        let mut roots = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    let mut a = vec![0; k];
                    a[i] = 1;
                    a[j] = -1;
                    roots.push(a);
                }
            }
        }
        let weyl_gens = (0..k.saturating_sub(1))
            .map(|i| {
                let mut m: IntMatrix = (0..k).map(unit).collect();
                m.swap(i, i + 1);
                m
            })
            .collect();
        Self::build(
            Preset::Grassmannian { k, n },
            TargetSpec {
                name: format!("Gr({k},{n})"),
                rank: k,
                weights,
                theta: vec![1; k],
                roots,
                weyl_gens,
                tau: vec![vec![1; k]],
                effectivity: EffectivityMode::NonnegativeGl,
                nonabelian_free: true,
            },
        )
    }

    /// Toric quotient `C^n // (C*)^r` from an `r × n` weight matrix (rows
    /// indexed by torus factors, columns by coordinates).
    pub fn toric(name: &str, weight_matrix: &[Vec<i64>], theta: &[i64]) -> Result<Target, GitError> {
        let r = weight_matrix.len();
        if r == 0 {
            return Err(GitError::Malformed("weight matrix has no rows".into()));
        }
        let n = weight_matrix[0].len();
        if weight_matrix.iter().any(|row| row.len() != n) {
            return Err(GitError::Malformed("weight matrix rows differ in length".into()));
        }
        let weights = (0..n).map(|j| weight_matrix.iter().map(|row| row[j]).collect()).collect();
        let tau = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
        Self::build(
            Preset::Toric,
            TargetSpec {
                name: name.to_string(),
                rank: r,
                weights,
                theta: theta.to_vec(),
                roots: Vec::new(),
                weyl_gens: Vec::new(),
                tau,
                effectivity: EffectivityMode::Toric,
                nonabelian_free: true,
            },
        )
    }

    pub fn custom(spec: TargetSpec) -> Result<Target, GitError> {
        Self::build(Preset::Custom, spec)
    }

    fn build(preset: Preset, spec: TargetSpec) -> Result<Target, GitError> {
        let bad = |msg: String| Err(GitError::Malformed(msg));
        let r = spec.rank;
        if r == 0 {
            return bad("torus rank must be positive".into());
        }
        if spec.weights.is_empty() {
            return bad("at least one weight is required".into());
        }
        if let Some(w) = spec.weights.iter().find(|w| w.len() != r) {
            return bad(format!("weight {w:?} does not have length {r}"));
        }
        if spec.theta.len() != r {
            return bad(format!("theta must have length {r}"));
        }
        if let Some(a) = spec.roots.iter().find(|a| a.len() != r || a.iter().all(|&v| v == 0)) {
            return bad(format!("root {a:?} is zero or does not have length {r}"));
        }
        let root_set: HashSet<&Vec<i64>> = spec.roots.iter().collect();
        if root_set.len() != spec.roots.len() {
            return bad("roots must be distinct".into());
        }
        for a in &spec.roots {
            let neg: Vec<i64> = a.iter().map(|v| -v).collect();
            if !root_set.contains(&neg) {
                return bad(format!("roots are not closed under negation: {a:?}"));
            }
        }
        let m = spec.tau.len();
        if m == 0 || spec.tau.iter().any(|row| row.len() != r) {
            return bad(format!("tau must be an m × {r} matrix with m ≥ 1"));
        }
        if int_rank(&spec.tau) != m {
            return bad("tau must have full row rank".into());
        }
        if spec.effectivity == EffectivityMode::Toric {
            if !spec.roots.is_empty() {
                return bad("toric effectivity requires an abelian group (no roots)".into());
            }
            if m != r {
                return bad("toric effectivity requires an invertible tau".into());
            }
        }
        for g in &spec.weyl_gens {
            if g.len() != r || g.iter().any(|row| row.len() != r) {
                return bad(format!("Weyl generator is not {r} × {r}"));
            }
            if int_rank(g) != r {
                return bad("Weyl generator is singular".into());
            }
            if !permutes_multiset(g, &spec.weights) {
                return bad("Weyl generator does not permute the weights".into());
            }
            if !permutes_multiset(g, &spec.roots) {
                return bad("Weyl generator does not permute the roots".into());
            }
        }
        let weyl_group = generate_group(r, &spec.weyl_gens)?;
        Ok(Target {
            name: spec.name,
            preset,
            rank: r,
            weights: spec.weights,
            theta: spec.theta,
            roots: spec.roots,
            weyl_gens: spec.weyl_gens,
            weyl_group,
            tau: spec.tau,
            effectivity: spec.effectivity,
            nonabelian_free: spec.nonabelian_free,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn preset(&self) -> &Preset {
        &self.preset
    }

    /// Torus rank `r`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of coordinates of `V`.
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn theta(&self) -> &[i64] {
        &self.theta
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    /// One root from each `±α` pair: the one whose first nonzero entry is
    /// positive.
    pub fn root_pairs(&self) -> Vec<&Vec<i64>> {
        self.roots.iter().filter(|a| a.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0)).collect()
    }

    pub fn weyl_gens(&self) -> &[IntMatrix] {
        &self.weyl_gens
    }

    /// Every element of the Weyl group, identity first.
    pub fn weyl_group(&self) -> &[IntMatrix] {
        &self.weyl_group
    }

    pub fn tau(&self) -> &IntMatrix {
        &self.tau
    }

    pub fn effectivity(&self) -> EffectivityMode {
        self.effectivity
    }

    pub fn nonabelian_free(&self) -> bool {
        self.nonabelian_free
    }

    /// `Hom(χ(G), Z)` rank `m`.
    pub fn group_degree_rank(&self) -> usize {
        self.tau.len()
    }

    /// The character `θ` of `G` recovered from its restriction to `T`, when
    /// `τ` is square (otherwise `None`).
    pub fn theta_on_group(&self) -> Option<Vec<crate::Rat>> {
        if self.tau.len() != self.rank {
            return None;
        }
        let transpose: IntMatrix = (0..self.rank).map(|i| self.tau.iter().map(|row| row[i]).collect()).collect();
        solve_rational(&transpose, &self.theta)
    }

    /// Names for the Chern-root variables followed by `z`.
    pub fn variable_names(&self) -> Vec<String> {
        let mut names: Vec<String> =
            if self.rank == 1 { vec!["H".to_string()] } else { (1..=self.rank).map(|i| format!("x{i}")).collect() };
        names.push("z".to_string());
        names
    }

    pub fn latex_variable_names(&self) -> Vec<String> {
        let mut names: Vec<String> = if self.rank == 1 {
            vec!["H".to_string()]
        } else {
            (1..=self.rank).map(|i| format!("x_{{{i}}}")).collect()
        };
        names.push("z".to_string());
        names
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (rank {}, {} weights, theta {:?})", self.name, self.rank, self.weights.len(), self.theta)
    }
}

/// `Mᵀ v`.
pub fn act_on_character(m: &IntMatrix, v: &[i64]) -> Vec<i64> {
    (0..v.len()).map(|j| (0..v.len()).map(|i| m[i][j] * v[i]).sum()).collect()
}

/// `M v`.
pub fn mat_vec(m: &IntMatrix, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect()).collect()
}

fn permutes_multiset(m: &IntMatrix, items: &[Vec<i64>]) -> bool {
    let mut before: Vec<Vec<i64>> = items.to_vec();
    let mut after: Vec<Vec<i64>> = items.iter().map(|v| act_on_character(m, v)).collect();
    before.sort();
    after.sort();
    before == after
}

fn generate_group(r: usize, gens: &[IntMatrix]) -> Result<Vec<IntMatrix>, GitError> {
    let id: IntMatrix = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    let mut seen: BTreeSet<IntMatrix> = BTreeSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = mat_mul(&g, s);
            if seen.insert(h.clone()) {
                if seen.len() > WEYL_GROUP_CAP {
                    return Err(GitError::Malformed(format!(
                        "Weyl generators do not generate a group of order ≤ {WEYL_GROUP_CAP}"
                    )));
                }
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_datum() {
        let t = Target::projective(2).unwrap();
        assert_eq!(t.weights(), &[vec![1], vec![1], vec![1]]);
        assert_eq!(t.theta(), &[1]);
        assert!(t.roots().is_empty());
        assert_eq!(t.weyl_group().len(), 1);
    }

    #[test]
    fn grassmannian_datum() {
        let t = Target::grassmannian(2, 4).unwrap();
        assert_eq!(t.dim(), 8);
        assert_eq!(t.weights().iter().filter(|w| **w == vec![1, 0]).count(), 4);
        assert_eq!(t.roots(), &[vec![1, -1], vec![-1, 1]]);
        assert_eq!(t.tau(), &vec![vec![1, 1]]);
        assert_eq!(t.weyl_group().len(), 2);
        assert_eq!(t.root_pairs(), vec![&vec![1, -1]]);
        assert_eq!(Target::grassmannian(3, 5).unwrap().weyl_group().len(), 6);
        assert_eq!(Target::grassmannian(4, 5).unwrap().weyl_group().len(), 24);
    }

    #[test]
    fn toric_product_of_lines() {
        let t = Target::toric("P1xP1", &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]], &[1, 1]).unwrap();
        assert_eq!(t.weights(), &[vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]]);
        assert_eq!(t.rank(), 2);
        assert_eq!(t.theta_on_group().unwrap().len(), 2);
    }

    #[test]
    fn malformed_data_rejected() {
        assert!(Target::grassmannian(3, 2).is_err());
        assert!(Target::projective(0).is_err());
        let mut spec = TargetSpec {
            name: "bad".into(),
            rank: 2,
            weights: vec![vec![1, 0], vec![0, 1]],
            theta: vec![1, 1],
            roots: vec![vec![1, -1]],
            weyl_gens: vec![],
            tau: vec![vec![1, 1]],
            effectivity: EffectivityMode::CustomBounded,
            nonabelian_free: false,
        };
        assert!(Target::custom(spec.clone()).is_err());
        spec.roots.push(vec![-1, 1]);
        assert!(Target::custom(spec.clone()).is_ok());
        spec.weyl_gens.push(vec![vec![2, 0], vec![0, 1]]);
        assert!(Target::custom(spec.clone()).is_err());
        spec.weyl_gens = vec![];
        spec.tau = vec![vec![1, 1], vec![2, 2]];
        assert!(Target::custom(spec).is_err());
    }
}
