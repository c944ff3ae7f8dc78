use qmap_core::fixed_locus::{
    dim_fixed_component, enumerate_effective, is_effective, weyl_orbit, weyl_orbit_partition,
};
use qmap_core::git::{mat_vec, Target};

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Every integer vector in `[-d, d]^k`, filtered by the defining equations.
fn brute_force_lifts(k: usize, d: i64) -> Vec<Vec<i64>> {
    let side = (2 * d + 1) as usize;
    let mut out = Vec::new();
    for code in 0..side.pow(k as u32) {
        let v: Vec<i64> = (0..k).map(|i| (code / side.pow(i as u32) % side) as i64 - d).collect();
        if v.iter().sum::<i64>() == d && v.iter().all(|&x| x >= 0) {
            out.push(v);
        }
    }
    out.sort();
    out
}

#[test]
fn grassmannian_lift_counts() {
    for k in 1..=3usize {
        let t = Target::grassmannian(k, k + 2).unwrap();
        for d in 0..=6i64 {
            let lifts = enumerate_effective(&t, &[d], None).unwrap();
            assert_eq!(lifts.len() as u64, binomial(d as u64 + k as u64 - 1, k as u64 - 1));
            let mut sorted = lifts.clone();
            sorted.sort();
            assert_eq!(sorted, brute_force_lifts(k, d));
            let mut desc = sorted;
            desc.reverse();
            assert_eq!(lifts, desc, "descending lexicographic order");
        }
    }
}

#[test]
fn orbit_stabilizer() {
    for k in 1..=4usize {
        let t = Target::grassmannian(k, k + 1).unwrap();
        let order: usize = (1..=k).product();
        assert_eq!(t.weyl_group().len(), order);
        for d in 0..=4 {
            let lifts = enumerate_effective(&t, &[d], None).unwrap();
            let orbits = weyl_orbit_partition(&t, &lifts).unwrap();
            assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), lifts.len());
            for o in &orbits {
                assert_eq!(o.size * o.stabilizer_order, order);
                let mut sorted = o.representative.clone();
                sorted.sort_by(|a, b| b.cmp(a));
                assert_eq!(o.representative, sorted, "representative has d_1 ≥ … ≥ d_k");
            }
        }
    }
}

fn presets() -> Vec<Target> {
    let mut out: Vec<Target> = (1..=4).map(|n| Target::projective(n).unwrap()).collect();
    for (k, n) in [(1, 3), (2, 4), (2, 5), (3, 5)] {
        out.push(Target::grassmannian(k, n).unwrap());
    }
    out.push(Target::toric("P1xP1", &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]], &[1, 1]).unwrap());
    out
}

fn box_vectors(r: usize, b: i64) -> Vec<Vec<i64>> {
    let side = (2 * b + 1) as usize;
    (0..side.pow(r as u32))
        .map(|code| (0..r).map(|i| (code / side.pow(i as u32) % side) as i64 - b).collect())
        .collect()
}

#[test]
fn fixed_dimensions_are_weyl_invariant_and_nonnegative() {
    for t in presets() {
        for beta_t in box_vectors(t.rank(), 3) {
            if !is_effective(&t, &beta_t) {
                continue;
            }
            let c = dim_fixed_component(&t, &beta_t).unwrap();
            assert!(c.dim_f >= 0, "{} {beta_t:?}", t.name());
            assert!(c.dim_p >= t.rank());
            for g in t.weyl_gens() {
                let image = mat_vec(g, &beta_t);
                assert!(is_effective(&t, &image));
                assert_eq!(dim_fixed_component(&t, &image).unwrap().dim_f, c.dim_f);
            }
            assert!(weyl_orbit(&t, &beta_t).contains(&beta_t));
        }
    }
}

#[test]
fn grassmannian_fixed_loci_match_block_triangular_quotient() {
    // Full-rank k×n matrices modulo block upper triangular matrices, one
    // block per run of equal d_i.
    for (k, n) in [(2, 4), (2, 5), (3, 5), (3, 6)] {
        let t = Target::grassmannian(k, n).unwrap();
        for d in 0..=3 {
            for beta_t in enumerate_effective(&t, &[d], None).unwrap() {
                let mut blocks: Vec<usize> = Vec::new();
                let mut sorted = beta_t.clone();
                sorted.sort();
                for w in sorted.chunk_by(|a, b| a == b) {
                    blocks.push(w.len());
                }
                let mut u_dim = 0;
                let mut seen = 0;
                for b in &blocks {
                    u_dim += b * b + b * seen;
                    seen += b;
                }
                let c = dim_fixed_component(&t, &beta_t).unwrap();
                assert_eq!(c.dim_f as usize, k * n - u_dim, "Gr({k},{n}) {beta_t:?}");
            }
        }
    }
}
