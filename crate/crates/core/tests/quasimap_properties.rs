use num_bigint::BigInt;
use proptest::prelude::*;
use qmap_core::quasimap::{PolyQuasimap, QuasimapTarget};
use qmap_core::{Form, Quasimap, Rat, Scalar};

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn form(d: u32) -> impl Strategy<Value = Form> {
    prop::collection::vec(-2i64..=2, d as usize + 1).prop_map(|c| Form::from_ints(&c))
}

/// Forms with a shared factor so basepoints actually occur.
fn pn_quasimap() -> impl Strategy<Value = Quasimap> {
    (1usize..=3, 0u32..=2, 0u32..=2).prop_flat_map(|(n, base_deg, free_deg)| {
        (form(base_deg), prop::collection::vec(form(free_deg), n + 1)).prop_filter_map("prestable", move |(b, fs)| {
            let row: Vec<Form> = fs.iter().map(|f| f.mul(&b)).collect();
            let q = PolyQuasimap::new(QuasimapTarget::Pn { n }, vec![base_deg + free_deg], vec![row], vec![]).ok()?;
            q.is_prestable().then_some(q)
        })
    })
}

fn gr_quasimap() -> impl Strategy<Value = Quasimap> {
    (2usize..=3, prop::collection::vec(0u32..=2, 2)).prop_flat_map(|(n, degs)| {
        let rows: Vec<_> = degs.iter().map(|&d| prop::collection::vec(form(d), n)).collect();
        (Just(degs), rows).prop_filter_map("prestable", move |(degs, rows)| {
            let q = PolyQuasimap::new(QuasimapTarget::Gr { k: 2, n }, degs, rows, vec![]).ok()?;
            q.is_prestable().then_some(q)
        })
    })
}

fn sorted_lengths(q: &Quasimap) -> Vec<(u32, u32)> {
    let mut v: Vec<(u32, u32)> = q.basepoint_divisor().unwrap().points.iter().map(|(f, l)| (f.degree(), *l)).collect();
    v.sort();
    v
}

proptest! {
    #[test]
    fn scaling_invariance(q in pn_quasimap(), n in prop_oneof![-5i64..=-1, 1i64..=5], d in 1i64..=4) {
        let s = q.scaled(&rat(n, d));
        prop_assert_eq!(s.basepoint_divisor().unwrap(), q.basepoint_divisor().unwrap());
        prop_assert_eq!(s.is_constant_map().unwrap(), q.is_constant_map().unwrap());
        prop_assert_eq!(s.epsilon_stability_range().unwrap(), q.epsilon_stability_range().unwrap());
    }

    #[test]
    fn length_bounded_by_degree(q in pn_quasimap()) {
        prop_assert!(q.basepoint_divisor().unwrap().total_length() <= q.degree());
    }

    #[test]
    fn grassmannian_length_bounded_by_degree(q in gr_quasimap()) {
        prop_assert!(q.basepoint_divisor().unwrap().total_length() <= q.degree());
    }

    #[test]
    fn left_multiplication_invariance(
        q in gr_quasimap(),
        diag in prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 2),
        off in prop::collection::vec(-2i64..=2, 3),
    ) {
        let d = q.row_degrees().to_vec();
        let entry = |l: usize, i: usize| -> Form {
            if l == i {
                return Form::constant(Rat::from_int(diag[l]));
            }
            if d[l] < d[i] || (d[l] == d[i] && l < i) {
                return Form::zero(d[l].saturating_sub(d[i]));
            }
            let deg = d[l] - d[i];
            let coeffs: Vec<i64> = (0..=deg as usize).map(|j| off[j % off.len()]).collect();
            Form::from_ints(&coeffs)
        };
        let a = vec![vec![entry(0, 0), entry(0, 1)], vec![entry(1, 0), entry(1, 1)]];
        let moved = q.left_multiplied(&a).unwrap();
        prop_assert_eq!(moved.basepoint_divisor().unwrap(), q.basepoint_divisor().unwrap());
    }

    #[test]
    fn coordinate_change_invariance(
        q in pn_quasimap(),
        m in prop::collection::vec(-2i64..=2, 4).prop_filter("invertible", |m| m[0] * m[3] != m[1] * m[2]),
        marks in prop::collection::vec((-3i64..=3, 1i64..=3), 0..3),
    ) {
        let marks: Vec<Form> = marks
            .iter()
            .map(|&(a, b)| Form::vanishing_at(&Rat::from_int(a), &Rat::from_int(b)).unwrap())
            .collect();
        let with_marks = PolyQuasimap::new(q.target(), q.row_degrees().to_vec(), q.entries().to_vec(), marks);
        prop_assume!(with_marks.is_ok());
        let q = with_marks.unwrap();
        prop_assume!(q.is_prestable());
        let [a, b, c, d] = [m[0], m[1], m[2], m[3]].map(Rat::from_int);
        let moved = q.reparametrized(&a, &b, &c, &d).unwrap();
        prop_assert!(moved.is_prestable());
        prop_assert_eq!(sorted_lengths(&moved), sorted_lengths(&q));
        prop_assert_eq!(moved.epsilon_stability_range().unwrap(), q.epsilon_stability_range().unwrap());
        prop_assert_eq!(moved.is_constant_map().unwrap(), q.is_constant_map().unwrap());
    }
}
