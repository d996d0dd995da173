use conserv::{FieldSpec, Matrix, Subspace, Vector};
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(FieldSpec::Prime(2)),
        Just(FieldSpec::Prime(3)),
        Just(FieldSpec::Prime(7)),
        Just(FieldSpec::Prime(101)),
    ]
}

fn matrix(field: FieldSpec, rows: usize, cols: usize, e: &[i64]) -> Matrix {
    let rows: Vec<Vec<i64>> = (0..rows).map(|i| e[i * cols..(i + 1) * cols].to_vec()).collect();
    Matrix::from_i64_rows(field, &rows)
}

#[test]
fn composite_and_unknown_fields_are_rejected() {
    for bad in ["F4", "F9", "F1", "F0"] {
        let err = bad.parse::<FieldSpec>().unwrap_err().to_string();
        assert!(err.contains("only prime fields"), "{bad}: {err}");
    }
    assert!("GF(4)".parse::<FieldSpec>().is_err());
    assert!("R".parse::<FieldSpec>().is_err());
}

#[test]
fn residues_are_canonical() {
    let f5 = FieldSpec::Prime(5);
    assert_eq!(f5.from_i64(-3).to_string(), "2");
    assert_eq!(f5.frac(3, 4).unwrap().to_string(), "2");
    assert!(f5.frac(1, 5).is_err());
    assert_eq!(f5.units().unwrap().len(), 4);
}

proptest! {
    #[test]
    fn field_axioms(field in field_strategy(), a in -50i64..50, b in -50i64..50, c in -50i64..50) {
        let (a, b, c) = (field.from_i64(a), field.from_i64(b), field.from_i64(c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a - &a).is_zero());
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn rank_nullity(field in field_strategy(), e in proptest::collection::vec(-4i64..5, 20), r in 1usize..5) {
        let cols = 20 / r;
        let m = matrix(field, r, cols, &e[..r * cols]);
        let null = m.nullspace();
        prop_assert_eq!(m.rank() + null.len(), m.cols());
        for v in &null {
            prop_assert!(m.apply(v).is_zero());
        }
    }

    #[test]
    fn solve_returns_a_solution(field in field_strategy(), e in proptest::collection::vec(-4i64..5, 16), x in proptest::collection::vec(-4i64..5, 4)) {
        let m = matrix(field, 4, 4, &e);
        let b = m.apply(&Vector::from_i64(field, &x));
        let sol = m.solve(&b).expect("b is in the image");
        prop_assert_eq!(m.apply(&sol), b);
    }

    #[test]
    fn inverse_and_determinant(field in field_strategy(), e in proptest::collection::vec(-4i64..5, 16), g in proptest::collection::vec(-4i64..5, 16)) {
        let a = matrix(field, 4, 4, &e);
        let b = matrix(field, 4, 4, &g);
        prop_assert_eq!(a.mul(&b).det(), &a.det() * &b.det());
        match a.inverse() {
            Some(inv) => {
                prop_assert_eq!(a.mul(&inv), Matrix::identity(field, 4));
                prop_assert!(!a.det().is_zero());
            }
            None => prop_assert!(a.det().is_zero()),
        }
    }

    #[test]
    fn charpoly_matches_det_at_sample_points(field in field_strategy(), e in proptest::collection::vec(-4i64..5, 9), t in -5i64..6) {
        let a = matrix(field, 3, 3, &e);
        let cp = a.charpoly();
        prop_assert_eq!(cp.len(), 4);
        prop_assert!(cp[3].is_one());
        let tv = field.from_i64(t);
        let value = cp.iter().rev().fold(field.zero(), |acc, c| &(&acc * &tv) + c);
        let shifted = Matrix::identity(field, 3).scale(&tv).sub(&a);
        prop_assert_eq!(value, shifted.det());
    }

    #[test]
    fn subspace_equality_ignores_spanning_set(field in field_strategy(), e in proptest::collection::vec(-4i64..5, 15), k in -3i64..4) {
        let vs: Vec<Vector> = (0..3).map(|i| Vector::from_i64(field, &e[i * 5..(i + 1) * 5])).collect();
        let s1 = Subspace::span(field, 5, vs.clone());
        let mixed = vec![vs[0].add(&vs[1].scale(&field.from_i64(k))), vs[1].clone(), vs[2].clone(), vs[0].clone()];
        let s2 = Subspace::span(field, 5, mixed);
        prop_assert_eq!(&s1, &s2);
        for v in &vs {
            prop_assert!(s1.contains_vector(v));
        }
    }
}
