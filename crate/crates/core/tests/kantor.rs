use conserv::kantor::{
    build_w, build_w2, change_to_e_basis, charpoly_invariants, charpoly_of_left_mult, check_conservative_identity,
    check_terminal, conservativity_witness, e_basis_matrix, map_bracket, terminal_product, BilinearMap,
    ConservativityOutcome, InvariantNormalization, InvariantSet,
};
use conserv::{catalog, CatalogName, FieldSpec, Matrix, Scalar, StructureAlgebra, Vector};
use proptest::prelude::*;

fn f(s: &str) -> FieldSpec {
    s.parse().unwrap()
}

/// Trace of L_{e_i} read straight off the structure constants.
fn left_trace(a: &StructureAlgebra, i: usize) -> Scalar {
    (0..a.dim()).fold(a.field().zero(), |acc, k| &acc + a.coeff(i, k, k))
}

#[test]
fn bracket_with_identity_and_zero() {
    let q = f("Q");
    let b = BilinearMap::of_algebra(&catalog(CatalogName::S2, q).unwrap());
    let minus_one = q.from_i64(-1);
    assert_eq!(map_bracket(&Matrix::identity(q, 4), &b).unwrap(), b.scale(&minus_one));
    assert!(map_bracket(&Matrix::zero(q, 4, 4), &b).unwrap().is_zero());
    assert!(map_bracket(&Matrix::identity(q, 3), &b).is_err());
}

#[test]
fn bracket_on_the_plane_by_hand() {
    // T = E11 projects onto v1; B = α_{11}^1 + α_{12}^2.
    let q = f("Q");
    let t = Matrix::from_i64_rows(q, &[vec![1, 0], vec![0, 0]]);
    let b = BilinearMap::alpha(q, 2, 0, 0, 0).add(&BilinearMap::alpha(q, 2, 0, 1, 1));
    let r = map_bracket(&t, &b).unwrap();
    // (v1,v1): T v1 − B(v1,v1) − B(v1,v1) = v1 − 2v1 = −v1.
    // (v1,v2): T v2 − B(v1,v2) − 0 = 0 − v2 = −v2.
    // (v2,*): B vanishes and T v2 = 0, so everything is zero.
    let expected = BilinearMap::alpha(q, 2, 0, 0, 0)
        .add(&BilinearMap::alpha(q, 2, 0, 1, 1))
        .scale(&q.from_i64(-1));
    assert_eq!(r, expected);
}

#[test]
fn rebuilt_w2_is_the_catalog_algebra() {
    for field in ["Q", "F5", "F7"] {
        let fs = f(field);
        let k = build_w2(fs);
        assert_eq!(k.algebra.dim(), 8);
        let rebuilt = change_to_e_basis(&k).unwrap();
        let cat = catalog(CatalogName::W2x2, fs).unwrap();
        assert!(rebuilt.table_differences(&cat).is_empty(), "{field}");
    }
    assert_eq!(e_basis_matrix(f("Q")).det(), f("Q").from_i64(36));
    assert!(change_to_e_basis(&build_w2(f("F3"))).is_err());
    assert!(change_to_e_basis(&build_w(1, f("Q"))).is_err());
}

#[test]
fn w1_is_one_dimensional_and_nonzero() {
    let k = build_w(1, f("Q"));
    assert_eq!(k.algebra.dim(), 1);
    // [L_{v1}, α] = [id, α] = −α.
    assert_eq!(k.algebra.coeff(0, 0, 0), &f("Q").from_i64(-1));
}

#[test]
fn conservativity_witnesses_verify() {
    for (name, field) in [(CatalogName::W2, "Q"), (CatalogName::W2, "F5"), (CatalogName::W2x2, "Q"), (CatalogName::S2, "F7")] {
        let a = catalog(name, f(field)).unwrap();
        match conservativity_witness(&a) {
            ConservativityOutcome::Witness(fm) => {
                let r = check_conservative_identity(&a, &fm);
                assert!(r.passed(), "{name}/{field}: {:?}", &r.violations[..r.violations.len().min(5)]);
                assert_eq!(r.checked, a.dim().pow(4));
            }
            other => panic!("{name}/{field}: {other:?}"),
        }
    }
    let z = StructureAlgebra::zero(f("Q"), 3);
    assert!(matches!(conservativity_witness(&z), ConservativityOutcome::Witness(m) if m.is_zero()));
}

#[test]
fn terminal_product_on_s2_by_substitution() {
    let q = f("Q");
    let a = catalog(CatalogName::S2, q).unwrap();
    let fm = terminal_product(&a).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let (x, y) = (a.basis_vector(i), a.basis_vector(j));
            let two_ab = a.multiply(&x, &y).unwrap().scale(&q.from_i64(2));
            let expected = two_ab.add(&a.multiply(&y, &x).unwrap()).scale(&q.frac(1, 3).unwrap());
            assert_eq!(fm.eval(&x, &y), expected);
        }
    }
}

#[test]
fn terminal_identity_holds_where_three_is_invertible() {
    for name in [CatalogName::S2, CatalogName::W2] {
        for field in ["Q", "F2", "F5", "F7"] {
            let r = check_terminal(&catalog(name, f(field)).unwrap()).unwrap();
            assert!(r.passed(), "{name}/{field}");
        }
        assert!(check_terminal(&catalog(name, f("F3")).unwrap()).is_err());
    }
}

#[test]
fn perturbed_table_breaks_the_terminal_identity() {
    let q = f("Q");
    let mut a = catalog(CatalogName::S2, q).unwrap();
    let old = a.coeff(0, 1, 2).clone();
    a.set_coeff(0, 1, 2, &old + &q.one());
    let r = check_terminal(&a).unwrap();
    assert!(!r.passed());
    assert!(r.violations.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn invariants_at_a_basis_vector() {
    let q = f("Q");
    let w2 = catalog(CatalogName::W2, q).unwrap();
    let e5 = w2.basis_vector(4);
    let ell = charpoly_invariants("W2", &e5).unwrap();
    assert_eq!(ell[0], q.from_i64(9));
    assert_eq!(ell[0], -&left_trace(&w2, 4));

    let w = catalog(CatalogName::W2x2, q).unwrap();
    let lam = charpoly_invariants("W(2)", &w.basis_vector(4)).unwrap();
    assert_eq!(lam[0], q.from_i64(12));
    assert_eq!(lam[0], -&left_trace(&w, 4));

    assert!(charpoly_invariants("W2", &Vector::zero(q, 6)).unwrap().iter().all(Scalar::is_zero));
    assert!(charpoly_invariants("W2", &Vector::zero(q, 8)).is_err());
    assert!(charpoly_invariants("S2", &Vector::zero(q, 4)).is_err());
}

#[test]
fn charpoly_of_zero_vector_is_a_power_of_t() {
    let q = f("Q");
    let a = catalog(CatalogName::W2, q).unwrap();
    let cp = charpoly_of_left_mult(&a, &a.zero_vector()).unwrap();
    assert_eq!(cp.len(), 7);
    assert!(cp[..6].iter().all(Scalar::is_zero) && cp[6].is_one());
}

#[test]
fn persisted_normalization_predicts_the_invariants() {
    let norm = InvariantNormalization::persisted();
    for (set, name) in [(InvariantSet::W2, CatalogName::W2), (InvariantSet::W2x2, CatalogName::W2x2)] {
        assert_eq!(norm.maps[&set].len(), set.count());
        for field in ["Q", "F7", "F101"] {
            let a = catalog(name, f(field)).unwrap();
            for s in 0..5i64 {
                let coords: Vec<i64> = (0..a.dim() as i64).map(|i| (i * 7 + s * 3) % 11 - 5).collect();
                let w = Vector::from_i64(a.field(), &coords);
                let cp = charpoly_of_left_mult(&a, &w).unwrap();
                let label = if set == InvariantSet::W2 { "W2" } else { "W2x2" };
                assert_eq!(norm.apply(set, &cp), charpoly_invariants(label, &w).unwrap(), "{name}/{field}");
            }
        }
    }
}

proptest! {
    #[test]
    fn charpoly_is_invariant_under_basis_change(coords in proptest::collection::vec(-5i64..6, 6)) {
        // Isomorphic algebras give the same charpoly at matching points.
        let q = f("Q");
        let a = catalog(CatalogName::W2, q).unwrap();
        let p = Matrix::from_i64_rows(q, &[
            vec![1, 1, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 0],
            vec![0, 0, 1, 0, 2, 0],
            vec![0, 0, 0, 1, 0, 0],
            vec![0, 0, 0, 0, 1, 0],
            vec![0, 0, 0, 3, 0, 1],
        ]);
        let b = a.change_basis(&p).unwrap();
        let w = Vector::from_i64(q, &coords);
        let pinv = p.inverse().unwrap();
        let in_b = pinv.apply(&w);
        prop_assert_eq!(charpoly_of_left_mult(&a, &w).unwrap(), charpoly_of_left_mult(&b, &in_b).unwrap());
    }
}
