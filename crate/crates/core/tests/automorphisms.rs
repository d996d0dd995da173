use conserv::automorphisms::{
    center_check, direct_product_check, enumerate_automorphisms, enumerate_isomorphisms, family, family_completeness,
    family_for, identity_params, invariant_conjugation_check, semidirect_structure_check, verify_family,
    verify_group_law, EnumerationMode, Orientation, DEFAULT_BUDGET,
};
use conserv::kantor::InvariantSet;
use conserv::{catalog, CatalogName, Error, FieldSpec, LinearOp, Matrix, Scalar, StructureAlgebra, Subspace, Vector};

fn f(s: &str) -> FieldSpec {
    s.parse().unwrap()
}

fn params(field: FieldSpec, v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&c| field.from_i64(c)).collect()
}

/// θ(e_i e_j) = θ(e_i) θ(e_j) on every basis pair, by direct multiplication.
fn preserves_products(a: &StructureAlgebra, theta: &LinearOp) -> bool {
    theta.det().inv().is_some()
        && (0..a.dim()).all(|i| {
            (0..a.dim()).all(|j| {
                let (x, y) = (a.basis_vector(i), a.basis_vector(j));
                theta.apply(&a.multiply(&x, &y).unwrap())
                    == a.multiply(&theta.apply(&x), &theta.apply(&y)).unwrap()
            })
        })
}

#[test]
fn printed_members_at_known_points() {
    let q = f("Q");
    let w = family("w").unwrap();
    assert_eq!(w.printed(q, &params(q, &[1, 0])).unwrap(), Matrix::identity(q, 4));

    let f5 = f("F5");
    let m = w.printed(f5, &params(f5, &[2, 1])).unwrap();
    // μ = 1 gives row 1 = (1, 0, μ, 3μ²/4) and 3/4 = 2 in F5.
    assert_eq!(m.row(0), Vector::from_i64(f5, &[1, 0, 1, 2]));

    let f2 = f("F2");
    let omega = family("Omega").unwrap();
    assert_eq!(omega.printed(f2, &params(f2, &[1, 0, 1, 0])).unwrap(), Matrix::identity(f2, 8));
}

#[test]
fn families_reject_wrong_characteristic_and_parameters() {
    let w = family("w").unwrap();
    assert!(matches!(w.printed(f("F3"), &params(f("F3"), &[1, 0])), Err(Error::Characteristic { .. })));
    assert!(w.printed(f("Q"), &params(f("Q"), &[0, 1])).is_err());
    assert!(w.printed(f("Q"), &params(f("Q"), &[1])).is_err());
    assert!(family("nope").is_err());
    assert!(family_for(CatalogName::S2, 3).is_some_and(|fam| fam.name == "w3"));
    assert!(family_for(CatalogName::W2x2, 2).is_some_and(|fam| fam.name == "Omega"));
}

#[test]
fn verified_members_really_are_automorphisms() {
    for (name, field) in [("w", "F5"), ("w2", "F2"), ("w3", "F3"), ("M_abc", "F3"), ("w_xt", "F5"), ("Omega", "F2")] {
        let rf = family(name).unwrap().resolve(f(field)).unwrap();
        let r = verify_family(&rf, 0, 0).unwrap();
        assert!(r.passed() && r.exhaustive, "{name}/{field}: {:?}", r.failures);
        for theta in rf.image().unwrap() {
            assert!(preserves_products(rf.algebra(), &theta), "{name}/{field}");
        }
    }
    assert_eq!(verify_family(&family("w").unwrap().resolve(f("F5")).unwrap(), 0, 0).unwrap().members_checked, 20);
    assert_eq!(verify_family(&family("M_abc").unwrap().resolve(f("F3")).unwrap(), 0, 0).unwrap().members_checked, 12);
}

#[test]
fn rational_families_pass_on_samples() {
    for name in ["w", "w_xt", "W2x2_xt"] {
        let rf = family(name).unwrap().resolve(f("Q")).unwrap();
        let r = verify_family(&rf, 30, 11).unwrap();
        assert!(r.passed() && !r.exhaustive, "{name}");
        assert_eq!(r.members_checked, 30);
        assert!(verify_group_law(&rf, 15, 11).unwrap().passed(), "{name}");
    }
}

#[test]
fn printed_families_are_in_row_orientation() {
    let rf = family("w").unwrap().resolve(f("Q")).unwrap();
    assert_eq!(rf.orientation, Orientation::Row);
    let p = params(f("Q"), &[3, 2]);
    assert_eq!(rf.member(&p).unwrap(), rf.printed(&p).unwrap().transpose());
}

#[test]
fn corrupted_entry_is_caught() {
    let f3 = f("F3");
    let rf = family("w3").unwrap().resolve(f3).unwrap();
    let bad = rf.with_entry_negated(1, 0);
    let r = verify_family(&bad, 0, 0).unwrap();
    assert!(!r.passed());
    // Members with μ = 0 are untouched by the corruption.
    assert_eq!(r.failures.len(), 2 * 2);
    assert!(r.failures.iter().all(|m| m.params[1] != "0" && m.reason.contains("θ(e")));
}

#[test]
fn group_laws_hold_exhaustively() {
    let rf = family("w").unwrap().resolve(f("F5")).unwrap();
    let r = verify_group_law(&rf, 0, 0).unwrap();
    assert!(r.passed() && r.exhaustive);
    assert_eq!(r.pairs_checked, 400);
    assert_eq!(r.inverses_checked, 20);
    for name in ["w2", "w3", "M_abc", "Omega", "M_abck"] {
        let fam = family(name).unwrap();
        let field = if fam.characteristic.holds(2) { f("F2") } else { f("F3") };
        assert!(verify_group_law(&fam.resolve(field).unwrap(), 0, 0).unwrap().passed(), "{name}");
    }
}

#[test]
fn identity_parameters_give_the_identity() {
    for fam in conserv::automorphisms::families() {
        let field = [f("F2"), f("F3"), f("F5")]
            .into_iter()
            .find(|fs| fam.characteristic.holds(fs.characteristic()))
            .unwrap();
        let rf = fam.resolve(field).unwrap();
        let id = rf.member(&identity_params(&fam, field)).unwrap();
        assert_eq!(id, Matrix::identity(field, fam.dim()), "{}", fam.name);
    }
}

#[test]
fn enumeration_modes_agree() {
    let f2 = f("F2");
    let s2 = catalog(CatalogName::S2, f2).unwrap();
    let full = enumerate_automorphisms(&s2, EnumerationMode::Full, DEFAULT_BUDGET).unwrap();
    let dfs = enumerate_automorphisms(&s2, EnumerationMode::Dfs, DEFAULT_BUDGET).unwrap();
    assert_eq!(full.automorphisms, dfs.automorphisms);
    assert_eq!(dfs.automorphisms.len(), 2);
    assert!(dfs.nodes < full.nodes);

    let s3 = catalog(CatalogName::S2, f("F3")).unwrap();
    let dfs = enumerate_automorphisms(&s3, EnumerationMode::Dfs, DEFAULT_BUDGET).unwrap();
    assert_eq!(dfs.automorphisms.len(), 6);
    assert!(dfs.automorphisms.iter().all(|m| preserves_products(&s3, m)));

    let w = catalog(CatalogName::W2x2, f2).unwrap();
    assert!(enumerate_automorphisms(&w, EnumerationMode::Full, DEFAULT_BUDGET).is_err());
    assert_eq!(enumerate_automorphisms(&w, EnumerationMode::Dfs, DEFAULT_BUDGET).unwrap().automorphisms.len(), 4);
}

#[test]
fn tiny_budget_is_reported() {
    let w = catalog(CatalogName::W2, f("F3")).unwrap();
    let err = enumerate_automorphisms(&w, EnumerationMode::Dfs, 3).unwrap_err();
    assert!(matches!(err, Error::BudgetExceeded { budget: 3, .. }));
}

#[test]
fn families_are_complete_over_small_fields() {
    for (name, field, order) in [
        ("w2", "F2", 2),
        ("w3", "F3", 6),
        ("w", "F5", 20),
        ("M_abc", "F3", 12),
        ("w_xt", "F5", 20),
        ("Omega", "F2", 4),
        ("M_abck", "F3", 36),
    ] {
        let rf = family(name).unwrap().resolve(f(field)).unwrap();
        let r = family_completeness(&rf, DEFAULT_BUDGET).unwrap();
        assert!(r.passed(), "{name}/{field}: {r:?}");
        assert_eq!(r.enumerated, order, "{name}/{field}");
        assert_eq!((r.missing, r.extra), (0, 0));
    }
    let rf = family("w").unwrap().resolve(f("Q")).unwrap();
    assert!(family_completeness(&rf, DEFAULT_BUDGET).is_err());
}

#[test]
fn group_structure_checks() {
    assert!(semidirect_structure_check(f("F2")).unwrap().passed());
    assert!(direct_product_check(f("F3")).unwrap().passed());
    assert!(center_check(f("F3")).unwrap().passed());
    assert!(semidirect_structure_check(f("F3")).is_err());
    assert!("F4".parse::<FieldSpec>().is_err());
}

#[test]
fn invariants_survive_automorphisms() {
    let f5 = f("F5");
    let rf = family("w_xt").unwrap().resolve(f5).unwrap();
    let autos = rf.image().unwrap();
    let r = invariant_conjugation_check(rf.algebra(), &autos, 50, 3, Some(InvariantSet::W2)).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.pairs, 20 * 50);

    let f3 = f("F3");
    let w = catalog(CatalogName::W2x2, f3).unwrap();
    let autos = enumerate_automorphisms(&w, EnumerationMode::Dfs, DEFAULT_BUDGET).unwrap().automorphisms;
    assert_eq!(autos.len(), 36);
    assert!(invariant_conjugation_check(&w, &autos, 20, 5, None).unwrap().passed());
}

#[test]
fn isomorphisms_to_a_basis_change_match_the_automorphism_count() {
    let f3 = f("F3");
    let a = catalog(CatalogName::W2, f3).unwrap();
    let p = Matrix::from_i64_rows(
        f3,
        &[
            vec![1, 1, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 0],
            vec![0, 0, 1, 0, 2, 0],
            vec![0, 0, 0, 1, 0, 0],
            vec![0, 0, 0, 0, 1, 0],
            vec![0, 0, 0, 1, 0, 1],
        ],
    );
    let b = a.change_basis(&p).unwrap();
    let isos = enumerate_isomorphisms(&a, &b, DEFAULT_BUDGET).unwrap();
    assert_eq!(isos.len(), 12);
    for m in &isos {
        assert!(a.verify_homomorphism(&b, m).unwrap().passed());
    }
    assert!(enumerate_isomorphisms(&a, &catalog(CatalogName::W2, f("F5")).unwrap(), DEFAULT_BUDGET).is_err());
}

#[test]
fn w2x2_mod_its_radical_action_is_not_w2_in_characteristic_3() {
    // The 6-dimensional quotient of W(2)/F3 by the span of e1+e5, e3+e6
    // is checked against W2/F3 and no isomorphism exists.
    let f3 = f("F3");
    let w = catalog(CatalogName::W2x2, f3).unwrap();
    let ideal = Subspace::span(
        f3,
        8,
        [Vector::from_i64(f3, &[1, 0, 0, 0, 1, 0, 0, 0]), Vector::from_i64(f3, &[0, 0, 1, 0, 0, 1, 0, 0])],
    );
    let q = w.quotient_by_ideal(&ideal).unwrap();
    assert_eq!(q.algebra.dim(), 6);
    let w2 = catalog(CatalogName::W2, f3).unwrap();
    assert!(enumerate_isomorphisms(&q.algebra, &w2, DEFAULT_BUDGET).unwrap().is_empty());
}
