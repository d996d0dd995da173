use std::collections::BTreeSet;

use conserv::graph::{
    build_graph, export_dot, ideals_from_fixed_points, simplicity_lemma_check, BasisGraph, DotStyle, Side,
    SimplicityVerdict,
};
use conserv::{catalog, CatalogName, FieldSpec, StructureAlgebra, Subspace};
use proptest::prelude::*;

fn f(s: &str) -> FieldSpec {
    s.parse().unwrap()
}

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().map(|i| i - 1).collect()
}

#[test]
fn s2_over_q_reaches_like_the_figure() {
    let g = build_graph(&catalog(CatalogName::S2, f("Q")).unwrap());
    let figure = BasisGraph::from_edges(4, &[(1, 2), (2, 3), (3, 1), (3, 4), (4, 3)]);
    assert_eq!(g.reachability(), figure.reachability());
    assert!(g.is_strongly_connected());
}

#[test]
fn s2_over_f3_reaches_like_the_figure() {
    let g = build_graph(&catalog(CatalogName::S2, f("F3")).unwrap());
    let figure = BasisGraph::from_edges(4, &[(3, 1), (1, 3), (4, 3), (2, 3), (2, 1)]);
    assert_eq!(g.reachability(), figure.reachability());
    assert!(!g.is_strongly_connected());
}

#[test]
fn connectivity_of_w2() {
    assert!(build_graph(&catalog(CatalogName::W2, f("F5")).unwrap()).is_strongly_connected());
    assert!(!build_graph(&catalog(CatalogName::W2, f("F3")).unwrap()).is_strongly_connected());
    assert!(BasisGraph::new(1).is_strongly_connected());
    assert_eq!(build_graph(&StructureAlgebra::zero(f("Q"), 3)).edge_count(), 0);
}

#[test]
fn tree_closures_on_s2_over_f3() {
    let g = build_graph(&catalog(CatalogName::S2, f("F3")).unwrap());
    assert_eq!(g.tree_closure(&set(&[4])), set(&[1, 3, 4]));
    assert_eq!(g.tree_closure(&set(&[1])), set(&[1, 3]));
    assert_eq!(g.tree_closure(&set(&[1, 2, 3, 4])), set(&[1, 2, 3, 4]));
}

#[test]
fn fixed_points_of_s2_over_f3() {
    let g = build_graph(&catalog(CatalogName::S2, f("F3")).unwrap());
    let expected: Vec<BTreeSet<usize>> = vec![set(&[]), set(&[1, 3]), set(&[1, 2, 3]), set(&[1, 3, 4]), set(&[1, 2, 3, 4])];
    assert_eq!(g.tree_fixed_points().unwrap(), expected);
    let strongly = build_graph(&catalog(CatalogName::S2, f("F5")).unwrap());
    assert_eq!(strongly.tree_fixed_points().unwrap(), vec![set(&[]), set(&[1, 2, 3, 4])]);
}

#[test]
fn ideals_from_fixed_points_verify() {
    let ideals = ideals_from_fixed_points(&catalog(CatalogName::S2, f("F3")).unwrap()).unwrap();
    assert_eq!(ideals.len(), 3);
    assert!(ideals.iter().all(|i| i.verified));
    assert!(ideals_from_fixed_points(&catalog(CatalogName::S2, f("Q")).unwrap())
        .unwrap()
        .is_empty());

    let f3 = f("F3");
    let w2 = catalog(CatalogName::W2, f3).unwrap();
    let ideals = ideals_from_fixed_points(&w2).unwrap();
    let five = ideals
        .iter()
        .find(|i| i.vertices == vec![1, 3, 4, 5, 6])
        .expect("5-dim ideal present");
    assert!(five.verified);
    let span = Subspace::span(f3, 6, [0, 2, 3, 4, 5].map(|i| w2.basis_vector(i)));
    let q = w2.quotient_by_ideal(&span).unwrap();
    assert_eq!(q.algebra.dim(), 1);
    assert!(q.algebra.is_zero_product());
}

#[test]
fn fixed_points_are_ideals_across_the_catalog() {
    for name in [CatalogName::S2, CatalogName::W2, CatalogName::W2x2] {
        for field in ["Q", "F2", "F3", "F5", "F7"] {
            for i in ideals_from_fixed_points(&catalog(name, f(field)).unwrap()).unwrap() {
                assert!(i.verified, "{name}/{field} {:?}", i.vertices);
            }
        }
    }
}

#[test]
fn edges_are_sound() {
    for name in [CatalogName::S2, CatalogName::W2, CatalogName::W2x2] {
        for field in ["Q", "F2", "F3"] {
            let a = catalog(name, f(field)).unwrap();
            let g = build_graph(&a);
            for (i, j, p) in g.edges() {
                let p = p.expect("built graphs carry provenance");
                let product = match p.side {
                    Side::Right => a.product(i, p.multiplier),
                    Side::Left => a.product(p.multiplier, i),
                };
                assert!(!product[j].is_zero(), "{name}/{field} e{} -> e{}", i + 1, j + 1);
            }
        }
    }
}

#[test]
fn lemma_certificates() {
    let c = simplicity_lemma_check(&catalog(CatalogName::S2, f("F5")).unwrap()).unwrap();
    assert!(c.is_simple());
    assert!(c.exhaustive && c.strongly_connected);
    assert_eq!(c.scanned, (5u64.pow(4) - 1) / 4);
    assert_eq!(c.witnesses.iter().map(|w| w.count).sum::<u64>(), c.scanned);

    let c = simplicity_lemma_check(&catalog(CatalogName::S2, f("F3")).unwrap()).unwrap();
    assert!(!c.strongly_connected);
    assert!(!c.is_simple());

    let f2 = f("F2");
    let w = catalog(CatalogName::W2x2, f2).unwrap();
    let c = simplicity_lemma_check(&w).unwrap();
    match &c.verdict {
        SimplicityVerdict::NotSimple { ideal } => assert!(!ideal.is_empty() && ideal.len() < 8),
        other => panic!("expected an ideal, got {other:?}"),
    }

    let w2 = simplicity_lemma_check(&catalog(CatalogName::W2, f("F3")).unwrap()).unwrap();
    assert!(matches!(w2.verdict, SimplicityVerdict::NotSimple { .. }));
    assert!(simplicity_lemma_check(&StructureAlgebra::zero(f2, 2)).is_err());
}

#[test]
fn rational_lemma_runs_on_a_reduction() {
    let c = simplicity_lemma_check(&catalog(CatalogName::S2, f("Q")).unwrap()).unwrap();
    assert!(c.is_simple());
    assert_eq!(c.reduced_mod, Some(5));
}

#[test]
fn dot_export() {
    let empty = export_dot(&BasisGraph::new(1), "G", DotStyle::Full);
    assert_eq!(empty, "digraph G {\n  e1;\n}\n");
    let s2 = build_graph(&catalog(CatalogName::S2, f("Q")).unwrap());
    let dot = export_dot(&s2, "S2", DotStyle::Simplified);
    assert_eq!(dot.matches("->").count(), 5);
    assert_eq!(dot.lines().filter(|l| l.trim_start().starts_with('e') && l.ends_with(';') && !l.contains("->")).count(), 4);
    for field in ["Q", "F2", "F3", "F5"] {
        let w = build_graph(&catalog(CatalogName::W2x2, f(field)).unwrap());
        let dot = export_dot(&w, "W2x2", DotStyle::Full);
        for v in 1..=8 {
            assert!(dot.contains(&format!("  e{v};")), "{field}");
        }
        assert_eq!(w.simplified().reachability(), w.reachability());
    }
}

fn random_graph() -> impl Strategy<Value = BasisGraph> {
    (1usize..9).prop_flat_map(|n| {
        proptest::collection::vec((1..=n, 1..=n), 0..20).prop_map(move |e| BasisGraph::from_edges(n, &e))
    })
}

proptest! {
    #[test]
    fn tree_closure_is_a_closure_operator(g in random_graph(), a in any::<u16>(), b in any::<u16>()) {
        let n = g.n();
        let s: BTreeSet<usize> = (0..n).filter(|i| a >> i & 1 == 1).collect();
        let t: BTreeSet<usize> = s.iter().copied().chain((0..n).filter(|i| b >> i & 1 == 1)).collect();
        let cs = g.tree_closure(&s);
        prop_assert!(s.is_subset(&cs));
        prop_assert!(cs.is_subset(&g.tree_closure(&t)));
        prop_assert_eq!(g.tree_closure(&cs), cs);
    }

    #[test]
    fn fixed_points_are_exactly_the_closed_sets(g in random_graph()) {
        let fixed = g.tree_fixed_points().unwrap();
        let n = g.n();
        for mask in 0u32..1 << n {
            let s: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            prop_assert_eq!(fixed.contains(&s), g.tree_closure(&s) == s);
        }
    }

    #[test]
    fn strong_connectivity_means_full_reachability(g in random_graph()) {
        let all = g.reachability().iter().all(|row| row.iter().all(|&b| b));
        prop_assert_eq!(g.is_strongly_connected(), all);
    }
}
