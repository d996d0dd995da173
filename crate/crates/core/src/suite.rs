//! The verification suite: one check per acceptance criterion, each with
//! exact expected and actual strings and per-step diagnostics.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::StructureAlgebra;
use crate::automorphisms::{
    center_check, direct_product_check, enumerate_automorphisms, enumerate_isomorphisms, families, family_completeness, family_for,
    identity_params, invariant_conjugation_check, semidirect_structure_check, verify_family, verify_group_law,
    EnumerationMode, DEFAULT_BUDGET,
};
use crate::catalog::{catalog, CatalogName};
use crate::derivation::{derivations, normalize_aff2, Aff2Normalization};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::graph::{build_graph, ideals_from_fixed_points, simplicity_lemma_check, BasisGraph, SimplicityVerdict};
use crate::kantor::{
    build_w2, change_to_e_basis, charpoly_invariants, charpoly_of_left_mult, check_conservative_identity,
    check_terminal, conservativity_witness, fit_normalization, ConservativityOutcome, InvariantNormalization,
    InvariantSet,
};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::mult_algebra::{
    generate_mult_algebra, radical_action_ideal, simplicity_by_dimension, trace_form_radical, verify_matrix_units,
    OperatorSubspace,
};
use crate::reference;

/// Number of acceptance criteria.
pub const CRITERIA: u8 = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub diagnostics: Vec<String>,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    /// No non-skipped check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, criterion: u8) -> Option<&Check> {
        self.checks.iter().find(|c| c.criterion == criterion)
    }

    /// JSON with every runtime zeroed, for comparing runs.
    pub fn without_runtimes(&self) -> VerificationReport {
        VerificationReport {
            checks: self
                .checks
                .iter()
                .map(|c| Check { runtime_ms: 0, ..c.clone() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A structure constant bumped by one before the suite loads the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogCorruption {
    pub algebra: CatalogName,
    /// 1-based (i, j, k): the coefficient of e_k in e_ie_j.
    pub entry: (usize, usize, usize),
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub corruption: Option<CatalogCorruption>,
    /// Criteria to run; all when `None`. The rest are reported as skipped.
    pub only: Option<BTreeSet<u8>>,
}

struct Ctx<'a> {
    opts: &'a SuiteOptions,
}

impl Ctx<'_> {
    fn load(&self, name: CatalogName, field: FieldSpec) -> Result<StructureAlgebra> {
        let mut a = catalog(name, field)?;
        if let Some(c) = self.opts.corruption.filter(|c| c.algebra == name) {
            let (i, j, k) = c.entry;
            let bumped = a.coeff(i - 1, j - 1, k - 1) + &field.one();
            a.set_coeff(i - 1, j - 1, k - 1, bumped);
        }
        Ok(a)
    }
}

/// Accumulates labelled comparisons for one criterion.
#[derive(Default)]
struct Probe {
    ok: bool,
    expected: Vec<String>,
    actual: Vec<String>,
    diagnostics: Vec<String>,
}

impl Probe {
    fn new() -> Self {
        Probe { ok: true, ..Default::default() }
    }

    fn expect(&mut self, label: &str, expected: impl Display, actual: impl Display) {
        let (e, a) = (expected.to_string(), actual.to_string());
        if e != a {
            self.ok = false;
            self.diagnostics.push(format!("FAIL {label}: expected {e}, got {a}"));
        }
        self.expected.push(format!("{label} = {e}"));
        self.actual.push(format!("{label} = {a}"));
    }

    fn require(&mut self, label: &str, holds: bool) {
        self.expect(label, true, holds);
    }

    fn note(&mut self, line: impl Into<String>) {
        self.diagnostics.push(line.into());
    }
}

fn field(s: &str) -> FieldSpec {
    s.parse().expect("suite field literals are valid")
}

fn span(a: &StructureAlgebra, vectors: Vec<Vector>) -> Subspace {
    Subspace::span(a.field(), a.dim(), vectors)
}

fn same_ops(x: &OperatorSubspace, y: &OperatorSubspace) -> bool {
    x.as_subspace() == y.as_subspace()
}

fn show_subspace(s: &Subspace) -> String {
    let vs: Vec<String> = s.basis().iter().map(|v| v.to_string()).collect();
    format!("span({})", vs.join(", "))
}

const NAMES: [&str; CRITERIA as usize] = [
    "kantor reconstruction of W(2)",
    "S2 multiplication algebra and simplicity",
    "basis graphs, fixed points and certificates",
    "W2 multiplication algebra and simplicity",
    "W(2) multiplication algebra across characteristics",
    "automorphism completeness against enumeration",
    "automorphism group laws and group structure",
    "derivations of S2",
    "characteristic-polynomial invariants",
    "terminal and conservative identities",
    "left annihilators",
];

pub fn criterion_name(criterion: u8) -> &'static str {
    NAMES[(criterion - 1) as usize]
}

/// Runs every criterion (in parallel) and assembles the report in
/// criterion order.
pub fn verify_paper(opts: &SuiteOptions) -> VerificationReport {
    let mut checks: Vec<Check> = (1..=CRITERIA)
        .into_par_iter()
        .map(|c| run_criterion(c, opts))
        .collect();
    checks.sort_by_key(|c| c.criterion);
    VerificationReport { checks }
}

pub fn run_criterion(criterion: u8, opts: &SuiteOptions) -> Check {
    let name = format!("AC{criterion} {}", criterion_name(criterion));
    if opts.only.as_ref().is_some_and(|o| !o.contains(&criterion)) {
        return Check {
            criterion,
            name,
            status: Status::Skipped,
            expected: String::new(),
            actual: String::new(),
            diagnostics: Vec::new(),
            runtime_ms: 0,
        };
    }
    let ctx = Ctx { opts };
    let start = Instant::now();
    let mut probe = Probe::new();
    let outcome = match criterion {
        1 => kantor_reconstruction(&ctx, &mut probe),
        2 => s2_structure(&ctx, &mut probe),
        3 => graph_suite(&ctx, &mut probe),
        4 => w2_structure(&ctx, &mut probe),
        5 => w2x2_structure(&ctx, &mut probe),
        6 => completeness(&ctx, &mut probe),
        7 => group_laws(&mut probe),
        8 => derivation_check(&ctx, &mut probe),
        9 => invariants(&ctx, &mut probe),
        10 => identities(&ctx, &mut probe),
        11 => annihilators(&ctx, &mut probe),
        _ => Err(Error::OutOfDomain(format!("no criterion {criterion}"))),
    };
    let runtime_ms = start.elapsed().as_millis() as u64;
    if let Err(e) = outcome {
        probe.ok = false;
        probe.actual.push(format!("error: {e}"));
    }
    Check {
        criterion,
        name,
        status: if probe.ok { Status::Pass } else { Status::Fail },
        expected: probe.expected.join("; "),
        actual: probe.actual.join("; "),
        diagnostics: probe.diagnostics,
        runtime_ms,
    }
}

fn kantor_reconstruction(ctx: &Ctx, p: &mut Probe) -> Result<()> {
    let q = FieldSpec::Rationals;
    let rebuilt = change_to_e_basis(&build_w2(q))?;
    let printed = ctx.load(CatalogName::W2x2, q)?;
    let diffs = rebuilt.table_differences(&printed);
    p.expect("table mismatches", 0, diffs.len());
    for (i, j, k, r, t) in &diffs {
        p.note(format!(
            "coefficient of e{} in e{}e{}: rebuilt {r}, printed {t}",
            k + 1,
            i + 1,
            j + 1
        ));
    }
    let row = |i: usize| -> Vec<Vector> { (0..8).map(|j| rebuilt.product(i, j)).collect() };
    p.note(format!("rebuilt rows of e6 and e7 coincide: {}", row(5) == row(6)));
    Ok(())
}

fn simple_both_ways(p: &mut Probe, label: &str, a: &StructureAlgebra) -> Result<()> {
    p.require(&format!("{label} simple by dim M = n²"), simplicity_by_dimension(a)?);
    let cert = simplicity_lemma_check(a)?;
    p.require(&format!("{label} simple by graph lemma"), cert.is_simple());
    if let Some(q) = cert.reduced_mod {
        p.note(format!("{label}: lemma scan run on the reduction mod {q}"));
    }
    Ok(())
}

fn s2_structure(ctx: &Ctx, p: &mut Probe) -> Result<()> {
    for f in ["Q", "F5"] {
        let a = ctx.load(CatalogName::S2, field(f))?;
        p.expect(&format!("S2/{f} dim M"), 16, generate_mult_algebra(&a, false).dim());
        simple_both_ways(p, &format!("S2/{f}"), &a)?;
    }
    let f = field("F3");
    let a = ctx.load(CatalogName::S2, f)?;
    let m = generate_mult_algebra(&a, false);
    p.expect("S2/F3 dim M", 8, m.dim());
    let rad = trace_form_radical(&m);
    p.require("S2/F3 radical = span{E43, E21, E23, E41}", same_ops(&rad, &reference::s2_char3_radical(f)));
    p.expect("S2/F3 dim radical²", 0, rad.product_span(&rad).dim());
    let units = verify_matrix_units(&m, &reference::s2_char3_matrix_units(f), Some(&rad));
    p.require("S2/F3 matrix units verify", units.passed());
    p.expect("S2/F3 M/rad", "M2", units.identification.unwrap_or_default());
    Ok(())
}

fn reach_diff(a: &BasisGraph, b: &BasisGraph) -> Vec<String> {
    let (ra, rb) = (a.reachability(), b.reachability());
    let mut out = Vec::new();
    for i in 0..a.n() {
        for j in 0..a.n() {
            if ra[i][j] != rb[i][j] {
                out.push(format!("e{}→e{}: computed {}, figure {}", i + 1, j + 1, ra[i][j], rb[i][j]));
            }
        }
    }
    out
}

fn graph_suite(ctx: &Ctx, p: &mut Probe) -> Result<()> {
    use reference::figures;
    let f3 = field("F3");
    let s2 = ctx.load(CatalogName::S2, f3)?;
    let fixed: Vec<Vec<usize>> = build_graph(&s2)
        .tree_fixed_points()?
        .into_iter()
        .map(|s| s.into_iter().map(|i| i + 1).collect())
        .collect();
    p.expect(
        "S2/F3 tree fixed points",
        "[[], [1, 3], [1, 2, 3], [1, 3, 4], [1, 2, 3, 4]]",
        format!("{fixed:?}"),
    );
    let ideals = ideals_from_fixed_points(&s2)?;
    p.expect("S2/F3 proper fixed-point ideals", 3, ideals.len());
    p.require("S2/F3 fixed-point ideals verify", ideals.iter().all(|i| i.verified));

    for (name, f) in [(CatalogName::W2, "F3"), (CatalogName::W2x2, "F2")] {
        let a = ctx.load(name, field(f))?;
        let cert = simplicity_lemma_check(&a)?;
        let ideal = match &cert.verdict {
            SimplicityVerdict::NotSimple { ideal } => {
                let basis: Vec<Vector> = ideal
                    .iter()
                    .map(|v| Vector::new(a.field(), v.iter().map(|s| a.field().parse_scalar(s)).collect::<Result<_>>()?))
                    .collect::<Result<_>>()?;
                Some(span(&a, basis))
            }
            _ => None,
        };
        let verified = ideal.as_ref().is_some_and(|i| i.dim() > 0 && i.dim() < a.dim() && a.is_ideal(i));
        p.require(&format!("{name}/{f} non-simplicity certificate"), verified);
        if let Some(i) = ideal {
            p.note(format!("{name}/{f} certificate ideal {}", show_subspace(&i)));
        }
    }

    let cases: [(&str, CatalogName, &[&str], &[(usize, usize)]); 5] = [
        ("S2", CatalogName::S2, &["Q", "F5"], figures::S2),
        ("S2 char 3", CatalogName::S2, &["F3"], figures::S2_CHAR3),
        ("W2", CatalogName::W2, &["Q", "F5"], figures::W2),
        ("W2 char 3", CatalogName::W2, &["F3"], figures::W2_CHAR3),
        ("W(2)", CatalogName::W2x2, &["Q", "F2", "F3", "F5"], figures::W2X2),
    ];
    for (label, name, fields, edges) in cases {
        let figure = BasisGraph::from_edges(name.dim(), edges);
        for f in fields {
            let g = build_graph(&ctx.load(name, field(f))?);
            p.expect(
                &format!("{label} figure vs {name}/{f} strongly connected"),
                figure.is_strongly_connected(),
                g.is_strongly_connected(),
            );
            for d in reach_diff(&g, &figure) {
                p.note(format!("{name}/{f} reachability differs from the figure: {d}"));
            }
        }
    }
    Ok(())
}

fn w2_structure(ctx: &Ctx, p: &mut Probe) -> Result<()> {
    for f in ["Q", "F2", "F5"] {
        let a = ctx.load(CatalogName::W2, field(f))?;
        p.expect(&format!("W2/{f} dim M"), 36, generate_mult_algebra(&a, false).dim());
        simple_both_ways(p, &format!("W2/{f}"), &a)?;
    }
    let f = field("F3");
    let a = ctx.load(CatalogName::W2, f)?;
    let m = generate_mult_algebra(&a, false);
    p.expect("W2/F3 dim M", 20, m.dim());
    let rad = trace_form_radical(&m);
    p.expect("W2/F3 dim radical", 12, rad.dim());
    p.require("W2/F3 radical equals the printed span", same_ops(&rad, &reference::w2_char3_radical(f)));
    let rad2 = rad.product_span(&rad);
    p.expect("W2/F3 dim radical²", 4, rad2.dim());
    p.require("W2/F3 radical² equals the printed span", same_ops(&rad2, &reference::w2_char3_radical_square(f)));
    p.expect("W2/F3 dim radical⁴", 0, rad2.product_span(&rad2).dim());
    let units = verify_matrix_units(&m, &reference::w2_char3_matrix_units(f), Some(&rad));
    p.require("W2/F3 matrix units verify", units.passed());
    p.expect("W2/F3 M/rad", "M2 ⊕ M2", units.identification.unwrap_or_default());
    let cert = simplicity_lemma_check(&a)?;
    p.require("W2/F3 not simple", !cert.is_simple() && !simplicity_by_dimension(&a)?);
    Ok(())
}

fn w2x2_structure(ctx: &Ctx, p: &mut Probe) -> Result<()> {
    let f5 = field("F5");
    let a = ctx.load(CatalogName::W2x2, f5)?;
    p.expect("W(2)/F5 dim M", 64, generate_mult_algebra(&a, false).dim());
    simple_both_ways(p, "W(2)/F5", &a)?;

    let f2 = field("F2");
    let a = ctx.load(CatalogName::W2x2, f2)?;
    let m = generate_mult_algebra(&a, false);
    let rad = trace_form_radical(&m);
    let rw = radical_action_ideal(&a, &m, &rad)?;
    let expected_ideal = span(&a, reference::w2x2_char2_ideal(f2));
    p.expect("W(2)/F2 R·W(2)", show_subspace(&expected_ideal), show_subspace(&rw.ideal));
    p.require("W(2)/F2 R·W(2) is an ideal", rw.is_algebra_ideal);
    let complement: Vec<Vector> = (0..6).map(|i| a.basis_vector(i)).collect();
    let quotient = a.quotient_with_complement(&expected_ideal, &complement)?;
    let w2 = ctx.load(CatalogName::W2, f2)?;
    let iso = quotient.algebra.verify_homomorphism(&w2, &Matrix::identity(f2, 6))?;
    p.require("W(2)/F2 quotient ≅ W2(F2) via ē_i ↦ e_i", iso.passed());
    p.expect("W(2)/F2 dim M", 40, m.dim());
    p.note(format!(
        "W(2)/F2: dim radical {}, dim M/rad {}, radical equals the printed span: {}",
        rad.dim(),
        m.dim() - rad.dim(),
        same_ops(&rad, &reference::w2x2_char2_radical(f2))
    ));

    let f3 = field("F3");
    let a = ctx.load(CatalogName::W2x2, f3)?;
    let m = generate_mult_algebra(&a, false);
    let rad = trace_form_radical(&m);
    p.expect("W(2)/F3 dim radical", 12, rad.dim());
    p.expect("W(2)/F3 dim radical²", 0, rad.product_span(&rad).dim());
    let rw = radical_action_ideal(&a, &m, &rad)?;
    let expected_ideal = span(&a, reference::w2x2_char3_ideal(f3));
    p.expect("W(2)/F3 radical·W(2)", show_subspace(&expected_ideal), show_subspace(&rw.ideal));
    p.require("W(2)/F3 radical·W(2) is an ideal", rw.is_algebra_ideal);
    p.note(format!(
        "W(2)/F3: dim M {}, M equals the printed basis: {}, radical equals the printed span: {}",
        m.dim(),
        same_ops(&m, &reference::w2x2_char3_mult_algebra(f3)),
        same_ops(&rad, &reference::w2x2_char3_radical(f3))
    ));
    let quotient = a.quotient_with_complement(&expected_ideal, &reference::w2x2_char3_complement(f3))?;
    let mut printed = StructureAlgebra::zero(f3, 6);
    for &(i, j, k, c) in reference::W2X2_CHAR3_QUOTIENT {
        printed.set_coeff(i - 1, j - 1, k - 1, f3.from_i64(c));
    }
    let diffs = quotient.algebra.table_differences(&printed);
    p.note(format!("W(2)/F3 quotient table in the printed basis f1..f6 differs from the printed table in {} entries", diffs.len()));
    for (i, j, k, c, t) in &diffs {
        p.note(format!("  f{}f{} coefficient of f{}: computed {c}, printed {t}", i + 1, j + 1, k + 1));
    }
    let w2 = ctx.load(CatalogName::W2, f3)?;
    let isos = enumerate_isomorphisms(&quotient.algebra, &w2, DEFAULT_BUDGET)?;
    p.note(format!("W(2)/F3 quotient ≅ W2(F3): {} isomorphisms found", isos.len()));
    Ok(())
}

fn completeness(ctx: &Ctx, p: &mut Probe) -> Result<()> {
    let cases = [
        (CatalogName::S2, "F2", 2),
        (CatalogName::S2, "F3", 6),
        (CatalogName::S2, "F5", 20),
        (CatalogName::W2, "F2", 2),
        (CatalogName::W2, "F3", 12),
        (CatalogName::W2, "F5", 20),
        (CatalogName::W2x2, "F2", 4),
        (CatalogName::W2x2, "F3", 36),
        (CatalogName::W2x2, "F5", 20),
    ];
    for (name, f, count) in cases {
        let fs = field(f);
        let fam = family_for(name, fs.characteristic())
            .ok_or_else(|| Error::UnknownFamily(format!("{name} over {f}")))?;
        let rf = fam.resolve(fs)?;
        let enumerated = enumerate_automorphisms(&ctx.load(name, fs)?, EnumerationMode::Dfs, DEFAULT_BUDGET)?;
        let report = family_completeness(&rf, DEFAULT_BUDGET)?;
        let label = format!("{name}/{f} vs {}", fam.name);
        p.expect(&format!("{label} |Aut|"), count, enumerated.automorphisms.len());
        p.require(&format!("{label} sets equal"), report.sets_equal);
        p.require(&format!("{label} injective"), report.injective);
        p.expect(&format!("{label} predicted order"), count, report.predicted_order);
    }
    let s2 = ctx.load(CatalogName::S2, field("F2"))?;
    let full = enumerate_automorphisms(&s2, EnumerationMode::Full, 0)?;
    let dfs = enumerate_automorphisms(&s2, EnumerationMode::Dfs, DEFAULT_BUDGET)?;
    p.require("S2/F2 full and dfs enumerations agree", full.automorphisms == dfs.automorphisms);
    for (f, ideal) in [
        ("F2", reference::w2x2_char2_ideal(field("F2"))),
        ("F3", reference::w2x2_char3_ideal(field("F3"))),
    ] {
        let a = ctx.load(CatalogName::W2x2, field(f))?;
        let i = span(&a, ideal);
        let autos = enumerate_automorphisms(&a, EnumerationMode::Dfs, DEFAULT_BUDGET)?.automorphisms;
        let stable = autos
            .iter()
            .all(|t| span(&a, i.basis().iter().map(|v| t.apply(v)).collect()) == i);
        p.require(&format!("W(2)/{f} automorphisms fix {}", show_subspace(&i)), stable);
    }
    Ok(())
}

fn group_laws(p: &mut Probe) -> Result<()> {
    for fam in families() {
        for f in ["Q", "F2", "F3", "F5", "F7"] {
            let fs = field(f);
            if !fam.characteristic.holds(fs.characteristic()) {
                continue;
            }
            let rf = fam.resolve(fs)?;
            let members = verify_family(&rf, 50, 0xfa)?;
            let law = verify_group_law(&rf, 50, 0x1a)?;
            let label = format!("{}/{f}", fam.name);
            p.require(&format!("{label} members are automorphisms"), members.passed());
            p.require(&format!("{label} composition law"), law.law_failures.is_empty());
            p.require(&format!("{label} inverse formula"), law.inverse_failures.is_empty());
            let id = fam.printed(fs, &identity_params(&fam, fs))?;
            p.require(&format!("{label} identity member"), id == Matrix::identity(fs, fam.dim()));
            p.note(format!(
                "{label}: {} members, {} pairs, exhaustive {}, orientation {:?}, law {:?}, inverse {:?}",
                members.members_checked, law.pairs_checked, law.exhaustive, rf.orientation, law.law_source, law.inverse_source
            ));
        }
    }
    for report in [
        semidirect_structure_check(field("F2"))?,
        direct_product_check(field("F3"))?,
        center_check(field("F3"))?,
    ] {
        for c in &report.checks {
            p.require(&format!("{}/{}: {}", report.family, report.field, c.name), c.passed);
        }
    }
    Ok(())
}

fn derivation_check(ctx: &Ctx, p: &mut Probe) -> Result<()> {
    for f in ["Q", "F2", "F3", "F5"] {
        let a = ctx.load(CatalogName::S2, field(f))?;
        let der = derivations(&a);
        p.expect(&format!("S2/{f} dim Der"), 2, der.dim());
        p.require(&format!("S2/{f} Der closed under the bracket"), der.closure_check(&a));
        let (norm, pair) = normalize_aff2(&der);
        let normalized = matches!(norm, Aff2Normalization::Normalized { .. })
            && pair.is_some_and(|(h, x)| h.commutator(&x) == x);
        p.require(&format!("S2/{f} [h,x] = x"), normalized);
    }
    Ok(())
}

fn invariants(ctx: &Ctx, p: &mut Probe) -> Result<()> {
    use rand::SeedableRng;
    let norm = InvariantNormalization::persisted();
    for (set, name, set_name) in [(InvariantSet::W2, CatalogName::W2, "W2"), (InvariantSet::W2x2, CatalogName::W2x2, "W2x2")] {
        let refit = fit_normalization(set, &ctx.load(name, field("F101"))?, 20, 0x1e);
        let consistent = refit.iter().zip(&norm.maps[&set]).all(|(fits, m)| fits.contains(m));
        p.require(&format!("{set_name} normalization refits"), consistent);
        for (f, samples) in [("F101", 200), ("Q", 20)] {
            let a = ctx.load(name, field(f))?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x9e);
            let mut bad = 0;
            for _ in 0..samples {
                let w = Vector::random(a.field(), a.dim(), &mut rng);
                let predicted = norm.apply(set, &charpoly_of_left_mult(&a, &w)?);
                if predicted != charpoly_invariants(set_name, &w)? {
                    bad += 1;
                }
            }
            p.expect(&format!("{set_name}/{f} invariant mismatches in {samples} samples"), 0, bad);
        }
    }
    for (name, f, set) in [
        (CatalogName::W2, "F5", Some(InvariantSet::W2)),
        (CatalogName::W2, "F3", Some(InvariantSet::W2)),
        (CatalogName::W2x2, "F3", Some(InvariantSet::W2x2)),
        (CatalogName::S2, "F5", None),
    ] {
        let a = ctx.load(name, field(f))?;
        let autos = enumerate_automorphisms(&a, EnumerationMode::Dfs, DEFAULT_BUDGET)?.automorphisms;
        let r = invariant_conjugation_check(&a, &autos, 20, 0xc0, set)?;
        p.require(
            &format!("{name}/{f} invariants preserved by all {} automorphisms", autos.len()),
            r.passed(),
        );
    }
    Ok(())
}

fn identities(ctx: &Ctx, p: &mut Probe) -> Result<()> {
    for name in [CatalogName::S2, CatalogName::W2] {
        for f in ["Q", "F2", "F5", "F7"] {
            let r = check_terminal(&ctx.load(name, field(f))?)?;
            p.require(&format!("{name}/{f} terminal"), r.passed());
        }
    }
    for f in ["Q", "F5"] {
        let a = ctx.load(CatalogName::W2x2, field(f))?;
        match conservativity_witness(&a) {
            ConservativityOutcome::Witness(fmap) => {
                let r = check_conservative_identity(&a, &fmap);
                p.expect(&format!("W(2)/{f} quadruples checked"), 4096, r.checked);
                p.require(&format!("W(2)/{f} witness re-verifies"), r.passed());
            }
            ConservativityOutcome::Infeasible { a: i, b: j } => {
                p.require(&format!("W(2)/{f} witness exists"), false);
                p.note(format!("no F(e{}, e{}) solves the identity", i + 1, j + 1));
            }
        }
    }
    Ok(())
}

fn annihilators(ctx: &Ctx, p: &mut Probe) -> Result<()> {
    let f5 = field("F5");
    let a = ctx.load(CatalogName::W2, f5)?;
    let expected = span(&a, vec![a.vector(&[(3, 1), (6, 1)]), a.vector(&[(4, 1)])]);
    p.expect("Lann(W2/F5)", show_subspace(&expected), show_subspace(&a.annihilators().left));
    let f3 = field("F3");
    let a = ctx.load(CatalogName::W2, f3)?;
    let expected = span(
        &a,
        vec![a.vector(&[(1, 1), (5, 1)]), a.vector(&[(3, 1), (6, 1)]), a.vector(&[(4, 1)])],
    );
    p.expect("Lann(W2/F3)", show_subspace(&expected), show_subspace(&a.annihilators().left));
    for f in ["Q", "F5"] {
        let a = ctx.load(CatalogName::S2, field(f))?;
        let expected = span(&a, vec![a.vector(&[(4, 1)])]);
        p.expect(&format!("Lann(S2/{f})"), show_subspace(&expected), show_subspace(&a.annihilators().left));
    }
    Ok(())
}
