use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use conserv::automorphisms::{
    enumerate_automorphisms, family, family_completeness, family_for, verify_family, verify_group_law, EnumerationMode,
    ResolvedFamily,
};
use conserv::derivation::{derivations, normalize_aff2};
use conserv::graph::{build_graph, export_dot, simplicity_lemma_check, DotStyle, SimplicityCertificate, SimplicityVerdict};
use conserv::kantor::{
    build_w2, change_to_e_basis, charpoly_invariants, charpoly_of_left_mult, InvariantNormalization, InvariantSet,
};
use conserv::mult_algebra::{mult_algebra_report, simplicity_by_dimension, MultAlgebraReport};
use conserv::reference::matrix_unit_candidates;
use conserv::suite::{verify_paper, CatalogCorruption, Status, SuiteOptions};
use conserv::{catalog, CatalogName, Error, FieldSpec, Matrix, Subspace, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::refs::Loaded;
use crate::Failure;

/// What a command produced: a verdict, a human rendering and a JSON value.
pub struct Outcome {
    pub passed: bool,
    pub text: String,
    /// Pretty JSON ending in a newline.
    pub json: String,
}

fn to_value<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn vectors(s: &Subspace) -> Vec<String> {
    s.basis().iter().map(Vector::to_string).collect()
}

pub fn show(l: &Loaded) -> Outcome {
    Outcome {
        passed: true,
        text: l.algebra.to_string(),
        json: l.algebra.to_json(),
    }
}

pub fn graph(l: &Loaded, dot: Option<&Path>, full: bool) -> Result<Outcome, Failure> {
    let g = build_graph(&l.algebra);
    let report = g.report();
    if let Some(path) = dot {
        let style = if full { DotStyle::Full } else { DotStyle::Simplified };
        std::fs::write(path, export_dot(&g, &l.label(), style))
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut text = format!(
        "{} over {}: {} vertices, {} edges\n",
        l.label(),
        l.algebra.field(),
        report.vertices,
        report.edges.len()
    );
    for (i, j, via) in &report.edges {
        writeln!(text, "  e{i} -> e{j}  ({via})").unwrap();
    }
    writeln!(text, "strongly connected: {}", report.strongly_connected).unwrap();
    writeln!(text, "components: {:?}", report.components).unwrap();
    Ok(Outcome { passed: true, text, json: to_value(&report) })
}

#[derive(Serialize)]
pub struct GraphSummary {
    pub edges: usize,
    pub strongly_connected: bool,
    pub components: Vec<Vec<usize>>,
}

#[derive(Serialize)]
pub struct AnnihilatorSummary {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub two_sided: Vec<String>,
}

#[derive(Serialize)]
pub struct AnalysisReport {
    pub algebra: String,
    pub field: String,
    pub dim: usize,
    pub graph: GraphSummary,
    pub mult_algebra: MultAlgebraReport,
    pub simple_by_dimension: bool,
    pub lemma: SimplicityCertificate,
    /// dim M(A) = n².
    pub simple: bool,
    /// False only when the lemma gives a definite verdict that differs.
    pub verdicts_agree: bool,
    pub annihilators: AnnihilatorSummary,
}

pub fn analyze(l: &Loaded) -> Result<Outcome, Failure> {
    let a = &l.algebra;
    if a.is_zero_product() {
        return Err(Error::ZeroMultiplication.into());
    }
    let g = build_graph(a).report();
    let candidates = l.catalog.and_then(|c| matrix_unit_candidates(c, a.field()));
    let mult = mult_algebra_report(a, candidates.as_deref());
    let simple = simplicity_by_dimension(a)?;
    let lemma = simplicity_lemma_check(a)?;
    let verdicts_agree = match lemma.verdict {
        SimplicityVerdict::Inconclusive => true,
        _ => lemma.is_simple() == simple,
    };
    let ann = a.annihilators();
    let report = AnalysisReport {
        algebra: l.label(),
        field: a.field().to_string(),
        dim: a.dim(),
        graph: GraphSummary {
            edges: g.edges.len(),
            strongly_connected: g.strongly_connected,
            components: g.components,
        },
        mult_algebra: mult,
        simple_by_dimension: simple,
        lemma,
        simple,
        verdicts_agree,
        annihilators: AnnihilatorSummary {
            left: vectors(&ann.left),
            right: vectors(&ann.right),
            two_sided: vectors(&ann.two_sided),
        },
    };
    let r = &report;
    let mut text = String::new();
    writeln!(text, "{} over {} (dim {})", r.algebra, r.field, r.dim).unwrap();
    writeln!(
        text,
        "graph: {} edges, strongly connected: {}",
        r.graph.edges, r.graph.strongly_connected
    )
    .unwrap();
    writeln!(text, "dim M: {}", r.mult_algebra.dimension).unwrap();
    let chain: Vec<String> = r.mult_algebra.radical_square_dims.iter().map(usize::to_string).collect();
    writeln!(text, "radical: {} (dims of its powers: {})", r.mult_algebra.radical_dim, chain.join(" > ")).unwrap();
    if let Some(q) = &r.mult_algebra.quotient_identification {
        writeln!(text, "quotient: {q}").unwrap();
    }
    let lemma_verdict = match &r.lemma.verdict {
        SimplicityVerdict::Simple => "simple".to_string(),
        SimplicityVerdict::NotSimple { ideal } => format!("not simple (ideal of dim {})", ideal.len()),
        SimplicityVerdict::Inconclusive => "inconclusive".to_string(),
    };
    let via = r.lemma.reduced_mod.map(|p| format!(" via reduction mod {p}")).unwrap_or_default();
    writeln!(text, "simple by dim M = n²: {}", r.simple_by_dimension).unwrap();
    writeln!(text, "simple by graph and scan: {lemma_verdict}{via}").unwrap();
    writeln!(text, "simple: {}", r.simple).unwrap();
    writeln!(text, "left annihilator: dim {}", r.annihilators.left.len()).unwrap();
    writeln!(text, "right annihilator: dim {}", r.annihilators.right.len()).unwrap();
    writeln!(text, "two-sided annihilator: dim {}", r.annihilators.two_sided.len()).unwrap();
    Ok(Outcome {
        passed: verdicts_agree,
        text,
        json: to_value(&report),
    })
}

#[derive(Clone, Copy, Debug)]
pub enum AutosMode {
    Enumerate(EnumerationMode),
    Family,
    Complete,
}

pub struct AutosOptions<'a> {
    pub mode: AutosMode,
    pub family: Option<&'a str>,
    pub samples: usize,
    pub seed: u64,
    pub budget: u64,
}

fn resolve_family(l: &Loaded, name: Option<&str>) -> Result<ResolvedFamily, Failure> {
    let field = l.algebra.field();
    let fam = match name {
        Some(n) => family(n)?,
        None => {
            let c = l
                .catalog
                .ok_or_else(|| Failure::Usage("no catalog algebra to pick a family for; pass --name".into()))?;
            family_for(c, field.characteristic()).ok_or_else(|| {
                Failure::Usage(format!("no automorphism family is registered for {c} over {field}"))
            })?
        }
    };
    let rf = fam.resolve(field)?;
    if rf.algebra() != &l.algebra {
        return Err(Failure::Usage(format!(
            "family {} acts on the catalog {} table, which differs from the given algebra",
            fam.name, fam.algebra
        )));
    }
    Ok(rf)
}

pub fn autos(l: &Loaded, opts: &AutosOptions) -> Result<Outcome, Failure> {
    let a = &l.algebra;
    match opts.mode {
        AutosMode::Enumerate(mode) => {
            let e = enumerate_automorphisms(a, mode, opts.budget)?;
            let mut text = format!(
                "{} over {}: {} automorphisms ({} search nodes)\n",
                l.label(),
                a.field(),
                e.automorphisms.len(),
                e.nodes
            );
            for m in &e.automorphisms {
                writeln!(text, "{m}").unwrap();
            }
            let json = json!({
                "algebra": l.label(),
                "field": a.field().to_string(),
                "mode": e.mode,
                "nodes": e.nodes,
                "count": e.automorphisms.len(),
                "automorphisms": e.automorphisms.iter().map(matrix_rows).collect::<Vec<_>>(),
            });
            Ok(Outcome { passed: true, text, json: to_value(&json) })
        }
        AutosMode::Family => {
            let rf = resolve_family(l, opts.family)?;
            let members = verify_family(&rf, opts.samples, opts.seed)?;
            let law = verify_group_law(&rf, opts.samples, opts.seed)?;
            let passed = members.passed() && law.passed();
            let mut text = format!(
                "family {} over {} ({:?} orientation, {}):\n",
                members.family,
                members.field,
                members.orientation,
                if members.exhaustive { "exhaustive" } else { "sampled" }
            );
            writeln!(
                text,
                "  members: {} checked, {} failures",
                members.members_checked,
                members.failures.len()
            )
            .unwrap();
            for f in &members.failures {
                writeln!(text, "    ({}) {}", f.params.join(", "), f.reason).unwrap();
            }
            writeln!(
                text,
                "  composition law: {} pairs, {} failures",
                law.pairs_checked,
                law.law_failures.len()
            )
            .unwrap();
            writeln!(
                text,
                "  inverses: {} checked, {} failures",
                law.inverses_checked,
                law.inverse_failures.len()
            )
            .unwrap();
            writeln!(text, "{}", if passed { "pass" } else { "fail" }).unwrap();
            let json = json!({ "family": members, "group_law": law, "passed": passed });
            Ok(Outcome { passed, text, json: to_value(&json) })
        }
        AutosMode::Complete => {
            if !a.field().is_finite() {
                return Err(Failure::Usage("--complete needs a finite field".into()));
            }
            let rf = resolve_family(l, opts.family)?;
            let r = family_completeness(&rf, opts.budget)?;
            let passed = r.passed();
            let text = format!(
                "{} over {}: enumerated {} = {} predicted by {} ({} members, {} missing, {} extra), {}\n",
                l.label(),
                r.field,
                r.enumerated,
                r.predicted_order,
                r.family,
                r.distinct_members,
                r.missing,
                r.extra,
                if passed { "pass" } else { "fail" }
            );
            let json = json!({ "completeness": r, "passed": passed });
            Ok(Outcome { passed, text, json: to_value(&json) })
        }
    }
}

pub fn derivation_report(l: &Loaded) -> Outcome {
    let a = &l.algebra;
    let der = derivations(a);
    let closed = der.closure_check(a);
    let (aff2, _) = normalize_aff2(&der);
    let bracket: Vec<Vec<Vec<String>>> = der
        .bracket
        .iter()
        .map(|row| row.iter().map(|c| c.iter().map(ToString::to_string).collect()).collect())
        .collect();
    let mut text = format!("Der({}) over {}: dim {}\n", l.label(), a.field(), der.dim());
    for (k, d) in der.basis.iter().enumerate() {
        writeln!(text, "D{}:\n{d}", k + 1).unwrap();
    }
    for x in 0..der.dim() {
        for y in x + 1..der.dim() {
            writeln!(text, "[D{}, D{}] = ({})", x + 1, y + 1, bracket[x][y].join(", ")).unwrap();
        }
    }
    writeln!(text, "abelian: {}", der.is_abelian()).unwrap();
    writeln!(text, "closed under the bracket: {closed}").unwrap();
    writeln!(text, "aff2 normalization: {}", serde_json::to_string(&aff2).expect("serializes")).unwrap();
    let json = json!({
        "algebra": l.label(),
        "field": a.field().to_string(),
        "dim": der.dim(),
        "basis": der.basis.iter().map(matrix_rows).collect::<Vec<_>>(),
        "bracket": bracket,
        "abelian": der.is_abelian(),
        "closed": closed,
        "aff2": aff2,
    });
    Outcome { passed: closed, text, json: to_value(&json) }
}

pub struct KantorOptions {
    pub rebuild: bool,
    pub invariants: bool,
    pub field: Option<FieldSpec>,
    pub samples: usize,
    pub seed: u64,
}

pub fn kantor(opts: &KantorOptions) -> Result<Outcome, Failure> {
    let mut passed = true;
    let mut text = String::new();
    let mut json = json!({});
    if opts.rebuild {
        let field = opts.field.unwrap_or(FieldSpec::Rationals);
        let rebuilt = change_to_e_basis(&build_w2(field))?;
        let printed = catalog(CatalogName::W2x2, field)?;
        let diffs: Vec<Value> = rebuilt
            .table_differences(&printed)
            .into_iter()
            .map(|(i, j, k, r, p)| {
                json!({ "i": i + 1, "j": j + 1, "k": k + 1, "rebuilt": r.to_string(), "catalog": p.to_string() })
            })
            .collect();
        passed &= diffs.is_empty();
        writeln!(text, "rebuilt W(2) over {field}: {} mismatches against the catalog", diffs.len()).unwrap();
        for d in &diffs {
            writeln!(
                text,
                "  coefficient of e{} in e{}e{}: rebuilt {}, catalog {}",
                d["k"], d["i"], d["j"], d["rebuilt"], d["catalog"]
            )
            .unwrap();
        }
        json["rebuild"] = json!({ "field": field.to_string(), "mismatches": diffs });
    }
    if opts.invariants {
        let field = opts.field.unwrap_or(FieldSpec::Prime(101));
        let norm = InvariantNormalization::persisted();
        let mut sets = Vec::new();
        for (set, name, cat) in [
            (InvariantSet::W2, "W2", CatalogName::W2),
            (InvariantSet::W2x2, "W2x2", CatalogName::W2x2),
        ] {
            let a = catalog(cat, field)?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut mismatches = 0;
            for _ in 0..opts.samples {
                let w = Vector::random(field, a.dim(), &mut rng);
                let predicted = norm.apply(set, &charpoly_of_left_mult(&a, &w)?);
                if predicted != charpoly_invariants(name, &w)? {
                    mismatches += 1;
                }
            }
            passed &= mismatches == 0;
            writeln!(
                text,
                "{name} invariants over {field}: {} samples, {mismatches} mismatches",
                opts.samples
            )
            .unwrap();
            sets.push(json!({ "set": name, "samples": opts.samples, "mismatches": mismatches }));
        }
        json["invariants"] = json!({ "field": field.to_string(), "seed": opts.seed, "sets": sets });
    }
    json["passed"] = Value::Bool(passed);
    Ok(Outcome { passed, text, json: to_value(&json) })
}

pub struct VerifyOptions<'a> {
    pub json: Option<&'a Path>,
    pub only: Option<BTreeSet<u8>>,
    pub corruption: Option<CatalogCorruption>,
}

pub fn verify(opts: &VerifyOptions) -> Result<Outcome, Failure> {
    let report = verify_paper(&SuiteOptions {
        corruption: opts.corruption,
        only: opts.only.clone(),
    });
    if let Some(path) = opts.json {
        std::fs::write(path, report.to_json() + "\n")
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut text = String::new();
    for c in &report.checks {
        let status = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        };
        writeln!(text, "{status:>7}  {} ({} ms)", c.name, c.runtime_ms).unwrap();
        if c.status == Status::Fail {
            for d in &c.diagnostics {
                writeln!(text, "         {d}").unwrap();
            }
        }
    }
    let passed = report.passed();
    writeln!(text, "{}", if passed { "all checks passed" } else { "some checks failed" }).unwrap();
    Ok(Outcome {
        passed,
        text,
        json: to_value(&report),
    })
}

/// `NAME:i,j,k`, 1-based.
pub fn parse_corruption(s: &str) -> Result<CatalogCorruption, String> {
    let (name, entry) = s
        .split_once(':')
        .ok_or_else(|| format!("`{s}`: expected NAME:i,j,k"))?;
    let algebra: CatalogName = name.parse().map_err(|e: Error| e.to_string())?;
    let idx: Vec<usize> = entry
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not an index")))
        .collect::<Result<_, _>>()?;
    let dim = catalog(algebra, FieldSpec::Rationals).map_err(|e| e.to_string())?.dim();
    match idx[..] {
        [i, j, k] if [i, j, k].iter().all(|&x| (1..=dim).contains(&x)) => Ok(CatalogCorruption {
            algebra,
            entry: (i, j, k),
        }),
        _ => Err(format!("`{entry}`: expected three indices in 1..={dim}")),
    }
}

