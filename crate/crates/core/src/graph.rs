//! The directed graph of an algebra basis: reachability, tree fixed points
//! and the ideals they span, and the two-condition simplicity check over
//! finite fields.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::StructureAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Subspace, Vector};
use crate::modp::{ResidueSpan, Zp};
use crate::mult_algebra::generate_mult_algebra;

/// Which multiplication operator produced an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// e_i ↦ e_k·e_i, left multiplication by e_k.
    Left,
    /// e_i ↦ e_i·e_k, right multiplication by e_k.
    Right,
}

/// The operator witnessing an edge: `side` multiplication by e_{multiplier}.
/// Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub side: Side,
    pub multiplier: usize,
}

impl Provenance {
    pub fn label(&self) -> String {
        match self.side {
            Side::Left => format!("L_e{}", self.multiplier + 1),
            Side::Right => format!("R_e{}", self.multiplier + 1),
        }
    }
}

/// Vertices are the basis indices 0..n; self-loops are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), Option<Provenance>>,
}

impl BasisGraph {
    pub fn new(n: usize) -> Self {
        BasisGraph { n, edges: BTreeMap::new() }
    }

    /// A graph from 1-based edges that carry no provenance.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = BasisGraph::new(n);
        for &(i, j) in edges {
            if i != j {
                g.edges.insert((i - 1, j - 1), None);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// 0-based edges in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Option<Provenance>)> + '_ {
        self.edges.iter().map(|(&(i, j), &p)| (i, j, p))
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains_key(&(i, j))
    }

    pub fn provenance(&self, i: usize, j: usize) -> Option<Provenance> {
        self.edges.get(&(i, j)).copied().flatten()
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((i, 0)..(i + 1, 0)).map(|(&(_, j), _)| j)
    }

    /// Bitmask of vertices reachable from each vertex, the vertex included.
    fn reach_masks(&self) -> Vec<u64> {
        (0..self.n)
            .map(|v| {
                let set = self.tree_closure(&BTreeSet::from([v]));
                set.iter().fold(0u64, |m, &i| m | (1 << i))
            })
            .collect()
    }

    /// Reachability as a boolean matrix, the diagonal included.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|v| {
                let set = self.tree_closure(&BTreeSet::from([v]));
                (0..self.n).map(|j| set.contains(&j)).collect()
            })
            .collect()
    }

    /// S together with every vertex reachable from S.
    pub fn tree_closure(&self, s: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut seen = s.clone();
        let mut stack: Vec<usize> = s.iter().copied().collect();
        while let Some(v) = stack.pop() {
            for w in self.successors(v) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Strongly connected components, each sorted, listed in order of
    /// their smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut g = DiGraph::<(), ()>::with_capacity(self.n, self.edges.len());
        let nodes: Vec<_> = (0..self.n).map(|_| g.add_node(())).collect();
        for &(i, j) in self.edges.keys() {
            g.add_edge(nodes[i], nodes[j], ());
        }
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        comps.sort();
        comps
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Every S with tree_closure(S) = S, ordered by size and then
    /// lexicographically.
    pub fn tree_fixed_points(&self) -> Result<Vec<BTreeSet<usize>>> {
        if self.n > 20 {
            return Err(Error::TooLarge(format!(
                "exhaustive fixed-point enumeration needs n <= 20, got {}",
                self.n
            )));
        }
        let reach = self.reach_masks();
        let mut out: Vec<Vec<usize>> = (0u64..1 << self.n)
            .filter(|&mask| {
                let closure = (0..self.n)
                    .filter(|&i| mask >> i & 1 == 1)
                    .fold(mask, |m, i| m | reach[i]);
                closure == mask
            })
            .map(|mask| (0..self.n).filter(|&i| mask >> i & 1 == 1).collect())
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out.into_iter().map(|v| v.into_iter().collect()).collect())
    }

    /// Drops, in edge order, every edge whose removal leaves reachability
    /// unchanged.
    pub fn simplified(&self) -> BasisGraph {
        let target = self.reachability();
        let mut g = self.clone();
        for key in self.edges.keys() {
            let removed = g.edges.remove(key).expect("edge present");
            if g.reachability() != target {
                g.edges.insert(*key, removed);
            }
        }
        g
    }

    /// Reachability summary for reports.
    pub fn report(&self) -> ReachabilityReport {
        ReachabilityReport {
            vertices: self.n,
            edges: self
                .edges()
                .map(|(i, j, p)| (i + 1, j + 1, p.map(|p| p.label()).unwrap_or_default()))
                .collect(),
            strongly_connected: self.is_strongly_connected(),
            components: self
                .components()
                .into_iter()
                .map(|c| c.into_iter().map(|i| i + 1).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReachabilityReport {
    pub vertices: usize,
    /// 1-based edges with the operator that produced them.
    pub edges: Vec<(usize, usize, String)>,
    pub strongly_connected: bool,
    pub components: Vec<Vec<usize>>,
}

/// Edge i → j whenever e_i·e_k or e_k·e_i has a nonzero e_j coefficient.
pub fn build_graph(a: &StructureAlgebra) -> BasisGraph {
    let n = a.dim();
    let mut g = BasisGraph::new(n);
    for i in 0..n {
        for k in 0..n {
            for (side, product) in [(Side::Right, a.product(i, k)), (Side::Left, a.product(k, i))] {
                for j in product.support() {
                    if j != i {
                        g.edges.entry((i, j)).or_insert(Some(Provenance { side, multiplier: k }));
                    }
                }
            }
        }
    }
    g
}

/// A tree fixed point and whether its span passed the direct ideal check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointIdeal {
    /// 1-based basis indices.
    pub vertices: Vec<usize>,
    pub verified: bool,
}

/// The spans of all proper nonempty tree fixed points, each checked
/// directly against A·I ⊆ I and I·A ⊆ I.
pub fn ideals_from_fixed_points(a: &StructureAlgebra) -> Result<Vec<FixedPointIdeal>> {
    let n = a.dim();
    let fixed = build_graph(a).tree_fixed_points()?;
    Ok(fixed
        .into_iter()
        .filter(|s| !s.is_empty() && s.len() < n)
        .map(|s| {
            let span = coordinate_span(a, &s);
            FixedPointIdeal {
                vertices: s.iter().map(|i| i + 1).collect(),
                verified: a.is_ideal(&span),
            }
        })
        .collect())
}

fn coordinate_span(a: &StructureAlgebra, s: &BTreeSet<usize>) -> Subspace {
    Subspace::span(a.field(), a.dim(), s.iter().map(|&i| a.basis_vector(i)))
}

/// Exhaustive scans stop being attempted beyond this many vectors.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;
/// Number of random vectors drawn when the space is too large to scan.
pub const SAMPLE_SIZE: usize = 20_000;

/// Vectors x whose smallest witnessing e_i in M·x is the same.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessClass {
    /// 1-based index of the witness e_i.
    pub witness: usize,
    pub count: u64,
    pub example: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SimplicityVerdict {
    Simple,
    /// Basis of a proper nonzero ideal.
    NotSimple { ideal: Vec<Vec<String>> },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicityCertificate {
    pub strongly_connected: bool,
    /// False when x was sampled rather than scanned exhaustively.
    pub exhaustive: bool,
    /// Vectors examined, one per line through the origin (first nonzero
    /// coordinate equal to 1).
    pub scanned: u64,
    pub witnesses: Vec<WitnessClass>,
    /// A nonzero x with no basis vector in M·x.
    pub counterexample: Option<Vec<String>>,
    /// Over Q: the prime whose reduction was scanned.
    pub reduced_mod: Option<u64>,
    pub verdict: SimplicityVerdict,
}

impl SimplicityCertificate {
    pub fn is_simple(&self) -> bool {
        self.verdict == SimplicityVerdict::Simple
    }
}

fn strings(v: &Vector) -> Vec<String> {
    v.coords().iter().map(|s| s.to_string()).collect()
}

/// Primes tried, in order, when a rational algebra is reduced for the scan.
pub const REDUCTION_PRIMES: [u64; 3] = [5, 7, 11];

/// Simplicity from strong connectivity of the basis graph together with
/// e_i ∈ M·x for every nonzero x.
///
/// Over Q the scan runs on the reduction modulo a prime p for which the
/// table is p-integral: a proper ideal over Q meets the p-integral lattice
/// in a saturated sublattice whose reduction is a proper ideal mod p, so
/// simplicity mod p gives simplicity over Q. Any other outcome mod p is
/// reported as inconclusive.
pub fn simplicity_lemma_check(a: &StructureAlgebra) -> Result<SimplicityCertificate> {
    if a.is_zero_product() {
        return Err(Error::ZeroMultiplication);
    }
    if a.field().is_finite() {
        return scan_certificate(a);
    }
    let strongly_connected = build_graph(a).is_strongly_connected();
    let mut last = None;
    for p in REDUCTION_PRIMES {
        let Some(reduced) = a.reduce_mod(p)? else { continue };
        if reduced.is_zero_product() {
            continue;
        }
        let mut cert = scan_certificate(&reduced)?;
        cert.reduced_mod = Some(p);
        cert.strongly_connected = strongly_connected;
        if cert.is_simple() && strongly_connected {
            return Ok(cert);
        }
        cert.verdict = SimplicityVerdict::Inconclusive;
        last = Some(cert);
    }
    last.ok_or_else(|| Error::OutOfDomain("no usable prime for the reduction".into()))
}

fn scan_certificate(a: &StructureAlgebra) -> Result<SimplicityCertificate> {
    let field = a.field();
    let zp = Zp::of(field).expect("finite field");
    let n = a.dim();
    let graph = build_graph(a);
    let strongly_connected = graph.is_strongly_connected();
    let m = generate_mult_algebra(a, false);
    let ops: Vec<Vec<u64>> = m.basis().iter().map(|t| zp.matrix(t)).collect();

    let witness = |x: &[u64]| -> Option<usize> {
        let mut span = ResidueSpan::new(zp);
        for t in &ops {
            span.insert(&zp.apply(t, n, x));
            if span.dim() == n {
                break;
            }
        }
        (0..n).find(|&i| span.contains_basis(i, n))
    };

    let total = (zp.p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let exhaustive = total <= EXHAUSTIVE_LIMIT as u128;
    let candidates: Vec<Vec<u64>> = if exhaustive {
        (1..total as u64)
            .into_par_iter()
            .map(|idx| zp.digits(idx, n))
            .filter(|x| x.iter().find(|&&c| c != 0) == Some(&1))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        (0..SAMPLE_SIZE)
            .map(|_| zp.residues(&Vector::random(field, n, &mut rng)))
            .filter(|x| x.iter().any(|&c| c != 0))
            .collect()
    };

    let results: Vec<(Option<usize>, &Vec<u64>)> =
        candidates.par_iter().map(|x| (witness(x), x)).collect();

    let mut classes: BTreeMap<usize, (u64, &Vec<u64>)> = BTreeMap::new();
    let mut counterexample = None;
    for (w, x) in &results {
        match w {
            Some(i) => classes.entry(*i).or_insert((0, x)).0 += 1,
            None => {
                if counterexample.is_none() {
                    counterexample = Some(zp.vector(field, x));
                }
            }
        }
    }

    let verdict = if !strongly_connected {
        let fixed = graph.tree_fixed_points()?;
        let proper = fixed
            .into_iter()
            .find(|s| !s.is_empty() && s.len() < n)
            .expect("a graph that is not strongly connected has a proper fixed point");
        SimplicityVerdict::NotSimple {
            ideal: proper.iter().map(|&i| strings(&a.basis_vector(i))).collect(),
        }
    } else if let Some(x) = &counterexample {
        let ideal = crate::mult_algebra::ideal_generated_in(&m, std::slice::from_ref(x)).ideal;
        if ideal.dim() < n {
            SimplicityVerdict::NotSimple {
                ideal: ideal.basis().iter().map(strings).collect(),
            }
        } else {
            SimplicityVerdict::Inconclusive
        }
    } else if exhaustive {
        SimplicityVerdict::Simple
    } else {
        SimplicityVerdict::Inconclusive
    };

    Ok(SimplicityCertificate {
        strongly_connected,
        exhaustive,
        scanned: results.len() as u64,
        witnesses: classes
            .into_iter()
            .map(|(i, (count, x))| WitnessClass {
                witness: i + 1,
                count,
                example: strings(&zp.vector(field, x)),
            })
            .collect(),
        counterexample: counterexample.as_ref().map(strings),
        reduced_mod: None,
        verdict,
    })
}

/// How much of the graph `export_dot` draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DotStyle {
    /// Every edge, labeled with the operator that produced it.
    Full,
    /// Only the edges needed to keep the same reachability.
    Simplified,
}

pub fn export_dot(g: &BasisGraph, name: &str, style: DotStyle) -> String {
    let drawn = match style {
        DotStyle::Full => g.clone(),
        DotStyle::Simplified => g.simplified(),
    };
    let mut out = String::new();
    let id = if name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !name.is_empty() {
        name.to_string()
    } else {
        format!("\"{}\"", name.replace('"', "\\\""))
    };
    writeln!(out, "digraph {id} {{").unwrap();
    for v in 0..g.n() {
        writeln!(out, "  e{};", v + 1).unwrap();
    }
    for (i, j, p) in drawn.edges() {
        match p {
            Some(p) => writeln!(out, "  e{} -> e{} [label=\"{}\"];", i + 1, j + 1, p.label()),
            None => writeln!(out, "  e{} -> e{};", i + 1, j + 1),
        }
        .unwrap();
    }
    out.push_str("}\n");
    out
}
