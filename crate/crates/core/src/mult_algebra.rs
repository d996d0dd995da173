//! Multiplication algebras M(A), trace-form radicals, nilpotency and
//! matrix-unit certificates.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::StructureAlgebra;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{LinearOp, Matrix, Subspace, Vector};

/// A subspace of End(A), stored as an echelon basis of row-major
/// flattened n×n matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSubspace {
    n: usize,
    space: Subspace,
}

impl OperatorSubspace {
    pub fn zero(field: FieldSpec, n: usize) -> Self {
        OperatorSubspace {
            n,
            space: Subspace::zero(field, n * n),
        }
    }

    pub fn from_operators<'a, I: IntoIterator<Item = &'a LinearOp>>(field: FieldSpec, n: usize, ops: I) -> Self {
        let mut s = Self::zero(field, n);
        for op in ops {
            s.insert(op);
        }
        s
    }

    pub fn field(&self) -> FieldSpec {
        self.space.field()
    }

    /// Side length of the operators.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> Vec<LinearOp> {
        self.space
            .rows()
            .iter()
            .map(|r| Matrix::from_flat(self.field(), self.n, self.n, r.clone()))
            .collect()
    }

    pub fn contains(&self, t: &LinearOp) -> bool {
        t.rows() == self.n && t.cols() == self.n && self.space.contains(t.flat())
    }

    pub fn insert(&mut self, t: &LinearOp) -> bool {
        self.space.insert(t.flat())
    }

    pub fn is_subspace_of(&self, other: &OperatorSubspace) -> bool {
        self.space.is_subspace_of(&other.space)
    }

    pub fn as_subspace(&self) -> &Subspace {
        &self.space
    }

    /// Span of all products xy with x ∈ self, y ∈ other.
    pub fn product_span(&self, other: &OperatorSubspace) -> OperatorSubspace {
        let a = self.basis();
        let b = other.basis();
        let prods: Vec<LinearOp> = a
            .par_iter()
            .flat_map_iter(|x| b.iter().map(move |y| x.mul(y)))
            .collect();
        OperatorSubspace::from_operators(self.field(), self.n, &prods)
    }
}

impl fmt::Display for OperatorSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis().iter().map(unit_map_expression).collect();
        write!(f, "span{{{}}}", parts.join(", "))
    }
}

/// Writes an operator as a combination of the maps E_ij (e_i ↦ e_j).
pub fn unit_map_expression(t: &LinearOp) -> String {
    let n = t.rows();
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // E_ij has its entry at (row j, column i).
            let c = t.get(j, i);
            if c.is_zero() {
                continue;
            }
            let s = c.signed_string();
            let label = format!("E{}{}", i + 1, j + 1);
            terms.push(match s.as_str() {
                "1" => label,
                "-1" => format!("-{label}"),
                _ => format!("{s}{label}"),
            });
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

/// The associative algebra generated by `generators` under composition.
pub fn associative_closure(field: FieldSpec, n: usize, generators: &[LinearOp]) -> OperatorSubspace {
    let mut space = OperatorSubspace::zero(field, n);
    let mut elems: Vec<LinearOp> = Vec::new();
    for g in generators {
        if space.insert(g) {
            elems.push(g.clone());
        }
    }
    let full = n * n;
    let mut next = 0;
    while next < elems.len() && space.dim() < full {
        let w = elems[next].clone();
        next += 1;
        let current = elems.len();
        let prods: Vec<LinearOp> = elems[..current]
            .par_iter()
            .flat_map_iter(|b| [w.mul(b), b.mul(&w)])
            .collect();
        for p in prods {
            if space.insert(&p) {
                elems.push(p);
                if space.dim() == full {
                    break;
                }
            }
        }
    }
    space
}

/// M(A), or M₁(A) when `include_identity` is set: the closure of
/// span{L_{e_i}, R_{e_i}} under composition.
pub fn generate_mult_algebra(a: &StructureAlgebra, include_identity: bool) -> OperatorSubspace {
    let n = a.dim();
    let mut gens: Vec<LinearOp> = Vec::with_capacity(2 * n + 1);
    if include_identity {
        gens.push(Matrix::identity(a.field(), n));
    }
    for i in 0..n {
        gens.push(a.left_mult_basis(i));
        gens.push(a.right_mult_basis(i));
    }
    associative_closure(a.field(), n, &gens)
}

/// The ideal generated by S, computed as span(S) + M·S, together with M·S
/// alone so callers can see whether the two differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedIdeal {
    pub ideal: Subspace,
    pub m_image: Subspace,
    pub coincide: bool,
}

pub fn ideal_generated_in(m: &OperatorSubspace, s: &[Vector]) -> GeneratedIdeal {
    let f = m.field();
    let n = m.n();
    let ops = m.basis();
    let m_image = Subspace::span(f, n, s.iter().flat_map(|v| ops.iter().map(move |t| t.apply(v))));
    let ideal = m_image.sum(&Subspace::span(f, n, s.iter().cloned()));
    let coincide = ideal == m_image;
    GeneratedIdeal {
        ideal,
        m_image,
        coincide,
    }
}

pub fn ideal_generated(a: &StructureAlgebra, s: &[Vector]) -> GeneratedIdeal {
    ideal_generated_in(&generate_mult_algebra(a, false), s)
}

/// Radical of the form ⟨f, g⟩ = trace(fg) on M.
pub fn trace_form_radical(m: &OperatorSubspace) -> OperatorSubspace {
    let basis = m.basis();
    let d = basis.len();
    let f = m.field();
    let mut gram = Matrix::zero(f, d, d);
    for i in 0..d {
        for j in i..d {
            let t = basis[i].mul(&basis[j]).trace();
            gram.set(i, j, t.clone());
            gram.set(j, i, t);
        }
    }
    let combos = gram.nullspace();
    let ops: Vec<LinearOp> = combos
        .iter()
        .map(|c| {
            basis
                .iter()
                .zip(c.coords())
                .filter(|(_, s)| !s.is_zero())
                .fold(Matrix::zero(f, m.n(), m.n()), |acc, (b, s)| acc.add(&b.scale(s)))
        })
        .collect();
    OperatorSubspace::from_operators(f, m.n(), &ops)
}

/// Powers I, I², I³, ... of an operator subspace.
#[derive(Clone, Debug)]
pub struct NilpotencyReport {
    pub nilpotent: bool,
    /// Smallest k with I^k = 0.
    pub index: Option<usize>,
    /// dim I^k for k = 1, 2, ... up to the first zero or repeated power.
    pub dims: Vec<usize>,
    pub powers: Vec<OperatorSubspace>,
}

pub fn subspace_is_nilpotent(m: &OperatorSubspace, i: &OperatorSubspace) -> Result<NilpotencyReport> {
    if !i.is_subspace_of(m) {
        return Err(Error::NotContained);
    }
    let mut powers = vec![i.clone()];
    loop {
        let last = powers.last().expect("nonempty");
        if last.dim() == 0 {
            let k = powers.len();
            return Ok(NilpotencyReport {
                nilpotent: true,
                index: Some(k),
                dims: powers.iter().map(OperatorSubspace::dim).collect(),
                powers,
            });
        }
        let next = last.product_span(i);
        if &next == last {
            return Ok(NilpotencyReport {
                nilpotent: false,
                index: None,
                dims: powers.iter().map(OperatorSubspace::dim).collect(),
                powers,
            });
        }
        powers.push(next);
    }
}

/// A labelled square array of candidate matrix units, `units[i][j]` = e_ij.
#[derive(Clone, Debug)]
pub struct MatrixUnitFamily {
    pub label: String,
    pub units: Vec<Vec<LinearOp>>,
}

impl MatrixUnitFamily {
    pub fn size(&self) -> usize {
        self.units.len()
    }

    fn all(&self) -> impl Iterator<Item = (usize, usize, &LinearOp)> {
        self.units
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, t)| (i, j, t)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixUnitReport {
    pub failures: Vec<String>,
    /// The candidates are independent modulo the radical and span M/rad.
    pub spans_quotient: bool,
    /// E.g. "M2 ⊕ M2" when every check passes.
    pub identification: Option<String>,
}

impl MatrixUnitReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks e_ij e_kl = δ_jk e_il inside each family and e u = u e = 0 across
/// families, modulo `radical` when given.
pub fn verify_matrix_units(
    m: &OperatorSubspace,
    families: &[MatrixUnitFamily],
    radical: Option<&OperatorSubspace>,
) -> MatrixUnitReport {
    let f = m.field();
    let n = m.n();
    let zero = Matrix::zero(f, n, n);
    let rad = radical.cloned().unwrap_or_else(|| OperatorSubspace::zero(f, n));
    let same = |x: &LinearOp, y: &LinearOp| rad.contains(&x.sub(y));
    let mut failures = Vec::new();
    for fam in families {
        for (i, j, t) in fam.all() {
            if !m.contains(t) {
                failures.push(format!("{}_{}{} is not in M", fam.label, i + 1, j + 1));
            }
        }
        for (i, j, x) in fam.all() {
            for (k, l, y) in fam.all() {
                let expected = if j == k { &fam.units[i][l] } else { &zero };
                if !same(&x.mul(y), expected) {
                    failures.push(format!(
                        "{0}_{1}{2}·{0}_{3}{4} ≠ {5}",
                        fam.label,
                        i + 1,
                        j + 1,
                        k + 1,
                        l + 1,
                        if j == k {
                            format!("{}_{}{}", fam.label, i + 1, l + 1)
                        } else {
                            "0".into()
                        }
                    ));
                }
            }
        }
    }
    for (a, fa) in families.iter().enumerate() {
        for fb in families.iter().skip(a + 1) {
            for (i, j, x) in fa.all() {
                for (k, l, y) in fb.all() {
                    if !same(&x.mul(y), &zero) || !same(&y.mul(x), &zero) {
                        failures.push(format!(
                            "{}_{}{} and {}_{}{} do not annihilate each other",
                            fa.label,
                            i + 1,
                            j + 1,
                            fb.label,
                            k + 1,
                            l + 1
                        ));
                    }
                }
            }
        }
    }
    let mut quotient_span = rad.clone();
    let mut independent = true;
    let mut count = 0;
    for fam in families {
        for (_, _, t) in fam.all() {
            count += 1;
            independent &= quotient_span.insert(t);
        }
    }
    let spans_quotient = independent && count + rad.dim() == m.dim();
    let identification = (failures.is_empty() && spans_quotient).then(|| {
        families
            .iter()
            .map(|f| format!("M{}", f.size()))
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    });
    MatrixUnitReport {
        failures,
        spans_quotient,
        identification,
    }
}

/// R·A for an ideal R of M(A).
#[derive(Clone, Debug)]
pub struct RadicalAction {
    pub ideal: Subspace,
    pub is_algebra_ideal: bool,
}

pub fn radical_action_ideal(a: &StructureAlgebra, m: &OperatorSubspace, r: &OperatorSubspace) -> Result<RadicalAction> {
    if !r.is_subspace_of(m) {
        return Err(Error::NotContained);
    }
    for x in r.basis() {
        for y in m.basis() {
            if !r.contains(&x.mul(&y)) || !r.contains(&y.mul(&x)) {
                return Err(Error::NotIdeal("R is not a two-sided ideal of M".into()));
            }
        }
    }
    let n = a.dim();
    let ideal = Subspace::span(
        a.field(),
        n,
        r.basis().iter().flat_map(|t| (0..n).map(|j| t.column(j)).collect::<Vec<_>>()),
    );
    let is_algebra_ideal = a.is_ideal(&ideal);
    Ok(RadicalAction {
        ideal,
        is_algebra_ideal,
    })
}

/// dim M(A) = n², which for A² ≠ 0 is equivalent to simplicity.
pub fn simplicity_by_dimension(a: &StructureAlgebra) -> Result<bool> {
    if a.is_zero_product() {
        return Err(Error::ZeroMultiplication);
    }
    let n = a.dim();
    Ok(generate_mult_algebra(a, false).dim() == n * n)
}

/// Summary of the multiplication algebra of one algebra.
#[derive(Clone, Debug, Serialize)]
pub struct MultAlgebraReport {
    pub dimension: usize,
    pub radical_dim: usize,
    /// dim rad^k for k = 1, 2, ... until zero or stabilization.
    pub radical_square_dims: Vec<usize>,
    pub quotient_identification: Option<String>,
    pub witnesses: Vec<String>,
}

/// Computes M(A), its trace-form radical and the radical's power chain; when
/// matrix-unit candidates are supplied they are verified modulo the radical.
pub fn mult_algebra_report(a: &StructureAlgebra, candidates: Option<&[MatrixUnitFamily]>) -> MultAlgebraReport {
    let n = a.dim();
    let m = generate_mult_algebra(a, false);
    let rad = trace_form_radical(&m);
    let chain = subspace_is_nilpotent(&m, &rad).expect("radical lies in M");
    let mut witnesses = Vec::new();
    let quotient_identification = if m.dim() == n * n && rad.dim() == 0 {
        witnesses.push(format!("M(A) = End(A), dimension {}", n * n));
        Some(format!("M{n}"))
    } else if let Some(c) = candidates {
        let rep = verify_matrix_units(&m, c, Some(&rad));
        witnesses.extend(rep.failures.iter().cloned());
        if let Some(id) = &rep.identification {
            witnesses.push(format!("matrix units verified: M/rad ≅ {id}"));
        }
        rep.identification
    } else {
        None
    };
    if chain.nilpotent {
        witnesses.push(format!("radical nilpotent of index {}", chain.index.unwrap_or(0)));
    }
    MultAlgebraReport {
        dimension: m.dim(),
        radical_dim: rad.dim(),
        radical_square_dims: chain.dims,
        quotient_identification,
        witnesses,
    }
}

/// Linear combination Σ c·E_ij of unit maps given with 1-based indices.
pub fn unit_combination(field: FieldSpec, n: usize, terms: &[(usize, usize, i64)]) -> LinearOp {
    terms.iter().fold(Matrix::zero(field, n, n), |acc, &(i, j, c)| {
        acc.add(&Matrix::unit_map(field, n, i, j).scale(&field.from_i64(c)))
    })
}
