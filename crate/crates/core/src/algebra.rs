//! Algebras given by structure constants.
//!
//! Basis indices are 0-based in the API and printed 1-based (`e1`, `e2`, ...).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{LinearOp, Matrix, Subspace, Vector};

/// A finite-dimensional algebra with e_i·e_j = Σ_k c_{ij}^k e_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureAlgebra {
    name: Option<String>,
    field: FieldSpec,
    dim: usize,
    table: Vec<Scalar>,
}

impl StructureAlgebra {
    /// `table[(i*n + j)*n + k]` is c_{ij}^k.
    pub fn new(name: Option<String>, field: FieldSpec, dim: usize, table: Vec<Scalar>) -> Result<Self> {
        if table.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                found: table.len(),
            });
        }
        if let Some(bad) = table.iter().find(|s| !field.owns(s)) {
            return Err(Error::FieldMismatch {
                left: field.to_string(),
                right: bad.field().to_string(),
            });
        }
        Ok(StructureAlgebra {
            name,
            field,
            dim,
            table,
        })
    }

    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        StructureAlgebra {
            name: Some(format!("zero{dim}")),
            field,
            dim,
            table: vec![field.zero(); dim * dim * dim],
        }
    }

    /// Build from sparse integer entries `(i, j, k, c)` meaning c_{ij}^k = c,
    /// with 1-based indices as printed in multiplication tables.
    pub fn from_integer_entries(
        name: &str,
        field: FieldSpec,
        dim: usize,
        entries: &[(usize, usize, usize, i64)],
    ) -> Self {
        let mut table = vec![field.zero(); dim * dim * dim];
        for &(i, j, k, c) in entries {
            let idx = ((i - 1) * dim + (j - 1)) * dim + (k - 1);
            table[idx] = &table[idx] + &field.from_i64(c);
        }
        StructureAlgebra {
            name: Some(name.to_string()),
            field,
            dim,
            table,
        }
    }

    /// The table of a rational algebra read modulo p, or `None` when some
    /// structure constant has a denominator divisible by p.
    pub fn reduce_mod(&self, p: u64) -> Result<Option<StructureAlgebra>> {
        let target = FieldSpec::prime(p)?;
        if self.field != FieldSpec::Rationals {
            return Err(Error::OutOfDomain("only rational tables are reduced".into()));
        }
        let mut table = Vec::with_capacity(self.table.len());
        for s in &self.table {
            let r = s.as_rational().expect("rational table");
            let den = target.from_bigint(r.denom());
            match target.from_bigint(r.numer()).checked_div(&den) {
                Ok(v) => table.push(v),
                Err(_) => return Ok(None),
            }
        }
        Ok(Some(StructureAlgebra::new(self.name.clone(), target, self.dim, table)?))
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let n = self.dim;
        self.table[(i * n + j) * n + k] = v;
    }

    pub(crate) fn table(&self) -> &[Scalar] {
        &self.table
    }

    /// e_i·e_j.
    pub fn product(&self, i: usize, j: usize) -> Vector {
        let n = self.dim;
        let start = (i * n + j) * n;
        Vector::from_raw(self.field, self.table[start..start + n].to_vec())
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::basis(self.field, self.dim, i)
    }

    pub fn zero_vector(&self) -> Vector {
        Vector::zero(self.field, self.dim)
    }

    /// Build a vector from 1-based `(index, coefficient)` pairs.
    pub fn vector(&self, terms: &[(usize, i64)]) -> Vector {
        let mut c = vec![0i64; self.dim];
        for &(i, a) in terms {
            c[i - 1] += a;
        }
        Vector::from_i64(self.field, &c)
    }

    fn check_vector(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        if x.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: x.field().to_string(),
            });
        }
        Ok(())
    }

    /// Bilinear extension of the table.
    pub fn multiply(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim;
        let mut out = vec![self.field.zero(); n];
        for i in x.support() {
            for j in y.support() {
                let xy = &x[i] * &y[j];
                let start = (i * n + j) * n;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.table[start + k];
                    if !c.is_zero() {
                        *o = &*o + &(&xy * c);
                    }
                }
            }
        }
        Vector::from_raw(self.field, out)
    }

    /// L_x: column j is x·e_j.
    pub fn left_mult(&self, x: &Vector) -> Result<LinearOp> {
        self.check_vector(x)?;
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.mul_unchecked(x, &self.basis_vector(j)))
            .collect();
        Ok(Matrix::from_columns(self.field, self.dim, &cols))
    }

    /// R_x: column j is e_j·x.
    pub fn right_mult(&self, x: &Vector) -> Result<LinearOp> {
        self.check_vector(x)?;
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.mul_unchecked(&self.basis_vector(j), x))
            .collect();
        Ok(Matrix::from_columns(self.field, self.dim, &cols))
    }

    pub fn left_mult_basis(&self, i: usize) -> LinearOp {
        self.left_mult(&self.basis_vector(i)).expect("basis vector")
    }

    pub fn right_mult_basis(&self, i: usize) -> LinearOp {
        self.right_mult(&self.basis_vector(i)).expect("basis vector")
    }

    /// True when every product vanishes.
    pub fn is_zero_product(&self) -> bool {
        self.table.iter().all(Scalar::is_zero)
    }

    /// Entries where two tables of the same shape differ: `(i, j, k, self, other)`.
    pub fn table_differences(&self, other: &StructureAlgebra) -> Vec<(usize, usize, usize, Scalar, Scalar)> {
        let n = self.dim;
        let mut out = Vec::new();
        if other.dim != n {
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b) = (self.coeff(i, j, k), other.coeff(i, j, k));
                    if a != b {
                        out.push((i, j, k, a.clone(), b.clone()));
                    }
                }
            }
        }
        out
    }

    /// Checks A·I ⊆ I and I·A ⊆ I, naming the first violating product.
    pub fn check_ideal(&self, ideal: &Subspace) -> Result<()> {
        for v in ideal.basis() {
            for j in 0..self.dim {
                let e = self.basis_vector(j);
                let left = self.mul_unchecked(&e, &v);
                if !ideal.contains_vector(&left) {
                    return Err(Error::NotIdeal(format!("e{}·({v}) = {left}", j + 1)));
                }
                let right = self.mul_unchecked(&v, &e);
                if !ideal.contains_vector(&right) {
                    return Err(Error::NotIdeal(format!("({v})·e{} = {right}", j + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn is_ideal(&self, ideal: &Subspace) -> bool {
        self.check_ideal(ideal).is_ok()
    }

    /// Restriction of the table to span{e_i : i ∈ idx}; fails with the first
    /// product (scanned row-major over idx × idx) that leaves the span.
    pub fn subalgebra_on_indices(&self, idx: &[usize]) -> Result<StructureAlgebra> {
        let m = idx.len();
        let mut table = Vec::with_capacity(m * m * m);
        for &i in idx {
            for &j in idx {
                let p = self.product(i, j);
                if p.support().iter().any(|k| !idx.contains(k)) {
                    return Err(Error::NotClosed {
                        i: i + 1,
                        j: j + 1,
                        product: p.to_string(),
                    });
                }
                table.extend(idx.iter().map(|&k| p[k].clone()));
            }
        }
        StructureAlgebra::new(self.name.clone(), self.field, m, table)
    }

    /// Structure constants of the subalgebra spanned by linearly independent
    /// `basis`, expressed in that basis.
    pub fn restrict_to_basis(&self, basis: &[Vector]) -> Result<StructureAlgebra> {
        let m = basis.len();
        let b = Matrix::from_columns(self.field, self.dim, basis);
        if b.rank() != m {
            return Err(Error::OutOfDomain("restriction basis is linearly dependent".into()));
        }
        let mut table = Vec::with_capacity(m * m * m);
        for (a, x) in basis.iter().enumerate() {
            for (c, y) in basis.iter().enumerate() {
                let p = self.mul_unchecked(x, y);
                let coords = b.solve(&p).ok_or_else(|| Error::NotClosed {
                    i: a + 1,
                    j: c + 1,
                    product: p.to_string(),
                })?;
                table.extend(coords.into_coords());
            }
        }
        StructureAlgebra::new(self.name.clone(), self.field, m, table)
    }

    /// The same algebra written in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<StructureAlgebra> {
        if p.rows() != self.dim || !p.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.rows(),
            });
        }
        let inv = p.inverse().ok_or_else(|| Error::SingularBasisChange {
            field: self.field.to_string(),
            det: p.det().to_string(),
        })?;
        let cols: Vec<Vector> = (0..self.dim).map(|j| p.column(j)).collect();
        let mut table = Vec::with_capacity(self.table.len());
        for x in &cols {
            for y in &cols {
                table.extend(inv.apply(&self.mul_unchecked(x, y)).into_coords());
            }
        }
        StructureAlgebra::new(self.name.clone(), self.field, self.dim, table)
    }

    /// A/I on the complement spanned by the standard basis vectors that are
    /// not pivots of I's echelon basis.
    pub fn quotient_by_ideal(&self, ideal: &Subspace) -> Result<Quotient> {
        let complement: Vec<Vector> = (0..self.dim)
            .filter(|i| !ideal.pivots().contains(i))
            .map(|i| self.basis_vector(i))
            .collect();
        self.quotient_with_complement(ideal, &complement)
    }

    /// A/I with the classes of `complement` as basis.
    pub fn quotient_with_complement(&self, ideal: &Subspace, complement: &[Vector]) -> Result<Quotient> {
        self.check_ideal(ideal)?;
        let k = complement.len();
        let mut cols = complement.to_vec();
        cols.extend(ideal.basis());
        if cols.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim - ideal.dim(),
                found: k,
            });
        }
        let q = Matrix::from_columns(self.field, self.dim, &cols);
        let qinv = q.inverse().ok_or_else(|| {
            Error::OutOfDomain("complement together with the ideal is not a basis".into())
        })?;
        let mut proj = Matrix::zero(self.field, k, self.dim);
        for i in 0..k {
            for j in 0..self.dim {
                proj.set(i, j, qinv.get(i, j).clone());
            }
        }
        let mut table = Vec::with_capacity(k * k * k);
        for x in complement {
            for y in complement {
                table.extend(proj.apply(&self.mul_unchecked(x, y)).into_coords());
            }
        }
        let name = self.name.as_ref().map(|n| format!("{n}/I"));
        Ok(Quotient {
            algebra: StructureAlgebra::new(name, self.field, k, table)?,
            projection: proj,
            complement: complement.to_vec(),
        })
    }

    /// Left, right and two-sided annihilators as nullspaces.
    pub fn annihilators(&self) -> Annihilators {
        let n = self.dim;
        let f = self.field;
        // Row (j, k) of the left system: Σ_i x_i c_{ij}^k = 0.
        let mut left = Matrix::zero(f, n * n, n);
        let mut right = Matrix::zero(f, n * n, n);
        for j in 0..n {
            for k in 0..n {
                for i in 0..n {
                    left.set(j * n + k, i, self.coeff(i, j, k).clone());
                    right.set(j * n + k, i, self.coeff(j, i, k).clone());
                }
            }
        }
        let mut both = Matrix::zero(f, 2 * n * n, n);
        for r in 0..n * n {
            for i in 0..n {
                both.set(r, i, left.get(r, i).clone());
                both.set(n * n + r, i, right.get(r, i).clone());
            }
        }
        let span = |m: &Matrix| Subspace::span(f, n, m.nullspace());
        Annihilators {
            left: span(&left),
            right: span(&right),
            two_sided: span(&both),
        }
    }

    /// Checks that `m` (column action, A → B) is invertible and satisfies
    /// m(e_i e_j) = m(e_i) m(e_j) for all basis pairs.
    pub fn verify_homomorphism(&self, target: &StructureAlgebra, m: &Matrix) -> Result<HomomorphismReport> {
        if target.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: target.dim,
            });
        }
        if target.field != self.field || m.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: target.field.to_string(),
            });
        }
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.rows(),
            });
        }
        let images: Vec<Vector> = (0..self.dim).map(|j| m.column(j)).collect();
        let mut violations = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let expected = m.apply(&self.product(i, j));
                let actual = target.mul_unchecked(&images[i], &images[j]);
                if expected != actual {
                    violations.push(HomViolation {
                        i,
                        j,
                        image_of_product: expected,
                        product_of_images: actual,
                    });
                }
            }
        }
        Ok(HomomorphismReport {
            invertible: !m.det().is_zero(),
            violations,
        })
    }

    /// Fast yes/no version of `verify_homomorphism` for A → A, stopping at
    /// the first violation.
    pub fn is_automorphism(&self, m: &Matrix) -> bool {
        let images: Vec<Vector> = (0..self.dim).map(|j| m.column(j)).collect();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if m.apply(&self.product(i, j)) != self.mul_unchecked(&images[i], &images[j]) {
                    return false;
                }
            }
        }
        !m.det().is_zero()
    }

    /// Span of all products, A².
    pub fn square(&self) -> Subspace {
        let n = self.dim;
        Subspace::span(
            self.field,
            n,
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.product(i, j)),
        )
    }

    pub fn to_file(&self) -> AlgebraFile {
        let n = self.dim;
        AlgebraFile {
            name: self.name.clone().unwrap_or_default(),
            field: self.field,
            dim: n,
            table: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| self.coeff(i, j, k).to_string()).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: AlgebraFile = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn from_file(file: AlgebraFile) -> Result<Self> {
        let n = file.dim;
        if file.table.len() != n {
            return Err(Error::Format(format!("table has {} rows, expected {n}", file.table.len())));
        }
        let mut table = Vec::with_capacity(n * n * n);
        for (i, row) in file.table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!("row e{} has {} entries, expected {n}", i + 1, row.len())));
            }
            for (j, cell) in row.iter().enumerate() {
                if cell.len() != n {
                    return Err(Error::Format(format!(
                        "product e{}e{} has {} coefficients, expected {n}",
                        i + 1,
                        j + 1,
                        cell.len()
                    )));
                }
                for tok in cell {
                    table.push(file.field.parse_scalar(tok)?);
                }
            }
        }
        let name = (!file.name.is_empty()).then_some(file.name);
        Self::new(name, file.field, n, table)
    }
}

/// Human-readable multiplication table.
impl fmt::Display for StructureAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim;
        writeln!(
            f,
            "{} over {} (dim {n})",
            self.name.as_deref().unwrap_or("algebra"),
            self.field
        )?;
        let cells: Vec<Vec<String>> = (0..n)
            .map(|i| (0..n).map(|j| self.product(i, j).to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1).max(3);
        let header: Vec<String> = (0..n).map(|j| format!("{:>width$}", format!("e{}", j + 1))).collect();
        writeln!(f, "{:>4} | {}", "", header.join(" | "))?;
        for (i, row) in cells.iter().enumerate() {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{:>4} | {}", format!("e{}", i + 1), line.join(" | "))?;
        }
        Ok(())
    }
}

/// On-disk form of a structure algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub field: FieldSpec,
    pub dim: usize,
    pub table: Vec<Vec<Vec<String>>>,
}

/// A quotient algebra together with the projection A → A/I in the chosen
/// complement basis.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: StructureAlgebra,
    pub projection: Matrix,
    pub complement: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annihilators {
    pub left: Subspace,
    pub right: Subspace,
    pub two_sided: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomViolation {
    pub i: usize,
    pub j: usize,
    pub image_of_product: Vector,
    pub product_of_images: Vector,
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "θ(e{}e{}) = {} but θ(e{})θ(e{}) = {}",
            self.i + 1,
            self.j + 1,
            self.image_of_product,
            self.i + 1,
            self.j + 1,
            self.product_of_images
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomomorphismReport {
    pub invertible: bool,
    pub violations: Vec<HomViolation>,
}

impl HomomorphismReport {
    pub fn passed(&self) -> bool {
        self.invertible && self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, CatalogName};

    #[test]
    fn json_roundtrip_preserves_bytes() {
        let a = catalog(CatalogName::S2, FieldSpec::Rationals).unwrap();
        let s = a.to_json();
        let b = StructureAlgebra::from_json(&s).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.to_json(), s);
    }

    #[test]
    fn loader_rejects_inexact_tokens() {
        let a = catalog(CatalogName::S2, FieldSpec::Rationals).unwrap();
        let s = a.to_json().replacen("\"-1\"", "\"-1.0\"", 1);
        assert!(matches!(StructureAlgebra::from_json(&s), Err(Error::InexactScalar(_))));
    }

    #[test]
    fn zero_dimensional_quotient() {
        let a = catalog(CatalogName::S2, FieldSpec::Rationals).unwrap();
        let q = a.quotient_by_ideal(&Subspace::full(a.field(), 4)).unwrap();
        assert_eq!(q.algebra.dim(), 0);
    }

    #[test]
    fn non_ideal_is_rejected() {
        let a = catalog(CatalogName::S2, FieldSpec::Rationals).unwrap();
        let s = Subspace::span(a.field(), 4, [a.basis_vector(0)]);
        assert!(matches!(a.quotient_by_ideal(&s), Err(Error::NotIdeal(_))));
    }
}
