//! Dense exact linear algebra: vectors, matrices, echelon subspaces.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// A coordinate vector over a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    field: FieldSpec,
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn new(field: FieldSpec, coords: Vec<Scalar>) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|c| !field.owns(c)) {
            return Err(Error::FieldMismatch {
                left: field.to_string(),
                right: bad.field().to_string(),
            });
        }
        Ok(Vector { field, coords })
    }

    pub(crate) fn from_raw(field: FieldSpec, coords: Vec<Scalar>) -> Self {
        Vector { field, coords }
    }

    pub fn zero(field: FieldSpec, n: usize) -> Self {
        Vector {
            field,
            coords: vec![field.zero(); n],
        }
    }

    /// The standard basis vector e_i (0-based index).
    pub fn basis(field: FieldSpec, n: usize, i: usize) -> Self {
        let mut v = Self::zero(field, n);
        v.coords[i] = field.one();
        v
    }

    pub fn from_i64(field: FieldSpec, coords: &[i64]) -> Self {
        Vector {
            field,
            coords: coords.iter().map(|&c| field.from_i64(c)).collect(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, o: &Vector) -> Vector {
        Vector {
            field: self.field,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Vector) -> Vector {
        Vector {
            field: self.field,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector {
            field: self.field,
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    /// Indices of nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.coords[i].is_zero()).collect()
    }

    pub fn random<R: rand::Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Vector {
        Vector {
            field,
            coords: (0..n).map(|_| field.random(rng)).collect(),
        }
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }
}

/// Prints `2e1 - 3e2`, using signed representatives for residues.
impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.signed_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            let coef = if mag == "1" { String::new() } else { mag };
            match (first, neg) {
                (true, true) => write!(f, "-{coef}e{}", i + 1)?,
                (true, false) => write!(f, "{coef}e{}", i + 1)?,
                (false, true) => write!(f, " - {coef}e{}", i + 1)?,
                (false, false) => write!(f, " + {coef}e{}", i + 1)?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A dense matrix. Square matrices used as operators follow the column-action
/// convention: column j holds the image of e_j.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// A linear operator on an algebra, stored in the column-action convention.
pub type LinearOp = Matrix;

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// The operator E_ij: e_i ↦ e_j, all other basis vectors ↦ 0
    /// (1-based indices). In column-action form its nonzero entry sits at (j, i).
    pub fn unit_map(field: FieldSpec, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        m.data[(j - 1) * n + (i - 1)] = field.one();
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        if let Some(bad) = data.iter().find(|s| !field.owns(s)) {
            return Err(Error::FieldMismatch {
                left: field.to_string(),
                right: bad.field().to_string(),
            });
        }
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, rows).expect("rectangular integer rows")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldSpec, n: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zero(field, n, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for i in 0..n {
                m.data[i * cols.len() + j] = v[i].clone();
            }
        }
        m
    }

    /// Rebuild an n×n matrix from its row-major flattening.
    pub fn from_flat(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    /// Row-major flattening.
    pub fn flat(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::from_raw(self.field, self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::from_raw(
            self.field,
            (0..self.rows).map(|i| self.get(i, j).clone()).collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Matrix::zero(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Commutator AB - BA.
    pub fn commutator(&self, o: &Matrix) -> Matrix {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim());
        let coords = (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = &acc + &(a * &v[j]);
                    }
                }
                acc
            })
            .collect();
        Vector::from_raw(self.field, coords)
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : Ax = 0}, one vector per free column, in increasing
    /// order of the free column.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![self.field.zero(); self.cols];
                x[f] = self.field.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = -r.get(row, f);
                }
                Vector::from_raw(self.field, x)
            })
            .collect()
    }

    /// A solution of Ax = b with every free variable set to zero, or `None`
    /// if the system is inconsistent.
    pub fn solve(&self, b: &Vector) -> Option<Vector> {
        assert_eq!(b.dim(), self.rows);
        let mut aug = Matrix::zero(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(Vector::from_raw(self.field, x))
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return self.field.zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -&det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zero(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zero(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Coefficients of det(tI - A), lowest degree first, by the division-free
    /// Berkowitz recurrence (valid in every characteristic).
    pub fn charpoly(&self) -> Vec<Scalar> {
        assert!(self.is_square());
        let f = self.field;
        let n = self.rows;
        // Highest degree first while iterating.
        let mut c: Vec<Scalar> = vec![f.one()];
        for r in 0..n {
            // Leading (r+1)×(r+1) block: a = A[r][r], row R = A[r][0..r],
            // column S = A[0..r][r], M = leading r×r block.
            let a = self.get(r, r).clone();
            let mut toeplitz = Vec::with_capacity(r + 2);
            toeplitz.push(f.one());
            toeplitz.push(-&a);
            let mut s: Vec<Scalar> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for _ in 0..r {
                let rs = (0..r).fold(f.zero(), |acc, j| &acc + &(self.get(r, j) * &s[j]));
                toeplitz.push(-&rs);
                s = (0..r)
                    .map(|i| (0..r).fold(f.zero(), |acc, j| &acc + &(self.get(i, j) * &s[j])))
                    .collect();
            }
            let mut next = vec![f.zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, cj) in c.iter().enumerate() {
                    if i >= j {
                        *slot = &*slot + &(&toeplitz[i - j] * cj);
                    }
                }
            }
            c = next;
        }
        c.reverse();
        c
    }

    /// Entries as exact strings, row by row.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).signed_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// A subspace of F^m kept as a reduced row echelon basis. Two subspaces are
/// equal exactly when their echelon bases are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Self::span(field, ambient, (0..ambient).map(|i| Vector::basis(field, ambient, i)))
    }

    pub fn span<I: IntoIterator<Item = Vector>>(field: FieldSpec, ambient: usize, vs: I) -> Self {
        let mut s = Self::zero(field, ambient);
        for v in vs {
            s.insert(v.coords());
        }
        s
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The echelon basis.
    pub fn basis(&self) -> Vec<Vector> {
        self.rows
            .iter()
            .map(|r| Vector::from_raw(self.field, r.clone()))
            .collect()
    }

    pub(crate) fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// Residue of v after elimination against the basis.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (wi, ri) in w.iter_mut().zip(row).skip(p) {
                if !ri.is_zero() {
                    *wi = &*wi - &(&f * ri);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn contains_vector(&self, v: &Vector) -> bool {
        self.contains(v.coords())
    }

    /// Adjoin v; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient dimension");
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        for x in w.iter_mut().skip(p) {
            *x = &*x * &inv;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (ri, wi) in row.iter_mut().zip(&w).skip(p) {
                if !wi.is_zero() {
                    *ri = &*ri - &(&f * wi);
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, w);
        true
    }

    /// Coordinates of v with respect to the echelon basis, if v lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis().iter().map(ToString::to_string).collect();
        write!(f, "span{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn unit_map_sends_ei_to_ej() {
        let e = Matrix::unit_map(q(), 4, 2, 3);
        assert_eq!(e.apply(&Vector::basis(q(), 4, 1)), Vector::basis(q(), 4, 2));
        assert!(e.apply(&Vector::basis(q(), 4, 2)).is_zero());
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        let a = Matrix::from_i64_rows(q(), &[vec![1, 1, 0], vec![0, 0, 1]]);
        let x = a.solve(&Vector::from_i64(q(), &[2, 5])).unwrap();
        assert_eq!(x, Vector::from_i64(q(), &[2, 0, 5]));
        let inconsistent = Matrix::from_i64_rows(q(), &[vec![1, 1], vec![1, 1]]);
        assert!(inconsistent.solve(&Vector::from_i64(q(), &[1, 2])).is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = Matrix::from_i64_rows(q(), &[vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 0]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.apply(&v).is_zero());
        }
    }

    #[test]
    fn det_and_inverse() {
        let f = FieldSpec::Prime(7);
        let a = Matrix::from_i64_rows(f, &[vec![2, 1], vec![5, 3]]);
        assert_eq!(a.det(), f.from_i64(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(f, 2));
        let s = Matrix::from_i64_rows(f, &[vec![1, 2], vec![4, 1]]);
        assert!(s.det().is_zero());
        assert!(s.inverse().is_none());
    }

    #[test]
    fn charpoly_of_companion() {
        // Companion matrix of t^3 - 2t^2 + 5t - 7.
        let a = Matrix::from_i64_rows(q(), &[vec![0, 0, 7], vec![1, 0, -5], vec![0, 1, 2]]);
        let c: Vec<String> = a.charpoly().iter().map(ToString::to_string).collect();
        assert_eq!(c, ["-7", "5", "-2", "1"]);
        let z = Matrix::zero(q(), 3, 3).charpoly();
        assert!(z[..3].iter().all(Scalar::is_zero) && z[3].is_one());
    }

    #[test]
    fn subspace_echelon_is_canonical() {
        let a = Subspace::span(
            q(),
            3,
            [Vector::from_i64(q(), &[1, 1, 0]), Vector::from_i64(q(), &[0, 1, 1])],
        );
        let b = Subspace::span(
            q(),
            3,
            [Vector::from_i64(q(), &[1, 2, 1]), Vector::from_i64(q(), &[1, 0, -1])],
        );
        assert_eq!(a, b);
        assert!(a.contains_vector(&Vector::from_i64(q(), &[2, 3, 1])));
        assert!(!a.contains_vector(&Vector::from_i64(q(), &[0, 0, 1])));
        assert_eq!(a.coordinates(&[q().from_i64(2), q().from_i64(3), q().from_i64(1)]).unwrap().len(), 2);
    }

    #[test]
    fn vector_display() {
        let f = FieldSpec::Prime(5);
        assert_eq!(Vector::from_i64(f, &[0, 1, 0, -2]).to_string(), "e2 - 2e4");
        assert_eq!(Vector::zero(f, 2).to_string(), "0");
    }
}
