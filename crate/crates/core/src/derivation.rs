//! Derivation algebras from the Leibniz linear system.

use serde::Serialize;

use crate::algebra::StructureAlgebra;
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{LinearOp, Matrix, Vector};

/// Der(A) with a basis and bracket constants:
/// [D_a, D_b] = Σ_c bracket[a][b][c] D_c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationAlgebra {
    pub field: FieldSpec,
    pub n: usize,
    pub basis: Vec<LinearOp>,
    pub bracket: Vec<Vec<Vec<Scalar>>>,
}

/// Row-major index of D[r][c] among the n² unknowns.
fn var(n: usize, r: usize, c: usize) -> usize {
    r * n + c
}

/// The system D(e_ie_j) − D(e_i)e_j − e_iD(e_j) = 0, one row per (i, j, m).
pub fn leibniz_system(a: &StructureAlgebra) -> Matrix {
    let n = a.dim();
    let f = a.field();
    let mut sys = Matrix::zero(f, n * n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                let row = (i * n + j) * n + m;
                let mut add = |col: usize, v: &Scalar| {
                    let cur = sys.get(row, col).clone();
                    sys.set(row, col, &cur + v);
                };
                for l in 0..n {
                    let c = a.coeff(i, j, l);
                    if !c.is_zero() {
                        add(var(n, m, l), c);
                    }
                }
                for k in 0..n {
                    let c = a.coeff(k, j, m);
                    if !c.is_zero() {
                        add(var(n, k, i), &-c);
                    }
                    let c = a.coeff(i, k, m);
                    if !c.is_zero() {
                        add(var(n, k, j), &-c);
                    }
                }
            }
        }
    }
    sys
}

/// (i, j) pairs, 0-based, where D(e_ie_j) ≠ D(e_i)e_j + e_iD(e_j).
pub fn leibniz_violations(a: &StructureAlgebra, d: &LinearOp) -> Vec<(usize, usize)> {
    let n = a.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (a.basis_vector(i), a.basis_vector(j));
            let lhs = d.apply(&a.product(i, j));
            let rhs = a
                .multiply(&d.apply(&ei), &ej)
                .expect("same dimension")
                .add(&a.multiply(&ei, &d.apply(&ej)).expect("same dimension"));
            if lhs != rhs {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn is_derivation(a: &StructureAlgebra, d: &LinearOp) -> bool {
    leibniz_violations(a, d).is_empty()
}

pub fn derivations(a: &StructureAlgebra) -> DerivationAlgebra {
    let n = a.dim();
    let field = a.field();
    let basis: Vec<LinearOp> = leibniz_system(a)
        .nullspace()
        .into_iter()
        .map(|v| Matrix::from_flat(field, n, n, v.into_coords()))
        .collect();
    let mut der = DerivationAlgebra {
        field,
        n,
        basis,
        bracket: Vec::new(),
    };
    let d = der.dim();
    der.bracket = (0..d)
        .map(|x| {
            (0..d)
                .map(|y| {
                    let b = der.basis[x].commutator(&der.basis[y]);
                    der.coordinates(&b).expect("derivations are closed under the bracket")
                })
                .collect()
        })
        .collect();
    der
}

impl DerivationAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `op` in the basis, or `None` if it is not in the span.
    pub fn coordinates(&self, op: &LinearOp) -> Option<Vec<Scalar>> {
        if self.basis.is_empty() {
            return op.is_zero().then(Vec::new);
        }
        let cols: Vec<Vector> = self
            .basis
            .iter()
            .map(|b| Vector::from_raw(self.field, b.flat().to_vec()))
            .collect();
        let m = Matrix::from_columns(self.field, self.n * self.n, &cols);
        let target = Vector::from_raw(self.field, op.flat().to_vec());
        m.solve(&target).map(Vector::into_coords)
    }

    pub fn combination(&self, coords: &[Scalar]) -> LinearOp {
        self.basis
            .iter()
            .zip(coords)
            .fold(Matrix::zero(self.field, self.n, self.n), |acc, (b, c)| acc.add(&b.scale(c)))
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().flatten().flatten().all(Scalar::is_zero)
    }

    /// Every bracket of basis elements is again a derivation of `a` and the
    /// stored constants reproduce it.
    pub fn closure_check(&self, a: &StructureAlgebra) -> bool {
        (0..self.dim()).all(|x| {
            (0..self.dim()).all(|y| {
                let b = self.basis[x].commutator(&self.basis[y]);
                is_derivation(a, &b) && self.combination(&self.bracket[x][y]) == b
            })
        })
    }
}

/// A basis (h, x) of a 2-dimensional Der(A) with [h, x] = x.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Aff2Normalization {
    Normalized {
        h: Vec<String>,
        x: Vec<String>,
    },
    Abelian,
    WrongDimension {
        dim: usize,
    },
}

/// Takes x = [D₁, D₂] and the first basis element h with [h, x] = γx, γ ≠ 0,
/// rescaled by 1/γ. Coordinates are reported in the derivation basis.
pub fn normalize_aff2(der: &DerivationAlgebra) -> (Aff2Normalization, Option<(LinearOp, LinearOp)>) {
    if der.dim() != 2 {
        return (Aff2Normalization::WrongDimension { dim: der.dim() }, None);
    }
    if der.is_abelian() {
        return (Aff2Normalization::Abelian, None);
    }
    let x_coords = der.bracket[0][1].clone();
    let x = der.combination(&x_coords);
    let pivot = x_coords.iter().position(|c| !c.is_zero()).expect("nonzero bracket");
    for k in 0..2 {
        let hx = der.basis[k].commutator(&x);
        let gamma = der.coordinates(&hx).expect("closed")[pivot].checked_div(&x_coords[pivot]);
        if let Some(gamma) = gamma.ok().filter(|g| !g.is_zero()) {
            let inv = gamma.inv().expect("nonzero");
            let mut h_coords = vec![der.field.zero(); 2];
            h_coords[k] = inv;
            let h = der.combination(&h_coords);
            let show = |v: &[Scalar]| v.iter().map(|s| s.to_string()).collect();
            return (
                Aff2Normalization::Normalized {
                    h: show(&h_coords),
                    x: show(&x_coords),
                },
                Some((h, x)),
            );
        }
    }
    (Aff2Normalization::Abelian, None)
}
