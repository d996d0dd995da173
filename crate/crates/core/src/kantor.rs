//! The Kantor product on bilinear maps, the algebra W(n), conservative and
//! terminal identities, and characteristic-polynomial invariants.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::StructureAlgebra;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{LinearOp, Matrix, Vector};

/// A bilinear map V_n × V_n → V_n with B(v_i, v_j) = Σ_k b_{ij}^k v_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearMap {
    field: FieldSpec,
    n: usize,
    tensor: Vec<Scalar>,
}

impl BilinearMap {
    pub fn zero(field: FieldSpec, n: usize) -> Self {
        BilinearMap {
            field,
            n,
            tensor: vec![field.zero(); n * n * n],
        }
    }

    pub fn from_tensor(field: FieldSpec, n: usize, tensor: Vec<Scalar>) -> Result<Self> {
        if tensor.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                found: tensor.len(),
            });
        }
        Ok(BilinearMap { field, n, tensor })
    }

    /// α_{ij}^k: (v_t, v_l) ↦ δ_{it} δ_{jl} v_k, with 0-based indices.
    pub fn alpha(field: FieldSpec, n: usize, i: usize, j: usize, k: usize) -> Self {
        let mut b = Self::zero(field, n);
        b.tensor[(i * n + j) * n + k] = field.one();
        b
    }

    /// The multiplication of an algebra as a bilinear map.
    pub fn of_algebra(a: &StructureAlgebra) -> Self {
        BilinearMap {
            field: a.field(),
            n: a.dim(),
            tensor: a.table().to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn tensor(&self) -> &[Scalar] {
        &self.tensor
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.tensor[(i * self.n + j) * self.n + k]
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.n;
        let mut out = vec![self.field.zero(); n];
        for i in x.support() {
            for j in y.support() {
                let xy = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.coeff(i, j, k);
                    if !c.is_zero() {
                        *o = &*o + &(&xy * c);
                    }
                }
            }
        }
        Vector::from_raw(self.field, out)
    }

    /// x ↦ B(v, x).
    pub fn left_partial(&self, v: &Vector) -> LinearOp {
        let cols: Vec<Vector> = (0..self.n)
            .map(|j| self.eval(v, &Vector::basis(self.field, self.n, j)))
            .collect();
        Matrix::from_columns(self.field, self.n, &cols)
    }

    pub fn add(&self, o: &BilinearMap) -> BilinearMap {
        BilinearMap {
            field: self.field,
            n: self.n,
            tensor: self.tensor.iter().zip(&o.tensor).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> BilinearMap {
        BilinearMap {
            field: self.field,
            n: self.n,
            tensor: self.tensor.iter().map(|a| a * s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.iter().all(Scalar::is_zero)
    }
}

/// [T, B](x, y) = T(B(x, y)) − B(Tx, y) − B(x, Ty).
pub fn map_bracket(t: &LinearOp, b: &BilinearMap) -> Result<BilinearMap> {
    let n = b.n;
    if t.rows() != n || t.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: t.rows(),
        });
    }
    let f = b.field;
    let basis: Vec<Vector> = (0..n).map(|i| Vector::basis(f, n, i)).collect();
    let images: Vec<Vector> = (0..n).map(|i| t.column(i)).collect();
    let mut tensor = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            let v = t
                .apply(&b.eval(&basis[i], &basis[j]))
                .sub(&b.eval(&images[i], &basis[j]))
                .sub(&b.eval(&basis[i], &images[j]));
            tensor.extend(v.into_coords());
        }
    }
    Ok(BilinearMap { field: f, n, tensor })
}

/// Kantor's algebra W(n): all bilinear maps on V_n with A·B = [L_{v₁}^A, B],
/// on the basis α_{ij}^k ordered by (i, j, k).
#[derive(Clone, Debug)]
pub struct KantorAlgebra {
    pub algebra: StructureAlgebra,
    pub n: usize,
    pub labels: Vec<String>,
}

pub fn alpha_index(n: usize, i: usize, j: usize, k: usize) -> usize {
    (i * n + j) * n + k
}

pub fn build_w(n: usize, field: FieldSpec) -> KantorAlgebra {
    let dim = n * n * n;
    let v1 = Vector::basis(field, n, 0);
    let basis: Vec<BilinearMap> = (0..dim)
        .map(|a| BilinearMap::alpha(field, n, a / (n * n), (a / n) % n, a % n))
        .collect();
    let mut table = Vec::with_capacity(dim * dim * dim);
    for a in &basis {
        let la = a.left_partial(&v1);
        for b in &basis {
            let prod = map_bracket(&la, b).expect("same dimension");
            table.extend(prod.tensor);
        }
    }
    let labels = (0..dim)
        .map(|a| format!("a{}{}^{}", a / (n * n) + 1, (a / n) % n + 1, a % n + 1))
        .collect();
    KantorAlgebra {
        algebra: StructureAlgebra::new(Some(format!("W({n})")), field, dim, table).expect("consistent table"),
        n,
        labels,
    }
}

pub fn build_w2(field: FieldSpec) -> KantorAlgebra {
    build_w(2, field)
}

/// Columns are e₁..e₈ written in the α-basis of W(2).
pub fn e_basis_matrix(field: FieldSpec) -> Matrix {
    let a = |i: usize, j: usize, k: usize| alpha_index(2, i - 1, j - 1, k - 1);
    let columns: [&[(usize, i64)]; 8] = [
        &[(a(1, 1, 1), 1), (a(1, 2, 2), -1), (a(2, 1, 2), -1)],
        &[(a(1, 1, 2), 1)],
        &[(a(2, 2, 2), 1), (a(1, 2, 1), -1), (a(2, 1, 1), -1)],
        &[(a(2, 2, 1), 1)],
        &[(a(1, 1, 1), 2), (a(1, 2, 2), 1), (a(2, 1, 2), 1)],
        &[(a(2, 2, 2), 2), (a(1, 2, 1), 1), (a(2, 1, 1), 1)],
        &[(a(1, 2, 1), 1), (a(2, 1, 1), -1)],
        &[(a(1, 2, 2), 1), (a(2, 1, 2), -1)],
    ];
    let mut m = Matrix::zero(field, 8, 8);
    for (col, terms) in columns.iter().enumerate() {
        for &(row, c) in *terms {
            m.set(row, col, field.from_i64(c));
        }
    }
    m
}

/// W(2) rewritten in the basis e₁..e₈. Fails when the basis change is
/// singular over the field (it has determinant 36).
pub fn change_to_e_basis(k: &KantorAlgebra) -> Result<StructureAlgebra> {
    if k.n != 2 {
        return Err(Error::OutOfDomain(format!(
            "the e-basis is defined for W(2) only, not W({})",
            k.n
        )));
    }
    let field = k.algebra.field();
    let p = e_basis_matrix(field);
    let det = p.det();
    if det.is_zero() {
        return Err(Error::SingularBasisChange {
            field: field.to_string(),
            det: det.to_string(),
        });
    }
    Ok(k.algebra.change_basis(&p)?.with_name("W2x2"))
}

/// Result of searching for an associated product F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConservativityOutcome {
    /// A bilinear F satisfying the conservative identity on all basis pairs.
    /// It is a witness, not necessarily the canonical associated product.
    Witness(BilinearMap),
    /// No c solves [L_c, P] = −[L_b, [L_a, P]] for the pair (a, b) (0-based).
    Infeasible { a: usize, b: usize },
}

pub const WITNESS_NOTE: &str = "a witness, not necessarily the canonical F";

/// For each basis pair (a, b), solve [L_c, P] = −[L_b, [L_a, P]] for c,
/// with free variables set to zero.
pub fn conservativity_witness(a: &StructureAlgebra) -> ConservativityOutcome {
    let n = a.dim();
    let f = a.field();
    if n == 0 {
        return ConservativityOutcome::Witness(BilinearMap::zero(f, 0));
    }
    let p = BilinearMap::of_algebra(a);
    let lefts: Vec<LinearOp> = (0..n).map(|i| a.left_mult_basis(i)).collect();
    let brackets: Vec<BilinearMap> = lefts
        .iter()
        .map(|l| map_bracket(l, &p).expect("same dimension"))
        .collect();
    let mut system = Matrix::zero(f, n * n * n, n);
    for (c, br) in brackets.iter().enumerate() {
        for (r, v) in br.tensor.iter().enumerate() {
            system.set(r, c, v.clone());
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let solutions: Vec<Option<Vector>> = pairs
        .par_iter()
        .map(|&(ia, ib)| {
            let inner = &brackets[ia];
            let outer = map_bracket(&lefts[ib], inner).expect("same dimension");
            let rhs = Vector::from_raw(f, outer.tensor.iter().map(|s| -s).collect());
            system.solve(&rhs)
        })
        .collect();
    let mut tensor = Vec::with_capacity(n * n * n);
    for (&(ia, ib), sol) in pairs.iter().zip(solutions) {
        match sol {
            Some(c) => tensor.extend(c.into_coords()),
            None => return ConservativityOutcome::Infeasible { a: ia, b: ib },
        }
    }
    ConservativityOutcome::Witness(BilinearMap { field: f, n, tensor })
}

/// Outcome of an exhaustive identity check over basis quadruples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub checked: usize,
    /// Violating quadruples (a, b, x, y), 0-based, sorted.
    pub violations: Vec<[usize; 4]>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Substitutes F into [L_b, [L_a, P]] = −[L_{F(a,b)}, P] and evaluates both
/// sides on every basis quadruple, expanding the brackets into products.
pub fn check_conservative_identity(a: &StructureAlgebra, fmap: &BilinearMap) -> IdentityReport {
    let n = a.dim();
    let e: Vec<Vector> = (0..n).map(|i| a.basis_vector(i)).collect();
    let m = |x: &Vector, y: &Vector| a.mul_unchecked(x, y);
    let mut violations: Vec<[usize; 4]> = (0..n * n)
        .into_par_iter()
        .flat_map_iter(|ab| {
            let (ia, ib) = (ab / n, ab % n);
            let (av, bv) = (&e[ia], &e[ib]);
            let fab = fmap.eval(av, bv);
            let mut bad = Vec::new();
            for ix in 0..n {
                for iy in 0..n {
                    let (x, y) = (&e[ix], &e[iy]);
                    let xy = m(x, y);
                    let ax = m(av, x);
                    let ay = m(av, y);
                    let bx = m(bv, x);
                    let by = m(bv, y);
                    let inner_xy = m(av, &xy).sub(&m(&ax, y)).sub(&m(x, &ay));
                    let inner_bx_y = m(av, &m(&bx, y)).sub(&m(&m(av, &bx), y)).sub(&m(&bx, &ay));
                    let inner_x_by = m(av, &m(x, &by)).sub(&m(&ax, &by)).sub(&m(x, &m(av, &by)));
                    let lhs = m(bv, &inner_xy).sub(&inner_bx_y).sub(&inner_x_by);
                    let rhs = m(&fab, &xy).sub(&m(&m(&fab, x), y)).sub(&m(x, &m(&fab, y)));
                    if !lhs.add(&rhs).is_zero() {
                        bad.push([ia, ib, ix, iy]);
                    }
                }
            }
            bad
        })
        .collect();
    violations.sort_unstable();
    IdentityReport {
        checked: n * n * n * n,
        violations,
    }
}

/// The terminal product F(a, b) = (2ab + ba)/3.
pub fn terminal_product(a: &StructureAlgebra) -> Result<BilinearMap> {
    let f = a.field();
    let third = f.one().checked_div(&f.from_i64(3)).map_err(|_| Error::Characteristic {
        what: "the terminal product (2ab+ba)/3".into(),
        requirement: "3 invertible".into(),
        field: f.to_string(),
    })?;
    let n = a.dim();
    let two = f.from_i64(2);
    let mut tensor = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = &(&two * a.coeff(i, j, k)) + a.coeff(j, i, k);
                tensor.push(&v * &third);
            }
        }
    }
    Ok(BilinearMap { field: f, n, tensor })
}

/// Checks the conservative identity with the terminal product on all n⁴
/// basis quadruples.
pub fn check_terminal(a: &StructureAlgebra) -> Result<IdentityReport> {
    Ok(check_conservative_identity(a, &terminal_product(a)?))
}

/// det(tI − L_w), lowest degree first.
pub fn charpoly_of_left_mult(a: &StructureAlgebra, w: &Vector) -> Result<Vec<Scalar>> {
    Ok(a.left_mult(w)?.charpoly())
}

/// The printed invariant polynomials: ℓ₁..ℓ₆ for W₂ and Λ₁..Λ₃ for W(2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InvariantSet {
    W2,
    W2x2,
}

impl InvariantSet {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "W2" => Ok(InvariantSet::W2),
            "W2x2" | "W(2)" => Ok(InvariantSet::W2x2),
            _ => Err(Error::UnknownInvariantSet(name.to_string())),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            InvariantSet::W2 => 6,
            InvariantSet::W2x2 => 8,
        }
    }

    pub fn count(&self) -> usize {
        match self {
            InvariantSet::W2 => 6,
            InvariantSet::W2x2 => 3,
        }
    }
}

/// Σ c·Π λ_v over monomials given as (coefficient, 1-based variable list).
fn poly(l: &[Scalar], terms: &[(i64, &[usize])]) -> Scalar {
    let f = l[0].field();
    terms.iter().fold(f.zero(), |acc, (c, vars)| {
        let mono = vars.iter().fold(f.from_i64(*c), |m, &v| &m * &l[v - 1]);
        &acc + &mono
    })
}

fn ell(l: &[Scalar]) -> Vec<Scalar> {
    let f = l[0].field();
    let k = |c: i64| f.from_i64(c);
    let l5 = &l[4];
    let a = poly(l, &[(1, &[1, 1]), (1, &[5, 1]), (-2, &[5, 5]), (-1, &[2, 3]), (1, &[2, 6])]);
    let b = poly(l, &[(19, &[1, 1]), (19, &[5, 1]), (-2, &[5, 5]), (-19, &[2, 3]), (19, &[2, 6])]);
    let c = poly(l, &[(1, &[1, 1]), (1, &[5, 1]), (-1, &[2, 3]), (1, &[2, 6])]);
    vec![
        &k(9) * l5,
        poly(l, &[(-11, &[1, 1]), (-11, &[5, 1]), (31, &[5, 5]), (11, &[2, 3]), (-11, &[2, 6])]),
        &(&k(-3) * l5)
            * &poly(l, &[(22, &[1, 1]), (22, &[5, 1]), (-17, &[5, 5]), (-22, &[2, 3]), (22, &[2, 6])]),
        poly(
            l,
            &[
                (19, &[1, 1, 1, 1]),
                (38, &[5, 1, 1, 1]),
                (-120, &[5, 5, 1, 1]),
                (-38, &[2, 3, 1, 1]),
                (38, &[2, 6, 1, 1]),
                (-139, &[5, 5, 5, 1]),
                (-38, &[2, 3, 5, 1]),
                (38, &[2, 5, 6, 1]),
                (40, &[5, 5, 5, 5]),
                (19, &[2, 2, 3, 3]),
                (139, &[2, 3, 5, 5]),
                (19, &[2, 2, 6, 6]),
                (-139, &[2, 5, 5, 6]),
                (-38, &[2, 2, 3, 6]),
            ],
        ),
        &(&(&k(3) * l5) * &a) * &b,
        &(&k(-9) * &c) * &(&a * &a),
    ]
}

fn lambda(l: &[Scalar]) -> Vec<Scalar> {
    let f = l[0].field();
    let k = |c: i64| f.from_i64(c);
    let s = poly(l, &[(3, &[5]), (1, &[8])]);
    vec![
        &k(4) * &s,
        &k(-4)
            * &poly(
                l,
                &[
                    (3, &[1, 1]),
                    (3, &[5, 1]),
                    (-3, &[8, 1]),
                    (-15, &[5, 5]),
                    (-1, &[8, 8]),
                    (-3, &[2, 3]),
                    (3, &[2, 6]),
                    (3, &[2, 7]),
                    (-12, &[5, 8]),
                ],
            ),
        &(&k(-2) * &s)
            * &poly(
                l,
                &[
                    (18, &[1, 1]),
                    (18, &[5, 1]),
                    (-18, &[8, 1]),
                    (-27, &[5, 5]),
                    (1, &[8, 8]),
                    (-18, &[2, 3]),
                    (18, &[2, 6]),
                    (18, &[2, 7]),
                    (-30, &[5, 8]),
                ],
            ),
    ]
}

/// Evaluates the printed invariant polynomials at w.
pub fn charpoly_invariants(name: &str, w: &Vector) -> Result<Vec<Scalar>> {
    let set = InvariantSet::from_name(name)?;
    if w.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: w.dim(),
        });
    }
    Ok(match set {
        InvariantSet::W2 => ell(w.coords()),
        InvariantSet::W2x2 => lambda(w.coords()),
    })
}

/// Which characteristic-polynomial coefficient (power of t, with sign)
/// each printed invariant equals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientMap {
    pub power: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantNormalization {
    pub field: String,
    pub samples: usize,
    pub seed: u64,
    pub maps: BTreeMap<InvariantSet, Vec<CoefficientMap>>,
}

const NORMALIZATION_JSON: &str = include_str!("../data/invariant_normalization.json");

impl InvariantNormalization {
    /// The mapping shipped with the crate.
    pub fn persisted() -> Self {
        serde_json::from_str(NORMALIZATION_JSON).expect("bundled normalization data")
    }

    /// Printed invariant values predicted from a characteristic polynomial.
    pub fn apply(&self, set: InvariantSet, charpoly: &[Scalar]) -> Vec<Scalar> {
        self.maps[&set]
            .iter()
            .map(|m| {
                let c = &charpoly[m.power];
                if m.sign < 0 {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect()
    }
}

/// For each printed invariant, every (power, sign) whose coefficient matches
/// it on `samples` random points of `algebra`.
pub fn fit_normalization(
    set: InvariantSet,
    algebra: &StructureAlgebra,
    samples: usize,
    seed: u64,
) -> Vec<Vec<CoefficientMap>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = algebra.dim();
    let data: Vec<(Vec<Scalar>, Vec<Scalar>)> = (0..samples)
        .map(|_| {
            let w = Vector::random(algebra.field(), n, &mut rng);
            let inv = charpoly_invariants(match set {
                InvariantSet::W2 => "W2",
                InvariantSet::W2x2 => "W2x2",
            }, &w)
            .expect("dimension matches");
            (inv, charpoly_of_left_mult(algebra, &w).expect("dimension matches"))
        })
        .collect();
    (0..set.count())
        .map(|i| {
            let mut fits = Vec::new();
            for power in 0..=n {
                for sign in [1i8, -1] {
                    let ok = data.iter().all(|(inv, cp)| {
                        let c = if sign < 0 { -&cp[power] } else { cp[power].clone() };
                        c == inv[i]
                    });
                    if ok {
                        fits.push(CoefficientMap { power, sign });
                    }
                }
            }
            fits
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_with_identity_negates() {
        let f = FieldSpec::Rationals;
        let b = BilinearMap::alpha(f, 2, 0, 1, 1).add(&BilinearMap::alpha(f, 2, 1, 1, 0).scale(&f.from_i64(3)));
        let r = map_bracket(&Matrix::identity(f, 2), &b).unwrap();
        assert_eq!(r, b.scale(&f.from_i64(-1)));
        assert!(map_bracket(&Matrix::zero(f, 2, 2), &b).unwrap().is_zero());
    }

    #[test]
    fn e_basis_determinant_is_36() {
        assert_eq!(e_basis_matrix(FieldSpec::Rationals).det().to_string(), "36");
    }

    #[test]
    fn invariant_set_names() {
        assert!(matches!(
            charpoly_invariants("S2", &Vector::zero(FieldSpec::Rationals, 4)),
            Err(Error::UnknownInvariantSet(_))
        ));
    }
}
