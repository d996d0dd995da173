//! Parametrized automorphism families of S₂, W₂ and W(2), checked member by
//! member, against their composition laws, and against exhaustive
//! enumeration of Aut(A) over small prime fields.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::StructureAlgebra;
use crate::catalog::{catalog, CatalogName};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::kantor::{charpoly_invariants, charpoly_of_left_mult, InvariantSet};
use crate::linalg::{LinearOp, Matrix, Vector};
use crate::modp::{ResidueSpan, Zp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamDomain {
    /// Nonzero elements only.
    Unit,
    Any,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: &'static str,
    pub domain: ParamDomain,
}

const fn unit(name: &'static str) -> Param {
    Param { name, domain: ParamDomain::Unit }
}

const fn any(name: &'static str) -> Param {
    Param { name, domain: ParamDomain::Any }
}

/// Which characteristics a family is stated for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharCondition {
    Equals(u64),
    Excludes(&'static [u64]),
}

impl CharCondition {
    pub fn holds(&self, characteristic: u64) -> bool {
        match self {
            CharCondition::Equals(c) => characteristic == *c,
            CharCondition::Excludes(cs) => !cs.contains(&characteristic),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CharCondition::Equals(c) => format!("characteristic {c}"),
            CharCondition::Excludes(cs) => {
                let list: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                format!("characteristic not in {{{}}}", list.join(", "))
            }
        }
    }
}

/// How a printed matrix acts: row i holds θ(e_i), or column j holds θ(e_j).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Row,
    Column,
}

/// Whether a composition law or inverse formula is quoted or worked out
/// from the others.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Printed,
    Derived,
}

const LAMBDA_MU: &[Param] = &[unit("lambda"), any("mu")];
const X_T: &[Param] = &[any("x"), unit("t")];
const ABC: &[Param] = &[unit("a"), unit("b"), any("c")];
const TXVU: &[Param] = &[unit("t"), any("x"), unit("v"), any("u")];
const ABCK: &[Param] = &[unit("a"), unit("b"), any("c"), any("k")];

type Rows = Vec<Vec<Scalar>>;
type Builder = fn(FieldSpec, &[Scalar]) -> Result<Rows>;
type Law = fn(FieldSpec, &[Scalar], &[Scalar]) -> Result<Vec<Scalar>>;
type Inverse = fn(FieldSpec, &[Scalar]) -> Result<Vec<Scalar>>;

/// A named matrix family θ(params) together with the parameter-level law
/// P(a)·P(b) = P(law(a, b)) for its printed matrices.
#[derive(Clone, Debug)]
pub struct ParamAutFamily {
    pub name: &'static str,
    pub algebra: CatalogName,
    pub characteristic: CharCondition,
    pub params: &'static [Param],
    builder: Builder,
    law: Law,
    pub law_source: Source,
    inverse: Inverse,
    pub inverse_source: Source,
    /// The printed matrices use the basis e₁..e₆, e₆+e₇, e₅+e₈.
    pub ideal_basis: bool,
    order: fn(u64) -> u64,
    corruption: Option<(usize, usize)>,
}

fn inv(s: &Scalar) -> Result<Scalar> {
    s.inv().ok_or_else(|| Error::DivisionByZero(format!("{s} has no inverse")))
}

fn zeros(f: FieldSpec, n: usize) -> Rows {
    vec![vec![f.zero(); n]; n]
}

fn build_w(f: FieldSpec, p: &[Scalar]) -> Result<Rows> {
    let (l, m) = (&p[0], &p[1]);
    let li = inv(l)?;
    let mut r = zeros(f, 4);
    r[0][0] = f.one();
    r[0][2] = m.clone();
    r[0][3] = &f.frac(3, 4)? * &m.pow(2);
    r[1][0] = &(l * m) * &f.frac(1, 2)?;
    r[1][1] = l.clone();
    r[1][2] = &(l * &m.pow(2)) * &f.frac(1, 4)?;
    r[1][3] = &(l * &m.pow(3)) * &f.frac(1, 8)?;
    r[2][2] = li.clone();
    r[2][3] = &(&f.frac(3, 2)? * m) * &li;
    r[3][3] = li.pow(2);
    Ok(r)
}

fn build_w2(f: FieldSpec, p: &[Scalar]) -> Result<Rows> {
    let (l, m) = (&p[0], &p[1]);
    let li = inv(l)?;
    let li2 = li.pow(2);
    let mut r = zeros(f, 4);
    r[0][0] = f.one();
    r[0][3] = &m.pow(2) * &li2;
    r[1][0] = m.clone();
    r[1][1] = l.clone();
    r[1][2] = &m.pow(2) * &li;
    r[1][3] = &m.pow(3) * &li2;
    r[2][2] = li.clone();
    r[2][3] = m * &li2;
    r[3][3] = li2;
    Ok(r)
}

fn build_w3(f: FieldSpec, p: &[Scalar]) -> Result<Rows> {
    let (l, m) = (&p[0], &p[1]);
    let li = inv(l)?;
    let mut r = zeros(f, 4);
    r[0][0] = f.one();
    r[0][2] = -&(m * &li);
    r[1][0] = m.clone();
    r[1][1] = l.clone();
    r[1][2] = &m.pow(2) * &li;
    r[1][3] = &m.pow(3) * &li.pow(2);
    r[2][2] = li.clone();
    r[3][3] = li.pow(2);
    Ok(r)
}

/// The 6×6 block shared by the W₂ and W(2) families in (x, t).
fn xt_block(f: FieldSpec, x: &Scalar, t: &Scalar, r: &mut Rows) -> Result<()> {
    let c = |v: i64| f.from_i64(v);
    let t2 = t.pow(2);
    r[0][0] = f.one();
    r[0][2] = &(&c(2) * t) * x;
    r[0][3] = &(&c(3) * &t2) * &x.pow(2);
    r[1][0] = x.clone();
    r[1][1] = inv(t)?;
    r[1][2] = t * &x.pow(2);
    r[1][3] = &t2 * &x.pow(3);
    r[2][2] = t.clone();
    r[2][3] = &(&c(3) * &t2) * x;
    r[3][3] = t2;
    r[4][4] = f.one();
    r[4][5] = -&(t * x);
    r[5][5] = t.clone();
    Ok(())
}

fn build_w_xt(f: FieldSpec, p: &[Scalar]) -> Result<Rows> {
    let mut r = zeros(f, 6);
    xt_block(f, &p[0], &p[1], &mut r)?;
    Ok(r)
}

fn build_w2x2_xt(f: FieldSpec, p: &[Scalar]) -> Result<Rows> {
    let (x, t) = (&p[0], &p[1]);
    let mut r = zeros(f, 8);
    xt_block(f, x, t, &mut r)?;
    r[6][6] = t.clone();
    r[7][6] = t * x;
    r[7][7] = f.one();
    Ok(r)
}

fn build_m_abc(f: FieldSpec, p: &[Scalar]) -> Result<Rows> {
    let (a, b, c) = (&p[0], &p[1], &p[2]);
    let ai = inv(a)?;
    let b1 = b - &f.one();
    let mut r = zeros(f, 6);
    r[0][0] = f.one();
    r[0][2] = c.clone();
    r[1][0] = -&(c * &ai);
    r[1][1] = ai.clone();
    r[1][2] = &c.pow(2) * &ai;
    r[1][3] = -&(&c.pow(3) * &ai);
    r[2][2] = a.clone();
    r[3][3] = a.pow(2);
    r[4][0] = b1.clone();
    r[4][2] = &b1 * c;
    r[4][4] = b.clone();
    r[4][5] = b * c;
    r[5][2] = a * &b1;
    r[5][5] = a * b;
    Ok(r)
}

fn build_omega(f: FieldSpec, p: &[Scalar]) -> Result<Rows> {
    let (t, x, v, u) = (&p[0], &p[1], &p[2], &p[3]);
    let t2 = t.pow(2);
    let tx = t * x;
    let mut r = zeros(f, 8);
    r[0][0] = f.one();
    r[0][3] = &t2 * &x.pow(2);
    r[1][0] = x.clone();
    r[1][1] = inv(t)?;
    r[1][2] = t * &x.pow(2);
    r[1][3] = &t2 * &x.pow(3);
    r[2][2] = t.clone();
    r[2][3] = &t2 * x;
    r[3][3] = t2;
    r[4][4] = f.one();
    r[4][5] = tx.clone();
    r[4][6] = u * &tx;
    r[4][7] = u.clone();
    r[5][5] = t.clone();
    r[5][6] = u * t;
    r[6][6] = v.clone();
    r[7][6] = v * x;
    r[7][7] = v * &inv(t)?;
    Ok(r)
}

fn build_m_abck(f: FieldSpec, p: &[Scalar]) -> Result<Rows> {
    let (a, b, c, k) = (&p[0], &p[1], &p[2], &p[3]);
    let ai = inv(a)?;
    let mut r = zeros(f, 8);
    r[0][0] = f.one();
    r[0][2] = c.clone();
    r[1][0] = -&(c * &ai);
    r[1][1] = ai.clone();
    r[1][2] = &c.pow(2) * &ai;
    r[1][3] = -&(&c.pow(3) * &ai);
    r[2][2] = a.clone();
    r[3][3] = a.pow(2);
    r[4][0] = b - &f.one();
    r[4][2] = &(b * c) - c;
    r[4][4] = b.clone();
    r[4][5] = b * c;
    r[5][2] = &(a * b) - a;
    r[5][5] = a * b;
    r[6][2] = a * k;
    r[6][5] = a * k;
    r[6][6] = a.clone();
    r[7][0] = -k;
    r[7][2] = -&(c * k);
    r[7][4] = -k;
    r[7][5] = -&(c * k);
    r[7][6] = -c;
    r[7][7] = f.one();
    Ok(r)
}

/// (λ, μ)(λ', μ') = (λλ', μ' + μ/λ').
fn law_w(_: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>> {
    Ok(vec![&a[0] * &b[0], &b[1] + &(&a[1] * &inv(&b[0])?)])
}

fn inverse_w(_: FieldSpec, a: &[Scalar]) -> Result<Vec<Scalar>> {
    Ok(vec![inv(&a[0])?, -&(&a[0] * &a[1])])
}

/// (λ, μ)(λ', μ') = (λλ', μ + λμ').
fn law_affine_left(_: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>> {
    Ok(vec![&a[0] * &b[0], &a[1] + &(&a[0] * &b[1])])
}

fn inverse_affine_left(_: FieldSpec, a: &[Scalar]) -> Result<Vec<Scalar>> {
    let li = inv(&a[0])?;
    Ok(vec![li.clone(), -&(&a[1] * &li)])
}

/// (x, t)(x', t') = (x + x'/t, tt').
fn law_xt(_: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>> {
    Ok(vec![&a[0] + &(&b[0] * &inv(&a[1])?), &a[1] * &b[1]])
}

fn inverse_xt(_: FieldSpec, a: &[Scalar]) -> Result<Vec<Scalar>> {
    Ok(vec![-&(&a[1] * &a[0]), inv(&a[1])?])
}

/// (a, b, c)(a', b', c') = (aa', bb', a'c + c').
fn law_m_abc(_: FieldSpec, p: &[Scalar], q: &[Scalar]) -> Result<Vec<Scalar>> {
    Ok(vec![&p[0] * &q[0], &p[1] * &q[1], &(&q[0] * &p[2]) + &q[2]])
}

fn inverse_m_abc(_: FieldSpec, p: &[Scalar]) -> Result<Vec<Scalar>> {
    let ai = inv(&p[0])?;
    Ok(vec![ai.clone(), inv(&p[1])?, -&(&p[2] * &ai)])
}

/// (t, x, v, u)(t', x', v', u') = (tt', x + x'/t, vv', u' + uv'/t').
fn law_omega(_: FieldSpec, p: &[Scalar], q: &[Scalar]) -> Result<Vec<Scalar>> {
    Ok(vec![
        &p[0] * &q[0],
        &p[1] + &(&q[1] * &inv(&p[0])?),
        &p[2] * &q[2],
        &q[3] + &(&(&p[3] * &q[2]) * &inv(&q[0])?),
    ])
}

fn inverse_omega(_: FieldSpec, p: &[Scalar]) -> Result<Vec<Scalar>> {
    let vi = inv(&p[2])?;
    Ok(vec![inv(&p[0])?, &p[0] * &p[1], vi.clone(), &(&p[0] * &p[3]) * &vi])
}

/// (a, b, c, k)(a', b', c', k') = (aa', bb', ca' + c', kb' + k').
fn law_m_abck(_: FieldSpec, p: &[Scalar], q: &[Scalar]) -> Result<Vec<Scalar>> {
    Ok(vec![
        &p[0] * &q[0],
        &p[1] * &q[1],
        &(&p[2] * &q[0]) + &q[2],
        &(&p[3] * &q[1]) + &q[3],
    ])
}

fn inverse_m_abck(_: FieldSpec, p: &[Scalar]) -> Result<Vec<Scalar>> {
    let ai = inv(&p[0])?;
    let bi = inv(&p[1])?;
    Ok(vec![ai.clone(), bi.clone(), -&(&p[2] * &ai), -&(&p[3] * &bi)])
}

fn order_aff(q: u64) -> u64 {
    q * (q - 1)
}

fn order_units_times_aff(q: u64) -> u64 {
    (q - 1) * q * (q - 1)
}

fn order_aff_squared(q: u64) -> u64 {
    (q * (q - 1)).pow(2)
}

/// Every registered family.
pub fn families() -> Vec<ParamAutFamily> {
    let base = |name, algebra, characteristic, params, builder: Builder, law: Law, inverse: Inverse| {
        ParamAutFamily {
            name,
            algebra,
            characteristic,
            params,
            builder,
            law,
            law_source: Source::Printed,
            inverse,
            inverse_source: Source::Printed,
            ideal_basis: false,
            order: order_aff,
            corruption: None,
        }
    };
    vec![
        ParamAutFamily {
            inverse_source: Source::Derived,
            ..base(
                "w",
                CatalogName::S2,
                CharCondition::Excludes(&[2, 3]),
                LAMBDA_MU,
                build_w,
                law_w,
                inverse_w,
            )
        },
        ParamAutFamily {
            inverse_source: Source::Derived,
            ..base(
                "w2",
                CatalogName::S2,
                CharCondition::Equals(2),
                LAMBDA_MU,
                build_w2,
                law_affine_left,
                inverse_affine_left,
            )
        },
        ParamAutFamily {
            inverse_source: Source::Derived,
            ..base(
                "w3",
                CatalogName::S2,
                CharCondition::Equals(3),
                LAMBDA_MU,
                build_w3,
                law_affine_left,
                inverse_affine_left,
            )
        },
        base(
            "w_xt",
            CatalogName::W2,
            CharCondition::Excludes(&[3]),
            X_T,
            build_w_xt,
            law_xt,
            inverse_xt,
        ),
        ParamAutFamily {
            order: order_units_times_aff,
            ..base(
                "M_abc",
                CatalogName::W2,
                CharCondition::Equals(3),
                ABC,
                build_m_abc,
                law_m_abc,
                inverse_m_abc,
            )
        },
        ParamAutFamily {
            law_source: Source::Derived,
            inverse_source: Source::Derived,
            ..base(
                "W2x2_xt",
                CatalogName::W2x2,
                CharCondition::Excludes(&[2, 3]),
                X_T,
                build_w2x2_xt,
                law_xt,
                inverse_xt,
            )
        },
        ParamAutFamily {
            ideal_basis: true,
            order: order_aff_squared,
            ..base(
                "Omega",
                CatalogName::W2x2,
                CharCondition::Equals(2),
                TXVU,
                build_omega,
                law_omega,
                inverse_omega,
            )
        },
        ParamAutFamily {
            order: order_aff_squared,
            ..base(
                "M_abck",
                CatalogName::W2x2,
                CharCondition::Equals(3),
                ABCK,
                build_m_abck,
                law_m_abck,
                inverse_m_abck,
            )
        },
    ]
}

pub fn family(name: &str) -> Result<ParamAutFamily> {
    families()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownFamily(name.to_string()))
}

/// The family registered for a catalog algebra over a field of the given
/// characteristic, if any.
pub fn family_for(algebra: CatalogName, characteristic: u64) -> Option<ParamAutFamily> {
    families()
        .into_iter()
        .find(|f| f.algebra == algebra && f.characteristic.holds(characteristic))
}

/// Columns e₁..e₆, e₆+e₇, e₅+e₈.
pub fn ideal_basis_matrix(field: FieldSpec) -> Matrix {
    let mut m = Matrix::identity(field, 8);
    m.set(6, 6, field.zero());
    m.set(7, 7, field.zero());
    for (r, c) in [(5, 6), (6, 6), (4, 7), (7, 7)] {
        m.set(r, c, field.one());
    }
    m
}

impl ParamAutFamily {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// |Aut| predicted by the group isomorphism, evaluated at F_q.
    pub fn predicted_order(&self, q: u64) -> u64 {
        (self.order)(q)
    }

    /// A copy whose printed matrices have entry (row, col) negated.
    pub fn with_entry_negated(&self, row: usize, col: usize) -> Self {
        ParamAutFamily {
            corruption: Some((row, col)),
            ..self.clone()
        }
    }

    fn check_params(&self, field: FieldSpec, params: &[Scalar]) -> Result<()> {
        if params.len() != self.params.len() {
            return Err(Error::OutOfDomain(format!(
                "{} takes {} parameters, got {}",
                self.name,
                self.params.len(),
                params.len()
            )));
        }
        for (p, v) in self.params.iter().zip(params) {
            if !field.owns(v) {
                return Err(Error::OutOfDomain(format!("{} = {v} is not in {field}", p.name)));
            }
            if p.domain == ParamDomain::Unit && v.is_zero() {
                return Err(Error::OutOfDomain(format!("{} must be a unit", p.name)));
            }
        }
        Ok(())
    }

    fn check_field(&self, field: FieldSpec) -> Result<()> {
        if self.characteristic.holds(field.characteristic()) {
            Ok(())
        } else {
            Err(Error::Characteristic {
                what: format!("family {}", self.name),
                requirement: self.characteristic.describe(),
                field: field.to_string(),
            })
        }
    }

    /// The printed matrix at `params`, verbatim.
    pub fn printed(&self, field: FieldSpec, params: &[Scalar]) -> Result<Matrix> {
        self.check_field(field)?;
        self.check_params(field, params)?;
        let mut rows = (self.builder)(field, params)?;
        if let Some((r, c)) = self.corruption {
            rows[r][c] = -&rows[r][c];
        }
        Matrix::from_rows(field, rows)
    }

    pub fn compose_params(&self, field: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>> {
        (self.law)(field, a, b)
    }

    pub fn inverse_params(&self, field: FieldSpec, a: &[Scalar]) -> Result<Vec<Scalar>> {
        (self.inverse)(field, a)
    }

    /// Every parameter tuple over a finite field.
    pub fn parameter_points(&self, field: FieldSpec) -> Option<Vec<Vec<Scalar>>> {
        let units = field.units()?;
        let elements = field.elements()?;
        let mut points: Vec<Vec<Scalar>> = vec![Vec::new()];
        for p in self.params {
            let values = match p.domain {
                ParamDomain::Unit => &units,
                ParamDomain::Any => &elements,
            };
            points = points
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |v| {
                        let mut next = prefix.clone();
                        next.push(v.clone());
                        next
                    })
                })
                .collect();
        }
        Some(points)
    }

    /// Seeded random parameter tuples.
    pub fn sample_points(&self, field: FieldSpec, count: usize, seed: u64) -> Vec<Vec<Scalar>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                self.params
                    .iter()
                    .map(|p| match p.domain {
                        ParamDomain::Unit => field.random_unit(&mut rng),
                        ParamDomain::Any => field.random(&mut rng),
                    })
                    .collect()
            })
            .collect()
    }

    /// Fixes the orientation over `field` by testing both readings of the
    /// printed matrices as automorphisms.
    pub fn resolve(&self, field: FieldSpec) -> Result<ResolvedFamily> {
        self.check_field(field)?;
        let algebra = catalog(self.algebra, field)?;
        let points = match self.parameter_points(field) {
            Some(all) => all,
            None => self.sample_points(field, 8, 0x0_1e57),
        };
        let basis = self.ideal_basis.then(|| {
            let c = ideal_basis_matrix(field);
            let ci = c.inverse().expect("the ideal basis is a basis");
            (c, ci)
        });
        let mut passing = Vec::new();
        for orientation in [Orientation::Row, Orientation::Column] {
            let candidate = ResolvedFamily {
                family: self.clone(),
                field,
                orientation,
                algebra: algebra.clone(),
                basis: basis.clone(),
            };
            let ok = points.iter().all(|p| {
                candidate
                    .member(p)
                    .map(|m| algebra.is_automorphism(&m))
                    .unwrap_or(false)
            });
            if ok {
                passing.push(candidate);
            }
        }
        passing.into_iter().next().ok_or_else(|| {
            Error::Orientation(format!(
                "family {} is not a family of automorphisms of {} over {field} in either orientation",
                self.name, self.algebra
            ))
        })
    }
}

/// A family bound to a field with its orientation fixed.
#[derive(Clone, Debug)]
pub struct ResolvedFamily {
    pub family: ParamAutFamily,
    pub field: FieldSpec,
    pub orientation: Orientation,
    algebra: StructureAlgebra,
    basis: Option<(Matrix, Matrix)>,
}

impl ResolvedFamily {
    pub fn algebra(&self) -> &StructureAlgebra {
        &self.algebra
    }

    pub fn printed(&self, params: &[Scalar]) -> Result<Matrix> {
        self.family.printed(self.field, params)
    }

    /// The member as a column-action operator on e₁..e_n.
    pub fn member(&self, params: &[Scalar]) -> Result<LinearOp> {
        let p = self.printed(params)?;
        let op = match self.orientation {
            Orientation::Row => p.transpose(),
            Orientation::Column => p,
        };
        Ok(match &self.basis {
            Some((c, ci)) => c.mul(&op).mul(ci),
            None => op,
        })
    }

    /// Keeps the orientation and negates one printed entry.
    pub fn with_entry_negated(&self, row: usize, col: usize) -> Self {
        ResolvedFamily {
            family: self.family.with_entry_negated(row, col),
            ..self.clone()
        }
    }

    fn points(&self, samples: usize, seed: u64) -> (bool, Vec<Vec<Scalar>>) {
        match self.family.parameter_points(self.field) {
            Some(all) => (true, all),
            None => (false, self.family.sample_points(self.field, samples, seed)),
        }
    }

    /// Every member over a finite field, as operators.
    pub fn image(&self) -> Result<Vec<LinearOp>> {
        let points = self.family.parameter_points(self.field).ok_or_else(|| {
            Error::OutOfDomain("the family image is only listed over finite fields".into())
        })?;
        points.iter().map(|p| self.member(p)).collect()
    }
}

fn show(params: &[Scalar]) -> Vec<String> {
    params.iter().map(|s| s.to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberFailure {
    pub params: Vec<String>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub field: String,
    pub orientation: Orientation,
    pub exhaustive: bool,
    pub members_checked: usize,
    pub failures: Vec<MemberFailure>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every member (finite fields) or `samples` seeded members (Q)
/// with `verify_homomorphism`.
pub fn verify_family(rf: &ResolvedFamily, samples: usize, seed: u64) -> Result<FamilyReport> {
    let (exhaustive, points) = rf.points(samples, seed);
    let a = rf.algebra();
    let checked: Vec<Result<Option<MemberFailure>>> = points
        .par_iter()
        .map(|p| {
            let m = rf.member(p)?;
            let report = a.verify_homomorphism(a, &m)?;
            let reason = if let Some(v) = report.violations.first() {
                Some(format!(
                    "θ(e{}e{}) = {} but θ(e{})θ(e{}) = {}",
                    v.i + 1,
                    v.j + 1,
                    v.image_of_product,
                    v.i + 1,
                    v.j + 1,
                    v.product_of_images
                ))
            } else if !report.invertible {
                Some("not invertible".to_string())
            } else {
                None
            };
            Ok(reason.map(|reason| MemberFailure { params: show(p), reason }))
        })
        .collect();
    let mut failures = Vec::new();
    for c in checked {
        if let Some(f) = c? {
            failures.push(f);
        }
    }
    Ok(FamilyReport {
        family: rf.family.name.to_string(),
        field: rf.field.to_string(),
        orientation: rf.orientation,
        exhaustive,
        members_checked: points.len(),
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupLawReport {
    pub family: String,
    pub field: String,
    pub exhaustive: bool,
    pub law_source: Source,
    pub inverse_source: Source,
    pub pairs_checked: usize,
    pub law_failures: Vec<(Vec<String>, Vec<String>)>,
    pub inverses_checked: usize,
    pub inverse_failures: Vec<Vec<String>>,
}

impl GroupLawReport {
    pub fn passed(&self) -> bool {
        self.law_failures.is_empty() && self.inverse_failures.is_empty()
    }
}

/// P(a)·P(b) = P(law(a, b)) and P(a)·P(a⁻¹) = P(a⁻¹)·P(a) = 1 on the printed
/// matrices, for all pairs over a finite field or `samples` seeded pairs
/// over Q.
pub fn verify_group_law(rf: &ResolvedFamily, samples: usize, seed: u64) -> Result<GroupLawReport> {
    let f = rf.field;
    let fam = &rf.family;
    let (exhaustive, points) = rf.points(samples, seed);
    let pairs: Vec<(Vec<Scalar>, Vec<Scalar>)> = if exhaustive {
        points
            .iter()
            .flat_map(|a| points.iter().map(move |b| (a.clone(), b.clone())))
            .collect()
    } else {
        let others = fam.sample_points(f, samples, seed.wrapping_add(1));
        points.iter().cloned().zip(others).collect()
    };
    let law: Vec<Result<Option<(Vec<String>, Vec<String>)>>> = pairs
        .par_iter()
        .map(|(a, b)| {
            let lhs = fam.printed(f, a)?.mul(&fam.printed(f, b)?);
            let rhs = fam.printed(f, &fam.compose_params(f, a, b)?)?;
            Ok((lhs != rhs).then(|| (show(a), show(b))))
        })
        .collect();
    let mut law_failures = Vec::new();
    for r in law {
        if let Some(x) = r? {
            law_failures.push(x);
        }
    }
    let id = Matrix::identity(f, fam.dim());
    let mut inverse_failures = Vec::new();
    for a in &points {
        let p = fam.printed(f, a)?;
        let q = fam.printed(f, &fam.inverse_params(f, a)?)?;
        if p.mul(&q) != id || q.mul(&p) != id {
            inverse_failures.push(show(a));
        }
    }
    Ok(GroupLawReport {
        family: fam.name.to_string(),
        field: f.to_string(),
        exhaustive,
        law_source: fam.law_source,
        inverse_source: fam.inverse_source,
        pairs_checked: pairs.len(),
        law_failures,
        inverses_checked: points.len(),
        inverse_failures,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumerationMode {
    /// Filter every n×n matrix.
    Full,
    /// Assign θ(e₁), θ(e₂), … in order, solving the linear constraints
    /// each new column must meet.
    Dfs,
}

/// Largest q^{n²} accepted by full enumeration.
pub const FULL_LIMIT: u128 = 100_000_000;
/// Default node budget for the column search.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub mode: EnumerationMode,
    /// Sorted by their row-major residues.
    pub automorphisms: Vec<LinearOp>,
    pub nodes: u64,
}

/// Residue tables of the source and target of the maps being searched.
struct Native {
    zp: Zp,
    n: usize,
    src: Vec<u64>,
    dst: Vec<u64>,
}

fn residue_table(a: &StructureAlgebra) -> Vec<u64> {
    let n = a.dim();
    let mut c = vec![0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                c[(i * n + j) * n + k] = a.coeff(i, j, k).residue().expect("finite field");
            }
        }
    }
    c
}

impl Native {
    fn new(a: &StructureAlgebra, b: &StructureAlgebra, zp: Zp) -> Self {
        Native {
            zp,
            n: a.dim(),
            src: residue_table(a),
            dst: residue_table(b),
        }
    }

    /// Source structure constant.
    fn coeff(&self, i: usize, j: usize, k: usize) -> u64 {
        self.src[(i * self.n + j) * self.n + k]
    }

    fn target_coeff(&self, i: usize, j: usize, k: usize) -> u64 {
        self.dst[(i * self.n + j) * self.n + k]
    }

    fn product(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let n = self.n;
        let p = self.zp.p;
        let mut out = vec![0u64; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let s = xi * yj % p;
                let base = (i * n + j) * n;
                for (k, o) in out.iter_mut().enumerate() {
                    *o = (*o + s * self.dst[base + k]) % p;
                }
            }
        }
        out
    }

    /// Σ_l c_ij^l y_l.
    fn image_of_product(&self, i: usize, j: usize, cols: &[Vec<u64>]) -> Vec<u64> {
        let p = self.zp.p;
        let mut out = vec![0u64; self.n];
        for (l, y) in cols.iter().enumerate() {
            let c = self.coeff(i, j, l);
            if c != 0 {
                for (o, v) in out.iter_mut().zip(y) {
                    *o = (*o + c * v) % p;
                }
            }
        }
        out
    }

    fn is_hom(&self, cols: &[Vec<u64>]) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| self.image_of_product(i, j, cols) == self.product(&cols[i], &cols[j]))
        })
    }

    /// Matrix of y ↦ x·y (left) or y ↦ y·x (right), row-major.
    fn mult_matrix(&self, x: &[u64], left: bool) -> Vec<u64> {
        let n = self.n;
        let p = self.zp.p;
        let mut m = vec![0u64; n * n];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for b in 0..n {
                for k in 0..n {
                    let c = if left { self.target_coeff(a, b, k) } else { self.target_coeff(b, a, k) };
                    m[k * n + b] = (m[k * n + b] + xa * c) % p;
                }
            }
        }
        m
    }

    /// The stage at which pair (i, j) is fully determined.
    fn stage(&self, i: usize, j: usize) -> usize {
        let top = (0..self.n).rev().find(|&k| self.coeff(i, j, k) != 0).unwrap_or(0);
        i.max(j).max(top)
    }
}

struct Search<'a> {
    native: &'a Native,
    stages: Vec<Vec<(usize, usize)>>,
    nodes: AtomicU64,
    budget: u64,
    aborted: AtomicBool,
}

impl Search<'_> {
    /// Solutions y of the linear constraints at stage s.
    fn candidates(&self, s: usize, cols: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let nat = self.native;
        let zp = nat.zp;
        let n = nat.n;
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for &(i, j) in &self.stages[s] {
            if i == s && j == s {
                continue;
            }
            let lhs_const = nat.image_of_product(i, j, cols);
            let cs = nat.coeff(i, j, s);
            let (t, rhs_const) = if i == s {
                (Some(nat.mult_matrix(&cols[j], false)), vec![0; n])
            } else if j == s {
                (Some(nat.mult_matrix(&cols[i], true)), vec![0; n])
            } else {
                (None, nat.product(&cols[i], &cols[j]))
            };
            for m in 0..n {
                let mut row = vec![0u64; n + 1];
                row[m] = cs;
                if let Some(t) = &t {
                    for b in 0..n {
                        row[b] = zp.sub(row[b], t[m * n + b]);
                    }
                }
                row[n] = zp.sub(rhs_const[m], lhs_const[m]);
                rows.push(row);
            }
        }
        solve_affine(zp, n, rows)
    }

    fn run(&self, s: usize, cols: &mut Vec<Vec<u64>>, span: &ResidueSpan, out: &mut Vec<Vec<Vec<u64>>>) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        let nat = self.native;
        if s == nat.n {
            if nat.is_hom(cols) {
                out.push(cols.clone());
            }
            return;
        }
        for y in self.candidates(s, cols) {
            if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
                self.aborted.store(true, Ordering::Relaxed);
                return;
            }
            let mut next = span.clone();
            if !next.insert(&y) {
                continue;
            }
            if nat.stage(s, s) == s && nat.product(&y, &y) != {
                let mut c = cols.clone();
                c.push(y.clone());
                nat.image_of_product(s, s, &c)
            } {
                continue;
            }
            cols.push(y);
            self.run(s + 1, cols, &next, out);
            cols.pop();
        }
    }
}

/// All solutions of the affine system [A | b] over F_p, where each row is
/// n coefficients followed by the right-hand side.
fn solve_affine(zp: Zp, n: usize, mut rows: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = zp.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = zp.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                let pivot_row = rows[r].clone();
                for (x, pv) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = zp.sub(*x, zp.mul(f, *pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[n] != 0) {
        return Vec::new();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let count = zp.p.pow(free.len() as u32);
    (0..count)
        .map(|idx| {
            let digits = zp.digits(idx, free.len());
            let mut y = vec![0u64; n];
            for (&c, &d) in free.iter().zip(&digits) {
                y[c] = d;
            }
            for (row, &pc) in rows.iter().zip(&pivots) {
                let mut v = row[n];
                for &c in &free {
                    v = zp.sub(v, zp.mul(row[c], y[c]));
                }
                y[pc] = v;
            }
            y
        })
        .collect()
}

fn to_ops(field: FieldSpec, n: usize, found: Vec<Vec<Vec<u64>>>, zp: Zp) -> Vec<LinearOp> {
    let mut ops: Vec<LinearOp> = found
        .into_iter()
        .map(|cols| {
            let vs: Vec<Vector> = cols.iter().map(|c| zp.vector(field, c)).collect();
            Matrix::from_columns(field, n, &vs)
        })
        .collect();
    ops.sort_by(|a, b| a.flat().cmp(b.flat()));
    ops
}

/// All automorphisms of A over a prime field.
pub fn enumerate_automorphisms(a: &StructureAlgebra, mode: EnumerationMode, budget: u64) -> Result<Enumeration> {
    let e = search_isomorphisms(a, a, mode, budget)?;
    debug_assert!(e.automorphisms.iter().all(|m| a.is_automorphism(m)));
    Ok(e)
}

/// All isomorphisms A → B over a prime field, as column-action matrices.
pub fn enumerate_isomorphisms(a: &StructureAlgebra, b: &StructureAlgebra, budget: u64) -> Result<Vec<LinearOp>> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch {
            left: a.field().to_string(),
            right: b.field().to_string(),
        });
    }
    if a.dim() != b.dim() {
        return Ok(Vec::new());
    }
    Ok(search_isomorphisms(a, b, EnumerationMode::Dfs, budget)?.automorphisms)
}

fn search_isomorphisms(a: &StructureAlgebra, b: &StructureAlgebra, mode: EnumerationMode, budget: u64) -> Result<Enumeration> {
    let field = a.field();
    let zp = Zp::of(field)
        .ok_or_else(|| Error::OutOfDomain("automorphism enumeration needs a finite field".into()))?;
    let n = a.dim();
    let native = Native::new(a, b, zp);
    let (found, nodes) = match mode {
        EnumerationMode::Full => {
            let total = (zp.p as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
            if total > FULL_LIMIT {
                return Err(Error::TooLarge(format!(
                    "full enumeration over {field} in dimension {n} needs {total} matrices"
                )));
            }
            let found: Vec<Vec<Vec<u64>>> = (0..total as u64)
                .into_par_iter()
                .filter_map(|idx| {
                    let digits = zp.digits(idx, n * n);
                    let cols: Vec<Vec<u64>> = digits.chunks(n).map(|c| c.to_vec()).collect();
                    if !native.is_hom(&cols) {
                        return None;
                    }
                    let mut span = ResidueSpan::new(zp);
                    cols.iter().all(|c| span.insert(c)).then_some(cols)
                })
                .collect();
            (found, total as u64)
        }
        EnumerationMode::Dfs => {
            let mut stages = vec![Vec::new(); n];
            for i in 0..n {
                for j in 0..n {
                    stages[native.stage(i, j)].push((i, j));
                }
            }
            let search = Search {
                native: &native,
                stages,
                nodes: AtomicU64::new(0),
                budget,
                aborted: AtomicBool::new(false),
            };
            let first = if n == 0 { Vec::new() } else { search.candidates(0, &[]) };
            let found: Vec<Vec<Vec<u64>>> = if n == 0 {
                vec![Vec::new()]
            } else {
                first
                    .par_iter()
                    .flat_map_iter(|y| {
                        let mut out = Vec::new();
                        if search.nodes.fetch_add(1, Ordering::Relaxed) >= budget {
                            search.aborted.store(true, Ordering::Relaxed);
                            return out.into_iter();
                        }
                        let mut span = ResidueSpan::new(zp);
                        if !span.insert(y) {
                            return out.into_iter();
                        }
                        let mut cols = vec![y.clone()];
                        if native.stage(0, 0) == 0 && native.product(y, y) != native.image_of_product(0, 0, &cols) {
                            return out.into_iter();
                        }
                        search.run(1, &mut cols, &span, &mut out);
                        out.into_iter()
                    })
                    .collect()
            };
            let nodes = search.nodes.load(Ordering::Relaxed);
            if search.aborted.load(Ordering::Relaxed) {
                return Err(Error::BudgetExceeded { budget, found: found.len() });
            }
            (found, nodes)
        }
    };
    let automorphisms = to_ops(field, n, found, zp);
    Ok(Enumeration { mode, automorphisms, nodes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub family: String,
    pub field: String,
    pub enumerated: usize,
    pub family_members: usize,
    pub distinct_members: usize,
    pub predicted_order: u64,
    pub injective: bool,
    /// Enumerated automorphisms the family misses.
    pub missing: usize,
    /// Family members that are not automorphisms.
    pub extra: usize,
    pub sets_equal: bool,
}

impl CompletenessReport {
    pub fn passed(&self) -> bool {
        self.sets_equal && self.injective && self.enumerated as u64 == self.predicted_order
    }
}

/// Compares the family image with the column search over the same field.
pub fn family_completeness(rf: &ResolvedFamily, budget: u64) -> Result<CompletenessReport> {
    let enumeration = enumerate_automorphisms(rf.algebra(), EnumerationMode::Dfs, budget)?;
    let image = rf.image()?;
    let key = |m: &LinearOp| m.flat().to_vec();
    let enumerated: BTreeSet<Vec<Scalar>> = enumeration.automorphisms.iter().map(key).collect();
    let members: BTreeSet<Vec<Scalar>> = image.iter().map(key).collect();
    let q = rf.field.order().expect("finite field");
    Ok(CompletenessReport {
        family: rf.family.name.to_string(),
        field: rf.field.to_string(),
        enumerated: enumerated.len(),
        family_members: image.len(),
        distinct_members: members.len(),
        predicted_order: rf.family.predicted_order(q),
        injective: members.len() == image.len(),
        missing: enumerated.difference(&members).count(),
        extra: members.difference(&enumerated).count(),
        sets_equal: enumerated == members,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupStructureReport {
    pub family: String,
    pub field: String,
    pub checks: Vec<StructureCheck>,
}

impl GroupStructureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type Key = Vec<Scalar>;

fn keyset(ms: &[Matrix]) -> BTreeSet<Key> {
    ms.iter().map(|m| m.flat().to_vec()).collect()
}

fn subgroup_check(name: &str, g: &[Matrix], field: FieldSpec, n: usize) -> StructureCheck {
    let set = keyset(g);
    let id = Matrix::identity(field, n);
    let closed = g.iter().all(|a| g.iter().all(|b| set.contains(b.mul(a).flat())));
    let inverses = g
        .iter()
        .all(|a| a.inverse().map(|i| set.contains(i.flat())).unwrap_or(false));
    StructureCheck {
        name: format!("{name} is a subgroup"),
        passed: set.contains(id.flat()) && closed && inverses,
        detail: format!("order {}", set.len()),
    }
}

fn normal_check(name: &str, h: &[Matrix], whole: &[Matrix]) -> StructureCheck {
    let set = keyset(h);
    let passed = whole.iter().all(|g| {
        let gi = g.inverse().expect("invertible");
        h.iter().all(|x| set.contains(g.mul(x).mul(&gi).flat()))
    });
    StructureCheck {
        name: format!("{name} is normal"),
        passed,
        detail: String::new(),
    }
}

fn complement_checks(h1: (&str, &[Matrix]), h2: (&str, &[Matrix]), whole: &[Matrix], field: FieldSpec, n: usize) -> Vec<StructureCheck> {
    let s1 = keyset(h1.1);
    let s2 = keyset(h2.1);
    let meet: Vec<&Key> = s1.intersection(&s2).collect();
    let id = Matrix::identity(field, n);
    let products: BTreeSet<Key> = h1
        .1
        .iter()
        .flat_map(|a| h2.1.iter().map(move |b| a.mul(b).flat().to_vec()))
        .collect();
    let all = keyset(whole);
    vec![
        StructureCheck {
            name: format!("{} ∩ {} is trivial", h1.0, h2.0),
            passed: meet.len() == 1 && meet[0].as_slice() == id.flat(),
            detail: format!("{} common elements", meet.len()),
        },
        StructureCheck {
            name: format!("{}·{} is the whole group", h1.0, h2.0),
            passed: products == all && s1.len() * s2.len() == all.len(),
            detail: format!("{} products, group order {}", products.len(), all.len()),
        },
    ]
}

fn params_of(field: FieldSpec, values: &[i64]) -> Vec<Scalar> {
    values.iter().map(|&v| field.from_i64(v)).collect()
}

fn restricted_points(fam: &ParamAutFamily, field: FieldSpec, keep: impl Fn(&[Scalar]) -> bool) -> Vec<Vec<Scalar>> {
    fam.parameter_points(field)
        .unwrap_or_default()
        .into_iter()
        .filter(|p| keep(p))
        .collect()
}

/// Aut(W(2)) in characteristic 2: G₂ = {Ω(1,0,v,u)} is normal,
/// G₁ = {Ω(t,x,1,0)} complements it, and Ω(t,x,1,0) conjugates Ω(1,0,v,u)
/// to Ω(1,0,v,tu). Printed matrices throughout.
pub fn semidirect_structure_check(field: FieldSpec) -> Result<GroupStructureReport> {
    let fam = family("Omega")?;
    fam.check_field(field)?;
    let print = |p: &[Scalar]| fam.printed(field, p);
    let whole: Vec<Matrix> = fam.parameter_points(field).unwrap_or_default().iter().map(|p| print(p)).collect::<Result<_>>()?;
    let g1_points = restricted_points(&fam, field, |p| p[2].is_one() && p[3].is_zero());
    let g2_points = restricted_points(&fam, field, |p| p[0].is_one() && p[1].is_zero());
    let g1: Vec<Matrix> = g1_points.iter().map(|p| print(p)).collect::<Result<_>>()?;
    let g2: Vec<Matrix> = g2_points.iter().map(|p| print(p)).collect::<Result<_>>()?;
    let mut checks = vec![
        subgroup_check("G1", &g1, field, 8),
        subgroup_check("G2", &g2, field, 8),
        normal_check("G2", &g2, &whole),
    ];
    checks.extend(complement_checks(("G1", &g1), ("G2", &g2), &whole, field, 8));
    let mut action_ok = true;
    for p1 in &g1_points {
        let a = print(p1)?;
        let ai = a.inverse().expect("invertible");
        for p2 in &g2_points {
            let lhs = a.mul(&print(p2)?).mul(&ai);
            let (t, v, u) = (&p1[0], &p2[2], &p2[3]);
            let rhs = print(&[field.one(), field.zero(), v.clone(), t * u])?;
            action_ok &= lhs == rhs;
        }
    }
    checks.push(StructureCheck {
        name: "conjugation action Ω(t,x,1,0)Ω(1,0,v,u)Ω(t,x,1,0)⁻¹ = Ω(1,0,v,tu)".into(),
        passed: action_ok,
        detail: format!("{} pairs", g1_points.len() * g2_points.len()),
    });
    let mut factor_ok = true;
    for p in fam.parameter_points(field).unwrap_or_default() {
        let lhs = print(&p)?;
        let rhs = print(&[p[0].clone(), p[1].clone(), field.one(), field.zero()])?
            .mul(&print(&[field.one(), field.zero(), p[2].clone(), p[3].clone()])?);
        factor_ok &= lhs == rhs;
    }
    checks.push(StructureCheck {
        name: "Ω(t,x,v,u) = Ω(t,x,1,0)·Ω(1,0,v,u)".into(),
        passed: factor_ok,
        detail: String::new(),
    });
    Ok(GroupStructureReport {
        family: fam.name.into(),
        field: field.to_string(),
        checks,
    })
}

/// Aut(W(2)) in characteristic 3: H₁ = {M(a,1,c,0)} and H₂ = {M(1,b,0,k)}
/// are commuting normal complements, so conjugation between them is trivial.
pub fn direct_product_check(field: FieldSpec) -> Result<GroupStructureReport> {
    let fam = family("M_abck")?;
    fam.check_field(field)?;
    let print = |p: &[Scalar]| fam.printed(field, p);
    let whole: Vec<Matrix> = fam.parameter_points(field).unwrap_or_default().iter().map(|p| print(p)).collect::<Result<_>>()?;
    let h1: Vec<Matrix> = restricted_points(&fam, field, |p| p[1].is_one() && p[3].is_zero())
        .iter()
        .map(|p| print(p))
        .collect::<Result<_>>()?;
    let h2: Vec<Matrix> = restricted_points(&fam, field, |p| p[0].is_one() && p[2].is_zero())
        .iter()
        .map(|p| print(p))
        .collect::<Result<_>>()?;
    let mut checks = vec![
        subgroup_check("H1", &h1, field, 8),
        subgroup_check("H2", &h2, field, 8),
        normal_check("H1", &h1, &whole),
        normal_check("H2", &h2, &whole),
    ];
    checks.extend(complement_checks(("H1", &h1), ("H2", &h2), &whole, field, 8));
    let commute = h1.iter().all(|a| h2.iter().all(|b| a.mul(b) == b.mul(a)));
    checks.push(StructureCheck {
        name: "H1 and H2 commute elementwise (trivial conjugation action)".into(),
        passed: commute,
        detail: format!("{} pairs", h1.len() * h2.len()),
    });
    Ok(GroupStructureReport {
        family: fam.name.into(),
        field: field.to_string(),
        checks,
    })
}

/// The centre of Aut(W₂) in characteristic 3 is {M(1,b,0)}, and every
/// M(a,b,c) factors as M(1,b,0)·M(a,1,c).
pub fn center_check(field: FieldSpec) -> Result<GroupStructureReport> {
    let fam = family("M_abc")?;
    fam.check_field(field)?;
    let points = fam.parameter_points(field).unwrap_or_default();
    let whole: Vec<Matrix> = points.iter().map(|p| fam.printed(field, p)).collect::<Result<_>>()?;
    let center: Vec<&Matrix> = whole
        .iter()
        .filter(|z| whole.iter().all(|g| z.mul(g) == g.mul(z)))
        .collect();
    let expected: Vec<Matrix> = field
        .units()
        .unwrap_or_default()
        .into_iter()
        .map(|b| fam.printed(field, &[field.one(), b, field.zero()]))
        .collect::<Result<_>>()?;
    let center_keys: BTreeSet<Key> = center.iter().map(|m| m.flat().to_vec()).collect();
    let mut factor_ok = true;
    for p in &points {
        let lhs = fam.printed(field, p)?;
        let rhs = fam
            .printed(field, &[field.one(), p[1].clone(), field.zero()])?
            .mul(&fam.printed(field, &[p[0].clone(), field.one(), p[2].clone()])?);
        factor_ok &= lhs == rhs;
    }
    Ok(GroupStructureReport {
        family: fam.name.into(),
        field: field.to_string(),
        checks: vec![
            StructureCheck {
                name: "centre equals {M(1,b,0)}".into(),
                passed: center_keys == keyset(&expected),
                detail: format!("centre order {}", center_keys.len()),
            },
            StructureCheck {
                name: "M(a,b,c) = M(1,b,0)·M(a,1,c)".into(),
                passed: factor_ok,
                detail: String::new(),
            },
        ],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugationReport {
    pub pairs: usize,
    /// (automorphism index, sample index) pairs where the characteristic
    /// polynomials of L_w and L_θ(w) differ.
    pub charpoly_failures: Vec<(usize, usize)>,
    pub invariant_failures: Vec<(usize, usize)>,
}

impl ConjugationReport {
    pub fn passed(&self) -> bool {
        self.charpoly_failures.is_empty() && self.invariant_failures.is_empty()
    }
}

/// charpoly(L_θ(w)) = charpoly(L_w) for every θ in `autos` and `samples`
/// seeded w, and likewise for the printed invariants when a set is given.
pub fn invariant_conjugation_check(
    a: &StructureAlgebra,
    autos: &[LinearOp],
    samples: usize,
    seed: u64,
    invariants: Option<InvariantSet>,
) -> Result<ConjugationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ws: Vec<Vector> = (0..samples).map(|_| Vector::random(a.field(), a.dim(), &mut rng)).collect();
    let name = invariants.map(|s| match s {
        InvariantSet::W2 => "W2",
        InvariantSet::W2x2 => "W2x2",
    });
    let base: Vec<(Vec<Scalar>, Option<Vec<Scalar>>)> = ws
        .iter()
        .map(|w| {
            Ok((
                charpoly_of_left_mult(a, w)?,
                name.map(|n| charpoly_invariants(n, w)).transpose()?,
            ))
        })
        .collect::<Result<_>>()?;
    let results: Vec<Result<(bool, bool)>> = autos
        .par_iter()
        .flat_map_iter(|theta| {
            ws.iter().zip(&base).map(move |(w, (cp, inv))| {
                let tw = theta.apply(w);
                let cp_ok = &charpoly_of_left_mult(a, &tw)? == cp;
                let inv_ok = match (name, inv) {
                    (Some(n), Some(v)) => &charpoly_invariants(n, &tw)? == v,
                    _ => true,
                };
                Ok((cp_ok, inv_ok))
            })
        })
        .collect();
    let mut report = ConjugationReport {
        pairs: results.len(),
        charpoly_failures: Vec::new(),
        invariant_failures: Vec::new(),
    };
    for (idx, r) in results.into_iter().enumerate() {
        let (cp_ok, inv_ok) = r?;
        let pair = (idx / samples.max(1), idx % samples.max(1));
        if !cp_ok {
            report.charpoly_failures.push(pair);
        }
        if !inv_ok {
            report.invariant_failures.push(pair);
        }
    }
    Ok(report)
}

/// The parameters of the identity member.
pub fn identity_params(fam: &ParamAutFamily, field: FieldSpec) -> Vec<Scalar> {
    let values: Vec<i64> = fam
        .params
        .iter()
        .map(|p| match p.domain {
            ParamDomain::Unit => 1,
            ParamDomain::Any => 0,
        })
        .collect();
    params_of(field, &values)
}
