//! Native residue arithmetic for the exhaustive scans over small prime fields.

use crate::field::{FieldSpec, Scalar};
use crate::linalg::{Matrix, Vector};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Zp {
    pub p: u64,
}

impl Zp {
    pub fn of(field: FieldSpec) -> Option<Zp> {
        match field {
            FieldSpec::Prime(p) => Some(Zp { p }),
            FieldSpec::Rationals => None,
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        let (mut base, mut e, mut acc) = (a % self.p, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }

    pub fn residues(&self, v: &Vector) -> Vec<u64> {
        v.coords().iter().map(residue).collect()
    }

    pub fn matrix(&self, m: &Matrix) -> Vec<u64> {
        m.flat().iter().map(residue).collect()
    }

    pub fn vector(&self, field: FieldSpec, v: &[u64]) -> Vector {
        Vector::from_i64(field, &v.iter().map(|&x| x as i64).collect::<Vec<_>>())
    }

    /// Row-major `n×n` matrix times a vector.
    pub fn apply(&self, m: &[u64], n: usize, x: &[u64]) -> Vec<u64> {
        (0..n)
            .map(|r| {
                m[r * n..(r + 1) * n]
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (a, b)| (acc + a * b) % self.p)
            })
            .collect()
    }

    /// Decodes `index` in base p into `n` digits, least significant first.
    pub fn digits(&self, mut index: u64, n: usize) -> Vec<u64> {
        (0..n)
            .map(|_| {
                let d = index % self.p;
                index /= self.p;
                d
            })
            .collect()
    }
}

fn residue(s: &Scalar) -> u64 {
    s.residue().expect("prime-field scalar")
}

/// Incrementally echelonized span of residue vectors.
#[derive(Clone, Debug)]
pub(crate) struct ResidueSpan {
    zp: Zp,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl ResidueSpan {
    pub fn new(zp: Zp) -> Self {
        ResidueSpan { zp, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &mut [u64]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = self.zp.sub(*x, self.zp.mul(c, *r));
                }
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.zp.inv(w[p]);
        for x in w.iter_mut() {
            *x = self.zp.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (x, r) in row.iter_mut().zip(&w) {
                    *x = self.zp.sub(*x, self.zp.mul(c, *r));
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    /// Whether the standard basis vector e_i lies in the span.
    pub fn contains_basis(&self, i: usize, n: usize) -> bool {
        let mut e = vec![0; n];
        e[i] = 1;
        self.contains(&e)
    }
}
