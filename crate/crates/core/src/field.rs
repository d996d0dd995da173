//! Exact scalars over Q and prime fields.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum FieldRepr {
    Q,
    Fp { p: u64 },
}

impl TryFrom<FieldRepr> for FieldSpec {
    type Error = Error;
    fn try_from(r: FieldRepr) -> Result<Self> {
        match r {
            FieldRepr::Q => Ok(FieldSpec::Rationals),
            FieldRepr::Fp { p } => FieldSpec::prime(p),
        }
    }
}

impl From<FieldSpec> for FieldRepr {
    fn from(f: FieldSpec) -> Self {
        match f {
            FieldSpec::Rationals => FieldRepr::Q,
            FieldSpec::Prime(p) => FieldRepr::Fp { p },
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// The prime field F_p. Residues are multiplied in u64, so p must fit in 32 bits.
    pub fn prime(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Number of elements, if finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(*p),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Mod {
                v: v.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    /// `num / den` in this field.
    pub fn frac(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        self.from_i64(num).checked_div(&d)
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(v.clone())),
            FieldSpec::Prime(p) => {
                let r = v.mod_floor_u64(p);
                Scalar::Mod { v: r, p }
            }
        }
    }

    /// All elements in canonical order, for finite fields.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.order()
            .map(|q| (0..q as i64).map(|v| self.from_i64(v)).collect())
    }

    /// All nonzero elements, for finite fields.
    pub fn units(&self) -> Option<Vec<Scalar>> {
        self.order()
            .map(|q| (1..q as i64).map(|v| self.from_i64(v)).collect())
    }

    /// Uniform element of F_p, or a small fraction with numerator in [-9, 9]
    /// and denominator in [1, 4] over Q.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match *self {
            FieldSpec::Rationals => {
                let n: i64 = rng.gen_range(-9..=9);
                let d: i64 = rng.gen_range(1..=4);
                Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
            }
            FieldSpec::Prime(p) => Scalar::Mod {
                v: rng.gen_range(0..p),
                p,
            },
        }
    }

    /// Random nonzero element.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Parse an exact scalar token: an optionally signed integer, optionally
    /// followed by `/` and a positive integer. Decimal points and exponents are rejected.
    pub fn parse_scalar(&self, token: &str) -> Result<Scalar> {
        let bad = || Error::InexactScalar(token.to_string());
        let (num, den) = match token.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (token, None),
        };
        let digits = num.strip_prefix('-').unwrap_or(num);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let n = BigInt::from_str(num).map_err(|_| bad())?;
        let value = self.from_bigint(&n);
        match den {
            None => Ok(value),
            Some(d) => {
                if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                let d = BigInt::from_str(d).map_err(|_| bad())?;
                value.checked_div(&self.from_bigint(&d))
            }
        }
    }

    /// Check that a scalar belongs to this field.
    pub fn owns(&self, s: &Scalar) -> bool {
        s.field() == *self
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Q" || t == "q" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix('F')
            .or_else(|| t.strip_prefix("GF"))
            .ok_or_else(|| Error::UnknownField(s.to_string()))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::UnknownField(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u64().expect("residue fits in u64")
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Mod { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { v, .. } => *v == 1,
        }
    }

    /// Canonical residue of a prime-field element.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { v, .. } => Some(*v),
            Scalar::Rat(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Mod { .. } => None,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) if r.is_zero() => None,
            Scalar::Rat(r) => Some(Scalar::Rat(r.recip())),
            Scalar::Mod { v: 0, .. } => None,
            Scalar::Mod { v, p } => Some(Scalar::Mod {
                v: pow_mod(*v, p - 2, *p),
                p: *p,
            }),
        }
    }

    pub fn checked_div(&self, d: &Scalar) -> Result<Scalar> {
        let inv = d
            .inv()
            .ok_or_else(|| Error::DivisionByZero(format!("{self}/{d}")))?;
        Ok(self * &inv)
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn mixed(a: &Scalar, b: &Scalar) -> ! {
    panic!("arithmetic across fields: {} and {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) if p == q => Scalar::Mod {
                v: (a + b) % p,
                p: *p,
            },
            _ => mixed(self, o),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) if p == q => Scalar::Mod {
                v: (a + p - b) % p,
                p: *p,
            },
            _ => mixed(self, o),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) if p == q => Scalar::Mod {
                v: a * b % p,
                p: *p,
            },
            _ => mixed(self, o),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { v, p } => Scalar::Mod {
                v: (p - v) % p,
                p: *p,
            },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used only for deterministic sorting: rationals by value,
/// residues by canonical representative.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) => (p, a).cmp(&(q, b)),
            (Scalar::Rat(_), Scalar::Mod { .. }) => Ordering::Less,
            (Scalar::Mod { .. }, Scalar::Rat(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Scalar {
    /// Representative in (-p/2, p/2] for residues; the value itself over Q.
    /// Used for human-readable output only.
    pub fn signed_string(&self) -> String {
        match self {
            Scalar::Mod { v, p } if *v > p / 2 => format!("-{}", p - v),
            _ => self.to_string(),
        }
    }

    pub fn is_negative_display(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Mod { v, p } => *v > p / 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_field_names() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("F101".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(101));
        assert_eq!("F4".parse::<FieldSpec>(), Err(Error::NotPrime(4)));
        assert!("R".parse::<FieldSpec>().is_err());
        assert!("F1".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn exact_tokens() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.parse_scalar("-3").unwrap(), q.from_i64(-3));
        assert_eq!(q.parse_scalar("4/6").unwrap().to_string(), "2/3");
        assert!(q.parse_scalar("1.5").is_err());
        assert!(q.parse_scalar("1e3").is_err());
        assert!(q.parse_scalar("").is_err());
        assert!(q.parse_scalar("1/0").is_err());
        assert!(q.parse_scalar("- 1").is_err());
        let f7 = FieldSpec::Prime(7);
        assert_eq!(f7.parse_scalar("2/3").unwrap().residue(), Some(3));
        assert_eq!(f7.parse_scalar("-1").unwrap().residue(), Some(6));
        assert!(f7.parse_scalar("1/7").is_err());
    }

    #[test]
    fn residue_arithmetic() {
        let f = FieldSpec::Prime(5);
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!((&a + &b).residue(), Some(2));
        assert_eq!((&a - &b).residue(), Some(4));
        assert_eq!((&a * &b).residue(), Some(2));
        assert_eq!(a.inv().unwrap().residue(), Some(2));
        assert_eq!(f.frac(3, 4).unwrap().residue(), Some(2));
        assert!(f.zero().inv().is_none());
        assert_eq!(f.from_i64(-2).signed_string(), "-2");
    }

    #[test]
    fn rationals_stay_reduced() {
        let q = FieldSpec::Rationals;
        let x = q.frac(6, -4).unwrap();
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!((&x * &q.frac(-2, 3).unwrap()).to_string(), "1");
    }

    #[test]
    fn field_json_shape() {
        let s = serde_json::to_string(&FieldSpec::Prime(5)).unwrap();
        assert_eq!(s, r#"{"kind":"Fp","p":5}"#);
        let q: FieldSpec = serde_json::from_str(r#"{"kind":"Q"}"#).unwrap();
        assert_eq!(q, FieldSpec::Rationals);
        assert!(serde_json::from_str::<FieldSpec>(r#"{"kind":"Fp","p":9}"#).is_err());
    }
}
