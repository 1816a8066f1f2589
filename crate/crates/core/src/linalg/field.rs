//! Exact coefficient fields: prime fields `F_p` with `p < 2³¹` and the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_PRIME: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Prime { p: u64 },
    Rational,
}

/// A field element. Prime-field values are kept in `[0, p)`, rationals in
/// lowest terms; the two variants are never mixed inside one matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod(u64),
    Rat(BigRational),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::Input(format!("{p} is not a prime below 2^31")));
        }
        Ok(FieldSpec::Prime { p })
    }

    pub fn rational() -> Self {
        FieldSpec::Rational
    }

    /// Re-checks a deserialized spec.
    pub fn checked(self) -> Result<Self> {
        match self {
            FieldSpec::Prime { p } => FieldSpec::prime(p),
            FieldSpec::Rational => Ok(self),
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Prime { p } => Some(*p),
            FieldSpec::Rational => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime { .. } => Scalar::Mod(0),
            FieldSpec::Rational => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Prime { .. } => Scalar::Mod(1),
            FieldSpec::Rational => Scalar::Rat(BigRational::one()),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Prime { p } => Scalar::Mod(v.rem_euclid(*p as i64) as u64),
            FieldSpec::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime { p }, Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % p),
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime { p }, Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod((x + p - y) % p)
            }
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime { p }, Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(x * y % p),
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.sub(&self.zero(), a)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match (self, a) {
            (FieldSpec::Prime { p }, Scalar::Mod(x)) => Some(Scalar::Mod(pow_mod(*x, p - 2, *p))),
            (FieldSpec::Rational, Scalar::Rat(x)) => Some(Scalar::Rat(x.recip())),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Parses a JSON entry: an integer, or (rationals only) a string `"p/q"`.
    pub fn parse_json(&self, v: &serde_json::Value) -> Result<Scalar> {
        match (self, v) {
            (FieldSpec::Prime { p }, serde_json::Value::Number(n)) => {
                let x = n
                    .as_u64()
                    .ok_or_else(|| Error::Format(format!("entry {n} is not in [0,{p})")))?;
                if x >= *p {
                    return Err(Error::Format(format!("entry {x} is not in [0,{p})")));
                }
                Ok(Scalar::Mod(x))
            }
            (FieldSpec::Rational, serde_json::Value::Number(n)) => {
                let x = n
                    .as_i64()
                    .ok_or_else(|| Error::Format(format!("entry {n} is not an integer")))?;
                Ok(self.from_i64(x))
            }
            (FieldSpec::Rational, serde_json::Value::String(s)) => parse_rational(s),
            _ => Err(Error::Format(format!("entry {v} is not valid over {self}"))),
        }
    }

    pub fn to_json(&self, s: &Scalar) -> serde_json::Value {
        match s {
            Scalar::Mod(x) => serde_json::Value::from(*x),
            Scalar::Rat(r) => {
                if r.is_integer() {
                    if let Some(v) = r.numer().to_i64() {
                        return serde_json::Value::from(v);
                    }
                }
                serde_json::Value::String(r.to_string())
            }
        }
    }
}

fn parse_rational(s: &str) -> Result<Scalar> {
    let bad = || Error::Format(format!("'{s}' is not a rational of the form p/q"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::Rat(BigRational::new(num, den)))
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(x) => *x == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod(x) => *x == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    /// Size of the entry, used for pivot choice over the rationals.
    pub(crate) fn weight(&self) -> u64 {
        match self {
            Scalar::Mod(_) => 0,
            Scalar::Rat(r) => r.numer().abs().bits() + r.denom().bits(),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(x) => write!(f, "{x}"),
            Scalar::Rat(r) => write!(f, "{r}"),
        }
    }
}
