//! Exact scalars over the rationals and prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ground field descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// The prime field of order `p`; rejects composites and anything below 2.
    pub fn prime(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::zero()),
            Field::Prime(p) => Scalar::Fp { value: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Fp { value: v.rem_euclid(p as i64) as u32, p },
        }
    }

    /// `num / den`, failing when `den` vanishes in this field.
    pub fn fraction(self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.from_i64(num) * &d.inv()?)
    }

    pub fn contains(self, s: &Scalar) -> bool {
        match (self, s) {
            (Field::Rational, Scalar::Q(_)) => true,
            (Field::Prime(p), Scalar::Fp { value, p: q }) => p == *q && *value < p,
            _ => false,
        }
    }

    /// Parses the serialized scalar form: integers, or `a/b` strings over the rationals.
    pub fn parse(self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        match self {
            Field::Rational => {
                let (num, den) = match text.split_once('/') {
                    Some((a, b)) => (a.trim(), b.trim()),
                    None => (text, "1"),
                };
                let num = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad rational `{text}`")))?;
                let den = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad rational `{text}`")))?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in `{text}`")));
                }
                Ok(Scalar::Q(BigRational::new(num, den)))
            }
            Field::Prime(p) => {
                let v: i64 = text.parse().map_err(|_| Error::Parse(format!("bad residue `{text}`")))?;
                if v < 0 || v >= p as i64 {
                    return Err(Error::Parse(format!("residue {v} outside [0, {p})")));
                }
                Ok(Scalar::Fp { value: v as u32, p })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `Q`, `Fp:<p>` and `F<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let digits = s
            .strip_prefix("Fp:")
            .or_else(|| s.strip_prefix("fp:"))
            .or_else(|| s.strip_prefix('F'))
            .ok_or_else(|| Error::Parse(format!("unknown field `{s}`")))?;
        let p: u32 = digits.parse().map_err(|_| Error::Parse(format!("unknown field `{s}`")))?;
        Field::prime(p)
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element. Rationals are kept reduced (the `BigRational` invariant),
/// residues in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { value, p } => Scalar::Fp { value: pow_mod(*value as u64, *p as u64 - 2, *p as u64) as u32, p: *p },
        })
    }

    /// Integer value when the scalar is an integer (rationals) or its residue representative.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(q) if q.is_integer() => q.to_integer().to_i64(),
            Scalar::Q(_) => None,
            Scalar::Fp { value, .. } => Some(*value as i64),
        }
    }

    /// Serialized form: residues as integers, rationals as reduced `a/b` (or `a`).
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Fp { value, .. } => serde_json::Value::from(*value),
            Scalar::Q(q) if q.is_integer() => match q.to_integer().to_i64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(q.to_integer().to_string()),
            },
            Scalar::Q(q) => serde_json::Value::from(format!("{}/{}", q.numer(), q.denom())),
        }
    }

    fn mismatch(a: &Scalar, b: &Scalar) -> ! {
        panic!("field mismatch: {} vs {}", a.field(), b.field())
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                Scalar::Fp { value: ((*a as u64 + *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                Scalar::Fp { value: ((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => {
                if a.is_one() {
                    return rhs.clone();
                }
                if b.is_one() {
                    return self.clone();
                }
                Scalar::Q(a * b)
            }
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                Scalar::Fp { value: ((*a as u64 * *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, p } => Scalar::Fp { value: (*p - *value) % *p, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn rationals_stay_reduced() {
        let q = Field::Rational;
        let a = q.fraction(2, 4).unwrap();
        let b = q.fraction(-3, -6).unwrap();
        assert_eq!(a, b);
        match &a {
            Scalar::Q(r) => {
                assert_eq!(r.numer(), &BigInt::from(1));
                assert_eq!(r.denom(), &BigInt::from(2));
            }
            _ => unreachable!(),
        }
        let neg = q.fraction(1, -2).unwrap();
        match neg {
            Scalar::Q(r) => assert!(r.denom().is_positive()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn residues_in_range() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(-1);
        assert_eq!(a, Scalar::Fp { value: 6, p: 7 });
        assert_eq!(&a * &a, f.one());
        assert_eq!(&a + &f.one(), f.zero());
        assert_eq!(f.from_i64(3).inv().unwrap(), f.from_i64(5));
        assert!(f.zero().inv().is_err());
    }

    #[test]
    fn composite_moduli_rejected() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2).is_ok());
        assert!("Fp:9".parse::<Field>().is_err());
        assert_eq!("Fp:3".parse::<Field>().unwrap(), Field::Prime(3));
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
    }

    #[test]
    fn parse_round_trip() {
        let q = Field::Rational;
        let s = q.parse("-6/4").unwrap();
        assert_eq!(s.to_json(), serde_json::json!("-3/2"));
        assert_eq!(q.parse(&s.to_string()).unwrap(), s);
        let f3 = Field::Prime(3);
        assert!(f3.parse("3").is_err());
        assert_eq!(f3.parse("2").unwrap().to_json(), serde_json::json!(2));
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = &Field::Rational.one() + &Field::Prime(5).one();
    }
}
