use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use super::ring::{Ring, RingDescriptor, SquareRing};
use crate::error::{domain, Error, Result};

pub type Rational = BigRational;

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalField;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Squarefree part of a nonzero integer, sign included.
///
/// Trial division up to 10^5 followed by a perfect-square test on the
/// cofactor; a cofactor with a large repeated prime is left as is, which
/// only affects the printed representative, never class equality.
pub fn squarefree_part(n: &BigInt) -> BigInt {
    assert!(!n.is_zero());
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut d = BigInt::from(2u32);
    let limit = BigInt::from(100_000u32);
    while &d * &d <= m && d <= limit {
        let mut e = 0u32;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &d;
        }
        d += 1u32;
    }
    if !is_perfect_square(&m) {
        out *= m;
    }
    if n.is_negative() {
        -out
    } else {
        out
    }
}

impl Ring for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &Rational) -> bool {
        !a.is_zero()
    }
    fn inv(&self, a: &Rational) -> Result<Rational> {
        if a.is_zero() {
            return Err(Error::NotUnit("0".into()));
        }
        Ok(a.recip())
    }
    fn div_exact(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        self.div(a, b)
    }
    fn valuation(&self, a: &Rational) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(0)
        }
    }
    fn is_field(&self) -> bool {
        true
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Rational
    }
    fn format(&self, a: &Rational) -> String {
        format!("{}/{}", a.numer(), a.denom())
    }
    fn to_json(&self, a: &Rational) -> Value {
        Value::String(self.format(a))
    }
    fn from_json(&self, v: &Value) -> Result<Rational> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => n
                .as_i64()
                .map(|x| self.from_i64(x))
                .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
            other => Err(Error::Parse(format!("expected rational, got {other}"))),
        }
    }
}

impl SquareRing for RationalField {
    fn is_square_unit(&self, a: &Rational) -> Result<bool> {
        if a.is_zero() {
            return domain("zero is not a unit");
        }
        Ok(is_perfect_square(a.numer()) && is_perfect_square(a.denom()))
    }

    fn sqrt_unit(&self, a: &Rational) -> Result<Rational> {
        if !self.is_square_unit(a)? {
            return domain(format!("{a} is not a square in Q"));
        }
        Ok(BigRational::new(a.numer().sqrt(), a.denom().sqrt()))
    }

    fn class_rep(&self, a: &Rational) -> Result<Rational> {
        if a.is_zero() {
            return domain("zero has no square class");
        }
        let prod = a.numer() * a.denom();
        Ok(Rational::from_integer(squarefree_part(&prod)))
    }
}

/// Nonnegative remainder helper shared by the modular code.
pub(crate) fn mod_floor_i128(a: i128, m: i128) -> i128 {
    a.rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&BigInt::from(72)), BigInt::from(2));
        assert_eq!(squarefree_part(&BigInt::from(-45)), BigInt::from(-5));
        assert_eq!(squarefree_part(&BigInt::from(1)), BigInt::from(1));
    }

    #[test]
    fn sqrt_of_nine_is_three() {
        let f = RationalField;
        assert_eq!(f.sqrt_unit(&rat(9, 1)).unwrap(), rat(3, 1));
        assert_eq!(f.sqrt_unit(&rat(4, 25)).unwrap(), rat(2, 5));
        assert!(f.sqrt_unit(&rat(2, 1)).is_err());
        assert!(!f.is_square_unit(&rat(-1, 1)).unwrap());
    }

    #[test]
    fn class_of_four_is_one() {
        let f = RationalField;
        assert_eq!(f.class_rep(&rat(4, 1)).unwrap(), rat(1, 1));
        assert_eq!(f.class_rep(&rat(3, 12)).unwrap(), rat(1, 1));
        assert_eq!(f.class_rep(&rat(2, 3)).unwrap(), rat(6, 1));
    }
}
