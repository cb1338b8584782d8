use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::padic::{legendre, PadicInt};
use super::rational::Rational;
use super::ring::{RingDescriptor, SquareRing};
use crate::error::{domain, Error, Result};

/// Class of a unit in `R^× / (R^×)^2`, stored by its canonical representative.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SquareClass<E> {
    pub representative: E,
    pub ambient: RingDescriptor,
}

/// Canonical square class of a unit (1 or a fixed non-residue over Z_p,
/// the squarefree kernel over Q).
pub fn discriminant_class<R: SquareRing>(ring: &R, d: &R::Elem) -> Result<SquareClass<R::Elem>> {
    if !ring.is_unit(d) {
        return domain(format!("{} is not a unit", ring.format(d)));
    }
    Ok(SquareClass { representative: ring.class_rep(d)?, ambient: ring.descriptor() })
}

/// True when `a / b` is a square unit.
pub fn same_square_class<R: SquareRing>(ring: &R, a: &R::Elem, b: &R::Elem) -> Result<bool> {
    ring.is_square_unit(&ring.div(a, b)?)
}

/// A nonzero element of `Q_p` written as `p^val · unit`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QpNumber {
    pub val: i64,
    pub unit: PadicInt,
}

impl QpNumber {
    pub fn from_padic(x: &PadicInt) -> Result<Self> {
        let v = x
            .valuation()
            .ok_or_else(|| Error::Domain(format!("{x} is zero at its precision")))?;
        Ok(QpNumber { val: v as i64, unit: x.shift_down(v)? })
    }

    /// Embed a nonzero rational into `Q_p` with `prec` digits of unit part.
    pub fn from_rational(x: &Rational, p: u64, prec: u32) -> Result<Self> {
        if x.is_zero() {
            return domain("zero has no Hilbert symbol");
        }
        let pb = BigInt::from(p);
        let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
        let mut val = 0i64;
        while (&n % &pb).is_zero() {
            n /= &pb;
            val += 1;
        }
        while (&d % &pb).is_zero() {
            d /= &pb;
            val -= 1;
        }
        let m = BigInt::from(p).pow(prec);
        let nr = n.mod_floor(&m).to_i128().expect("fits");
        let dr = d.mod_floor(&m).to_i128().expect("fits");
        let unit = PadicInt::new(p, prec, nr).mul(&PadicInt::new(p, prec, dr).inv()?);
        Ok(QpNumber { val, unit })
    }

    pub fn mul(&self, o: &Self) -> Self {
        QpNumber { val: self.val + o.val, unit: self.unit.mul(&o.unit) }
    }

    pub fn neg(&self) -> Self {
        QpNumber { val: self.val, unit: self.unit.neg() }
    }

    /// Square in `Q_p^×`: even valuation and square unit part.
    pub fn is_square(&self) -> bool {
        self.val % 2 == 0 && legendre(self.unit.residue as i128, self.unit.p) == 1
    }
}

/// Hilbert symbol `(a, b)_p` for odd `p` by the tame formula
/// `(-1)^{αβ(p-1)/2} (u/p)^β (v/p)^α`.
pub fn hilbert_symbol(a: &QpNumber, b: &QpNumber) -> Result<i32> {
    let p = a.unit.p;
    if p == 2 || b.unit.p != p {
        return Err(Error::Unsupported("Hilbert symbol needs a common odd prime".into()));
    }
    let (al, be) = (a.val.rem_euclid(2), b.val.rem_euclid(2));
    let mut s = if al * be * (((p - 1) / 2) as i64) % 2 == 1 { -1 } else { 1 };
    if be == 1 {
        s *= legendre(a.unit.residue as i128, p);
    }
    if al == 1 {
        s *= legendre(b.unit.residue as i128, p);
    }
    Ok(s)
}

/// Hilbert symbol of two nonzero rationals at an odd prime.
pub fn hilbert_symbol_rational(a: &Rational, b: &Rational, p: u64) -> Result<i32> {
    let x = QpNumber::from_rational(a, p, 4)?;
    let y = QpNumber::from_rational(b, p, 4)?;
    hilbert_symbol(&x, &y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalars::padic::Zp;
    use crate::exact_scalars::rational::rat;

    #[test]
    fn two_and_five() {
        assert_eq!(hilbert_symbol_rational(&rat(2, 1), &rat(5, 1), 5).unwrap(), -1);
        assert_eq!(hilbert_symbol_rational(&rat(1, 1), &rat(5, 1), 5).unwrap(), 1);
        assert_eq!(hilbert_symbol_rational(&rat(10, 1), &rat(-10, 1), 5).unwrap(), 1);
    }

    #[test]
    fn classes_mod_seven() {
        let z = Zp::new(7, 6).unwrap();
        let eps = z.nonresidue();
        let c = discriminant_class(&z, &z.elem(2).mul(&eps)).unwrap();
        assert_eq!(c.representative, eps);
        assert!(same_square_class(&z, &z.elem(2), &z.elem(4)).unwrap());
    }
}
