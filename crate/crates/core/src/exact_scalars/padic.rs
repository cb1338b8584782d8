use std::fmt;

use serde_json::{json, Value};

use super::rational::mod_floor_i128;
use super::ring::{LocalRing, Ring, RingDescriptor, SquareRing};
use crate::error::{domain, Error, Result};

/// Largest admissible modulus `p^K`; keeps products inside `u128`.
const MAX_MODULUS: u128 = 1 << 62;

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn checked_modulus(p: u64, k: u32) -> Result<u64> {
    let m = (p as u128).checked_pow(k).filter(|m| *m < MAX_MODULUS);
    m.map(|m| m as u64)
        .ok_or_else(|| Error::Domain(format!("modulus {p}^{k} too large")))
}

fn modulus(p: u64, k: u32) -> u64 {
    (p as u128).pow(k) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u128, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(mod_floor_i128(s0, m as i128) as u64)
}

/// Legendre symbol `(a/p)` for odd prime `p`, returning -1, 0 or 1.
pub fn legendre(a: i128, p: u64) -> i32 {
    let r = mod_floor_i128(a, p as i128) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, ((p - 1) / 2) as u128, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest positive quadratic non-residue modulo `p`.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|a| legendre(*a as i128, p) == -1).expect("odd prime has a non-residue")
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of `Z_p` known modulo `p^prec`.
#[derive(Clone, Copy)]
pub struct PadicInt {
    pub p: u64,
    pub prec: u32,
    pub residue: u64,
}

impl PadicInt {
    pub fn new(p: u64, prec: u32, value: i128) -> Self {
        let m = modulus(p, prec);
        PadicInt { p, prec, residue: mod_floor_i128(value, m as i128) as u64 }
    }

    pub fn modulus(&self) -> u64 {
        modulus(self.p, self.prec)
    }

    /// `None` means the element is zero at its precision ("at least prec").
    pub fn valuation(&self) -> Option<u32> {
        if self.residue == 0 {
            return None;
        }
        let mut v = 0;
        let mut r = self.residue;
        while r % self.p == 0 {
            r /= self.p;
            v += 1;
        }
        Some(v)
    }

    pub fn is_unit(&self) -> bool {
        self.residue % self.p != 0
    }

    /// Centered integer representative in `(-p^prec/2, p^prec/2]`.
    pub fn centered(&self) -> i128 {
        let m = self.modulus() as i128;
        let r = self.residue as i128;
        if r > m / 2 {
            r - m
        } else {
            r
        }
    }

    pub fn residue_mod_p(&self) -> u64 {
        self.residue % self.p
    }

    /// Drop to a lower precision.
    pub fn truncate(&self, prec: u32) -> Self {
        let prec = prec.min(self.prec);
        PadicInt { p: self.p, prec, residue: self.residue % modulus(self.p, prec) }
    }

    /// Exact division by `p^v`; loses `v` digits and fails below one digit.
    pub fn shift_down(&self, v: u32) -> Result<Self> {
        if v == 0 {
            return Ok(*self);
        }
        if self.prec <= v {
            return Err(Error::Precision(format!(
                "dividing by {}^{} leaves no digits of a {}-digit value",
                self.p, v, self.prec
            )));
        }
        let pv = modulus(self.p, v);
        if self.residue % pv != 0 {
            return domain(format!("{} is not divisible by {}^{}", self.residue, self.p, v));
        }
        Ok(PadicInt { p: self.p, prec: self.prec - v, residue: self.residue / pv })
    }

    fn binop(&self, other: &Self, f: impl Fn(u64, u64, u64) -> u64) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        let prec = self.prec.min(other.prec);
        let m = modulus(self.p, prec);
        PadicInt { p: self.p, prec, residue: f(self.residue % m, other.residue % m, m) }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.binop(o, |a, b, m| ((a as u128 + b as u128) % m as u128) as u64)
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.binop(o, |a, b, m| ((a as u128 + m as u128 - b as u128) % m as u128) as u64)
    }
    pub fn mul(&self, o: &Self) -> Self {
        self.binop(o, mul_mod)
    }
    pub fn neg(&self) -> Self {
        let m = self.modulus();
        PadicInt { residue: (m - self.residue) % m, ..*self }
    }

    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit(format!("{self}")));
        }
        let r = inv_mod(self.residue, self.modulus()).expect("unit");
        Ok(PadicInt { residue: r, ..*self })
    }

    pub fn pow(&self, e: u128) -> Self {
        PadicInt { residue: pow_mod(self.residue, e, self.modulus()), ..*self }
    }

    pub fn is_square_unit(&self) -> Result<bool> {
        if !self.is_unit() {
            return domain(format!("{self} is not a unit"));
        }
        Ok(legendre(self.residue as i128, self.p) == 1)
    }

    /// Square root of a square unit; the residue of the root lies in `1..=(p-1)/2`.
    pub fn sqrt_unit(&self) -> Result<Self> {
        if !self.is_square_unit()? {
            return domain(format!("{self} is not a square"));
        }
        let p = self.p;
        let r0 = (1..=(p - 1) / 2)
            .find(|x| x * x % p == self.residue % p)
            .expect("residue square root");
        let two = PadicInt::new(p, self.prec, 2);
        let mut v = PadicInt::new(p, self.prec, r0 as i128);
        // Newton iteration doubles the number of correct digits each round.
        for _ in 0..(self.prec.max(1).ilog2() + 2) {
            let num = v.mul(&v).sub(self);
            let den = two.mul(&v).inv()?;
            v = v.sub(&num.mul(&den));
        }
        debug_assert!(v.mul(&v) == *self);
        Ok(v)
    }
}

impl PartialEq for PadicInt {
    /// Equality at the common precision.
    fn eq(&self, other: &Self) -> bool {
        if self.p != other.p {
            return false;
        }
        let m = modulus(self.p, self.prec.min(other.prec));
        self.residue % m == other.residue % m
    }
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.centered(), self.p, self.prec)
    }
}

/// The truncated ring `Z_p / p^K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zp {
    pub p: u64,
    pub k: u32,
}

impl Zp {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::Unsupported(format!("p = {p} must be an odd prime")));
        }
        if k == 0 {
            return domain("precision must be positive");
        }
        checked_modulus(p, k)?;
        Ok(Zp { p, k })
    }

    pub fn elem(&self, v: i128) -> PadicInt {
        PadicInt::new(self.p, self.k, v)
    }

    /// Fixed non-residue used as the second square-class representative.
    pub fn nonresidue(&self) -> PadicInt {
        self.elem(least_nonresidue(self.p) as i128)
    }
}

impl Ring for Zp {
    type Elem = PadicInt;

    fn zero(&self) -> PadicInt {
        self.elem(0)
    }
    fn one(&self) -> PadicInt {
        self.elem(1)
    }
    fn from_i64(&self, n: i64) -> PadicInt {
        self.elem(n as i128)
    }
    fn add(&self, a: &PadicInt, b: &PadicInt) -> PadicInt {
        a.add(b)
    }
    fn sub(&self, a: &PadicInt, b: &PadicInt) -> PadicInt {
        a.sub(b)
    }
    fn neg(&self, a: &PadicInt) -> PadicInt {
        a.neg()
    }
    fn mul(&self, a: &PadicInt, b: &PadicInt) -> PadicInt {
        a.mul(b)
    }
    fn is_zero(&self, a: &PadicInt) -> bool {
        a.residue == 0
    }
    fn is_unit(&self, a: &PadicInt) -> bool {
        a.is_unit()
    }
    fn inv(&self, a: &PadicInt) -> Result<PadicInt> {
        a.inv()
    }
    fn div_exact(&self, a: &PadicInt, b: &PadicInt) -> Result<PadicInt> {
        let vb = b.valuation().ok_or_else(|| Error::Singular("division by zero".into()))?;
        if let Some(va) = a.valuation() {
            if va < vb {
                return domain(format!("{a} / {b} is not integral"));
            }
        }
        let a1 = if a.residue == 0 {
            PadicInt { prec: a.prec.saturating_sub(vb).max(1), residue: 0, ..*a }
        } else {
            a.shift_down(vb)?
        };
        let b1 = b.shift_down(vb)?;
        Ok(a1.mul(&b1.inv()?))
    }
    fn valuation(&self, a: &PadicInt) -> Option<u32> {
        a.valuation()
    }
    fn is_field(&self) -> bool {
        false
    }
    fn precision(&self) -> Option<u32> {
        Some(self.k)
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Padic { p: self.p, k: self.k }
    }
    fn format(&self, a: &PadicInt) -> String {
        a.centered().to_string()
    }
    fn to_json(&self, a: &PadicInt) -> Value {
        if a.prec == self.k {
            json!(a.residue)
        } else {
            json!({"p": a.p, "K": a.prec, "residue": a.residue})
        }
    }
    fn from_json(&self, v: &Value) -> Result<PadicInt> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|x| self.elem(x as i128))
                .or_else(|| n.as_u64().map(|x| self.elem(x as i128)))
                .ok_or_else(|| Error::Parse(format!("bad p-adic residue {n}"))),
            Value::String(s) => s
                .trim()
                .parse::<i128>()
                .map(|x| self.elem(x))
                .map_err(|_| Error::Parse(format!("bad p-adic residue {s:?}"))),
            Value::Object(o) => {
                let p = o.get("p").and_then(Value::as_u64).unwrap_or(self.p);
                let k = o.get("K").and_then(Value::as_u64).unwrap_or(self.k as u64) as u32;
                let r = o
                    .get("residue")
                    .and_then(|r| r.as_i64().map(|x| x as i128).or(r.as_u64().map(|x| x as i128)))
                    .ok_or_else(|| Error::Parse("missing residue".into()))?;
                if p != self.p || k > self.k {
                    return Err(Error::Parse(format!("element over Z_{p}/{p}^{k} in wrong ring")));
                }
                Ok(PadicInt::new(p, k, r))
            }
            other => Err(Error::Parse(format!("expected p-adic, got {other}"))),
        }
    }
}

impl SquareRing for Zp {
    fn is_square_unit(&self, a: &PadicInt) -> Result<bool> {
        a.is_square_unit()
    }
    fn sqrt_unit(&self, a: &PadicInt) -> Result<PadicInt> {
        a.sqrt_unit()
    }
    fn class_rep(&self, a: &PadicInt) -> Result<PadicInt> {
        Ok(if a.is_square_unit()? { self.one() } else { self.nonresidue() })
    }
}

impl LocalRing for Zp {
    fn prime(&self) -> u64 {
        self.p
    }
    fn prec(&self) -> u32 {
        self.k
    }
    fn residue_degree(&self) -> u32 {
        1
    }
    fn teichmuller_generator(&self) -> PadicInt {
        let p = self.p;
        let order = p - 1;
        let factors = prime_factors(order as u128);
        let g = (2..p)
            .find(|g| factors.iter().all(|r| pow_mod(*g, (order as u128) / r, p) != 1))
            .unwrap_or(1);
        let mut x = self.elem(g as i128);
        for _ in 0..=self.k {
            x = x.pow(p as u128);
        }
        x
    }
    fn residue_element(&self, index: u64) -> PadicInt {
        self.elem(index as i128)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_mod_625() {
        let z = Zp::new(5, 4).unwrap();
        assert!(z.is_square_unit(&z.elem(6)).unwrap());
        assert!(!z.is_square_unit(&z.elem(2)).unwrap());
        let v = z.sqrt_unit(&z.elem(6)).unwrap();
        assert_eq!(v.mul(&v), z.elem(6));
        assert!(v.residue_mod_p() <= 2);
        assert!(z.is_square_unit(&z.elem(5)).is_err());
    }

    #[test]
    fn teichmuller_has_exact_order() {
        let z = Zp::new(7, 6).unwrap();
        let t = z.teichmuller_generator();
        assert_eq!(t.pow(6), z.one());
        assert_ne!(t.pow(3), z.one());
        assert_ne!(t.pow(2), z.one());
    }

    #[test]
    fn division_tracks_precision() {
        let z = Zp::new(3, 8).unwrap();
        let q = z.div_exact(&z.elem(18), &z.elem(3)).unwrap();
        assert_eq!(q.prec, 7);
        assert_eq!(q, PadicInt::new(3, 7, 6));
        assert!(z.div_exact(&z.elem(1), &z.elem(3)).is_err());
        let tiny = PadicInt::new(3, 1, 0);
        assert!(tiny.shift_down(1).is_err());
    }

    #[test]
    fn legendre_matches_enumeration() {
        for p in [3u64, 5, 7, 11, 13] {
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 1..p {
                assert_eq!(legendre(a as i128, p) == 1, squares.contains(&a));
            }
        }
    }
}
