use std::fmt;

use serde_json::{json, Value};

use super::padic::{checked_modulus, is_odd_prime, prime_factors, PadicInt};
use super::ring::{LocalRing, Ring, RingDescriptor, SquareRing};
use crate::error::{domain, Error, Result};

fn pk(p: u64, k: u32) -> u64 {
    (p as u128).pow(k) as u64
}

/// Element of an unramified extension `Z_p[x]/(f)` known modulo `p^prec`.
#[derive(Clone)]
pub struct ZqElem {
    pub p: u64,
    pub coeffs: Vec<u64>,
    pub prec: u32,
}

impl ZqElem {
    fn reduce_to(&self, prec: u32, p: u64) -> Vec<u64> {
        let m = pk(p, prec);
        self.coeffs.iter().map(|c| c % m).collect()
    }
}

impl PartialEq for ZqElem {
    fn eq(&self, other: &Self) -> bool {
        if self.p != other.p || self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        let prec = self.prec.min(other.prec);
        self.reduce_to(prec, self.p) == other.reduce_to(prec, self.p)
    }
}

impl fmt::Debug for ZqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.coeffs, self.prec)
    }
}

/// Unramified extension `Z_p[x]/(f)` of degree `deg f`, truncated at `p^K`,
/// where `f` is monic and irreducible modulo `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Zq {
    pub p: u64,
    pub k: u32,
    modulus: Vec<u64>,
    generator: ZqElem,
}

impl Zq {
    /// Degree-`f` extension whose defining polynomial is the
    /// lexicographically first primitive polynomial modulo `p`.
    pub fn unramified(p: u64, k: u32, f: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::Unsupported(format!("p = {p} must be an odd prime")));
        }
        if f == 0 {
            return domain("degree must be positive");
        }
        checked_modulus(p, k)?;
        let q = (p as u128).pow(f);
        let factors = prime_factors(q - 1);
        let count = (p as u128).pow(f);
        for idx in 0..count {
            let mut c: Vec<u64> = Vec::with_capacity(f as usize + 1);
            let mut t = idx;
            for _ in 0..f {
                c.push((t % p as u128) as u64);
                t /= p as u128;
            }
            if c[0] == 0 {
                continue;
            }
            c.push(1);
            let probe = Zq::raw(p, 1, c.clone());
            let x = probe.x();
            if probe.is_one(&probe.pow(&x, q - 1))
                && factors.iter().all(|r| !probe.is_one(&probe.pow(&x, (q - 1) / r)))
            {
                return Zq::with_modulus(p, k, c);
            }
        }
        domain(format!("no primitive polynomial of degree {f} mod {p}"))
    }

    /// Extension defined by a monic polynomial (low-to-high coefficients)
    /// that must be irreducible modulo `p`.
    pub fn with_modulus(p: u64, k: u32, modulus: Vec<u64>) -> Result<Self> {
        if modulus.len() < 2 || modulus.last() != Some(&1) {
            return domain("modulus must be monic of positive degree");
        }
        checked_modulus(p, k)?;
        let m = pk(p, k);
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % m).collect();
        let mut ring = Zq::raw(p, k, modulus);
        let f = ring.degree();
        let q = (p as u128).pow(f);
        let factors = prime_factors(q - 1);
        let low = Zq::raw(p, 1, ring.modulus.iter().map(|c| c % p).collect());
        let mut gen = None;
        for idx in 1..q as u64 {
            let g = low.residue_element(idx);
            if !low.is_one(&low.pow(&g, q - 1)) {
                return domain("modulus is not irreducible modulo p");
            }
            if factors.iter().all(|r| !low.is_one(&low.pow(&g, (q - 1) / r))) {
                gen = Some(g);
                break;
            }
        }
        let g = gen.ok_or_else(|| Error::Domain("no generator of the residue field".into()))?;
        let mut t = ZqElem { p, coeffs: g.coeffs.clone(), prec: k };
        for _ in 0..=k {
            t = ring.pow(&t, q);
        }
        ring.generator = t;
        Ok(ring)
    }

    fn raw(p: u64, k: u32, modulus: Vec<u64>) -> Self {
        let f = modulus.len() - 1;
        Zq { p, k, modulus, generator: ZqElem { p, coeffs: vec![0; f], prec: k } }
    }

    pub fn degree(&self) -> u32 {
        (self.modulus.len() - 1) as u32
    }

    pub fn modulus_poly(&self) -> &[u64] {
        &self.modulus
    }

    /// The class of `x` in `Z_p[x]/(f)`.
    pub fn x(&self) -> ZqElem {
        let mut c = vec![0; self.degree() as usize];
        if c.len() == 1 {
            // degree one: x is the root of x + c0
            c[0] = (pk(self.p, self.k) - self.modulus[0]) % pk(self.p, self.k);
        } else {
            c[1] = 1;
        }
        ZqElem { p: self.p, coeffs: c, prec: self.k }
    }

    pub fn embed(&self, a: &PadicInt) -> ZqElem {
        assert_eq!(a.p, self.p);
        let mut c = vec![0; self.degree() as usize];
        c[0] = a.residue;
        ZqElem { p: self.p, coeffs: c, prec: a.prec.min(self.k) }
    }

    /// The element as a `Z_p` value when it lies in the base ring.
    pub fn as_base(&self, a: &ZqElem) -> Option<PadicInt> {
        let m = pk(self.p, a.prec);
        if a.coeffs[1..].iter().all(|c| c % m == 0) {
            Some(PadicInt::new(self.p, a.prec, a.coeffs[0] as i128))
        } else {
            None
        }
    }

    pub fn elem_from_coeffs(&self, coeffs: &[i128]) -> ZqElem {
        let m = pk(self.p, self.k) as i128;
        let mut c = vec![0u64; self.degree() as usize];
        for (i, v) in coeffs.iter().enumerate() {
            c[i] = v.rem_euclid(m) as u64;
        }
        ZqElem { p: self.p, coeffs: c, prec: self.k }
    }

    fn modp(&self, prec: u32) -> u64 {
        pk(self.p, prec)
    }

    fn residue(&self, a: &ZqElem) -> ZqElem {
        ZqElem { p: self.p, coeffs: a.reduce_to(1, self.p), prec: 1 }
    }

    fn residue_inverse(&self, a: &ZqElem) -> Result<ZqElem> {
        let low = Zq::raw(self.p, 1, self.modulus.iter().map(|c| c % self.p).collect());
        let r = self.residue(a);
        if r.coeffs.iter().all(|c| *c == 0) {
            return Err(Error::NotUnit(format!("{a:?}")));
        }
        let q = (self.p as u128).pow(self.degree());
        Ok(low.pow(&r, q - 2))
    }

    fn shift_down(&self, a: &ZqElem, v: u32) -> Result<ZqElem> {
        if v == 0 {
            return Ok(a.clone());
        }
        if a.prec <= v {
            return Err(Error::Precision(format!("dividing by p^{v} exhausts {} digits", a.prec)));
        }
        let pv = pk(self.p, v);
        if a.coeffs.iter().any(|c| c % pv != 0) {
            return domain("not divisible by the requested power of p");
        }
        Ok(ZqElem { p: self.p, coeffs: a.coeffs.iter().map(|c| c / pv).collect(), prec: a.prec - v })
    }

    fn sign_normalize(&self, v: ZqElem) -> ZqElem {
        let half = (self.p - 1) / 2;
        let lead = v.coeffs.iter().map(|c| c % self.p).find(|c| *c != 0);
        match lead {
            Some(c) if c > half => self.neg(&v),
            _ => v,
        }
    }
}

impl Ring for Zq {
    type Elem = ZqElem;

    fn zero(&self) -> ZqElem {
        ZqElem { p: self.p, coeffs: vec![0; self.degree() as usize], prec: self.k }
    }
    fn one(&self) -> ZqElem {
        self.from_i64(1)
    }
    fn from_i64(&self, n: i64) -> ZqElem {
        let mut c = vec![0; self.degree() as usize];
        c[0] = (n as i128).rem_euclid(self.modp(self.k) as i128) as u64;
        ZqElem { p: self.p, coeffs: c, prec: self.k }
    }
    fn add(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        let prec = a.prec.min(b.prec);
        let m = self.modp(prec) as u128;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| ((*x as u128 % m + *y as u128 % m) % m) as u64)
            .collect();
        ZqElem { p: self.p, coeffs, prec }
    }
    fn sub(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &ZqElem) -> ZqElem {
        let m = self.modp(a.prec);
        ZqElem { p: self.p, coeffs: a.coeffs.iter().map(|c| (m - c % m) % m).collect(), prec: a.prec }
    }
    fn mul(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        let prec = a.prec.min(b.prec);
        let m = self.modp(prec) as u128;
        let f = self.degree() as usize;
        let mut prod = vec![0u128; 2 * f - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + (*x as u128 % m) * (*y as u128 % m)) % m;
            }
        }
        for d in (f..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..f {
                let sub = c * (self.modulus[i] as u128 % m) % m;
                prod[d - f + i] = (prod[d - f + i] + m - sub) % m;
            }
        }
        ZqElem { p: self.p, coeffs: prod[..f].iter().map(|c| *c as u64).collect(), prec }
    }
    fn is_zero(&self, a: &ZqElem) -> bool {
        let m = self.modp(a.prec);
        a.coeffs.iter().all(|c| c % m == 0)
    }
    fn is_unit(&self, a: &ZqElem) -> bool {
        a.coeffs.iter().any(|c| c % self.p != 0)
    }
    fn inv(&self, a: &ZqElem) -> Result<ZqElem> {
        let r = self.residue_inverse(a)?;
        let mut v = ZqElem { p: self.p, coeffs: r.coeffs, prec: a.prec };
        let two = self.from_i64(2);
        for _ in 0..(a.prec.max(1).ilog2() + 2) {
            let av = self.mul(a, &v);
            v = self.mul(&v, &self.sub(&two, &av));
        }
        Ok(v)
    }
    fn div_exact(&self, a: &ZqElem, b: &ZqElem) -> Result<ZqElem> {
        let vb = self.valuation(b).ok_or_else(|| Error::Singular("division by zero".into()))?;
        let a1 = match self.valuation(a) {
            None => ZqElem { p: self.p, coeffs: vec![0; a.coeffs.len()], prec: a.prec.saturating_sub(vb).max(1) },
            Some(va) if va < vb => return domain("quotient is not integral"),
            Some(_) => self.shift_down(a, vb)?,
        };
        let b1 = self.shift_down(b, vb)?;
        Ok(self.mul(&a1, &self.inv(&b1)?))
    }
    fn valuation(&self, a: &ZqElem) -> Option<u32> {
        let m = self.modp(a.prec);
        a.coeffs
            .iter()
            .filter(|c| **c % m != 0)
            .map(|c| {
                let mut v = 0;
                let mut r = c % m;
                while r % self.p == 0 {
                    r /= self.p;
                    v += 1;
                }
                v
            })
            .min()
    }
    fn is_field(&self) -> bool {
        false
    }
    fn precision(&self) -> Option<u32> {
        Some(self.k)
    }
    fn equal(&self, a: &ZqElem, b: &ZqElem) -> bool {
        let prec = a.prec.min(b.prec);
        a.reduce_to(prec, self.p) == b.reduce_to(prec, self.p)
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Unramified { p: self.p, k: self.k, degree: self.degree(), modulus: self.modulus.clone() }
    }
    fn format(&self, a: &ZqElem) -> String {
        let m = self.modp(a.prec) as i128;
        let terms: Vec<String> = a
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| {
                let c = *c as i128;
                let c = if c > m / 2 { c - m } else { c };
                match i {
                    0 => c.to_string(),
                    1 => format!("{c}*x"),
                    _ => format!("{c}*x^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
    fn to_json(&self, a: &ZqElem) -> Value {
        json!(a.coeffs)
    }
    fn from_json(&self, v: &Value) -> Result<ZqElem> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("expected coefficient array".into()))?;
        let mut c = Vec::new();
        for x in arr {
            c.push(x.as_i64().ok_or_else(|| Error::Parse(format!("bad coefficient {x}")))? as i128);
        }
        if c.len() > self.degree() as usize {
            return Err(Error::Parse("too many coefficients".into()));
        }
        Ok(self.elem_from_coeffs(&c))
    }
}

impl SquareRing for Zq {
    fn is_square_unit(&self, a: &ZqElem) -> Result<bool> {
        if !self.is_unit(a) {
            return domain("not a unit");
        }
        let low = Zq::raw(self.p, 1, self.modulus.iter().map(|c| c % self.p).collect());
        let q = (self.p as u128).pow(self.degree());
        Ok(low.is_one(&low.pow(&self.residue(a), (q - 1) / 2)))
    }

    fn sqrt_unit(&self, a: &ZqElem) -> Result<ZqElem> {
        if !self.is_square_unit(a)? {
            return domain("not a square unit");
        }
        let low = Zq::raw(self.p, 1, self.modulus.iter().map(|c| c % self.p).collect());
        let target = self.residue(a);
        let q = self.residue_size();
        let root = (1..q)
            .map(|i| low.residue_element(i))
            .find(|x| low.equal(&low.mul(x, x), &target))
            .ok_or_else(|| Error::Domain("no residue square root".into()))?;
        let mut v = ZqElem { p: self.p, coeffs: root.coeffs, prec: a.prec };
        let two = self.from_i64(2);
        for _ in 0..(a.prec.max(1).ilog2() + 2) {
            let num = self.sub(&self.mul(&v, &v), a);
            let den = self.inv(&self.mul(&two, &v))?;
            v = self.sub(&v, &self.mul(&num, &den));
        }
        Ok(self.sign_normalize(v))
    }

    fn class_rep(&self, a: &ZqElem) -> Result<ZqElem> {
        Ok(if self.is_square_unit(a)? { self.one() } else { self.generator.clone() })
    }
}

impl LocalRing for Zq {
    fn prime(&self) -> u64 {
        self.p
    }
    fn prec(&self) -> u32 {
        self.k
    }
    fn residue_degree(&self) -> u32 {
        self.degree()
    }
    fn teichmuller_generator(&self) -> ZqElem {
        self.generator.clone()
    }
    fn residue_element(&self, index: u64) -> ZqElem {
        let mut c = vec![0; self.degree() as usize];
        let mut t = index;
        for slot in c.iter_mut() {
            *slot = t % self.p;
            t /= self.p;
        }
        ZqElem { p: self.p, coeffs: c, prec: self.k }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_extension_of_z5() {
        let r = Zq::unramified(5, 6, 2).unwrap();
        let z = r.teichmuller_generator();
        assert!(r.is_one(&r.pow(&z, 24)));
        assert!(!r.is_one(&r.pow(&z, 12)));
        assert!(!r.is_one(&r.pow(&z, 8)));
        // a primitive cube root of unity exists here
        let w = r.pow(&z, 8);
        let s = r.add(&r.add(&r.one(), &w), &r.mul(&w, &w));
        assert!(r.is_zero(&s));
    }

    #[test]
    fn inverse_and_sqrt() {
        let r = Zq::unramified(7, 5, 2).unwrap();
        let a = r.elem_from_coeffs(&[3, 5]);
        let ai = r.inv(&a).unwrap();
        assert!(r.is_one(&r.mul(&a, &ai)));
        let sq = r.mul(&a, &a);
        let s = r.sqrt_unit(&sq).unwrap();
        assert!(r.equal(&r.mul(&s, &s), &sq));
        // every element of Z_7 is a square in the quadratic extension
        assert!(r.is_square_unit(&r.from_i64(3)).unwrap());
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 - 1 = (x - 1)(x + 1) mod 5
        assert!(Zq::with_modulus(5, 3, vec![124, 0, 1]).is_err());
    }
}
