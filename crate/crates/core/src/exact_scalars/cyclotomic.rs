use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::rational::{parse_rational, Rational, RationalField};
use super::ring::{Ring, RingDescriptor};
use crate::error::{domain, Error, Result};

/// Integer coefficients (low to high) of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m >= 1);
    // x^m - 1 divided by Φ_d for every proper divisor d of m.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        quot[i] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()));
    quot
}

/// Euler's totient.
pub fn totient(m: u32) -> u32 {
    (1..=m).filter(|k| num_integer::gcd(*k, m) == 1).count() as u32
}

/// An element of `Q(ζ_m)` in the power basis `1, ζ, …, ζ^{φ(m)-1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    pub conductor: u32,
    pub coeffs: Vec<Rational>,
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// The cyclotomic field `Q(ζ_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    pub conductor: u32,
    phi: Vec<BigInt>,
}

impl CyclotomicField {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return domain("conductor must be positive");
        }
        Ok(CyclotomicField { conductor: m, phi: cyclotomic_polynomial(m) })
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn minimal_polynomial(&self) -> &[BigInt] {
        &self.phi
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn zeta(&self, k: i64) -> Cyclotomic {
        let m = self.conductor as i64;
        let e = k.rem_euclid(m) as usize;
        let mut c = vec![Rational::zero(); e + 1];
        c[e] = Rational::one();
        self.reduce(c)
    }

    pub fn from_rational(&self, r: Rational) -> Cyclotomic {
        let mut c = vec![Rational::zero(); self.degree()];
        c[0] = r;
        Cyclotomic { conductor: self.conductor, coeffs: c }
    }

    /// The element as a rational number if it lies in `Q`.
    pub fn as_rational(&self, a: &Cyclotomic) -> Option<Rational> {
        if a.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(a.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Reduce an arbitrary polynomial in `ζ` modulo `Φ_m`.
    pub fn reduce(&self, mut c: Vec<Rational>) -> Cyclotomic {
        let d = self.degree();
        for i in (d..c.len()).rev() {
            let lead = std::mem::take(&mut c[i]);
            if lead.is_zero() {
                continue;
            }
            for j in 0..d {
                c[i - d + j] -= &lead * Rational::from_integer(self.phi[j].clone());
            }
        }
        c.resize(d, Rational::zero());
        Cyclotomic { conductor: self.conductor, coeffs: c }
    }

    fn check(&self, a: &Cyclotomic) {
        debug_assert_eq!(a.conductor, self.conductor, "mixed conductors");
    }
}

fn solve_rational(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|r| !a[*r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

impl Ring for CyclotomicField {
    type Elem = Cyclotomic;

    fn zero(&self) -> Cyclotomic {
        self.from_rational(Rational::zero())
    }
    fn one(&self) -> Cyclotomic {
        self.from_rational(Rational::one())
    }
    fn from_i64(&self, n: i64) -> Cyclotomic {
        self.from_rational(Rational::from_integer(BigInt::from(n)))
    }
    fn add(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        self.check(a);
        self.check(b);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Cyclotomic { conductor: self.conductor, coeffs }
    }
    fn sub(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        Cyclotomic { conductor: self.conductor, coeffs }
    }
    fn neg(&self, a: &Cyclotomic) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: a.coeffs.iter().map(|x| -x).collect() }
    }
    fn mul(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        let d = self.degree();
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        self.reduce(prod)
    }
    fn is_zero(&self, a: &Cyclotomic) -> bool {
        a.coeffs.iter().all(|c| c.is_zero())
    }
    fn is_unit(&self, a: &Cyclotomic) -> bool {
        !self.is_zero(a)
    }
    fn inv(&self, a: &Cyclotomic) -> Result<Cyclotomic> {
        if self.is_zero(a) {
            return Err(Error::NotUnit("0".into()));
        }
        let d = self.degree();
        // Column j of the multiplication matrix is a·ζ^j.
        let cols: Vec<Cyclotomic> = (0..d).map(|j| self.mul(a, &self.zeta(j as i64))).collect();
        let mat: Vec<Vec<Rational>> =
            (0..d).map(|i| (0..d).map(|j| cols[j].coeffs[i].clone()).collect()).collect();
        let mut rhs = vec![Rational::zero(); d];
        rhs[0] = Rational::one();
        let sol = solve_rational(mat, rhs).ok_or_else(|| Error::Singular("cyclotomic inverse".into()))?;
        Ok(Cyclotomic { conductor: self.conductor, coeffs: sol })
    }
    fn div_exact(&self, a: &Cyclotomic, b: &Cyclotomic) -> Result<Cyclotomic> {
        self.div(a, b)
    }
    fn valuation(&self, a: &Cyclotomic) -> Option<u32> {
        if self.is_zero(a) {
            None
        } else {
            Some(0)
        }
    }
    fn is_field(&self) -> bool {
        true
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Cyclotomic { conductor: self.conductor }
    }
    fn format(&self, a: &Cyclotomic) -> String {
        format!("{a:?}")
    }
    fn to_json(&self, a: &Cyclotomic) -> Value {
        let q = RationalField;
        json!(a.coeffs.iter().map(|c| q.format(c)).collect::<Vec<_>>())
    }
    fn from_json(&self, v: &Value) -> Result<Cyclotomic> {
        let arr = match v {
            Value::Array(a) => a.clone(),
            Value::Object(o) => {
                if let Some(m) = o.get("conductor").and_then(Value::as_u64) {
                    if m as u32 != self.conductor {
                        return Err(Error::Parse(format!("conductor {m} in a Q(zeta_{}) context", self.conductor)));
                    }
                }
                o.get("coeffs")
                    .and_then(Value::as_array)
                    .cloned()
                    .ok_or_else(|| Error::Parse("missing coeffs".into()))?
            }
            other => return Ok(self.from_rational(RationalField.from_json(other)?)),
        };
        let mut c = Vec::with_capacity(arr.len());
        for x in &arr {
            c.push(match x {
                Value::String(s) => parse_rational(s)?,
                other => RationalField.from_json(other)?,
            });
        }
        Ok(self.reduce(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_small() {
        let as_i: Vec<i64> = cyclotomic_polynomial(12).iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(as_i, vec![1, 0, -1, 0, 1]);
        let as_i: Vec<i64> = cyclotomic_polynomial(3).iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(as_i, vec![1, 1, 1]);
        assert_eq!(totient(24), 8);
    }

    #[test]
    fn zeta_has_order_m() {
        for m in [1u32, 3, 4, 8, 12, 24] {
            let k = CyclotomicField::new(m).unwrap();
            let z = k.zeta(1);
            assert!(k.is_one(&k.pow(&z, m as u128)));
            if m > 1 {
                assert!(!k.is_one(&k.pow(&z, (m / 2).max(1) as u128)) || m == 2);
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let k = CyclotomicField::new(24).unwrap();
        let a = k.add(&k.zeta(1), &k.from_i64(3));
        let ai = k.inv(&a).unwrap();
        assert!(k.is_one(&k.mul(&a, &ai)));
    }

    #[test]
    fn reduction_is_idempotent() {
        let k = CyclotomicField::new(12).unwrap();
        let a = k.add(&k.zeta(7), &k.zeta(5));
        assert_eq!(k.reduce(a.coeffs.clone()), a);
    }
}
