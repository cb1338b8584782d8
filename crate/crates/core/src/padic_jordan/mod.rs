//! Topological Jordan decomposition `g = g_s · g_u` of strongly compact
//! elements of `GL_n(𝒪)` and of twisted elements `gΘ`, by the limit
//! `g_s = lim g^{Q^m}` for a `p`-power `Q ≡ 1 mod N`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exact_scalars::LocalRing;
use crate::forms_matrices::j_matrix;
use crate::linalg::Matrix;

/// `g = g_s · g_u` with `g_s^N = 1` and `g_u` topologically unipotent.
#[derive(Clone, Debug)]
pub struct JordanPair<E> {
    pub g_s: Matrix<E>,
    pub g_u: Matrix<E>,
    /// Prime-to-`p` order of the reduction (of `ḡ_s`, or of `(gΘ)¯_s` when twisted).
    pub order: u128,
    /// The `p`-power exponent used.
    pub q: u128,
    pub iterations: usize,
    pub precision: u32,
    /// `g_s` carries the twist: the semisimple part is `g_s Θ`.
    pub twisted: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct JordanSummary {
    pub order: u128,
    pub q: u128,
    pub iterations: usize,
    pub precision: u32,
}

impl<E: Clone> JordanPair<E> {
    pub fn summary(&self) -> JordanSummary {
        JordanSummary { order: self.order, q: self.q, iterations: self.iterations, precision: self.precision }
    }
}

/// True when `a ≡ b mod p` entrywise.
pub fn congruent_mod_p<R: LocalRing>(r: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> bool {
    a.sub(r, b).entries().iter().all(|x| r.residue_is_zero(x))
}

fn is_identity_mod_p<R: LocalRing>(r: &R, a: &Matrix<R::Elem>) -> bool {
    congruent_mod_p(r, a, &Matrix::identity(r, a.rows()))
}

fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2;
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

/// `|GL_n(F_q)| = Π_{i<n} (q^n - q^i)`.
pub fn gl_order(q: u64, n: usize) -> Result<u128> {
    let q = q as u128;
    let qn = q.checked_pow(n as u32).ok_or_else(|| Error::Unsupported("group order overflows".into()))?;
    let mut acc: u128 = 1;
    for i in 0..n as u32 {
        acc = acc
            .checked_mul(qn - q.pow(i))
            .ok_or_else(|| Error::Unsupported("group order overflows".into()))?;
    }
    Ok(acc)
}

/// Order of `ḡ` in `GL_n(κ)`, by exponent-testing the divisors of the group order.
pub fn residual_order<R: LocalRing>(r: &R, g: &Matrix<R::Elem>) -> Result<u128> {
    if !r.is_unit(&g.det(r)) {
        return Err(Error::NotUnit("det g is not a unit".into()));
    }
    let mut e = gl_order(r.residue_size(), g.rows())?;
    for l in prime_factors(e) {
        while e % l == 0 && is_identity_mod_p(r, &g.pow(r, e / l)) {
            e /= l;
        }
    }
    Ok(e)
}

fn prime_to_p(mut n: u128, p: u128) -> u128 {
    while n % p == 0 {
        n /= p;
    }
    n
}

/// Smallest `Q = p^m`, `m ≥ 1`, with `Q ≡ 1 mod n`.
pub fn p_power_exponent(p: u64, n: u128) -> Result<u128> {
    let p = p as u128;
    let mut q = p;
    for _ in 0..64 {
        if q % n == 1 % n {
            return Ok(q);
        }
        q = q.checked_mul(p).ok_or_else(|| Error::Unsupported("Q overflows".into()))?;
    }
    Err(Error::Unsupported(format!("no small p-power ≡ 1 mod {n}")))
}

fn stabilize<R: LocalRing>(
    r: &R,
    start: &Matrix<R::Elem>,
    step: impl Fn(&Matrix<R::Elem>) -> Result<Matrix<R::Elem>>,
) -> Result<(Matrix<R::Elem>, usize)> {
    let bound = 4 * (r.prec() as usize) * start.rows().max(1) + 8;
    let mut x = start.clone();
    for it in 1..=bound {
        let next = step(&x)?;
        if next.equal(r, &x) {
            return Ok((x, it));
        }
        x = next;
    }
    Err(Error::Precision("power iteration did not stabilize; precision too low".into()))
}

/// Topological Jordan decomposition with an explicit `Q` (must be a
/// `p`-power `≡ 1 mod N`).
pub fn topological_jordan_with<R: LocalRing>(r: &R, g: &Matrix<R::Elem>, q: u128) -> Result<JordanPair<R::Elem>> {
    let order = prime_to_p(residual_order(r, g)?, r.prime() as u128);
    if q % order != 1 % order || prime_to_p(q, r.prime() as u128) != 1 {
        return domain(format!("Q = {q} is not a p-power ≡ 1 mod {order}"));
    }
    let (g_s, iterations) = stabilize(r, g, |x| Ok(x.pow(r, q)))?;
    let g_u = g.mul(r, &g_s.inverse(r)?);
    Ok(JordanPair { g_s, g_u, order, q, iterations, precision: r.prec(), twisted: false })
}

pub fn topological_jordan<R: LocalRing>(r: &R, g: &Matrix<R::Elem>) -> Result<JordanPair<R::Elem>> {
    if r.prec() < 2 {
        return domain("precision K ≥ 2 required");
    }
    let order = prime_to_p(residual_order(r, g)?, r.prime() as u128);
    topological_jordan_with(r, g, p_power_exponent(r.prime(), order)?)
}

/// `(u - 1)` nilpotent modulo `p`.
pub fn is_topologically_unipotent<R: LocalRing>(r: &R, u: &Matrix<R::Elem>) -> bool {
    let n = u.rows();
    let d = u.sub(r, &Matrix::identity(r, n));
    d.pow(r, n.max(1) as u128).entries().iter().all(|x| r.residue_is_zero(x))
}

fn inverse_mod(m: i128, modulus: i128) -> Option<i128> {
    let (mut a, mut b, mut x0, mut x1) = (m.rem_euclid(modulus), modulus, 1i128, 0i128);
    while b != 0 {
        let t = a / b;
        (a, b) = (b, a - t * b);
        (x0, x1) = (x1, x0 - t * x1);
    }
    (a == 1).then(|| x0.rem_euclid(modulus))
}

/// The unique topologically unipotent `u₁` with `u₁^m = u`, as `u^e` with
/// `e·m ≡ 1 mod p^{K+a}`, where `ū^{p^a} = 1`.
pub fn unipotent_root<R: LocalRing>(r: &R, u: &Matrix<R::Elem>, m: u64) -> Result<Matrix<R::Elem>> {
    let p = r.prime();
    if m == 0 || m % p == 0 {
        return domain(format!("m = {m} is not prime to p = {p}"));
    }
    if !is_topologically_unipotent(r, u) {
        return domain("u is not topologically unipotent");
    }
    let mut a = 0u32;
    let mut x = u.clone();
    while !is_identity_mod_p(r, &x) {
        x = x.pow(r, p as u128);
        a += 1;
    }
    let modulus = (p as i128)
        .checked_pow(r.prec() + a)
        .ok_or_else(|| Error::Unsupported("p^(K+a) overflows".into()))?;
    let e = inverse_mod(m as i128, modulus).expect("m prime to p");
    let root = u.pow(r, e as u128);
    if !root.pow(r, m as u128).equal(r, u) {
        return Err(Error::Precision("u₁^m ≠ u at working precision".into()));
    }
    Ok(root)
}

/// The involution `Θ(g) = J ᵗg⁻¹ J⁻¹` with `J = J_n`.
pub fn theta<R: LocalRing>(r: &R, g: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    let j = j_matrix(r, g.rows());
    Ok(j.mul(r, &g.transpose().inverse(r)?).mul(r, &j.inverse(r)?))
}

/// Jordan decomposition of `gΘ` in `GL_n ⋊ ⟨Θ⟩`: `g = u·s` with `sΘ` of
/// finite order prime to `p` and `u = g s⁻¹` topologically unipotent and
/// commuting with `sΘ`.
pub fn twisted_jordan<R: LocalRing>(r: &R, g: &Matrix<R::Elem>) -> Result<JordanPair<R::Elem>> {
    // (gΘ)² = g Θ(g); the twisted element has order 2·ord((gΘ)²)
    let y = g.mul(r, &theta(r, g)?);
    let order = 2 * prime_to_p(residual_order(r, &y)?, r.prime() as u128);
    let q = p_power_exponent(r.prime(), order)?;
    let half = (q - 1) / 2;
    // (xΘ)^Q = ((xΘ)²)^{(Q-1)/2} · x, twisted
    let (s, iterations) = stabilize(r, g, |x| Ok(x.mul(r, &theta(r, x)?).pow(r, half).mul(r, x)))?;
    let u = g.mul(r, &s.inverse(r)?);
    Ok(JordanPair { g_s: s, g_u: u, order, q, iterations, precision: r.prec(), twisted: true })
}

/// Residual check: `ḡ = ḡ_s ḡ_u` with commuting factors, `ḡ_s` of order
/// prime to `p` and `ḡ_u` unipotent. For twisted pairs the factors are
/// `g_sΘ` and `g_u`.
pub fn reduction_check<R: LocalRing>(r: &R, g: &Matrix<R::Elem>, pair: &JordanPair<R::Elem>) -> bool {
    let (s, u) = (&pair.g_s, &pair.g_u);
    if !congruent_mod_p(r, &u.mul(r, s), g) {
        return false;
    }
    let commute = if pair.twisted {
        match theta(r, u) {
            Ok(tu) => congruent_mod_p(r, &s.mul(r, &tu), &u.mul(r, s)),
            Err(_) => false,
        }
    } else {
        congruent_mod_p(r, &s.mul(r, u), &u.mul(r, s))
    };
    if !commute || !is_topologically_unipotent(r, u) {
        return false;
    }
    let s_untwisted = if pair.twisted {
        match theta(r, s) {
            Ok(ts) => s.mul(r, &ts),
            Err(_) => return false,
        }
    } else {
        s.clone()
    };
    match residual_order(r, &s_untwisted) {
        Ok(o) => o % r.prime() as u128 != 0,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalars::Zp;

    #[test]
    fn minus_four_in_z3() {
        let r = Zp::new(3, 8).unwrap();
        let g = Matrix::from_i64(&r, &[vec![-4]]);
        let j = topological_jordan(&r, &g).unwrap();
        assert_eq!(j.g_s.get(0, 0).centered(), -1);
        assert_eq!(j.g_u.get(0, 0).centered(), 4);
        assert!(reduction_check(&r, &g, &j));
    }

    #[test]
    fn square_root_of_one_plus_p() {
        let r = Zp::new(5, 8).unwrap();
        let u = Matrix::from_i64(&r, &[vec![6]]);
        let v = unipotent_root(&r, &u, 2).unwrap();
        assert!(v.mul(&r, &v).equal(&r, &u));
        assert!(is_topologically_unipotent(&r, &v));
        assert!(unipotent_root(&r, &u, 5).is_err());
        let id = Matrix::identity(&r, 3);
        assert!(unipotent_root(&r, &id, 7).unwrap().equal(&r, &id));
    }

    #[test]
    fn swapped_noncommuting_factors_fail() {
        let r = Zp::new(5, 8).unwrap();
        let s = Matrix::from_i64(&r, &[vec![2, 0], vec![0, 3]]);
        let u = Matrix::from_i64(&r, &[vec![1, 1], vec![0, 1]]);
        let g = u.mul(&r, &s);
        let wrong = JordanPair { g_s: s, g_u: u, order: 4, q: 5, iterations: 0, precision: 8, twisted: false };
        assert!(!reduction_check(&r, &g, &wrong));
    }
}
