//! Random integral matrices and `R`-semisimple samples over `Z_p`, built
//! from torus elements with root-of-unity entries.

use rand::Rng;

use super::decomposition::teichmuller_roots;
use super::forms::{j_matrix, pair};
use super::spinor::reflection;
use crate::error::Result;
use crate::exact_scalars::{PadicInt, Ring, Zp, Zq};
use crate::linalg::Matrix;

type Mat = Matrix<PadicInt>;

pub fn random_elem(r: &Zp, rng: &mut impl Rng) -> PadicInt {
    let m = PadicInt::new(r.p, r.k, 0).modulus();
    r.elem(rng.gen_range(0..m) as i128)
}

pub fn random_unit(r: &Zp, rng: &mut impl Rng) -> PadicInt {
    loop {
        let x = random_elem(r, rng);
        if r.is_unit(&x) {
            return x;
        }
    }
}

pub fn random_matrix(r: &Zp, n: usize, rng: &mut impl Rng) -> Mat {
    Matrix::from_fn(n, n, |_, _| random_elem(r, rng))
}

/// A random element of `GL_n(Z_p)`.
pub fn random_unimodular(r: &Zp, n: usize, rng: &mut impl Rng) -> Mat {
    loop {
        let m = random_matrix(r, n, rng);
        if r.is_unit(&m.det(r)) {
            return m;
        }
    }
}

/// A random element of `SL_n(Z_p)`.
pub fn random_special(r: &Zp, n: usize, rng: &mut impl Rng) -> Mat {
    let mut m = random_unimodular(r, n, rng);
    let d = r.inv(&m.det(r)).expect("unit");
    for i in 0..n {
        let x = r.mul(m.get(i, 0), &d);
        m.set(i, 0, x);
    }
    m
}

/// Product of random transvections `x ↦ x + c·p(v, x)·v`, an element of
/// `Sp(p)(Z_p)`.
pub fn random_symplectic(r: &Zp, p: &Mat, rng: &mut impl Rng) -> Mat {
    let n = p.rows();
    let mut g = Matrix::identity(r, n);
    for _ in 0..3 * n {
        let v = Matrix::from_fn(n, 1, |_, _| random_elem(r, rng));
        let c = random_elem(r, rng);
        let t = Matrix::identity(r, n).add(r, &v.mul(r, &v.transpose()).mul(r, p).scale(r, &c));
        g = g.mul(r, &t);
    }
    g
}

/// Product of `count` random reflections in vectors of unit length.
pub fn random_orthogonal(r: &Zp, q: &Mat, count: usize, rng: &mut impl Rng) -> Result<Mat> {
    let n = q.rows();
    let mut g = Matrix::identity(r, n);
    let mut k = 0;
    while k < count {
        let v: Vec<PadicInt> = (0..n).map(|_| random_elem(r, rng)).collect();
        if !r.is_unit(&pair(r, q, &v, &v)) {
            continue;
        }
        g = g.mul(r, &reflection(r, q, &v)?);
        k += 1;
    }
    Ok(g)
}

/// Random Teichmüller roots of unity in `Z_p`.
pub fn random_roots(r: &Zp, count: usize, rng: &mut impl Rng) -> Vec<PadicInt> {
    let roots = teichmuller_roots(r);
    (0..count).map(|_| roots[rng.gen_range(0..roots.len())]).collect()
}

/// `λ + λ⁻¹` for a random `λ ∈ μ_{p+1} \ {±1}` of the quadratic unramified
/// extension.
pub fn random_elliptic_trace(r: &Zp, rng: &mut impl Rng) -> Result<PadicInt> {
    let zq = Zq::unramified(r.p, r.k, 2)?;
    let cands: Vec<_> = teichmuller_roots(&zq)
        .into_iter()
        .filter(|l| zq.is_one(&zq.pow(l, (r.p + 1) as u128)) && !zq.is_one(&zq.mul(l, l)))
        .collect();
    let l = &cands[rng.gen_range(0..cands.len())];
    let t = zq.add(l, &zq.inv(l)?);
    Ok(zq.as_base(&t).expect("trace lies in Z_p"))
}

/// `h = ᵗk (s J_n) k` for a random root-of-unity torus element `s` and
/// random `k ∈ GL_n(Z_p)`. Returns `(h, s-entries, k)`.
pub fn theta_semisimple(r: &Zp, n: usize, rng: &mut impl Rng) -> (Mat, Vec<PadicInt>, Mat) {
    let t = random_roots(r, n, rng);
    let h0 = Matrix::diagonal(r, &t).mul(r, &j_matrix(r, n));
    let k = random_unimodular(r, n, rng);
    (k.transpose().mul(r, &h0).mul(r, &k), t, k)
}

/// A semisimple element of `Sp(J_2n)(Z_p)`: on each coordinate pair
/// `(e_i, e_{2n-1-i})` either `diag(t, t⁻¹)` or an elliptic block with
/// characteristic polynomial `x² - τx + 1`, conjugated by a random
/// symplectic matrix.
pub fn semisimple_symplectic(r: &Zp, n: usize, elliptic: bool, rng: &mut impl Rng) -> Result<Mat> {
    let m = 2 * n;
    let mut x = Matrix::identity(r, m);
    for i in 0..n {
        let j = m - 1 - i;
        if elliptic && rng.gen_bool(0.5) {
            let tau = random_elliptic_trace(r, rng)?;
            x.set(i, i, r.zero());
            x.set(i, j, r.from_i64(-1));
            x.set(j, i, r.one());
            x.set(j, j, tau);
        } else {
            let t = random_roots(r, 1, rng)[0];
            x.set(i, i, t);
            x.set(j, j, r.inv(&t)?);
        }
    }
    let k = random_symplectic(r, &j_matrix(r, m), rng);
    Ok(k.inverse(r)?.mul(r, &x).mul(r, &k))
}

/// As [`theta_semisimple`] with `det h = 1` and `k ∈ SL_n(Z_p)`.
pub fn theta_semisimple_special(r: &Zp, n: usize, rng: &mut impl Rng) -> Result<(Mat, Vec<PadicInt>, Mat)> {
    let j = j_matrix(r, n);
    let mut t = random_roots(r, n, rng);
    let prod = t[..n - 1].iter().fold(j.det(r), |a, x| r.mul(&a, x));
    t[n - 1] = r.inv(&prod)?;
    let h0 = Matrix::diagonal(r, &t).mul(r, &j);
    let k = random_special(r, n, rng);
    Ok((k.transpose().mul(r, &h0).mul(r, &k), t, k))
}

/// `b = γ s ∈ O(J'_{2n+2})` of determinant `-1`, with
/// `γ = diag(t_1, …, t_{n+1}, t_{n+1}⁻¹, …, t_1⁻¹)` and `s` swapping the two
/// middle coordinates. Returns `(b, t)`.
pub fn o_minus_torus(r: &Zp, n: usize, rng: &mut impl Rng) -> Result<(Mat, Vec<PadicInt>)> {
    let m = 2 * n + 2;
    let t = random_roots(r, n + 1, rng);
    let mut d = t.clone();
    for x in t.iter().rev() {
        d.push(r.inv(x)?);
    }
    let mut s = Matrix::identity(r, m);
    s.set(n, n, r.zero());
    s.set(n + 1, n + 1, r.zero());
    s.set(n, n + 1, r.one());
    s.set(n + 1, n, r.one());
    Ok((Matrix::diagonal(r, &d).mul(r, &s), t))
}
