//! Preimages under `N: O^-_2n+2 → Sp_2n` over `Z_p`, and the image test
//! over `Q_p`, where the map is no longer surjective.

use serde::Serialize;

use super::norms::{norm_d, NormResult};
use crate::error::{precondition, Result};
use crate::exact_scalars::square::hilbert_symbol_rational;
use crate::exact_scalars::{LocalRing, QpNumber, Rational, RationalField, Ring};
use crate::forms_matrices::{
    j_matrix, j_prime, orthogonal_diagonalize, orthogonal_isometry, sp_so_shift, split_fixed_space, SplitMode,
};
use crate::linalg::Matrix;

/// One preimage `b ∈ O(J'_2n+2)`, `det b = -1`, per choice of `(ε+, ε-)`.
#[derive(Clone, Debug)]
pub struct Preimage<E> {
    pub b: Matrix<E>,
    pub eps_plus: E,
    pub eps_minus: E,
}

/// Both preimage classes of a semisimple `β ∈ Sp(J_2n)(R)`, `R = Z_p` or
/// an unramified extension: `q± = ε± J_{1+2r±}` with
/// `Δ(q+)Δ(q-)Δ(q*) ≡ det J'_2n+2`.
pub fn norm_d_preimages<R: LocalRing>(r: &R, beta: &Matrix<R::Elem>) -> Result<Vec<Preimage<R::Elem>>> {
    let m = beta.rows();
    if !beta.is_square() || m % 2 != 0 || m == 0 {
        return precondition("preimages need an element of Sp_2n");
    }
    let s = split_fixed_space(r, beta, &j_matrix(r, m), SplitMode::PlusMinus)?;
    let q_star = sp_so_shift(r, &s.b_star, &s.gram_star)?;
    let (rp2, rm2) = (s.plus.cols(), s.minus.cols());
    let jp = j_prime(r, m + 2)?;
    let target = r.mul(&jp.det(r), &r.inv(&q_star.det(r))?);
    let model = Matrix::block_diag(
        r,
        &[&Matrix::identity(r, rp2 + 1), &Matrix::identity(r, rm2 + 1).neg(r), &s.b_star],
    );
    let mut out = Vec::with_capacity(2);
    for eps_plus in [r.one(), r.teichmuller_generator()] {
        let eps_minus = r.class_rep(&r.div(&target, &eps_plus)?)?;
        // Δ(ε J_odd) = ε since det J_odd = 1
        let q = Matrix::block_diag(
            r,
            &[&j_matrix(r, rp2 + 1).scale(r, &eps_plus), &j_matrix(r, rm2 + 1).scale(r, &eps_minus), &q_star],
        );
        let t = orthogonal_isometry(r, &jp, &q)?;
        let b = t.mul(r, &model).mul(r, &t.inverse(r)?);
        out.push(Preimage { b, eps_plus: r.class_rep(&eps_plus)?, eps_minus });
    }
    Ok(out)
}

/// Invariants of `q* = diag(a_i)` certifying anisotropy over `Q_p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnisotropyCertificate {
    pub prime: u64,
    pub diagonal: Vec<String>,
    pub discriminant_is_square: bool,
    /// `Π_{i<j} (a_i, a_j)_p`.
    pub hasse: i32,
    /// `(-1, -1)_p`.
    pub minus_one_symbol: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ImageVerdict {
    InImage { reason: String },
    NotInImage { certificate: AnisotropyCertificate },
    Undecided { reason: String },
}

impl ImageVerdict {
    pub fn in_image(&self) -> Option<bool> {
        match self {
            ImageVerdict::InImage { .. } => Some(true),
            ImageVerdict::NotInImage { .. } => Some(false),
            ImageVerdict::Undecided { .. } => None,
        }
    }
}

/// Quaternary anisotropy over `Q_p`: square discriminant and Hasse
/// invariant `-(-1,-1)_p`.
pub fn quaternary_certificate(diag: &[Rational], p: u64) -> Result<AnisotropyCertificate> {
    let d = diag.iter().fold(Rational::from_integer(1.into()), |a, x| a * x);
    let disc_sq = QpNumber::from_rational(&d, p, 4)?.is_square();
    let mut hasse = 1;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            hasse *= hilbert_symbol_rational(&diag[i], &diag[j], p)?;
        }
    }
    let m1 = Rational::from_integer((-1).into());
    Ok(AnisotropyCertificate {
        prime: p,
        diagonal: diag.iter().map(|x| x.to_string()).collect(),
        discriminant_is_square: disc_sq,
        hasse,
        minus_one_symbol: hilbert_symbol_rational(&m1, &m1, p)?,
    })
}

impl AnisotropyCertificate {
    pub fn anisotropic(&self) -> bool {
        self.discriminant_is_square && self.hasse == -self.minus_one_symbol
    }
}

/// Decides whether a semisimple `β ∈ Sp_2n(Q)` is a norm over `Q_p`.
/// `q*` must fit, up to a hyperbolic part, into the complement of
/// `N+ ⊕ N-` of rank `2 + 2r+ + 2r-`; anisotropic parts have rank at most 4.
pub fn norm_d_image_test_rational(beta: &Matrix<Rational>, p: u64) -> Result<ImageVerdict> {
    let r = RationalField;
    let m = beta.rows();
    if !beta.is_square() || m % 2 != 0 || m == 0 {
        return precondition("image test needs an element of Sp_2n");
    }
    let s = split_fixed_space(&r, beta, &j_matrix(&r, m), SplitMode::PlusMinus)?;
    let (rp, rm, k) = (s.plus.cols() / 2, s.minus.cols() / 2, s.star.cols());
    if rp + rm >= 1 {
        return Ok(ImageVerdict::InImage { reason: format!("N+ and N- have ranks {} and {}", 2 * rp, 2 * rm) });
    }
    if k <= 2 {
        return Ok(ImageVerdict::InImage { reason: format!("N* has rank {k}") });
    }
    if k > 4 {
        return Ok(ImageVerdict::Undecided { reason: format!("N* has rank {k} > 4") });
    }
    let q_star = sp_so_shift(&r, &s.b_star, &s.gram_star)?;
    let (_, diag) = orthogonal_diagonalize(&r, &q_star)?;
    let cert = quaternary_certificate(&diag, p)?;
    if cert.anisotropic() {
        Ok(ImageVerdict::NotInImage { certificate: cert })
    } else {
        Ok(ImageVerdict::InImage { reason: "q* is isotropic over Q_p".into() })
    }
}

/// Over `Z_p` every semisimple `β` is a norm; the verdict carries both
/// preimages, each checked to map back to `β` up to the ranks.
pub fn norm_d_image_test_integral<R: LocalRing>(
    r: &R,
    beta: &Matrix<R::Elem>,
) -> Result<(ImageVerdict, Vec<Preimage<R::Elem>>, Vec<NormResult<R::Elem>>)> {
    let pre = norm_d_preimages(r, beta)?;
    let images = pre.iter().map(|x| norm_d(r, &x.b)).collect::<Result<Vec<_>>>()?;
    let same_poly = images.iter().all(|im| im.target.char_poly(r) == beta.char_poly(r));
    let verdict = if same_poly {
        ImageVerdict::InImage { reason: format!("{} preimages constructed", pre.len()) }
    } else {
        ImageVerdict::Undecided { reason: "constructed preimages do not map back".into() }
    };
    Ok((verdict, pre, images))
}

/// The 4×4 element `β` with `a_i = (λ_i²+Δ)/(λ_i²-Δ)`, `b_i = 2λ_i/(λ_i²-Δ)`
/// in the coordinates `e1, e2, e3, e4`.
pub fn obstructed_beta<R: Ring>(r: &R, delta: &R::Elem, l1: &R::Elem, l2: &R::Elem) -> Result<Matrix<R::Elem>> {
    let ab = |l: &R::Elem| -> Result<(R::Elem, R::Elem)> {
        let l2 = r.mul(l, l);
        let den = r.inv(&r.sub(&l2, delta))?;
        Ok((r.mul(&r.add(&l2, delta), &den), r.mul(&r.mul(&r.from_i64(2), l), &den)))
    };
    let (a1, b1) = ab(l1)?;
    let (a2, b2) = ab(l2)?;
    let z = r.zero();
    Ok(Matrix::from_rows(vec![
        vec![a1.clone(), z.clone(), z.clone(), b1.clone()],
        vec![z.clone(), a2.clone(), b2.clone(), z.clone()],
        vec![z.clone(), r.mul(&b2, delta), a2, z.clone()],
        vec![r.mul(&b1, delta), z.clone(), z, a1],
    ]))
}
