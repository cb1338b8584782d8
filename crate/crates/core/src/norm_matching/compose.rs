//! Matched pairs with topologically unipotent parts: a twisted element
//! `s·u` built on the diagonal torus and `η = N(s)·v^e`, where `v` acts on
//! the eigenlattices of `N(s)` through the same diagonal data.

use serde::Serialize;

use super::bc::{signed_permutation_match, MatchReport};
use super::norms::{norm_a2n, norm_b, norm_d, Kind};
use super::torus::{formula_a2n, formula_d, formula_ratio_padic, odd_orthogonal_coordinates, symplectic_coordinates};
use crate::error::{precondition, Error, Result};
use crate::exact_scalars::{LocalRing, PadicInt, Ring, Zp};
use crate::forms_matrices::{
    eigenlattice_split, j_matrix, j_prime, orthogonal_isometry, preserves, symplectic_normal_form, teichmuller_roots,
};
use crate::linalg::Matrix;
use crate::padic_jordan::{topological_jordan, twisted_jordan};
use crate::root_datum::TorusPoint;

type Mat = Matrix<PadicInt>;

#[derive(Clone, Debug)]
pub struct ComposedPair {
    pub kind: Kind,
    /// `γ = s·u ∈ GL` for `A2n` and `B`, `g = b·u ∈ O(J')` for `D`.
    pub twisted: Mat,
    pub twisted_semisimple: Mat,
    /// `η = b·v^e` with `b = N(s)`.
    pub eta: Mat,
    pub eta_semisimple: Mat,
    pub checks: ComposeChecks,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComposeChecks {
    /// Both Jordan decompositions recover the assembled factors.
    pub jordan_consistent: bool,
    /// `v` commutes with `b` and preserves the form.
    pub centralizer_consistent: bool,
    /// The characteristic polynomial of `η` is that of the formula image.
    pub spectrum_consistent: bool,
    /// `b = N(s)` against the formula applied to `s`.
    pub residual: MatchReport,
    /// `η` against the formula applied to the twisted element.
    pub report: MatchReport,
}

impl ComposeChecks {
    pub fn all_pass(&self) -> bool {
        self.jordan_consistent
            && self.centralizer_consistent
            && self.spectrum_consistent
            && self.residual.verdict
            && self.report.verdict
    }
}

/// A basis of a self-dual lattice in which the form is antidiagonal:
/// `J_k` for alternating forms, `c·J_k` (odd `k`) or `J'_k` (even `k`) for
/// symmetric ones.
fn antidiagonal_basis<R: LocalRing>(r: &R, gram: &Matrix<R::Elem>, symmetric: bool) -> Result<Matrix<R::Elem>> {
    let k = gram.rows();
    if k == 0 {
        return Ok(Matrix::zeros(r, 0, 0));
    }
    if !symmetric {
        return symplectic_normal_form(r, gram);
    }
    let target = if k % 2 == 1 {
        let jk = j_matrix(r, k);
        let c = r.class_rep(&r.mul(&gram.det(r), &jk.det(r)))?;
        jk.scale(r, &c)
    } else {
        j_prime(r, k)?
    };
    orthogonal_isometry(r, gram, &target).map_err(|e| match e {
        Error::Obstruction(m) => Error::Unsupported(format!("factor has no split diagonal torus: {m}")),
        other => other,
    })
}

/// An element of `Cent(b)` preserving `form` that acts on the eigenlattice
/// of `ζ^λ_i` by `w_i` (and by `w_i⁻¹` on that of `ζ^-λ_i`). On self-dual
/// eigenlattices it is `diag(w…, [1], …w⁻¹)` in an antidiagonal basis.
pub fn centralizer_torus_element(r: &Zp, b: &Mat, form: &Mat, lambdas: &[i64], ws: &[PadicInt]) -> Result<Mat> {
    let order = (r.p - 1) as i64;
    let roots = teichmuller_roots(r);
    let split = eigenlattice_split(r, b, &roots)?;
    let exps: Vec<i64> =
        split.eigenvalues.iter().map(|x| roots.iter().position(|y| r.equal(x, y)).expect("candidate") as i64).collect();
    let symmetric = form.is_symmetric(r);
    let at = |e: i64| -> Vec<usize> { (0..lambdas.len()).filter(|&i| lambdas[i].rem_euclid(order) == e).collect() };
    let mut cols: Vec<Mat> = Vec::new();
    let mut vals: Vec<PadicInt> = Vec::new();
    let mismatch = |e: i64| Error::Precondition(format!("unipotent data does not fit the eigenlattice of z^{e}"));
    for (k, &e) in exps.iter().enumerate() {
        let neg = (-e).rem_euclid(order);
        let lat = &split.lattices[k];
        if e == neg {
            let pos = at(e);
            let basis = lat.mul(r, &antidiagonal_basis(r, &form.gram_on(r, lat), symmetric)?);
            let mid = basis.cols().checked_sub(2 * pos.len()).ok_or_else(|| mismatch(e))?;
            if mid > 1 || (mid == 1 && !symmetric) {
                return Err(mismatch(e));
            }
            vals.extend(pos.iter().map(|&i| ws[i]));
            if mid == 1 {
                vals.push(r.one());
            }
            for &i in pos.iter().rev() {
                vals.push(ws[i].inv()?);
            }
            cols.push(basis);
        } else if e < neg {
            let kn = exps.iter().position(|&x| x == neg).ok_or_else(|| mismatch(e))?;
            let mut v: Vec<PadicInt> = at(e).iter().map(|&i| ws[i]).collect();
            for i in at(neg) {
                v.push(ws[i].inv()?);
            }
            if v.len() != lat.cols() {
                return Err(mismatch(e));
            }
            let other = &split.lattices[kn];
            let dual = other.mul(r, &lat.transpose().mul(r, form).mul(r, other).inverse(r)?);
            cols.push(lat.clone());
            cols.push(dual);
            let inv = v.iter().map(|x| x.inv()).collect::<Result<Vec<_>>>()?;
            vals.extend(v);
            vals.extend(inv);
        }
    }
    if vals.len() != b.rows() {
        return precondition("unipotent data does not cover the module");
    }
    let c = Matrix::hstack(&cols.iter().collect::<Vec<_>>())?;
    Ok(c.mul(r, &Matrix::diagonal(r, &vals)).mul(r, &c.inverse(r)?))
}

fn is_top_unipotent_scalar(r: &Zp, w: &PadicInt) -> bool {
    r.residue_is_zero(&r.sub(w, &r.one()))
}

/// Assembles a matched pair from the torus exponents `t` of the
/// residually semisimple part (`ζ^t`, `ζ` the Teichmüller generator) and
/// topologically unipotent diagonal data: `w_twisted` on the twisted side,
/// `w_eta` on the endoscopic side (normally equal; any Weyl-conjugate
/// choice inside the centralizer factors must match as well).
///
/// Lengths of `t`: `2n+1` for `A2n`, `2n` for `B`, `n+1` for `D`.
pub fn compose_matched_pair(
    r: &Zp,
    kind: Kind,
    t: &[i64],
    w_twisted: &[PadicInt],
    w_eta: &[PadicInt],
) -> Result<ComposedPair> {
    let n = w_twisted.len();
    if w_eta.len() != n || n == 0 {
        return Err(Error::Dimension("unipotent data of different lengths".into()));
    }
    if !w_twisted.iter().chain(w_eta).all(|w| is_top_unipotent_scalar(r, w)) {
        return precondition("unipotent parts must be congruent to 1 mod p");
    }
    let want = match kind {
        Kind::A2n => 2 * n + 1,
        Kind::B => 2 * n,
        Kind::D => n + 1,
    };
    if t.len() != want {
        return Err(Error::Dimension(format!("expected {want} torus exponents, got {}", t.len())));
    }
    let order = (r.p - 1) as i64;
    let z = r.teichmuller_generator();
    let zeta = |e: i64| r.pow(&z, e.rem_euclid(order) as u128);
    let mirror = |w: &[PadicInt], mid: usize| -> Result<Vec<PadicInt>> {
        let mut d = w.to_vec();
        d.extend(std::iter::repeat_n(r.one(), mid));
        for x in w.iter().rev() {
            d.push(x.inv()?);
        }
        Ok(d)
    };

    // residually semisimple data and the unipotent part on the twisted side
    let (s_diag, u_diag, target, lambdas, power) = match kind {
        Kind::A2n | Kind::B => {
            let s: Vec<PadicInt> = t.iter().map(|&e| zeta(e)).collect();
            let u = mirror(w_twisted, usize::from(kind == Kind::A2n))?;
            let h = Matrix::diagonal(r, &s).mul(r, &j_matrix(r, s.len()));
            let res = if kind == Kind::A2n { norm_a2n(r, &h)? } else { norm_b(r, &h, &r.one())? };
            (s, u, res.target, formula_a2n(t), 2u128)
        }
        Kind::D => {
            let mut s: Vec<PadicInt> = t.iter().map(|&e| zeta(e)).collect();
            for &e in t.iter().rev() {
                s.push(zeta(-e));
            }
            let u = mirror(w_twisted, 2)?;
            let res = norm_d(r, &swap_middle(r, &Matrix::diagonal(r, &s)))?;
            (s, u, res.target, formula_d(t), 1u128)
        }
    };
    let s_mat = Matrix::diagonal(r, &s_diag);
    let u_mat = Matrix::diagonal(r, &u_diag);
    let gamma_diag: Vec<PadicInt> = s_diag.iter().zip(&u_diag).map(|(a, b)| a.mul(b)).collect();
    let (twisted, twisted_semisimple, jordan_twisted, formula_image) = match kind {
        Kind::A2n | Kind::B => {
            let g = Matrix::diagonal(r, &gamma_diag);
            let jp = twisted_jordan(r, &g)?;
            let ok = jp.g_s.equal(r, &s_mat) && jp.g_u.equal(r, &u_mat);
            (g, s_mat.clone(), ok, formula_ratio_padic(&gamma_diag)?)
        }
        Kind::D => {
            let b = swap_middle(r, &s_mat);
            let g = b.mul(r, &u_mat);
            let jp = topological_jordan(r, &g)?;
            let ok = jp.g_s.equal(r, &b) && jp.g_u.equal(r, &u_mat);
            (g, b, ok, gamma_diag[..n].to_vec())
        }
    };

    // endoscopic side
    let form = j_matrix(r, target.rows());
    let v = centralizer_torus_element(r, &target, &form, &lambdas, w_eta)?;
    let centralizer_consistent = v.mul(r, &target).equal(r, &target.mul(r, &v)) && preserves(r, &v, &form);
    let vp = v.pow(r, power);
    let eta = target.mul(r, &vp);
    let je = topological_jordan(r, &eta)?;
    let jordan_consistent = jordan_twisted && je.g_s.equal(r, &target) && je.g_u.equal(r, &vp);
    let eta_coords: Vec<PadicInt> =
        (0..n).map(|i| zeta(lambdas[i]).mul(&w_eta[i].pow(power))).collect();

    let mut full = formula_image.clone();
    if kind == Kind::B {
        full.push(r.one());
    }
    for x in formula_image.iter().rev() {
        full.push(x.inv()?);
    }
    let spectrum_consistent = eta.char_poly(r) == Matrix::diagonal(r, &full).char_poly(r);

    let residual_formula = match kind {
        Kind::D => formula_d(t),
        _ => formula_a2n(t),
    };
    let b_coords = match kind {
        Kind::B => odd_orthogonal_coordinates(r, &target)?,
        _ => symplectic_coordinates(r, &target)?,
    };
    let residual = signed_permutation_match(
        &TorusPoint::roots_of_unity(order as u64, residual_formula),
        &TorusPoint::roots_of_unity(order as u64, b_coords),
    )?;
    let report = signed_permutation_match(
        &TorusPoint::Padic { coords: formula_image },
        &TorusPoint::Padic { coords: eta_coords },
    )?;
    Ok(ComposedPair {
        kind,
        twisted,
        twisted_semisimple,
        eta,
        eta_semisimple: target,
        checks: ComposeChecks { jordan_consistent, centralizer_consistent, spectrum_consistent, residual, report },
    })
}

/// `x·s` with `s` swapping the two middle coordinates.
pub fn swap_middle<R: Ring>(r: &R, x: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let m = x.rows();
    let mut s = Matrix::identity(r, m);
    let (a, b) = (m / 2 - 1, m / 2);
    s.set(a, a, r.zero());
    s.set(b, b, r.zero());
    s.set(a, b, r.one());
    s.set(b, a, r.one());
    x.mul(r, &s)
}
