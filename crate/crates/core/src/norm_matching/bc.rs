//! BC-matching of regular elements of `SO_2n+1` and `Sp_2n` on diagonal
//! tori, and the isogeny `i_2: SL_2 → PGL_2 = SO_3`.

use serde::Serialize;

use super::torus::{odd_orthogonal_coordinates, symplectic_coordinates};
use crate::error::{Error, Result};
use crate::exact_scalars::LocalRing;
use crate::forms_matrices::{j_matrix, preserves};
use crate::linalg::Matrix;
use crate::root_datum::steinberg::Sign;
use crate::root_datum::{builtin_datum, weyl_orbit_witness, Family, TorusPoint, WeylWitness};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchReport {
    pub verdict: bool,
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub witness: Option<WeylWitness>,
    /// Why no verdict was attempted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<String>,
}

/// Reason for non-regularity: a coordinate `±1` or `t_i = t_j^{±1}`.
pub fn regularity_defect(t: &TorusPoint) -> Result<Option<String>> {
    let n = t.dim();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        if t.evaluate(&e)? != Sign::Other {
            return Ok(Some(format!("coordinate {i} is ±1")));
        }
        for j in i + 1..n {
            if t.coord_eq(i, t, j, false) || t.coord_eq(i, t, j, true) {
                return Ok(Some(format!("coordinates {i} and {j} agree up to inversion")));
            }
        }
    }
    Ok(None)
}

/// Weyl-orbit comparison of two `n`-coordinate points for `Sp_2n`
/// (equivalently `SO_2n+1`: the Weyl groups agree through `i_BC`).
pub fn signed_permutation_match(u: &TorusPoint, v: &TorusPoint) -> Result<MatchReport> {
    let n = u.dim();
    if v.dim() != n || n == 0 {
        return Err(Error::Dimension(format!("torus points of dimensions {} and {}", n, v.dim())));
    }
    let d = builtin_datum(Family::Sp, 2 * n)?;
    let witness = weyl_orbit_witness(&d, u, v, false)?;
    Ok(MatchReport { verdict: witness.is_some(), left: u.describe(), right: v.describe(), witness, degenerate: None })
}

/// `u ∈ T_SO_2n+1` and `v ∈ T_Sp_2n` are BC-matching when `i_BC(u)` and
/// `v` are Weyl conjugate. Non-regular inputs are reported, not judged.
pub fn bc_matching_check(u: &TorusPoint, v: &TorusPoint) -> Result<MatchReport> {
    for (side, t) in [("left", u), ("right", v)] {
        if let Some(why) = regularity_defect(t)? {
            return Ok(MatchReport {
                verdict: false,
                left: u.describe(),
                right: v.describe(),
                witness: None,
                degenerate: Some(format!("{side} point is not regular: {why}")),
            });
        }
    }
    signed_permutation_match(u, v)
}

/// `Ad(γ)` on `sl_2` in the basis `(E, H, -2F)`, where the trace form is
/// `-2 J_3`.
pub fn isogeny_i2<R: LocalRing>(r: &R, g: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::Dimension("i2 needs a 2x2 matrix".into()));
    }
    let gi = g.inverse(r)?;
    let (o, z) = (r.one(), r.zero());
    let basis = [
        Matrix::from_rows(vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]]),
        Matrix::from_rows(vec![vec![o.clone(), z.clone()], vec![z.clone(), r.neg(&o)]]),
        Matrix::from_rows(vec![vec![z.clone(), z.clone()], vec![r.from_i64(-2), z.clone()]]),
    ];
    let m_half = r.inv(&r.from_i64(-2))?;
    let mut out = Matrix::zeros(r, 3, 3);
    for (k, x) in basis.iter().enumerate() {
        let y = g.mul(r, x).mul(r, &gi);
        // [[h, e], [f, -h]] = e E + h H + (f / -2) (-2F)
        out.set(0, k, y.get(0, 1).clone());
        out.set(1, k, y.get(0, 0).clone());
        out.set(2, k, r.mul(y.get(1, 0), &m_half));
    }
    Ok(out)
}

/// Whether `i_2(γ)` and `γ²` are BC-matching, for `γ ∈ SL_2(R)` with
/// Teichmüller eigenvalues.
pub fn bc1_isogeny_check<R: LocalRing>(r: &R, g: &Matrix<R::Elem>) -> Result<MatchReport> {
    if !r.is_one(&g.det(r)) {
        return Err(Error::Precondition("γ must lie in SL_2".into()));
    }
    let i2 = isogeny_i2(r, g)?;
    if !preserves(r, &i2, &j_matrix(r, 3)) || !r.is_one(&i2.det(r)) {
        return Err(Error::Domain("i2(γ) is not in SO(J_3)".into()));
    }
    let order = r.residue_size() - 1;
    let u = TorusPoint::roots_of_unity(order, odd_orthogonal_coordinates(r, &i2)?);
    let v = TorusPoint::roots_of_unity(order, symplectic_coordinates(r, &g.mul(r, g))?);
    bc_matching_check(&u, &v)
}
