//! Cayley transforms between pairs of forms and isometries, and the shift
//! between symmetric and alternating forms along an isometry.

use crate::error::{domain, Error, Result};
use crate::exact_scalars::Ring;
use crate::linalg::Matrix;

fn check_pair<R: Ring>(r: &R, q: &Matrix<R::Elem>, p: &Matrix<R::Elem>) -> Result<()> {
    if q.rows() != p.rows() {
        return Err(Error::Dimension("forms of different rank".into()));
    }
    if !q.is_symmetric(r) {
        return domain("q is not symmetric");
    }
    if !p.is_alternating(r) {
        return domain("p is not alternating");
    }
    Ok(())
}

fn invert<R: Ring>(r: &R, m: &Matrix<R::Elem>, what: &str) -> Result<Matrix<R::Elem>> {
    m.inverse(r).map_err(|_| Error::Domain(format!("{what} is not invertible")))
}

/// `C(q) = (q - p)⁻¹ (q + p) ∈ Sp(p)`.
pub fn cayley_sp<R: Ring>(r: &R, q: &Matrix<R::Elem>, p: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    check_pair(r, q, p)?;
    Ok(invert(r, &q.sub(r, p), "q - p")?.mul(r, &q.add(r, p)))
}

/// Inverse of [`cayley_sp`]: `b ↦ p (b + 1)(b - 1)⁻¹`.
pub fn cayley_sp_inverse<R: Ring>(r: &R, b: &Matrix<R::Elem>, p: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    let id = Matrix::identity(r, b.rows());
    let q = p.mul(r, &b.add(r, &id)).mul(r, &invert(r, &b.sub(r, &id), "b - 1")?);
    if !q.is_symmetric(r) {
        return domain("b does not preserve p");
    }
    Ok(q)
}

/// `C̃(p) = (p - q)⁻¹ (q + p) ∈ O(q)`, of determinant `(-1)^n`.
pub fn cayley_orth<R: Ring>(r: &R, p: &Matrix<R::Elem>, q: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    check_pair(r, q, p)?;
    Ok(invert(r, &p.sub(r, q), "p - q")?.mul(r, &q.add(r, p)))
}

/// Inverse of [`cayley_orth`]: `b ↦ q (b + 1)(b - 1)⁻¹`.
pub fn cayley_orth_inverse<R: Ring>(r: &R, b: &Matrix<R::Elem>, q: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    let id = Matrix::identity(r, b.rows());
    let p = q.mul(r, &b.add(r, &id)).mul(r, &invert(r, &b.sub(r, &id), "b - 1")?);
    if !p.is_alternating(r) {
        return domain("b does not preserve q");
    }
    Ok(p)
}

/// `p = q (b - b⁻¹)` for `b ∈ O(q)` with `b - b⁻¹` invertible; then `b ∈ Sp(p)`.
pub fn so_sp_shift<R: Ring>(r: &R, b: &Matrix<R::Elem>, q: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    let d = b.sub(r, &b.inverse(r)?);
    invert(r, &d, "b - b⁻¹")?;
    Ok(q.mul(r, &d))
}

/// `q = p (b - b⁻¹)⁻¹` for `b ∈ Sp(p)`; then `b ∈ O(q)`.
pub fn sp_so_shift<R: Ring>(r: &R, b: &Matrix<R::Elem>, p: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    let d = b.sub(r, &b.inverse(r)?);
    Ok(p.mul(r, &invert(r, &d, "b - b⁻¹")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalars::{rat, RationalField};
    use crate::forms_matrices::forms::{j_matrix, preserves};

    #[test]
    fn cayley_of_zero_is_minus_one() {
        let r = RationalField;
        let p = j_matrix(&r, 4);
        let z = Matrix::zeros(&r, 4, 4);
        assert!(cayley_sp(&r, &z, &p).unwrap().equal(&r, &Matrix::scalar(&r, 4, &rat(-1, 1))));
    }

    #[test]
    fn round_trips_over_q() {
        let r = RationalField;
        let p = j_matrix(&r, 4);
        let q = Matrix::from_i64(&r, &[vec![2, 1, 0, 0], vec![1, 3, 0, 1], vec![0, 0, 1, 0], vec![0, 1, 0, 5]]);
        let b = cayley_sp(&r, &q, &p).unwrap();
        assert!(preserves(&r, &b, &p));
        assert!(cayley_sp_inverse(&r, &b, &p).unwrap().equal(&r, &q));
        let q3 = Matrix::from_i64(&r, &[vec![1, 0, 2], vec![0, 3, 0], vec![2, 0, 1]]);
        let p3 = Matrix::from_i64(&r, &[vec![0, 1, 1], vec![-1, 0, 2], vec![-1, -2, 0]]);
        let c = cayley_orth(&r, &p3, &q3).unwrap();
        assert!(preserves(&r, &c, &q3));
        assert_eq!(c.det(&r), rat(-1, 1));
        assert!(cayley_orth_inverse(&r, &c, &q3).unwrap().equal(&r, &p3));
    }
}
