//! Spinor norms of orthogonal transformations, with the convention that the
//! reflection in `v` has spinor norm `q(v, v)/2`.

use super::forms::{matrix_columns, pair};
use crate::error::{domain, Error, Result};
use crate::exact_scalars::{Ring, SquareRing};
use crate::linalg::Matrix;

/// Square-class representative of the spinor norm of `b ∈ O(q)`.
///
/// Uses the Wall form on `W = im(1 - b)`: for `x = (1 - b)u`,
/// `[x, y] = q(u, y)`. When `1 - b` is invertible on `W` its discriminant is
/// `det((1 - b)|W) · Δ(q|W)` up to squares.
pub fn spinor_norm<R: SquareRing>(r: &R, q: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<R::Elem> {
    if !super::forms::preserves(r, b, q) {
        return domain("b does not preserve q");
    }
    let n = b.rows();
    let a = Matrix::identity(r, n).sub(r, b);
    let w = a.image(r)?;
    if w.cols() == 0 {
        return Ok(r.one());
    }
    let u = a.solve(r, &w)?.ok_or_else(|| Error::Domain("im(1 - b) has no preimage basis".into()))?;
    let wall = u.transpose().mul(r, q).mul(r, &w);
    let d = wall.det(r);
    if !r.is_unit(&d) {
        return domain("Wall form is degenerate");
    }
    r.class_rep(&d)
}

/// Reflection `x ↦ x - 2 q(x, v)/q(v, v) · v`.
pub fn reflection<R: Ring>(r: &R, q: &Matrix<R::Elem>, v: &[R::Elem]) -> Result<Matrix<R::Elem>> {
    let n = q.rows();
    let qv = pair(r, q, v, v);
    let c = r.div(&r.from_i64(2), &qv)?;
    let vm = Matrix::from_fn(n, 1, |i, _| v[i].clone());
    let row = vm.transpose().mul(r, q);
    Ok(Matrix::identity(r, n).sub(r, &vm.mul(r, &row).scale(r, &c)))
}

/// Vectors `v_1, …, v_k` with `b = s_{v_1} ⋯ s_{v_k}`, over a field.
pub fn reflection_factorization<R: Ring>(r: &R, q: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Vec<Vec<R::Elem>>> {
    if !r.is_field() {
        return domain("reflection factorization needs a field");
    }
    let n = b.rows();
    let id = Matrix::identity(r, n);
    let mut cur = b.clone();
    let mut out = Vec::new();
    let basis = matrix_columns(&id);
    let mut trials: Vec<Vec<R::Elem>> = basis.clone();
    for i in 0..n {
        for j in i + 1..n {
            trials.push(basis[i].iter().zip(&basis[j]).map(|(a, c)| r.add(a, c)).collect());
            trials.push(basis[i].iter().zip(&basis[j]).map(|(a, c)| r.sub(a, c)).collect());
        }
    }
    for _ in 0..4 * n + 4 {
        if cur.equal(r, &id) {
            return Ok(out);
        }
        let d = cur.sub(r, &id);
        let step = trials.iter().find_map(|x| {
            let v = matrix_columns(&d.mul(r, &Matrix::from_fn(n, 1, |i, _| x[i].clone())))[0].clone();
            (!r.is_zero(&pair(r, q, &v, &v))).then_some(v)
        });
        // im(b - 1) totally isotropic: peel off an auxiliary reflection
        let v = match step {
            Some(v) => v,
            None => trials
                .iter()
                .find(|u| !r.is_zero(&pair(r, q, u, u)))
                .cloned()
                .ok_or_else(|| Error::Domain("form has no anisotropic trial vector".into()))?,
        };
        cur = reflection(r, q, &v)?.mul(r, &cur);
        out.push(v);
    }
    if cur.equal(r, &id) {
        Ok(out)
    } else {
        domain("reflection factorization did not terminate")
    }
}

/// Spinor norm as `Π q(v_i, v_i)/2` over a reflection factorization.
pub fn spinor_norm_by_reflections<R: SquareRing>(r: &R, q: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<R::Elem> {
    let vs = reflection_factorization(r, q, b)?;
    let half = r.half()?;
    let mut acc = r.one();
    for v in &vs {
        acc = r.mul(&acc, &r.mul(&pair(r, q, v, v), &half));
    }
    r.class_rep(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalars::{rat, RationalField};

    #[test]
    fn reflection_has_half_norm() {
        let r = RationalField;
        let q = Matrix::from_i64(&r, &[vec![1, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]);
        let v = vec![rat(1, 1), rat(1, 1), rat(0, 1)];
        let s = reflection(&r, &q, &v).unwrap();
        // q(v, v) / 2 = 2
        assert_eq!(spinor_norm(&r, &q, &s).unwrap(), rat(2, 1));
        assert_eq!(spinor_norm_by_reflections(&r, &q, &s).unwrap(), rat(2, 1));
        let minus = Matrix::scalar(&r, 3, &rat(-1, 1));
        // -1 = product of the three coordinate reflections: 1/2 · 3/2 · 5/2
        assert_eq!(spinor_norm(&r, &q, &minus).unwrap(), rat(30, 1));
    }
}
