//! Standard forms, the symmetric/alternating split of a matrix, and normal
//! forms of unimodular symmetric and alternating forms.

use crate::error::{domain, Error, Result};
use crate::exact_scalars::{LocalRing, Ring};
use crate::linalg::Matrix;

/// `J_n = antidiag(1, -1, 1, …)`, with the `1` in the upper right corner.
pub fn j_matrix<R: Ring>(r: &R, n: usize) -> Matrix<R::Elem> {
    let d: Vec<R::Elem> = (0..n).map(|i| r.from_i64(if i % 2 == 0 { 1 } else { -1 })).collect();
    Matrix::antidiagonal(r, &d)
}

/// `J'_{2m} = antidiag(1, -1, …, ±1, ±1, …, -1, 1)`, a symmetric form.
pub fn j_prime<R: Ring>(r: &R, n: usize) -> Result<Matrix<R::Elem>> {
    if n % 2 != 0 {
        return domain(format!("J' needs even size, got {n}"));
    }
    let m = n / 2;
    let d: Vec<R::Elem> = (0..n)
        .map(|i| {
            let k = if i < m { i } else { n - 1 - i };
            r.from_i64(if k % 2 == 0 { 1 } else { -1 })
        })
        .collect();
    Ok(Matrix::antidiagonal(r, &d))
}

/// `h = p + q` with `q` symmetric and `p` alternating.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitParts<E> {
    pub p: Matrix<E>,
    pub q: Matrix<E>,
}

pub fn split_parts<R: Ring>(r: &R, h: &Matrix<R::Elem>) -> Result<SplitParts<R::Elem>> {
    if !h.is_square() {
        return Err(Error::Dimension("split_parts needs a square matrix".into()));
    }
    let half = r.half()?;
    let t = h.transpose();
    Ok(SplitParts { q: h.add(r, &t).scale(r, &half), p: h.sub(r, &t).scale(r, &half) })
}

/// `N(h) = h · ᵗh⁻¹`.
pub fn theta_norm<R: Ring>(r: &R, h: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    Ok(h.mul(r, &h.transpose().inverse(r)?))
}

/// `N_l(h) = ᵗh⁻¹ · h`.
pub fn left_norm<R: Ring>(r: &R, h: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    Ok(h.transpose().inverse(r)?.mul(r, h))
}

/// Value `ᵗu G v` of a bilinear form on two column vectors.
pub fn pair<R: Ring>(r: &R, g: &Matrix<R::Elem>, u: &[R::Elem], v: &[R::Elem]) -> R::Elem {
    let mut acc = r.zero();
    for (i, ui) in u.iter().enumerate() {
        if r.is_zero(ui) {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            acc = r.add(&acc, &r.mul(ui, &r.mul(g.get(i, j), vj)));
        }
    }
    acc
}

pub(crate) fn axpy<R: Ring>(r: &R, y: &[R::Elem], a: &R::Elem, x: &[R::Elem]) -> Vec<R::Elem> {
    y.iter().zip(x).map(|(yi, xi)| r.add(yi, &r.mul(a, xi))).collect()
}

pub(crate) fn scale_vec<R: Ring>(r: &R, a: &R::Elem, x: &[R::Elem]) -> Vec<R::Elem> {
    x.iter().map(|xi| r.mul(a, xi)).collect()
}

pub(crate) fn columns_to_matrix<R: Ring>(r: &R, n: usize, cols: &[Vec<R::Elem>]) -> Matrix<R::Elem> {
    if cols.is_empty() {
        return Matrix::zeros(r, n, 0);
    }
    Matrix::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
}

pub(crate) fn matrix_columns<E: Clone>(m: &Matrix<E>) -> Vec<Vec<E>> {
    (0..m.cols()).map(|j| m.column_vec(j)).collect()
}

/// A form value usable as a pivot: a unit over local rings, nonzero over
/// fields.
fn good_pivot<R: Ring>(r: &R, x: &R::Elem) -> bool {
    r.valuation(x) == Some(0)
}

/// Change of basis `S` with `ᵗS p S = J_{2g}` for a unimodular alternating
/// `p`. Hyperbolic pairs are split off in lexicographic order.
pub fn symplectic_normal_form<R: Ring>(r: &R, p: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if !p.is_alternating(r) {
        return domain("form is not alternating");
    }
    let n = p.rows();
    if n % 2 != 0 {
        return domain("alternating unimodular forms have even rank");
    }
    let mut rest = matrix_columns(&Matrix::identity(r, n));
    let mut pairs: Vec<(Vec<R::Elem>, Vec<R::Elem>)> = Vec::new();
    while !rest.is_empty() {
        let x = rest.remove(0);
        let j = (0..rest.len())
            .find(|&j| good_pivot(r, &pair(r, p, &x, &rest[j])))
            .ok_or_else(|| Error::Domain("alternating form is not unimodular".into()))?;
        let y0 = rest.remove(j);
        let y = scale_vec(r, &r.inv(&pair(r, p, &x, &y0))?, &y0);
        for z in rest.iter_mut() {
            let a = r.neg(&pair(r, p, z, &y));
            let b = pair(r, p, z, &x);
            *z = axpy(r, &axpy(r, z, &a, &x), &b, &y);
        }
        pairs.push((x, y));
    }
    let g = pairs.len();
    let mut cols = vec![Vec::new(); n];
    for (i, (x, y)) in pairs.into_iter().enumerate() {
        cols[i] = x;
        cols[n - 1 - i] = if i % 2 == 0 { y } else { scale_vec(r, &r.from_i64(-1), &y) };
    }
    let s = columns_to_matrix(r, n, &cols);
    debug_assert!(s.transpose().mul(r, p).mul(r, &s).equal(r, &j_matrix(r, 2 * g)));
    Ok(s)
}

/// Orthogonal basis `B` (columns) with `ᵗB q B` diagonal with pivot
/// entries (units over local rings). Needs `2` invertible.
pub fn orthogonal_diagonalize<R: Ring>(r: &R, q: &Matrix<R::Elem>) -> Result<(Matrix<R::Elem>, Vec<R::Elem>)> {
    if !q.is_symmetric(r) {
        return domain("form is not symmetric");
    }
    let n = q.rows();
    let mut rest = matrix_columns(&Matrix::identity(r, n));
    let mut basis = Vec::new();
    let mut diag = Vec::new();
    while !rest.is_empty() {
        let k = rest.len();
        let mut pick = (0..k).find(|&i| good_pivot(r, &pair(r, q, &rest[i], &rest[i])));
        if pick.is_none() {
            'outer: for i in 0..k {
                for j in i + 1..k {
                    if good_pivot(r, &pair(r, q, &rest[i], &rest[j])) {
                        let s: Vec<R::Elem> = rest[i].iter().zip(&rest[j]).map(|(a, b)| r.add(a, b)).collect();
                        rest[i] = s;
                        pick = Some(i);
                        break 'outer;
                    }
                }
            }
        }
        let i = pick.ok_or_else(|| Error::Domain("symmetric form is not unimodular".into()))?;
        let v = rest.remove(i);
        let d = pair(r, q, &v, &v);
        let dinv = r.inv(&d)?;
        for z in rest.iter_mut() {
            let c = r.neg(&r.mul(&pair(r, q, z, &v), &dinv));
            *z = axpy(r, z, &c, &v);
        }
        basis.push(v);
        diag.push(d);
    }
    Ok((columns_to_matrix(r, n, &basis), diag))
}

/// `S` with `ᵗS q S = diag(1, …, 1, last)`. Fails with an obstruction when
/// `det q` and `last` lie in different square classes.
pub fn orthogonal_normal_form<R: LocalRing>(r: &R, q: &Matrix<R::Elem>, last: &R::Elem) -> Result<Matrix<R::Elem>> {
    let n = q.rows();
    if n == 0 {
        return Ok(Matrix::zeros(r, 0, 0));
    }
    let (b, d) = orthogonal_diagonalize(r, q)?;
    let mut cols = matrix_columns(&b);
    let mut vals = Vec::with_capacity(n);
    for (c, di) in cols.iter_mut().zip(&d) {
        let rep = r.class_rep(di)?;
        let s = r.sqrt_unit(&r.div(&rep, di)?)?;
        *c = scale_vec(r, &s, c);
        vals.push(rep);
    }
    // pairs of non-squares become pairs of ones
    let odd: Vec<usize> = (0..n).filter(|&i| !r.is_one(&vals[i])).collect();
    for pr in odd.chunks(2) {
        if let [i, j] = *pr {
            let (a, bb) = sum_of_two_squares(r, &r.inv(&vals[i])?)?;
            let (u, w) = (cols[i].clone(), cols[j].clone());
            cols[i] = axpy(r, &scale_vec(r, &a, &u), &bb, &w);
            cols[j] = axpy(r, &scale_vec(r, &a, &w), &r.neg(&bb), &u);
            vals[i] = r.one();
            vals[j] = r.one();
        }
    }
    if let Some(k) = (0..n).find(|&i| !r.is_one(&vals[i])) {
        cols.swap(k, n - 1);
        vals.swap(k, n - 1);
    }
    let ratio = r.div(last, &vals[n - 1])?;
    if !r.is_square_unit(&ratio)? {
        return Err(Error::Obstruction(format!(
            "discriminant {} and target {} differ by a non-square",
            r.format(&q.det(r)),
            r.format(last)
        )));
    }
    let s = r.sqrt_unit(&ratio)?;
    cols[n - 1] = scale_vec(r, &s, &cols[n - 1]);
    Ok(columns_to_matrix(r, n, &cols))
}

/// Some `(a, b)` with `a² + b² = c` for a unit `c`.
pub fn sum_of_two_squares<R: LocalRing>(r: &R, c: &R::Elem) -> Result<(R::Elem, R::Elem)> {
    for i in 0..r.residue_size() {
        let a = r.residue_element(i);
        let rest = r.sub(c, &r.mul(&a, &a));
        if r.is_unit(&rest) && r.is_square_unit(&rest)? {
            return Ok((a, r.sqrt_unit(&rest)?));
        }
    }
    domain("no representation as a sum of two squares")
}

/// `g` with `ᵗg q1 g = q2` for unimodular symmetric forms of equal
/// discriminant class.
pub fn orthogonal_isometry<R: LocalRing>(r: &R, q1: &Matrix<R::Elem>, q2: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if q1.rows() != q2.rows() {
        return Err(Error::Dimension("forms of different rank".into()));
    }
    if q1.rows() == 0 {
        return Ok(Matrix::zeros(r, 0, 0));
    }
    let last = r.class_rep(&q1.det(r))?;
    let s1 = orthogonal_normal_form(r, q1, &last)?;
    let s2 = orthogonal_normal_form(r, q2, &last)?;
    Ok(s1.mul(r, &s2.inverse(r)?))
}

/// `g` with `ᵗg p1 g = p2` for unimodular alternating forms.
pub fn symplectic_isometry<R: Ring>(r: &R, p1: &Matrix<R::Elem>, p2: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if p1.rows() != p2.rows() {
        return Err(Error::Dimension("forms of different rank".into()));
    }
    let s1 = symplectic_normal_form(r, p1)?;
    let s2 = symplectic_normal_form(r, p2)?;
    Ok(s1.mul(r, &s2.inverse(r)?))
}

/// True when `ᵗg G g = G`.
pub fn preserves<R: Ring>(r: &R, g: &Matrix<R::Elem>, form: &Matrix<R::Elem>) -> bool {
    g.transpose().mul(r, form).mul(r, g).equal(r, form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalars::{rat, RationalField, Zp};

    #[test]
    fn standard_forms() {
        let r = RationalField;
        let j3 = j_matrix(&r, 3);
        assert!(j3.is_symmetric(&r));
        assert_eq!(j3.det(&r), rat(1, 1));
        assert!(j_matrix(&r, 4).is_alternating(&r));
        let jp = j_prime(&r, 6).unwrap();
        assert!(jp.is_symmetric(&r));
        assert_eq!(*jp.get(2, 3), rat(1, 1));
        assert_eq!(*jp.get(3, 2), rat(1, 1));
        assert_eq!(jp.det(&r), rat(-1, 1));
    }

    #[test]
    fn split_of_a_matrix() {
        let r = RationalField;
        let h = Matrix::from_i64(&r, &[vec![1, 2], vec![0, 3]]);
        let s = split_parts(&r, &h).unwrap();
        assert!(s.q.is_symmetric(&r) && s.p.is_alternating(&r));
        assert!(s.p.add(&r, &s.q).equal(&r, &h));
    }

    #[test]
    fn normal_forms_over_z7() {
        let r = Zp::new(7, 6).unwrap();
        let p = Matrix::from_i64(&r, &[vec![0, 3, 1, 2], vec![-3, 0, 5, 1], vec![-1, -5, 0, 5], vec![-2, -1, -5, 0]]);
        let s = symplectic_normal_form(&r, &p).unwrap();
        assert!(s.transpose().mul(&r, &p).mul(&r, &s).equal(&r, &j_matrix(&r, 4)));
        let q = Matrix::from_i64(&r, &[vec![3, 1, 0], vec![1, 3, 0], vec![0, 0, 3]]);
        let d = q.det(&r);
        let s = orthogonal_normal_form(&r, &q, &d).unwrap();
        let expect = Matrix::diagonal(&r, &[r.one(), r.one(), d]);
        assert!(s.transpose().mul(&r, &q).mul(&r, &s).equal(&r, &expect));
        let bad = r.mul(&d, &r.nonresidue());
        assert!(matches!(orthogonal_normal_form(&r, &q, &bad), Err(Error::Obstruction(_))));
    }
}
