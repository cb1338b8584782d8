//! Small integer-lattice helpers: unimodular column reduction, saturated
//! integer kernels and exact rational solving.

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_scalars::{Rational, RationalField};
use crate::linalg::Matrix;

pub type IVec = Vec<i64>;

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(c: i64, a: &[i64]) -> IVec {
    a.iter().map(|x| c * x).collect()
}

pub fn neg(a: &[i64]) -> IVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[i64]) -> bool {
    a.iter().all(|x| *x == 0)
}

/// `A x` for a matrix given as rows.
pub fn mat_vec(a: &[IVec], x: &[i64]) -> IVec {
    a.iter().map(|row| dot(row, x)).collect()
}

pub fn transpose(a: &[IVec], cols: usize) -> Vec<IVec> {
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn mat_mul(a: &[IVec], b: &[IVec]) -> Vec<IVec> {
    let cols = b.first().map(Vec::len).unwrap_or(0);
    let bt = transpose(b, cols);
    a.iter().map(|row| bt.iter().map(|c| dot(row, c)).collect()).collect()
}

pub fn identity(n: usize) -> Vec<IVec> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Column reduction `A U = [H | 0]` with `U` unimodular. Returns `U` (as
/// rows) and the number of nonzero columns of `H`.
pub fn column_reduce(a: &[IVec], cols: usize) -> (Vec<IVec>, usize) {
    let rows = a.len();
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|x| *x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| i128::from(i == j)).collect()).collect();
    let swap_cols = |m: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    };
    // c_j <- c_j - q c_i
    let axpy = |m: &mut Vec<Vec<i128>>, j: usize, q: i128, i: usize| {
        for row in m.iter_mut() {
            row[j] -= q * row[i];
        }
    };
    let mut piv = 0;
    for r in 0..rows {
        if piv >= cols {
            break;
        }
        loop {
            // smallest nonzero entry in row r among columns piv..
            let best = (piv..cols).filter(|&j| m[r][j] != 0).min_by_key(|&j| m[r][j].abs());
            let Some(b) = best else { break };
            swap_cols(&mut m, piv, b);
            swap_cols(&mut u, piv, b);
            let mut done = true;
            for j in piv + 1..cols {
                if m[r][j] != 0 {
                    let q = m[r][j].div_euclid(m[r][piv]);
                    axpy(&mut m, j, q, piv);
                    axpy(&mut u, j, q, piv);
                    if m[r][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][piv] != 0 {
            piv += 1;
        }
    }
    let u = u.iter().map(|r| r.iter().map(|x| i64::try_from(*x).expect("small lattice")).collect()).collect();
    (u, piv)
}

/// Basis (as vectors) of the saturated integer kernel of `A` (rows).
pub fn integer_kernel(a: &[IVec], cols: usize) -> Vec<IVec> {
    let (u, rank) = column_reduce(a, cols);
    (rank..cols).map(|j| u.iter().map(|row| row[j]).collect()).collect()
}

pub fn to_rational(a: &[IVec]) -> Matrix<Rational> {
    let q = RationalField;
    Matrix::from_i64(&q, a)
}

/// Unique rational solution of `A x = b`, if any (columns of `A` independent).
pub fn solve_rational(a: &[IVec], cols: usize, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let q = RationalField;
    let am = if a.is_empty() { Matrix::zeros(&q, 0, cols) } else { to_rational(a) };
    let bm = Matrix::from_fn(b.len(), 1, |i, _| b[i].clone());
    Ok(am.solve(&q, &bm)?.map(|x| x.column_vec(0)))
}

/// Integer solution of `A x = b` when the columns of `A` are independent.
pub fn solve_integer(a: &[IVec], cols: usize, b: &[i64]) -> Result<Option<IVec>> {
    let br: Vec<Rational> = b.iter().map(|x| Rational::from_integer((*x).into())).collect();
    let Some(x) = solve_rational(a, cols, &br)? else { return Ok(None) };
    let back: Vec<Rational> = {
        let am = if a.is_empty() { return Ok(Some(vec![0; cols])) } else { to_rational(a) };
        let xm = Matrix::from_fn(cols, 1, |i, _| x[i].clone());
        am.mul(&RationalField, &xm).column_vec(0)
    };
    if back != br {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(cols);
    for v in x {
        if !v.is_integer() {
            return Ok(None);
        }
        out.push(v.to_integer().to_i64().ok_or_else(|| Error::Domain("coordinate overflow".into()))?);
    }
    Ok(Some(out))
}

/// Integer determinant (Bareiss-free: via rationals, exact).
pub fn det(a: &[IVec]) -> i64 {
    if a.is_empty() {
        return 1;
    }
    let d = to_rational(a).det(&RationalField);
    assert!(d.is_integer());
    d.to_integer().to_i64().expect("small determinant")
}

pub fn rational_vec(a: &[i64]) -> Vec<Rational> {
    a.iter().map(|x| Rational::from_integer((*x).into())).collect()
}

pub fn rat_is_zero(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_swap_minus_identity() {
        // Θ swaps two coordinates; invariants spanned by (1,1).
        let a = vec![vec![-1, 1], vec![1, -1]];
        let k = integer_kernel(&a, 2);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn kernel_is_saturated() {
        let a = vec![vec![2, 4, 6]];
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        // Saturated: the kernel basis extends to a basis of Z^3.
        let mut m = k.clone();
        m.push(vec![1, 0, 0]);
        assert_eq!(det(&m).abs(), 1);
    }

    #[test]
    fn integer_solution() {
        let a = vec![vec![1, 0], vec![1, 1], vec![0, 1]];
        assert_eq!(solve_integer(&a, 2, &[2, 5, 3]).unwrap(), Some(vec![2, 3]));
        assert_eq!(solve_integer(&a, 2, &[2, 5, 4]).unwrap(), None);
    }
}
