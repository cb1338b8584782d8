//! Dense matrices over any [`Ring`], with division-free determinants and
//! elimination that tolerates truncated local rings.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact_scalars::Ring;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

/// Reduced row echelon form produced by full pivoting on minimal valuation.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub rref: Matrix<E>,
    /// Pivot column of row `i` for `i < rank`.
    pub pivot_cols: Vec<usize>,
    /// Largest valuation among the pivots (0 when all pivots are units).
    pub max_pivot_valuation: u32,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> Vec<E> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }
    pub fn column(&self, j: usize) -> Matrix<E> {
        Matrix::from_fn(self.rows, 1, |i, _| self.get(i, j).clone())
    }
    pub fn column_vec(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, cols)
    }
    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
    pub fn entries(&self) -> &[E] {
        &self.data
    }

    /// Column concatenation; all blocks need the same number of rows.
    pub fn hstack(blocks: &[&Matrix<E>]) -> Result<Self> {
        let rows = blocks.first().map(|b| b.rows).unwrap_or(0);
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::Dimension("hstack row counts differ".into()));
        }
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        Ok(Matrix::from_fn(rows, cols, |i, mut j| {
            for b in blocks {
                if j < b.cols {
                    return b.get(i, j).clone();
                }
                j -= b.cols;
            }
            unreachable!()
        }))
    }

    pub fn vstack(blocks: &[&Matrix<E>]) -> Result<Self> {
        let t: Vec<Matrix<E>> = blocks.iter().map(|b| b.transpose()).collect();
        let refs: Vec<&Matrix<E>> = t.iter().collect();
        Ok(Matrix::hstack(&refs)?.transpose())
    }
}

impl<E: Clone + PartialEq + std::fmt::Debug> Matrix<E> {
    pub fn zeros<R: Ring<Elem = E>>(r: &R, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| r.zero())
    }

    pub fn identity<R: Ring<Elem = E>>(r: &R, n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { r.one() } else { r.zero() })
    }

    pub fn scalar<R: Ring<Elem = E>>(r: &R, n: usize, c: &E) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { c.clone() } else { r.zero() })
    }

    pub fn diagonal<R: Ring<Elem = E>>(r: &R, d: &[E]) -> Self {
        Matrix::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { r.zero() })
    }

    /// Antidiagonal matrix with `d[i]` in row `i`.
    pub fn antidiagonal<R: Ring<Elem = E>>(r: &R, d: &[E]) -> Self {
        let n = d.len();
        Matrix::from_fn(n, n, |i, j| if i + j + 1 == n { d[i].clone() } else { r.zero() })
    }

    pub fn from_i64<R: Ring<Elem = E>>(r: &R, rows: &[Vec<i64>]) -> Self {
        Matrix::from_rows(rows.iter().map(|row| row.iter().map(|x| r.from_i64(*x)).collect()).collect())
    }

    pub fn block_diag<R: Ring<Elem = E>>(r: &R, blocks: &[&Matrix<E>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(r, n, m);
        let (mut oi, mut oj) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(oi + i, oj + j, b.get(i, j).clone());
                }
            }
            oi += b.rows;
            oj += b.cols;
        }
        out
    }

    fn check_same_shape(&self, o: &Self, what: &str) {
        assert!(
            self.rows == o.rows && self.cols == o.cols,
            "{what}: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            o.rows,
            o.cols
        );
    }

    pub fn add<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        self.check_same_shape(o, "add");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| r.add(a, b)).collect() }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        self.check_same_shape(o, "sub");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| r.sub(a, b)).collect() }
    }

    pub fn neg<R: Ring<Elem = E>>(&self, r: &R) -> Self {
        self.map(|a| r.neg(a))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, r: &R, c: &E) -> Self {
        self.map(|a| r.mul(c, a))
    }

    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "mul: {}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols);
        let mut out = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = r.zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if r.is_zero(a) {
                        continue;
                    }
                    acc = r.add(&acc, &r.mul(a, o.get(k, j)));
                }
                out.push(acc);
            }
        }
        Matrix { rows: self.rows, cols: o.cols, data: out }
    }

    /// Product of a chain of matrices.
    pub fn product<R: Ring<Elem = E>>(r: &R, factors: &[&Matrix<E>]) -> Self {
        let mut acc = factors[0].clone();
        for f in &factors[1..] {
            acc = acc.mul(r, f);
        }
        acc
    }

    pub fn pow<R: Ring<Elem = E>>(&self, r: &R, mut e: u128) -> Self {
        let mut base = self.clone();
        let mut acc = Matrix::identity(r, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(r, &base);
            }
        }
        acc
    }

    pub fn trace<R: Ring<Elem = E>>(&self, r: &R) -> E {
        let mut acc = r.zero();
        for i in 0..self.rows.min(self.cols) {
            acc = r.add(&acc, self.get(i, i));
        }
        acc
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.data.iter().all(|a| r.is_zero(a))
    }

    /// Entrywise equality in the ring (precision-aware for local rings).
    pub fn equal<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data.iter().zip(&o.data).all(|(a, b)| r.equal(a, b))
    }

    pub fn is_identity<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.is_square() && self.equal(r, &Matrix::identity(r, self.rows))
    }

    pub fn is_symmetric<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.equal(r, &self.transpose())
    }

    pub fn is_alternating<R: Ring<Elem = E>>(&self, r: &R) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| r.is_zero(self.get(i, i)))
            && self.equal(r, &self.transpose().neg(r))
    }

    /// Characteristic polynomial `det(x·1 - A)`, coefficients from the
    /// leading one downwards, by the division-free Berkowitz recursion.
    pub fn char_poly<R: Ring<Elem = E>>(&self, r: &R) -> Vec<E> {
        assert!(self.is_square(), "char_poly of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return vec![r.one()];
        }
        let mut vect = vec![r.one(), r.neg(self.get(0, 0))];
        for k in 1..n {
            // Leading block A_k (k x k), row R = A[k][..k], column C = A[..k][k].
            let mut t = Vec::with_capacity(k + 2);
            t.push(r.one());
            t.push(r.neg(self.get(k, k)));
            let mut col: Vec<E> = (0..k).map(|i| self.get(i, k).clone()).collect();
            for _ in 0..k {
                let mut dot = r.zero();
                for (j, cj) in col.iter().enumerate() {
                    dot = r.add(&dot, &r.mul(self.get(k, j), cj));
                }
                t.push(r.neg(&dot));
                let next: Vec<E> = (0..k)
                    .map(|i| {
                        let mut acc = r.zero();
                        for (j, cj) in col.iter().enumerate() {
                            acc = r.add(&acc, &r.mul(self.get(i, j), cj));
                        }
                        acc
                    })
                    .collect();
                col = next;
            }
            let mut next = Vec::with_capacity(k + 2);
            for i in 0..k + 2 {
                let mut acc = r.zero();
                for (j, vj) in vect.iter().enumerate() {
                    if j <= i && i - j < t.len() {
                        acc = r.add(&acc, &r.mul(&t[i - j], vj));
                    }
                }
                next.push(acc);
            }
            vect = next;
        }
        vect
    }

    pub fn det<R: Ring<Elem = E>>(&self, r: &R) -> E {
        let cp = self.char_poly(r);
        let c = cp[self.rows].clone();
        if self.rows % 2 == 0 {
            c
        } else {
            r.neg(&c)
        }
    }

    /// Reduced echelon form; only the first `pivot_limit` columns may hold
    /// pivots (the rest are carried along, e.g. right-hand sides).
    pub fn echelon<R: Ring<Elem = E>>(&self, r: &R, pivot_limit: usize) -> Result<Echelon<E>> {
        let mut a = self.clone();
        let (rows, cols) = (a.rows, a.cols);
        let limit = pivot_limit.min(cols);
        let mut used = vec![false; cols];
        let mut pivot_cols = Vec::new();
        let mut max_v = 0;
        let mut rank = 0;
        while rank < rows {
            let mut best: Option<(u32, usize, usize)> = None;
            'search: for i in rank..rows {
                for j in 0..limit {
                    if used[j] {
                        continue;
                    }
                    if let Some(v) = r.valuation(a.get(i, j)) {
                        if best.map(|b| v < b.0).unwrap_or(true) {
                            best = Some((v, i, j));
                            if v == 0 {
                                break 'search;
                            }
                        }
                    }
                }
            }
            let Some((v, i, j)) = best else { break };
            if let Some(k) = r.precision() {
                if 2 * v > k {
                    return Err(Error::Precision(format!("pivot of valuation {v} at working precision {k}")));
                }
            }
            max_v = max_v.max(v);
            if i != rank {
                for c in 0..cols {
                    a.data.swap(i * cols + c, rank * cols + c);
                }
            }
            let piv = a.get(rank, j).clone();
            for c in 0..cols {
                let x = a.get(rank, c).clone();
                if !r.is_zero(&x) {
                    a.set(rank, c, r.div_exact(&x, &piv)?);
                } else {
                    a.set(rank, c, r.zero());
                }
            }
            for ii in 0..rows {
                if ii == rank {
                    continue;
                }
                let f = a.get(ii, j).clone();
                if r.is_zero(&f) {
                    continue;
                }
                for c in 0..cols {
                    let y = r.mul(&f, a.get(rank, c));
                    let cur = a.get(ii, c).clone();
                    a.set(ii, c, r.sub(&cur, &y));
                }
            }
            used[j] = true;
            pivot_cols.push(j);
            rank += 1;
        }
        Ok(Echelon { rref: a, pivot_cols, max_pivot_valuation: max_v })
    }

    pub fn rank<R: Ring<Elem = E>>(&self, r: &R) -> Result<usize> {
        Ok(self.echelon(r, self.cols)?.rank())
    }

    /// Basis (as columns) of the saturated kernel `{x : A x = 0}`.
    pub fn kernel<R: Ring<Elem = E>>(&self, r: &R) -> Result<Matrix<E>> {
        let ech = self.echelon(r, self.cols)?;
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivot_cols.contains(c)).collect();
        let mut out = Matrix::zeros(r, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, r.one());
            for (i, &pc) in ech.pivot_cols.iter().enumerate() {
                out.set(pc, k, r.neg(ech.rref.get(i, f)));
            }
        }
        Ok(out)
    }

    /// A solution of `A X = B` over the ring, or `None` if none exists.
    pub fn solve<R: Ring<Elem = E>>(&self, r: &R, b: &Matrix<E>) -> Result<Option<Matrix<E>>> {
        if b.rows != self.rows {
            return Err(Error::Dimension("solve: right-hand side rows".into()));
        }
        let aug = Matrix::hstack(&[self, b])?;
        let ech = match aug.echelon(r, self.cols) {
            Ok(e) => e,
            Err(Error::Domain(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let rank = ech.rank();
        for i in rank..self.rows {
            for j in 0..b.cols {
                if !r.is_zero(ech.rref.get(i, self.cols + j)) {
                    return Ok(None);
                }
            }
        }
        let mut x = Matrix::zeros(r, self.cols, b.cols);
        for (i, &pc) in ech.pivot_cols.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, ech.rref.get(i, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn inverse<R: Ring<Elem = E>>(&self, r: &R) -> Result<Matrix<E>> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        if !r.is_unit(&self.det(r)) {
            return Err(Error::Singular(format!("determinant {} is not a unit", r.format(&self.det(r)))));
        }
        let id = Matrix::identity(r, self.rows);
        self.solve(r, &id)?.ok_or_else(|| Error::Singular("no inverse".into()))
    }

    /// Basis of the column span, assumed to be a direct summand.
    pub fn image<R: Ring<Elem = E>>(&self, r: &R) -> Result<Matrix<E>> {
        let ech = self.transpose().echelon(r, self.rows)?;
        if ech.max_pivot_valuation > 0 {
            return Err(Error::Domain("column span is not a direct summand".into()));
        }
        let rows: Vec<usize> = (0..ech.rank()).collect();
        let cols: Vec<usize> = (0..self.rows).collect();
        Ok(ech.rref.submatrix(&rows, &cols).transpose())
    }

    /// Complete the columns of `self` (a direct summand basis) to a basis
    /// of the ambient module by standard vectors.
    pub fn extend_to_basis<R: Ring<Elem = E>>(&self, r: &R) -> Result<Matrix<E>> {
        let ech = self.transpose().echelon(r, self.rows)?;
        if ech.max_pivot_valuation > 0 || ech.rank() != self.cols {
            return Err(Error::Domain("columns do not span a direct summand".into()));
        }
        let missing: Vec<usize> = (0..self.rows).filter(|c| !ech.pivot_cols.contains(c)).collect();
        let e = Matrix::identity(r, self.rows).select_columns(&missing);
        Matrix::hstack(&[self, &e])
    }

    /// Matrix of `g` on the invariant submodule spanned by the columns of `basis`.
    pub fn restrict_to<R: Ring<Elem = E>>(&self, r: &R, basis: &Matrix<E>) -> Result<Matrix<E>> {
        let gb = self.mul(r, basis);
        basis
            .solve(r, &gb)?
            .ok_or_else(|| Error::Domain("submodule is not invariant".into()))
    }

    /// Gram matrix `ᵗB · G · B` of a form restricted to the span of `basis`.
    pub fn gram_on<R: Ring<Elem = E>>(&self, r: &R, basis: &Matrix<E>) -> Matrix<E> {
        basis.transpose().mul(r, self).mul(r, basis)
    }

    pub fn to_json<R: Ring<Elem = E>>(&self, r: &R) -> Value {
        json!({
            "ring": r.descriptor(),
            "rank": [self.rows, self.cols],
            "entries": self.to_rows().iter().map(|row| row.iter().map(|x| r.to_json(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json<R: Ring<Elem = E>>(r: &R, v: &Value) -> Result<Self> {
        let rows_v = match v {
            Value::Array(_) => v,
            Value::Object(o) => o.get("entries").ok_or_else(|| Error::Parse("missing entries".into()))?,
            _ => return Err(Error::Parse("matrix must be an array or object".into())),
        };
        let rows = rows_v.as_array().ok_or_else(|| Error::Parse("entries must be an array".into()))?;
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_array().ok_or_else(|| Error::Parse("row must be an array".into()))?;
            out.push(row.iter().map(|x| r.from_json(x)).collect::<Result<Vec<_>>>()?);
        }
        let c = out.first().map(Vec::len).unwrap_or(0);
        if out.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("ragged matrix".into()));
        }
        Ok(Matrix::from_rows(out))
    }

    pub fn format<R: Ring<Elem = E>>(&self, r: &R) -> String {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|row| format!("[{}]", row.iter().map(|x| r.format(x)).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalars::{rat, RationalField, Zp};

    #[test]
    fn berkowitz_matches_cofactor_expansion() {
        let q = RationalField;
        let a = Matrix::from_i64(&q, &[vec![2, -1, 3], vec![0, 4, 5], vec![1, 1, -2]]);
        // 2(−8−5) +1(0−5) +3(0−4) = −26 −5 −12 = −43
        assert_eq!(a.det(&q), rat(-43, 1));
        let cp = a.char_poly(&q);
        assert_eq!(cp[0], rat(1, 1));
        assert_eq!(cp[1], rat(-4, 1));
    }

    #[test]
    fn kernel_over_zp_is_saturated() {
        let z = Zp::new(5, 6).unwrap();
        // rows (5, 1) and (10, 2): kernel spanned by (1, -5)
        let a = Matrix::from_i64(&z, &[vec![5, 1], vec![10, 2]]);
        let k = a.kernel(&z).unwrap();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&z, &k).is_zero(&z));
        assert!(k.get(0, 0).is_unit() || k.get(1, 0).is_unit());
    }

    #[test]
    fn inverse_over_zp() {
        let z = Zp::new(7, 6).unwrap();
        let a = Matrix::from_i64(&z, &[vec![7, 1], vec![1, 0]]);
        let ai = a.inverse(&z).unwrap();
        assert!(a.mul(&z, &ai).is_identity(&z));
        let b = Matrix::from_i64(&z, &[vec![7, 0], vec![0, 1]]);
        assert!(b.inverse(&z).is_err());
    }

    #[test]
    fn non_unit_pivot_kernel() {
        let z = Zp::new(3, 8).unwrap();
        let a = Matrix::from_i64(&z, &[vec![3, 0, 6]]);
        let k = a.kernel(&z).unwrap();
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&z, &k).is_zero(&z));
    }
}
