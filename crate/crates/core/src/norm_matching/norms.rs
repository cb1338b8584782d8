//! The norm maps `GL_2n+1 → Sp_2n`, `GL_2n × G_m → SO_2n+1` and
//! `O^-_2n+2 → Sp_2n` on representing matrices.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{precondition, Error, Result};
use crate::exact_scalars::{LocalRing, Ring, SquareRing};
use crate::forms_matrices::{
    cayley_orth, cayley_sp, j_matrix, j_prime, orthogonal_isometry, pm0_decomposition, preserves, so_sp_shift,
    spinor_norm, split_fixed_space, symplectic_normal_form, SplitMode,
};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    A2n,
    B,
    D,
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a2n" | "a" => Ok(Kind::A2n),
            "b" | "bseries" => Ok(Kind::B),
            "d" | "dseries" => Ok(Kind::D),
            other => Err(Error::Parse(format!("unknown kind {other:?}"))),
        }
    }
}

/// A representative `h` (with the scalar `a` for the `B` series).
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedRep<E> {
    pub kind: Kind,
    pub h: Matrix<E>,
    pub a: Option<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> TwistedRep<E> {
    pub fn to_json<R: Ring<Elem = E>>(&self, r: &R) -> Value {
        let mut v = json!({ "kind": self.kind, "h": self.h.to_json(r) });
        if let Some(a) = &self.a {
            v["a"] = r.to_json(a);
        }
        v
    }

    pub fn from_json<R: Ring<Elem = E>>(r: &R, v: &Value) -> Result<Self> {
        let kind: Kind = serde_json::from_value(v.get("kind").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("kind: {e}")))?;
        let h = Matrix::from_json(r, v.get("h").ok_or_else(|| Error::Parse("missing h".into()))?)?;
        let a = match v.get("a") {
            Some(x) if !x.is_null() => Some(r.from_json(x)?),
            _ => None,
        };
        Ok(TwistedRep { kind, h, a })
    }
}

/// Image class of a norm map with the data read off on the way.
#[derive(Clone, Debug)]
pub struct NormResult<E> {
    pub kind: Kind,
    /// Representative in `Sp(J_2n)` or `SO(J_2n+1)`.
    pub target: Matrix<E>,
    /// `[g]` for `A2n`, `[r]` for `B`, `[r+, r-]` for `D`.
    pub ranks: Vec<usize>,
    /// Discriminant classes: `q+` for `A2n`, `q*` for `B`, `(q+, q-)` for `D`.
    pub classes: Vec<E>,
    pub spinor_norm: Option<E>,
    /// `μ = det(h)·a²`.
    pub mu: Option<E>,
    /// Named intermediate matrices (bases, forms) of the construction.
    pub transcript: Vec<(String, Matrix<E>)>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> NormResult<E> {
    pub fn to_json<R: Ring<Elem = E>>(&self, r: &R) -> Value {
        let opt = |x: &Option<E>| x.as_ref().map(|v| r.to_json(v)).unwrap_or(Value::Null);
        json!({
            "kind": self.kind,
            "target": self.target.to_json(r),
            "ranks": self.ranks,
            "classes": self.classes.iter().map(|c| r.to_json(c)).collect::<Vec<_>>(),
            "spinor_norm": opt(&self.spinor_norm),
            "mu": opt(&self.mu),
            "transcript": self.transcript.iter().map(|(k, m)| json!({ "name": k, "matrix": m.to_json(r) })).collect::<Vec<_>>(),
        })
    }
}

fn det_class<R: SquareRing>(r: &R, m: &Matrix<R::Elem>) -> Result<R::Elem> {
    r.class_rep(&m.det(r))
}

/// Places a `2g × 2g` block on the outer coordinates `0..g, 2n-g..2n` of
/// the identity of size `2n`.
pub fn embed_outer<R: Ring>(r: &R, n2: usize, c: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let g = c.rows() / 2;
    let idx: Vec<usize> = (0..g).chain(n2 - g..n2).collect();
    let mut out = Matrix::identity(r, n2);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            out.set(i, j, c.get(a, b).clone());
        }
    }
    out
}

/// `N(h) = 1_{2(n-g)} × C(Q*)` for `h ∈ GL_2n+1(R)`.
pub fn norm_a2n<R: SquareRing>(r: &R, h: &Matrix<R::Elem>) -> Result<NormResult<R::Elem>> {
    let m = h.rows();
    if !h.is_square() || m % 2 == 0 {
        return precondition(format!("A2n needs an odd square matrix, got {}x{}", h.rows(), h.cols()));
    }
    let d = pm0_decomposition(r, h)?;
    let star = d.star_sp();
    let p_star = d.p.gram_on(r, &star);
    let q_star = d.q.gram_on(r, &star);
    let s = symplectic_normal_form(r, &p_star)?;
    let qq = s.transpose().mul(r, &q_star).mul(r, &s);
    let c = cayley_sp(r, &qq, &j_matrix(r, qq.rows()))?;
    let target = embed_outer(r, m - 1, &c);
    if !preserves(r, &target, &j_matrix(r, m - 1)) {
        return Err(Error::Domain("norm target is not symplectic".into()));
    }
    let classes = vec![det_class(r, &d.q_plus)?];
    Ok(NormResult {
        kind: Kind::A2n,
        target,
        ranks: vec![star.cols() / 2],
        classes,
        spinor_norm: None,
        mu: None,
        transcript: vec![("basis_pm0".into(), d.basis()), ("symplectic_basis".into(), star.mul(r, &s)), ("Q_star".into(), qq)],
    })
}

/// `N(h, a) = j(C̃(p'*), 1_{2(n-r)+1})` in `SO(J_2n+1)`, with the spinor
/// norm of the target and `μ = det(h)·a²`.
pub fn norm_b<R: LocalRing>(r: &R, h: &Matrix<R::Elem>, a: &R::Elem) -> Result<NormResult<R::Elem>> {
    let m = h.rows();
    if !h.is_square() || m % 2 != 0 || m == 0 {
        return precondition(format!("B series needs an even square matrix, got {}x{}", h.rows(), h.cols()));
    }
    if !r.is_unit(a) {
        return precondition("the scalar a must be a unit");
    }
    let n = m / 2;
    let d = pm0_decomposition(r, h)?;
    let star = d.star_orth();
    let q_star = d.q.gram_on(r, &star);
    let p_star = d.p.gram_on(r, &star);
    let rr = star.cols() / 2;
    let c = cayley_orth(r, &p_star, &q_star)?;
    let eps = det_class(r, &q_star)?;
    let q_minus = j_matrix(r, 2 * (n - rr) + 1).scale(r, &eps);
    let big = Matrix::block_diag(r, &[&q_star, &q_minus]);
    let jj = j_matrix(r, m + 1);
    let t = orthogonal_isometry(r, &jj, &big)?;
    let model = Matrix::block_diag(r, &[&c, &Matrix::identity(r, q_minus.rows())]);
    let target = t.mul(r, &model).mul(r, &t.inverse(r)?);
    if !preserves(r, &target, &jj) || !r.is_one(&target.det(r)) {
        return Err(Error::Domain("norm target is not in SO(J)".into()));
    }
    let spinor = spinor_norm(r, &jj, &target)?;
    let mu = r.mul(&h.det(r), &r.mul(a, a));
    Ok(NormResult {
        kind: Kind::B,
        target,
        ranks: vec![rr],
        classes: vec![eps],
        spinor_norm: Some(spinor),
        mu: Some(mu),
        transcript: vec![("basis_pm0".into(), d.basis()), ("isometry".into(), t), ("q_star".into(), q_star)],
    })
}

/// `N(b) = id × -id × b*` on `J_2r+ ⊕ J_2r- ⊕ p*`, carried to `J_2n`.
pub fn norm_d<R: SquareRing>(r: &R, b: &Matrix<R::Elem>) -> Result<NormResult<R::Elem>> {
    let m = b.rows();
    if !b.is_square() || m % 2 != 0 || m < 4 {
        return precondition(format!("D series needs an even square matrix of size >= 4, got {}x{}", b.rows(), b.cols()));
    }
    if !r.equal(&b.det(r), &r.from_i64(-1)) {
        return precondition("D series needs det b = -1");
    }
    let jp = j_prime(r, m)?;
    let s = split_fixed_space(r, b, &jp, SplitMode::PlusMinus)?;
    let (np, nm) = (s.plus.cols(), s.minus.cols());
    if np % 2 != 1 || nm % 2 != 1 {
        return Err(Error::Domain(format!("ranks of N+ and N- should be odd, got {np} and {nm}")));
    }
    let p_star = so_sp_shift(r, &s.b_star, &s.gram_star)?;
    let (rp, rm) = ((np - 1) / 2, (nm - 1) / 2);
    let form = Matrix::block_diag(r, &[&j_matrix(r, 2 * rp), &j_matrix(r, 2 * rm), &p_star]);
    let beta = Matrix::block_diag(
        r,
        &[&Matrix::identity(r, 2 * rp), &Matrix::identity(r, 2 * rm).neg(r), &s.b_star],
    );
    let sn = symplectic_normal_form(r, &form)?;
    let target = sn.inverse(r)?.mul(r, &beta).mul(r, &sn);
    if !preserves(r, &target, &j_matrix(r, m - 2)) {
        return Err(Error::Domain("norm target is not symplectic".into()));
    }
    Ok(NormResult {
        kind: Kind::D,
        target,
        ranks: vec![rp, rm],
        classes: vec![det_class(r, &s.gram_plus)?, det_class(r, &s.gram_minus)?],
        spinor_norm: None,
        mu: None,
        transcript: vec![
            ("basis_split".into(), s.basis()),
            ("q_star".into(), s.gram_star.clone()),
            ("p_star".into(), p_star),
            ("symplectic_basis".into(), sn),
        ],
    })
}

/// Dispatch on the kind of a representative.
pub fn norm<R: LocalRing>(r: &R, rep: &TwistedRep<R::Elem>) -> Result<NormResult<R::Elem>> {
    match rep.kind {
        Kind::A2n => norm_a2n(r, &rep.h),
        Kind::B => norm_b(r, &rep.h, rep.a.as_ref().unwrap_or(&r.one())),
        Kind::D => norm_d(r, &rep.h),
    }
}
