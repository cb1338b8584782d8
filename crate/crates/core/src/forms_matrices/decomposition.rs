//! The `M+ ⊕ M- ⊕ M0` decomposition of `h ∈ GL_n`, eigenlattices of
//! semisimple elements, fixed-space splittings of isometries and the shape
//! of twisted centralizers.

use serde::{Deserialize, Serialize};

use super::forms::{left_norm, split_parts};
use crate::error::{domain, Error, Result};
use crate::exact_scalars::{Cyclotomic, CyclotomicField, LocalRing, Ring};
use crate::linalg::Matrix;

/// Bases (as columns) of `M+ = ker p`, `M- = ker q` and
/// `M0 = (M+)^{⊥q} ∩ (M-)^{⊥p}`, with the restricted forms.
#[derive(Clone, Debug)]
pub struct Pm0<E> {
    pub q: Matrix<E>,
    pub p: Matrix<E>,
    pub plus: Matrix<E>,
    pub minus: Matrix<E>,
    pub zero: Matrix<E>,
    pub q_plus: Matrix<E>,
    pub p_minus: Matrix<E>,
    pub q_zero: Matrix<E>,
    pub p_zero: Matrix<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Pm0<E> {
    /// Basis `[M+ | M- | M0]` of the whole module.
    pub fn basis(&self) -> Matrix<E> {
        Matrix::hstack(&[&self.plus, &self.minus, &self.zero]).expect("same row count")
    }

    /// Basis `[M- | M0]` of `M_*`, the part carrying a nondegenerate `p`.
    pub fn star_sp(&self) -> Matrix<E> {
        Matrix::hstack(&[&self.minus, &self.zero]).expect("same row count")
    }

    /// Basis `[M+ | M0]`, the part carrying a nondegenerate `q`.
    pub fn star_orth(&self) -> Matrix<E> {
        Matrix::hstack(&[&self.plus, &self.zero]).expect("same row count")
    }

    pub fn ranks(&self) -> (usize, usize, usize) {
        (self.plus.cols(), self.minus.cols(), self.zero.cols())
    }
}

pub(crate) fn stack_rows<R: Ring>(r: &R, n: usize, blocks: &[&Matrix<R::Elem>]) -> Matrix<R::Elem> {
    let rows: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = Matrix::zeros(r, rows, n);
    let mut at = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..n {
                out.set(at + i, j, b.get(i, j).clone());
            }
        }
        at += b.rows();
    }
    out
}

fn require_unimodular<R: Ring>(r: &R, m: &Matrix<R::Elem>, what: &str) -> Result<()> {
    if m.rows() > 0 && !r.is_unit(&m.det(r)) {
        return domain(format!("not R-Θ-semisimple: {what} is not unimodular"));
    }
    Ok(())
}

/// Kernel of the form pairing against the columns of `a` and `b`.
pub(crate) fn orthogonal_complement<R: Ring>(
    r: &R,
    n: usize,
    parts: &[(&Matrix<R::Elem>, &Matrix<R::Elem>)],
) -> Result<Matrix<R::Elem>> {
    let rows: Vec<Matrix<R::Elem>> = parts.iter().map(|(basis, form)| basis.transpose().mul(r, form)).collect();
    let refs: Vec<&Matrix<R::Elem>> = rows.iter().collect();
    stack_rows(r, n, &refs).kernel(r)
}

pub fn pm0_decomposition<R: Ring>(r: &R, h: &Matrix<R::Elem>) -> Result<Pm0<R::Elem>> {
    let n = h.rows();
    let s = split_parts(r, h)?;
    let plus = s.p.kernel(r)?;
    let minus = s.q.kernel(r)?;
    let zero = orthogonal_complement(r, n, &[(&plus, &s.q), (&minus, &s.p)])?;
    let d = Pm0 {
        q_plus: s.q.gram_on(r, &plus),
        p_minus: s.p.gram_on(r, &minus),
        q_zero: s.q.gram_on(r, &zero),
        p_zero: s.p.gram_on(r, &zero),
        q: s.q,
        p: s.p,
        plus,
        minus,
        zero,
    };
    require_unimodular(r, &d.q_plus, "q on M+")?;
    require_unimodular(r, &d.p_minus, "p on M-")?;
    require_unimodular(r, &d.q_zero, "q on M0")?;
    require_unimodular(r, &d.p_zero, "p on M0")?;
    let b = d.basis();
    if b.cols() != n || !r.is_unit(&b.det(r)) {
        return domain("not R-Θ-semisimple: M+ ⊕ M- ⊕ M0 is not the whole module");
    }
    Ok(d)
}

/// Eigenvalues of a semisimple `g` with their eigenlattices `M'_λ`.
#[derive(Clone, Debug)]
pub struct EigenSplit<E> {
    pub eigenvalues: Vec<E>,
    pub lattices: Vec<Matrix<E>>,
}

impl<E: Clone> EigenSplit<E> {
    pub fn ranks(&self) -> Vec<usize> {
        self.lattices.iter().map(|l| l.cols()).collect()
    }
}

pub fn eval_poly<R: Ring>(r: &R, coeffs_high_first: &[R::Elem], x: &R::Elem) -> R::Elem {
    coeffs_high_first.iter().fold(r.zero(), |acc, c| r.add(&r.mul(&acc, x), c))
}

/// Split `g` along the candidates that are eigenvalues, using the
/// idempotents `χ_i(g) = Π_{j≠i} (g - λ_j)/(λ_i - λ_j)`.
pub fn eigenlattice_split<R: Ring>(r: &R, g: &Matrix<R::Elem>, candidates: &[R::Elem]) -> Result<EigenSplit<R::Elem>> {
    let n = g.rows();
    let cp = g.char_poly(r);
    let mut eig: Vec<R::Elem> = Vec::new();
    for c in candidates {
        if r.is_zero(&eval_poly(r, &cp, c)) && !eig.iter().any(|e| r.equal(e, c)) {
            eig.push(c.clone());
        }
    }
    let id = Matrix::identity(r, n);
    let mut lattices = Vec::with_capacity(eig.len());
    for (i, li) in eig.iter().enumerate() {
        let mut chi = id.clone();
        for (j, lj) in eig.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = r.sub(li, lj);
            if !r.is_unit(&d) {
                return Err(Error::NotUnit(format!(
                    "eigenvalues {} and {} are not distinct residually",
                    r.format(li),
                    r.format(lj)
                )));
            }
            let f = g.sub(r, &Matrix::scalar(r, n, lj)).scale(r, &r.inv(&d)?);
            chi = chi.mul(r, &f);
        }
        let l = chi.image(r)?;
        if !g.mul(r, &l).equal(r, &l.scale(r, li)) {
            return domain("not semisimple: idempotent image is not an eigenlattice");
        }
        lattices.push(l);
    }
    let total: usize = lattices.iter().map(|l| l.cols()).sum();
    if total != n {
        return domain(format!("not semisimple over the given eigenvalues: eigenlattices span rank {total} of {n}"));
    }
    Ok(EigenSplit { eigenvalues: eig, lattices })
}

/// All `q - 1` Teichmüller roots of unity of a local ring.
pub fn teichmuller_roots<R: LocalRing>(r: &R) -> Vec<R::Elem> {
    let g = r.teichmuller_generator();
    let mut out = Vec::new();
    let mut x = r.one();
    for _ in 0..r.residue_size() - 1 {
        out.push(x.clone());
        x = r.mul(&x, &g);
    }
    out
}

/// `±ζ^k` in `Q(ζ_m)`.
pub fn cyclotomic_roots(f: &CyclotomicField, m: u32) -> Vec<Cyclotomic> {
    let mut out = Vec::new();
    for k in 0..m as i64 {
        let z = f.zeta(k);
        out.push(f.neg(&z));
        out.push(z);
    }
    out
}

/// Eigenlattices of `N_l(h)` are `b_h`-orthogonal unless `λ μ = 1`.
pub fn eigen_orthogonality<R: Ring>(r: &R, h: &Matrix<R::Elem>, split: &EigenSplit<R::Elem>) -> bool {
    let k = split.eigenvalues.len();
    for i in 0..k {
        for j in 0..k {
            let prod = r.mul(&split.eigenvalues[i], &split.eigenvalues[j]);
            if r.is_one(&prod) {
                continue;
            }
            if !split.lattices[i].transpose().mul(r, h).mul(r, &split.lattices[j]).is_zero(r) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// `N = N_1 ⊕ N_*` with `N_1 = ker(b - 1)`.
    Fixed,
    /// `N = N_+ ⊕ N_- ⊕ N_*` with `N_± = ker(b ∓ 1)`.
    PlusMinus,
}

/// Splitting of an isometry `b` of a unimodular form along its `±1`
/// eigenspaces.
#[derive(Clone, Debug)]
pub struct FixedSplit<E> {
    pub plus: Matrix<E>,
    /// Empty in [`SplitMode::Fixed`].
    pub minus: Matrix<E>,
    pub star: Matrix<E>,
    pub gram_plus: Matrix<E>,
    pub gram_minus: Matrix<E>,
    pub gram_star: Matrix<E>,
    /// `b` restricted to `N_*` in the basis `star`.
    pub b_star: Matrix<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> FixedSplit<E> {
    pub fn basis(&self) -> Matrix<E> {
        Matrix::hstack(&[&self.plus, &self.minus, &self.star]).expect("same row count")
    }
}

pub fn split_fixed_space<R: Ring>(
    r: &R,
    b: &Matrix<R::Elem>,
    form: &Matrix<R::Elem>,
    mode: SplitMode,
) -> Result<FixedSplit<R::Elem>> {
    let n = b.rows();
    if !super::forms::preserves(r, b, form) {
        return domain("b does not preserve the form");
    }
    let id = Matrix::identity(r, n);
    let plus = b.sub(r, &id).kernel(r)?;
    let minus = match mode {
        SplitMode::Fixed => Matrix::zeros(r, n, 0),
        SplitMode::PlusMinus => b.add(r, &id).kernel(r)?,
    };
    let star = orthogonal_complement(r, n, &[(&plus, form), (&minus, form)])?;
    let out = FixedSplit {
        gram_plus: form.gram_on(r, &plus),
        gram_minus: form.gram_on(r, &minus),
        gram_star: form.gram_on(r, &star),
        b_star: b.restrict_to(r, &star)?,
        plus,
        minus,
        star,
    };
    require_unimodular(r, &out.gram_plus, "form on N_+")?;
    require_unimodular(r, &out.gram_minus, "form on N_-")?;
    require_unimodular(r, &out.gram_star, "form on N_*")?;
    let k = out.star.cols();
    let ik = Matrix::identity(r, k);
    if k > 0 && !r.is_unit(&out.b_star.sub(r, &ik).det(r)) {
        return domain("b - 1 is not invertible on N_*");
    }
    if mode == SplitMode::PlusMinus && k > 0 && !r.is_unit(&out.b_star.add(r, &ik).det(r)) {
        return domain("b + 1 is not invertible on N_*");
    }
    let all = out.basis();
    if all.cols() != n || !r.is_unit(&all.det(r)) {
        return domain("eigenspaces and N_* do not span the module");
    }
    Ok(out)
}

/// `Cent(h) ≅ O(q+) × Sp(p-) × Π GL(m_λ)` with one `GL` per pair
/// `{λ, λ⁻¹}` of eigenvalues of `N_l(h)` on `M0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerShape {
    pub orthogonal_rank: usize,
    pub symplectic_rank: usize,
    pub gl_ranks: Vec<usize>,
}

impl CentralizerShape {
    /// Dimension as an algebraic group.
    pub fn dimension(&self) -> usize {
        let o = self.orthogonal_rank;
        let s = self.symplectic_rank;
        o * o.saturating_sub(1) / 2 + s * (s + 1) / 2 + self.gl_ranks.iter().map(|m| m * m).sum::<usize>()
    }

    /// Factor names; `special` gives the `SL` variant with `SO(q+)`.
    pub fn group_names(&self, special: bool) -> Vec<String> {
        let mut out = Vec::new();
        if self.orthogonal_rank > 0 {
            out.push(format!("{}({})", if special { "SO" } else { "O" }, self.orthogonal_rank));
        }
        if self.symplectic_rank > 0 {
            out.push(format!("Sp({})", self.symplectic_rank));
        }
        out.extend(self.gl_ranks.iter().map(|m| format!("Gl({m})")));
        out
    }
}

/// Shape of `Cent(h)`; `candidates` must contain the eigenvalues of
/// `N_l(h)` (so `h` may have to be embedded into a splitting ring first).
pub fn centralizer_shape<R: Ring>(r: &R, h: &Matrix<R::Elem>, candidates: &[R::Elem]) -> Result<CentralizerShape> {
    let d = pm0_decomposition(r, h)?;
    let mut gl_ranks = Vec::new();
    if d.zero.cols() > 0 {
        let b0 = left_norm(r, h)?.restrict_to(r, &d.zero)?;
        let split = eigenlattice_split(r, &b0, candidates)?;
        let k = split.eigenvalues.len();
        let mut used = vec![false; k];
        for i in 0..k {
            if used[i] {
                continue;
            }
            let inv = r.inv(&split.eigenvalues[i])?;
            let j = (0..k)
                .find(|&j| !used[j] && j != i && r.equal(&split.eigenvalues[j], &inv))
                .ok_or_else(|| Error::Domain("eigenvalue without inverse partner on M0".into()))?;
            used[i] = true;
            used[j] = true;
            if split.lattices[i].cols() != split.lattices[j].cols() {
                return domain("λ and λ⁻¹ eigenlattices differ in rank");
            }
            gl_ranks.push(split.lattices[i].cols());
        }
        gl_ranks.sort_unstable();
    }
    Ok(CentralizerShape { orthogonal_rank: d.plus.cols(), symplectic_rank: d.minus.cols(), gl_ranks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalars::{Zp, Zq};
    use crate::forms_matrices::forms::j_matrix;

    #[test]
    fn eigenlattices_of_order_four() {
        let r = Zp::new(5, 6).unwrap();
        let roots = teichmuller_roots(&r);
        let i = roots.iter().find(|x| r.equal(&r.mul(x, x), &r.from_i64(-1))).unwrap().clone();
        let g = Matrix::diagonal(&r, &[i.clone(), r.inv(&i).unwrap()]);
        let s = eigenlattice_split(&r, &g, &roots).unwrap();
        assert_eq!(s.ranks(), vec![1, 1]);
    }

    #[test]
    fn order_three_needs_the_extension() {
        let zp = Zp::new(5, 6).unwrap();
        let g = Matrix::from_i64(&zp, &[vec![0, -1], vec![1, -1]]);
        assert!(eigenlattice_split(&zp, &g, &teichmuller_roots(&zp)).is_err());
        let zq = Zq::unramified(5, 6, 2).unwrap();
        let ge = g.map(|x| zq.embed(x));
        let s = eigenlattice_split(&zq, &ge, &teichmuller_roots(&zq)).unwrap();
        assert_eq!(s.ranks(), vec![1, 1]);
        for l in &s.eigenvalues {
            assert!(zq.is_one(&zq.pow(l, 3)) && !zq.is_one(l));
        }
    }

    #[test]
    fn a4_case_three_centralizer() {
        // s = diag(i, 1, 1, 1, -i), h = s J_5
        let r = Zp::new(5, 6).unwrap();
        let roots = teichmuller_roots(&r);
        let i = roots.iter().find(|x| r.equal(&r.mul(x, x), &r.from_i64(-1))).unwrap().clone();
        let s = Matrix::diagonal(&r, &[i.clone(), r.one(), r.one(), r.one(), r.neg(&i)]);
        let h = s.mul(&r, &j_matrix(&r, 5));
        let d = pm0_decomposition(&r, &h).unwrap();
        assert_eq!(d.ranks(), (3, 2, 0));
        let shape = centralizer_shape(&r, &h, &roots).unwrap();
        assert_eq!(shape.group_names(true), vec!["SO(3)".to_string(), "Sp(2)".to_string()]);
    }
}
