//! Transfer of conjugacy and congruence from `F̄` to `𝒪_F = Z_p` for
//! `R`-semisimple elements.
//!
//! Eigenvalues are grouped into Frobenius orbits inside the quadratic
//! unramified extension. Each orbit is treated on its own:
//! `{±1}` by normal forms of the restricted form, a pair `O ≠ O⁻¹` by the
//! duality between the two eigenmodules, and a self-dual quadratic orbit by
//! Gram–Schmidt over `R[b]` with norm equations solved by Hensel lifting.

use serde::Serialize;

use super::decomposition::{eval_poly, pm0_decomposition, split_fixed_space, teichmuller_roots, SplitMode};
use super::forms::{
    axpy, columns_to_matrix, j_matrix, j_prime, left_norm, matrix_columns, orthogonal_diagonalize, orthogonal_isometry,
    orthogonal_normal_form, pair, preserves, scale_vec, symplectic_isometry, symplectic_normal_form,
};
use super::spinor::reflection;
use crate::error::{domain, Error, Result};
use crate::exact_scalars::{PadicInt, Ring, SquareRing, Zp, Zq};
use crate::linalg::Matrix;

type Mat = Matrix<PadicInt>;
type Vector = Vec<PadicInt>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferMode {
    /// `x2 = g⁻¹ x1 g` with `g ∈ Sp(J_2n)(R)`.
    SpConj,
    /// `x2 = ε · ᵗg x1 g` with `g ∈ GL_n(R)`.
    GlCongruence,
    /// As `GlCongruence` with `det g = 1`.
    GlCongruenceSl,
    /// `x2 = g⁻¹ x1 g` with `g ∈ SO(J'_{2n+2})(R)` for `x_i` of determinant `-1`.
    OEven,
}

#[derive(Clone, Debug)]
pub enum TransferOutcome {
    Conjugate { g: Mat },
    Congruent { g: Mat, epsilon: PadicInt },
    /// `x2` is conjugate to the companion `ι⁻¹ x1 ι`, not to `x1`.
    Companion { companion: Mat, g: Mat, classes_x1: (PadicInt, PadicInt), classes_x2: (PadicInt, PadicInt) },
}

impl TransferOutcome {
    pub fn g(&self) -> &Mat {
        match self {
            TransferOutcome::Conjugate { g } | TransferOutcome::Congruent { g, .. } | TransferOutcome::Companion { g, .. } => g,
        }
    }
}

/// A Frobenius orbit of eigenvalues, by its minimal polynomial over `Z_p`.
#[derive(Clone, Debug)]
struct Orbit {
    /// Monic, highest coefficient first.
    poly: Vec<PadicInt>,
    /// Index of the orbit of inverses.
    dual: usize,
    /// `λ + λ⁻¹` for self-dual quadratic orbits.
    trace: Option<PadicInt>,
}

fn orbits(r: &Zp, b: &Mat) -> Result<Vec<Orbit>> {
    let zq = Zq::unramified(r.p, r.k, 2)?;
    let be = b.map(|x| zq.embed(x));
    let cp = be.char_poly(&zq);
    let roots: Vec<_> = teichmuller_roots(&zq).into_iter().filter(|x| zq.is_zero(&eval_poly(&zq, &cp, x))).collect();
    let base = |x: &_| zq.as_base(x).ok_or_else(|| Error::Domain("coefficient outside Z_p".into()));
    let mut seen = vec![false; roots.len()];
    let mut reps = Vec::new();
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if seen[i] {
            continue;
        }
        let l = roots[i].clone();
        let f = zq.pow(&l, r.p as u128);
        seen[i] = true;
        let poly = if zq.equal(&f, &l) {
            vec![r.one(), r.neg(&base(&l)?)]
        } else {
            if let Some(j) = roots.iter().position(|x| zq.equal(x, &f)) {
                seen[j] = true;
            }
            vec![r.one(), r.neg(&base(&zq.add(&l, &f))?), base(&zq.mul(&l, &f))?]
        };
        reps.push(l);
        out.push(Orbit { poly, dual: usize::MAX, trace: None });
    }
    for i in 0..out.len() {
        let li = zq.inv(&reps[i])?;
        let j = (0..out.len())
            .find(|&j| {
                let c: Vec<_> = out[j].poly.iter().map(|x| zq.embed(x)).collect();
                zq.is_zero(&eval_poly(&zq, &c, &li))
            })
            .ok_or_else(|| Error::Domain("eigenvalue without inverse".into()))?;
        out[i].dual = j;
        if j == i && out[i].poly.len() == 3 {
            out[i].trace = Some(r.neg(&out[i].poly[1]));
        }
    }
    Ok(out)
}

fn poly_at(r: &Zp, poly: &[PadicInt], b: &Mat) -> Mat {
    let n = b.rows();
    let mut acc = Matrix::zeros(r, n, n);
    for c in poly {
        acc = acc.mul(r, b).add(r, &Matrix::scalar(r, n, c));
    }
    acc
}

fn apply(r: &Zp, m: &Mat, v: &[PadicInt]) -> Vector {
    (0..m.rows()).map(|i| r.sum(&(0..m.cols()).map(|j| r.mul(m.get(i, j), &v[j])).collect::<Vec<_>>())).collect()
}

/// True when the vectors span a direct summand of their rank.
fn independent(r: &Zp, vs: &[Vector]) -> bool {
    if vs.is_empty() {
        return true;
    }
    let m = Matrix::from_rows(vs.to_vec());
    match m.echelon(r, m.cols()) {
        Ok(e) => e.rank() == vs.len() && e.max_pivot_valuation == 0,
        Err(_) => false,
    }
}

/// Generators `a_j` of a module over `R[b]/(f)` of degree `d`, such that
/// `{b^k a_j}` is an `R`-basis.
fn module_generators(r: &Zp, b: &Mat, basis: &Mat, d: usize) -> Result<Vec<Vector>> {
    let mut gens: Vec<Vector> = Vec::new();
    let mut span: Vec<Vector> = Vec::new();
    for v in matrix_columns(basis) {
        let mut orbit = vec![v.clone()];
        for _ in 1..d {
            let next = apply(r, b, orbit.last().expect("nonempty"));
            orbit.push(next);
        }
        let mut trial = span.clone();
        trial.extend(orbit.iter().cloned());
        if independent(r, &trial) {
            span = trial;
            gens.push(v);
        }
    }
    if span.len() != basis.cols() {
        return domain("eigenmodule is not free over the orbit ring");
    }
    Ok(gens)
}

/// Some `(c0, c1)` with `c0² + t c0 c1 + c1² = u`.
fn solve_norm(r: &Zp, t: &PadicInt, u: &PadicInt) -> Result<(PadicInt, PadicInt)> {
    let norm = |a: &PadicInt, b: &PadicInt| r.add(&r.add(&r.mul(a, a), &r.mul(t, &r.mul(a, b))), &r.mul(b, b));
    let p = r.p as i128;
    for x in 0..p {
        for y in 0..p {
            let (mut a, mut b) = (r.elem(x), r.elem(y));
            if r.sub(&norm(&a, &b), u).residue_mod_p() != 0 {
                continue;
            }
            // the gradient of the norm form is a unit at residual solutions
            for _ in 0..=r.k {
                let e = r.sub(&norm(&a, &b), u);
                if r.is_zero(&e) {
                    break;
                }
                let da = r.add(&r.mul(&r.from_i64(2), &a), &r.mul(t, &b));
                let db = r.add(&r.mul(&r.from_i64(2), &b), &r.mul(t, &a));
                if r.is_unit(&da) {
                    a = r.sub(&a, &r.div(&e, &da)?);
                } else if r.is_unit(&db) {
                    b = r.sub(&b, &r.div(&e, &db)?);
                } else {
                    break;
                }
            }
            if r.is_zero(&r.sub(&norm(&a, &b), u)) {
                return Ok((a, b));
            }
        }
    }
    domain("norm equation has no solution")
}

/// Orthonormal `R[b]`-basis of a self-dual quadratic orbit module: each
/// generator `v` has invariant `B(v, v) = 1` (symmetric) or `B(v, bv) = 1`
/// (alternating), and distinct `R[b] v` are orthogonal.
fn hermitian_basis(r: &Zp, form: &Mat, b: &Mat, basis: &Mat, t: &PadicInt, symmetric: bool) -> Result<Vec<Vector>> {
    let mut gens = module_generators(r, b, basis, 2)?;
    let inv = |v: &Vector| -> PadicInt {
        if symmetric {
            pair(r, form, v, v)
        } else {
            pair(r, form, v, &apply(r, b, v))
        }
    };
    let mut out = Vec::new();
    while !gens.is_empty() {
        let mut pick = (0..gens.len()).find(|&j| r.is_unit(&inv(&gens[j])));
        if pick.is_none() {
            'search: for j in 0..gens.len() {
                for k in 0..gens.len() {
                    if k == j {
                        continue;
                    }
                    for shift in [false, true] {
                        let w = if shift { apply(r, b, &gens[k]) } else { gens[k].clone() };
                        let v = axpy(r, &gens[j], &r.one(), &w);
                        if r.is_unit(&inv(&v)) {
                            gens[j] = v;
                            pick = Some(j);
                            break 'search;
                        }
                    }
                }
            }
        }
        let j = pick.ok_or_else(|| Error::Domain("form is not unimodular on an orbit module".into()))?;
        let v0 = gens.remove(j);
        let (c0, c1) = solve_norm(r, t, &r.inv(&inv(&v0))?)?;
        let v = axpy(r, &scale_vec(r, &c0, &v0), &c1, &apply(r, b, &v0));
        let bv = apply(r, b, &v);
        let g2 = Matrix::from_rows(vec![
            vec![pair(r, form, &v, &v), pair(r, form, &bv, &v)],
            vec![pair(r, form, &v, &bv), pair(r, form, &bv, &bv)],
        ]);
        let g2inv = g2.inverse(r)?;
        for w in gens.iter_mut() {
            let rhs = [pair(r, form, w, &v), pair(r, form, w, &bv)];
            let a0 = r.add(&r.mul(g2inv.get(0, 0), &rhs[0]), &r.mul(g2inv.get(0, 1), &rhs[1]));
            let a1 = r.add(&r.mul(g2inv.get(1, 0), &rhs[0]), &r.mul(g2inv.get(1, 1), &rhs[1]));
            *w = axpy(r, &axpy(r, w, &r.neg(&a0), &v), &r.neg(&a1), &bv);
        }
        out.push(v);
    }
    Ok(out)
}

/// `g` with `ᵗg B1 g = B2` and `g b2 = b1 g`, for `R`-semisimple isometries
/// `b_i` of unimodular forms `B_i` that are either both symmetric or both
/// alternating. Fails with an obstruction when the `±1` parts of symmetric
/// forms have different discriminants.
pub fn equivariant_isometry(r: &Zp, f1: &Mat, b1: &Mat, f2: &Mat, b2: &Mat) -> Result<Mat> {
    let n = f1.rows();
    let symmetric = f1.is_symmetric(r);
    if symmetric != f2.is_symmetric(r) || (!symmetric && !(f1.is_alternating(r) && f2.is_alternating(r))) {
        return domain("forms must both be symmetric or both alternating");
    }
    if !preserves(r, b1, f1) || !preserves(r, b2, f2) {
        return domain("b_i does not preserve B_i");
    }
    let orb = orbits(r, b1)?;
    let mut cols1: Vec<Vector> = Vec::new();
    let mut cols2: Vec<Vector> = Vec::new();
    let mut done = vec![false; orb.len()];
    let mut covered = 0;
    for i in 0..orb.len() {
        if done[i] {
            continue;
        }
        let o = &orb[i];
        let k1 = poly_at(r, &o.poly, b1).kernel(r)?;
        let k2 = poly_at(r, &o.poly, b2).kernel(r)?;
        if k1.cols() != k2.cols() {
            return domain("not conjugate over the algebraic closure: eigenvalue multiplicities differ");
        }
        let deg = o.poly.len() - 1;
        done[i] = true;
        if o.dual == i && deg == 1 {
            let (g1, g2) = (f1.gram_on(r, &k1), f2.gram_on(r, &k2));
            let (s1, s2) = if symmetric {
                let last = r.class_rep(&g1.det(r))?;
                (orthogonal_normal_form(r, &g1, &last)?, orthogonal_normal_form(r, &g2, &last)?)
            } else {
                (symplectic_normal_form(r, &g1)?, symplectic_normal_form(r, &g2)?)
            };
            cols1.extend(matrix_columns(&k1.mul(r, &s1)));
            cols2.extend(matrix_columns(&k2.mul(r, &s2)));
            covered += k1.cols();
        } else if o.dual == i {
            let t = o.trace.clone().expect("self-dual quadratic orbit");
            for (v1, v2) in hermitian_basis(r, f1, b1, &k1, &t, symmetric)?
                .into_iter()
                .zip(hermitian_basis(r, f2, b2, &k2, &t, symmetric)?)
            {
                cols1.push(apply(r, b1, &v1));
                cols1.push(v1);
                cols2.push(apply(r, b2, &v2));
                cols2.push(v2);
            }
            covered += k1.cols();
        } else {
            let j = o.dual;
            done[j] = true;
            let d1 = poly_at(r, &orb[j].poly, b1).kernel(r)?;
            let d2 = poly_at(r, &orb[j].poly, b2).kernel(r)?;
            let a1 = module_generators(r, b1, &k1, deg)?;
            let mut a2 = module_generators(r, b2, &k2, deg)?;
            if a1.len() != a2.len() {
                return domain("orbit modules of different rank");
            }
            a2.truncate(a1.len());
            for (a, b, f, d, cols) in [(&a1, b1, f1, &d1, &mut cols1), (&a2, b2, f2, &d2, &mut cols2)] {
                let mut base = Vec::new();
                for v in a {
                    let mut x = v.clone();
                    for _ in 0..deg {
                        base.push(x.clone());
                        x = apply(r, b, &x);
                    }
                }
                let am = columns_to_matrix(r, n, &base);
                let c = am.transpose().mul(r, f).mul(r, d);
                let dual = d.mul(r, &c.inverse(r)?);
                cols.extend(base);
                cols.extend(matrix_columns(&dual));
            }
            covered += k1.cols() + d1.cols();
        }
    }
    if covered != n {
        return Err(Error::Unsupported(
            "eigenvalues outside the quadratic unramified extension (or not semisimple)".into(),
        ));
    }
    let c1 = columns_to_matrix(r, n, &cols1);
    let c2 = columns_to_matrix(r, n, &cols2);
    let g = c1.mul(r, &c2.inverse(r)?);
    if !g.transpose().mul(r, f1).mul(r, &g).equal(r, f2) || !g.mul(r, b2).equal(r, &b1.mul(r, &g)) {
        return domain("assembled transfer failed verification");
    }
    Ok(g)
}

/// Discriminant classes `(Δ(q_+), Δ(q_-))` of the `±1` eigenspaces.
pub fn pm_classes(r: &Zp, form: &Mat, b: &Mat) -> Result<(PadicInt, PadicInt)> {
    let s = split_fixed_space(r, b, form, SplitMode::PlusMinus)?;
    let class = |m: &Mat| if m.rows() == 0 { Ok(r.one()) } else { r.class_rep(&m.det(r)) };
    Ok((class(&s.gram_plus)?, class(&s.gram_minus)?))
}

/// The companion `ι⁻¹ b ι` of `b ∈ O(form)`: the same element with both
/// `±1` forms scaled by a non-residue.
pub fn companion(r: &Zp, form: &Mat, b: &Mat) -> Result<Mat> {
    let s = split_fixed_space(r, b, form, SplitMode::PlusMinus)?;
    let eps = r.nonresidue();
    let modified = Matrix::block_diag(r, &[&s.gram_plus.scale(r, &eps), &s.gram_minus.scale(r, &eps), &s.gram_star]);
    let pinv = s.basis().inverse(r)?;
    let jmod = pinv.transpose().mul(r, &modified).mul(r, &pinv);
    let t = orthogonal_isometry(r, &jmod, form)?;
    Ok(t.inverse(r)?.mul(r, b).mul(r, &t))
}

fn det_minus_one_fix(r: &Zp, form: &Mat, b: &Mat) -> Result<Mat> {
    let s = split_fixed_space(r, b, form, SplitMode::PlusMinus)?;
    let space = if s.minus.cols() > 0 { &s.minus } else { &s.plus };
    if space.cols() == 0 {
        return Err(Error::Obstruction("no ±1 eigenvector to correct the determinant".into()));
    }
    let (basis, _) = orthogonal_diagonalize(r, &form.gram_on(r, space))?;
    let v = matrix_columns(&space.mul(r, &basis))[0].clone();
    reflection(r, form, &v)
}

pub fn integral_conjugacy_transfer(r: &Zp, x1: &Mat, x2: &Mat, mode: TransferMode) -> Result<TransferOutcome> {
    if x1.rows() != x2.rows() || !x1.is_square() || !x2.is_square() {
        return Err(Error::Dimension("transfer needs square matrices of equal size".into()));
    }
    let n = x1.rows();
    match mode {
        TransferMode::SpConj => {
            let j = j_matrix(r, n);
            if n % 2 != 0 {
                return domain("Sp needs even size");
            }
            Ok(TransferOutcome::Conjugate { g: equivariant_isometry(r, &j, x1, &j, x2)? })
        }
        TransferMode::OEven => {
            let j = j_prime(r, n)?;
            for x in [x1, x2] {
                if !preserves(r, x, &j) || !r.equal(&x.det(r), &r.from_i64(-1)) {
                    return domain("inputs must lie in O(J') with determinant -1");
                }
            }
            let c1 = pm_classes(r, &j, x1)?;
            let c2 = pm_classes(r, &j, x2)?;
            let same = r.equal(&c1.0, &c2.0);
            let base = if same { x1.clone() } else { companion(r, &j, x1)? };
            let mut g = equivariant_isometry(r, &j, &base, &j, x2)?;
            if !r.is_one(&g.det(r)) {
                g = g.mul(r, &det_minus_one_fix(r, &j, x2)?);
            }
            if same {
                Ok(TransferOutcome::Conjugate { g })
            } else {
                Ok(TransferOutcome::Companion { companion: base, g, classes_x1: c1, classes_x2: c2 })
            }
        }
        TransferMode::GlCongruence | TransferMode::GlCongruenceSl => {
            let special = mode == TransferMode::GlCongruenceSl;
            gl_congruence(r, x1, x2, special)
        }
    }
}

fn gl_congruence(r: &Zp, h1: &Mat, h2: &Mat, special: bool) -> Result<TransferOutcome> {
    let d1 = pm0_decomposition(r, h1)?;
    let d2 = pm0_decomposition(r, h2)?;
    if d1.ranks() != d2.ranks() {
        return domain("M+, M-, M0 ranks differ: not congruent over the algebraic closure");
    }
    let mut epsilon = r.one();
    if d1.plus.cols() > 0 {
        let ratio = r.div(&d2.q_plus.det(r), &d1.q_plus.det(r))?;
        if !r.is_square_unit(&ratio)? {
            if d1.plus.cols() % 2 == 0 {
                return Err(Error::Obstruction("q+ classes differ on a module of even rank".into()));
            }
            epsilon = ratio;
        }
    }
    let einv = r.inv(&epsilon)?;
    let h2s = h2.scale(r, &einv);
    let d2 = pm0_decomposition(r, &h2s)?;
    let mut g_plus = orthogonal_isometry(r, &d1.q_plus, &d2.q_plus)?;
    let g_minus = symplectic_isometry(r, &d1.p_minus, &d2.p_minus)?;
    let g_zero = if d1.zero.cols() > 0 {
        let b1 = left_norm(r, h1)?.restrict_to(r, &d1.zero)?;
        let b2 = left_norm(r, &h2s)?.restrict_to(r, &d2.zero)?;
        equivariant_isometry(r, &d1.p_zero, &b1, &d2.p_zero, &b2)?
    } else {
        Matrix::zeros(r, 0, 0)
    };
    let assemble = |gp: &Mat| -> Result<Mat> {
        let blocks = Matrix::block_diag(r, &[gp, &g_minus, &g_zero]);
        Ok(d1.basis().mul(r, &blocks).mul(r, &d2.basis().inverse(r)?))
    };
    let mut g = assemble(&g_plus)?;
    if special && !r.is_one(&g.det(r)) {
        if d1.plus.cols() == 0 {
            return Err(Error::Obstruction("no M+ to correct det g".into()));
        }
        let (basis, _) = orthogonal_diagonalize(r, &d1.q_plus)?;
        let v = matrix_columns(&basis)[0].clone();
        g_plus = reflection(r, &d1.q_plus, &v)?.mul(r, &g_plus);
        g = assemble(&g_plus)?;
        if !r.is_one(&g.det(r)) {
            return domain("det g is not ±1");
        }
    }
    if !g.transpose().mul(r, h1).mul(r, &g).equal(r, &h2s) {
        return domain("assembled congruence failed verification");
    }
    Ok(TransferOutcome::Congruent { g, epsilon })
}
