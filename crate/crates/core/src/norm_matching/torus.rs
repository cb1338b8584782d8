//! Torus coordinates of semisimple matrices whose eigenvalues are
//! Teichmüller roots, and the explicit norm formulas on diagonal tori.

use crate::error::{domain, Result};
use crate::exact_scalars::{LocalRing, PadicInt};
use crate::forms_matrices::{eigenlattice_split, teichmuller_roots};
use crate::linalg::Matrix;

/// Eigenvalue exponents `e` (eigenvalue `ζ^e`, `ζ` the Teichmüller
/// generator) of `m`, listed with multiplicity.
pub fn teichmuller_spectrum<R: LocalRing>(r: &R, m: &Matrix<R::Elem>) -> Result<Vec<i64>> {
    let roots = teichmuller_roots(r);
    let split = eigenlattice_split(r, m, &roots)?;
    let mut out = Vec::with_capacity(m.rows());
    for (lambda, l) in split.eigenvalues.iter().zip(&split.lattices) {
        let e = roots.iter().position(|x| r.equal(x, lambda)).expect("eigenvalue among the candidates");
        out.extend(std::iter::repeat_n(e as i64, l.cols()));
    }
    Ok(out)
}

/// Pairs a multiset of exponents closed under `e ↦ -e` into one exponent
/// per pair. With `odd`, one exponent `0` is dropped first.
pub fn pair_exponents(order: u64, spectrum: &[i64], odd: bool) -> Result<Vec<i64>> {
    let m = order as i64;
    let mut counts = std::collections::BTreeMap::<i64, usize>::new();
    for e in spectrum {
        *counts.entry(e.rem_euclid(m)).or_default() += 1;
    }
    if odd {
        match counts.get_mut(&0) {
            Some(c) if *c > 0 => *c -= 1,
            _ => return domain("no eigenvalue 1 to drop"),
        }
    }
    let mut out = Vec::new();
    for (&e, &c) in &counts {
        let neg = (-e).rem_euclid(m);
        if e == neg {
            if c % 2 != 0 {
                return domain(format!("eigenvalue z^{e} has odd multiplicity"));
            }
            out.extend(std::iter::repeat_n(e, c / 2));
        } else if e < neg {
            if counts.get(&neg).copied().unwrap_or(0) != c {
                return domain(format!("eigenvalues z^{e} and z^{neg} have different multiplicities"));
            }
            out.extend(std::iter::repeat_n(e, c));
        }
    }
    Ok(out)
}

/// `Sp_2n` torus coordinates of a symplectic matrix.
pub fn symplectic_coordinates<R: LocalRing>(r: &R, m: &Matrix<R::Elem>) -> Result<Vec<i64>> {
    pair_exponents(r.residue_size() - 1, &teichmuller_spectrum(r, m)?, false)
}

/// `SO_2n+1` torus coordinates of an odd orthogonal matrix.
pub fn odd_orthogonal_coordinates<R: LocalRing>(r: &R, m: &Matrix<R::Elem>) -> Result<Vec<i64>> {
    pair_exponents(r.residue_size() - 1, &teichmuller_spectrum(r, m)?, true)
}

/// `diag(t_1..t_{2n+1}) ↦ (t_i / t_{2n+2-i})_{i ≤ n}` on exponents.
pub fn formula_a2n(t: &[i64]) -> Vec<i64> {
    let m = t.len();
    (0..m / 2).map(|i| t[i] - t[m - 1 - i]).collect()
}

/// `diag(t_1..t_{2n}) ↦ (t_i / t_{2n+1-i})_{i ≤ n}` on exponents.
pub fn formula_b(t: &[i64]) -> Vec<i64> {
    formula_a2n(t)
}

/// `diag(t_1..t_{n+1}, …) ↦ (t_1..t_n)`.
pub fn formula_d(t: &[i64]) -> Vec<i64> {
    t[..t.len() - 1].to_vec()
}

/// The ratio formula of [`formula_a2n`]/[`formula_b`] on `p`-adic
/// coordinates of a full diagonal.
pub fn formula_ratio_padic(d: &[PadicInt]) -> Result<Vec<PadicInt>> {
    let m = d.len();
    (0..m / 2).map(|i| Ok(d[i].mul(&d[m - 1 - i].inv()?))).collect()
}
