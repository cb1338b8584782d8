use num_traits::{One, ToPrimitive, Zero};

use super::datum::RootDatum;
use super::lattice::{self, IVec};
use crate::error::Result;
use crate::exact_scalars::{Rational, RationalField};
use crate::linalg::Matrix;

/// An isomorphism of based root data: `phi` on characters (rows), and the
/// induced bijection of simple roots.
#[derive(Clone, Debug, PartialEq)]
pub struct DatumIsomorphism {
    pub phi: Vec<IVec>,
    pub simple_map: Vec<usize>,
}

/// Permutations `σ` of simple roots with `C[i][j] = C'[σi][σj]`.
pub fn cartan_matchings(c: &[IVec], c2: &[IVec]) -> Vec<Vec<usize>> {
    let k = c.len();
    let mut out = Vec::new();
    if c2.len() != k {
        return out;
    }
    let mut sigma = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn rec(c: &[IVec], c2: &[IVec], sigma: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let i = sigma.len();
        if i == c.len() {
            out.push(sigma.clone());
            return;
        }
        for t in 0..c.len() {
            if used[t] || c2[t][t] != c[i][i] {
                continue;
            }
            let ok = (0..i).all(|j| c[i][j] == c2[t][sigma[j]] && c[j][i] == c2[sigma[j]][t]);
            if ok {
                used[t] = true;
                sigma.push(t);
                rec(c, c2, sigma, used, out);
                sigma.pop();
                used[t] = false;
            }
        }
    }
    rec(c, c2, &mut sigma, &mut used, &mut out);
    out
}

/// Search for an isomorphism `d -> d2` of based root data.
pub fn find_isomorphism(d: &RootDatum, d2: &RootDatum) -> Result<Option<DatumIsomorphism>> {
    if d.rank != d2.rank || d.simple.len() != d2.simple.len() || d.roots.len() != d2.roots.len() {
        return Ok(None);
    }
    let r = d.rank;
    let q = RationalField;
    let a = d.simple_roots();
    let ac = d.simple_coroots();
    let b = d2.simple_roots();
    let bc = d2.simple_coroots();
    for sigma in cartan_matchings(&d.cartan_matrix(), &d2.cartan_matrix()) {
        // Unknown phi[row][col] at index row * r + col.
        let mut eqs: Vec<IVec> = Vec::new();
        let mut rhs: Vec<i64> = Vec::new();
        for (i, &s) in sigma.iter().enumerate() {
            for row in 0..r {
                let mut e = vec![0; r * r];
                for col in 0..r {
                    e[row * r + col] = a[i][col];
                }
                eqs.push(e);
                rhs.push(b[s][row]);
            }
            for col in 0..r {
                let mut e = vec![0; r * r];
                for row in 0..r {
                    e[row * r + col] = bc[s][row];
                }
                eqs.push(e);
                rhs.push(ac[i][col]);
            }
        }
        let m = lattice::to_rational(&eqs);
        let rhs_m = Matrix::from_fn(rhs.len(), 1, |i, _| Rational::from_integer(rhs[i].into()));
        let Some(x0) = m.solve(&q, &rhs_m)? else { continue };
        let x0 = x0.column_vec(0);
        let kernel = m.kernel(&q)?;
        let free: Vec<Vec<Rational>> = (0..kernel.cols()).map(|j| primitive(&kernel.column_vec(j))).collect();
        for candidate in bounded_combinations(&x0, &free, 2) {
            if let Some(phi) = integral_matrix(&candidate, r) {
                if is_isomorphism(d, d2, &phi) {
                    return Ok(Some(DatumIsomorphism { phi, simple_map: sigma }));
                }
            }
        }
    }
    Ok(None)
}

fn primitive(v: &[Rational]) -> Vec<Rational> {
    use num_integer::Integer;
    let den = v.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<Rational> = v.iter().map(|x| x * Rational::from_integer(den.clone())).collect();
    let g = scaled.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x.numer()));
    if g.is_zero() {
        return scaled;
    }
    scaled.iter().map(|x| x / Rational::from_integer(g.clone())).collect()
}

/// `x0 + Σ t_i k_i` for integer `|t_i| <= bound` (just `x0` when no kernel).
fn bounded_combinations(x0: &[Rational], free: &[Vec<Rational>], bound: i64) -> Vec<Vec<Rational>> {
    let mut out = vec![x0.to_vec()];
    for k in free {
        let mut next = Vec::new();
        for base in &out {
            for t in -bound..=bound {
                let t = Rational::from_integer(t.into());
                next.push(base.iter().zip(k).map(|(x, y)| x + &t * y).collect());
            }
        }
        out = next;
        if out.len() > 100_000 {
            break;
        }
    }
    out
}

fn integral_matrix(x: &[Rational], r: usize) -> Option<Vec<IVec>> {
    let mut rows = vec![vec![0; r]; r];
    for (idx, v) in x.iter().enumerate() {
        if !v.is_integer() {
            return None;
        }
        rows[idx / r][idx % r] = v.to_integer().to_i64()?;
    }
    Some(rows)
}

/// `phi` is unimodular, maps roots onto roots and its transpose maps the
/// matching coroots back.
pub fn is_isomorphism(d: &RootDatum, d2: &RootDatum, phi: &[IVec]) -> bool {
    if lattice::det(phi).abs() != 1 {
        return false;
    }
    let phit = lattice::transpose(phi, d.rank);
    for (k, root) in d.roots.iter().enumerate() {
        let Some(j) = d2.root_index(&lattice::mat_vec(phi, root)) else { return false };
        if lattice::mat_vec(&phit, &d2.coroots[j]) != d.coroots[k] {
            return false;
        }
    }
    d.simple.iter().all(|&i| d2.simple.contains(&d2.root_index(&lattice::mat_vec(phi, &d.roots[i])).unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::datum::{builtin_datum, Family};

    #[test]
    fn sp_is_not_so_odd() {
        let sp = builtin_datum(Family::Sp, 4).unwrap();
        let so = builtin_datum(Family::SOOdd, 5).unwrap();
        assert!(find_isomorphism(&sp, &sp).unwrap().is_some());
        assert!(find_isomorphism(&sp, &so).unwrap().is_none());
    }

    #[test]
    fn endoscopic_data_of_the_three_series() {
        use crate::root_datum::involution::{endoscopic_datum, standard_involution};
        for n in 1..=4 {
            for (src, target) in [
                ((Family::PGL, 2 * n + 1), (Family::Sp, 2 * n)),
                ((Family::GLxGm, 2 * n), (Family::GSpinOdd, 2 * n + 1)),
                ((Family::SOEven, 2 * n + 2), (Family::Sp, 2 * n)),
            ] {
                let g = builtin_datum(src.0, src.1).unwrap();
                let h = endoscopic_datum(&g, &standard_involution(&g).unwrap()).unwrap();
                let t = builtin_datum(target.0, target.1).unwrap();
                assert!(find_isomorphism(&h, &t).unwrap().is_some(), "{} vs {}", g.name, t.name);
            }
        }
    }
}
