use serde::{Deserialize, Serialize};

use super::datum::{Family, RootDatum};
use super::lattice::{self, IVec};
use crate::error::{Error, Result};
use crate::exact_scalars::Rational;

/// A pinned automorphism of finite order acting on `X^*` by `x ↦ A x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinnedInvolution {
    /// Rows of `A` in `X^*` coordinates.
    pub matrix: Vec<IVec>,
    pub order: usize,
    /// Preferred basis of `X^*(T)^Θ`; must span the invariant lattice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant_basis: Option<Vec<IVec>>,
}

impl PinnedInvolution {
    pub fn identity(rank: usize) -> Self {
        PinnedInvolution { matrix: lattice::identity(rank), order: 1, invariant_basis: None }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[i64]) -> IVec {
        lattice::mat_vec(&self.matrix, x)
    }

    pub fn apply_pow(&self, x: &[i64], k: usize) -> IVec {
        (0..k).fold(x.to_vec(), |acc, _| self.apply(&acc))
    }

    /// Action on `X_*`: the inverse transpose, so that pairings are kept.
    pub fn apply_dual(&self, y: &[i64]) -> IVec {
        // A^{-1} = A^{order-1}
        let inv = (1..self.order).fold(lattice::identity(self.rank()), |acc, _| lattice::mat_mul(&acc, &self.matrix));
        let inv_t = lattice::transpose(&inv, self.rank());
        lattice::mat_vec(&inv_t, y)
    }

    pub fn apply_dual_pow(&self, y: &[i64], k: usize) -> IVec {
        (0..k).fold(y.to_vec(), |acc, _| self.apply_dual(&acc))
    }

    /// Length of the orbit of `x` (on `X^*` when `dual` is false).
    pub fn orbit_len(&self, x: &[i64], dual: bool) -> usize {
        let mut y = x.to_vec();
        for i in 1..=self.order {
            y = if dual { self.apply_dual(&y) } else { self.apply(&y) };
            if y == x {
                return i;
            }
        }
        self.order
    }

    /// Permutation of the root indices induced by `Θ`.
    pub fn root_permutation(&self, d: &RootDatum) -> Result<Vec<usize>> {
        d.roots
            .iter()
            .map(|r| d.root_index(&self.apply(r)).ok_or_else(|| Error::Domain("Θ does not preserve the roots".into())))
            .collect()
    }

    /// Permutation of the simple roots (by position in `d.simple`).
    pub fn simple_permutation(&self, d: &RootDatum) -> Result<Vec<usize>> {
        let perm = self.root_permutation(d)?;
        d.simple
            .iter()
            .map(|&i| {
                d.simple
                    .iter()
                    .position(|&j| j == perm[i])
                    .ok_or_else(|| Error::Domain("Θ does not stabilize the simple roots".into()))
            })
            .collect()
    }

    /// Check finite order, preservation of roots, the simple system, and the
    /// root-coroot correspondence.
    pub fn validate(&self, d: &RootDatum) -> Result<()> {
        if self.rank() != d.rank {
            return Err(Error::Dimension("involution rank".into()));
        }
        let id = lattice::identity(d.rank);
        let mut p = id.clone();
        for k in 1..=self.order {
            p = lattice::mat_mul(&self.matrix, &p);
            if p == id && k < self.order {
                return Err(Error::Domain(format!("order {k} < declared {}", self.order)));
            }
        }
        if p != id {
            return Err(Error::Domain("declared order is wrong".into()));
        }
        let perm = self.root_permutation(d)?;
        for (k, &j) in perm.iter().enumerate() {
            if self.apply_dual(&d.coroots[k]) != d.coroots[j] {
                return Err(Error::Domain("Θ does not match coroots".into()));
            }
        }
        self.simple_permutation(d)?;
        if let Some(b) = &self.invariant_basis {
            let k = invariant_lattice_basis(self);
            if b.len() != k.len() || b.iter().any(|v| self.apply(v) != *v) {
                return Err(Error::Domain("preferred invariant basis is not Θ-fixed".into()));
            }
            // Same lattice: both bases express each other integrally.
            let bt = lattice::transpose(b, d.rank);
            for v in &k {
                if lattice::solve_integer(&bt, b.len(), v)?.is_none() {
                    return Err(Error::Domain("preferred basis spans a proper sublattice".into()));
                }
            }
        }
        Ok(())
    }
}

/// Basis of `X^*(T)^Θ = ker(A - 1)` (saturated).
pub fn invariant_lattice_basis(inv: &PinnedInvolution) -> Vec<IVec> {
    let r = inv.rank();
    let a: Vec<IVec> = (0..r).map(|i| (0..r).map(|j| inv.matrix[i][j] - i64::from(i == j)).collect()).collect();
    lattice::integer_kernel(&a, r)
}

/// The invariant basis used for endoscopic data: the preferred one if set.
pub fn invariant_basis(inv: &PinnedInvolution) -> Vec<IVec> {
    inv.invariant_basis.clone().unwrap_or_else(|| invariant_lattice_basis(inv))
}

/// Basis of `X_*(T)^Θ`, dual side.
pub fn dual_invariant_basis(inv: &PinnedInvolution) -> Vec<IVec> {
    let r = inv.rank();
    let cols: Vec<IVec> = (0..r).map(|j| inv.apply_dual(&unit(r, j))).collect();
    let a: Vec<IVec> = (0..r).map(|i| (0..r).map(|j| cols[j][i] - i64::from(i == j)).collect()).collect();
    lattice::integer_kernel(&a, r)
}

fn unit(r: usize, i: usize) -> IVec {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

fn matrix_from_images(images: Vec<IVec>) -> Vec<IVec> {
    let r = images.len();
    lattice::transpose(&images, r)
}

/// The standard outer involution of a built-in datum.
pub fn standard_involution(d: &RootDatum) -> Result<PinnedInvolution> {
    let (family, size) = d
        .family
        .ok_or_else(|| Error::Unsupported(format!("{} has no standard involution", d.name)))?;
    let r = d.rank;
    let inv = match family {
        Family::GL => {
            // Θ(e_i) = -e_{m+1-i}
            let images = (0..r).map(|i| lattice::neg(&unit(r, r - 1 - i))).collect();
            PinnedInvolution { matrix: matrix_from_images(images), order: 2, invariant_basis: None }
        }
        Family::SL => {
            let m = size;
            let images = (0..r)
                .map(|k| {
                    let target = m - 1 - k;
                    if target == m - 1 {
                        // -e_m = e_1 + ... + e_{m-1} in the quotient
                        vec![1; r]
                    } else {
                        lattice::neg(&unit(r, target))
                    }
                })
                .collect();
            PinnedInvolution { matrix: matrix_from_images(images), order: 2, invariant_basis: None }
        }
        Family::PGL => {
            // b_k ↦ b_{m-k}
            let images = (0..r).map(|k| unit(r, r - 1 - k)).collect();
            let basis = if size % 2 == 1 {
                let n = size / 2;
                // e'_i = e_i - e_{2n+2-i} = b_i + ... + b_{2n+1-i}
                Some((0..n).map(|i| (0..r).map(|k| i64::from(k >= i && k < r - i)).collect()).collect())
            } else {
                None
            };
            PinnedInvolution { matrix: matrix_from_images(images), order: 2, invariant_basis: basis }
        }
        Family::GLxGm => {
            let n2 = size;
            let n = n2 / 2;
            let mut images = Vec::with_capacity(r);
            let mut e0 = vec![1; r];
            e0[0] = 1;
            images.push(e0);
            for i in 1..=n2 {
                images.push(lattice::neg(&unit(r, n2 + 1 - i)));
            }
            let mut basis = Vec::with_capacity(n + 1);
            let mut b0 = vec![0; r];
            b0[0] = 1;
            for i in n + 1..=n2 {
                b0[i] = 1;
            }
            basis.push(b0);
            for i in 1..=n {
                let mut v = vec![0; r];
                v[i] = 1;
                v[n2 + 1 - i] = -1;
                basis.push(v);
            }
            PinnedInvolution { matrix: matrix_from_images(images), order: 2, invariant_basis: Some(basis) }
        }
        Family::SOEven => {
            let mut images: Vec<IVec> = (0..r).map(|i| unit(r, i)).collect();
            images[r - 1] = lattice::neg(&unit(r, r - 1));
            let basis = (0..r - 1).map(|i| unit(r, i)).collect();
            PinnedInvolution { matrix: matrix_from_images(images), order: 2, invariant_basis: Some(basis) }
        }
        _ => return Err(Error::Unsupported(format!("{family} has no outer involution"))),
    };
    inv.validate(d)?;
    Ok(inv)
}

/// Diagram automorphism of an adjoint datum built from a Cartan matrix,
/// given as a permutation of the simple roots.
pub fn diagram_automorphism(d: &RootDatum, perm: &[usize]) -> Result<PinnedInvolution> {
    if d.simple.len() != d.rank || perm.len() != d.rank {
        return Err(Error::Domain("diagram automorphisms need an adjoint datum".into()));
    }
    // X^* has the simple roots as basis (adjoint): permutation matrix.
    let s = d.simple_roots();
    if s.iter().enumerate().any(|(i, v)| *v != unit(d.rank, i)) {
        return Err(Error::Domain("simple roots are not the standard basis".into()));
    }
    let images = (0..d.rank).map(|i| unit(d.rank, perm[i])).collect();
    let mut order = 1;
    let mut p: Vec<usize> = perm.to_vec();
    while p.iter().enumerate().any(|(i, &j)| i != j) {
        p = p.iter().map(|&j| perm[j]).collect();
        order += 1;
    }
    let inv = PinnedInvolution { matrix: matrix_from_images(images), order, invariant_basis: None };
    inv.validate(d)?;
    Ok(inv)
}

/// `S_Θ(x)`: sum over the Θ-orbit of `x`.
pub fn twisted_sum(inv: &PinnedInvolution, x: &[i64], dual: bool) -> IVec {
    let l = inv.orbit_len(x, dual);
    let mut acc = x.to_vec();
    let mut y = x.to_vec();
    for _ in 1..l {
        y = if dual { inv.apply_dual(&y) } else { inv.apply(&y) };
        acc = lattice::add(&acc, &y);
    }
    acc
}

/// `c(α) = 2 / <α^∨, S_Θ(α)>` for root `k`.
pub fn twist_factor(d: &RootDatum, inv: &PinnedInvolution, k: usize) -> Result<Rational> {
    let s = twisted_sum(inv, &d.roots[k], false);
    let p = lattice::dot(&s, &d.coroots[k]);
    if p == 0 {
        return Err(Error::Domain(format!("c undefined for root {:?}", d.roots[k])));
    }
    Ok(Rational::new(2.into(), p.into()))
}

/// `S'_Θ(α) = c(α) S_Θ(α)` for root `k`, or the coroot analogue when `dual`.
pub fn modified_twisted_sum(d: &RootDatum, inv: &PinnedInvolution, k: usize, dual: bool) -> Result<IVec> {
    let (x, y) = if dual { (&d.coroots[k], &d.roots[k]) } else { (&d.roots[k], &d.coroots[k]) };
    let s = twisted_sum(inv, x, dual);
    let p = lattice::dot(&s, y);
    if p == 0 {
        return Err(Error::Domain(format!("c undefined for {x:?}")));
    }
    let out: Option<IVec> = s.iter().map(|v| if (2 * v) % p == 0 { Some(2 * v / p) } else { None }).collect();
    out.ok_or_else(|| Error::Domain(format!("S' of {x:?} is not integral")))
}

/// `P_Θ` on cocharacters: coordinates in the dual basis of the invariant
/// character basis, i.e. the free quotient `X_*(T)_Θ`.
pub fn coinvariant_project(inv: &PinnedInvolution, y: &[i64]) -> IVec {
    invariant_basis(inv).iter().map(|b| lattice::dot(b, y)).collect()
}

/// `P_Θ` on characters, into the free quotient `X^*(T)_Θ`.
pub fn coinvariant_project_characters(inv: &PinnedInvolution, x: &[i64]) -> IVec {
    dual_invariant_basis(inv).iter().map(|b| lattice::dot(b, x)).collect()
}

/// Indices of the short-middle coroots: `½ P_Θ(α^∨) ∉ P_Θ(Φ^∨)`. The same
/// indices label the long-middle roots.
pub fn short_middle_filter(d: &RootDatum, inv: &PinnedInvolution) -> Vec<usize> {
    let images: Vec<IVec> = d.coroots.iter().map(|c| coinvariant_project(inv, c)).collect();
    (0..d.roots.len())
        .filter(|&k| {
            let p = &images[k];
            if p.iter().any(|x| x % 2 != 0) {
                return true;
            }
            let half: IVec = p.iter().map(|x| x / 2).collect();
            !images.contains(&half)
        })
        .collect()
}

/// The datum of the stable endoscopic group: characters `X^*(T)^Θ`,
/// cocharacters `X_*(T)_Θ`, roots `S'_Θ(Φ^lm)`, coroots `P_Θ(Φ^∨,sm)`.
pub fn endoscopic_datum(d: &RootDatum, inv: &PinnedInvolution) -> Result<RootDatum> {
    inv.validate(d)?;
    let basis = invariant_basis(inv);
    let s = basis.len();
    let bt = lattice::transpose(&basis, d.rank);
    let keep = short_middle_filter(d, inv);
    let mut roots: Vec<IVec> = Vec::new();
    let mut coroots: Vec<IVec> = Vec::new();
    let mut image_of = vec![None; d.roots.len()];
    for &k in &keep {
        let sr = modified_twisted_sum(d, inv, k, false)?;
        let r = lattice::solve_integer(&bt, s, &sr)?
            .ok_or_else(|| Error::Domain("S' image outside the invariant lattice".into()))?;
        let c = coinvariant_project(inv, &d.coroots[k]);
        match roots.iter().position(|x| *x == r) {
            Some(j) => {
                if coroots[j] != c {
                    return Err(Error::Domain(format!("root {r:?} acquires two coroots")));
                }
                image_of[k] = Some(j);
            }
            None => {
                image_of[k] = Some(roots.len());
                roots.push(r);
                coroots.push(c);
            }
        }
    }
    let mut simple = Vec::new();
    for &i in &d.simple {
        let j = image_of[i].ok_or_else(|| Error::Domain("a simple root was filtered out".into()))?;
        if !simple.contains(&j) {
            simple.push(j);
        }
    }
    let ambient = None;
    let h = RootDatum { name: format!("endoscopic({})", d.name), rank: s, roots, coroots, simple, ambient, family: None };
    h.validate()?;
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::datum::builtin_datum;

    #[test]
    fn pgl5_involution_on_ambient() {
        let d = builtin_datum(Family::PGL, 5).unwrap();
        let th = standard_involution(&d).unwrap();
        // Θ(e_1 - e_2) = e_4 - e_5
        let k = d.roots.iter().position(|r| d.ambient_exponents(r).unwrap() == vec![1, -1, 0, 0, 0]).unwrap();
        assert_eq!(d.ambient_exponents(&th.apply(&d.roots[k])).unwrap(), vec![0, 0, 0, 1, -1]);
    }

    #[test]
    fn glxgm_fixes_f0() {
        let d = builtin_datum(Family::GLxGm, 4).unwrap();
        let th = standard_involution(&d).unwrap();
        let f0 = vec![1, 0, 0, 0, 0];
        assert_eq!(th.apply_dual(&f0), f0);
    }
}
