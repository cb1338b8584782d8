//! The restricted root system `Φ_Θ = P_Θ(Φ)` together with rational lifts
//! (orbit averages) on which a `W`- and `Θ`-invariant form is evaluated.

use super::datum::{Q64, RootDatum};
use super::involution::{dual_invariant_basis, twisted_sum, PinnedInvolution};
use super::lattice::{self, IVec};

/// An element of `X^*(T)_Θ ⊗ Q` given by its coinvariant coordinates and
/// its orbit-average lift to `X^*(T) ⊗ Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedVec {
    pub p: IVec,
    pub lift: Vec<Q64>,
}

impl FoldedVec {
    pub fn scale(&self, c: i64) -> FoldedVec {
        FoldedVec { p: lattice::scale(c, &self.p), lift: self.lift.iter().map(|x| *x * c).collect() }
    }

    pub fn neg(&self) -> FoldedVec {
        self.scale(-1)
    }

    /// `self / 2` when the coinvariant coordinates are even.
    pub fn half(&self) -> Option<FoldedVec> {
        if self.p.iter().any(|x| x % 2 != 0) {
            return None;
        }
        Some(FoldedVec { p: self.p.iter().map(|x| x / 2).collect(), lift: self.lift.iter().map(|x| *x / 2).collect() })
    }
}

#[derive(Clone, Debug)]
pub struct FoldedSystem {
    /// Distinct elements of `Φ_Θ`.
    pub roots: Vec<FoldedVec>,
    /// For each root of the datum, its index in `roots`.
    pub image: Vec<usize>,
    coroots: Vec<IVec>,
    rho_check: IVec,
    basis: Vec<IVec>,
    inv: PinnedInvolution,
}

impl FoldedSystem {
    pub fn new(d: &RootDatum, inv: &PinnedInvolution) -> Self {
        let basis = dual_invariant_basis(inv);
        let mut roots: Vec<FoldedVec> = Vec::new();
        let mut image = Vec::with_capacity(d.roots.len());
        for r in &d.roots {
            let v = project(&basis, inv, r);
            match roots.iter().position(|x| x.p == v.p) {
                Some(i) => image.push(i),
                None => {
                    image.push(roots.len());
                    roots.push(v);
                }
            }
        }
        let mut rho_check = vec![0; d.rank];
        for k in 0..d.roots.len() {
            if d.is_positive(k) {
                rho_check = lattice::add(&rho_check, &d.coroots[k]);
            }
        }
        FoldedSystem { roots, image, coroots: d.coroots.clone(), rho_check, basis, inv: inv.clone() }
    }

    /// `P_Θ(x)` with its lift, for any character `x`.
    pub fn project(&self, x: &[i64]) -> FoldedVec {
        project(&self.basis, &self.inv, x)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Invariant form `Σ_β <x, β^∨> <y, β^∨>` on lifts.
    pub fn form(&self, x: &FoldedVec, y: &FoldedVec) -> Q64 {
        self.coroots.iter().map(|c| pair(&x.lift, c) * pair(&y.lift, c)).sum()
    }

    pub fn norm(&self, x: &FoldedVec) -> Q64 {
        self.form(x, x)
    }

    /// Cartan integer `<x, y^∨> = 2 (x, y) / (y, y)`.
    pub fn cartan_integer(&self, x: &FoldedVec, y: &FoldedVec) -> i64 {
        let v = self.form(x, y) * 2 / self.norm(y);
        assert!(v.is_integer(), "non-integral Cartan number");
        v.to_integer()
    }

    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        self.roots.iter().position(|x| x.p == p)
    }

    pub fn contains(&self, v: &FoldedVec) -> bool {
        self.index_of(&v.p).is_some()
    }

    pub fn is_positive(&self, v: &FoldedVec) -> bool {
        pair(&v.lift, &self.rho_check) > Q64::from_integer(0)
    }

    /// Reflection `s_β(x)` computed on lifts and coordinates.
    pub fn reflect(&self, beta: &FoldedVec, x: &FoldedVec) -> FoldedVec {
        let c = self.cartan_integer(x, beta);
        FoldedVec {
            p: x.p.iter().zip(&beta.p).map(|(a, b)| a - c * b).collect(),
            lift: x.lift.iter().zip(&beta.lift).map(|(a, b)| *a - *b * c).collect(),
        }
    }

    /// Per-node label hint used to tell `B`, `C` and `A` apart in rank one
    /// and for the double bond of rank two.
    pub fn hint(&self, v: &FoldedVec) -> NodeHint {
        if self.contains(&v.scale(2)) {
            return NodeHint::DoubleIsRoot;
        }
        if v.half().is_some_and(|h| self.contains(&h)) {
            return NodeHint::HalfIsRoot;
        }
        let n = self.norm(v);
        let same: Vec<&FoldedVec> =
            self.roots.iter().filter(|r| self.norm(r) == n && r.p != v.p && r.p != lattice::neg(&v.p)).collect();
        let max = self.roots.iter().map(|r| self.norm(r)).max().unwrap_or(n);
        let min = self.roots.iter().map(|r| self.norm(r)).min().unwrap_or(n);
        let orthogonal = same.iter().all(|r| self.form(r, v) == Q64::from_integer(0));
        if min != max && orthogonal {
            if n == min {
                return NodeHint::ShortOrthogonal;
            }
            if n == max {
                return NodeHint::LongOrthogonal;
            }
        }
        NodeHint::None
    }
}

/// How a node sits in the ambient restricted root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum NodeHint {
    /// `2α` is a root: type `B` behaviour.
    DoubleIsRoot,
    /// `α/2` is a root: type `C` behaviour.
    HalfIsRoot,
    ShortOrthogonal,
    LongOrthogonal,
    None,
}

impl NodeHint {
    /// Letter suggested for a rank-one component.
    pub fn rank_one_letter(self) -> char {
        match self {
            NodeHint::DoubleIsRoot | NodeHint::ShortOrthogonal => 'B',
            NodeHint::HalfIsRoot | NodeHint::LongOrthogonal => 'C',
            NodeHint::None => 'A',
        }
    }
}

fn pair(x: &[Q64], y: &[i64]) -> Q64 {
    x.iter().zip(y).map(|(a, b)| *a * *b).sum()
}

fn project(basis: &[IVec], inv: &PinnedInvolution, x: &[i64]) -> FoldedVec {
    let p = basis.iter().map(|b| lattice::dot(b, x)).collect();
    let len = inv.orbit_len(x, false) as i64;
    let s = twisted_sum(inv, x, false);
    FoldedVec { p, lift: s.iter().map(|v| Q64::new(*v, len)).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::datum::{builtin_datum, Family};
    use crate::root_datum::involution::standard_involution;

    #[test]
    fn a4_folds_to_bc2() {
        let d = builtin_datum(Family::PGL, 5).unwrap();
        let f = FoldedSystem::new(&d, &standard_involution(&d).unwrap());
        // ±ε_i±ε_j (4), ±ε_i (4), ±2ε_i (4)
        assert_eq!(f.roots.len(), 12);
        let norms: std::collections::BTreeSet<Q64> = f.roots.iter().map(|r| f.norm(r)).collect();
        assert_eq!(norms.len(), 3);
    }

    #[test]
    fn d4_folds_to_b3() {
        let d = builtin_datum(Family::SOEven, 8).unwrap();
        let f = FoldedSystem::new(&d, &standard_involution(&d).unwrap());
        assert_eq!(f.roots.len(), 18);
    }
}
