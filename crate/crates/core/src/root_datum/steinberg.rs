//! Root systems of twisted centralizers `G^{tΘ}` for torus points `t`.

use serde::{Deserialize, Serialize};

use super::cartan_type::{identify, CentralizerType};
use super::datum::RootDatum;
use super::folded::{FoldedSystem, FoldedVec};
use super::involution::PinnedInvolution;
use crate::error::{Error, Result};
use crate::exact_scalars::{Cyclotomic, CyclotomicField, PadicInt, Ring};

/// A point of the diagonal ambient torus.
#[derive(Clone, Debug, PartialEq)]
pub enum TorusPoint {
    /// Coordinates `ζ_order^{exponents[i]}`.
    RootsOfUnity { order: u64, exponents: Vec<i64> },
    /// Coordinates in `Q(ζ_conductor)`.
    Cyclotomic { conductor: u32, coords: Vec<Cyclotomic> },
    /// Unit coordinates in `Z_p / p^K`, for points with topologically
    /// unipotent parts.
    Padic { coords: Vec<PadicInt> },
}

/// Value of a character at a torus point, as far as Steinberg's criterion
/// needs it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    One,
    MinusOne,
    Other,
}

impl TorusPoint {
    pub fn roots_of_unity(order: u64, exponents: Vec<i64>) -> Self {
        TorusPoint::RootsOfUnity { order, exponents }
    }

    pub fn dim(&self) -> usize {
        match self {
            TorusPoint::RootsOfUnity { exponents, .. } => exponents.len(),
            TorusPoint::Cyclotomic { coords, .. } => coords.len(),
            TorusPoint::Padic { coords } => coords.len(),
        }
    }

    /// Coordinates as strings: `ζ_m^e`, cyclotomic expressions or centered
    /// `p`-adic residues.
    pub fn describe(&self) -> Vec<String> {
        match self {
            TorusPoint::RootsOfUnity { order, exponents } => {
                exponents.iter().map(|e| format!("z{order}^{}", e.rem_euclid(*order as i64))).collect()
            }
            TorusPoint::Cyclotomic { conductor, coords } => match CyclotomicField::new(*conductor) {
                Ok(f) => coords.iter().map(|c| f.format(c)).collect(),
                Err(_) => coords.iter().map(|c| format!("{c:?}")).collect(),
            },
            TorusPoint::Padic { coords } => coords.iter().map(|c| c.to_string()).collect(),
        }
    }

    /// The value `Π t_i^{e_i}` classified as `1`, `-1` or neither.
    pub fn evaluate(&self, e: &[i64]) -> Result<Sign> {
        if e.len() != self.dim() {
            return Err(Error::Dimension("character and torus point differ in dimension".into()));
        }
        match self {
            TorusPoint::RootsOfUnity { order, exponents } => {
                let m = *order as i64;
                let s = e.iter().zip(exponents).map(|(a, b)| a * b).sum::<i64>().rem_euclid(m);
                Ok(if s == 0 {
                    Sign::One
                } else if 2 * s == m {
                    Sign::MinusOne
                } else {
                    Sign::Other
                })
            }
            TorusPoint::Cyclotomic { conductor, coords } => {
                let f = CyclotomicField::new(*conductor)?;
                let mut v = f.one();
                for (c, k) in coords.iter().zip(e) {
                    if f.is_zero(c) {
                        return Err(Error::Domain("torus coordinate is not a unit".into()));
                    }
                    v = f.mul(&v, &f.pow_i(c, *k)?);
                }
                Ok(if f.is_one(&v) {
                    Sign::One
                } else if f.equal(&v, &f.from_i64(-1)) {
                    Sign::MinusOne
                } else {
                    Sign::Other
                })
            }
            TorusPoint::Padic { coords } => {
                let Some(first) = coords.first() else { return Ok(Sign::One) };
                let mut v = PadicInt::new(first.p, first.prec, 1);
                for (c, k) in coords.iter().zip(e) {
                    let base = if *k < 0 { c.inv()? } else { *c };
                    v = v.mul(&base.pow(k.unsigned_abs() as u128));
                }
                Ok(if v.centered() == 1 {
                    Sign::One
                } else if v.centered() == -1 {
                    Sign::MinusOne
                } else {
                    Sign::Other
                })
            }
        }
    }

    /// Coordinate `i` of `self` against coordinate `j` of `other`, possibly
    /// inverted.
    pub fn coord_eq(&self, i: usize, other: &TorusPoint, j: usize, inverse: bool) -> bool {
        let sgn = if inverse { -1 } else { 1 };
        match (self, other) {
            (
                TorusPoint::RootsOfUnity { order: m1, exponents: a },
                TorusPoint::RootsOfUnity { order: m2, exponents: b },
            ) => {
                let l = num_integer::lcm(*m1, *m2) as i64;
                (a[i] * (l / *m1 as i64) - sgn * b[j] * (l / *m2 as i64)).rem_euclid(l) == 0
            }
            (
                TorusPoint::Cyclotomic { conductor: c1, coords: a },
                TorusPoint::Cyclotomic { conductor: c2, coords: b },
            ) if c1 == c2 => {
                let Ok(f) = CyclotomicField::new(*c1) else { return false };
                if inverse {
                    f.is_one(&f.mul(&a[i], &b[j]))
                } else {
                    f.equal(&a[i], &b[j])
                }
            }
            (TorusPoint::Padic { coords: a }, TorusPoint::Padic { coords: b }) => {
                if inverse {
                    a[i].mul(&b[j]).centered() == 1
                } else {
                    a[i].sub(&b[j]).residue == 0
                }
            }
            _ => false,
        }
    }

    /// `t · c` with the scalar `c = self_i / other_j` applied to `other`,
    /// so that coordinate `j` of the result equals coordinate `i` of `self`.
    pub fn rescaled_to(&self, i: usize, other: &TorusPoint, j: usize) -> Option<TorusPoint> {
        match (self, other) {
            (
                TorusPoint::RootsOfUnity { order: m1, exponents: a },
                TorusPoint::RootsOfUnity { order: m2, exponents: b },
            ) => {
                let l = num_integer::lcm(*m1, *m2);
                let (s1, s2) = ((l / m1) as i64, (l / m2) as i64);
                let shift = a[i] * s1 - b[j] * s2;
                let exps = b.iter().map(|x| (x * s2 + shift).rem_euclid(l as i64)).collect();
                Some(TorusPoint::RootsOfUnity { order: l, exponents: exps })
            }
            (
                TorusPoint::Cyclotomic { conductor: c1, coords: a },
                TorusPoint::Cyclotomic { conductor: c2, coords: b },
            ) if c1 == c2 => {
                let f = CyclotomicField::new(*c1).ok()?;
                let c = f.div(&a[i], &b[j]).ok()?;
                Some(TorusPoint::Cyclotomic { conductor: *c1, coords: b.iter().map(|x| f.mul(x, &c)).collect() })
            }
            (TorusPoint::Padic { coords: a }, TorusPoint::Padic { coords: b }) => {
                let c = a[i].mul(&b[j].inv().ok()?);
                Some(TorusPoint::Padic { coords: b.iter().map(|x| x.mul(&c)).collect() })
            }
            _ => None,
        }
    }
}

/// Which side of Steinberg's criterion admitted a root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `½P(α) ∉ Φ_Θ` and `S_Θ(α)(t) = 1`.
    Plus,
    /// `½P(α) ∈ Φ_Θ` and `S_Θ(α)(t) = -1`.
    Minus,
}

#[derive(Clone, Debug)]
pub struct FixedSystem {
    /// Elements of `Φ_Θ` in the root system of `(G^{tΘ})°`.
    pub roots: Vec<FoldedVec>,
    pub branches: Vec<Branch>,
    /// Indices into `roots` of a simple system.
    pub simple: Vec<usize>,
    pub cartan: Vec<Vec<i64>>,
    pub kind: CentralizerType,
    /// In type `A_{2n}`: whether the result is a maximal reduced subsystem
    /// of `{P_Θ(α) | α(N_Θ t) = 1}`.
    pub norm_check: Option<bool>,
}

impl FixedSystem {
    pub fn simple_roots(&self) -> Vec<FoldedVec> {
        self.simple.iter().map(|&i| self.roots[i].clone()).collect()
    }
}

/// `S_Θ(α)(t)` for root index `k`, via the root permutation induced by `Θ`.
fn twisted_value(d: &RootDatum, perm: &[usize], k: usize, t: &TorusPoint) -> Result<Sign> {
    let mut orbit = vec![k];
    let mut j = perm[k];
    while j != k {
        orbit.push(j);
        j = perm[j];
    }
    let mut e = vec![0; t.dim()];
    for &i in &orbit {
        let x = d.ambient_exponents(&d.roots[i])?;
        e.iter_mut().zip(x).for_each(|(a, b)| *a += b);
    }
    t.evaluate(&e)
}

/// `α(N_Θ t)`, with `N_Θ t = Π_{i<ord} Θ^i(t)`.
fn norm_value(d: &RootDatum, perm: &[usize], order: usize, k: usize, t: &TorusPoint) -> Result<Sign> {
    let mut e = vec![0; t.dim()];
    let mut j = k;
    for _ in 0..order {
        let x = d.ambient_exponents(&d.roots[j])?;
        e.iter_mut().zip(x).for_each(|(a, b)| *a += b);
        j = perm[j];
    }
    t.evaluate(&e)
}

/// Simple roots of a reduced subsystem (positivity from `ρ^∨`).
pub fn simple_subsystem(f: &FoldedSystem, roots: &[FoldedVec]) -> Vec<usize> {
    let pos: Vec<usize> = (0..roots.len()).filter(|&i| f.is_positive(&roots[i])).collect();
    pos.iter()
        .copied()
        .filter(|&i| {
            !pos.iter().any(|&a| {
                pos.iter().any(|&b| {
                    a != i && b != i && roots[a].p.iter().zip(&roots[b].p).map(|(x, y)| x + y).eq(roots[i].p.iter().copied())
                })
            })
        })
        .collect()
}

/// Cartan type of the subsystem spanned by `simple` inside `f`.
pub fn subsystem_type(f: &FoldedSystem, simple: &[FoldedVec]) -> Result<(Vec<Vec<i64>>, CentralizerType)> {
    let cartan: Vec<Vec<i64>> = simple.iter().map(|a| simple.iter().map(|b| f.cartan_integer(a, b)).collect()).collect();
    let hints: Vec<_> = simple.iter().map(|v| f.hint(v)).collect();
    let kind = identify(&cartan, &hints, f.dim() - simple.len())?;
    Ok((cartan, kind))
}

/// Root system of `(G^{tΘ})°` inside `Φ_Θ` by Steinberg's criterion.
pub fn steinberg_fixed_system(d: &RootDatum, inv: &PinnedInvolution, t: &TorusPoint) -> Result<FixedSystem> {
    if d.ambient_dim() != Some(t.dim()) {
        return Err(Error::Dimension(format!("torus point of dimension {} for {}", t.dim(), d.name)));
    }
    let f = FoldedSystem::new(d, inv);
    let perm = inv.root_permutation(d)?;
    let mut roots: Vec<FoldedVec> = Vec::new();
    let mut branches = Vec::new();
    for k in 0..d.roots.len() {
        let v = f.roots[f.image[k]].clone();
        if roots.contains(&v) {
            continue;
        }
        let half_in = v.half().is_some_and(|h| f.contains(&h));
        let want = if half_in { Sign::MinusOne } else { Sign::One };
        if twisted_value(d, &perm, k, t)? == want {
            roots.push(v);
            branches.push(if half_in { Branch::Minus } else { Branch::Plus });
        }
    }
    let simple = simple_subsystem(&f, &roots);
    let sv: Vec<FoldedVec> = simple.iter().map(|&i| roots[i].clone()).collect();
    let (cartan, kind) = subsystem_type(&f, &sv)?;
    let non_reduced = f.roots.iter().any(|r| f.contains(&r.scale(2)));
    let norm_check = if non_reduced {
        let mut big: Vec<FoldedVec> = Vec::new();
        for k in 0..d.roots.len() {
            if norm_value(d, &perm, inv.order, k, t)? == Sign::One {
                let v = f.roots[f.image[k]].clone();
                if !big.contains(&v) {
                    big.push(v);
                }
            }
        }
        Some(is_maximal_reduced(&roots, &big))
    } else {
        None
    };
    Ok(FixedSystem { roots, branches, simple, cartan, kind, norm_check })
}

/// `small ⊂ big`, `small` reduced, and every element of `big` is
/// proportional (by 1, 2 or 1/2) to one of `small`.
fn is_maximal_reduced(small: &[FoldedVec], big: &[FoldedVec]) -> bool {
    let subset = small.iter().all(|x| big.contains(x));
    let reduced = small.iter().all(|x| !small.contains(&x.scale(2)));
    let covers = big
        .iter()
        .all(|x| small.contains(x) || small.contains(&x.scale(2)) || x.half().is_some_and(|h| small.contains(&h)));
    subset && reduced && covers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::datum::{builtin_datum, Family};
    use crate::root_datum::involution::standard_involution;

    fn a4_cases() -> Vec<(Vec<i64>, Vec<&'static str>)> {
        // exponents of ζ_24
        vec![
            (vec![0, 0, 0, 0, 0], vec!["SO(5)"]),
            (vec![6, 6, 0, -6, -6], vec!["Sp(4)"]),
            (vec![6, 0, 0, 0, -6], vec!["SO(3)", "Sp(2)"]),
            (vec![3, 0, 0, 0, -3], vec!["Gl(1)", "SO(3)"]),
            (vec![3, 3, 0, -3, -3], vec!["Gl(2)"]),
            (vec![6, 3, 0, -3, -6], vec!["Gl(1)", "Sp(2)"]),
            (vec![4, 2, 0, -2, -4], vec!["Gl(1)", "Gl(1)"]),
        ]
    }

    #[test]
    fn the_seven_a4_cases() {
        for fam in [Family::PGL, Family::SL] {
            let d = builtin_datum(fam, 5).unwrap();
            let th = standard_involution(&d).unwrap();
            for (e, names) in a4_cases() {
                let fs = steinberg_fixed_system(&d, &th, &TorusPoint::roots_of_unity(24, e.clone())).unwrap();
                assert_eq!(fs.kind.group_names(), names, "{fam} {e:?}");
                assert_eq!(fs.norm_check, Some(true));
            }
        }
    }
}
