//! Weyl-orbit equality of torus points for the classical families, with an
//! explicit witness `t1_i = t2_{σ(i)}^{ε_i}`.

use serde::{Deserialize, Serialize};

use super::datum::{Family, RootDatum};
use super::steinberg::TorusPoint;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylWitness {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
    /// For `PGL`: coordinate of `t2` rescaled to match coordinate 0 of `t1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar_from: Option<usize>,
}

/// The shape of a Weyl group acting on ambient coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeylAction {
    /// Coordinates `offset..` are moved, earlier ones are fixed.
    pub offset: usize,
    pub signs: bool,
    /// Sign changes must have product `+1`.
    pub even: bool,
    /// Only elements commuting with `i ↦ m-1-i` (type `A` with `Θ`).
    pub theta_pairs: bool,
    /// Last coordinate fixed up to the sign compensating the others.
    pub last_compensates: bool,
    /// Points are taken modulo scalars.
    pub projective: bool,
}

impl WeylAction {
    pub fn for_datum(d: &RootDatum, restrict_to_theta: bool) -> Result<Self> {
        let (family, _) =
            d.family.ok_or_else(|| Error::Unsupported(format!("no Weyl canonical form for {}", d.name)))?;
        let base = WeylAction {
            offset: 0,
            signs: false,
            even: false,
            theta_pairs: false,
            last_compensates: false,
            projective: false,
        };
        let a = match family {
            Family::GL | Family::SL => WeylAction { theta_pairs: restrict_to_theta, ..base },
            Family::PGL => WeylAction { theta_pairs: restrict_to_theta, projective: true, ..base },
            Family::GLxGm => WeylAction { offset: 1, theta_pairs: restrict_to_theta, ..base },
            Family::Sp | Family::SOOdd => WeylAction { signs: true, ..base },
            Family::SOEven => WeylAction { signs: true, even: !restrict_to_theta, last_compensates: restrict_to_theta, ..base },
            Family::GSpinOdd => return Err(Error::Unsupported("no Weyl canonical form for GSpin".into())),
        };
        Ok(a)
    }
}

/// Some `w` in the (`Θ`-fixed, if flagged) Weyl group with `w(t2) = t1`.
pub fn weyl_orbit_witness(d: &RootDatum, t1: &TorusPoint, t2: &TorusPoint, restrict_to_theta: bool) -> Result<Option<WeylWitness>> {
    let action = WeylAction::for_datum(d, restrict_to_theta)?;
    if Some(t1.dim()) != d.ambient_dim() || t2.dim() != t1.dim() {
        return Err(Error::Dimension("torus points of the wrong dimension".into()));
    }
    orbit_witness(&action, t1, t2)
}

pub fn weyl_orbit_equal(d: &RootDatum, t1: &TorusPoint, t2: &TorusPoint, restrict_to_theta: bool) -> Result<bool> {
    Ok(weyl_orbit_witness(d, t1, t2, restrict_to_theta)?.is_some())
}

/// Witness search for an explicit action.
pub fn orbit_witness(a: &WeylAction, t1: &TorusPoint, t2: &TorusPoint) -> Result<Option<WeylWitness>> {
    let m = t1.dim();
    if a.projective {
        for j in 0..m {
            let Some(s) = t1.rescaled_to(0, t2, j) else { return Ok(None) };
            let plain = WeylAction { projective: false, ..*a };
            if let Some(mut w) = orbit_witness(&plain, t1, &s)? {
                w.scalar_from = Some(j);
                return Ok(Some(w));
            }
        }
        return Ok(None);
    }
    let mut perm = vec![usize::MAX; m];
    let mut signs = vec![1i8; m];
    let mut used = vec![false; m];
    for i in 0..a.offset {
        if !t1.coord_eq(i, t2, i, false) {
            return Ok(None);
        }
        perm[i] = i;
        used[i] = true;
    }
    let last = if a.last_compensates { m - 1 } else { m };
    if search(a, t1, t2, a.offset, last, &mut perm, &mut signs, &mut used) {
        Ok(Some(WeylWitness { perm, signs, scalar_from: None }))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &WeylAction,
    t1: &TorusPoint,
    t2: &TorusPoint,
    i: usize,
    end: usize,
    perm: &mut [usize],
    signs: &mut [i8],
    used: &mut [bool],
) -> bool {
    let m = t1.dim();
    let mirror = |k: usize| a.offset + (m - 1 - k);
    if i == end {
        let prod: i8 = signs[a.offset..end].iter().product();
        if a.last_compensates {
            let l = m - 1;
            perm[l] = l;
            signs[l] = prod;
            return t1.coord_eq(l, t2, l, prod < 0);
        }
        return !a.even || prod == 1;
    }
    if perm[i] != usize::MAX {
        return search(a, t1, t2, i + 1, end, perm, signs, used);
    }
    let eps: &[i8] = if a.signs { &[1, -1] } else { &[1] };
    for j in a.offset..end {
        if used[j] {
            continue;
        }
        for &e in eps {
            if !t1.coord_eq(i, t2, j, e < 0) {
                continue;
            }
            if a.theta_pairs {
                // i ↦ j forces mirror(i) ↦ mirror(j)
                let (mi, mj) = (mirror(i), mirror(j));
                if mi == i {
                    if mj != j {
                        continue;
                    }
                } else if used[mj] || mj == j || !t1.coord_eq(mi, t2, mj, false) {
                    continue;
                }
                perm[i] = j;
                used[j] = true;
                if mi != i {
                    perm[mi] = mj;
                    used[mj] = true;
                }
                if search(a, t1, t2, i + 1, end, perm, signs, used) {
                    return true;
                }
                perm[i] = usize::MAX;
                used[j] = false;
                if mi != i {
                    perm[mi] = usize::MAX;
                    used[mj] = false;
                }
                continue;
            }
            perm[i] = j;
            signs[i] = e;
            used[j] = true;
            if search(a, t1, t2, i + 1, end, perm, signs, used) {
                return true;
            }
            perm[i] = usize::MAX;
            signs[i] = 1;
            used[j] = false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::datum::builtin_datum;

    #[test]
    fn sp4_signed_permutation() {
        let d = builtin_datum(Family::Sp, 4).unwrap();
        // diag(a, b, b^-1, a^-1) vs diag(b^-1, a, a^-1, b) with a = ζ^1, b = ζ^3
        let t1 = TorusPoint::roots_of_unity(17, vec![1, 3]);
        let t2 = TorusPoint::roots_of_unity(17, vec![-3, 1]);
        let w = weyl_orbit_witness(&d, &t1, &t2, false).unwrap().unwrap();
        assert_eq!(w.perm, vec![1, 0]);
        assert_eq!(w.signs, vec![1, -1]);
        let t3 = TorusPoint::roots_of_unity(17, vec![1, 4]);
        assert!(!weyl_orbit_equal(&d, &t1, &t3, false).unwrap());
    }

    #[test]
    fn theta_pairs_for_type_a() {
        let d = builtin_datum(Family::GL, 4).unwrap();
        let t1 = TorusPoint::roots_of_unity(11, vec![1, 2, 3, 4]);
        let swapped_pairs = TorusPoint::roots_of_unity(11, vec![2, 1, 4, 3]);
        assert!(weyl_orbit_equal(&d, &t1, &swapped_pairs, true).unwrap());
        let broken = TorusPoint::roots_of_unity(11, vec![2, 1, 3, 4]);
        assert!(weyl_orbit_equal(&d, &t1, &broken, false).unwrap());
        assert!(!weyl_orbit_equal(&d, &t1, &broken, true).unwrap());
    }

    #[test]
    fn pgl_modulo_scalars() {
        let d = builtin_datum(Family::PGL, 3).unwrap();
        let t1 = TorusPoint::roots_of_unity(12, vec![0, 1, 5]);
        let t2 = TorusPoint::roots_of_unity(12, vec![7, 2, 3]);
        assert!(weyl_orbit_equal(&d, &t1, &t2, false).unwrap());
    }
}
