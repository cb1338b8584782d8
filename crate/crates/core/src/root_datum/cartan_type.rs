//! Recognition of Cartan types from Cartan matrices, and the group names
//! used for twisted centralizers in type `A_{2n}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::folded::NodeHint;
use super::lattice::IVec;
use crate::error::{Error, Result};

/// A product of simple Cartan types together with the rank of the central
/// torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CentralizerType {
    /// Sorted `(letter, rank)` pairs.
    pub components: Vec<(char, usize)>,
    pub torus_rank: usize,
}

impl CentralizerType {
    pub fn new(mut components: Vec<(char, usize)>, torus_rank: usize) -> Self {
        components.sort();
        CentralizerType { components, torus_rank }
    }

    pub fn semisimple_rank(&self) -> usize {
        self.components.iter().map(|c| c.1).sum()
    }

    /// Group names in the `A_{2n}` convention: `C_m` is `Sp(2m)`, `B_m` is
    /// `SO(2m+1)`, each `A_{m-1}` is `Gl(m)` and absorbs one torus factor,
    /// and what is left of the torus is `Gl(1)` factors.
    pub fn group_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut torus = self.torus_rank;
        for &(l, m) in &self.components {
            match l {
                'C' => out.push(format!("Sp({})", 2 * m)),
                'B' => out.push(format!("SO({})", 2 * m + 1)),
                'A' => {
                    out.push(format!("Gl({})", m + 1));
                    torus = torus.saturating_sub(1);
                }
                other => out.push(format!("{other}{m}")),
            }
        }
        out.extend(std::iter::repeat_n("Gl(1)".to_string(), torus));
        out.sort();
        out
    }
}

impl fmt::Display for CentralizerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.components.iter().map(|(l, m)| format!("{l}{m}")).collect();
        if self.torus_rank > 0 {
            parts.push(format!("T{}", self.torus_rank));
        }
        if parts.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&parts.join("x"))
    }
}

/// Connected components of the Coxeter graph of a Cartan matrix.
pub fn components(c: &[IVec]) -> Vec<Vec<usize>> {
    let k = c.len();
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for s in 0..k {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            for b in 0..k {
                if !seen[b] && c[a][b] != 0 {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Letter and rank of a connected Cartan matrix `C[i][j] = <α_i, α_j^∨>`.
/// `hints` disambiguate `A1/B1/C1` and `B2/C2`.
pub fn identify_connected(c: &[IVec], hints: &[NodeHint]) -> Result<(char, usize)> {
    let k = c.len();
    let bond = |i: usize, j: usize| c[i][j] * c[j][i];
    let bad = || Error::Domain(format!("not a finite Cartan type: {c:?}"));
    if k == 1 {
        return Ok((hints[0].rank_one_letter(), 1));
    }
    let mut deg = vec![0usize; k];
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let b = bond(i, j);
            if b > 0 {
                if b > 3 {
                    return Err(bad());
                }
                deg[i] += 1;
                deg[j] += 1;
                edges.push((i, j, b));
            }
        }
    }
    if edges.len() != k - 1 {
        return Err(bad());
    }
    let multi: Vec<&(usize, usize, i64)> = edges.iter().filter(|e| e.2 > 1).collect();
    match multi.len() {
        0 => {
            let branch: Vec<usize> = (0..k).filter(|&i| deg[i] >= 3).collect();
            if branch.is_empty() {
                return Ok(('A', k));
            }
            if branch.len() > 1 || deg[branch[0]] > 3 {
                return Err(bad());
            }
            let mut arms = arm_lengths(c, branch[0]);
            arms.sort_unstable();
            match (arms[0], arms[1], arms[2]) {
                (1, 1, _) => Ok(('D', k)),
                (1, 2, 2) => Ok(('E', 6)),
                (1, 2, 3) => Ok(('E', 7)),
                (1, 2, 4) => Ok(('E', 8)),
                _ => Err(bad()),
            }
        }
        1 => {
            let &(i, j, b) = multi[0];
            if deg.iter().any(|&d| d > 2) {
                return Err(bad());
            }
            // long end of the multiple bond: |C[long][short]| > 1
            let (long, short) = if c[i][j].abs() > 1 { (i, j) } else { (j, i) };
            if b == 3 {
                return if k == 2 { Ok(('G', 2)) } else { Err(bad()) };
            }
            if k == 2 {
                return Ok((b2_letter(hints[short], hints[long]), 2));
            }
            if deg[short] == 1 {
                Ok(('B', k))
            } else if deg[long] == 1 {
                Ok(('C', k))
            } else if k == 4 {
                Ok(('F', 4))
            } else {
                Err(bad())
            }
        }
        _ => Err(bad()),
    }
}

fn b2_letter(short: NodeHint, long: NodeHint) -> char {
    match (short, long) {
        (NodeHint::DoubleIsRoot, _) => 'B',
        (_, NodeHint::HalfIsRoot) => 'C',
        (NodeHint::ShortOrthogonal, _) => 'B',
        (_, NodeHint::LongOrthogonal) => 'C',
        _ => 'B',
    }
}

fn arm_lengths(c: &[IVec], center: usize) -> Vec<usize> {
    let k = c.len();
    let mut out = Vec::new();
    for start in (0..k).filter(|&j| j != center && c[center][j] != 0) {
        let (mut prev, mut cur, mut len) = (center, start, 1);
        loop {
            let next: Vec<usize> = (0..k).filter(|&j| j != prev && j != cur && c[cur][j] != 0).collect();
            if next.len() != 1 {
                break;
            }
            prev = cur;
            cur = next[0];
            len += 1;
        }
        out.push(len);
    }
    out
}

/// Type of a (possibly disconnected) Cartan matrix.
pub fn identify(c: &[IVec], hints: &[NodeHint], torus_rank: usize) -> Result<CentralizerType> {
    let mut comps = Vec::new();
    for comp in components(c) {
        let sub: Vec<IVec> = comp.iter().map(|&i| comp.iter().map(|&j| c[i][j]).collect()).collect();
        let h: Vec<NodeHint> = comp.iter().map(|&i| hints[i]).collect();
        comps.push(identify_connected(&sub, &h)?);
    }
    Ok(CentralizerType::new(comps, torus_rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::datum::simple_cartan;

    #[test]
    fn recognizes_all_simple_types() {
        let none = [NodeHint::None; 8];
        for (l, r) in [('A', 4), ('B', 3), ('C', 4), ('D', 5), ('E', 6), ('E', 7), ('E', 8), ('F', 4), ('G', 2)] {
            let c = simple_cartan(l, r).unwrap();
            assert_eq!(identify_connected(&c, &none[..r]).unwrap(), (l, r));
        }
    }

    #[test]
    fn a2n_group_names() {
        let t = CentralizerType::new(vec![('A', 1)], 1);
        assert_eq!(t.group_names(), vec!["Gl(2)".to_string()]);
        let t = CentralizerType::new(vec![], 2);
        assert_eq!(t.group_names(), vec!["Gl(1)".to_string(), "Gl(1)".to_string()]);
    }
}
