//! Extended Dynkin diagrams of folded root systems, their proper
//! subdiagrams, and text renderings.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::cartan_type::{identify, CentralizerType};
use super::datum::{simple_type_datum, RootDatum, Q64};
use super::folded::{FoldedSystem, FoldedVec, NodeHint};
use super::involution::{
    diagram_automorphism, modified_twisted_sum, standard_involution, twist_factor, PinnedInvolution,
};
use super::lattice::{self, IVec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramNode {
    pub label: String,
    /// The additional node `c(α̃) P_Θ(α̃)`.
    pub extra: bool,
    pub hint: NodeHint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramEdge {
    pub a: usize,
    pub b: usize,
    /// `n_ab · n_ba`: 1, 2, 3 or 4.
    pub bond: i64,
    /// The shorter end of a multiple bond.
    pub arrow_to: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynkinDiagram {
    pub name: String,
    pub nodes: Vec<DiagramNode>,
    pub edges: Vec<DiagramEdge>,
    /// `cartan[i][j] = <v_i, v_j^∨>`.
    pub cartan: Vec<IVec>,
    /// Node vectors in coinvariant coordinates (empty for hand-made shapes).
    #[serde(default)]
    pub vectors: Vec<IVec>,
}

impl DynkinDiagram {
    /// Build from a Cartan matrix; edges and arrows are derived.
    pub fn from_cartan(name: &str, nodes: Vec<DiagramNode>, cartan: Vec<IVec>, vectors: Vec<IVec>) -> Self {
        let mut edges = Vec::new();
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                let bond = cartan[i][j] * cartan[j][i];
                if bond == 0 {
                    continue;
                }
                // |<v_i, v_j^∨>| > |<v_j, v_i^∨>| means v_i is longer.
                let arrow_to = match cartan[i][j].abs().cmp(&cartan[j][i].abs()) {
                    std::cmp::Ordering::Greater => Some(j),
                    std::cmp::Ordering::Less => Some(i),
                    std::cmp::Ordering::Equal => None,
                };
                edges.push(DiagramEdge { a: i, b: j, bond, arrow_to });
            }
        }
        DynkinDiagram { name: name.to_string(), nodes, edges, cartan, vectors }
    }

    /// A shape given by its edges `(a, b, bond, arrow_to)`; node `extra` is
    /// the additional node. Used for reference shapes.
    pub fn shape(name: &str, n: usize, extra: Option<usize>, edges: &[(usize, usize, i64, Option<usize>)]) -> Self {
        let nodes = (0..n)
            .map(|i| DiagramNode {
                label: if Some(i) == extra { "x".into() } else { format!("c{i}") },
                extra: Some(i) == extra,
                hint: NodeHint::None,
            })
            .collect();
        let mut cartan: Vec<IVec> = (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else { 0 }).collect()).collect();
        let mut out = Vec::new();
        for &(a, b, bond, arrow) in edges {
            match arrow {
                Some(short) => {
                    let long = if short == a { b } else { a };
                    cartan[long][short] = -bond;
                    cartan[short][long] = -1;
                }
                None => {
                    let m = if bond == 4 { 2 } else { 1 };
                    cartan[a][b] = -m;
                    cartan[b][a] = -m;
                }
            }
            out.push(DiagramEdge { a: a.min(b), b: a.max(b), bond, arrow_to: arrow });
        }
        out.sort_by_key(|e| (e.a, e.b));
        DynkinDiagram { name: name.to_string(), nodes, edges: out, cartan, vectors: vec![] }
    }

    pub fn extra_node(&self) -> Option<usize> {
        self.nodes.iter().position(|n| n.extra)
    }

    fn edge(&self, a: usize, b: usize) -> Option<&DiagramEdge> {
        self.edges.iter().find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    /// Permutations of nodes preserving extra markers, bonds and arrows
    /// mapping `self` onto `other`.
    pub fn isomorphisms(&self, other: &DynkinDiagram) -> Vec<Vec<usize>> {
        let n = self.nodes.len();
        let mut out = Vec::new();
        if other.nodes.len() != n || other.edges.len() != self.edges.len() {
            return out;
        }
        let mut map = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.iso_rec(other, &mut map, &mut used, &mut out);
        out
    }

    fn iso_rec(&self, other: &DynkinDiagram, map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let i = map.len();
        if i == self.nodes.len() {
            out.push(map.clone());
            return;
        }
        for t in 0..other.nodes.len() {
            if used[t] || other.nodes[t].extra != self.nodes[i].extra {
                continue;
            }
            let ok = (0..i).all(|j| {
                let e1 = self.edge(i, j);
                let e2 = other.edge(t, map[j]);
                match (e1, e2) {
                    (None, None) => true,
                    (Some(x), Some(y)) => {
                        x.bond == y.bond
                            && match (x.arrow_to, y.arrow_to) {
                                (None, None) => true,
                                (Some(a), Some(b)) => (a == i && b == t) || (a == j && b == map[j]),
                                _ => false,
                            }
                    }
                    _ => false,
                }
            });
            if ok {
                used[t] = true;
                map.push(t);
                self.iso_rec(other, map, used, out);
                map.pop();
                used[t] = false;
            }
        }
    }

    pub fn same_shape(&self, other: &DynkinDiagram) -> bool {
        !self.isomorphisms(other).is_empty()
    }

    /// Deterministic text rendering.
    pub fn render(&self, format: RenderFormat) -> String {
        match format {
            RenderFormat::Ascii => self.render_ascii(),
            RenderFormat::Dot => self.render_dot(),
        }
    }

    fn bond_glyph(&self, e: &DiagramEdge, from: usize) -> String {
        let line = match e.bond {
            1 => "-",
            2 => "=",
            3 => "#",
            _ => "%",
        };
        match e.arrow_to {
            None => line.repeat(3),
            Some(t) if t == from => format!("{line}<{line}"),
            Some(_) => format!("{line}>{line}"),
        }
    }

    fn glyph(&self, i: usize) -> &'static str {
        if self.nodes[i].extra {
            "*"
        } else {
            "o"
        }
    }

    fn chain(&self) -> Option<Vec<usize>> {
        let n = self.nodes.len();
        if n == 0 || self.edges.len() + 1 != n {
            return None;
        }
        let deg = |i: usize| self.edges.iter().filter(|e| e.a == i || e.b == i).count();
        if (0..n).any(|i| deg(i) > 2) {
            return None;
        }
        let ends: Vec<usize> = (0..n).filter(|&i| deg(i) <= 1).collect();
        // Start from the end carrying the extra node if any, else the lowest.
        let start = ends.iter().copied().find(|&i| self.nodes[i].extra).unwrap_or(ends[0]);
        let mut path = vec![start];
        while path.len() < n {
            let cur = *path.last().unwrap();
            let next = (0..n).find(|&j| !path.contains(&j) && self.edge(cur, j).is_some())?;
            path.push(next);
        }
        Some(path)
    }

    fn render_ascii(&self) -> String {
        let mut out = String::new();
        match self.chain() {
            Some(path) => {
                let mut line = self.glyph(path[0]).to_string();
                for w in path.windows(2) {
                    let e = self.edge(w[0], w[1]).unwrap();
                    line.push_str(&self.bond_glyph(e, w[0]));
                    line.push_str(self.glyph(w[1]));
                }
                out.push_str(&line);
                out.push('\n');
                let labels: Vec<&str> = path.iter().map(|&i| self.nodes[i].label.as_str()).collect();
                out.push_str(&labels.join(" "));
                out.push('\n');
            }
            None => {
                for e in &self.edges {
                    out.push_str(&format!(
                        "{}{}{}{}  {} {}\n",
                        self.glyph(e.a),
                        self.bond_glyph(e, e.a),
                        self.glyph(e.b),
                        "",
                        self.nodes[e.a].label,
                        self.nodes[e.b].label
                    ));
                }
            }
        }
        out
    }

    fn render_dot(&self) -> String {
        let mut out = format!("graph \"{}\" {{\n", self.name.replace('"', "'"));
        for (i, n) in self.nodes.iter().enumerate() {
            let style = if n.extra { ", style=filled, fillcolor=black, fontcolor=white" } else { "" };
            out.push_str(&format!("  n{i} [label=\"{}\"{style}];\n", n.label));
        }
        for e in &self.edges {
            let label = match e.arrow_to {
                None => format!("{}", e.bond),
                Some(t) => format!("{}>{}", e.bond, self.nodes[t].label),
            };
            out.push_str(&format!("  n{} -- n{} [label=\"{label}\"];\n", e.a, e.b));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Dot,
}

impl std::str::FromStr for RenderFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascii" => Ok(RenderFormat::Ascii),
            "dot" => Ok(RenderFormat::Dot),
            _ => Err(Error::Parse(format!("unknown diagram format {s:?}"))),
        }
    }
}

/// Coordinates of `x` in the basis `b` (columns), over the rationals.
fn coordinates(b: &[IVec], rank: usize, x: &[i64]) -> Result<Vec<Q64>> {
    let bt = lattice::transpose(b, rank);
    let sol = lattice::solve_rational(&bt, b.len(), &lattice::rational_vec(x))?
        .ok_or_else(|| Error::Domain("S' image outside the span of S'(Δ)".into()))?;
    Ok(sol
        .iter()
        .map(|v| {
            use num_traits::ToPrimitive;
            Q64::new(v.numer().to_i64().unwrap(), v.denom().to_i64().unwrap())
        })
        .collect())
}

/// The extended diagram `P_Θ(Δ) ∪ {c(α̃) P_Θ(α̃)}` of an irreducible
/// datum (or one `Θ`-orbit of components).
pub fn extended_diagram(d: &RootDatum, inv: &PinnedInvolution) -> Result<DynkinDiagram> {
    let f = FoldedSystem::new(d, inv);
    let mut base: Vec<IVec> = Vec::new();
    for &i in &d.simple {
        let s = modified_twisted_sum(d, inv, i, false)?;
        if !base.contains(&s) {
            base.push(s);
        }
    }
    let mut best: Option<(Q64, IVec)> = None;
    for k in (0..d.roots.len()).filter(|&k| d.is_positive(k)) {
        let s = modified_twisted_sum(d, inv, k, false)?;
        let h: Q64 = coordinates(&base, d.rank, &s)?.iter().sum();
        if best.as_ref().is_none_or(|(bh, _)| h > *bh) {
            best = Some((h, s));
        }
    }
    let (_, highest) = best.ok_or_else(|| Error::Domain("no positive roots".into()))?;
    let target = lattice::neg(&highest);
    let tilde = (0..d.roots.len())
        .find(|&k| !d.is_positive(k) && modified_twisted_sum(d, inv, k, false).ok().as_ref() == Some(&target))
        .ok_or_else(|| Error::Domain("no negative root realizes the highest root".into()))?;
    let c = twist_factor(d, inv, tilde)?;
    assert!(c.is_integer());
    let c: i64 = num_traits::ToPrimitive::to_i64(&c.to_integer()).unwrap();
    let extra = f.project(&d.roots[tilde]).scale(c);

    let mut vecs: Vec<FoldedVec> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    for (pos, &i) in d.simple.iter().enumerate() {
        let v = f.project(&d.roots[i]);
        if let Some(j) = vecs.iter().position(|x| *x == v) {
            labels[j].push_str(&format!("/a{}", pos + 1));
            continue;
        }
        vecs.push(v);
        labels.push(format!("a{}", pos + 1));
    }
    let folded_rank = vecs.len();
    vecs.push(extra);
    labels.push("x".into());
    let cartan: Vec<IVec> = vecs.iter().map(|a| vecs.iter().map(|b| f.cartan_integer(a, b)).collect()).collect();
    // connectivity of the folded simple nodes
    let sub: Vec<IVec> = cartan[..folded_rank].iter().map(|r| r[..folded_rank].to_vec()).collect();
    if super::cartan_type::components(&sub).len() > 1 {
        return Err(Error::Domain("reducible root system without a transitive Θ".into()));
    }
    let nodes = vecs
        .iter()
        .zip(&labels)
        .enumerate()
        .map(|(i, (v, l))| DiagramNode { label: l.clone(), extra: i == folded_rank, hint: f.hint(v) })
        .collect();
    let name = format!("ext({}, ord {})", d.name, inv.order);
    Ok(DynkinDiagram::from_cartan(&name, nodes, cartan, vecs.iter().map(|v| v.p.clone()).collect()))
}

/// One entry of a subdiagram classification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubdiagramType {
    pub nodes: Vec<usize>,
    pub kind: CentralizerType,
}

/// Types of all proper node subsets of an extended diagram, one subset per
/// orbit of diagram symmetries.
pub fn classify_subdiagrams(diag: &DynkinDiagram) -> Result<Vec<SubdiagramType>> {
    let n = diag.nodes.len();
    if n == 0 || n > 20 {
        return Err(Error::Domain("diagram size out of range".into()));
    }
    let rank = n - 1;
    let autos = diag.isomorphisms(&diag);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) - 1 {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if seen.contains(&subset) {
            continue;
        }
        for a in &autos {
            let mut img: Vec<usize> = subset.iter().map(|&i| a[i]).collect();
            img.sort_unstable();
            seen.insert(img);
        }
        let sub: Vec<IVec> = subset.iter().map(|&i| subset.iter().map(|&j| diag.cartan[i][j]).collect()).collect();
        let hints: Vec<NodeHint> = subset.iter().map(|&i| diag.nodes[i].hint).collect();
        let kind = identify(&sub, &hints, rank - subset.len())?;
        out.push(SubdiagramType { nodes: subset, kind });
    }
    Ok(out)
}

/// Whether some element of `W^Θ` (the Weyl group of `Φ_Θ`) moves every
/// vector of `simple` into `targets`.
pub fn weyl_conjugate_into(f: &FoldedSystem, simple: &[FoldedVec], targets: &[IVec]) -> Result<bool> {
    let idx = |v: &FoldedVec| f.index_of(&v.p).ok_or_else(|| Error::Domain("vector outside Φ_Θ".into()));
    let start: Vec<usize> = simple.iter().map(idx).collect::<Result<_>>()?;
    let target: BTreeSet<usize> = targets.iter().filter_map(|t| f.index_of(t)).collect();
    // generators: reflections in all roots, as permutations of Φ_Θ
    let gens: Vec<Vec<usize>> = f
        .roots
        .iter()
        .filter(|b| f.is_positive(b))
        .map(|b| f.roots.iter().map(|x| idx(&f.reflect(b, x))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    while let Some(cur) = queue.pop_front() {
        if cur.iter().all(|i| target.contains(i)) {
            return Ok(true);
        }
        for g in &gens {
            let next: Vec<usize> = cur.iter().map(|&i| g[i]).collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(false)
}

/// A diagram of the table with the reference shape it must reproduce.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub label: String,
    pub diagram: DynkinDiagram,
    pub expected: DynkinDiagram,
}

impl TableRow {
    pub fn matches(&self) -> bool {
        self.diagram.same_shape(&self.expected)
    }
}

/// One block of the table: folded diagrams of `G` above, extended diagram
/// of the endoscopic group below.
#[derive(Clone, Debug)]
pub struct TableBlock {
    pub title: String,
    pub rows: Vec<TableRow>,
}

impl TableBlock {
    pub fn matches(&self) -> bool {
        self.rows.iter().all(TableRow::matches)
    }
}

fn reversal(rank: usize) -> Vec<usize> {
    (0..rank).rev().collect()
}

fn identity_diagram(letter: char, rank: usize) -> Result<DynkinDiagram> {
    let d = simple_type_datum(letter, rank)?;
    extended_diagram(&d, &PinnedInvolution::identity(d.rank))
}

fn folded_diagram(letter: char, rank: usize, perm: Vec<usize>) -> Result<DynkinDiagram> {
    let d = simple_type_datum(letter, rank)?;
    extended_diagram(&d, &diagram_automorphism(&d, &perm)?)
}

fn row(label: &str, diagram: DynkinDiagram, expected: DynkinDiagram) -> TableRow {
    TableRow { label: label.to_string(), diagram, expected }
}

/// The six blocks, each at a representative rank, with the reference
/// shapes they must reproduce. Node `0` of every reference shape is the
/// extra node.
pub fn table_blocks() -> Result<Vec<TableBlock>> {
    let s = DynkinDiagram::shape;
    let block = |title: &str, rows: Vec<TableRow>| TableBlock { title: title.to_string(), rows };
    Ok(vec![
        block(
            "A_{2n-1} / B_n",
            vec![
                row(
                    "A5, ord 2",
                    folded_diagram('A', 5, reversal(5))?,
                    s("A5", 4, Some(0), &[(0, 2, 1, None), (1, 2, 1, None), (2, 3, 2, Some(2))]),
                ),
                row(
                    "B3",
                    identity_diagram('B', 3)?,
                    s("B3", 4, Some(0), &[(0, 2, 1, None), (1, 2, 1, None), (2, 3, 2, Some(3))]),
                ),
            ],
        ),
        block(
            "A_3 / B_2",
            vec![
                row(
                    "A3, ord 2",
                    folded_diagram('A', 3, reversal(3))?,
                    s("A3", 3, Some(0), &[(1, 2, 2, Some(1)), (2, 0, 2, Some(0))]),
                ),
                row("B2", identity_diagram('B', 2)?, s("B2", 3, Some(0), &[(1, 2, 2, Some(2)), (2, 0, 2, Some(2))])),
            ],
        ),
        block(
            "A_{2n} / C_n",
            vec![
                row(
                    "A4, ord 2",
                    folded_diagram('A', 4, reversal(4))?,
                    s("A4", 3, Some(0), &[(0, 1, 2, Some(1)), (1, 2, 2, Some(2))]),
                ),
                row("A2, ord 2", folded_diagram('A', 2, reversal(2))?, s("A2", 2, Some(0), &[(0, 1, 4, Some(1))])),
                row("C2", identity_diagram('C', 2)?, s("C2", 3, Some(0), &[(0, 1, 2, Some(1)), (1, 2, 2, Some(1))])),
            ],
        ),
        block(
            "D_{n+1} / C_n",
            vec![
                row(
                    "D4, ord 2",
                    folded_diagram('D', 4, vec![0, 1, 3, 2])?,
                    s("D4", 4, Some(0), &[(0, 1, 2, Some(0)), (1, 2, 1, None), (2, 3, 2, Some(3))]),
                ),
                row(
                    "C3",
                    identity_diagram('C', 3)?,
                    s("C3", 4, Some(0), &[(0, 1, 2, Some(1)), (1, 2, 1, None), (2, 3, 2, Some(2))]),
                ),
            ],
        ),
        block(
            "E_6 / F_4",
            vec![
                row(
                    "E6, ord 2",
                    folded_diagram('E', 6, vec![5, 1, 4, 3, 2, 0])?,
                    s("E6", 5, Some(0), &[(1, 2, 1, None), (2, 3, 2, Some(3)), (3, 4, 1, None), (4, 0, 1, None)]),
                ),
                row(
                    "F4",
                    identity_diagram('F', 4)?,
                    s("F4", 5, Some(0), &[(1, 2, 1, None), (2, 3, 2, Some(2)), (3, 4, 1, None), (4, 0, 1, None)]),
                ),
            ],
        ),
        block(
            "D_4 (ord 3) / G_2",
            vec![
                row(
                    "D4, ord 3",
                    folded_diagram('D', 4, vec![2, 1, 3, 0])?,
                    s("D4/3", 3, Some(0), &[(1, 2, 3, Some(2)), (2, 0, 1, None)]),
                ),
                row("G2", identity_diagram('G', 2)?, s("G2", 3, Some(0), &[(1, 2, 3, Some(1)), (2, 0, 1, None)])),
            ],
        ),
    ])
}

/// Extended diagram of a built-in datum with its standard involution.
pub fn standard_extended_diagram(d: &RootDatum) -> Result<DynkinDiagram> {
    extended_diagram(d, &standard_involution(d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::datum::{builtin_datum, Family};

    #[test]
    fn table_blocks_match() {
        for b in table_blocks().unwrap() {
            for r in &b.rows {
                assert!(r.matches(), "{}:\n{}", r.label, r.diagram.render(RenderFormat::Ascii));
            }
        }
    }

    #[test]
    fn a4_has_seven_subdiagram_types() {
        let d = builtin_datum(Family::PGL, 5).unwrap();
        let diag = standard_extended_diagram(&d).unwrap();
        let types = classify_subdiagrams(&diag).unwrap();
        assert_eq!(types.len(), 7);
        let names: BTreeSet<Vec<String>> = types.iter().map(|t| t.kind.group_names()).collect();
        assert_eq!(names.len(), 7);
    }

    #[test]
    fn b2_renders_with_arrow() {
        let d = identity_diagram('B', 2).unwrap();
        let a = d.render(RenderFormat::Ascii);
        assert!(a.contains("=>=") || a.contains("=<="));
        assert_eq!(a, d.render(RenderFormat::Ascii));
    }
}
