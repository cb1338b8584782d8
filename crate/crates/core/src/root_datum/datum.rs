use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::lattice::{self, IVec};
use crate::error::{Error, Result};

/// Groups with built-in root data. Sizes are matrix sizes (`Sp` with 4 is
/// `Sp_4`, `GLxGm` with 4 is `GL_4 x G_m`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    GL,
    SL,
    PGL,
    Sp,
    SOOdd,
    SOEven,
    GSpinOdd,
    GLxGm,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "gl" => Family::GL,
            "sl" => Family::SL,
            "pgl" => Family::PGL,
            "sp" => Family::Sp,
            "soodd" | "so" => Family::SOOdd,
            "soeven" => Family::SOEven,
            "gspinodd" | "gspin" => Family::GSpinOdd,
            "glxgm" | "glgm" => Family::GLxGm,
            _ => return Err(Error::Parse(format!("unknown family {s:?}"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::GL => "GL",
            Family::SL => "SL",
            Family::PGL => "PGL",
            Family::Sp => "Sp",
            Family::SOOdd => "SO_odd",
            Family::SOEven => "SO_even",
            Family::GSpinOdd => "GSpin_odd",
            Family::GLxGm => "GLxGm",
        };
        f.write_str(s)
    }
}

/// A based root datum. Characters and cocharacters are written in dual
/// bases of `X^*` and `X_*`, so the pairing is the dot product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootDatum {
    pub name: String,
    pub rank: usize,
    pub roots: Vec<IVec>,
    /// `coroots[k]` is the coroot of `roots[k]`.
    pub coroots: Vec<IVec>,
    /// Indices of the simple roots.
    pub simple: Vec<usize>,
    /// Images of the `X^*` basis in the characters of an ambient diagonal
    /// torus; torus points are given in ambient coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<Vec<IVec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<(Family, usize)>,
}

impl RootDatum {
    pub fn pairing(x: &[i64], y: &[i64]) -> i64 {
        lattice::dot(x, y)
    }

    pub fn root_index(&self, r: &[i64]) -> Option<usize> {
        self.roots.iter().position(|x| x == r)
    }

    pub fn coroot_index(&self, c: &[i64]) -> Option<usize> {
        self.coroots.iter().position(|x| x == c)
    }

    pub fn semisimple_rank(&self) -> usize {
        self.simple.len()
    }

    pub fn simple_roots(&self) -> Vec<IVec> {
        self.simple.iter().map(|&i| self.roots[i].clone()).collect()
    }

    pub fn simple_coroots(&self) -> Vec<IVec> {
        self.simple.iter().map(|&i| self.coroots[i].clone()).collect()
    }

    /// `s_α(x) = x - <x, α^∨> α` on characters.
    pub fn reflect(&self, k: usize, x: &[i64]) -> IVec {
        let c = lattice::dot(x, &self.coroots[k]);
        x.iter().zip(&self.roots[k]).map(|(a, b)| a - c * b).collect()
    }

    pub fn reflect_coroot(&self, k: usize, y: &[i64]) -> IVec {
        let c = lattice::dot(&self.roots[k], y);
        y.iter().zip(&self.coroots[k]).map(|(a, b)| a - c * b).collect()
    }

    /// Coordinates of a root (or any element of the root lattice) in the
    /// simple roots.
    pub fn simple_coordinates(&self, x: &[i64]) -> Result<IVec> {
        let s = self.simple_roots();
        let a = lattice::transpose(&s, self.rank);
        lattice::solve_integer(&a, s.len(), x)?
            .ok_or_else(|| Error::Domain(format!("{x:?} is not in the root lattice")))
    }

    /// Cartan matrix `C[i][j] = <α_i, α_j^∨>` of the simple roots.
    pub fn cartan_matrix(&self) -> Vec<IVec> {
        let s = self.simple_roots();
        let c = self.simple_coroots();
        s.iter().map(|a| c.iter().map(|b| lattice::dot(a, b)).collect()).collect()
    }

    /// Check the root datum axioms and the basis property.
    pub fn validate(&self) -> Result<()> {
        if self.roots.len() != self.coroots.len() {
            return Err(Error::Domain("roots and coroots differ in number".into()));
        }
        for (a, c) in self.roots.iter().zip(&self.coroots) {
            if a.len() != self.rank || c.len() != self.rank {
                return Err(Error::Dimension("root of wrong length".into()));
            }
            if lattice::dot(a, c) != 2 {
                return Err(Error::Domain(format!("<{a:?}, {c:?}> != 2")));
            }
        }
        for k in 0..self.roots.len() {
            for (j, r) in self.roots.iter().enumerate() {
                let image = self.reflect(k, r);
                let idx = self
                    .root_index(&image)
                    .ok_or_else(|| Error::Domain(format!("reflection of {r:?} leaves the roots")))?;
                if self.reflect_coroot(k, &self.coroots[j]) != self.coroots[idx] {
                    return Err(Error::Domain("reflections do not respect the root-coroot bijection".into()));
                }
            }
        }
        let s = self.simple_roots();
        let st = lattice::transpose(&s, self.rank);
        let (_, rank) = lattice::column_reduce(&st, s.len());
        if rank != s.len() {
            return Err(Error::Domain("simple roots are dependent".into()));
        }
        for r in &self.roots {
            let c = self.simple_coordinates(r)?;
            if !(c.iter().all(|x| *x >= 0) || c.iter().all(|x| *x <= 0)) {
                return Err(Error::Domain(format!("root {r:?} has mixed signs")));
            }
        }
        Ok(())
    }

    /// Roots that are nonnegative combinations of the simple roots.
    pub fn is_positive(&self, k: usize) -> bool {
        self.simple_coordinates(&self.roots[k]).map(|c| c.iter().any(|x| *x > 0)).unwrap_or(false)
    }

    /// Evaluate a character (in `X^*` coordinates) on a diagonal ambient
    /// torus point, returning the ambient exponent vector.
    pub fn ambient_exponents(&self, x: &[i64]) -> Result<IVec> {
        let amb = self
            .ambient
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{} has no ambient torus", self.name)))?;
        let m = amb.first().map(Vec::len).unwrap_or(0);
        let mut out = vec![0; m];
        for (k, c) in x.iter().enumerate() {
            for i in 0..m {
                out[i] += c * amb[k][i];
            }
        }
        Ok(out)
    }

    pub fn ambient_dim(&self) -> Option<usize> {
        self.ambient.as_ref().map(|a| a.first().map(Vec::len).unwrap_or(0))
    }
}

fn unit(m: usize, i: usize) -> IVec {
    let mut v = vec![0; m];
    v[i] = 1;
    v
}

fn diff(m: usize, i: usize, j: usize) -> IVec {
    let mut v = vec![0; m];
    v[i] += 1;
    v[j] -= 1;
    v
}

fn signed(m: usize, i: usize, si: i64, j: usize, sj: i64) -> IVec {
    let mut v = vec![0; m];
    v[i] += si;
    v[j] += sj;
    v
}

/// Root data with roots written in an ambient basis, converted to `X^*`
/// coordinates through `to_x` and `to_y`.
struct Builder {
    roots: Vec<IVec>,
    coroots: Vec<IVec>,
    simple: Vec<IVec>,
}

impl Builder {
    fn new() -> Self {
        Builder { roots: vec![], coroots: vec![], simple: vec![] }
    }
    fn pair(&mut self, r: IVec, c: IVec) {
        self.roots.push(r);
        self.coroots.push(c);
    }
    fn pm(&mut self, r: IVec, c: IVec) {
        self.pair(lattice::neg(&r), lattice::neg(&c));
        self.pair(r, c);
    }
    fn finish(
        self,
        name: String,
        rank: usize,
        to_x: impl Fn(&[i64]) -> IVec,
        to_y: impl Fn(&[i64]) -> IVec,
        ambient: Option<Vec<IVec>>,
        family: Option<(Family, usize)>,
    ) -> Result<RootDatum> {
        let roots: Vec<IVec> = self.roots.iter().map(|r| to_x(r)).collect();
        let coroots: Vec<IVec> = self.coroots.iter().map(|c| to_y(c)).collect();
        let mut simple = Vec::new();
        for s in &self.simple {
            let x = to_x(s);
            simple.push(roots.iter().position(|r| *r == x).expect("simple root listed"));
        }
        let d = RootDatum { name, rank, roots, coroots, simple, ambient, family };
        d.validate()?;
        Ok(d)
    }
}

/// The root datum of a classical group with the standard diagonal torus.
pub fn builtin_datum(family: Family, size: usize) -> Result<RootDatum> {
    let bad = || Err(Error::Unsupported(format!("{family} of size {size}")));
    let name = format!("{family}_{size}");
    let fam = Some((family, size));
    match family {
        Family::GL => {
            if size == 0 {
                return bad();
            }
            let m = size;
            let mut b = Builder::new();
            type_a_roots(&mut b, m, 0);
            let amb = (0..m).map(|i| unit(m, i)).collect();
            b.finish(name, m, |x| x.to_vec(), |y| y.to_vec(), Some(amb), fam)
        }
        Family::SL => {
            if size < 2 {
                return bad();
            }
            let m = size;
            let mut b = Builder::new();
            type_a_roots(&mut b, m, 0);
            // X^* = Z^m / Z(1,..,1) with basis the images of e_1..e_{m-1}.
            let to_x = move |x: &[i64]| (0..m - 1).map(|k| x[k] - x[m - 1]).collect::<IVec>();
            let to_y = move |y: &[i64]| y[..m - 1].to_vec();
            let amb = (0..m - 1).map(|i| unit(m, i)).collect();
            b.finish(name, m - 1, to_x, to_y, Some(amb), fam)
        }
        Family::PGL => {
            if size < 2 {
                return bad();
            }
            let m = size;
            let mut b = Builder::new();
            type_a_roots(&mut b, m, 0);
            // X^* = sum-zero characters with basis b_k = e_k - e_{k+1}.
            let to_x = move |x: &[i64]| {
                let mut acc = 0;
                (0..m - 1)
                    .map(|k| {
                        acc += x[k];
                        acc
                    })
                    .collect::<IVec>()
            };
            let to_y = move |y: &[i64]| (0..m - 1).map(|k| y[k] - y[k + 1]).collect::<IVec>();
            let amb = (0..m - 1).map(|k| diff(m, k, k + 1)).collect();
            b.finish(name, m - 1, to_x, to_y, Some(amb), fam)
        }
        Family::Sp => {
            if size < 2 || size % 2 != 0 {
                return bad();
            }
            let n = size / 2;
            let mut b = Builder::new();
            type_bcd_roots(&mut b, n, 0);
            for i in 0..n {
                b.pm(lattice::scale(2, &unit(n, i)), unit(n, i));
            }
            if n == 1 {
                b.simple = vec![lattice::scale(2, &unit(1, 0))];
            } else {
                b.simple = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                b.simple.push(lattice::scale(2, &unit(n, n - 1)));
            }
            let amb = (0..n).map(|i| unit(n, i)).collect();
            b.finish(name, n, |x| x.to_vec(), |y| y.to_vec(), Some(amb), fam)
        }
        Family::SOOdd => {
            if size < 3 || size % 2 != 1 {
                return bad();
            }
            let n = size / 2;
            let mut b = Builder::new();
            type_bcd_roots(&mut b, n, 0);
            for i in 0..n {
                b.pm(unit(n, i), lattice::scale(2, &unit(n, i)));
            }
            b.simple = (0..n.saturating_sub(1)).map(|i| diff(n, i, i + 1)).collect();
            b.simple.push(unit(n, n - 1));
            let amb = (0..n).map(|i| unit(n, i)).collect();
            b.finish(name, n, |x| x.to_vec(), |y| y.to_vec(), Some(amb), fam)
        }
        Family::SOEven => {
            if size < 4 || size % 2 != 0 {
                return bad();
            }
            let n = size / 2;
            let mut b = Builder::new();
            type_bcd_roots(&mut b, n, 0);
            b.simple = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            b.simple.push(signed(n, n - 2, 1, n - 1, 1));
            let amb = (0..n).map(|i| unit(n, i)).collect();
            b.finish(name, n, |x| x.to_vec(), |y| y.to_vec(), Some(amb), fam)
        }
        Family::GSpinOdd => {
            if size < 3 || size % 2 != 1 {
                return bad();
            }
            // Basis e'_0, e'_1..e'_n; coroots of ±e'_i ± e'_j involve f'_0.
            let n = size / 2;
            let r = n + 1;
            let mut b = Builder::new();
            for i in 1..=n {
                for j in i + 1..=n {
                    b.pm(diff(r, i, j), diff(r, i, j));
                    let mut c = signed(r, i, 1, j, 1);
                    c[0] = -1;
                    b.pm(signed(r, i, 1, j, 1), c);
                }
                let mut c = lattice::scale(2, &unit(r, i));
                c[0] = -1;
                b.pm(unit(r, i), c);
            }
            b.simple = (1..n).map(|i| diff(r, i, i + 1)).collect();
            b.simple.push(unit(r, n));
            let amb = (0..r).map(|i| unit(r, i)).collect();
            b.finish(name, r, |x| x.to_vec(), |y| y.to_vec(), Some(amb), fam)
        }
        Family::GLxGm => {
            if size < 2 || size % 2 != 0 {
                return bad();
            }
            // Coordinate 0 is the G_m factor, 1..=2n the GL part.
            let m = size + 1;
            let mut b = Builder::new();
            type_a_roots(&mut b, size, 1);
            let amb = (0..m).map(|i| unit(m, i)).collect();
            let shift = |v: &[i64]| v.to_vec();
            b.finish(name, m, shift, shift, Some(amb), fam)
        }
    }
}

/// Roots `e_i - e_j` on coordinates `offset..offset+m` of an `(offset+m)`-space.
fn type_a_roots(b: &mut Builder, m: usize, offset: usize) {
    let dim = m + offset;
    for i in 0..m {
        for j in i + 1..m {
            let v = diff(dim, i + offset, j + offset);
            b.pm(v.clone(), v);
        }
    }
    b.simple = (0..m.saturating_sub(1)).map(|i| diff(dim, i + offset, i + 1 + offset)).collect();
}

/// Roots `±e_i ± e_j` (i < j), self-dual.
fn type_bcd_roots(b: &mut Builder, n: usize, offset: usize) {
    let dim = n + offset;
    for i in 0..n {
        for j in i + 1..n {
            let v = diff(dim, i + offset, j + offset);
            b.pm(v.clone(), v);
            let w = signed(dim, i + offset, 1, j + offset, 1);
            b.pm(w.clone(), w);
        }
    }
}

/// Adjoint root datum (characters = root lattice) of a Cartan matrix with
/// `C[i][j] = <α_i, α_j^∨>`.
pub fn cartan_datum(name: &str, cartan: &[IVec]) -> Result<RootDatum> {
    let k = cartan.len();
    let lengths = symmetrizer(cartan)?;
    let mut positive: Vec<IVec> = (0..k).map(|i| unit(k, i)).collect();
    let mut idx: HashMap<IVec, usize> = positive.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let mut start = 0;
    while start < positive.len() {
        let end = positive.len();
        for r in start..end {
            let beta = positive[r].clone();
            for j in 0..k {
                let pair: i64 = (0..k).map(|i| beta[i] * cartan[i][j]).sum();
                // p = length of the string below beta
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[j] -= 1;
                    if idx.contains_key(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - pair;
                if q > 0 {
                    let mut up = beta.clone();
                    up[j] += 1;
                    if !idx.contains_key(&up) {
                        idx.insert(up.clone(), positive.len());
                        positive.push(up);
                    }
                }
            }
        }
        start = end;
    }
    let mut b = Builder::new();
    for r in &positive {
        // β^∨ = Σ c_i (d_i / d_β) α_i^∨ ; coordinates <α_l, β^∨>.
        let d_beta = norm(r, cartan, &lengths);
        let mut cor = vec![0i64; k];
        for (l, c) in cor.iter_mut().enumerate() {
            let mut acc = num_rational::Ratio::<i64>::from_integer(0);
            for i in 0..k {
                acc += num_rational::Ratio::new(r[i] * cartan[l][i], 1) * lengths[i] / d_beta;
            }
            assert!(acc.is_integer(), "coroot is integral");
            *c = acc.to_integer();
        }
        b.pm(r.clone(), cor);
    }
    b.simple = (0..k).map(|i| unit(k, i)).collect();
    b.finish(name.to_string(), k, |x| x.to_vec(), |y| y.to_vec(), None, None)
}

pub(crate) type Q64 = num_rational::Ratio<i64>;

/// Squared lengths `d_i` with `d_j C[i][j] = d_i C[j][i]`, shortest root of
/// each component of length 2.
pub(crate) fn symmetrizer(cartan: &[IVec]) -> Result<Vec<Q64>> {
    let k = cartan.len();
    let mut d: Vec<Option<Q64>> = vec![None; k];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..k {
        if d[s].is_some() {
            continue;
        }
        d[s] = Some(Q64::from_integer(1));
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if i != j && cartan[i][j] != 0 {
                    if cartan[j][i] == 0 {
                        return Err(Error::Domain("Cartan matrix is not symmetrizable".into()));
                    }
                    let dj = d[i].unwrap() * Q64::new(cartan[j][i], cartan[i][j]);
                    match d[j] {
                        None => {
                            d[j] = Some(dj);
                            comp.push(j);
                            stack.push(j);
                        }
                        Some(x) if x != dj => return Err(Error::Domain("inconsistent symmetrizer".into())),
                        _ => {}
                    }
                }
            }
        }
        comps.push(comp);
    }
    let mut out: Vec<Q64> = d.into_iter().map(|x| x.unwrap()).collect();
    for comp in comps {
        let min = comp.iter().map(|&i| out[i]).min().unwrap();
        for &i in &comp {
            out[i] = out[i] * 2 / min;
        }
    }
    Ok(out)
}

/// `(x, x)` for `x` in simple-root coordinates.
pub(crate) fn norm(x: &[i64], cartan: &[IVec], lengths: &[Q64]) -> Q64 {
    let k = cartan.len();
    let mut acc = Q64::from_integer(0);
    for i in 0..k {
        for j in 0..k {
            // (α_i, α_j) = C[i][j] d_j / 2
            acc += Q64::from_integer(x[i] * x[j] * cartan[i][j]) * lengths[j] / 2;
        }
    }
    acc
}

/// Cartan matrix of a simple type in Bourbaki numbering.
pub fn simple_cartan(letter: char, rank: usize) -> Result<Vec<IVec>> {
    let mut c: Vec<IVec> = (0..rank).map(|i| (0..rank).map(|j| if i == j { 2 } else { 0 }).collect()).collect();
    let mut link = |i: usize, j: usize, cij: i64, cji: i64| {
        c[i][j] = cij;
        c[j][i] = cji;
    };
    match (letter, rank) {
        ('A', n) if n >= 1 => (0..n - 1).for_each(|i| link(i, i + 1, -1, -1)),
        ('B', n) if n >= 2 => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            // α_{n-1} long, α_n short: <α_{n-1}, α_n^∨> = -2
            link(n - 2, n - 1, -2, -1);
        }
        ('C', n) if n >= 2 => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -1, -2);
        }
        ('D', n) if n >= 3 => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 3, n - 1, -1, -1);
        }
        ('E', n) if (6..=8).contains(&n) => {
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            (2..n - 1).for_each(|i| link(i, i + 1, -1, -1));
        }
        ('F', 4) => {
            link(0, 1, -1, -1);
            link(1, 2, -2, -1);
            link(2, 3, -1, -1);
        }
        ('G', 2) => link(0, 1, -3, -1),
        _ => return Err(Error::Unsupported(format!("type {letter}{rank}"))),
    }
    Ok(c)
}

/// Adjoint root datum of a simple type, e.g. `('E', 6)`.
pub fn simple_type_datum(letter: char, rank: usize) -> Result<RootDatum> {
    cartan_datum(&format!("{letter}{rank}"), &simple_cartan(letter, rank)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        assert_eq!(builtin_datum(Family::PGL, 5).unwrap().roots.len(), 20);
        assert_eq!(builtin_datum(Family::Sp, 4).unwrap().roots.len(), 8);
        assert_eq!(builtin_datum(Family::SOEven, 8).unwrap().roots.len(), 24);
        assert_eq!(builtin_datum(Family::GSpinOdd, 7).unwrap().roots.len(), 18);
        assert_eq!(builtin_datum(Family::GLxGm, 4).unwrap().rank, 5);
        assert_eq!(simple_type_datum('E', 6).unwrap().roots.len(), 72);
        assert_eq!(simple_type_datum('F', 4).unwrap().roots.len(), 48);
        assert_eq!(simple_type_datum('G', 2).unwrap().roots.len(), 12);
        assert_eq!(simple_type_datum('D', 4).unwrap().roots.len(), 24);
    }

    #[test]
    fn pgl_rank_and_pairing() {
        let d = builtin_datum(Family::PGL, 5).unwrap();
        assert_eq!(d.rank, 4);
        // e_1 - e_5 pairs with f_1 - f_5 to 2
        let k = d.roots.iter().position(|r| d.ambient_exponents(r).unwrap() == vec![1, 0, 0, 0, -1]).unwrap();
        assert_eq!(RootDatum::pairing(&d.roots[k], &d.coroots[k]), 2);
    }

    #[test]
    fn sp4_roots_in_standard_form() {
        let d = builtin_datum(Family::Sp, 4).unwrap();
        let mut r = d.roots.clone();
        r.sort();
        let mut expected = vec![
            vec![1, -1],
            vec![-1, 1],
            vec![1, 1],
            vec![-1, -1],
            vec![2, 0],
            vec![-2, 0],
            vec![0, 2],
            vec![0, -2],
        ];
        expected.sort();
        assert_eq!(r, expected);
    }
}
