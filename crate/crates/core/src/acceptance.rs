//! The acceptance suite: twelve seeded property runs over the constructive
//! layer. Shared by the `acceptance` test target and the `selftest` verb.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::exact_scalars::{rat, LocalRing, PadicInt, Rational, RationalField, Ring, SquareRing, Zp, Zq};
use crate::forms_matrices::sample::{
    o_minus_torus, random_elem, random_orthogonal, random_special, random_symplectic,
    random_unimodular, random_unit, semisimple_symplectic, theta_semisimple, theta_semisimple_special,
};
use crate::forms_matrices::forms::pair;
use crate::forms_matrices::transfer::companion;
use crate::forms_matrices::{
    cayley_orth, cayley_orth_inverse, cayley_sp, cayley_sp_inverse, eigen_orthogonality, eigenlattice_split,
    integral_conjugacy_transfer, j_matrix, j_prime, left_norm, pm0_decomposition, preserves, reflection,
    spinor_norm, spinor_norm_by_reflections, split_fixed_space, teichmuller_roots, SplitMode, TransferMode,
    TransferOutcome,
};
use crate::linalg::Matrix;
use crate::norm_matching::{
    bc1_isogeny_check, formula_a2n, formula_b, formula_d, norm_a2n, norm_b, norm_d, norm_d_image_test_integral,
    norm_d_image_test_rational, odd_orthogonal_coordinates, obstructed_beta, signed_permutation_match, swap_middle,
    symplectic_coordinates,
};
use crate::padic_jordan::{is_topologically_unipotent, reduction_check, topological_jordan, topological_jordan_with};
use crate::root_datum::diagram::standard_extended_diagram;
use crate::root_datum::{
    builtin_datum, classify_subdiagrams, endoscopic_datum, find_isomorphism, standard_involution,
    steinberg_fixed_system, table_blocks, Family, TorusPoint,
};

pub const DATUM_LIMIT: Duration = Duration::from_secs(5);
pub const CAYLEY_LIMIT: Duration = Duration::from_secs(30);
pub const JORDAN_LIMIT: Duration = Duration::from_secs(60);

pub const CAYLEY_ROUND_TRIPS: usize = 200;
pub const CAYLEY_EQUIVARIANCE: usize = 50;
pub const DECOMPOSITION_SAMPLES: usize = 200;
pub const MATCHING_SAMPLES: usize = 100;
pub const FIBER_SAMPLES: usize = 50;
pub const SPINOR_SAMPLES: usize = 100;
pub const JORDAN_SAMPLES: usize = 100;
pub const TRANSFER_SAMPLES: usize = 50;
pub const BC1_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub seed: u64,
    pub detail: String,
    /// Left out of reports that must be reproducible byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
}

struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<String, Failure>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(Failure(format!($($fmt)+)));
        }
    };
}

type Check = fn(&mut ChaCha8Rng) -> Outcome;

const CRITERIA: [(u32, &str, Check, Option<Duration>); 12] = [
    (1, "endoscopic data", endoscopic_data, Some(DATUM_LIMIT)),
    (2, "extended diagram table", diagram_table, None),
    (3, "A4 classification", a4_classification, None),
    (4, "Cayley suites", cayley_suites, Some(CAYLEY_LIMIT)),
    (5, "decomposition suites", decomposition_suites, None),
    (6, "norm-map matching", norm_matching, None),
    (7, "fibers", fibers, None),
    (8, "spinor norm", spinor_norms, None),
    (9, "topological Jordan", jordan, Some(JORDAN_LIMIT)),
    (10, "integral transfer", transfer, None),
    (11, "non-image witness", non_image, None),
    (12, "BC1 isogeny", bc1, None),
];

pub fn criterion_ids() -> Vec<u32> {
    CRITERIA.iter().map(|c| c.0).collect()
}

/// Per-criterion seed, so that criteria can be rerun on their own.
pub fn criterion_seed(seed: u64, id: u32) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(id as u64)
}

pub fn run_one(seed: u64, id: u32) -> Option<CriterionResult> {
    let &(id, name, check, limit) = CRITERIA.iter().find(|c| c.0 == id)?;
    let s = criterion_seed(seed, id);
    let mut rng = ChaCha8Rng::seed_from_u64(s);
    let start = Instant::now();
    let out = check(&mut rng);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match out {
        Ok(d) => (true, d),
        Err(Failure(d)) => (false, d),
    };
    if let Some(l) = limit {
        if elapsed > l {
            passed = false;
            detail = format!("{detail}; took {:.1}s, limit {}s", elapsed.as_secs_f64(), l.as_secs());
        }
    }
    Some(CriterionResult { id, name, passed, seed: s, detail, elapsed })
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run_one(seed, c.0)).collect()
}

// 1

fn endoscopic_data(_: &mut ChaCha8Rng) -> Outcome {
    let mut count = 0;
    for n in 1..=4 {
        for (src, target) in [
            ((Family::PGL, 2 * n + 1), (Family::Sp, 2 * n)),
            ((Family::GLxGm, 2 * n), (Family::GSpinOdd, 2 * n + 1)),
            ((Family::SOEven, 2 * n + 2), (Family::Sp, 2 * n)),
        ] {
            let g = builtin_datum(src.0, src.1)?;
            let h = endoscopic_datum(&g, &standard_involution(&g)?)?;
            let t = builtin_datum(target.0, target.1)?;
            ensure!(find_isomorphism(&h, &t)?.is_some(), "endoscopic datum of {} is not {}", g.name, t.name);
            count += 1;
        }
    }
    Ok(format!("{count} endoscopic data isomorphic to Sp / GSpin / Sp"))
}

// 2

fn diagram_table(_: &mut ChaCha8Rng) -> Outcome {
    let blocks = table_blocks()?;
    ensure!(blocks.len() == 6, "{} blocks", blocks.len());
    let mut rows = 0;
    for b in &blocks {
        for r in &b.rows {
            ensure!(r.matches(), "{} / {}: shape differs", b.title, r.label);
            rows += 1;
        }
    }
    Ok(format!("6 blocks, {rows} diagrams match"))
}

// 3

fn a4_cases() -> Vec<(Vec<i64>, Vec<&'static str>)> {
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

fn a4_classification(_: &mut ChaCha8Rng) -> Outcome {
    let mut printed = BTreeSet::new();
    for fam in [Family::PGL, Family::SL] {
        let d = builtin_datum(fam, 5)?;
        let th = standard_involution(&d)?;
        for (e, names) in a4_cases() {
            let fs = steinberg_fixed_system(&d, &th, &TorusPoint::roots_of_unity(24, e.clone()))?;
            let got = fs.kind.group_names();
            ensure!(got == names, "{fam} s = {e:?}: {got:?}, expected {names:?}");
            printed.insert(got);
        }
    }
    let diag = standard_extended_diagram(&builtin_datum(Family::PGL, 5)?)?;
    let types = classify_subdiagrams(&diag)?;
    let listed: BTreeSet<Vec<String>> = types.iter().map(|t| t.kind.group_names()).collect();
    ensure!(types.len() == 7, "classification lists {} types", types.len());
    ensure!(listed == printed, "classification {listed:?} differs from fixed systems {printed:?}");
    Ok("7 fixed systems and 7 subdiagram types agree".into())
}

// 4

fn rational_elem(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=3))
}

fn random_symmetric<R: Ring>(r: &R, n: usize, mut elem: impl FnMut() -> R::Elem) -> Matrix<R::Elem> {
    let mut m = Matrix::zeros(r, n, n);
    for i in 0..n {
        for j in i..n {
            let x = elem();
            m.set(i, j, x.clone());
            m.set(j, i, x);
        }
    }
    m
}

fn random_alternating<R: Ring>(r: &R, n: usize, mut elem: impl FnMut() -> R::Elem) -> Matrix<R::Elem> {
    let mut m = Matrix::zeros(r, n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = elem();
            m.set(j, i, r.neg(&x));
            m.set(i, j, x);
        }
    }
    m
}

/// `Π (1 + c v ᵗv p)`: transvections preserving the alternating form `p`.
fn transvections<R: Ring>(r: &R, p: &Matrix<R::Elem>, count: usize, mut elem: impl FnMut() -> R::Elem) -> Matrix<R::Elem> {
    let n = p.rows();
    let mut g = Matrix::identity(r, n);
    for _ in 0..count {
        let v = Matrix::from_fn(n, 1, |_, _| elem());
        let c = elem();
        g = g.mul(r, &Matrix::identity(r, n).add(r, &v.mul(r, &v.transpose()).mul(r, p).scale(r, &c)));
    }
    g
}

fn reflections<R: Ring>(r: &R, q: &Matrix<R::Elem>, count: usize, mut elem: impl FnMut() -> R::Elem) -> Matrix<R::Elem> {
    let n = q.rows();
    let mut g = Matrix::identity(r, n);
    let mut k = 0;
    while k < count {
        let v: Vec<_> = (0..n).map(|_| elem()).collect();
        if let Ok(s) = reflection(r, q, &v) {
            if r.is_unit(&pair(r, q, &v, &v)) {
                g = g.mul(r, &s);
                k += 1;
            }
        }
    }
    g
}

#[derive(Default)]
struct CayleyCounts {
    round_trips: usize,
    equivariance: usize,
}

fn cayley_suite<R: Ring>(r: &R, rng: &mut ChaCha8Rng, elem: fn(&R, &mut ChaCha8Rng) -> R::Elem) -> std::result::Result<CayleyCounts, Failure> {
    let mut c = CayleyCounts::default();
    let name = r.descriptor();
    // symplectic side, p = J_2m
    let mut tries = 0;
    while c.round_trips < CAYLEY_ROUND_TRIPS {
        tries += 1;
        ensure!(tries < 20 * CAYLEY_ROUND_TRIPS, "{name:?}: too few essential samples");
        let m = 2 * rng.gen_range(1..=3);
        let p = j_matrix(r, m);
        let q = random_symmetric(r, m, || elem(r, rng));
        let Ok(b) = cayley_sp(r, &q, &p) else { continue };
        ensure!(preserves(r, &b, &p), "{name:?}: C(q) is not symplectic");
        ensure!(cayley_sp_inverse(r, &b, &p)?.equal(r, &q), "{name:?}: symplectic round trip failed");
        if c.equivariance < CAYLEY_EQUIVARIANCE {
            let g = transvections(r, &p, 2, || elem(r, rng));
            let lhs = cayley_sp(r, &g.transpose().mul(r, &q).mul(r, &g), &p)?;
            let rhs = g.inverse(r)?.mul(r, &b).mul(r, &g);
            ensure!(lhs.equal(r, &rhs), "{name:?}: symplectic equivariance failed");
            c.equivariance += 1;
        }
        c.round_trips += 1;
    }
    // orthogonal side, q diagonal with unit entries
    let (mut rt, mut eq) = (0, 0);
    tries = 0;
    while rt < CAYLEY_ROUND_TRIPS {
        tries += 1;
        ensure!(tries < 20 * CAYLEY_ROUND_TRIPS, "{name:?}: too few essential samples");
        let n = rng.gen_range(1..=5);
        let diag: Vec<_> = (0..n)
            .map(|_| loop {
                let x = elem(r, rng);
                if r.is_unit(&x) {
                    break x;
                }
            })
            .collect();
        let q = Matrix::diagonal(r, &diag);
        let p = random_alternating(r, n, || elem(r, rng));
        let Ok(b) = cayley_orth(r, &p, &q) else { continue };
        ensure!(preserves(r, &b, &q), "{name:?}: C̃(p) is not orthogonal");
        let sign = if n % 2 == 0 { r.one() } else { r.from_i64(-1) };
        ensure!(r.equal(&b.det(r), &sign), "{name:?}: det C̃(p) is not (-1)^{n}");
        ensure!(cayley_orth_inverse(r, &b, &q)?.equal(r, &p), "{name:?}: orthogonal round trip failed");
        if eq < CAYLEY_EQUIVARIANCE {
            let g = reflections(r, &q, 2, || elem(r, rng));
            let lhs = cayley_orth(r, &g.transpose().mul(r, &p).mul(r, &g), &q)?;
            let rhs = g.inverse(r)?.mul(r, &b).mul(r, &g);
            ensure!(lhs.equal(r, &rhs), "{name:?}: orthogonal equivariance failed");
            eq += 1;
        }
        rt += 1;
    }
    c.round_trips += rt;
    c.equivariance += eq;
    Ok(c)
}

fn cayley_suites(rng: &mut ChaCha8Rng) -> Outcome {
    let mut total = CayleyCounts::default();
    let q = cayley_suite(&RationalField, rng, |_, g| rational_elem(g))?;
    total.round_trips += q.round_trips;
    total.equivariance += q.equivariance;
    for p in [3, 5, 7] {
        let r = Zp::new(p, 6)?;
        let c = cayley_suite(&r, rng, |r, g| random_elem(r, g))?;
        total.round_trips += c.round_trips;
        total.equivariance += c.equivariance;
    }
    Ok(format!(
        "{} round trips and {} equivariance checks over Q, Z_3, Z_5, Z_7 (mod p^6)",
        total.round_trips, total.equivariance
    ))
}

// 5

fn zeta_diag(r: &Zp, t: &[i64]) -> Vec<PadicInt> {
    let z = r.teichmuller_generator();
    t.iter().map(|&e| r.pow(&z, e.rem_euclid(r.p as i64 - 1) as u128)).collect()
}

fn pm0_checks(r: &Zp, h: &Matrix<PadicInt>, h0: &Matrix<PadicInt>) -> std::result::Result<(), Failure> {
    let d = pm0_decomposition(r, h)?;
    for (what, m) in [("q on M+", &d.q_plus), ("p on M-", &d.p_minus), ("q on M0", &d.q_zero), ("p on M0", &d.p_zero)] {
        ensure!(m.rows() == 0 || r.is_unit(&m.det(r)), "{what} is not unimodular");
    }
    ensure!(d.ranks() == pm0_decomposition(r, h0)?.ranks(), "ranks change under congruence");
    let split = eigenlattice_split(r, &left_norm(r, h)?, &teichmuller_roots(r))?;
    ensure!(eigen_orthogonality(r, h, &split), "eigenlattices are not orthogonal");
    Ok(())
}

fn decomposition_suites(rng: &mut ChaCha8Rng) -> Outcome {
    let r = Zp::new(7, 8)?;
    for _ in 0..DECOMPOSITION_SAMPLES {
        let n = rng.gen_range(1..=3);
        for m in [2 * n + 1, 2 * n] {
            let (h, t, _) = theta_semisimple(&r, m, rng);
            let h0 = Matrix::diagonal(&r, &t).mul(&r, &j_matrix(&r, m));
            pm0_checks(&r, &h, &h0)?;
        }
        let jp = j_prime(&r, 2 * n + 2)?;
        let (b0, _) = o_minus_torus(&r, n, rng)?;
        let k = random_orthogonal(&r, &jp, 2 * n + 2, rng)?;
        let b = k.inverse(&r)?.mul(&r, &b0).mul(&r, &k);
        let s = split_fixed_space(&r, &b, &jp, SplitMode::PlusMinus)?;
        let s0 = split_fixed_space(&r, &b0, &jp, SplitMode::PlusMinus)?;
        let (np, nm) = (s.plus.cols(), s.minus.cols());
        ensure!(np % 2 == 1 && nm % 2 == 1, "ranks of N± are {np}, {nm}");
        ensure!((np, nm) == (s0.plus.cols(), s0.minus.cols()), "±-ranks change under conjugation");
        let basis = s.basis();
        let g = jp.gram_on(&r, &basis);
        let blocks = [0, np, np + nm, basis.cols()];
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                for a in blocks[i]..blocks[i + 1] {
                    for c in blocks[j]..blocks[j + 1] {
                        ensure!(r.is_zero(g.get(a, c)), "N+, N-, N* are not orthogonal");
                    }
                }
            }
        }
        ensure!(b.mul(&r, &s.plus).equal(&r, &s.plus), "b is not 1 on N+");
        ensure!(b.mul(&r, &s.minus).equal(&r, &s.minus.neg(&r)), "b is not -1 on N-");
    }
    Ok(format!("{DECOMPOSITION_SAMPLES} samples each of GL_2n+1, GL_2n and O_2n+2 type pass"))
}

// 6

fn random_exponents(rng: &mut ChaCha8Rng, order: i64, count: usize) -> Vec<i64> {
    (0..count).map(|_| rng.gen_range(0..order)).collect()
}

fn d_torus(r: &Zp, t: &[i64]) -> std::result::Result<Matrix<PadicInt>, Failure> {
    let d = zeta_diag(r, t);
    let mut full = d.clone();
    for x in d.iter().rev() {
        full.push(r.inv(x)?);
    }
    Ok(swap_middle(r, &Matrix::diagonal(r, &full)))
}

fn weyl_match(order: u64, want: Vec<i64>, got: Vec<i64>, what: &str) -> std::result::Result<(), Failure> {
    let rep = signed_permutation_match(&TorusPoint::roots_of_unity(order, want.clone()), &TorusPoint::roots_of_unity(order, got.clone()))?;
    ensure!(rep.verdict, "{what}: formula {want:?} vs target {got:?}");
    Ok(())
}

fn norm_matching(rng: &mut ChaCha8Rng) -> Outcome {
    let r = Zp::new(13, 8)?;
    let order = 12u64;
    let mut checks = 0;
    for i in 0..MATCHING_SAMPLES {
        let n = 1 + i % 3;
        // A2n
        let t = random_exponents(rng, 12, 2 * n + 1);
        let h = Matrix::diagonal(&r, &zeta_diag(&r, &t)).mul(&r, &j_matrix(&r, 2 * n + 1));
        let k = random_unimodular(&r, 2 * n + 1, rng);
        for (what, x) in [("A2n", h.clone()), ("A2n transformed", k.transpose().mul(&r, &h).mul(&r, &k))] {
            let res = norm_a2n(&r, &x)?;
            weyl_match(order, formula_a2n(&t), symplectic_coordinates(&r, &res.target)?, what)?;
            checks += 1;
        }
        // B
        let t = random_exponents(rng, 12, 2 * n);
        let h = Matrix::diagonal(&r, &zeta_diag(&r, &t)).mul(&r, &j_matrix(&r, 2 * n));
        let k = random_unimodular(&r, 2 * n, rng);
        let a = random_unit(&r, rng);
        for (what, x) in [("B", h.clone()), ("B transformed", k.transpose().mul(&r, &h).mul(&r, &k))] {
            let res = norm_b(&r, &x, &a)?;
            weyl_match(order, formula_b(&t), odd_orthogonal_coordinates(&r, &res.target)?, what)?;
            checks += 1;
        }
        // D
        let t = random_exponents(rng, 12, n + 1);
        let b = d_torus(&r, &t)?;
        let k = random_orthogonal(&r, &j_prime(&r, 2 * n + 2)?, 2 * n + 2, rng)?;
        for (what, x) in [("D", b.clone()), ("D transformed", k.inverse(&r)?.mul(&r, &b).mul(&r, &k))] {
            let res = norm_d(&r, &x)?;
            weyl_match(order, formula_d(&t), symplectic_coordinates(&r, &res.target)?, what)?;
            checks += 1;
        }
    }
    Ok(format!("{checks} targets Weyl-conjugate to the formula over Z_13, n <= 3"))
}

// 7

fn fibers(rng: &mut ChaCha8Rng) -> Outcome {
    let r = Zp::new(13, 8)?;
    let eps = r.nonresidue();
    let mut classes = BTreeSet::new();
    for i in 0..FIBER_SAMPLES {
        let n = 1 + i % 3;
        let m = 2 * n + 1;
        let t = random_exponents(rng, 12, m);
        let mut d = zeta_diag(&r, &t);
        let h1 = Matrix::diagonal(&r, &d).mul(&r, &j_matrix(&r, m));
        d[n] = r.mul(&d[n], &eps);
        let k = random_unimodular(&r, m, rng);
        let h2 = k.transpose().mul(&r, &Matrix::diagonal(&r, &d).mul(&r, &j_matrix(&r, m))).mul(&r, &k);
        let (n1, n2) = (norm_a2n(&r, &h1)?, norm_a2n(&r, &h2)?);
        let (c1, c2) = (symplectic_coordinates(&r, &n1.target)?, symplectic_coordinates(&r, &n2.target)?);
        weyl_match(12, c1, c2, "A2n pair")?;
        ensure!(!r.equal(&n1.classes[0], &n2.classes[0]), "A2n pair has equal q+ classes");
        classes.insert(n1.classes[0].centered());
        classes.insert(n2.classes[0].centered());
    }
    ensure!(classes.len() == 2, "A2n fibers realize {} classes", classes.len());

    let mut pairs = 0;
    for i in 0..FIBER_SAMPLES {
        let n = 1 + i % 3;
        let beta = semisimple_symplectic(&r, n, true, rng)?;
        let (verdict, pre, images) = norm_d_image_test_integral(&r, &beta)?;
        ensure!(verdict.in_image() == Some(true), "D: {verdict:?}");
        ensure!(pre.len() == 2, "D: {} preimages", pre.len());
        let jp = j_prime(&r, 2 * n + 2)?;
        let mut seen = BTreeSet::new();
        for (x, im) in pre.iter().zip(&images) {
            ensure!(preserves(&r, &x.b, &jp), "D preimage is not in O(J')");
            ensure!(r.equal(&x.b.det(&r), &r.from_i64(-1)), "D preimage has det != -1");
            ensure!(
                r.equal(&im.classes[0], &x.eps_plus) && r.equal(&im.classes[1], &x.eps_minus),
                "D preimage classes do not come back"
            );
            seen.insert((x.eps_plus.centered(), x.eps_minus.centered()));
        }
        ensure!(seen.len() == 2, "D fiber realizes {} (q+, q-) pairs", seen.len());
        pairs += 1;
    }

    for i in 0..FIBER_SAMPLES {
        let n = 1 + i % 3;
        let (h, _, _) = theta_semisimple(&r, 2 * n, rng);
        let (a1, a2) = (random_unit(&r, rng), random_unit(&r, rng));
        let (x1, x2) = (norm_b(&r, &h, &a1)?, norm_b(&r, &h, &a2)?);
        ensure!(x1.target.equal(&r, &x2.target), "B target depends on a");
        for (x, a) in [(&x1, a1), (&x2, a2)] {
            let mu = r.mul(&h.det(&r), &r.mul(&a, &a));
            ensure!(r.equal(x.mu.as_ref().expect("mu"), &mu), "B: recorded mu is not det(h) a²");
        }
    }
    Ok(format!(
        "A2n: {FIBER_SAMPLES} pairs over 2 classes; D: {pairs} fibers of 2 pairs; B: {FIBER_SAMPLES} a-invariant"
    ))
}

// 8

fn spinor_norms(rng: &mut ChaCha8Rng) -> Outcome {
    let q = RationalField;
    for _ in 0..SPINOR_SAMPLES {
        let n = rng.gen_range(1..=6);
        let diag: Vec<Rational> = (0..n)
            .map(|_| {
                let x = rng.gen_range(1..=7) * if rng.gen_bool(0.5) { 1 } else { -1 };
                rat(x, 1)
            })
            .collect();
        let form = Matrix::diagonal(&q, &diag);
        let mut b = Matrix::identity(&q, n);
        let mut product = rat(1, 1);
        for _ in 0..rng.gen_range(0..=n + 1) {
            let v: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-2..=2), 1)).collect();
            let qv = pair(&q, &form, &v, &v);
            if q.is_zero(&qv) {
                continue;
            }
            b = b.mul(&q, &reflection(&q, &form, &v)?);
            product = product * qv / rat(2, 1);
        }
        let wall = spinor_norm(&q, &form, &b)?;
        let refl = spinor_norm_by_reflections(&q, &form, &b)?;
        let oracle = q.class_rep(&product)?;
        ensure!(wall == oracle && refl == oracle, "spinor norms {wall}, {refl}, generators {oracle}");
    }
    let r = Zp::new(13, 8)?;
    for i in 0..SPINOR_SAMPLES {
        let n = 1 + i % 3;
        let (h, _, _) = theta_semisimple(&r, 2 * n, rng);
        let res = norm_b(&r, &h, &random_unit(&r, rng))?;
        let want = r.class_rep(&h.det(&r))?;
        ensure!(r.equal(res.spinor_norm.as_ref().expect("spinor"), &want), "spinor norm of N(h) is not det h");
    }
    Ok(format!("{SPINOR_SAMPLES} rational isometries agree with both oracles; {SPINOR_SAMPLES} B norms have spinor norm det h"))
}

// 9

fn jordan(rng: &mut ChaCha8Rng) -> Outcome {
    let r = Zp::new(5, 8)?;
    for _ in 0..JORDAN_SAMPLES {
        let g = random_unimodular(&r, 3, rng);
        let j = topological_jordan(&r, &g)?;
        ensure!(j.g_s.mul(&r, &j.g_u).equal(&r, &g), "g ≠ g_s g_u");
        ensure!(j.g_u.mul(&r, &j.g_s).equal(&r, &g), "g_s and g_u do not commute");
        ensure!(j.g_s.pow(&r, j.order).is_identity(&r), "g_s^N ≠ 1");
        ensure!(is_topologically_unipotent(&r, &j.g_u), "g_u is not topologically unipotent");
        ensure!(reduction_check(&r, &g, &j), "reduction is not the Jordan decomposition mod p");
        let again = topological_jordan(&r, &j.g_s)?;
        ensure!(again.g_s.equal(&r, &j.g_s) && again.g_u.is_identity(&r), "not idempotent");
        let q2 = j.q.checked_mul(j.q).ok_or_else(|| Failure("Q² overflows".into()))?;
        let alt = topological_jordan_with(&r, &g, q2)?;
        ensure!(alt.g_s.equal(&r, &j.g_s), "g_s depends on Q");
        let det = Matrix::from_rows(vec![vec![g.det(&r)]]);
        let dj = topological_jordan(&r, &det)?;
        ensure!(r.equal(dj.g_s.get(0, 0), &j.g_s.det(&r)), "det(g)_s ≠ det(g_s)");
        ensure!(r.equal(dj.g_u.get(0, 0), &j.g_u.det(&r)), "det(g)_u ≠ det(g_u)");
    }
    Ok(format!("{JORDAN_SAMPLES} samples in GL_3(Z_5 / 5^8)"))
}

// 10

fn transfer(rng: &mut ChaCha8Rng) -> Outcome {
    let r7 = Zp::new(7, 6)?;
    let j = |n: usize| j_matrix(&r7, 2 * n);
    for i in 0..TRANSFER_SAMPLES {
        let n = 1 + i % 3;
        let x1 = semisimple_symplectic(&r7, n, true, rng)?;
        let k = random_symplectic(&r7, &j(n), rng);
        let x2 = k.inverse(&r7)?.mul(&r7, &x1).mul(&r7, &k);
        let out = integral_conjugacy_transfer(&r7, &x1, &x2, TransferMode::SpConj)?;
        let g = out.g();
        ensure!(preserves(&r7, g, &j(n)), "sp_conj: g is not symplectic");
        ensure!(g.inverse(&r7)?.mul(&r7, &x1).mul(&r7, g).equal(&r7, &x2), "sp_conj: g⁻¹ x1 g ≠ x2");
    }

    let r5 = Zp::new(5, 6)?;
    let eps = r5.nonresidue();
    let mut eps_branch = 0;
    for i in 0..TRANSFER_SAMPLES {
        let m = [3, 5][i % 2];
        let (h1, _, _) = theta_semisimple(&r5, m, rng);
        let k = random_unimodular(&r5, m, rng);
        let scale = if i % 4 < 2 { r5.one() } else { eps };
        let h2 = k.transpose().mul(&r5, &h1).mul(&r5, &k).scale(&r5, &scale);
        let TransferOutcome::Congruent { g, epsilon } = integral_conjugacy_transfer(&r5, &h1, &h2, TransferMode::GlCongruence)?
        else {
            return Err(Failure("gl_congruence: no congruence returned".into()));
        };
        ensure!(g.transpose().mul(&r5, &h1).mul(&r5, &g).scale(&r5, &epsilon).equal(&r5, &h2), "gl_congruence: identity fails");
        // rank M+ is odd, so ε carries the class of the scale
        ensure!(r5.class_rep(&epsilon)? == r5.class_rep(&scale)?, "gl_congruence: ε in the wrong class");
        if !r5.is_one(&r5.class_rep(&epsilon)?) {
            eps_branch += 1;
        }
    }

    let r7s = Zp::new(7, 6)?;
    for i in 0..TRANSFER_SAMPLES {
        let m = [3, 5][i % 2];
        let (h1, _, _) = theta_semisimple_special(&r7s, m, rng)?;
        let k = random_special(&r7s, m, rng);
        let h2 = k.transpose().mul(&r7s, &h1).mul(&r7s, &k);
        let out = integral_conjugacy_transfer(&r7s, &h1, &h2, TransferMode::GlCongruenceSl)?;
        let g = out.g();
        ensure!(r7s.is_one(&g.det(&r7s)), "gl_congruence_sl: det g ≠ 1");
        ensure!(g.transpose().mul(&r7s, &h1).mul(&r7s, g).equal(&r7s, &h2), "gl_congruence_sl: identity fails");
    }

    let mut companions = 0;
    for i in 0..TRANSFER_SAMPLES {
        let n = 1 + i % 2;
        let jp = j_prime(&r7, 2 * n + 2)?;
        let (x1, _) = o_minus_torus(&r7, n, rng)?;
        let k = random_orthogonal(&r7, &jp, 2 * n + 2, rng)?;
        let use_companion = i % 4 >= 2;
        let base = if use_companion { companion(&r7, &jp, &x1)? } else { x1.clone() };
        let x2 = k.inverse(&r7)?.mul(&r7, &base).mul(&r7, &k);
        let out = integral_conjugacy_transfer(&r7, &x1, &x2, TransferMode::OEven)?;
        let g = out.g();
        ensure!(preserves(&r7, g, &jp) && r7.is_one(&g.det(&r7)), "o_even: g not in SO(J')");
        let src = match &out {
            TransferOutcome::Conjugate { .. } => x1.clone(),
            TransferOutcome::Companion { companion, .. } => {
                companions += 1;
                companion.clone()
            }
            TransferOutcome::Congruent { .. } => return Err(Failure("o_even: congruence returned".into())),
        };
        ensure!(g.inverse(&r7)?.mul(&r7, &src).mul(&r7, g).equal(&r7, &x2), "o_even: g⁻¹ x g ≠ x2");
    }
    ensure!(eps_branch > 0 && companions > 0, "branches not exercised ({eps_branch} ε, {companions} companion)");
    Ok(format!(
        "{TRANSFER_SAMPLES} pairs per mode; {eps_branch} non-square ε, {companions} companion classes"
    ))
}

// 11

fn non_image(rng: &mut ChaCha8Rng) -> Outcome {
    let q = RationalField;
    let beta = obstructed_beta(&q, &rat(2, 1), &rat(5, 1), &rat(1, 1))?;
    ensure!(preserves(&q, &beta, &j_matrix(&q, 4)), "β is not symplectic");
    let v = norm_d_image_test_rational(&beta, 5)?;
    ensure!(v.in_image() == Some(false), "over Q_5: {v:?}");
    let r = Zp::new(5, 8)?;
    let delta = r.nonresidue();
    let (mut checked, mut tries) = (0, 0);
    while checked < 10 {
        tries += 1;
        ensure!(tries < 100, "too few unit parameters with β ± 1 invertible");
        let (l1, l2) = (random_unit(&r, rng), random_unit(&r, rng));
        let beta = obstructed_beta(&r, &delta, &l1, &l2)?;
        let Ok((v, pre, _)) = norm_d_image_test_integral(&r, &beta) else { continue };
        ensure!(v.in_image() == Some(true) && pre.len() == 2, "over Z_5 with λ = {l1}, {l2}: {v:?}");
        checked += 1;
    }
    Ok(format!("not a norm over Q_5; {checked} unit-parameter versions over Z_5 have 2 preimages each"))
}

// 12

fn random_zq(r: &Zq, rng: &mut ChaCha8Rng) -> crate::exact_scalars::ZqElem {
    let m = 5i128.pow(r.prec());
    let c: Vec<i128> = (0..r.degree()).map(|_| rng.gen_range(0..m)).collect();
    r.elem_from_coeffs(&c)
}

fn bc1(rng: &mut ChaCha8Rng) -> Outcome {
    let r = Zq::unramified(5, 8, 2)?;
    let roots: Vec<_> = teichmuller_roots(&r).into_iter().filter(|t| !r.is_one(&r.pow(t, 4))).collect();
    let (o, z) = (r.one(), r.zero());
    for _ in 0..BC1_SAMPLES {
        let t = roots[rng.gen_range(0..roots.len())].clone();
        let d = Matrix::diagonal(&r, &[t.clone(), r.inv(&t)?]);
        let up = Matrix::from_rows(vec![vec![o.clone(), random_zq(&r, rng)], vec![z.clone(), o.clone()]]);
        let low = Matrix::from_rows(vec![vec![o.clone(), z.clone()], vec![random_zq(&r, rng), o.clone()]]);
        let p = up.mul(&r, &low);
        let g = p.mul(&r, &d).mul(&r, &p.inverse(&r)?);
        let rep = bc1_isogeny_check(&r, &g)?;
        ensure!(rep.verdict && rep.degenerate.is_none(), "γ with eigenvalue {}: {:?}", r.format(&t), rep);
    }
    for s in [1, -1] {
        let g = Matrix::scalar(&r, 2, &r.from_i64(s));
        ensure!(bc1_isogeny_check(&r, &g)?.degenerate.is_some(), "γ = {s} not reported degenerate");
    }
    Ok(format!("{BC1_SAMPLES} regular γ over Z_25 / 5^8 match; ±1 reported degenerate"))
}
