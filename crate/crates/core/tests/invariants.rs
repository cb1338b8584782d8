use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use endoscopy::exact_scalars::{rat, RationalField, Ring, Zp};
use endoscopy::forms_matrices::forms::pair;
use endoscopy::forms_matrices::sample::{random_orthogonal, random_symplectic, random_unimodular};
use endoscopy::forms_matrices::{
    cayley_orth, cayley_orth_inverse, cayley_sp, cayley_sp_inverse, j_matrix, preserves, reflection,
    reflection_factorization,
};
use endoscopy::padic_jordan::{is_topologically_unipotent, reduction_check, topological_jordan, twisted_jordan, unipotent_root};
use endoscopy::Matrix;

const PRIMES: [u64; 3] = [3, 5, 7];

fn ring(i: usize) -> Zp {
    Zp::new(PRIMES[i], 6).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn padic_inverse_and_square_root(i in 0usize..3, a in -10_000i128..10_000) {
        let r = ring(i);
        let x = r.elem(a);
        if r.is_unit(&x) {
            prop_assert!(r.is_one(&r.mul(&x, &r.inv(&x).unwrap())));
            let sq = r.mul(&x, &x);
            let s = sq.sqrt_unit().unwrap();
            prop_assert!(r.equal(&r.mul(&s, &s), &sq));
        } else {
            prop_assert!(r.inv(&x).is_err());
        }
    }

    #[test]
    fn cayley_sp_round_trip(i in 0usize..3, seed in any::<u64>()) {
        let r = ring(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = j_matrix(&r, 4).sub(&r, &j_matrix(&r, 4).transpose());
        let b = random_symplectic(&r, &p, &mut rng);
        prop_assume!(r.is_unit(&b.sub(&r, &Matrix::identity(&r, 4)).det(&r)));
        let q = cayley_sp_inverse(&r, &b, &p).unwrap();
        prop_assume!(r.is_unit(&q.sub(&r, &p).det(&r)));
        prop_assert!(cayley_sp(&r, &q, &p).unwrap().equal(&r, &b));
    }

    #[test]
    fn cayley_orth_round_trip(i in 0usize..3, seed in any::<u64>()) {
        let r = ring(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = Matrix::identity(&r, 4);
        let b = random_orthogonal(&r, &q, 4, &mut rng).unwrap();
        prop_assume!(r.is_unit(&b.sub(&r, &Matrix::identity(&r, 4)).det(&r)));
        let p = cayley_orth_inverse(&r, &b, &q).unwrap();
        prop_assume!(r.is_unit(&p.sub(&r, &q).det(&r)));
        prop_assert!(cayley_orth(&r, &p, &q).unwrap().equal(&r, &b));
    }

    #[test]
    fn reflections_generate(vs in prop::collection::vec(prop::collection::vec(-4i64..5, 3), 1..4)) {
        let q = RationalField;
        let form = j_matrix(&q, 3);
        let mut b = Matrix::identity(&q, 3);
        for v in &vs {
            let v: Vec<_> = v.iter().map(|&x| rat(x, 1)).collect();
            prop_assume!(!q.is_zero(&pair(&q, &form, &v, &v)));
            b = b.mul(&q, &reflection(&q, &form, &v).unwrap());
        }
        prop_assert!(preserves(&q, &b, &form));
        let mut g = Matrix::identity(&q, 3);
        for v in &reflection_factorization(&q, &form, &b).unwrap() {
            g = g.mul(&q, &reflection(&q, &form, v).unwrap());
        }
        prop_assert!(g.equal(&q, &b));
    }

    #[test]
    fn jordan_identities(i in 0usize..3, n in 1usize..4, seed in any::<u64>()) {
        let r = ring(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_unimodular(&r, n, &mut rng);
        let jp = topological_jordan(&r, &g).unwrap();
        prop_assert!(jp.g_s.mul(&r, &jp.g_u).equal(&r, &g));
        prop_assert!(jp.g_s.mul(&r, &jp.g_u).equal(&r, &jp.g_u.mul(&r, &jp.g_s)));
        prop_assert!(jp.g_s.pow(&r, jp.order).is_identity(&r));
        prop_assert!(is_topologically_unipotent(&r, &jp.g_u));
        prop_assert!(reduction_check(&r, &g, &jp));
        let again = topological_jordan(&r, &jp.g_s).unwrap();
        prop_assert!(again.g_s.equal(&r, &jp.g_s));
    }

    #[test]
    fn twisted_jordan_reduces(i in 0usize..3, n in 1usize..4, seed in any::<u64>()) {
        let r = ring(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_unimodular(&r, n, &mut rng);
        let jp = twisted_jordan(&r, &g).unwrap();
        prop_assert!(jp.g_u.mul(&r, &jp.g_s).equal(&r, &g));
        prop_assert!(reduction_check(&r, &g, &jp));
    }

    #[test]
    fn unipotent_roots(i in 0usize..3, m in 1u64..20, seed in any::<u64>()) {
        let r = ring(i);
        prop_assume!(m % r.p != 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_unimodular(&r, 3, &mut rng);
        let u = topological_jordan(&r, &g).unwrap().g_u;
        let root = unipotent_root(&r, &u, m).unwrap();
        prop_assert!(is_topologically_unipotent(&r, &root));
        prop_assert!(root.pow(&r, m as u128).equal(&r, &u));
    }
}
