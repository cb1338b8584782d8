use endoscopy::exact_scalars::{Ring, Zp};
use endoscopy::forms_matrices::sample::*;
use endoscopy::forms_matrices::transfer::companion;
use endoscopy::forms_matrices::{integral_conjugacy_transfer, j_matrix, j_prime, preserves, TransferMode, TransferOutcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn symplectic_conjugacy_with_elliptic_blocks() {
    let r = Zp::new(7, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let j = j_matrix(&r, 6);
    for _ in 0..8 {
        let x1 = semisimple_symplectic(&r, 3, true, &mut rng).unwrap();
        let k = random_symplectic(&r, &j, &mut rng);
        let x2 = k.inverse(&r).unwrap().mul(&r, &x1).mul(&r, &k);
        let out = integral_conjugacy_transfer(&r, &x1, &x2, TransferMode::SpConj).unwrap();
        let g = out.g();
        assert!(preserves(&r, g, &j));
        assert!(g.inverse(&r).unwrap().mul(&r, &x1).mul(&r, g).equal(&r, &x2));
    }
}

#[test]
fn congruence_with_and_without_epsilon() {
    let r = Zp::new(5, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let eps = r.nonresidue();
    for round in 0..8 {
        let (h1, _, _) = theta_semisimple(&r, 5, &mut rng);
        let k = random_unimodular(&r, 5, &mut rng);
        let scale = if round % 2 == 0 { r.one() } else { eps };
        let h2 = k.transpose().mul(&r, &h1).mul(&r, &k).scale(&r, &scale);
        let TransferOutcome::Congruent { g, epsilon } =
            integral_conjugacy_transfer(&r, &h1, &h2, TransferMode::GlCongruence).unwrap()
        else {
            panic!("expected a congruence")
        };
        assert!(g.transpose().mul(&r, &h1).mul(&r, &g).scale(&r, &epsilon).equal(&r, &h2));
    }
}

#[test]
fn special_congruence_has_determinant_one() {
    let r = Zp::new(7, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..8 {
        let (h1, _, _) = theta_semisimple_special(&r, 5, &mut rng).unwrap();
        let k = random_special(&r, 5, &mut rng);
        let h2 = k.transpose().mul(&r, &h1).mul(&r, &k);
        let out = integral_conjugacy_transfer(&r, &h1, &h2, TransferMode::GlCongruenceSl).unwrap();
        let g = out.g();
        assert!(r.is_one(&g.det(&r)));
        assert!(g.transpose().mul(&r, &h1).mul(&r, g).equal(&r, &h2));
    }
}

#[test]
fn even_orthogonal_conjugacy_and_companion() {
    let r = Zp::new(7, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let j = j_prime(&r, 6).unwrap();
    for round in 0..8 {
        let (x1, _) = o_minus_torus(&r, 2, &mut rng).unwrap();
        let k = random_orthogonal(&r, &j, 6, &mut rng).unwrap();
        let base = if round % 2 == 0 { x1.clone() } else { companion(&r, &j, &x1).unwrap() };
        let x2 = k.inverse(&r).unwrap().mul(&r, &base).mul(&r, &k);
        let out = integral_conjugacy_transfer(&r, &x1, &x2, TransferMode::OEven).unwrap();
        let g = out.g();
        assert!(preserves(&r, g, &j) && r.is_one(&g.det(&r)));
        let src = match &out {
            TransferOutcome::Conjugate { .. } => {
                assert_eq!(round % 2, 0);
                x1.clone()
            }
            TransferOutcome::Companion { companion, .. } => {
                assert_eq!(round % 2, 1);
                companion.clone()
            }
            _ => panic!("unexpected outcome"),
        };
        assert!(g.inverse(&r).unwrap().mul(&r, &src).mul(&r, g).equal(&r, &x2));
    }
}
