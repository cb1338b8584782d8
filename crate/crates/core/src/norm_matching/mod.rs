//! Norm maps from twisted classes to classes of the endoscopic group, their
//! fibers, BC-matching and matched pairs with topologically unipotent
//! parts.

pub mod bc;
pub mod compose;
pub mod image;
pub mod norms;
pub mod torus;

pub use bc::{bc1_isogeny_check, bc_matching_check, isogeny_i2, regularity_defect, signed_permutation_match, MatchReport};
pub use compose::{centralizer_torus_element, compose_matched_pair, swap_middle, ComposeChecks, ComposedPair};
pub use image::{
    norm_d_image_test_integral, norm_d_image_test_rational, norm_d_preimages, quaternary_certificate, obstructed_beta,
    AnisotropyCertificate, ImageVerdict, Preimage,
};
pub use norms::{embed_outer, norm, norm_a2n, norm_b, norm_d, Kind, NormResult, TwistedRep};
pub use torus::{
    formula_a2n, formula_b, formula_d, odd_orthogonal_coordinates, pair_exponents, symplectic_coordinates,
    teichmuller_spectrum,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalars::{rat, LocalRing, PadicInt, RationalField, Ring, SquareRing, Zp};
    use crate::forms_matrices::j_matrix;
    use crate::linalg::Matrix;
    use crate::root_datum::TorusPoint;

    fn zeta_diag(r: &Zp, t: &[i64]) -> Vec<PadicInt> {
        let z = r.teichmuller_generator();
        t.iter().map(|&e| r.pow(&z, e.rem_euclid(r.p as i64 - 1) as u128)).collect()
    }

    #[test]
    fn trivial_inputs_have_trivial_norms() {
        let r = Zp::new(7, 6).unwrap();
        let a = norm_a2n(&r, &j_matrix(&r, 5)).unwrap();
        assert!(a.target.is_identity(&r));
        assert_eq!(a.ranks, vec![0]);
        let s = swap_middle(&r, &Matrix::identity(&r, 6));
        let d = norm_d(&r, &s).unwrap();
        assert!(d.target.is_identity(&r));
        assert_eq!(d.ranks, vec![2, 0]);
    }

    #[test]
    fn diagonal_a2n_follows_the_ratio_formula() {
        let r = Zp::new(13, 6).unwrap();
        let t = [1, 5, 2, 5, 7];
        let h = Matrix::diagonal(&r, &zeta_diag(&r, &t)).mul(&r, &j_matrix(&r, 5));
        let res = norm_a2n(&r, &h).unwrap();
        assert_eq!(res.ranks, vec![1]);
        let got = TorusPoint::roots_of_unity(12, symplectic_coordinates(&r, &res.target).unwrap());
        let want = TorusPoint::roots_of_unity(12, formula_a2n(&t));
        assert!(signed_permutation_match(&want, &got).unwrap().verdict);
    }

    #[test]
    fn symmetric_b_input_is_minus_one() {
        let r = Zp::new(5, 6).unwrap();
        let h = Matrix::diagonal(&r, &[r.elem(1), r.elem(2), r.elem(3), r.elem(1)]);
        let res = norm_b(&r, &h, &r.one()).unwrap();
        assert_eq!(res.ranks, vec![2]);
        // (x + 1)^4 (x - 1)
        let want = Matrix::diagonal(&r, &[r.elem(-1), r.elem(-1), r.elem(-1), r.elem(-1), r.one()]).char_poly(&r);
        assert_eq!(res.target.char_poly(&r), want);
        assert!(r.equal(res.spinor_norm.as_ref().unwrap(), &r.class_rep(&h.det(&r)).unwrap()));
    }

    #[test]
    fn obstructed_element_is_not_a_norm_over_q5() {
        let q = RationalField;
        let beta = obstructed_beta(&q, &rat(2, 1), &rat(5, 1), &rat(1, 1)).unwrap();
        assert!(crate::forms_matrices::preserves(&q, &beta, &j_matrix(&q, 4)));
        let v = norm_d_image_test_rational(&beta, 5).unwrap();
        assert_eq!(v.in_image(), Some(false), "{v:?}");
        let id = Matrix::identity(&q, 4);
        assert_eq!(norm_d_image_test_rational(&id, 5).unwrap().in_image(), Some(true));
    }

    #[test]
    fn bc_examples() {
        let u = TorusPoint::roots_of_unity(24, vec![5]);
        let v = TorusPoint::roots_of_unity(24, vec![-5]);
        assert!(bc_matching_check(&u, &v).unwrap().verdict);
        let one = TorusPoint::roots_of_unity(24, vec![0]);
        let rep = bc_matching_check(&one, &one).unwrap();
        assert!(!rep.verdict && rep.degenerate.is_some());
        let r = Zp::new(5, 6).unwrap();
        let z = r.teichmuller_generator();
        let g = Matrix::diagonal(&r, &[z, r.inv(&z).unwrap()]);
        // z has order 4 here, so z² = -1 and γ² is not regular
        assert!(bc1_isogeny_check(&r, &g).unwrap().degenerate.is_some());
    }

    #[test]
    fn composed_pairs_match() {
        let r = Zp::new(7, 8).unwrap();
        let w = [r.elem(8), r.elem(1 + 14)];
        for (kind, t) in [(Kind::A2n, vec![1, 3, 0, 3, 4]), (Kind::B, vec![1, 2, 2, 3]), (Kind::D, vec![1, 3, 2])] {
            let c = compose_matched_pair(&r, kind, &t, &w, &w).unwrap();
            assert!(c.checks.all_pass(), "{kind:?}: {:?}", c.checks);
        }
    }
}
