use proptest::prelude::*;

use singcalc::bundle_calc::{tensor_line, total_sw, BundleExpr};
use singcalc::char_alg::{Generator, Gf2Poly, Monomial};
use singcalc::conventions::Conventions;
use singcalc::germ_lab::scalar::{qf, Q};
use singcalc::germ_lab::{
    hessian_ad, jacobian_ad, jacobian_tilde_f, sigma_closed, sigma_oracle, Germ, GermMap, GermPoint,
};
use singcalc::integral_alg::IntegralClass;

fn generator() -> impl Strategy<Value = Generator> {
    prop_oneof![
        4 => (1u32..7).prop_map(Generator::w),
        1 => (1u32..4).prop_map(|i| Generator::w_of("TM", i)),
        1 => Just(Generator::line("ell")),
    ]
}

fn monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec((generator(), 1u32..3), 0..4).prop_map(Monomial::from_factors)
}

fn poly() -> impl Strategy<Value = Gf2Poly> {
    proptest::collection::vec(monomial(), 0..5).prop_map(Gf2Poly::from_monomials)
}

fn homogeneous(d: u32) -> impl Strategy<Value = Gf2Poly> {
    poly().prop_map(move |p| p.homogeneous_part(d))
}

fn q_small() -> impl Strategy<Value = Q> {
    (-9i64..10, 1i64..6).prop_map(|(n, d)| qf(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a + &a).is_zero());
        prop_assert_eq!(&a * &Gf2Poly::one(), a.clone());
    }

    #[test]
    fn grading_is_additive(d1 in 0u32..6, d2 in 0u32..6, seed in (poly(), poly())) {
        let a = seed.0.homogeneous_part(d1);
        let b = seed.1.homogeneous_part(d2);
        let prod = &a * &b;
        prop_assert!(prod.terms().all(|m| m.degree() == d1 + d2));
    }

    #[test]
    fn sq1_is_a_differential_derivation(a in poly(), b in poly()) {
        prop_assert!(a.sq1().sq1().is_zero());
        prop_assert_eq!((&a * &b).sq1(), &(&a.sq1() * &b) + &(&a * &b.sq1()));
    }

    #[test]
    fn sq1_raises_degree_and_images_have_preimages(d in 1u32..9, seed in poly()) {
        let b = seed.homogeneous_part(d - 1);
        let image = b.sq1();
        prop_assert!(image.terms().all(|m| m.degree() == d));
        let pre = image.sq1_preimage(d).expect("an image has a preimage");
        prop_assert_eq!(pre.sq1(), image);
    }

    #[test]
    fn inverse_total_inverts(a in homogeneous(1), b in homogeneous(2), c in homogeneous(3)) {
        let total = &(&(&Gf2Poly::one() + &a) + &b) + &c;
        let inv = total.inverse_total(8).unwrap();
        prop_assert!((&total * &inv).truncate(8).is_one());
    }

    #[test]
    fn canonical_json_round_trips(a in poly()) {
        let json = serde_json::to_string(&a).unwrap();
        let back: Gf2Poly = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn twisting_twice_by_a_line_is_trivial(rank in 1i64..6, d in 1u32..8) {
        let (_, total) = total_sw(&BundleExpr::named("E", rank), d).unwrap();
        let t = Gf2Poly::line("ell");
        let once = tensor_line(&t, rank, &total, d);
        prop_assert_eq!(tensor_line(&t, rank, &once, d), total);
    }

    #[test]
    fn total_class_is_multiplicative(r1 in 0i64..5, r2 in 0i64..5) {
        let d = 10;
        let a = BundleExpr::named("A", r1);
        let b = BundleExpr::named("B", r2);
        let (rank, sum) = total_sw(&BundleExpr::sum(a.clone(), b.clone()), d).unwrap();
        let (_, ta) = total_sw(&a, d).unwrap();
        let (_, tb) = total_sw(&b, d).unwrap();
        prop_assert_eq!(rank, r1 + r2);
        prop_assert_eq!(sum, (&ta * &tb).truncate(d));
        let (zero, unit) = total_sw(&BundleExpr::diff(a.clone(), a), d).unwrap();
        prop_assert_eq!(zero, 0);
        prop_assert!(unit.is_one());
    }

    #[test]
    fn reduction_is_a_ring_map(i in 1u32..4, j in 1u32..4, e in 1u32..3) {
        let v = IntegralClass::v_class(&[2 * j - 1, 2 * j + 1]).unwrap();
        let a = &IntegralClass::p(i) + &v;
        let b = IntegralClass::p(j).pow(e);
        prop_assert_eq!((&a * &b).reduce_mod2(), &a.reduce_mod2() * &b.reduce_mod2());
        prop_assert_eq!((&a + &b).reduce_mod2(), &a.reduce_mod2() + &b.reduce_mod2());
        prop_assert!(a.pow(e + 1).torsion_in_sq1_image());
        prop_assert!(a.scale(2).torsion.is_zero());
    }

    #[test]
    fn jacobian_closed_form_matches_jets(k in 1usize..3, extra in 0usize..2, coords in proptest::collection::vec(q_small(), 9)) {
        let g = Germ::new(2 * k + 2 + extra, k).unwrap();
        let mut c: Vec<Q> = coords.into_iter().take(g.n + 1).collect();
        c.resize(g.n + 1, qf(1, 2));
        let p = GermPoint::from_coords(&g, &c).unwrap();
        let ad = jacobian_ad(&g, GermMap::TildeF, &p);
        prop_assert_eq!(jacobian_tilde_f(&g, &p, &Conventions::default()), ad.clone());
        prop_assert_eq!(ad.column(g.n), sigma_closed(&g, &p).unwrap());
        for h in hessian_ad(&g, GermMap::TildeF, &p) {
            prop_assert_eq!(h.transpose(), h);
        }
    }

    #[test]
    fn sigma_closed_form_matches_oracle(k in 1usize..4, z in q_small(), xs in proptest::collection::vec(q_small(), 3)) {
        let g = Germ::minimal(k).unwrap();
        let mut p = GermPoint::origin(&g);
        for i in 0..k {
            p.x[2 * i + 1] = xs[i].clone();
            p.x[2 * i] = qf(-2, 1) * &z * &xs[i];
        }
        p.y = qf(-3, 1) * &z * &z;
        p.z = z;
        prop_assert_eq!(sigma_oracle(&g, &p).unwrap(), sigma_closed(&g, &p).unwrap());
    }
}
