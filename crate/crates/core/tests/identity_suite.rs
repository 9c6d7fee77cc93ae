mod common;

use common::*;
use hyperkp::curve::{field_divisor, Curve, Model, SymDivisor};
use hyperkp::error::Error;
use hyperkp::fixtures::{etale_random, even_curve, even_rational, odd_curve, odd_rational, rng, Leading};
use hyperkp::identities::{check_all, Context, Family, IdentityReport, Perturbation};
use hyperkp::scalar::{GaussianField, Ring};
use proptest::prelude::*;

fn assert_all_pass(reps: &[IdentityReport]) {
    for r in reps {
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn p_third_for_all_k_and_genera() {
    for g in 1..=4 {
        let fx = even_rational(g, 10 + g as u64, Leading::default()).unwrap();
        for d in distinct_divisors(&fx, 2, g as u64) {
            let ctx = Context::new(&fx.curve, &GaussianField, &d);
            for k in 1..=g as i64 {
                assert!(ctx.check_p_third(k).unwrap().passed(), "g = {g}, k = {k}");
            }
        }
    }
}

#[test]
fn binomial_quartic_reduction() {
    // N = x⁴ + ν₈ with ν₈ = −81 and a = 3: P_{2·4} = 6P_{2·2}² − 8ν₈
    let f = GaussianField;
    let c = Curve::even(f, 1, vec![q(1), q(0), q(0), q(0), q(-81)])
        .unwrap()
        .with_branch_point(q(3))
        .unwrap();
    let (ring, d) = hyperkp::curve::etale_divisor(&c, &[q(5)], &[-1]).unwrap();
    let ctx = Context::new(&c, &ring, &d);
    let p22 = ctx.p(&[2, 2]).unwrap();
    let rhs = ring.sub(&ring.mul_i64(&ring.square(&p22), 6), &ring.from_i64(-8 * 81));
    assert_eq!(ctx.p(&[2, 2, 2, 2]).unwrap(), rhs);
}

#[test]
fn wp_family_and_top_quartic() {
    for g in 1..=4 {
        let fx = if g == 4 { odd_with_lambda4(4) } else { odd_rational(g, 20 + g as u64, Leading::default()).unwrap() };
        if g == 4 {
            assert!(!fx.curve.coef(4).is_zero());
        }
        let d = fx.divisor(&mut rng(g as u64)).unwrap();
        let ctx = Context::new(&fx.curve, &GaussianField, &d);
        assert_all_pass(&check_all(&ctx).unwrap());
    }
}

#[test]
fn quartic_baker_three_configurations() {
    let configs = [[-2, 1, 3, 7], [0, 5, -1, 2], [4, -3, 6, -5]];
    for g in 1..=3 {
        let fx = even_rational(g, 30 + g as u64, Leading::default()).unwrap();
        let d = fx.divisor(&mut rng(g as u64)).unwrap();
        let ctx = Context::new(&fx.curve, &GaussianField, &d);
        for e in configs {
            let e = e.map(q);
            assert!(ctx.check_quartic_baker(&e).unwrap().passed(), "g = {g}");
        }
    }
}

#[test]
fn suffix_symmetry_exhaustive() {
    for g in 1..=3 {
        for model in [Model::Even, Model::Odd] {
            let fx = match model {
                Model::Even => even_rational(g, 40 + g as u64, Leading::default()).unwrap(),
                Model::Odd => odd_rational(g, 40 + g as u64, Leading::default()).unwrap(),
            };
            let d = fx.divisor(&mut rng(1)).unwrap();
            let ctx = Context::new(&fx.curve, &GaussianField, &d);
            let s: Vec<i64> = model.suffixes(g).into_iter().map(|v| v as i64).collect();
            for a in 0..s.len() {
                for b in a..s.len() {
                    for c in b..s.len() {
                        for e in c..s.len() {
                            let r = ctx.check_suffix_symmetry([s[a], s[b], s[c], s[e]]).unwrap();
                            assert!(r.passed(), "{r:?}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn etale_divisors_on_generic_curves() {
    for g in 1..=2 {
        let c = even_curve(g, 7).unwrap();
        let (ring, d) = etale_random(&c, 3).unwrap();
        assert_all_pass(&check_all(&Context::new(&c, &ring, &d)).unwrap());
        let c = odd_curve(g, 7).unwrap();
        let (ring, d) = etale_random(&c, 3).unwrap();
        assert_all_pass(&check_all(&Context::new(&c, &ring, &d)).unwrap());
    }
}

#[test]
fn wrong_model_and_index_rejected() {
    let fx = even_rational(2, 1, Leading::default()).unwrap();
    let d = fx.divisor(&mut rng(1)).unwrap();
    let ctx = Context::new(&fx.curve, &GaussianField, &d);
    assert!(matches!(ctx.check_wp_quartic_top(), Err(Error::Precondition(_))));
    assert!(matches!(ctx.check_p_third(3), Err(Error::Input(_))));
}

/// Every checker fails once its input is damaged. Coefficient-free identities
/// are damaged through a matrix entry instead of a curve coefficient.
#[test]
fn perturbation_guard() {
    let one = q(1);
    let fx = even_rational(2, 50, Leading::default()).unwrap();
    let d = fx.divisor(&mut rng(1)).unwrap();
    let base = || Context::new(&fx.curve, &GaussianField, &d);
    for k in 1..=2 {
        assert!(!base().with_perturbation(Perturbation::Coefficient(4, one.clone())).check_p_third(k).unwrap().passed());
    }
    let e = [0, 1, 3, -2].map(q);
    for c in [0, 2, 4] {
        let ctx = base().with_perturbation(Perturbation::Coefficient(c, one.clone()));
        assert!(!ctx.check_quartic_baker(&e).unwrap().passed(), "ν_{c}");
    }

    let fx = odd_with_lambda4(3);
    let d = fx.divisor(&mut rng(2)).unwrap();
    let base = || Context::new(&fx.curve, &GaussianField, &d);
    let c2 = || base().with_perturbation(Perturbation::Coefficient(2, one.clone()));
    assert!(!c2().check_wp_family(Family::I, 1, 1).unwrap().passed());
    assert!(!c2().check_wp_family(Family::II, 1, 2).unwrap().passed());
    let entry = || base().with_perturbation(Perturbation::Entry(1, 1, one.clone()));
    assert!(!entry().check_wp_family(Family::III, 1, 2).unwrap().passed());
    assert!(!entry().check_wp_family(Family::IV, 1, 2).unwrap().passed());
    assert!(!entry().check_h_inversion().unwrap().passed());
    let top = base().with_perturbation(Perturbation::Coefficient(10, one.clone()));
    assert!(!top.check_wp_quartic_top().unwrap().passed());
}

fn scaled_divisor(d: &SymDivisor<GaussianField>, s: &Q, y_weight: u32) -> Vec<(Q, Q)> {
    let f = GaussianField;
    d.xs.iter()
        .zip(&d.ys)
        .map(|(x, y)| (f.mul(x, &f.square(s)), f.mul(y, &f.pow(s, y_weight))))
        .collect()
}

fn defect(rep: &IdentityReport) -> Q {
    serde_json::from_value(rep.defects[0].clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    /// A damaged identity's defect is weighted-homogeneous of the identity's weight.
    #[test]
    fn perturbed_defects_scale_by_weight(num in 1i64..5, den in 1i64..4, k in 1i64..3) {
        let f = GaussianField;
        let s = Q::from_ratio(num, den);
        let delta = q(1);

        let fx = even_rational(2, 60, Leading::default()).unwrap();
        let d = fx.divisor(&mut rng(1)).unwrap();
        let cs = fx.curve.rescaled(&s).unwrap();
        let ds = field_divisor(&cs, &scaled_divisor(&d, &s, 6)).unwrap();
        let a = Context::new(&fx.curve, &f, &d).with_perturbation(Perturbation::Coefficient(4, delta.clone()));
        let b = Context::new(&cs, &f, &ds).with_perturbation(Perturbation::Coefficient(4, f.mul(&delta, &f.pow(&s, 4))));
        let ra = defect(&a.check_p_third(k).unwrap());
        prop_assert!(!ra.is_zero());
        prop_assert_eq!(defect(&b.check_p_third(k).unwrap()), f.mul(&ra, &f.pow(&s, (6 + 2 * k) as u32)));

        let fx = odd_rational(2, 61, Leading::default()).unwrap();
        let d = fx.divisor(&mut rng(1)).unwrap();
        let cs = fx.curve.rescaled(&s).unwrap();
        let ds = field_divisor(&cs, &scaled_divisor(&d, &s, 5)).unwrap();
        let a = Context::new(&fx.curve, &f, &d).with_perturbation(Perturbation::Coefficient(2, delta.clone()));
        let b = Context::new(&cs, &f, &ds).with_perturbation(Perturbation::Coefficient(2, f.mul(&delta, &f.square(&s))));
        let ra = defect(&a.check_wp_family(Family::I, k, k).unwrap());
        prop_assert!(!ra.is_zero());
        prop_assert_eq!(defect(&b.check_wp_family(Family::I, k, k).unwrap()), f.mul(&ra, &f.pow(&s, (2 * k + 2) as u32)));
        let a = Context::new(&fx.curve, &f, &d).with_perturbation(Perturbation::Coefficient(2, delta.clone()));
        let b = Context::new(&cs, &f, &ds).with_perturbation(Perturbation::Coefficient(2, f.mul(&delta, &f.square(&s))));
        let ra = defect(&a.check_wp_family(Family::II, 1, 2).unwrap());
        prop_assert_eq!(defect(&b.check_wp_family(Family::II, 1, 2).unwrap()), f.mul(&ra, &f.pow(&s, 8)));
    }

    #[test]
    fn identities_hold_on_random_fixtures(seed in 0u64..10_000, g in 1usize..4) {
        let fx = odd_rational(g, seed, Leading::default()).unwrap();
        let d = fx.divisor(&mut rng(seed)).unwrap();
        for r in check_all(&Context::new(&fx.curve, &GaussianField, &d)).unwrap() {
            prop_assert!(r.passed(), "{:?}", r);
        }
        let fx = even_rational(g, seed, Leading::default()).unwrap();
        let d = fx.divisor(&mut rng(seed)).unwrap();
        for r in check_all(&Context::new(&fx.curve, &GaussianField, &d)).unwrap() {
            prop_assert!(r.passed(), "{:?}", r);
        }
    }
}
