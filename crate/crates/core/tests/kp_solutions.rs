mod common;

use common::*;
use hyperkp::curve::{field_divisor, Curve, SymDivisor};
use hyperkp::fixtures::{even_rational, rng};
use hyperkp::kp::{check_weight_grading, make_constants, residual, solution, Branch, Equation, KpSolution, Variant};
use hyperkp::scalar::{ComplexFloatField, Field, GaussianField, Ring};
use proptest::prelude::*;

fn exact_residual_zero(variant: Variant, curve: &Curve<GaussianField>, d: &SymDivisor<GaussianField>, branch: Branch, kp2: bool) -> bool {
    let k = make_constants(variant, curve, branch).unwrap();
    let mut sol = solution(variant, curve, &k).unwrap();
    if kp2 {
        sol = sol.sqrt_minus_one(&GaussianField).unwrap();
        assert_eq!(sol.equation, Equation::KpII);
    }
    let (jets, r) = residual(curve, &GaussianField, d, &sol, 4).unwrap();
    jets.is_zero(&r)
}

#[test]
fn psi_vanishes_at_several_divisors() {
    for g in [3, 4] {
        let fx = psi_fixture(g);
        let n = if g == 3 { 3 } else { 2 };
        for d in distinct_divisors(&fx, n, 1) {
            assert!(exact_residual_zero(Variant::Psi, &fx.curve, &d, Branch::Principal, false), "g = {g}");
        }
    }
}

#[test]
fn phi_vanishes_at_several_divisors() {
    for g in [3, 4] {
        let fx = phi_fixture(g);
        for d in distinct_divisors(&fx, 2, 2) {
            assert!(exact_residual_zero(Variant::Phi, &fx.curve, &d, Branch::Principal, false), "g = {g}");
        }
    }
}

#[test]
fn upsilon_vanishes_with_both_roots() {
    for g in [2, 3] {
        let fx = upsilon_fixture(g);
        for d in distinct_divisors(&fx, 2, 3) {
            for b in [Branch::Principal, Branch::Negated] {
                assert!(exact_residual_zero(Variant::Upsilon, &fx.curve, &d, b, false), "g = {g}");
            }
        }
    }
}

#[test]
fn sqrt_minus_one_solves_kp2_exactly() {
    let fx = psi_fixture(3);
    let d = fx.divisor(&mut rng(5)).unwrap();
    assert!(exact_residual_zero(Variant::Psi, &fx.curve, &d, Branch::Negated, true));
    let fx = phi_fixture(3);
    let d = fx.divisor(&mut rng(5)).unwrap();
    assert!(exact_residual_zero(Variant::Phi, &fx.curve, &d, Branch::Principal, true));
    let fx = upsilon_fixture(2);
    let d = fx.divisor(&mut rng(5)).unwrap();
    assert!(exact_residual_zero(Variant::Upsilon, &fx.curve, &d, Branch::Principal, true));
}

#[test]
fn xi8_solves_kp2_numerically() {
    let cf = ComplexFloatField::default();
    for (variant, fx) in [(Variant::Phi, phi_fixture(3)), (Variant::Psi, psi_fixture(3))] {
        let d = fx.divisor(&mut rng(6)).unwrap();
        let curve = fx.curve.to_numeric(cf).unwrap();
        let pts: Vec<_> = d.xs.iter().zip(&d.ys).map(|(x, y)| (cf.from_gaussian(x), cf.from_gaussian(y))).collect();
        let nd = field_divisor(&curve, &pts).unwrap();
        let k = make_constants(variant, &curve, Branch::Principal).unwrap();
        let sol = solution(variant, &curve, &k).unwrap().xi8(&cf);
        let (jets, r) = residual(&curve, &cf, &nd, &sol, 4).unwrap();
        assert!(jets.max_magnitude(&r) < 1e-40, "{variant:?}");
    }
}

#[test]
fn numeric_mode_agrees_with_exact_mode() {
    let cf = ComplexFloatField::default();
    let fx = psi_fixture(3);
    let d = fx.divisor(&mut rng(8)).unwrap();
    let curve = fx.curve.to_numeric(cf).unwrap();
    let pts: Vec<_> = d.xs.iter().zip(&d.ys).map(|(x, y)| (cf.from_gaussian(x), cf.from_gaussian(y))).collect();
    let nd = field_divisor(&curve, &pts).unwrap();
    let k = make_constants(Variant::Psi, &curve, Branch::Principal).unwrap();
    let sol = solution(Variant::Psi, &curve, &k).unwrap();
    let (jets, r) = residual(&curve, &cf, &nd, &sol, 4).unwrap();
    assert!(jets.max_magnitude(&r) < 1e-40);
}

#[test]
fn wrong_equation_is_detected() {
    let fx = psi_fixture(3);
    let d = fx.divisor(&mut rng(9)).unwrap();
    let k = make_constants(Variant::Psi, &fx.curve, Branch::Principal).unwrap();
    let sol = solution(Variant::Psi, &fx.curve, &k).unwrap();
    let wrong = KpSolution {
        equation: Equation::KpII,
        ..sol
    };
    let (jets, r) = residual(&fx.curve, &GaussianField, &d, &wrong, 4).unwrap();
    assert!(!jets.is_zero(&r));
}

#[test]
fn higher_order_residual_vanishes() {
    let fx = upsilon_fixture(2);
    let d = fx.divisor(&mut rng(10)).unwrap();
    let k = make_constants(Variant::Upsilon, &fx.curve, Branch::Principal).unwrap();
    let sol = solution(Variant::Upsilon, &fx.curve, &k).unwrap();
    let (jets, r) = residual(&fx.curve, &GaussianField, &d, &sol, 5).unwrap();
    assert_eq!(jets.order(), 1);
    assert!(jets.is_zero(&r));
}

#[test]
fn upsilon_weights_are_covariant() {
    let fx = upsilon_fixture(2);
    let d = fx.divisor(&mut rng(11)).unwrap();
    let lines = check_weight_grading(Variant::Upsilon, &fx.curve, &GaussianField, &d, &q(2)).unwrap();
    assert!(lines.iter().all(|l| l.covariant), "{lines:?}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 4, ..ProptestConfig::default() })]

    #[test]
    fn psi_vanishes_on_random_fixtures(seed in 0u64..10_000, w in 1i64..3) {
        let fx = even_rational(3, seed, lead(w)).unwrap();
        let d = fx.divisor(&mut rng(seed)).unwrap();
        prop_assert!(exact_residual_zero(Variant::Psi, &fx.curve, &d, Branch::Principal, false));
    }
}
