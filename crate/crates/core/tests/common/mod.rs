#![allow(dead_code)]

use hyperkp::curve::SymDivisor;
use hyperkp::fixtures::{even_rational, odd_rational, rng, Leading, RationalFixture};
use hyperkp::scalar::{Field, GaussianField, GaussianRational};

pub type Q = GaussianRational;

pub fn q(n: i64) -> Q {
    Q::from_int(n)
}

pub fn lead(w: i64) -> Leading {
    Leading {
        minus_three_square: Some(w),
        ..Default::default()
    }
}

/// `n` pairwise different divisors drawn from the fixture's rational points.
pub fn distinct_divisors(fx: &RationalFixture, n: usize, seed: u64) -> Vec<SymDivisor<GaussianField>> {
    let f = GaussianField;
    let mut r = rng(seed);
    let mut seen: Vec<Vec<String>> = Vec::new();
    let mut out = Vec::new();
    for _ in 0..1000 {
        if out.len() == n {
            break;
        }
        let d = fx.divisor(&mut r).expect("fixture has enough points");
        let mut key: Vec<String> = d.xs.iter().zip(&d.ys).map(|(x, y)| format!("{} {}", f.render(x), f.render(y))).collect();
        key.sort();
        if !seen.contains(&key) {
            seen.push(key);
            out.push(d);
        }
    }
    assert_eq!(out.len(), n, "fixture too small for {n} divisors");
    out
}

pub fn psi_fixture(g: usize) -> RationalFixture {
    even_rational(g, 100 + g as u64, lead(1)).unwrap()
}

pub fn phi_fixture(g: usize) -> RationalFixture {
    odd_rational(g, 200 + g as u64, lead(1)).unwrap()
}

pub fn upsilon_fixture(g: usize) -> RationalFixture {
    odd_rational(
        g,
        300 + g as u64,
        Leading {
            lambda2_square: Some(2),
            ..Default::default()
        },
    )
    .unwrap()
}

/// An odd fixture whose `λ₄` is nonzero.
pub fn odd_with_lambda4(g: usize) -> RationalFixture {
    (0..100)
        .map(|s| odd_rational(g, 400 + s, Leading::default()).unwrap())
        .find(|fx| !fx.curve.coef(4).is_zero())
        .expect("some seed gives λ₄ ≠ 0")
}

/// An even fixture whose branch point is not the origin.
pub fn even_off_origin(g: usize) -> RationalFixture {
    (0..100)
        .map(|s| even_rational(g, 500 + s, Leading::default()).unwrap())
        .find(|fx| !fx.curve.branch_point().unwrap().is_zero())
        .expect("some seed gives a ≠ 0")
}
