//! Seeded random curves and divisors for tests and the CLI.
//!
//! Curves with many rational points let jet-heavy checks run over the base
//! field. The even family is
//! `N = (x − a)²P(x)² + c(x − a)Π(x − r_k)` with `2g + 1` roots `r_k`, so that
//! `N(r_k) = ((r_k − a)P(r_k))²`. The odd family is
//! `M = (X − c₀)P(X)² + κΠ(X − r_k)` with `r_k = c₀ + q_k²`, so that
//! `M(r_k) = (q_k P(r_k))²`.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curve::{etale_divisor, field_divisor, Curve, SymDivisor};
use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::{EtaleRing, GaussianField, GaussianRational, Ring};

pub type Q = GaussianRational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn q(n: i64) -> Q {
    Q::from_int(n)
}

fn small(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    rng.gen_range(lo..=hi)
}

fn distinct(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64, avoid: &[i64]) -> Vec<i64> {
    let mut pool: Vec<i64> = (lo..=hi).filter(|v| !avoid.contains(v)).collect();
    pool.shuffle(rng);
    pool.truncate(n);
    pool
}

/// A curve with a list of known rational points `(x, y)`, `y ≠ 0`.
#[derive(Debug, Clone)]
pub struct RationalFixture {
    pub curve: Curve<GaussianField>,
    pub points: Vec<(Q, Q)>,
}

impl RationalFixture {
    /// `g` of the known points with random signs on `y`.
    pub fn divisor(&self, rng: &mut ChaCha8Rng) -> Result<SymDivisor<GaussianField>> {
        let g = self.curve.genus();
        if self.points.len() < g {
            return Err(Error::Input("not enough rational points".into()));
        }
        let mut chosen: Vec<(Q, Q)> = self.points.choose_multiple(rng, g).cloned().collect();
        for p in &mut chosen {
            if rng.gen_bool(0.5) {
                p.1 = p.1.neg();
            }
        }
        field_divisor(&self.curve, &chosen)
    }
}

/// Constraints on the leading data of a rational fixture.
#[derive(Debug, Clone, Copy, Default)]
pub struct Leading {
    /// Makes the leading coefficient (`ν₀`, or `λ_{4g+2}` on the odd model)
    /// equal to `−3w²`.
    pub minus_three_square: Option<i64>,
    /// Makes `λ₂ = r²` on the odd model.
    pub lambda2_square: Option<i64>,
}

const ATTEMPTS: usize = 200;

/// Even model with rational branch point `a` and `2g + 1` rational points.
pub fn even_rational(g: usize, seed: u64, lead: Leading) -> Result<RationalFixture> {
    let f = GaussianField;
    let mut rng = rng(seed);
    for _ in 0..ATTEMPTS {
        let a = small(&mut rng, -3, 3);
        let mut p1: Vec<i64> = (0..=g).map(|_| small(&mut rng, -3, 3)).collect();
        if p1[g] == 0 {
            p1[g] = 1;
        }
        let lead_p = p1[g];
        let c = match lead.minus_three_square {
            Some(w) => -3 * w * w - lead_p * lead_p,
            None => {
                let c = small(&mut rng, -4, 4);
                if c == 0 || c == -lead_p * lead_p {
                    continue;
                }
                c
            }
        };
        let roots = distinct(&mut rng, 2 * g + 1, -9, 9, &[a]);
        let xa = [q(-a), q(1)];
        let p1q: Vec<Q> = p1.iter().map(|&v| q(v)).collect();
        let sq = poly::mul(&f, &xa, &p1q);
        let first = poly::mul(&f, &sq, &sq);
        let rq: Vec<Q> = roots.iter().map(|&v| q(v)).collect();
        let second = poly::scale(&f, &poly::mul(&f, &xa, &poly::from_roots(&f, &rq)), &q(c));
        let n = poly::add(&f, &first, &second);
        let weighted: Vec<Q> = n.into_iter().rev().collect();
        let curve = match Curve::even(f, g, weighted).and_then(|c| c.with_branch_point(q(a))) {
            Ok(c) => c,
            Err(_) => continue,
        };
        if curve.validate().is_err() {
            continue;
        }
        let points: Vec<(Q, Q)> = rq
            .iter()
            .map(|r| (r.clone(), poly::eval(&f, &sq, r)))
            .filter(|(_, y)| !y.is_zero())
            .collect();
        if points.len() < g {
            continue;
        }
        return Ok(RationalFixture { curve, points });
    }
    Err(Error::Internal("no nonsingular even fixture found".into()))
}

/// Odd model with `2g` rational points.
pub fn odd_rational(g: usize, seed: u64, lead: Leading) -> Result<RationalFixture> {
    let f = GaussianField;
    let mut rng = rng(seed);
    for _ in 0..ATTEMPTS {
        let c0 = small(&mut rng, -3, 3);
        let qs = distinct(&mut rng, 2 * g, 1, 4 * g as i64, &[]);
        let roots: Vec<Q> = qs.iter().map(|&v| q(c0 + v * v)).collect();
        // P monic of degree g, ascending
        let mut p: Vec<Q> = (0..g).map(|_| q(small(&mut rng, -3, 3))).collect();
        p.push(q(1));
        let prod_r = f.product(&roots);
        let kappa = match lead.minus_three_square {
            Some(m) => {
                if prod_r.is_zero() {
                    continue;
                }
                let num = f.add(&q(-3 * m * m), &f.mul(&q(c0), &f.square(&p[0])));
                f.div(&num, &prod_r).expect("nonzero product")
            }
            None => q(small(&mut rng, -4, 4)),
        };
        if kappa.is_zero() {
            continue;
        }
        if let Some(r) = lead.lambda2_square {
            if g < 2 {
                return Err(Error::Precondition("λ₂ can be prescribed only for g ≥ 2".into()));
            }
            // λ₂ = 2p_{g−1} − c₀ + κ
            let target = f.sub(&f.add(&q(r * r), &q(c0)), &kappa);
            p[g - 1] = f.mul(&target, &Q::from_ratio(1, 2));
        }
        let sq = p.clone();
        let first = poly::mul(&f, &[q(-c0), q(1)], &poly::mul(&f, &sq, &sq));
        let second = poly::scale(&f, &poly::from_roots(&f, &roots), &kappa);
        let m = poly::add(&f, &first, &second);
        let weighted: Vec<Q> = m.into_iter().rev().collect();
        let curve = match Curve::odd(f, g, weighted[1..].to_vec()) {
            Ok(c) => c,
            Err(_) => continue,
        };
        if curve.validate().is_err() {
            continue;
        }
        let points: Vec<(Q, Q)> = roots
            .iter()
            .zip(&qs)
            .map(|(r, &qk)| (r.clone(), f.mul(&q(qk), &poly::eval(&f, &sq, r))))
            .filter(|(_, y)| !y.is_zero())
            .collect();
        if points.len() < g {
            continue;
        }
        return Ok(RationalFixture { curve, points });
    }
    Err(Error::Internal("no nonsingular odd fixture found".into()))
}

/// Even model `N = ν₀Π(x − r_k)` with `2g + 2` distinct integer roots; the
/// branch point is the first root. `ν₀ = −3w²` when `minus_three_square` is set.
pub fn even_split(g: usize, seed: u64, minus_three_square: Option<i64>) -> Result<Curve<GaussianField>> {
    let f = GaussianField;
    let mut rng = rng(seed);
    let roots = distinct(&mut rng, 2 * g + 2, -9, 9, &[]);
    let lead = match minus_three_square {
        Some(w) => -3 * w * w,
        None => *[-3, -2, -1, 1, 2, 3].choose(&mut rng).expect("nonempty"),
    };
    let rq: Vec<Q> = roots.iter().map(|&r| q(r)).collect();
    let n = poly::scale(&f, &poly::from_roots(&f, &rq), &q(lead));
    let c = Curve::even(f, g, n.into_iter().rev().collect())?.with_branch_point(rq[0].clone())?;
    c.validate()?;
    Ok(c)
}

/// Even model `N = (x − a)H(x)` with random integer data.
pub fn even_curve(g: usize, seed: u64) -> Result<Curve<GaussianField>> {
    let f = GaussianField;
    let mut rng = rng(seed);
    for _ in 0..ATTEMPTS {
        let a = small(&mut rng, -3, 3);
        let mut h: Vec<Q> = (0..=2 * g + 1).map(|_| q(small(&mut rng, -5, 5))).collect();
        if h[2 * g + 1].is_zero() {
            h[2 * g + 1] = q(1);
        }
        let n = poly::mul(&f, &[q(-a), q(1)], &h);
        let weighted: Vec<Q> = n.into_iter().rev().collect();
        if let Ok(c) = Curve::even(f, g, weighted).and_then(|c| c.with_branch_point(q(a))) {
            if c.validate().is_ok() {
                return Ok(c);
            }
        }
    }
    Err(Error::Internal("no nonsingular even curve found".into()))
}

/// Odd model with random integer coefficients and `λ_{4g+2} ≠ 0`.
pub fn odd_curve(g: usize, seed: u64) -> Result<Curve<GaussianField>> {
    let mut rng = rng(seed);
    for _ in 0..ATTEMPTS {
        let mut lambdas: Vec<Q> = (0..=2 * g).map(|_| q(small(&mut rng, -5, 5))).collect();
        if lambdas[2 * g].is_zero() {
            lambdas[2 * g] = q(1);
        }
        if let Ok(c) = Curve::odd(GaussianField, g, lambdas) {
            if c.validate().is_ok() {
                return Ok(c);
            }
        }
    }
    Err(Error::Internal("no nonsingular odd curve found".into()))
}

/// A divisor with random integer abscissae and `y_j` adjoined étale.
pub fn etale_random(curve: &Curve<GaussianField>, seed: u64) -> Result<(EtaleRing, SymDivisor<EtaleRing>)> {
    let mut rng = rng(seed);
    let g = curve.genus();
    let avoid: Vec<i64> = (-12..=12)
        .filter(|&x| {
            curve.eval(&q(x)).0.is_zero() || curve.branch_point().is_some_and(|a| *a == q(x))
        })
        .collect();
    let xs: Vec<Q> = distinct(&mut rng, g, -12, 12, &avoid).into_iter().map(q).collect();
    let signs: Vec<i8> = (0..g).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    etale_divisor(curve, &xs, &signs)
}
