//! Checkers for the polynomial identities among the `P` and `℘` functions.
//!
//! Each checker evaluates `LHS − RHS` at a divisor and returns an
//! [`IdentityReport`]. Suffix and coefficient conventions live in
//! [`Context::p`] and [`Context::coef`] only: an entry with any suffix
//! outside the model's range is zero, `λ₀ = 1`, and negative or
//! out-of-range coefficient indices give zero.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::curve::{Curve, Model, SymDivisor};
use crate::error::{Error, Result};
use crate::flow::Derivatives;
use crate::poly;
use crate::scalar::{Algebra, Field, Render, Ring};

/// Largest defect magnitude accepted in numeric mode.
pub const NUMERIC_TOLERANCE: f64 = 1e-40;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    ExactZero,
    Numeric { max_abs: f64 },
    Nonzero { max_abs: f64 },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        match self {
            Verdict::ExactZero => true,
            Verdict::Numeric { max_abs } => *max_abs < NUMERIC_TOLERANCE,
            Verdict::Nonzero { .. } => false,
        }
    }

    pub fn from_defects<R: Ring>(ring: &R, defects: &[R::Elem]) -> Self {
        let max_abs = defects.iter().map(|d| ring.magnitude(d)).fold(0.0, f64::max);
        if ring.is_exact() {
            if defects.iter().all(|d| ring.is_zero(d)) {
                Verdict::ExactZero
            } else {
                Verdict::Nonzero { max_abs }
            }
        } else if max_abs < NUMERIC_TOLERANCE {
            Verdict::Numeric { max_abs }
        } else {
            Verdict::Nonzero { max_abs }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub genus: usize,
    pub params: Vec<(String, i64)>,
    pub divisor: Value,
    pub verdict: Verdict,
    /// `LHS − RHS` for each component of the identity.
    pub defects: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl IdentityReport {
    pub fn new<R: Render>(ring: &R, id: &str, genus: usize, params: &[(&str, i64)], divisor: Value, defects: &[R::Elem]) -> Self {
        IdentityReport {
            id: id.to_string(),
            genus,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            divisor,
            verdict: Verdict::from_defects(ring, defects),
            defects: defects.iter().map(|d| ring.to_json(d)).collect(),
            elapsed_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

pub fn divisor_json<A: Render>(ring: &A, divisor: &SymDivisor<A>) -> Value {
    Value::Array(
        divisor
            .xs
            .iter()
            .zip(&divisor.ys)
            .map(|(x, y)| json!({"x": ring.to_json(x), "y": ring.to_json(y)}))
            .collect(),
    )
}

/// Identity of the `℘` relation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    I,
    II,
    III,
    IV,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::I, Family::II, Family::III, Family::IV];

    fn tag(self) -> &'static str {
        match self {
            Family::I => "i",
            Family::II => "ii",
            Family::III => "iii",
            Family::IV => "iv",
        }
    }
}

/// Deliberate damage used to confirm that a checker can fail.
#[derive(Debug, Clone, PartialEq)]
pub enum Perturbation<E> {
    /// Adds to the coefficient of the given weight wherever the identity reads it.
    Coefficient(i64, E),
    /// Adds to the matrix entry with the given suffixes (in either order).
    Entry(i64, i64, E),
}

/// A divisor together with cached jet runs and the resolution conventions.
pub struct Context<'a, K: Field, A: Algebra<K>> {
    curve: &'a Curve<K>,
    ring: &'a A,
    divisor: &'a SymDivisor<A>,
    derivs: Derivatives<'a, K, A>,
    perturbation: Option<Perturbation<K::Elem>>,
    timing: bool,
}

impl<'a, K: Field, A: Algebra<K> + Render> Context<'a, K, A> {
    /// Jet order 2 covers every entry with up to four suffixes.
    pub fn new(curve: &'a Curve<K>, ring: &'a A, divisor: &'a SymDivisor<A>) -> Self {
        Context {
            curve,
            ring,
            divisor,
            derivs: Derivatives::new(curve, ring, divisor, 2),
            perturbation: None,
            timing: false,
        }
    }

    pub fn with_perturbation(mut self, p: Perturbation<K::Elem>) -> Self {
        self.perturbation = Some(p);
        self
    }

    pub fn with_timing(mut self, on: bool) -> Self {
        self.timing = on;
        self
    }

    pub fn curve(&self) -> &Curve<K> {
        self.curve
    }

    pub fn ring(&self) -> &A {
        self.ring
    }

    pub fn divisor(&self) -> &SymDivisor<A> {
        self.divisor
    }

    /// `P_{s₁,…}` or `℘_{s₁,…}`; zero when any suffix is out of range.
    pub fn p(&self, suffixes: &[i64]) -> Result<A::Elem> {
        let v = self.derivs.get_sorted(suffixes)?;
        if let (Some(Perturbation::Entry(a, b, d)), [s, t]) = (&self.perturbation, suffixes) {
            if (s, t) == (a, b) || (s, t) == (b, a) {
                return Ok(self.ring.add(&v, &self.ring.embed(d)));
            }
        }
        Ok(v)
    }

    /// `ν_i` or `λ_i` with `λ₀ = 1` and zero outside the range.
    pub fn coef(&self, i: i64) -> A::Elem {
        let mut c = self.curve.coef(i);
        if let Some(Perturbation::Coefficient(j, d)) = &self.perturbation {
            if *j == i {
                c = self.curve.field().add(&c, d);
            }
        }
        self.ring.embed(&c)
    }

    fn int(&self, n: i64) -> A::Elem {
        self.ring.from_i64(n)
    }

    fn delta(&self, a: i64, b: i64) -> A::Elem {
        self.int(i64::from(a == b))
    }

    pub fn divisor_json(&self) -> Value {
        divisor_json(self.ring, self.divisor)
    }

    pub fn report(&self, id: &str, params: &[(&str, i64)], defects: &[A::Elem], started: Instant) -> IdentityReport {
        let mut rep = IdentityReport::new(self.ring, id, self.curve.genus(), params, self.divisor_json(), defects);
        rep.elapsed_ms = self.timing.then(|| started.elapsed().as_millis());
        rep
    }

    fn require(&self, model: Model, what: &str) -> Result<()> {
        if self.curve.model() != model {
            return Err(Error::Precondition(format!("{what} needs the {model:?} model")));
        }
        Ok(())
    }

    fn require_index(&self, name: &str, v: i64) -> Result<()> {
        let g = self.curve.genus() as i64;
        if !(1..=g).contains(&v) {
            return Err(Error::Input(format!("{name} = {v} outside 1..={g}")));
        }
        Ok(())
    }

    /// `P_{2·3,2k} = 2P_{2,2k}(3P_{2·2} + 2ν₄) + 2ν₂(δ_{1k}ν₆ − P_{4,2k} + 3P_{2,2k+2})
    ///   + 4ν₀(3P_{2,2k+4} − 3P_{4,2k+2} + P_{6,2k} − 2δ_{1k}ν₈ − δ_{2k}ν₁₀)`.
    pub fn check_p_third(&self, k: i64) -> Result<IdentityReport> {
        let started = Instant::now();
        self.require(Model::Even, "the third-derivative relation")?;
        self.require_index("k", k)?;
        let r = self.ring;
        let p = |s: &[i64]| self.p(s);
        let c = |i| self.coef(i);
        let lhs = p(&[2, 2, 2, 2 * k])?;
        let t1 = r.mul(
            &r.mul_i64(&p(&[2, 2 * k])?, 2),
            &r.add(&r.mul_i64(&p(&[2, 2])?, 3), &r.mul_i64(&c(4), 2)),
        );
        let t2 = r.mul(
            &r.mul_i64(&c(2), 2),
            &r.sum(&[
                r.mul(&self.delta(1, k), &c(6)),
                r.neg(&p(&[4, 2 * k])?),
                r.mul_i64(&p(&[2, 2 * k + 2])?, 3),
            ]),
        );
        let t3 = r.mul(
            &r.mul_i64(&c(0), 4),
            &r.sum(&[
                r.mul_i64(&p(&[2, 2 * k + 4])?, 3),
                r.mul_i64(&p(&[4, 2 * k + 2])?, -3),
                p(&[6, 2 * k])?,
                r.mul_i64(&r.mul(&self.delta(1, k), &c(8)), -2),
                r.neg(&r.mul(&self.delta(2, k), &c(10))),
            ]),
        );
        let defect = r.sub(&lhs, &r.sum(&[t1, t2, t3]));
        Ok(self.report("p_third", &[("k", k)], &[defect], started))
    }

    /// The `℘` relation family at `(i, j)`; family I uses `i` only.
    pub fn check_wp_family(&self, which: Family, i: i64, j: i64) -> Result<IdentityReport> {
        let started = Instant::now();
        self.require(Model::Odd, "the ℘ relation family")?;
        self.require_index("i", i)?;
        self.require_index("j", j)?;
        let r = self.ring;
        let p = |s: &[i64]| self.p(s);
        let c = |n| self.coef(n);
        let (a, b) = (2 * i - 1, 2 * j - 1);
        let defect = match which {
            Family::I => {
                let lhs = p(&[1, 1, 1, a])?;
                let rhs = r.sum(&[
                    r.mul(&r.add(&r.mul_i64(&p(&[1, 1])?, 6), &r.mul_i64(&c(2), 4)), &p(&[1, a])?),
                    r.mul_i64(&p(&[1, 2 * i + 1])?, 6),
                    r.mul_i64(&p(&[3, a])?, -2),
                    r.mul_i64(&r.mul(&self.delta(1, i), &c(4)), 2),
                ]);
                r.sub(&lhs, &rhs)
            }
            Family::II => {
                let lhs = r.mul(&p(&[1, 1, a])?, &p(&[1, 1, b])?);
                let (p1a, p1b) = (p(&[1, a])?, p(&[1, b])?);
                let rhs = r.sum(&[
                    r.mul_i64(&r.mul(&p(&[1, 1])?, &r.mul(&p1a, &p1b)), 4),
                    r.mul_i64(&r.add(&r.mul(&p1a, &p(&[3, b])?), &r.mul(&p1b, &p(&[3, a])?)), -2),
                    r.mul_i64(
                        &r.add(&r.mul(&p1b, &p(&[1, 2 * i + 1])?), &r.mul(&p1a, &p(&[1, 2 * j + 1])?)),
                        4,
                    ),
                    r.mul_i64(&p(&[2 * i + 1, 2 * j + 1])?, 4),
                    r.mul_i64(&r.add(&p(&[b, 2 * i + 3])?, &p(&[a, 2 * j + 3])?), -2),
                    r.mul_i64(&r.mul(&c(2), &r.mul(&p1a, &p1b)), 4),
                    r.mul_i64(
                        &r.mul(
                            &c(4),
                            &r.add(&r.mul(&self.delta(i, 1), &p1b), &r.mul(&self.delta(j, 1), &p1a)),
                        ),
                        2,
                    ),
                    r.mul_i64(&r.mul(&c(4 * i + 2), &self.delta(i, j)), 4),
                    r.mul_i64(
                        &r.add(
                            &r.mul(&c(4 * i), &self.delta(i, j + 1)),
                            &r.mul(&c(4 * j), &self.delta(i + 1, j)),
                        ),
                        2,
                    ),
                ]);
                r.sub(&lhs, &rhs)
            }
            Family::III => r.sum(&[
                r.mul(&p(&[1, 1, b])?, &p(&[1, a])?),
                r.neg(&r.mul(&p(&[1, 1, a])?, &p(&[1, b])?)),
                p(&[1, 2 * i + 1, b])?,
                r.neg(&p(&[1, a, 2 * j + 1])?),
            ]),
            Family::IV => r.sum(&[
                r.mul(&p(&[1, 1, 1, b])?, &p(&[1, a])?),
                r.neg(&r.mul(&p(&[1, 1, 1, a])?, &p(&[1, b])?)),
                p(&[1, 1, 2 * i + 1, b])?,
                r.neg(&p(&[1, 1, a, 2 * j + 1])?),
            ]),
        };
        let params: &[(&str, i64)] = match which {
            Family::I => &[("i", i)],
            _ => &[("i", i), ("j", j)],
        };
        Ok(self.report(&format!("wp_family_{}", which.tag()), params, &[defect], started))
    }

    /// `℘_{(2g−1)·4} = 6℘_{(2g−1)·2}² + 4λ_{4g}℘_{2g−1,2g−3}
    ///   + 4λ_{4g+2}(4℘_{2g−1,2g−5} − 3℘_{(2g−3)·2}) + 4λ_{4g−2}℘_{(2g−1)·2}
    ///   − 8λ_{4g+2}λ_{4g−6} + 2λ_{4g}λ_{4g−4}`.
    pub fn check_wp_quartic_top(&self) -> Result<IdentityReport> {
        let started = Instant::now();
        self.require(Model::Odd, "the top quartic relation")?;
        let r = self.ring;
        let g = self.curve.genus() as i64;
        let p = |s: &[i64]| self.p(s);
        let c = |n| self.coef(n);
        let m = 2 * g - 1;
        let lhs = p(&[m, m, m, m])?;
        let top = p(&[m, m])?;
        let rhs = r.sum(&[
            r.mul_i64(&r.square(&top), 6),
            r.mul_i64(&r.mul(&c(4 * g), &p(&[m, m - 2])?), 4),
            r.mul_i64(
                &r.mul(
                    &c(4 * g + 2),
                    &r.sub(&r.mul_i64(&p(&[m, m - 4])?, 4), &r.mul_i64(&p(&[m - 2, m - 2])?, 3)),
                ),
                4,
            ),
            r.mul_i64(&r.mul(&c(4 * g - 2), &top), 4),
            r.mul_i64(&r.mul(&c(4 * g + 2), &c(4 * g - 6)), -8),
            r.mul_i64(&r.mul(&c(4 * g), &c(4 * g - 4)), 2),
        ]);
        Ok(self.report("wp_quartic_top", &[], &[r.sub(&lhs, &rhs)], started))
    }

    /// `h_k(X₁, …, X_g) = (−1)^{k−1} ℘_{1,2k−1}` for `k = 1..g`.
    pub fn check_h_inversion(&self) -> Result<IdentityReport> {
        let started = Instant::now();
        self.require(Model::Odd, "the inversion formula")?;
        let r = self.ring;
        let h = poly::elementary_symmetric(r, &self.divisor.xs);
        let mut defects = Vec::new();
        for k in 1..=self.curve.genus() as i64 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let rhs = r.mul_i64(&self.p(&[1, 2 * k - 1])?, sign);
            defects.push(r.sub(&h[k as usize], &rhs));
        }
        Ok(self.report("h_inversion", &[], &defects, started))
    }

    /// `Σ P_{2g+2−2i,2g+2−2j} e1^{i−1} e2^{j−1}` at a pair of values.
    fn g_at(&self, e1: &A::Elem, e2: &A::Elem) -> Result<A::Elem> {
        let r = self.ring;
        let g = self.curve.genus();
        let model = self.curve.model();
        let mut acc = r.zero();
        for i in 0..g {
            for j in 0..g {
                let s = model.suffix_of_exponent(g, i) as i64;
                let t = model.suffix_of_exponent(g, j) as i64;
                let term = r.mul(&r.pow(e1, i as u32), &r.pow(e2, j as u32));
                r.mul_acc(&mut acc, &self.p(&[s, t])?, &term);
            }
        }
        Ok(acc)
    }

    /// `f(e1, e2) = Σ 2ν_{top−4i}(e1e2)^i + ν_{top−2−4i}(e1e2)^i(e1 + e2)`,
    /// read through the (possibly perturbed) coefficients.
    fn pair_value(&self, e1: &K::Elem, e2: &K::Elem) -> A::Elem {
        let r = self.ring;
        let f = self.curve.field();
        let top = 2 * self.curve.degree() as i64;
        let prod = r.embed(&f.mul(e1, e2));
        let sum = r.embed(&f.add(e1, e2));
        let mut acc = r.zero();
        for i in 0..=self.curve.degree() / 2 {
            let k = i as i64;
            let pw = r.pow(&prod, i as u32);
            let diag = r.mul_i64(&self.coef(top - 4 * k), 2);
            let side = r.mul(&self.coef(top - 2 - 4 * k), &sum);
            r.mul_acc(&mut acc, &r.add(&diag, &side), &pw);
        }
        acc
    }

    /// `E(e1, e2) = (e1 − e2){f(e1, e2) − (e1 − e2)² G(e1, e2)}`.
    fn e_pair(&self, e1: &K::Elem, e2: &K::Elem) -> Result<A::Elem> {
        let r = self.ring;
        let f = self.curve.field();
        let fv = self.pair_value(e1, e2);
        let d = r.embed(&f.sub(e1, e2));
        let g = self.g_at(&r.embed(e1), &r.embed(e2))?;
        Ok(r.mul(&d, &r.sub(&fv, &r.mul(&r.square(&d), &g))))
    }

    /// The four-point relation between `E` and the fourth derivatives of `P`.
    pub fn check_quartic_baker(&self, e: &[K::Elem; 4]) -> Result<IdentityReport> {
        let started = Instant::now();
        self.require(Model::Even, "the four-point relation")?;
        let f = self.curve.field();
        for a in 0..4 {
            for b in 0..a {
                if f.is_negligible(&f.sub(&e[a], &e[b]), 1.0) {
                    return Err(Error::Precondition("the four e-values must be distinct".into()));
                }
            }
        }
        let r = self.ring;
        let g = self.curve.genus();
        let model = self.curve.model();
        let ea: Vec<A::Elem> = e.iter().map(|v| r.embed(v)).collect();
        let powers: Vec<Vec<A::Elem>> = ea.iter().map(|v| (0..g).map(|k| r.pow(v, k as u32)).collect()).collect();
        let mut sum = r.zero();
        for i in 0..g {
            for j in 0..g {
                for k in 0..g {
                    for l in 0..g {
                        let s: Vec<i64> = [i, j, k, l]
                            .iter()
                            .map(|&x| model.suffix_of_exponent(g, x) as i64)
                            .collect();
                        let mono = r.product(&[
                            powers[0][i].clone(),
                            powers[1][j].clone(),
                            powers[2][k].clone(),
                            powers[3][l].clone(),
                        ]);
                        r.mul_acc(&mut sum, &self.p(&s)?, &mono);
                    }
                }
            }
        }
        let diff = |a: usize, b: usize| f.sub(&e[a], &e[b]);
        let vander = f.product(&[diff(1, 0), diff(2, 1), diff(2, 0), diff(3, 2), diff(3, 1), diff(3, 0)]);
        let lhs = r.mul(&r.embed(&f.mul(&vander, &f.from_ratio(1, 2))), &sum);
        let rhs = r.sum(&[
            r.mul(&self.e_pair(&e[1], &e[2])?, &self.e_pair(&e[3], &e[0])?),
            r.mul(&self.e_pair(&e[2], &e[0])?, &self.e_pair(&e[3], &e[1])?),
            r.mul(&self.e_pair(&e[0], &e[1])?, &self.e_pair(&e[3], &e[2])?),
        ]);
        Ok(self.report("quartic_baker", &[], &[r.sub(&lhs, &rhs)], started))
    }

    /// Every factorization of `P_{s,t,u,w}` into an entry and two derivations
    /// agrees; the defects are differences from the first factorization.
    pub fn check_suffix_symmetry(&self, suffixes: [i64; 4]) -> Result<IdentityReport> {
        let started = Instant::now();
        let r = self.ring;
        let reference = self.derivs.get(&suffixes)?;
        let mut defects = Vec::new();
        for perm in permutations4() {
            let s: Vec<i64> = perm.iter().map(|&k| suffixes[k]).collect();
            defects.push(r.sub(&self.derivs.get(&s)?, &reference));
        }
        let params: Vec<(&str, i64)> = ["s1", "s2", "s3", "s4"].into_iter().zip(suffixes).collect();
        Ok(self.report("suffix_symmetry", &params, &defects, started))
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|k| p.contains(&k)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Every identity of the model at the divisor, with all parameter values.
pub fn check_all<K: Field, A: Algebra<K> + Render>(ctx: &Context<'_, K, A>) -> Result<Vec<IdentityReport>> {
    let g = ctx.curve().genus() as i64;
    let mut out = Vec::new();
    match ctx.curve().model() {
        Model::Even => {
            for k in 1..=g {
                out.push(ctx.check_p_third(k)?);
            }
            let f = ctx.curve().field();
            let e = [f.from_i64(-2), f.from_ratio(1, 2), f.from_i64(3), f.from_i64(7)];
            out.push(ctx.check_quartic_baker(&e)?);
        }
        Model::Odd => {
            for i in 1..=g {
                out.push(ctx.check_wp_family(Family::I, i, i)?);
                for j in 1..=g {
                    for which in [Family::II, Family::III, Family::IV] {
                        out.push(ctx.check_wp_family(which, i, j)?);
                    }
                }
            }
            out.push(ctx.check_wp_quartic_top()?);
            out.push(ctx.check_h_inversion()?);
        }
    }
    Ok(out)
}
