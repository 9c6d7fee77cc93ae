//! The three explicit KP solutions and their residuals as jets.
//!
//! Each solution is `Φ(t) = scale · (−2·P_{s,s} − offset)` evaluated along
//! three flow directions attached to `t1, t2, t3`. The KP-I residual is
//! `∂1(∂3Φ + 6Φ∂1Φ + ∂1³Φ) − ∂2²Φ` and the KP-II residual has `+∂2²Φ`.
//! With jets of order `n` the residual is exact to order `n − 4`.

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Model, SymDivisor};
use crate::error::{Error, Result};
use crate::flow::{directional_value, Direction, FlowDirections};
use crate::scalar::{Algebra, ComplexFloatField, Field, Jet, JetRing, Ring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `−2P_{2,2} − δ` on the even model.
    Psi,
    /// `−2℘_{2g−1,2g−1} − 𝔣` on the odd model.
    Phi,
    /// `−2℘_{1,1}` on the odd model.
    Upsilon,
}

impl Variant {
    pub fn model(self) -> Model {
        match self {
            Variant::Psi => Model::Even,
            Variant::Phi | Variant::Upsilon => Model::Odd,
        }
    }

    pub fn min_genus(self) -> usize {
        match self {
            Variant::Psi | Variant::Phi => 3,
            Variant::Upsilon => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Psi => "psi",
            Variant::Phi => "phi",
            Variant::Upsilon => "upsilon",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi" => Ok(Variant::Psi),
            "phi" => Ok(Variant::Phi),
            "upsilon" => Ok(Variant::Upsilon),
            _ => Err(Error::Input(format!("unknown variant {s:?}"))),
        }
    }
}

/// Which square root of `−3ν₀` (or `−3λ_{4g+2}`, or `λ₂`) is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    Principal,
    Negated,
}

/// Which KP equation the residual targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    KpI,
    KpII,
}

/// Named constants of a variant with their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Constants<E> {
    pub variant: Variant,
    /// `(name, value, weight)`; the names are `alpha … delta`,
    /// `c … f` or `two_sqrt_lambda2, minus_four`.
    pub values: Vec<(&'static str, E, i64)>,
}

impl<E: Clone> Constants<E> {
    pub fn get(&self, name: &str) -> &E {
        &self
            .values
            .iter()
            .find(|(n, _, _)| *n == name)
            .unwrap_or_else(|| panic!("constant {name} not defined"))
            .1
    }
}

fn root<K: Field>(f: &K, a: &K::Elem, what: &str, branch: Branch) -> Result<K::Elem> {
    let r = f.sqrt(a).ok_or_else(|| {
        Error::NotRepresentable(format!(
            "√({what}) = √({}) is not exact; use numeric mode",
            f.render(a)
        ))
    })?;
    Ok(match branch {
        Branch::Principal => r,
        Branch::Negated => f.neg(&r),
    })
}

/// Constants of the variant on the curve.
pub fn make_constants<K: Field>(variant: Variant, curve: &Curve<K>, branch: Branch) -> Result<Constants<K::Elem>> {
    let f = curve.field();
    let g = curve.genus();
    if curve.model() != variant.model() {
        return Err(Error::Precondition(format!(
            "{} lives on the {:?} model",
            variant.name(),
            variant.model()
        )));
    }
    if g < variant.min_genus() {
        return Err(Error::Precondition(format!(
            "{}: g ≥ {} required, got g = {g}",
            variant.name(),
            variant.min_genus()
        )));
    }
    let values = match variant {
        Variant::Psi | Variant::Phi => {
            // (lead, next, third) = (ν₀, ν₂, ν₄) or (λ_{4g+2}, λ_{4g}, λ_{4g−2})
            let (lead, next, third, w, w_next, w_third) = match variant {
                Variant::Psi => (curve.coef(0), curve.coef(2), curve.coef(4), 0, 2, 4),
                _ => {
                    let top = 4 * g as i64 + 2;
                    (curve.coef(top), curve.coef(top - 2), curve.coef(top - 4), top, top - 2, top - 4)
                }
            };
            if f.is_zero(&lead) {
                return Err(Error::Precondition(match variant {
                    Variant::Psi => "ν₀ must be nonzero".into(),
                    _ => "λ_{4g+2} must be nonzero; shift X to arrange it".into(),
                }));
            }
            let r = root(f, &f.mul_i64(&lead, -3), "−3·leading coefficient", branch)?;
            let first = f.mul_i64(&lead, -16);
            let second = f.mul_i64(&r, 2);
            let third_c = f.div(&next, &r)?;
            let fourth = f.add(
                &f.mul(&f.from_ratio(2, 3), &third),
                &f.div(&f.square(&next), &f.mul_i64(&lead, 18))?,
            );
            let names = match variant {
                Variant::Psi => ["alpha", "beta", "gamma", "delta"],
                _ => ["c", "d", "e", "f"],
            };
            let half = w / 2;
            vec![
                (names[0], first, w),
                (names[1], second, half),
                (names[2], third_c, w_next - half),
                (names[3], fourth, w_third),
            ]
        }
        Variant::Upsilon => {
            let r = root(f, &curve.coef(2), "λ₂", branch)?;
            vec![("two_sqrt_lambda2", f.mul_i64(&r, 2), 1), ("minus_four", f.from_i64(-4), 0)]
        }
    };
    Ok(Constants { variant, values })
}

/// A solution: flow directions, the entry, and the affine value map.
#[derive(Debug, Clone, PartialEq)]
pub struct KpSolution<E> {
    pub variant: Variant,
    pub directions: FlowDirections<E>,
    pub entry: usize,
    pub scale: E,
    pub offset: E,
    pub equation: Equation,
}

/// The KP-I solution of the variant.
pub fn solution<K: Field>(variant: Variant, curve: &Curve<K>, constants: &Constants<K::Elem>) -> Result<KpSolution<K::Elem>> {
    let f = curve.field();
    let g = curve.genus();
    let single = |s: usize, c: K::Elem| Direction { terms: vec![(s, c)] };
    let (dirs, entry, offset) = match variant {
        Variant::Psi => (
            vec![
                single(2, f.one()),
                Direction {
                    terms: vec![(4, constants.get("beta").clone()), (2, constants.get("gamma").clone())],
                },
                single(6, constants.get("alpha").clone()),
            ],
            2,
            constants.get("delta").clone(),
        ),
        Variant::Phi => (
            vec![
                single(2 * g - 1, f.one()),
                Direction {
                    terms: vec![
                        (2 * g - 3, constants.get("d").clone()),
                        (2 * g - 1, constants.get("e").clone()),
                    ],
                },
                single(2 * g - 5, constants.get("c").clone()),
            ],
            2 * g - 1,
            constants.get("f").clone(),
        ),
        Variant::Upsilon => (
            vec![
                single(1, f.one()),
                single(1, constants.get("two_sqrt_lambda2").clone()),
                single(3, constants.get("minus_four").clone()),
            ],
            1,
            f.zero(),
        ),
    };
    Ok(KpSolution {
        variant,
        directions: FlowDirections::new(variant.model(), g, dirs)?,
        entry,
        scale: f.one(),
        offset,
        equation: Equation::KpI,
    })
}

fn scale_direction<K: Field>(f: &K, d: &Direction<K::Elem>, c: &K::Elem) -> Direction<K::Elem> {
    Direction {
        terms: d.terms.iter().map(|(s, g)| (*s, f.mul(g, c))).collect(),
    }
}

impl<E: Clone> KpSolution<E> {
    /// `Φ(t1, √−1·t2, t3)`: a KP-II solution from a KP-I one (and back).
    pub fn sqrt_minus_one<K: Field<Elem = E>>(&self, f: &K) -> Result<Self> {
        let i = f
            .sqrt(&f.from_i64(-1))
            .ok_or_else(|| Error::NotRepresentable("√−1 in this field".into()))?;
        let mut out = self.clone();
        let d = self.directions.directions();
        out.directions = rebuild(&self.directions, vec![d[0].clone(), scale_direction(f, &d[1], &i), d[2].clone()]);
        out.equation = flip(self.equation);
        Ok(out)
    }
}

fn flip(e: Equation) -> Equation {
    match e {
        Equation::KpI => Equation::KpII,
        Equation::KpII => Equation::KpI,
    }
}

fn rebuild<E: Clone>(like: &FlowDirections<E>, dirs: Vec<Direction<E>>) -> FlowDirections<E> {
    let mut out = like.clone();
    out.set_directions(dirs);
    out
}

impl KpSolution<crate::scalar::BigFloatComplex> {
    /// `ξ² Φ(ξ t1, t2, ξ³ t3)` with `ξ = (1 + i)/√2`.
    pub fn xi8(&self, f: &ComplexFloatField) -> Self {
        let root_half = f.sqrt(&f.from_ratio(1, 2)).expect("real square root");
        let xi = f.add(&root_half, &f.mul(&f.i(), &root_half));
        let d = self.directions.directions();
        let mut out = self.clone();
        out.directions = rebuild(
            &self.directions,
            vec![
                scale_direction(f, &d[0], &xi),
                d[1].clone(),
                scale_direction(f, &d[2], &f.pow(&xi, 3)),
            ],
        );
        out.scale = f.mul(&self.scale, &f.square(&xi));
        out.equation = flip(self.equation);
        out
    }
}

/// `Φ` as a jet along the solution's flows.
pub fn solution_jet<K: Field, A: Algebra<K>>(
    curve: &Curve<K>,
    ring: &A,
    divisor: &SymDivisor<A>,
    sol: &KpSolution<K::Elem>,
    order: usize,
) -> Result<(JetRing<A>, Jet<A::Elem>)> {
    let (jets, p) = directional_value(curve, ring, divisor, (sol.entry, sol.entry), &sol.directions, order)?;
    let offset = jets.embed(&sol.offset);
    let value = jets.scale(&jets.sub(&jets.mul_i64(&p, -2), &offset), &sol.scale);
    Ok((jets, value))
}

/// The residual of the targeted KP equation, of order `order − 4`.
pub fn residual<K: Field, A: Algebra<K>>(
    curve: &Curve<K>,
    ring: &A,
    divisor: &SymDivisor<A>,
    sol: &KpSolution<K::Elem>,
    order: usize,
) -> Result<(JetRing<A>, Jet<A::Elem>)> {
    if order < 4 {
        return Err(Error::Input("KP residuals need jets of order at least 4".into()));
    }
    let (jets, phi) = solution_jet(curve, ring, divisor, sol, order)?;
    Ok(kp_operator(&jets, &phi, sol.equation))
}

/// `∂1(∂3Φ + 6Φ∂1Φ + ∂1³Φ) ∓ ∂2²Φ` on a jet of order `n ≥ 4`, returned at
/// order `n − 4`.
pub fn kp_operator<R: Ring>(jets: &JetRing<R>, phi: &Jet<R::Elem>, equation: Equation) -> (JetRing<R>, Jet<R::Elem>) {
    let n = jets.order();
    let at = |k: usize| jets.with_order(n - k);
    let d1 = jets.partial(phi, 0);
    let d3 = jets.partial(phi, 2);
    let o1 = at(1);
    let nonlinear = o1.mul_i64(&o1.mul(&o1.convert(phi), &d1), 6);
    let d111 = at(2).partial(&o1.partial(&d1, 0), 0);
    let inner = at(3);
    let sum = inner.add(&inner.add(&inner.convert(&d3), &inner.convert(&nonlinear)), &d111);
    let outer = inner.partial(&sum, 0);
    let d22 = o1.partial(&jets.partial(phi, 1), 1);
    let low = at(4);
    let d22 = low.convert(&d22);
    let res = match equation {
        Equation::KpI => low.sub(&outer, &d22),
        Equation::KpII => low.add(&outer, &d22),
    };
    (low, res)
}

/// One line of the weight audit: the quantity, its weight, and whether the
/// rescaled value equals `s^weight` times the original.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightLine {
    pub quantity: String,
    pub weight: i64,
    pub covariant: bool,
}

/// Rescales the curve by `s` (with `s` a positive rational, so principal
/// roots commute with scaling), recomputes constants and the solution value
/// at the rescaled divisor, and compares against `s^weight`.
pub fn check_weight_grading<K: Field, A: Algebra<K>>(
    variant: Variant,
    curve: &Curve<K>,
    ring: &A,
    divisor: &SymDivisor<A>,
    s: &K::Elem,
) -> Result<Vec<WeightLine>> {
    let f = curve.field();
    let base = make_constants(variant, curve, Branch::Principal)?;
    let scaled_curve = curve.rescaled(s)?;
    let scaled = make_constants(variant, &scaled_curve, Branch::Principal)?;
    let power = |w: i64| {
        if w >= 0 {
            Ok(f.pow(s, w as u32))
        } else {
            f.try_inv(&f.pow(s, (-w) as u32)).map_err(Error::from)
        }
    };
    let mut lines = Vec::new();
    for ((name, v, w), (_, vs, _)) in base.values.iter().zip(&scaled.values) {
        let expect = f.mul(v, &power(*w)?);
        lines.push(WeightLine {
            quantity: (*name).to_string(),
            weight: *w,
            covariant: f.is_negligible(&f.sub(vs, &expect), f.magnitude(&expect)),
        });
    }
    let (_, wy) = curve.model().weights(curve.genus());
    let s2 = ring.embed(&f.square(s));
    let sy = ring.embed(&f.pow(s, wy as u32));
    let scaled_div = SymDivisor::new(
        &scaled_curve,
        ring,
        divisor.xs.iter().map(|x| ring.mul(x, &s2)).collect(),
        divisor.ys.iter().map(|y| ring.mul(y, &sy)).collect(),
        divisor.signs.clone(),
    )?;
    let value = |c: &Curve<K>, d: &SymDivisor<A>, k: &Constants<K::Elem>| -> Result<A::Elem> {
        let sol = solution(variant, c, k)?;
        let (_, v) = solution_jet(c, ring, d, &sol, 0)?;
        Ok(v.constant().clone())
    };
    let v = value(curve, divisor, &base)?;
    let vs = value(&scaled_curve, &scaled_div, &scaled)?;
    let w = match variant {
        Variant::Psi => 4,
        Variant::Phi => 4 * curve.genus() as i64 - 2,
        Variant::Upsilon => 2,
    };
    let expect = ring.mul(&v, &ring.embed(&power(w)?));
    lines.push(WeightLine {
        quantity: format!("{} value", variant.name()),
        weight: w,
        covariant: ring.is_negligible(&ring.sub(&vs, &expect), ring.magnitude(&expect)),
    });
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{even_rational, odd_rational, rng, Leading};
    use crate::scalar::{GaussianField, GaussianRational};

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn qs(v: &[i64]) -> Vec<GaussianRational> {
        v.iter().map(|&n| q(n)).collect()
    }

    fn lead(w: i64) -> Leading {
        Leading {
            minus_three_square: Some(w),
            ..Default::default()
        }
    }

    fn residual_is_zero(variant: Variant, curve: &Curve<GaussianField>, d: &SymDivisor<GaussianField>, branch: Branch) -> bool {
        let k = make_constants(variant, curve, branch).unwrap();
        let sol = solution(variant, curve, &k).unwrap();
        let (jets, r) = residual(curve, &GaussianField, d, &sol, 4).unwrap();
        jets.is_zero(&r)
    }

    #[test]
    fn psi_constants() {
        let c = Curve::even(GaussianField, 3, qs(&[-3, 6, 1, 0, 0, 0, 0, 0, 1])).unwrap();
        let k = make_constants(Variant::Psi, &c, Branch::Principal).unwrap();
        assert_eq!(k.get("alpha"), &q(48));
        assert_eq!(k.get("beta"), &q(6));
        assert_eq!(k.get("gamma"), &q(2));
        assert_eq!(k.get("delta"), &q(0));
        let bad = Curve::even(GaussianField, 3, qs(&[2, 6, 1, 0, 0, 0, 0, 0, 1])).unwrap();
        assert!(matches!(
            make_constants(Variant::Psi, &bad, Branch::Principal),
            Err(Error::NotRepresentable(_))
        ));
        let small = Curve::even(GaussianField, 2, qs(&[-3, 0, 0, 0, 0, 0, 1])).unwrap();
        assert!(matches!(
            make_constants(Variant::Psi, &small, Branch::Principal),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn psi_solves_kp1() {
        let fx = even_rational(3, 5, lead(1)).unwrap();
        let mut r = rng(9);
        for _ in 0..2 {
            let d = fx.divisor(&mut r).unwrap();
            assert!(residual_is_zero(Variant::Psi, &fx.curve, &d, Branch::Principal));
        }
        let d = fx.divisor(&mut r).unwrap();
        assert!(residual_is_zero(Variant::Psi, &fx.curve, &d, Branch::Negated));
    }

    #[test]
    fn phi_solves_kp1() {
        let fx = odd_rational(3, 4, lead(1)).unwrap();
        let d = fx.divisor(&mut rng(2)).unwrap();
        assert!(residual_is_zero(Variant::Phi, &fx.curve, &d, Branch::Principal));
    }

    #[test]
    fn upsilon_solves_kp1() {
        let fx = odd_rational(
            2,
            8,
            Leading {
                lambda2_square: Some(3),
                ..Default::default()
            },
        )
        .unwrap();
        let d = fx.divisor(&mut rng(3)).unwrap();
        assert!(residual_is_zero(Variant::Upsilon, &fx.curve, &d, Branch::Principal));
    }

    #[test]
    fn perturbed_solution_fails() {
        let fx = even_rational(3, 5, lead(1)).unwrap();
        let d = fx.divisor(&mut rng(9)).unwrap();
        let k = make_constants(Variant::Psi, &fx.curve, Branch::Principal).unwrap();
        let mut sol = solution(Variant::Psi, &fx.curve, &k).unwrap();
        sol.offset = GaussianField.add(&sol.offset, &q(1));
        let (jets, r) = residual(&fx.curve, &GaussianField, &d, &sol, 4).unwrap();
        assert!(!jets.is_zero(&r));
    }

    #[test]
    fn sqrt_minus_one_gives_kp2() {
        let f = GaussianField;
        let fx = even_rational(3, 5, lead(1)).unwrap();
        let d = fx.divisor(&mut rng(4)).unwrap();
        let k = make_constants(Variant::Psi, &fx.curve, Branch::Principal).unwrap();
        let sol = solution(Variant::Psi, &fx.curve, &k).unwrap();
        let kp2 = sol.sqrt_minus_one(&f).unwrap();
        assert_eq!(kp2.equation, Equation::KpII);
        let (jets, r) = residual(&fx.curve, &f, &d, &kp2, 4).unwrap();
        assert!(jets.is_zero(&r));
        let back = kp2.sqrt_minus_one(&f).unwrap();
        assert_eq!(back.equation, Equation::KpI);
        let negated = scale_direction(&f, &sol.directions.directions()[1], &q(-1));
        assert_eq!(back.directions.directions()[1], negated);
        let (jets, r) = residual(&fx.curve, &f, &d, &back, 4).unwrap();
        assert!(jets.is_zero(&r));
    }

    #[test]
    fn xi8_gives_kp2_numerically() {
        let cf = ComplexFloatField::default();
        let fx = odd_rational(2, 8, Leading { lambda2_square: Some(3), ..Default::default() }).unwrap();
        let d = fx.divisor(&mut rng(3)).unwrap();
        let curve = fx.curve.to_numeric(cf).unwrap();
        let pts: Vec<_> = d.xs.iter().zip(&d.ys).map(|(x, y)| (cf.from_gaussian(x), cf.from_gaussian(y))).collect();
        let nd = crate::curve::field_divisor(&curve, &pts).unwrap();
        let k = make_constants(Variant::Upsilon, &curve, Branch::Principal).unwrap();
        let sol = solution(Variant::Upsilon, &curve, &k).unwrap().xi8(&cf);
        let (jets, r) = residual(&curve, &cf, &nd, &sol, 4).unwrap();
        assert!(jets.max_magnitude(&r) < 1e-40);
        let (jets, r) = residual(&curve, &cf, &nd, &KpSolution { equation: Equation::KpI, ..sol }, 4).unwrap();
        assert!(jets.max_magnitude(&r) > 1e-10);
    }

    #[test]
    fn weights_are_covariant() {
        let fx = even_rational(3, 5, lead(1)).unwrap();
        let d = fx.divisor(&mut rng(1)).unwrap();
        let lines = check_weight_grading(Variant::Psi, &fx.curve, &GaussianField, &d, &q(2)).unwrap();
        assert!(lines.iter().all(|l| l.covariant), "{lines:?}");
        assert_eq!(lines[3].weight, 4);
        let fx = odd_rational(3, 4, lead(1)).unwrap();
        let d = fx.divisor(&mut rng(1)).unwrap();
        let lines = check_weight_grading(Variant::Phi, &fx.curve, &GaussianField, &d, &q(3)).unwrap();
        assert!(lines.iter().all(|l| l.covariant), "{lines:?}");
        assert_eq!(lines[2].weight, 5);
    }
}
