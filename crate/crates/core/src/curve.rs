//! The two hyperelliptic models and points of their symmetric products.
//!
//! The odd model is `Y² = M(X) = X^{2g+1} + λ₂X^{2g} + ⋯ + λ_{4g+2}` and the
//! even model is `y² = N(x) = ν₀x^{2g+2} + ν₂x^{2g+1} + ⋯ + ν_{4g+4}` with
//! `ν₀ ≠ 0`. Coefficients are addressed by their weight index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::{
    Algebra, ComplexFloatField, EtaleRing, Field, GaussianField, GaussianRational, Ring,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Odd,
    Even,
}

impl Model {
    /// Suffixes of the derivations and matrix entries on this model.
    pub fn suffixes(self, genus: usize) -> Vec<usize> {
        match self {
            Model::Odd => (1..=genus).map(|i| 2 * i - 1).collect(),
            Model::Even => (1..=genus).map(|i| 2 * i).collect(),
        }
    }

    /// Exponent of `e` carrying suffix `s` in the generating polynomial, or
    /// `None` when `s` is out of range.
    pub fn exponent(self, genus: usize, s: i64) -> Option<usize> {
        let g = genus as i64;
        let e = match self {
            Model::Even if s % 2 == 0 && (2..=2 * g).contains(&s) => g - s / 2,
            Model::Odd if s.rem_euclid(2) == 1 && (1..2 * g).contains(&s) => g - (s + 1) / 2,
            _ => return None,
        };
        Some(e as usize)
    }

    pub fn suffix_of_exponent(self, genus: usize, e: usize) -> usize {
        match self {
            Model::Even => 2 * (genus - e),
            Model::Odd => 2 * (genus - e) - 1,
        }
    }

    /// Weight of the coordinate `x` (or `X`) and of `y` (or `Y`).
    pub fn weights(self, genus: usize) -> (usize, usize) {
        match self {
            Model::Odd => (2, 2 * genus + 1),
            Model::Even => (2, 2 * genus + 2),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Curve<K: Field> {
    field: K,
    model: Model,
    genus: usize,
    /// `coeffs[k]` is the coefficient of weight `2k`; on the odd model
    /// `coeffs[0] = λ₀ = 1`.
    coeffs: Vec<K::Elem>,
    branch_point: Option<K::Elem>,
}

/// Nonzero resultant of the curve polynomial and its derivative.
#[derive(Debug, Clone)]
pub struct Certificate<E> {
    pub resultant: E,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightAudit {
    pub total_weight: usize,
    pub monomials: Vec<(String, usize)>,
    pub homogeneous: bool,
}

impl<K: Field> Curve<K> {
    /// Odd model from `(λ₂, λ₄, …, λ_{4g+2})`.
    pub fn odd(field: K, genus: usize, lambdas: Vec<K::Elem>) -> Result<Self> {
        if genus == 0 {
            return Err(Error::Precondition("genus must be at least 1".into()));
        }
        if lambdas.len() != 2 * genus + 1 {
            return Err(Error::Input(format!(
                "odd model of genus {genus} needs {} coefficients, got {}",
                2 * genus + 1,
                lambdas.len()
            )));
        }
        let mut coeffs = vec![field.one()];
        coeffs.extend(lambdas);
        Ok(Curve {
            field,
            model: Model::Odd,
            genus,
            coeffs,
            branch_point: None,
        })
    }

    /// Even model from `(ν₀, ν₂, …, ν_{4g+4})`.
    pub fn even(field: K, genus: usize, nus: Vec<K::Elem>) -> Result<Self> {
        if genus == 0 {
            return Err(Error::Precondition("genus must be at least 1".into()));
        }
        if nus.len() != 2 * genus + 3 {
            return Err(Error::Input(format!(
                "even model of genus {genus} needs {} coefficients, got {}",
                2 * genus + 3,
                nus.len()
            )));
        }
        if field.is_zero(&nus[0]) {
            return Err(Error::Precondition("ν₀ must be nonzero on the even model".into()));
        }
        Ok(Curve {
            field,
            model: Model::Even,
            genus,
            coeffs: nus,
            branch_point: None,
        })
    }

    /// Designates the branch point `a`, which must satisfy `N(a) = 0`.
    pub fn with_branch_point(mut self, a: K::Elem) -> Result<Self> {
        if self.model != Model::Even {
            return Err(Error::Precondition("branch point belongs to the even model".into()));
        }
        let (n, _) = self.eval(&a);
        if !self.field.is_negligible(&n, self.coeff_scale()) {
            return Err(Error::Precondition(format!(
                "branch point is not a root: N(a) = {}",
                self.field.render(&n)
            )));
        }
        self.branch_point = Some(a);
        Ok(self)
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn branch_point(&self) -> Option<&K::Elem> {
        self.branch_point.as_ref()
    }

    pub fn require_branch_point(&self) -> Result<&K::Elem> {
        self.branch_point
            .as_ref()
            .ok_or_else(|| Error::Precondition("the even model needs a branch point a with N(a) = 0".into()))
    }

    /// Coefficients in weight order (`λ₀ = 1, λ₂, …` or `ν₀, ν₂, …`).
    pub fn weighted_coeffs(&self) -> &[K::Elem] {
        &self.coeffs
    }

    /// `λ_i` or `ν_i`; zero for odd or out-of-range `i`, and `λ₀ = 1`.
    pub fn coef(&self, i: i64) -> K::Elem {
        if i < 0 || i % 2 != 0 {
            return self.field.zero();
        }
        self.coeffs
            .get((i / 2) as usize)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Curve polynomial, lowest degree first.
    pub fn poly(&self) -> Vec<K::Elem> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// `(N(x), N′(x))` (or `M`) by Horner evaluation.
    pub fn eval(&self, x: &K::Elem) -> (K::Elem, K::Elem) {
        let p = self.poly();
        let d = poly::derivative(&self.field, &p);
        (poly::eval(&self.field, &p, x), poly::eval(&self.field, &d, x))
    }

    /// Evaluates the curve polynomial and its derivative in an algebra.
    pub fn eval_in<A: Algebra<K>>(&self, ring: &A, x: &A::Elem) -> (A::Elem, A::Elem) {
        let p = self.poly();
        let mut v = ring.zero();
        let mut dv = ring.zero();
        for c in p.iter().rev() {
            dv = ring.add(&ring.mul(&dv, x), &v);
            v = ring.add(&ring.mul(&v, x), &ring.embed(c));
        }
        (v, dv)
    }

    fn coeff_scale(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| self.field.magnitude(c))
            .fold(1.0, f64::max)
    }

    pub fn validate(&self) -> Result<Certificate<K::Elem>> {
        if self.model == Model::Even && self.field.is_zero(&self.coeffs[0]) {
            return Err(Error::Precondition("ν₀ must be nonzero on the even model".into()));
        }
        let p = self.poly();
        let res = poly::resultant(&self.field, &p, &poly::derivative(&self.field, &p))?;
        let scale = self.coeff_scale().powi(2 * self.degree() as i32);
        if self.field.is_negligible(&res, scale) {
            return Err(Error::MultipleRoot);
        }
        Ok(Certificate { resultant: res })
    }

    pub fn weight_audit(&self) -> WeightAudit {
        let (wx, wy) = self.model.weights(self.genus);
        let (total, letter, var) = match self.model {
            Model::Odd => (4 * self.genus + 2, "λ", "X"),
            Model::Even => (4 * self.genus + 4, "ν", "x"),
        };
        let deg = self.degree();
        let mut monomials = vec![(format!("{}^2", var.replace('x', "y").replace('X', "Y")), 2 * wy)];
        for (k, _) in self.coeffs.iter().enumerate() {
            let w = 2 * k + wx * (deg - k);
            let label = if self.model == Model::Odd && k == 0 {
                format!("{var}^{deg}")
            } else {
                format!("{letter}_{}·{var}^{}", 2 * k, deg - k)
            };
            monomials.push((label, w));
        }
        let homogeneous = monomials.iter().all(|(_, w)| *w == total);
        WeightAudit {
            total_weight: total,
            monomials,
            homogeneous,
        }
    }

    /// The weight rescaling `c_i ↦ s^i c_i` (and `a ↦ s²a`).
    pub fn rescaled(&self, s: &K::Elem) -> Result<Self> {
        let f = &self.field;
        let coeffs: Vec<K::Elem> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| f.mul(c, &f.pow(s, 2 * k as u32)))
            .collect();
        let mut out = Curve {
            field: f.clone(),
            model: self.model,
            genus: self.genus,
            coeffs,
            branch_point: None,
        };
        if let Some(a) = &self.branch_point {
            out = out.with_branch_point(f.mul(a, &f.square(s)))?;
        }
        Ok(out)
    }

    /// Same model with the coefficient of weight `i` replaced.
    pub fn with_coef(&self, i: usize, value: K::Elem) -> Result<Self> {
        if i % 2 != 0 || i / 2 >= self.coeffs.len() || (self.model == Model::Odd && i == 0) {
            return Err(Error::Input(format!("no adjustable coefficient of weight {i}")));
        }
        let mut out = self.clone();
        out.coeffs[i / 2] = value;
        out.branch_point = None;
        Ok(out)
    }

    /// The curve after the substitution `X = X′ + X₀`.
    pub fn shifted(&self, x0: &K::Elem) -> Result<Self> {
        let f = &self.field;
        // Taylor shift via repeated synthetic division
        let mut p = self.poly();
        let mut shifted = Vec::with_capacity(p.len());
        while !p.is_empty() {
            let (q, r) = poly::div_linear(f, &p, x0);
            shifted.push(r);
            p = q;
        }
        let weighted: Vec<K::Elem> = shifted.into_iter().rev().collect();
        match self.model {
            Model::Odd => Curve::odd(f.clone(), self.genus, weighted[1..].to_vec()),
            Model::Even => Curve::even(f.clone(), self.genus, weighted),
        }
    }

    pub fn map_field<K2: Field>(&self, target: K2, f: impl Fn(&K::Elem) -> K2::Elem) -> Result<Curve<K2>> {
        let coeffs: Vec<K2::Elem> = self.coeffs.iter().map(&f).collect();
        let mut out = match self.model {
            Model::Odd => Curve::odd(target, self.genus, coeffs[1..].to_vec())?,
            Model::Even => Curve::even(target, self.genus, coeffs)?,
        };
        if let Some(a) = &self.branch_point {
            out = out.with_branch_point(f(a))?;
        }
        Ok(out)
    }
}

impl Curve<GaussianField> {
    pub fn to_numeric(&self, field: ComplexFloatField) -> Result<Curve<ComplexFloatField>> {
        self.map_field(field, |c| field.from_gaussian(c))
    }

    pub fn to_spec(&self) -> CurveSpec {
        let coeffs = match self.model {
            Model::Odd => self.coeffs[1..].to_vec(),
            Model::Even => self.coeffs.clone(),
        };
        CurveSpec {
            model: self.model,
            genus: self.genus,
            coeffs,
            branch_point: self.branch_point.clone(),
        }
    }
}

/// `g` affine points `(x_j, y_j)` with `y_j² = N(x_j)`, coordinates in the
/// algebra `A` over the curve's field.
#[derive(Debug, Clone)]
pub struct SymDivisor<A: Ring> {
    pub xs: Vec<A::Elem>,
    pub ys: Vec<A::Elem>,
    /// Sign attached to each étale `y_j = ±Y_j`; `0` when `y_j` was given
    /// explicitly.
    pub signs: Vec<i8>,
}

impl<A: Ring> SymDivisor<A> {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Checks the curve relation, genericity and the point count.
    pub fn new<K: Field>(curve: &Curve<K>, ring: &A, xs: Vec<A::Elem>, ys: Vec<A::Elem>, signs: Vec<i8>) -> Result<Self>
    where
        A: Algebra<K>,
    {
        let g = curve.genus();
        if xs.len() != g || ys.len() != g {
            return Err(Error::Input(format!("a divisor needs exactly {g} points")));
        }
        for j in 0..g {
            let (n, _) = curve.eval_in(ring, &xs[j]);
            let defect = ring.sub(&ring.square(&ys[j]), &n);
            if !ring.is_negligible(&defect, ring.magnitude(&n).max(1.0)) {
                return Err(Error::Input(format!("point {} is not on the curve", j + 1)));
            }
            for i in 0..j {
                if ring.try_inv(&ring.sub(&xs[i], &xs[j])).is_err() {
                    return Err(Error::Degenerate(format!(
                        "points {} and {} share an x-coordinate",
                        i + 1,
                        j + 1
                    )));
                }
            }
            if let Some(a) = curve.branch_point() {
                if ring.try_inv(&ring.sub(&xs[j], &ring.embed(a))).is_err() {
                    return Err(Error::Degenerate(format!("point {} lies over the branch point", j + 1)));
                }
            }
        }
        Ok(SymDivisor { xs, ys, signs })
    }
}

/// Divisor with rational `x_j` and `y_j = ±√N(x_j)` adjoined in an étale algebra.
pub fn etale_divisor(
    curve: &Curve<GaussianField>,
    xs: &[GaussianRational],
    signs: &[i8],
) -> Result<(EtaleRing, SymDivisor<EtaleRing>)> {
    let values: Vec<GaussianRational> = xs.iter().map(|x| curve.eval(x).0).collect();
    if let Some(j) = values.iter().position(GaussianRational::is_zero) {
        return Err(Error::Degenerate(format!("point {} is a branch point (y = 0)", j + 1)));
    }
    let ring = EtaleRing::new(values)?;
    let ys = signs
        .iter()
        .enumerate()
        .map(|(j, &s)| ring.mul_i64(&ring.generator(j), s as i64))
        .collect();
    let xs_e = xs.iter().map(|x| ring.from_base(x)).collect();
    let d = SymDivisor::new(curve, &ring, xs_e, ys, signs.to_vec())?;
    Ok((ring, d))
}

/// Divisor with explicitly known `y_j` in the curve's field.
pub fn field_divisor<K: Field + Algebra<K>>(curve: &Curve<K>, points: &[(K::Elem, K::Elem)]) -> Result<SymDivisor<K>> {
    let xs = points.iter().map(|p| p.0.clone()).collect();
    let ys = points.iter().map(|p| p.1.clone()).collect();
    SymDivisor::new(curve, curve.field(), xs, ys, vec![0; points.len()])
}

/// Divisor whose `y_j` are principal square roots times the given signs.
pub fn sqrt_divisor<K: Field + Algebra<K>>(curve: &Curve<K>, xs: &[K::Elem], signs: &[i8]) -> Result<SymDivisor<K>> {
    let f = curve.field();
    let mut points = Vec::new();
    for (x, &s) in xs.iter().zip(signs) {
        let (n, _) = curve.eval(x);
        let y = f
            .sqrt(&n)
            .ok_or_else(|| Error::NotRepresentable(format!("√N(x) at x = {}", f.render(x))))?;
        points.push((x.clone(), f.mul_i64(&y, s as i64)));
    }
    let mut d = field_divisor(curve, &points)?;
    d.signs = signs.to_vec();
    Ok(d)
}

/// JSON curve description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub model: Model,
    pub genus: usize,
    /// `(λ₂, …, λ_{4g+2})` or `(ν₀, …, ν_{4g+4})`.
    pub coeffs: Vec<GaussianRational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_point: Option<GaussianRational>,
}

impl CurveSpec {
    pub fn build(&self) -> Result<Curve<GaussianField>> {
        let c = match self.model {
            Model::Odd => Curve::odd(GaussianField, self.genus, self.coeffs.clone())?,
            Model::Even => Curve::even(GaussianField, self.genus, self.coeffs.clone())?,
        };
        match &self.branch_point {
            Some(a) => c.with_branch_point(a.clone()),
            None => Ok(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSpec {
    pub x: GaussianRational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<GaussianRational>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisorSpec {
    pub points: Vec<PointSpec>,
}

impl DivisorSpec {
    pub fn xs(&self) -> Vec<GaussianRational> {
        self.points.iter().map(|p| p.x.clone()).collect()
    }

    /// `Some(points)` when every `y` is explicit.
    pub fn explicit_points(&self) -> Option<Vec<(GaussianRational, GaussianRational)>> {
        self.points
            .iter()
            .map(|p| p.y.clone().map(|y| (p.x.clone(), y)))
            .collect()
    }

    pub fn signs(&self) -> Result<Vec<i8>> {
        self.points
            .iter()
            .map(|p| match (p.y_sign, &p.y) {
                (Some(s @ (1 | -1)), _) => Ok(s),
                (Some(s), _) => Err(Error::Input(format!("y_sign must be ±1, got {s}"))),
                (None, Some(_)) => Ok(0),
                (None, None) => Err(Error::Input("each point needs y_sign or y".into())),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn qs(v: &[i64]) -> Vec<GaussianRational> {
        v.iter().map(|&n| q(n)).collect()
    }

    #[test]
    fn validation_verdicts() {
        let ok = Curve::odd(GaussianField, 1, qs(&[0, 0, -1])).unwrap();
        assert!(ok.validate().is_ok());
        let even = Curve::even(GaussianField, 1, qs(&[1, 0, 0, 0, -1])).unwrap();
        assert!(even.validate().is_ok());
        let bad = Curve::odd(GaussianField, 1, qs(&[0, -3, 2])).unwrap();
        assert!(matches!(bad.validate(), Err(Error::MultipleRoot)));
        assert!(matches!(
            Curve::even(GaussianField, 1, qs(&[0, 0, 0, 0, 1])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn horner_values() {
        let even = Curve::even(GaussianField, 1, qs(&[1, 0, 0, 0, -1])).unwrap();
        assert_eq!(even.eval(&q(1)), (q(0), q(4)));
        let odd = Curve::odd(GaussianField, 1, qs(&[0, 0, -1])).unwrap();
        assert_eq!(odd.eval(&q(2)), (q(7), q(12)));
        let quartic = Curve::even(GaussianField, 1, qs(&[1, 0, 0, 0, 16])).unwrap();
        assert_eq!(quartic.eval(&q(0)), (q(16), q(0)));
    }

    #[test]
    fn weight_audits() {
        let odd2 = Curve::odd(GaussianField, 2, qs(&[1, 2, 3, 4, 5])).unwrap();
        let audit = odd2.weight_audit();
        assert!(audit.homogeneous);
        assert!(audit.monomials.contains(&("λ_4·X^3".to_string(), 10)));
        let even1 = Curve::even(GaussianField, 1, qs(&[1, 2, 3, 4, 5])).unwrap();
        assert!(even1.weight_audit().monomials.contains(&("ν_2·x^3".to_string(), 8)));
        let odd3 = Curve::odd(GaussianField, 3, qs(&[0; 7])).unwrap();
        assert_eq!(odd3.weight_audit().monomials[0], ("Y^2".to_string(), 14));
    }

    #[test]
    fn suffix_exponents() {
        assert_eq!(Model::Even.exponent(3, 2), Some(2));
        assert_eq!(Model::Even.exponent(3, 6), Some(0));
        assert_eq!(Model::Even.exponent(3, 8), None);
        assert_eq!(Model::Odd.exponent(3, 1), Some(2));
        assert_eq!(Model::Odd.exponent(3, 5), Some(0));
        assert_eq!(Model::Odd.exponent(3, -1), None);
        for s in Model::Odd.suffixes(4) {
            let e = Model::Odd.exponent(4, s as i64).unwrap();
            assert_eq!(Model::Odd.suffix_of_exponent(4, e), s);
        }
    }

    #[test]
    fn coefficient_conventions() {
        let odd = Curve::odd(GaussianField, 1, qs(&[7, 8, 9])).unwrap();
        assert_eq!(odd.coef(0), q(1));
        assert_eq!(odd.coef(-2), q(0));
        assert_eq!(odd.coef(6), q(9));
        assert_eq!(odd.coef(8), q(0));
    }

    #[test]
    fn shift_preserves_validity() {
        let c = Curve::odd(GaussianField, 2, qs(&[1, -2, 3, 1, -1])).unwrap();
        let s = c.shifted(&q(3)).unwrap();
        assert!(c.validate().is_ok() && s.validate().is_ok());
        let x = q(5);
        assert_eq!(s.eval(&q(2)).0, c.eval(&x).0);
        let bad = Curve::odd(GaussianField, 1, qs(&[0, -3, 2])).unwrap();
        assert!(bad.shifted(&q(-4)).unwrap().validate().is_err());
    }

    #[test]
    fn divisors_check_relation_and_genericity() {
        let c = Curve::even(GaussianField, 2, qs(&[1, 0, 0, 0, 0, 0, 2])).unwrap();
        let (ring, d) = etale_divisor(&c, &qs(&[1, 2]), &[1, -1]).unwrap();
        assert_eq!(ring.square(&d.ys[1]), ring.from_i64(66));
        assert!(matches!(
            etale_divisor(&c, &qs(&[1, 1]), &[1, 1]),
            Err(Error::Degenerate(_))
        ));
        // x^6 + 2 at x = 1 is 3, not 4
        assert!(field_divisor(&c, &[(q(1), q(2)), (q(0), q(0))]).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let text = r#"{"model":"even","genus":1,"coeffs":["1","0","0","0","-1"],"branch_point":"1"}"#;
        let spec: CurveSpec = serde_json::from_str(text).unwrap();
        let c = spec.build().unwrap();
        assert_eq!(c.branch_point(), Some(&q(1)));
        assert_eq!(c.to_spec(), spec);
        let d: DivisorSpec = serde_json::from_str(r#"{"points":[{"x":"2","y_sign":-1}]}"#).unwrap();
        assert_eq!(d.signs().unwrap(), vec![-1]);
        assert!(d.explicit_points().is_none());
    }
}
