//! The étale algebra `K[Y_1, …, Y_m] / (Y_j² − n_j)` over ℚ(i).
//!
//! Elements are dense vectors indexed by subset bitmasks: entry `S` is the
//! coefficient of `Π_{j∈S} Y_j`.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::{Algebra, GaussianField, GaussianRational, Render, Ring, ScalarError};

#[derive(Debug)]
struct Params {
    relations: Vec<GaussianRational>,
    /// `mask_product[S] = Π_{j∈S} n_j`
    mask_product: Vec<GaussianRational>,
    fingerprint: u64,
}

#[derive(Debug, Clone)]
pub struct EtaleRing {
    params: Arc<Params>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EtaleElem {
    fingerprint: u64,
    coeffs: Vec<GaussianRational>,
}

impl std::fmt::Debug for EtaleElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            for j in 0..usize::BITS {
                if mask >> j & 1 == 1 {
                    write!(f, "·Y{}", j + 1)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl EtaleElem {
    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    /// Coefficient of `Π_{j∈mask} Y_j`.
    pub fn coeff(&self, mask: usize) -> &GaussianRational {
        &self.coeffs[mask]
    }

    /// The base-field value, if the element lies in ℚ(i).
    pub fn as_base(&self) -> Option<&GaussianRational> {
        if self.coeffs[1..].iter().all(GaussianRational::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }
}

impl PartialEq for EtaleRing {
    fn eq(&self, other: &Self) -> bool {
        self.params.relations == other.params.relations
    }
}

impl EtaleRing {
    /// Adjoins square roots of the given nonzero values.
    pub fn new(relations: Vec<GaussianRational>) -> Result<Self, ScalarError> {
        if let Some(j) = relations.iter().position(GaussianRational::is_zero) {
            return Err(ScalarError::Singular(format!(
                "relation Y_{}^2 = 0 is not étale",
                j + 1
            )));
        }
        let m = relations.len();
        assert!(m < 16, "étale algebra of rank 2^{m} is too large");
        let mut mask_product = vec![GaussianRational::one(); 1 << m];
        for mask in 1..1usize << m {
            let low = mask.trailing_zeros() as usize;
            mask_product[mask] = mask_product[mask & (mask - 1)].mul(&relations[low]);
        }
        let mut h = DefaultHasher::new();
        relations.hash(&mut h);
        Ok(EtaleRing {
            params: Arc::new(Params {
                relations,
                mask_product,
                fingerprint: h.finish(),
            }),
        })
    }

    pub fn rank(&self) -> usize {
        self.params.relations.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.rank()
    }

    pub fn relations(&self) -> &[GaussianRational] {
        &self.params.relations
    }

    fn elem(&self, coeffs: Vec<GaussianRational>) -> EtaleElem {
        EtaleElem {
            fingerprint: self.params.fingerprint,
            coeffs,
        }
    }

    pub fn from_base(&self, c: &GaussianRational) -> EtaleElem {
        let mut coeffs = vec![GaussianRational::zero(); self.dim()];
        coeffs[0] = c.clone();
        self.elem(coeffs)
    }

    /// The generator `Y_j` (zero-based `j`).
    pub fn generator(&self, j: usize) -> EtaleElem {
        self.monomial(1 << j, GaussianRational::one())
    }

    pub fn monomial(&self, mask: usize, c: GaussianRational) -> EtaleElem {
        let mut coeffs = vec![GaussianRational::zero(); self.dim()];
        coeffs[mask] = c;
        self.elem(coeffs)
    }

    pub fn from_coeffs(&self, coeffs: Vec<GaussianRational>) -> Result<EtaleElem, ScalarError> {
        if coeffs.len() != self.dim() {
            return Err(ScalarError::ParameterMismatch(format!(
                "expected {} étale coefficients, got {}",
                self.dim(),
                coeffs.len()
            )));
        }
        Ok(self.elem(coeffs))
    }

    pub fn check(&self, a: &EtaleElem) -> Result<(), ScalarError> {
        if a.fingerprint != self.params.fingerprint || a.coeffs.len() != self.dim() {
            return Err(ScalarError::ParameterMismatch(
                "étale element belongs to a different relation list".into(),
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, a: &EtaleElem, b: &EtaleElem) -> Result<EtaleElem, ScalarError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn checked_mul(&self, a: &EtaleElem, b: &EtaleElem) -> Result<EtaleElem, ScalarError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// The involution `Y_j ↦ −Y_j`.
    pub fn flip(&self, a: &EtaleElem, j: usize) -> EtaleElem {
        let coeffs = a
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| if mask >> j & 1 == 1 { c.neg() } else { c.clone() })
            .collect();
        self.elem(coeffs)
    }

    /// Product of `a` over all `2^m` sign patterns, as a base-field value.
    pub fn norm(&self, a: &EtaleElem) -> GaussianRational {
        let mut cur = a.clone();
        for j in 0..self.rank() {
            cur = self.mul(&cur, &self.flip(&cur, j));
        }
        cur.coeffs[0].clone()
    }
}

impl Ring for EtaleRing {
    type Elem = EtaleElem;

    fn zero(&self) -> EtaleElem {
        self.from_base(&GaussianRational::zero())
    }
    fn one(&self) -> EtaleElem {
        self.from_base(&GaussianRational::one())
    }
    fn from_i64(&self, n: i64) -> EtaleElem {
        self.from_base(&GaussianRational::from_int(n))
    }
    fn add(&self, a: &EtaleElem, b: &EtaleElem) -> EtaleElem {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.add(y)).collect();
        self.elem(coeffs)
    }
    fn sub(&self, a: &EtaleElem, b: &EtaleElem) -> EtaleElem {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.sub(y)).collect();
        self.elem(coeffs)
    }
    fn neg(&self, a: &EtaleElem) -> EtaleElem {
        self.elem(a.coeffs.iter().map(GaussianRational::neg).collect())
    }
    fn mul(&self, a: &EtaleElem, b: &EtaleElem) -> EtaleElem {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        let table = &self.params.mask_product;
        let mut out = vec![GaussianRational::zero(); self.dim()];
        for (s, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (t, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let mut p = x.mul(y);
                let common = s & t;
                if common != 0 {
                    p = p.mul(&table[common]);
                }
                out[s ^ t] = out[s ^ t].add(&p);
            }
        }
        self.elem(out)
    }
    fn is_zero(&self, a: &EtaleElem) -> bool {
        a.coeffs.iter().all(GaussianRational::is_zero)
    }
    fn try_inv(&self, a: &EtaleElem) -> Result<EtaleElem, ScalarError> {
        // a · Π σ(a) over the flips lands in the base field
        let mut num = self.one();
        let mut cur = a.clone();
        for j in 0..self.rank() {
            let conj = self.flip(&cur, j);
            num = self.mul(&num, &conj);
            cur = self.mul(&cur, &conj);
            if self.is_zero(&cur) {
                return Err(ScalarError::Singular(format!(
                    "étale element is a zero divisor (norm vanishes at Y_{})",
                    j + 1
                )));
            }
        }
        let base = cur.as_base().expect("norm lies in the base field");
        let inv = base
            .inv()
            .ok_or_else(|| ScalarError::Singular("étale norm is zero".into()))?;
        Ok(self.scale(&num, &inv))
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn magnitude(&self, a: &EtaleElem) -> f64 {
        a.coeffs.iter().map(GaussianRational::abs_f64).fold(0.0, f64::max)
    }
    fn mul_i64(&self, a: &EtaleElem, n: i64) -> EtaleElem {
        self.elem(a.coeffs.iter().map(|c| c.mul_int(n)).collect())
    }
}

impl Algebra<GaussianField> for EtaleRing {
    fn embed(&self, c: &GaussianRational) -> EtaleElem {
        self.from_base(c)
    }
    fn scale(&self, a: &EtaleElem, c: &GaussianRational) -> EtaleElem {
        self.elem(a.coeffs.iter().map(|x| x.mul(c)).collect())
    }
}

impl Render for EtaleRing {
    fn to_json(&self, a: &EtaleElem) -> serde_json::Value {
        let terms: serde_json::Map<String, serde_json::Value> = a
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mask, c)| (mask.to_string(), serde_json::to_value(c).expect("serializes")))
            .collect();
        serde_json::json!({ "etale_rank": self.rank(), "terms": terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::testing::check_ring_axioms;
    use proptest::prelude::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn generator_squares_to_relation() {
        let r = EtaleRing::new(vec![q(5)]).unwrap();
        let y = r.generator(0);
        assert_eq!(r.mul(&y, &y), r.from_i64(5));
    }

    #[test]
    fn generator_inverse() {
        let r = EtaleRing::new(vec![q(5)]).unwrap();
        let y = r.generator(0);
        let inv = r.try_inv(&y).unwrap();
        assert_eq!(inv, r.scale(&y, &GaussianRational::from_ratio(1, 5)));
    }

    #[test]
    fn zero_divisor_is_singular() {
        // (2 + Y)(2 - Y) = 0 when Y^2 = 4
        let r = EtaleRing::new(vec![q(4)]).unwrap();
        let a = r.add(&r.from_i64(2), &r.generator(0));
        assert!(matches!(r.try_inv(&a), Err(ScalarError::Singular(_))));
    }

    #[test]
    fn zero_relation_rejected() {
        assert!(EtaleRing::new(vec![q(3), q(0)]).is_err());
    }

    #[test]
    fn mismatched_rings_detected() {
        let r1 = EtaleRing::new(vec![q(2), q(3)]).unwrap();
        let r2 = EtaleRing::new(vec![q(2), q(5)]).unwrap();
        let a = r1.generator(1);
        let b = r2.generator(1);
        assert!(matches!(
            r1.checked_mul(&a, &b),
            Err(ScalarError::ParameterMismatch(_))
        ));
        assert!(r1.checked_add(&a, &a).is_ok());
    }

    #[test]
    fn json_keys_are_bitmasks() {
        let r = EtaleRing::new(vec![q(2), q(3)]).unwrap();
        let a = r.add(&r.from_i64(1), &r.monomial(3, q(7)));
        let v = r.to_json(&a);
        assert_eq!(v["terms"]["3"], "7");
        assert!(v["terms"].get("1").is_none());
    }

    fn ring3() -> EtaleRing {
        EtaleRing::new(vec![q(2), q(-3), GaussianRational::from_ratio(5, 7)]).unwrap()
    }

    fn arb_elem() -> impl Strategy<Value = EtaleElem> {
        proptest::collection::vec((-9i64..9, 1i64..5), 8).prop_map(|v| {
            let r = ring3();
            r.from_coeffs(v.into_iter().map(|(n, d)| GaussianRational::from_ratio(n, d)).collect())
                .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn ring_axioms(a in arb_elem(), b in arb_elem(), c in arb_elem()) {
            check_ring_axioms(&ring3(), &a, &b, &c);
        }

        #[test]
        fn flips_are_homomorphisms(a in arb_elem(), b in arb_elem(), j in 0usize..3) {
            let r = ring3();
            prop_assert_eq!(r.flip(&r.mul(&a, &b), j), r.mul(&r.flip(&a, j), &r.flip(&b, j)));
            prop_assert_eq!(r.flip(&r.add(&a, &b), j), r.add(&r.flip(&a, j), &r.flip(&b, j)));
        }

        #[test]
        fn sign_pattern_product_is_base(a in arb_elem()) {
            let r = ring3();
            let mut prod = r.one();
            for pattern in 0..8usize {
                let mut x = a.clone();
                for j in 0..3 {
                    if pattern >> j & 1 == 1 {
                        x = r.flip(&x, j);
                    }
                }
                prod = r.mul(&prod, &x);
            }
            prop_assert!(prod.as_base().is_some());
            prop_assert_eq!(prod.as_base().unwrap(), &r.norm(&a));
        }

        #[test]
        fn inverse_multiplies_to_one(a in arb_elem()) {
            let r = ring3();
            if let Ok(ai) = r.try_inv(&a) {
                prop_assert_eq!(r.mul(&a, &ai), r.one());
            } else {
                prop_assert!(r.norm(&a).is_zero());
            }
        }
    }
}
