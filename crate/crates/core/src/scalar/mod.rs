//! Scalar rings: exact Gaussian rationals, étale quadratic extensions,
//! 256-bit complex floats and truncated three-variable jets over any of them.
//!
//! Rings are context objects in the style of `ring.add(&a, &b)`: the ring
//! value carries the parameters (étale relations, jet order, precision) and
//! elements are plain data. Every ring used by the curve code is an
//! [`Algebra`] over the base [`Field`] the curve coefficients live in.

use std::fmt::Debug;

mod bigfloat;
mod etale;
mod gaussian;
mod jet;

pub use bigfloat::{BigFloatComplex, ComplexFloatField, DEFAULT_PRECISION, MIN_PRECISION};
pub use etale::{EtaleElem, EtaleRing};
pub use gaussian::{GaussianField, GaussianRational, ParseRationalError};
pub use jet::{Jet, JetRing, Monomial, DEFAULT_JET_ORDER};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("singular element: {0}")]
    Singular(String),
    #[error("ring parameter mismatch: {0}")]
    ParameterMismatch(String),
}

/// A commutative ring with unit, given as a context object.
pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Multiplicative inverse, or a [`ScalarError::Singular`] naming what failed.
    fn try_inv(&self, a: &Self::Elem) -> Result<Self::Elem, ScalarError>;

    /// `true` when equality and zero tests are exact.
    fn is_exact(&self) -> bool;

    /// Rough size of the largest coefficient, for reporting and numeric
    /// zero tests. Exact rings return an `f64` approximation.
    fn magnitude(&self, a: &Self::Elem) -> f64;

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn sub_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.sub(a, b);
    }

    /// `acc += a * b`
    fn mul_acc(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let p = self.mul(a, b);
        self.add_assign(acc, &p);
    }

    fn mul_i64(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.from_i64(n))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ScalarError> {
        Ok(self.mul(a, &self.try_inv(b)?))
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        let mut acc = self.zero();
        for x in items {
            self.add_assign(&mut acc, x);
        }
        acc
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        let mut acc = self.one();
        for x in items {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Zero test that tolerates rounding in numeric rings: exact rings test
    /// for exact zero, numeric rings compare against `scale`.
    fn is_negligible(&self, a: &Self::Elem, scale: f64) -> bool {
        if self.is_exact() {
            self.is_zero(a)
        } else {
            self.magnitude(a) <= scale.max(1.0) * 1e-50
        }
    }
}

/// A field that curve coefficients live in.
pub trait Field: Ring {
    /// Embeds an exact Gaussian rational (JSON input, fixture constants).
    fn from_gaussian(&self, q: &GaussianRational) -> Self::Elem;

    /// Principal square root. Exact fields return `None` when the root is
    /// not representable.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Human-readable rendering used in reports.
    fn render(&self, a: &Self::Elem) -> String;

    fn from_ratio(&self, num: i64, den: i64) -> Self::Elem {
        self.from_gaussian(&GaussianRational::from_ratio(num, den))
    }
}

/// A ring with a structure map from the field `K`.
pub trait Algebra<K: Ring>: Ring {
    fn embed(&self, c: &K::Elem) -> Self::Elem;

    /// `a * c` for a base-field constant `c`.
    fn scale(&self, a: &Self::Elem, c: &K::Elem) -> Self::Elem {
        self.mul(a, &self.embed(c))
    }
}

/// Rings whose elements can be written into JSON reports.
pub trait Render: Ring {
    fn to_json(&self, a: &Self::Elem) -> serde_json::Value;
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Checks associativity, commutativity and distributivity on one triple.
    pub fn check_ring_axioms<R: Ring>(r: &R, a: &R::Elem, b: &R::Elem, c: &R::Elem) {
        assert_eq!(r.mul(&r.mul(a, b), c), r.mul(a, &r.mul(b, c)), "mul assoc");
        assert_eq!(r.add(&r.add(a, b), c), r.add(a, &r.add(b, c)), "add assoc");
        assert_eq!(r.mul(a, b), r.mul(b, a), "mul comm");
        assert_eq!(
            r.mul(a, &r.add(b, c)),
            r.add(&r.mul(a, b), &r.mul(a, c)),
            "distributivity"
        );
        assert!(r.is_zero(&r.sub(a, a)));
        assert_eq!(r.mul(a, &r.one()), *a);
    }
}
