//! Truncated power series in three formal variables `t1, t2, t3`.

use std::sync::Arc;

use super::{Algebra, Render, Ring, ScalarError};

pub const DEFAULT_JET_ORDER: usize = 4;

/// Exponent triple `(a, b, c)` of `t1^a t2^b t3^c`.
pub type Monomial = [usize; 3];

#[derive(Debug)]
struct Layout {
    order: usize,
    monomials: Vec<Monomial>,
    /// `degree_start[d]` is the index of the first monomial of total degree `d`.
    degree_start: Vec<usize>,
    lookup: Vec<usize>,
    /// For each output index, the `(i, j)` input pairs contributing to it.
    products: Vec<Vec<(usize, usize)>>,
}

const NONE: usize = usize::MAX;

impl Layout {
    fn new(order: usize) -> Self {
        let mut monomials = Vec::new();
        let mut degree_start = Vec::new();
        for d in 0..=order {
            degree_start.push(monomials.len());
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    monomials.push([a, b, d - a - b]);
                }
            }
        }
        degree_start.push(monomials.len());
        let side = order + 1;
        let mut lookup = vec![NONE; side * side * side];
        for (i, m) in monomials.iter().enumerate() {
            lookup[(m[0] * side + m[1]) * side + m[2]] = i;
        }
        let mut layout = Layout {
            order,
            monomials,
            degree_start,
            lookup,
            products: Vec::new(),
        };
        let n = layout.monomials.len();
        let mut products = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                let (p, q) = (layout.monomials[i], layout.monomials[j]);
                let sum = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
                if let Some(k) = layout.index(sum) {
                    products[k].push((i, j));
                }
            }
        }
        layout.products = products;
        layout
    }

    fn index(&self, m: Monomial) -> Option<usize> {
        if m[0] + m[1] + m[2] > self.order {
            return None;
        }
        let side = self.order + 1;
        let i = self.lookup[(m[0] * side + m[1]) * side + m[2]];
        (i != NONE).then_some(i)
    }
}

#[derive(Clone, PartialEq)]
pub struct Jet<E> {
    order: usize,
    coeffs: Vec<E>,
}

impl<E: std::fmt::Debug> std::fmt::Debug for Jet<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Jet(order {}) {:?}", self.order, self.coeffs)
    }
}

impl<E> Jet<E> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn constant(&self) -> &E {
        &self.coeffs[0]
    }
}

/// Jets over `R` truncated above total degree `order`.
#[derive(Clone, Debug)]
pub struct JetRing<R> {
    base: R,
    layout: Arc<Layout>,
}

impl<R: Ring> JetRing<R> {
    pub fn new(base: R, order: usize) -> Self {
        JetRing {
            base,
            layout: Arc::new(Layout::new(order)),
        }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.layout.order
    }

    /// The same base ring at a different truncation order.
    pub fn with_order(&self, order: usize) -> Self {
        if order == self.order() {
            return self.clone();
        }
        JetRing::new(self.base.clone(), order)
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.layout.monomials
    }

    pub fn len(&self) -> usize {
        self.layout.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn jet(&self, coeffs: Vec<R::Elem>) -> Jet<R::Elem> {
        Jet {
            order: self.order(),
            coeffs,
        }
    }

    pub fn constant(&self, c: R::Elem) -> Jet<R::Elem> {
        let mut coeffs = vec![self.base.zero(); self.len()];
        coeffs[0] = c;
        self.jet(coeffs)
    }

    /// `c · t^m`, or zero when `m` lies above the order.
    pub fn monomial(&self, m: Monomial, c: R::Elem) -> Jet<R::Elem> {
        let mut coeffs = vec![self.base.zero(); self.len()];
        if let Some(i) = self.layout.index(m) {
            coeffs[i] = c;
        }
        self.jet(coeffs)
    }

    /// The formal variable `t_{k+1}` (zero-based `k`).
    pub fn variable(&self, k: usize) -> Jet<R::Elem> {
        let mut m = [0; 3];
        m[k] = 1;
        self.monomial(m, self.base.one())
    }

    pub fn coeff<'a>(&self, a: &'a Jet<R::Elem>, m: Monomial) -> Option<&'a R::Elem> {
        self.layout.index(m).map(|i| &a.coeffs[i])
    }

    /// The iterated derivative `∂^m` at `t = 0`: coefficient times `m!`.
    pub fn derivative_value(&self, a: &Jet<R::Elem>, m: Monomial) -> Option<R::Elem> {
        let c = self.coeff(a, m)?;
        let fact: i64 = m.iter().map(|&e| (1..=e as i64).product::<i64>()).product();
        Some(self.base.mul_i64(c, fact))
    }

    pub fn from_coeffs(&self, coeffs: Vec<R::Elem>) -> Result<Jet<R::Elem>, ScalarError> {
        if coeffs.len() != self.len() {
            return Err(ScalarError::ParameterMismatch(format!(
                "expected {} jet coefficients, got {}",
                self.len(),
                coeffs.len()
            )));
        }
        Ok(self.jet(coeffs))
    }

    pub fn check(&self, a: &Jet<R::Elem>) -> Result<(), ScalarError> {
        if a.order != self.order() {
            return Err(ScalarError::ParameterMismatch(format!(
                "jet of order {} used in a ring of order {}",
                a.order,
                self.order()
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, a: &Jet<R::Elem>, b: &Jet<R::Elem>) -> Result<Jet<R::Elem>, ScalarError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn checked_mul(&self, a: &Jet<R::Elem>, b: &Jet<R::Elem>) -> Result<Jet<R::Elem>, ScalarError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Re-expresses a jet of any order in this ring, truncating or padding.
    pub fn convert(&self, a: &Jet<R::Elem>) -> Jet<R::Elem> {
        if a.order == self.order() {
            return a.clone();
        }
        let src = Layout::new(a.order);
        let coeffs = self
            .layout
            .monomials
            .iter()
            .map(|&m| match src.index(m) {
                Some(i) => a.coeffs[i].clone(),
                None => self.base.zero(),
            })
            .collect();
        self.jet(coeffs)
    }

    /// The part of total degree exactly `d`.
    pub fn homogeneous_part(&self, a: &Jet<R::Elem>, d: usize) -> Jet<R::Elem> {
        let (lo, hi) = self.degree_range(d);
        let coeffs = (0..self.len())
            .map(|i| {
                if (lo..hi).contains(&i) {
                    a.coeffs[i].clone()
                } else {
                    self.base.zero()
                }
            })
            .collect();
        self.jet(coeffs)
    }

    fn degree_range(&self, d: usize) -> (usize, usize) {
        let s = &self.layout.degree_start;
        if d > self.order() {
            (self.len(), self.len())
        } else {
            (s[d], s[d + 1])
        }
    }

    /// `t_{k+1} · a`, truncated.
    pub fn mul_variable(&self, a: &Jet<R::Elem>, k: usize) -> Jet<R::Elem> {
        let mut coeffs = vec![self.base.zero(); self.len()];
        for (i, m) in self.layout.monomials.iter().enumerate() {
            let mut shifted = *m;
            shifted[k] += 1;
            if let Some(j) = self.layout.index(shifted) {
                coeffs[j] = a.coeffs[i].clone();
            }
        }
        self.jet(coeffs)
    }

    /// `∂a/∂t_{k+1}`, returned in the ring of order `order − 1`.
    pub fn partial(&self, a: &Jet<R::Elem>, k: usize) -> Jet<R::Elem> {
        assert!(self.order() > 0, "cannot differentiate an order-0 jet");
        let lower = self.with_order(self.order() - 1);
        let coeffs = lower
            .layout
            .monomials
            .iter()
            .map(|m| {
                let mut up = *m;
                up[k] += 1;
                let i = self.layout.index(up).expect("raised monomial within order");
                self.base.mul_i64(&a.coeffs[i], up[k] as i64)
            })
            .collect();
        lower.jet(coeffs)
    }

    pub fn map_coeffs(&self, a: &Jet<R::Elem>, mut f: impl FnMut(Monomial, &R::Elem) -> R::Elem) -> Jet<R::Elem> {
        let coeffs = self
            .layout
            .monomials
            .iter()
            .zip(&a.coeffs)
            .map(|(m, c)| f(*m, c))
            .collect();
        self.jet(coeffs)
    }

    pub fn is_constant(&self, a: &Jet<R::Elem>) -> bool {
        a.coeffs[1..].iter().all(|c| self.base.is_zero(c))
    }

    /// Largest coefficient magnitude (for numeric reporting).
    pub fn max_magnitude(&self, a: &Jet<R::Elem>) -> f64 {
        a.coeffs.iter().map(|c| self.base.magnitude(c)).fold(0.0, f64::max)
    }
}

impl<R: Ring> Ring for JetRing<R> {
    type Elem = Jet<R::Elem>;

    fn zero(&self) -> Jet<R::Elem> {
        self.jet(vec![self.base.zero(); self.len()])
    }
    fn one(&self) -> Jet<R::Elem> {
        self.constant(self.base.one())
    }
    fn from_i64(&self, n: i64) -> Jet<R::Elem> {
        self.constant(self.base.from_i64(n))
    }
    fn add(&self, a: &Jet<R::Elem>, b: &Jet<R::Elem>) -> Jet<R::Elem> {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.base.add(x, y)).collect();
        self.jet(coeffs)
    }
    fn sub(&self, a: &Jet<R::Elem>, b: &Jet<R::Elem>) -> Jet<R::Elem> {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.base.sub(x, y)).collect();
        self.jet(coeffs)
    }
    fn neg(&self, a: &Jet<R::Elem>) -> Jet<R::Elem> {
        self.jet(a.coeffs.iter().map(|x| self.base.neg(x)).collect())
    }
    fn mul(&self, a: &Jet<R::Elem>, b: &Jet<R::Elem>) -> Jet<R::Elem> {
        debug_assert!(self.check(a).is_ok() && self.check(b).is_ok());
        let za: Vec<bool> = a.coeffs.iter().map(|c| self.base.is_zero(c)).collect();
        let zb: Vec<bool> = b.coeffs.iter().map(|c| self.base.is_zero(c)).collect();
        let coeffs = self
            .layout
            .products
            .iter()
            .map(|pairs| {
                let mut acc = self.base.zero();
                for &(i, j) in pairs {
                    if !za[i] && !zb[j] {
                        self.base.mul_acc(&mut acc, &a.coeffs[i], &b.coeffs[j]);
                    }
                }
                acc
            })
            .collect();
        self.jet(coeffs)
    }
    fn is_zero(&self, a: &Jet<R::Elem>) -> bool {
        a.coeffs.iter().all(|c| self.base.is_zero(c))
    }
    fn try_inv(&self, a: &Jet<R::Elem>) -> Result<Jet<R::Elem>, ScalarError> {
        let c0 = self.base.try_inv(&a.coeffs[0]).map_err(|e| {
            ScalarError::Singular(format!("jet constant term not invertible: {e}"))
        })?;
        // 1/(c + m) = c⁻¹ Σ (−m c⁻¹)^k; the series stops since m is nilpotent
        let mut nil = a.clone();
        nil.coeffs[0] = self.base.zero();
        let step = self.map_coeffs(&nil, |_, x| self.base.neg(&self.base.mul(x, &c0)));
        let mut term = self.one();
        let mut acc = self.one();
        for _ in 0..self.order() {
            term = self.mul(&term, &step);
            acc = self.add(&acc, &term);
        }
        Ok(self.map_coeffs(&acc, |_, x| self.base.mul(x, &c0)))
    }
    fn is_exact(&self) -> bool {
        self.base.is_exact()
    }
    fn magnitude(&self, a: &Jet<R::Elem>) -> f64 {
        self.max_magnitude(a)
    }
    fn mul_i64(&self, a: &Jet<R::Elem>, n: i64) -> Jet<R::Elem> {
        self.jet(a.coeffs.iter().map(|x| self.base.mul_i64(x, n)).collect())
    }
}

impl<K: Ring, R: Algebra<K>> Algebra<K> for JetRing<R> {
    fn embed(&self, c: &K::Elem) -> Jet<R::Elem> {
        self.constant(self.base.embed(c))
    }
    fn scale(&self, a: &Jet<R::Elem>, c: &K::Elem) -> Jet<R::Elem> {
        self.jet(a.coeffs.iter().map(|x| self.base.scale(x, c)).collect())
    }
}

impl<R: Render> Render for JetRing<R> {
    fn to_json(&self, a: &Jet<R::Elem>) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .layout
            .monomials
            .iter()
            .zip(&a.coeffs)
            .map(|(m, c)| (format!("{},{},{}", m[0], m[1], m[2]), self.base.to_json(c)))
            .collect();
        serde_json::Value::Object(map)
    }
}
