//! Dense polynomials in two variables `e1, e2`.

use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::Ring;

/// `Σ c[i][j] e1^i e2^j`, stored as a rectangular `(d1 + 1) × (d2 + 1)` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BivarPoly<E> {
    coeffs: Vec<Vec<E>>,
}

impl<E: Clone> BivarPoly<E> {
    pub fn from_grid(coeffs: Vec<Vec<E>>) -> Self {
        assert!(!coeffs.is_empty(), "empty grid");
        let w = coeffs[0].len();
        assert!(w > 0 && coeffs.iter().all(|r| r.len() == w), "ragged grid");
        BivarPoly { coeffs }
    }

    pub fn deg1(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn deg2(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn coeff(&self, i: usize, j: usize) -> Option<&E> {
        self.coeffs.get(i).and_then(|r| r.get(j))
    }

    pub fn grid(&self) -> &[Vec<E>] {
        &self.coeffs
    }

    pub fn into_grid(self) -> Vec<Vec<E>> {
        self.coeffs
    }

    pub fn transpose(&self) -> Self {
        let (n1, n2) = (self.deg1() + 1, self.deg2() + 1);
        let coeffs = (0..n2)
            .map(|j| (0..n1).map(|i| self.coeffs[i][j].clone()).collect())
            .collect();
        BivarPoly { coeffs }
    }
}

impl<E: Clone + PartialEq> BivarPoly<E> {
    pub fn is_symmetric(&self) -> bool {
        self.deg1() == self.deg2() && *self == self.transpose()
    }
}

pub struct Bivar<'a, R: Ring>(pub &'a R);

impl<'a, R: Ring> Bivar<'a, R> {
    pub fn zero(&self, d1: usize, d2: usize) -> BivarPoly<R::Elem> {
        BivarPoly {
            coeffs: vec![vec![self.0.zero(); d2 + 1]; d1 + 1],
        }
    }

    /// Outer product `p(e1) · q(e2)`.
    pub fn outer(&self, p: &[R::Elem], q: &[R::Elem]) -> BivarPoly<R::Elem> {
        let r = self.0;
        BivarPoly {
            coeffs: p
                .iter()
                .map(|a| q.iter().map(|b| r.mul(a, b)).collect())
                .collect(),
        }
    }

    pub fn in_e1(&self, p: &[R::Elem]) -> BivarPoly<R::Elem> {
        self.outer(p, &[self.0.one()])
    }

    pub fn in_e2(&self, q: &[R::Elem]) -> BivarPoly<R::Elem> {
        self.outer(&[self.0.one()], q)
    }

    fn resized(&self, a: &BivarPoly<R::Elem>, d1: usize, d2: usize) -> BivarPoly<R::Elem> {
        let mut out = self.zero(d1, d2);
        for (i, row) in a.coeffs.iter().enumerate().take(d1 + 1) {
            for (j, c) in row.iter().enumerate().take(d2 + 1) {
                out.coeffs[i][j] = c.clone();
            }
        }
        out
    }

    pub fn add(&self, a: &BivarPoly<R::Elem>, b: &BivarPoly<R::Elem>) -> BivarPoly<R::Elem> {
        let mut out = self.resized(a, a.deg1().max(b.deg1()), a.deg2().max(b.deg2()));
        for (i, row) in b.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                self.0.add_assign(&mut out.coeffs[i][j], c);
            }
        }
        out
    }

    pub fn sub(&self, a: &BivarPoly<R::Elem>, b: &BivarPoly<R::Elem>) -> BivarPoly<R::Elem> {
        let mut out = self.resized(a, a.deg1().max(b.deg1()), a.deg2().max(b.deg2()));
        for (i, row) in b.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                self.0.sub_assign(&mut out.coeffs[i][j], c);
            }
        }
        out
    }

    pub fn scale(&self, a: &BivarPoly<R::Elem>, c: &R::Elem) -> BivarPoly<R::Elem> {
        BivarPoly {
            coeffs: a
                .coeffs
                .iter()
                .map(|row| row.iter().map(|x| self.0.mul(x, c)).collect())
                .collect(),
        }
    }

    pub fn mul(&self, a: &BivarPoly<R::Elem>, b: &BivarPoly<R::Elem>) -> BivarPoly<R::Elem> {
        let r = self.0;
        let mut out = self.zero(a.deg1() + b.deg1(), a.deg2() + b.deg2());
        for (i1, ra) in a.coeffs.iter().enumerate() {
            for (j1, x) in ra.iter().enumerate() {
                if r.is_zero(x) {
                    continue;
                }
                for (i2, rb) in b.coeffs.iter().enumerate() {
                    for (j2, y) in rb.iter().enumerate() {
                        r.mul_acc(&mut out.coeffs[i1 + i2][j1 + j2], x, y);
                    }
                }
            }
        }
        out
    }

    /// Multiplies by a univariate polynomial in `e1`.
    pub fn mul_e1(&self, a: &BivarPoly<R::Elem>, p: &[R::Elem]) -> BivarPoly<R::Elem> {
        let r = self.0;
        let mut out = self.zero(a.deg1() + p.len() - 1, a.deg2());
        for (i, row) in a.coeffs.iter().enumerate() {
            for (k, c) in p.iter().enumerate() {
                if r.is_zero(c) {
                    continue;
                }
                for (j, x) in row.iter().enumerate() {
                    r.mul_acc(&mut out.coeffs[i + k][j], x, c);
                }
            }
        }
        out
    }

    pub fn mul_e2(&self, a: &BivarPoly<R::Elem>, p: &[R::Elem]) -> BivarPoly<R::Elem> {
        self.mul_e1(&a.transpose(), p).transpose()
    }

    /// Multiplies by `(e1 − e2)`.
    pub fn mul_diff(&self, a: &BivarPoly<R::Elem>) -> BivarPoly<R::Elem> {
        let mut out = self.zero(a.deg1() + 1, a.deg2() + 1);
        for (i, row) in a.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                self.0.add_assign(&mut out.coeffs[i + 1][j], c);
                self.0.sub_assign(&mut out.coeffs[i][j + 1], c);
            }
        }
        out
    }

    pub fn eval(&self, a: &BivarPoly<R::Elem>, e1: &R::Elem, e2: &R::Elem) -> R::Elem {
        let rows: Vec<R::Elem> = a.coeffs.iter().map(|row| poly::eval(self.0, row, e2)).collect();
        poly::eval(self.0, &rows, e1)
    }

    /// Substitutes a value for `e1`, leaving a polynomial in `e2`.
    pub fn eval_e1(&self, a: &BivarPoly<R::Elem>, e1: &R::Elem) -> Vec<R::Elem> {
        let r = self.0;
        let mut out = vec![r.zero(); a.deg2() + 1];
        for row in a.coeffs.iter().rev() {
            for (j, c) in row.iter().enumerate() {
                out[j] = r.add(&r.mul(&out[j], e1), c);
            }
        }
        out
    }

    /// `∂/∂e2`.
    pub fn partial_e2(&self, a: &BivarPoly<R::Elem>) -> BivarPoly<R::Elem> {
        if a.deg2() == 0 {
            return self.zero(a.deg1(), 0);
        }
        BivarPoly {
            coeffs: a.coeffs.iter().map(|row| poly::derivative(self.0, row)).collect(),
        }
    }

    /// Restriction to the diagonal `e1 = e2 = e`, as a univariate polynomial.
    pub fn diagonal(&self, a: &BivarPoly<R::Elem>) -> Vec<R::Elem> {
        let mut out = vec![self.0.zero(); a.deg1() + a.deg2() + 1];
        for (i, row) in a.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                self.0.add_assign(&mut out[i + j], c);
            }
        }
        out
    }

    fn check_zero(&self, what: &str, values: &[R::Elem], scale: f64) -> Result<()> {
        for v in values {
            if !self.0.is_negligible(v, scale) {
                return Err(Error::Internal(format!(
                    "nonzero remainder in {what} (magnitude {:e})",
                    self.0.magnitude(v)
                )));
            }
        }
        Ok(())
    }

    /// Exact division by a monic polynomial in `e1`; a nonzero remainder is
    /// an error.
    pub fn div_e1_exact(
        &self,
        a: &BivarPoly<R::Elem>,
        d: &[R::Elem],
        what: &str,
        scale: f64,
    ) -> Result<BivarPoly<R::Elem>> {
        let m = d.len() - 1;
        if a.deg1() < m {
            let all: Vec<R::Elem> = a.coeffs.iter().flatten().cloned().collect();
            self.check_zero(what, &all, scale)?;
            return Ok(self.zero(0, a.deg2()));
        }
        let r = self.0;
        let mut rem = a.coeffs.clone();
        let mut quo = vec![vec![r.zero(); a.deg2() + 1]; a.deg1() - m + 1];
        for k in (m..=a.deg1()).rev() {
            let lead = rem[k].clone();
            for (i, di) in d.iter().enumerate() {
                if r.is_zero(di) {
                    continue;
                }
                for (j, c) in lead.iter().enumerate() {
                    let t = r.mul(c, di);
                    r.sub_assign(&mut rem[k - m + i][j], &t);
                }
            }
            quo[k - m] = lead;
        }
        let leftover: Vec<R::Elem> = rem[..m].iter().flatten().cloned().collect();
        self.check_zero(what, &leftover, scale)?;
        Ok(BivarPoly { coeffs: quo })
    }

    pub fn div_e2_exact(
        &self,
        a: &BivarPoly<R::Elem>,
        d: &[R::Elem],
        what: &str,
        scale: f64,
    ) -> Result<BivarPoly<R::Elem>> {
        Ok(self.div_e1_exact(&a.transpose(), d, what, scale)?.transpose())
    }

    /// Exact division by `(e1 − e2)`.
    pub fn div_diff_exact(&self, a: &BivarPoly<R::Elem>, what: &str, scale: f64) -> Result<BivarPoly<R::Elem>> {
        // a(e1, e2) = (e1 − e2) q(e1, e2): q_{i−1,j} = a_{i,j} + q_{i,j−1} read
        // off from the top e1-degree down, treating each e1-row as a polynomial in e2
        let r = self.0;
        let n = a.deg1();
        if n == 0 {
            let all: Vec<R::Elem> = a.coeffs[0].clone();
            self.check_zero(what, &all, scale)?;
            return Ok(self.zero(0, a.deg2()));
        }
        let w = a.deg2() + n + 1;
        let mut quo = vec![vec![r.zero(); w]; n];
        let mut carry = vec![r.zero(); w];
        for k in (1..=n).rev() {
            // q_{k−1} = a_k + e2 · q_k
            let mut row = vec![r.zero(); w];
            for (j, c) in a.coeffs[k].iter().enumerate() {
                row[j] = c.clone();
            }
            for j in 1..w {
                r.add_assign(&mut row[j], &carry[j - 1]);
            }
            quo[k - 1] = row.clone();
            carry = row;
        }
        // remainder: a_0 + e2 · q_0
        let mut rem = vec![r.zero(); w];
        for (j, c) in a.coeffs[0].iter().enumerate() {
            rem[j] = c.clone();
        }
        for j in 1..w {
            r.add_assign(&mut rem[j], &carry[j - 1]);
        }
        self.check_zero(what, &rem, scale)?;
        let q = BivarPoly { coeffs: quo };
        self.truncate(&q, n - 1, a.deg2().saturating_sub(1), what, scale)
    }

    /// Drops coefficients above the given degrees, checking they vanish.
    pub fn truncate(
        &self,
        a: &BivarPoly<R::Elem>,
        d1: usize,
        d2: usize,
        what: &str,
        scale: f64,
    ) -> Result<BivarPoly<R::Elem>> {
        let mut dropped = Vec::new();
        for (i, row) in a.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if i > d1 || j > d2 {
                    dropped.push(c.clone());
                }
            }
        }
        self.check_zero(&format!("{what} (degree bound)"), &dropped, scale)?;
        Ok(self.resized(a, d1, d2))
    }

    pub fn max_magnitude(&self, a: &BivarPoly<R::Elem>) -> f64 {
        a.coeffs
            .iter()
            .flatten()
            .map(|c| self.0.magnitude(c))
            .fold(0.0, f64::max)
    }

    pub fn map<S: Ring>(&self, a: &BivarPoly<R::Elem>, f: impl Fn(&R::Elem) -> S::Elem) -> BivarPoly<S::Elem> {
        BivarPoly {
            coeffs: a.coeffs.iter().map(|row| row.iter().map(&f).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussianField, GaussianRational};
    use proptest::prelude::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn grid(v: Vec<Vec<i64>>) -> BivarPoly<GaussianRational> {
        BivarPoly::from_grid(v.into_iter().map(|r| r.into_iter().map(q).collect()).collect())
    }

    #[test]
    fn diff_roundtrip() {
        let b = Bivar(&GaussianField);
        let p = grid(vec![vec![1, 2], vec![3, 4]]);
        let d = b.mul_diff(&b.mul_diff(&p));
        let back = b.div_diff_exact(&b.div_diff_exact(&d, "t", 1.0).unwrap(), "t", 1.0).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn nonzero_remainder_reported() {
        let b = Bivar(&GaussianField);
        let p = grid(vec![vec![1, 0], vec![0, 0]]);
        assert!(matches!(b.div_diff_exact(&p, "t", 1.0), Err(Error::Internal(_))));
        assert!(matches!(
            b.div_e1_exact(&p, &[q(-2), q(1)], "t", 1.0),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn diagonal_and_partial() {
        let b = Bivar(&GaussianField);
        // e1 e2 + e2^2
        let p = grid(vec![vec![0, 0, 1], vec![0, 1, 0]]);
        assert_eq!(b.diagonal(&p), vec![q(0), q(0), q(2), q(0)]);
        let d = b.partial_e2(&p);
        assert_eq!(b.eval(&d, &q(3), &q(5)), q(3 + 10));
    }

    fn arb_grid(n: usize, m: usize) -> impl Strategy<Value = BivarPoly<GaussianRational>> {
        proptest::collection::vec(proptest::collection::vec(-9i64..9, m), n).prop_map(grid)
    }

    proptest! {
        #[test]
        fn exact_division_inverts_products(p in arb_grid(3, 2), d in proptest::collection::vec(-4i64..4, 2)) {
            let b = Bivar(&GaussianField);
            let mut d: Vec<GaussianRational> = d.into_iter().map(q).collect();
            d.push(q(1));
            let prod = b.mul_e1(&p, &d);
            prop_assert_eq!(b.div_e1_exact(&prod, &d, "t", 1.0).unwrap(), p.clone());
            let prod2 = b.mul_e2(&p, &d);
            prop_assert_eq!(b.div_e2_exact(&prod2, &d, "t", 1.0).unwrap(), p.clone());
            let x = q(3);
            let y = q(-2);
            prop_assert_eq!(b.eval(&prod, &x, &y), GaussianField.mul(&b.eval(&p, &x, &y), &poly::eval(&GaussianField, &d, &x)));
        }
    }
}
