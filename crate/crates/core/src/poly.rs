//! Dense univariate polynomials as coefficient vectors, lowest degree first.

use crate::error::{Error, Result};
use crate::scalar::Ring;

pub fn eval<R: Ring>(r: &R, p: &[R::Elem], x: &R::Elem) -> R::Elem {
    let mut acc = r.zero();
    for c in p.iter().rev() {
        acc = r.add(&r.mul(&acc, x), c);
    }
    acc
}

pub fn derivative<R: Ring>(r: &R, p: &[R::Elem]) -> Vec<R::Elem> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| r.mul_i64(c, k as i64))
        .collect()
}

pub fn add<R: Ring>(r: &R, p: &[R::Elem], q: &[R::Elem]) -> Vec<R::Elem> {
    let n = p.len().max(q.len());
    let zero = r.zero();
    (0..n)
        .map(|k| r.add(p.get(k).unwrap_or(&zero), q.get(k).unwrap_or(&zero)))
        .collect()
}

pub fn sub<R: Ring>(r: &R, p: &[R::Elem], q: &[R::Elem]) -> Vec<R::Elem> {
    let n = p.len().max(q.len());
    let zero = r.zero();
    (0..n)
        .map(|k| r.sub(p.get(k).unwrap_or(&zero), q.get(k).unwrap_or(&zero)))
        .collect()
}

pub fn mul<R: Ring>(r: &R, p: &[R::Elem], q: &[R::Elem]) -> Vec<R::Elem> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![r.zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if r.is_zero(a) {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            r.mul_acc(&mut out[i + j], a, b);
        }
    }
    out
}

/// `p^k`; `p^0 = 1`.
pub fn pow<R: Ring>(ring: &R, p: &[R::Elem], k: usize) -> Vec<R::Elem> {
    (0..k).fold(vec![ring.one()], |acc, _| mul(ring, &acc, p))
}

pub fn scale<R: Ring>(r: &R, p: &[R::Elem], c: &R::Elem) -> Vec<R::Elem> {
    p.iter().map(|a| r.mul(a, c)).collect()
}

/// `Π (x − root)`, monic.
pub fn from_roots<R: Ring>(r: &R, roots: &[R::Elem]) -> Vec<R::Elem> {
    let mut p = vec![r.one()];
    for root in roots {
        p = mul(r, &p, &[r.neg(root), r.one()]);
    }
    p
}

/// Synthetic division by `x − root`: returns `(quotient, remainder)`.
pub fn div_linear<R: Ring>(r: &R, p: &[R::Elem], root: &R::Elem) -> (Vec<R::Elem>, R::Elem) {
    if p.is_empty() {
        return (Vec::new(), r.zero());
    }
    let n = p.len() - 1;
    let mut q = vec![r.zero(); n];
    let mut carry = r.zero();
    for k in (0..=n).rev() {
        let v = r.add(&p[k], &r.mul(&carry, root));
        if k == 0 {
            return (q, v);
        }
        q[k - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

/// Division by a monic polynomial: returns `(quotient, remainder)`.
pub fn div_monic<R: Ring>(r: &R, p: &[R::Elem], d: &[R::Elem]) -> (Vec<R::Elem>, Vec<R::Elem>) {
    let m = d.len() - 1;
    if p.len() <= m {
        return (Vec::new(), p.to_vec());
    }
    let mut rem = p.to_vec();
    let mut q = vec![r.zero(); p.len() - m];
    for k in (m..p.len()).rev() {
        let c = rem[k].clone();
        if r.is_zero(&c) {
            continue;
        }
        q[k - m] = c.clone();
        for (i, di) in d.iter().enumerate() {
            let t = r.mul(&c, di);
            r.sub_assign(&mut rem[k - m + i], &t);
        }
    }
    rem.truncate(m);
    (q, rem)
}

/// Elementary symmetric polynomials `h_0 = 1, h_1, …, h_n` of the values.
pub fn elementary_symmetric<R: Ring>(r: &R, values: &[R::Elem]) -> Vec<R::Elem> {
    // Π (x + v) has coefficient h_k at x^{n−k}
    let neg: Vec<R::Elem> = values.iter().map(|v| r.neg(v)).collect();
    let mut p = from_roots(r, &neg);
    p.reverse();
    p
}

/// Determinant by Gaussian elimination with nonzero pivots.
pub fn determinant<R: Ring>(r: &R, mut m: Vec<Vec<R::Elem>>) -> Result<R::Elem> {
    let n = m.len();
    let mut det = r.one();
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| {
            r.magnitude(&m[a][col])
                .partial_cmp(&r.magnitude(&m[b][col]))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let pivot = match pivot {
            Some(p) if !r.is_zero(&m[p][col]) => p,
            _ => return Ok(r.zero()),
        };
        if pivot != col {
            m.swap(pivot, col);
            det = r.neg(&det);
        }
        let inv = r.try_inv(&m[col][col])?;
        det = r.mul(&det, &m[col][col]);
        for row in col + 1..n {
            if r.is_zero(&m[row][col]) {
                continue;
            }
            let factor = r.mul(&m[row][col], &inv);
            for k in col..n {
                let t = r.mul(&factor, &m[col][k]);
                r.sub_assign(&mut m[row][k], &t);
            }
        }
    }
    Ok(det)
}

/// Resultant of `p` and `q` as the Sylvester determinant.
pub fn resultant<R: Ring>(r: &R, p: &[R::Elem], q: &[R::Elem]) -> Result<R::Elem> {
    let dp = p.len().checked_sub(1).ok_or_else(|| Error::Input("empty polynomial".into()))?;
    let dq = q.len().checked_sub(1).ok_or_else(|| Error::Input("empty polynomial".into()))?;
    let n = dp + dq;
    if n == 0 {
        return Ok(r.one());
    }
    let mut rows = Vec::with_capacity(n);
    for shift in 0..dq {
        let mut row = vec![r.zero(); n];
        for (k, c) in p.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..dp {
        let mut row = vec![r.zero(); n];
        for (k, c) in q.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    determinant(r, rows)
}

/// Solves `m · x = b` by Gauss-Jordan elimination.
pub fn solve<R: Ring>(r: &R, mut m: Vec<Vec<R::Elem>>, mut b: Vec<R::Elem>) -> Result<Vec<R::Elem>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&p| !r.is_zero(&m[p][col]))
            .ok_or_else(|| Error::Degenerate("singular linear system".into()))?;
        m.swap(pivot, col);
        b.swap(pivot, col);
        let inv = r.try_inv(&m[col][col])?;
        for k in col..n {
            m[col][k] = r.mul(&m[col][k], &inv);
        }
        b[col] = r.mul(&b[col], &inv);
        for row in 0..n {
            if row == col || r.is_zero(&m[row][col]) {
                continue;
            }
            let factor = m[row][col].clone();
            for k in col..n {
                let t = r.mul(&factor, &m[col][k]);
                r.sub_assign(&mut m[row][k], &t);
            }
            let t = r.mul(&factor, &b[col]);
            r.sub_assign(&mut b[row], &t);
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussianField, GaussianRational};
    use proptest::prelude::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn qs(v: &[i64]) -> Vec<GaussianRational> {
        v.iter().map(|&n| q(n)).collect()
    }

    #[test]
    fn horner_and_derivative() {
        let r = GaussianField;
        // X^3 - 1 at 2
        let p = qs(&[-1, 0, 0, 1]);
        assert_eq!(eval(&r, &p, &q(2)), q(7));
        assert_eq!(eval(&r, &derivative(&r, &p), &q(2)), q(12));
    }

    #[test]
    fn resultant_detects_double_root() {
        let r = GaussianField;
        // (X-1)^2 (X+2) = X^3 - 3X + 2
        let p = qs(&[2, -3, 0, 1]);
        assert!(resultant(&r, &p, &derivative(&r, &p)).unwrap().is_zero());
        let p = qs(&[-1, 0, 0, 1]);
        // disc(X^3 - 1) = -27, res(p, p') = 27 for monic cubic
        assert_eq!(resultant(&r, &p, &derivative(&r, &p)).unwrap(), q(27));
    }

    #[test]
    fn elementary_symmetric_values() {
        let r = GaussianField;
        assert_eq!(elementary_symmetric(&r, &qs(&[2, 3])), qs(&[1, 5, 6]));
    }

    #[test]
    fn solve_small_system() {
        let r = GaussianField;
        let m = vec![qs(&[0, 1]), qs(&[2, 1])];
        assert_eq!(solve(&r, m, qs(&[3, 5])).unwrap(), qs(&[1, 3]));
    }

    proptest! {
        #[test]
        fn division_reconstructs(p in proptest::collection::vec(-20i64..20, 1..8),
                                 d in proptest::collection::vec(-5i64..5, 0..4),
                                 root in -6i64..6) {
            let r = GaussianField;
            let p = qs(&p);
            let mut d = qs(&d);
            d.push(q(1));
            let (quo, rem) = div_monic(&r, &p, &d);
            let back = add(&r, &mul(&r, &quo, &d), &rem);
            let zero = q(0);
            for k in 0..back.len().max(p.len()) {
                prop_assert_eq!(back.get(k).unwrap_or(&zero), p.get(k).unwrap_or(&zero));
            }
            let (ql, rl) = div_linear(&r, &p, &q(root));
            prop_assert_eq!(rl, eval(&r, &p, &q(root)));
            let back = add(&r, &mul(&r, &ql, &[q(-root), q(1)]), &[eval(&r, &p, &q(root))]);
            for k in 0..p.len() {
                prop_assert_eq!(&back[k], &p[k]);
            }
        }
    }
}
