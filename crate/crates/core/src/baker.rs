//! Baker's bivariate construction of the second logarithmic derivatives on
//! the symmetric product, and the derivation vector fields in `x_j`.
//!
//! On either model, with `R(e)` the divisor polynomial, `Q_i = R/(e − x_i)`
//! and `w_i = y_i / R′(x_i)`,
//!
//! ```text
//! F = f·R(e1)R(e2) + (e1 − e2)²·S² − N(e1)R(e2)² − N(e2)R(e1)²,
//! S = Σ w_i Q_i(e1) Q_i(e2),
//! G = F / ((e1 − e2)² R(e1) R(e2)),
//! ```
//!
//! and the coefficient of `e1^{i−1} e2^{j−1}` in `G` is the matrix entry.
//! The even model uses `R = (e − a)Π(e − x_j)`, the odd model `R = Π(e − X_j)`.

use serde_json::{Map, Value};

use crate::bivar::{Bivar, BivarPoly};
use crate::curve::{Curve, Model, SymDivisor};
use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::{Algebra, Field, Render, Ring};

/// Symmetric `g × g` matrix of `P_{s,t}` (even model) or `℘_{s,t}` (odd
/// model) values, addressed by suffixes.
#[derive(Debug, Clone, PartialEq)]
pub struct PMatrix<E> {
    model: Model,
    genus: usize,
    /// `by_exponent[i][j]` is the coefficient of `e1^i e2^j` in `G`.
    by_exponent: Vec<Vec<E>>,
}

impl<E: Clone> PMatrix<E> {
    pub fn from_exponent_grid(model: Model, genus: usize, by_exponent: Vec<Vec<E>>) -> Self {
        PMatrix {
            model,
            genus,
            by_exponent,
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn by_exponent(&self) -> &[Vec<E>] {
        &self.by_exponent
    }

    /// Entry with suffixes `(s, t)`, or `None` out of range.
    pub fn get(&self, s: i64, t: i64) -> Option<&E> {
        let i = self.model.exponent(self.genus, s)?;
        let j = self.model.exponent(self.genus, t)?;
        Some(&self.by_exponent[i][j])
    }

    /// Entry with suffixes `(s, t)`, zero out of range.
    pub fn at<R: Ring<Elem = E>>(&self, ring: &R, s: i64, t: i64) -> E {
        self.get(s, t).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn map<F>(&self, f: impl Fn(&E) -> F) -> PMatrix<F> {
        PMatrix {
            model: self.model,
            genus: self.genus,
            by_exponent: self
                .by_exponent
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool
    where
        E: PartialEq,
    {
        let n = self.by_exponent.len();
        (0..n).all(|i| (0..i).all(|j| self.by_exponent[i][j] == self.by_exponent[j][i]))
    }

    /// Upper-triangle entries keyed `P_s_t` or `wp_s_t`.
    pub fn to_json<R: Render<Elem = E>>(&self, ring: &R) -> Value {
        let mut out = Map::new();
        let suffixes = self.model.suffixes(self.genus);
        for (a, &s) in suffixes.iter().enumerate() {
            for &t in &suffixes[a..] {
                let v = self.get(s as i64, t as i64).expect("suffix in range");
                out.insert(entry_label(self.model, s, t), ring.to_json(v));
            }
        }
        Value::Object(out)
    }
}

pub fn entry_label(model: Model, s: usize, t: usize) -> String {
    match model {
        Model::Even => format!("P_{s}_{t}"),
        Model::Odd => format!("wp_{s}_{t}"),
    }
}

/// The symmetric pairing polynomial: `f` on the even model, `f̃` on the odd one.
pub fn pair_poly<K: Field>(curve: &Curve<K>) -> BivarPoly<K::Elem> {
    let f = curve.field();
    let top = 2 * curve.degree() as i64;
    let d = curve.genus() + 1;
    let mut grid = vec![vec![f.zero(); d + 1]; d + 1];
    for i in 0..=curve.degree() / 2 {
        let k = i as i64;
        grid[i][i] = f.mul_i64(&curve.coef(top - 4 * k), 2);
        if i < d {
            let side = curve.coef(top - 2 - 4 * k);
            grid[i + 1][i] = side.clone();
            grid[i][i + 1] = side;
        }
    }
    BivarPoly::from_grid(grid)
}

/// `R(e)` for the divisor, lowest degree first.
pub fn divisor_poly<K: Field, A: Algebra<K>>(curve: &Curve<K>, ring: &A, divisor: &SymDivisor<A>) -> Result<Vec<A::Elem>> {
    let mut roots = divisor.xs.clone();
    if curve.model() == Model::Even {
        roots.insert(0, ring.embed(curve.require_branch_point()?));
    }
    Ok(poly::from_roots(ring, &roots))
}

/// Working data shared by `F` and the division to `G`.
struct Parts<E> {
    r: Vec<E>,
    f_big: BivarPoly<E>,
    scale: f64,
}

fn build_parts<K: Field, A: Algebra<K>>(curve: &Curve<K>, ring: &A, divisor: &SymDivisor<A>) -> Result<Parts<A::Elem>> {
    let b = Bivar(ring);
    let r = divisor_poly(curve, ring, divisor)?;
    let mut s = b.zero(0, 0);
    for (i, (x, y)) in divisor.xs.iter().zip(&divisor.ys).enumerate() {
        let (q, rem) = poly::div_linear(ring, &r, x);
        debug_assert!(ring.is_zero(&rem) || !ring.is_exact());
        let dr = poly::eval(ring, &q, x);
        let inv = ring
            .try_inv(&dr)
            .map_err(|_| Error::Degenerate(format!("R′ vanishes at point {}", i + 1)))?;
        let w = ring.mul(y, &inv);
        let term = b.scale(&b.outer(&q, &q), &w);
        s = b.add(&s, &term);
    }
    let f = BivarPoly::from_grid(
        pair_poly(curve)
            .grid()
            .iter()
            .map(|row| row.iter().map(|c| ring.embed(c)).collect())
            .collect(),
    );
    let n: Vec<A::Elem> = curve.poly().iter().map(|c| ring.embed(c)).collect();
    let r2 = poly::mul(ring, &r, &r);
    let first = b.mul_e2(&b.mul_e1(&f, &r), &r);
    let cross = b.mul_diff(&b.mul_diff(&b.mul(&s, &s)));
    let n1 = b.mul_e2(&b.in_e1(&n), &r2);
    let n2 = b.mul_e1(&b.in_e2(&n), &r2);
    let f_big = b.sub(&b.sub(&b.add(&first, &cross), &n1), &n2);
    let scale = b.max_magnitude(&first).max(b.max_magnitude(&cross)).max(1.0);
    Ok(Parts { r, f_big, scale })
}

/// Baker's `F(e1, e2)` for the divisor.
pub fn build_f<K: Field, A: Algebra<K>>(curve: &Curve<K>, ring: &A, divisor: &SymDivisor<A>) -> Result<BivarPoly<A::Elem>> {
    Ok(build_parts(curve, ring, divisor)?.f_big)
}

/// `F / ((e1 − e2)² R(e1) R(e2))`, dividing by `R(e1)`, `R(e2)` and then
/// `(e1 − e2)` twice; every remainder must vanish.
pub fn divide_to_g<A: Ring>(ring: &A, f_big: &BivarPoly<A::Elem>, r: &[A::Elem], genus: usize, scale: f64) -> Result<BivarPoly<A::Elem>> {
    let b = Bivar(ring);
    let step = b.div_e1_exact(f_big, r, "F ÷ R(e1)", scale)?;
    let step = b.div_e2_exact(&step, r, "F ÷ R(e2)", scale)?;
    let step = b.div_diff_exact(&step, "F ÷ (e1 − e2)", scale)?;
    let step = b.div_diff_exact(&step, "F ÷ (e1 − e2)²", scale)?;
    b.truncate(&step, genus - 1, genus - 1, "G", scale)
}

/// `G(e1, e2)` for the divisor.
pub fn build_g<K: Field, A: Algebra<K>>(curve: &Curve<K>, ring: &A, divisor: &SymDivisor<A>) -> Result<BivarPoly<A::Elem>> {
    let parts = build_parts(curve, ring, divisor)?;
    divide_to_g(ring, &parts.f_big, &parts.r, curve.genus(), parts.scale)
}

/// The matrix of `P` (even model) or `℘` (odd model) values at the divisor.
pub fn p_matrix<K: Field, A: Algebra<K>>(curve: &Curve<K>, ring: &A, divisor: &SymDivisor<A>) -> Result<PMatrix<A::Elem>> {
    let g = build_g(curve, ring, divisor)?;
    Ok(PMatrix::from_exponent_grid(curve.model(), curve.genus(), g.into_grid()))
}

/// `(f̂ − f)/(e1 − e2)²` as a coefficient grid of size `(d − 1) × (d − 1)`,
/// where `d − 2` bounds the degree of the quotient in each variable.
pub fn decompose<R: Ring>(ring: &R, f_hat: &BivarPoly<R::Elem>, f: &BivarPoly<R::Elem>) -> Result<BivarPoly<R::Elem>> {
    let b = Bivar(ring);
    let diff = b.sub(f_hat, f);
    let scale = b.max_magnitude(&diff).max(1.0);
    let q = b.div_diff_exact(&diff, "decomposition", scale)?;
    let q = b.div_diff_exact(&q, "decomposition", scale)?;
    let d = diff.deg1().max(diff.deg2()).saturating_sub(2);
    b.truncate(&q, d, d, "decomposition", scale)
}

/// `χ_0, …, χ_g` as coefficient vectors, lowest degree first, with
/// `χ_i(x) = Σ_k (−1)^k h_k x^{i−k}` and `χ_g(x) = Π(x − x_j)`.
pub fn chi_polys<R: Ring>(ring: &R, xs: &[R::Elem]) -> Vec<Vec<R::Elem>> {
    let h = poly::elementary_symmetric(ring, xs);
    (0..=xs.len())
        .map(|i| {
            (0..=i)
                .rev()
                .map(|k| if k % 2 == 0 { h[k].clone() } else { ring.neg(&h[k]) })
                .collect()
        })
        .collect()
}

/// A derivation `∂_{v_k}` (even) or `∂_{u_k}` (odd) on the symmetric product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DerivationField {
    pub model: Model,
    pub suffix: usize,
}

/// A tangent vector: `(dx_j, dy_j)` for each point.
pub type Tangent<E> = Vec<(E, E)>;

impl DerivationField {
    pub fn new(model: Model, genus: usize, suffix: usize) -> Result<Self> {
        if model.exponent(genus, suffix as i64).is_none() {
            return Err(Error::Input(format!("no derivation with suffix {suffix} in genus {genus}")));
        }
        Ok(DerivationField { model, suffix })
    }

    /// Position of this derivation in [`tangent_basis`].
    pub fn basis_index(self) -> usize {
        match self.model {
            Model::Even => self.suffix / 2 - 1,
            Model::Odd => (self.suffix + 1) / 2 - 1,
        }
    }

    /// `(dx_j, dy_j)` at the divisor.
    pub fn tangent<K: Field, A: Algebra<K>>(&self, curve: &Curve<K>, ring: &A, divisor: &SymDivisor<A>) -> Result<Tangent<A::Elem>> {
        let mut basis = tangent_basis(curve, ring, divisor)?;
        Ok(basis.swap_remove(self.basis_index()))
    }
}

/// Tangents of every derivation at the divisor, indexed by
/// [`DerivationField::basis_index`]: entry `i` is `∂_{v_{2i+2}}` on the even
/// model and `∂_{u_{2i+1}}` on the odd one. `dy_j = dx_j · N′(x_j)/(2y_j)` is
/// formed without dividing by `y_j`.
pub fn tangent_basis<K: Field, A: Algebra<K>>(curve: &Curve<K>, ring: &A, divisor: &SymDivisor<A>) -> Result<Vec<Tangent<A::Elem>>> {
    let g = divisor.len();
    let chi = chi_polys(ring, &divisor.xs);
    let dchi = poly::derivative(ring, &chi[g]);
    let factor = match curve.model() {
        Model::Even => 2,
        Model::Odd => -2,
    };
    let mut out = vec![Vec::with_capacity(g); g];
    for (j, (x, y)) in divisor.xs.iter().zip(&divisor.ys).enumerate() {
        let inv = ring
            .try_inv(&poly::eval(ring, &dchi, x))
            .map_err(|_| Error::Degenerate(format!("χ_g′ vanishes at point {}", j + 1)))?;
        let (_, dn) = curve.eval_in(ring, x);
        let y_f = ring.mul_i64(y, factor);
        let dn_f = ring.mul_i64(&dn, factor / 2);
        for (i, column) in out.iter_mut().enumerate() {
            let ratio = ring.mul(&poly::eval(ring, &chi[i], x), &inv);
            column.push((ring.mul(&y_f, &ratio), ring.mul(&ratio, &dn_f)));
        }
    }
    Ok(out)
}

/// All derivations of the model, in the column order of [`duality_matrix`]:
/// `v_{2g}, …, v_2` on the even model and `u_1, …, u_{2g−1}` on the odd one.
pub fn derivation_fields(model: Model, genus: usize) -> Vec<DerivationField> {
    (1..=genus)
        .map(|i| DerivationField {
            model,
            suffix: match model {
                Model::Even => 2 * genus + 2 - 2 * i,
                Model::Odd => 2 * i - 1,
            },
        })
        .collect()
}

/// Pairs the holomorphic integrand rows (`x^{m−1}/(2y)` or `−X^{g−m}/(2Y)`)
/// against the derivation coefficients; the result should be the identity.
pub fn duality_matrix<K: Field, A: Algebra<K>>(curve: &Curve<K>, ring: &A, divisor: &SymDivisor<A>) -> Result<Vec<Vec<A::Elem>>> {
    let g = curve.genus();
    let fields = derivation_fields(curve.model(), g);
    let basis = tangent_basis(curve, ring, divisor)?;
    let columns: Vec<&Tangent<A::Elem>> = fields.iter().map(|d| &basis[d.basis_index()]).collect();
    let half_inv_y: Vec<A::Elem> = divisor
        .ys
        .iter()
        .map(|y| ring.try_inv(&ring.mul_i64(y, 2)).map_err(Error::from))
        .collect::<Result<_>>()?;
    let mut out = vec![vec![ring.zero(); g]; g];
    for m in 1..=g {
        for (i, col) in columns.iter().enumerate() {
            let mut acc = ring.zero();
            for j in 0..g {
                let (power, sign) = match curve.model() {
                    Model::Even => (m - 1, 1),
                    Model::Odd => (g - m, -1),
                };
                let row = ring.mul_i64(&ring.mul(&ring.pow(&divisor.xs[j], power as u32), &half_inv_y[j]), sign);
                ring.mul_acc(&mut acc, &row, &col[j].0);
            }
            out[m - 1][i] = acc;
        }
    }
    Ok(out)
}
