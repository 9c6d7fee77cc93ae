//! The birational map between the even model `V: y² = N(x)` with branch
//! point `a` and the monic odd model `C̃: Y² = M̃(X)`, and the relations it
//! induces between `P` on `V` and `℘` on `C̃`.
//!
//! `ζ(x, y) = (s/(x − a), t·y/(x − a)^{g+1})` with `s^{2g+1} = t²N′(a)`, and
//! `M̃(X) = t²X^{2g+2}N(a + s/X)/s^{2g+2}`.
//!
//! Both sides of every relation are evaluated at the same point of the
//! symmetric product: `P` at the divisor on `V`, `℘` at its image under `ζ`.

use serde_json::{json, Value};

use crate::baker::{decompose, p_matrix, pair_poly, PMatrix};
use crate::bivar::{Bivar, BivarPoly};
use crate::curve::{Curve, Model, SymDivisor};
use crate::error::{Error, Result};
use crate::identities::{divisor_json, IdentityReport};
use crate::poly;
use crate::scalar::{Algebra, Field, Render};

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

#[derive(Debug, Clone)]
pub struct Bridge<K: Field> {
    source: Curve<K>,
    s: K::Elem,
    t: K::Elem,
    target: Curve<K>,
}

impl<K: Field> Bridge<K> {
    /// Checks `s t ≠ 0` and `s^{2g+1} = t² N′(a)` and builds `C̃`.
    pub fn new(source: Curve<K>, s: K::Elem, t: K::Elem) -> Result<Self> {
        if source.model() != Model::Even {
            return Err(Error::Precondition("the bridge starts from the even model".into()));
        }
        let f = source.field().clone();
        let a = source.require_branch_point()?.clone();
        let g = source.genus();
        if f.is_zero(&s) || f.is_zero(&t) {
            return Err(Error::Precondition("s and t must be nonzero".into()));
        }
        let (_, dn) = source.eval(&a);
        let lhs = f.pow(&s, 2 * g as u32 + 1);
        let rhs = f.mul(&f.square(&t), &dn);
        if !f.is_negligible(&f.sub(&lhs, &rhs), f.magnitude(&lhs).max(1.0)) {
            return Err(Error::Precondition("s^(2g+1) must equal t^2 N'(a)".into()));
        }
        // coefficient of X^{2g+2−m} is t² s^{m−2g−2} Σ_k n_k C(k, m) a^{k−m}
        let n = source.poly();
        let t2 = f.square(&t);
        let s_inv = f.try_inv(&s)?;
        let mut lambdas = Vec::with_capacity(2 * g + 1);
        for m in 2..=2 * g + 2 {
            let mut acc = f.zero();
            for (k, nk) in n.iter().enumerate().skip(m) {
                let term = f.mul(nk, &f.pow(&a, (k - m) as u32));
                acc = f.add(&acc, &f.mul_i64(&term, binomial(k, m)));
            }
            let scale = f.mul(&t2, &f.pow(&s_inv, (2 * g + 2 - m) as u32));
            lambdas.push(f.mul(&acc, &scale));
        }
        let target = Curve::odd(f, g, lambdas)?;
        Ok(Bridge { source, s, t, target })
    }

    /// `s = N′(a)w²`, `t = N′(a)^g w^{2g+1}`.
    pub fn canonical(source: Curve<K>, w: &K::Elem) -> Result<Self> {
        let f = source.field().clone();
        let a = source.require_branch_point()?.clone();
        let g = source.genus() as u32;
        let (_, dn) = source.eval(&a);
        let s = f.mul(&dn, &f.square(w));
        let t = f.mul(&f.pow(&dn, g), &f.pow(w, 2 * g + 1));
        Bridge::new(source, s, t)
    }

    pub fn source(&self) -> &Curve<K> {
        &self.source
    }

    pub fn target(&self) -> &Curve<K> {
        &self.target
    }

    pub fn s(&self) -> &K::Elem {
        &self.s
    }

    pub fn t(&self) -> &K::Elem {
        &self.t
    }

    pub fn a(&self) -> &K::Elem {
        self.source.branch_point().expect("checked in new")
    }

    fn field(&self) -> &K {
        self.source.field()
    }

    fn genus(&self) -> usize {
        self.source.genus()
    }

    /// `λ̃_i` of `C̃`.
    pub fn lambda(&self, i: i64) -> K::Elem {
        self.target.coef(i)
    }

    /// `D_{ij} = (s^{g+1−i}/t) C(i−1, j−1) (−a)^{i−j}`, zero above the diagonal.
    pub fn d_matrix(&self) -> Vec<Vec<K::Elem>> {
        let f = self.field();
        let g = self.genus();
        let t_inv = f.try_inv(&self.t).expect("t nonzero");
        let minus_a = f.neg(self.a());
        (1..=g)
            .map(|i| {
                (1..=g)
                    .map(|j| {
                        if j > i {
                            return f.zero();
                        }
                        let lead = f.mul(&f.pow(&self.s, (g + 1 - i) as u32), &t_inv);
                        let c = f.mul_i64(&f.pow(&minus_a, (i - j) as u32), binomial(i - 1, j - 1));
                        f.mul(&lead, &c)
                    })
                    .collect()
            })
            .collect()
    }

    /// `ζ*(ω_i) − Σ_j D_{ij} μ_j` at `x`, as coefficients of `dx/(2y)`, with
    /// `ω_i = −X^{g−i} dX/(2Y)` and `μ_j = x^{j−1} dx/(2y)`.
    pub fn pullback_defect(&self, x: &K::Elem) -> Result<Vec<K::Elem>> {
        let f = self.field();
        let g = self.genus();
        let h = f.sub(x, self.a());
        let h_inv = f.try_inv(&h).map_err(|_| Error::Precondition("x = a is a pole of ζ".into()))?;
        let big_x = f.mul(&self.s, &h_inv);
        let dx_dx = f.neg(&f.mul(&self.s, &f.square(&h_inv)));
        // y / Y
        let ratio = f.mul(&f.pow(&h, g as u32 + 1), &f.try_inv(&self.t)?);
        let d = self.d_matrix();
        Ok((1..=g)
            .map(|i| {
                let pulled = f.neg(&f.product(&[f.pow(&big_x, (g - i) as u32), dx_dx.clone(), ratio.clone()]));
                let expected = f.sum(&(1..=g).map(|j| f.mul(&d[i - 1][j - 1], &f.pow(x, j as u32 - 1))).collect::<Vec<_>>());
                f.sub(&pulled, &expected)
            })
            .collect())
    }

    /// `ζ(x, y)` in an algebra over the base field.
    pub fn zeta<A: Algebra<K>>(&self, ring: &A, x: &A::Elem, y: &A::Elem) -> Result<(A::Elem, A::Elem)> {
        let h = ring.sub(x, &ring.embed(self.a()));
        let h_inv = ring
            .try_inv(&h)
            .map_err(|_| Error::Precondition("x = a is a pole of ζ".into()))?;
        let big_x = ring.mul(&ring.embed(&self.s), &h_inv);
        let big_y = ring.product(&[ring.embed(&self.t), y.clone(), ring.pow(&h_inv, self.genus() as u32 + 1)]);
        Ok((big_x, big_y))
    }

    /// The image divisor on `C̃`.
    pub fn zeta_divisor<A: Algebra<K>>(&self, ring: &A, divisor: &SymDivisor<A>) -> Result<SymDivisor<A>> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (x, y) in divisor.xs.iter().zip(&divisor.ys) {
            let (bx, by) = self.zeta(ring, x, y)?;
            xs.push(bx);
            ys.push(by);
        }
        SymDivisor::new(&self.target, ring, xs, ys, divisor.signs.clone())
    }

    /// `f̄ = t^{−2}(e1 − a)^{g+1}(e2 − a)^{g+1} f̃(s/(e1 − a), s/(e2 − a))`.
    pub fn f_bar(&self) -> BivarPoly<K::Elem> {
        let f = self.field();
        let b = Bivar(f);
        let g = self.genus();
        let f_tilde = pair_poly(&self.target);
        let t2_inv = f.try_inv(&f.square(&self.t)).expect("t nonzero");
        let shift = [f.neg(self.a()), f.one()];
        let powers: Vec<Vec<K::Elem>> = (0..=g + 1).map(|k| poly::pow(f, &shift, k)).collect();
        let mut out = b.zero(g + 1, g + 1);
        for (i, row) in f_tilde.grid().iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if f.is_zero(c) || i > g + 1 || j > g + 1 {
                    continue;
                }
                let coef = f.product(&[c.clone(), f.pow(&self.s, (i + j) as u32), t2_inv.clone()]);
                let term = b.scale(&b.outer(&powers[g + 1 - i], &powers[g + 1 - j]), &coef);
                out = b.add(&out, &term);
            }
        }
        out
    }

    /// `𝔫 = (f̄ − f)/(e1 − e2)²`.
    pub fn n_matrix(&self) -> Result<BivarPoly<K::Elem>> {
        decompose(self.field(), &self.f_bar(), &pair_poly(&self.source))
    }

    /// `κ = t^{−2}{a²g(g+1)λ̃_{4g+2} − a g s λ̃_{4g}}`.
    pub fn kappa(&self) -> K::Elem {
        let f = self.field();
        let g = self.genus() as i64;
        let a = self.a();
        let first = f.mul_i64(&f.mul(&f.square(a), &self.lambda(4 * g + 2)), g * (g + 1));
        let second = f.mul_i64(&f.product(&[a.clone(), self.s.clone(), self.lambda(4 * g)]), g);
        f.mul(&f.sub(&first, &second), &f.try_inv(&f.square(&self.t)).expect("t nonzero"))
    }

    pub fn params_json<R: Render<Elem = K::Elem>>(&self, render: &R) -> Value {
        json!({
            "s": render.to_json(&self.s),
            "t": render.to_json(&self.t),
            "a": render.to_json(self.a()),
            "lambda_tilde": (0..=2 * self.genus() + 1)
                .map(|k| render.to_json(&self.lambda(2 * k as i64)))
                .collect::<Vec<_>>(),
        })
    }
}

/// `P` on the source and `℘` on the target at one point of the symmetric product.
pub struct BridgePoint<'a, K: Field, A: Algebra<K>> {
    bridge: &'a Bridge<K>,
    ring: &'a A,
    divisor: &'a SymDivisor<A>,
    image: SymDivisor<A>,
    p: PMatrix<A::Elem>,
    wp: PMatrix<A::Elem>,
}

impl<'a, K: Field, A: Algebra<K> + Render> BridgePoint<'a, K, A> {
    pub fn new(bridge: &'a Bridge<K>, ring: &'a A, divisor: &'a SymDivisor<A>) -> Result<Self> {
        let image = bridge.zeta_divisor(ring, divisor)?;
        let p = p_matrix(&bridge.source, ring, divisor)?;
        let wp = p_matrix(&bridge.target, ring, &image)?;
        Ok(BridgePoint { bridge, ring, divisor, image, p, wp })
    }

    pub fn image(&self) -> &SymDivisor<A> {
        &self.image
    }

    pub fn p(&self, s: i64, t: i64) -> A::Elem {
        self.p.at(self.ring, s, t)
    }

    /// `℘_{s,t}` on the target, with `℘_{1,−1} = −1`.
    pub fn wp(&self, s: i64, t: i64) -> A::Elem {
        if (s, t) == (1, -1) || (s, t) == (-1, 1) {
            return self.ring.from_i64(-1);
        }
        self.wp.at(self.ring, s, t)
    }

    fn k(&self, v: &K::Elem) -> A::Elem {
        self.ring.embed(v)
    }

    fn report(&self, id: &str, defects: &[A::Elem]) -> IdentityReport {
        IdentityReport::new(self.ring, id, self.bridge.genus(), &[], divisor_json(self.ring, self.divisor), defects)
    }

    /// `G = s²t^{−2} Σ ℘_{2g+1−2i,2g+1−2j} s^{i+j−2}(e1 − a)^{g−i}(e2 − a)^{g−j} − Σ 𝔫_{ij} e1^{i−1}e2^{j−1}`,
    /// coefficientwise, plus the symmetry of `𝔫`.
    pub fn check_transport(&self) -> Result<IdentityReport> {
        let r = self.ring;
        let br = self.bridge;
        let f = br.field();
        let b = Bivar(r);
        let g = br.genus();
        let n = br.n_matrix()?;
        let t2_inv = f.try_inv(&f.square(&br.t))?;
        let shift = [r.embed(&f.neg(br.a())), r.one()];
        let powers: Vec<Vec<A::Elem>> = (0..g).map(|k| poly::pow(r, &shift, k)).collect();
        let mut rhs = b.scale(&Bivar(f).map::<A>(&n, |c| r.embed(c)), &r.from_i64(-1));
        for i in 1..=g {
            for j in 1..=g {
                let wp = &self.wp.by_exponent()[i - 1][j - 1];
                let coef = r.mul(wp, &self.k(&f.mul(&f.pow(&br.s, (i + j) as u32), &t2_inv)));
                rhs = b.add(&rhs, &b.scale(&b.outer(&powers[g - i], &powers[g - j]), &coef));
            }
        }
        let lhs = BivarPoly::from_grid(self.p.by_exponent().to_vec());
        let diff = b.sub(&lhs, &rhs);
        let mut defects: Vec<A::Elem> = diff.grid().iter().flatten().cloned().collect();
        let nt = n.transpose();
        for (row, row_t) in n.grid().iter().zip(nt.grid()) {
            for (c, ct) in row.iter().zip(row_t) {
                defects.push(r.embed(&f.sub(c, ct)));
            }
        }
        Ok(self.report("bridge_transport", &defects))
    }

    /// With `a = 0`: `P_{2g+2−2i,2g+2−2j} = s^{2g−i−j+2} t^{−2} ℘_{2i−1,2j−1}`.
    pub fn check_origin(&self) -> Result<IdentityReport> {
        let br = self.bridge;
        let f = br.field();
        if !f.is_zero(br.a()) {
            return Err(Error::Precondition("the origin form needs a = 0".into()));
        }
        let r = self.ring;
        let g = br.genus() as i64;
        let t2_inv = f.try_inv(&f.square(&br.t))?;
        let mut defects = Vec::new();
        for i in 1..=g {
            for j in 1..=g {
                let c = f.mul(&f.pow(&br.s, (2 * g - i - j + 2) as u32), &t2_inv);
                let rhs = r.mul(&self.k(&c), &self.wp(2 * i - 1, 2 * j - 1));
                defects.push(r.sub(&self.p(2 * g + 2 - 2 * i, 2 * g + 2 - 2 * j), &rhs));
            }
        }
        Ok(self.report("bridge_origin", &defects))
    }

    /// `P_{2·2} = s²t^{−2}℘_{(2g−1)·2} − κ`.
    pub fn check_kappa(&self) -> Result<IdentityReport> {
        let br = self.bridge;
        let f = br.field();
        let r = self.ring;
        let m = 2 * br.genus() as i64 - 1;
        let c = f.mul(&f.square(&br.s), &f.try_inv(&f.square(&br.t))?);
        let rhs = r.sub(&r.mul(&self.k(&c), &self.wp(m, m)), &self.k(&br.kappa()));
        Ok(self.report("bridge_kappa", &[r.sub(&self.p(2, 2), &rhs)]))
    }

    /// The genus-two displays for `P_{2,4}` and `P_{4·2}`.
    pub fn check_genus_two(&self) -> Result<IdentityReport> {
        let br = self.bridge;
        if br.genus() != 2 {
            return Err(Error::Precondition("the genus-two displays need g = 2".into()));
        }
        let f = br.field();
        let r = self.ring;
        let (s, a) = (br.s.clone(), br.a().clone());
        let t2_inv = self.k(&f.try_inv(&f.square(&br.t))?);
        let term = |c: i64, sp: u32, ap: u32, rest: A::Elem| {
            let k = f.mul_i64(&f.mul(&f.pow(&s, sp), &f.pow(&a, ap)), c);
            r.mul(&self.k(&k), &rest)
        };
        let lt = |i| self.k(&br.lambda(i));
        let p24 = r.mul(
            &t2_inv,
            &r.sum(&[
                term(1, 3, 0, self.wp(1, 3)),
                term(-1, 2, 1, self.wp(3, 3)),
                term(-1, 1, 2, lt(8)),
                term(2, 0, 3, lt(10)),
            ]),
        );
        let p44 = r.mul(
            &t2_inv,
            &r.sum(&[
                term(1, 4, 0, self.wp(1, 1)),
                term(-2, 3, 1, self.wp(1, 3)),
                term(1, 2, 2, self.wp(3, 3)),
                term(1, 3, 1, lt(4)),
                term(-2, 2, 2, lt(6)),
                term(4, 1, 3, lt(8)),
                term(-6, 0, 4, lt(10)),
            ]),
        );
        Ok(self.report(
            "bridge_genus_two",
            &[r.sub(&self.p(2, 4), &p24), r.sub(&self.p(4, 4), &p44)],
        ))
    }

    /// `h_k(x₁ − a, …, x_g − a) ℘_{1,2g−1} = (−s)^k ℘_{1,2g−2k−1}` on the image.
    pub fn check_h_inversion(&self) -> Result<IdentityReport> {
        let br = self.bridge;
        let f = br.field();
        let r = self.ring;
        let g = br.genus() as i64;
        let a = r.embed(br.a());
        let shifted: Vec<A::Elem> = self.divisor.xs.iter().map(|x| r.sub(x, &a)).collect();
        let h = poly::elementary_symmetric(r, &shifted);
        let top = self.wp(1, 2 * g - 1);
        let minus_s = f.neg(&br.s);
        let defects: Vec<A::Elem> = (1..=g)
            .map(|k| {
                let rhs = r.mul(&self.k(&f.pow(&minus_s, k as u32)), &self.wp(1, 2 * g - 2 * k - 1));
                r.sub(&r.mul(&h[k as usize], &top), &rhs)
            })
            .collect();
        Ok(self.report("bridge_h_inversion", &defects))
    }

    /// Every bridge relation that applies to this bridge.
    pub fn check_all(&self) -> Result<Vec<IdentityReport>> {
        let br = self.bridge;
        let mut out = vec![self.check_transport()?, self.check_kappa()?, self.check_h_inversion()?];
        if br.field().is_zero(br.a()) {
            out.push(self.check_origin()?);
        }
        if br.genus() == 2 {
            out.push(self.check_genus_two()?);
        }
        Ok(out)
    }
}

/// The even curve and divisor after the substitution `x ↦ x + a`, so that the
/// branch point moves to the origin.
pub fn recenter<K: Field, A: Algebra<K>>(
    curve: &Curve<K>,
    ring: &A,
    divisor: &SymDivisor<A>,
) -> Result<(Curve<K>, SymDivisor<A>)> {
    let a = curve.require_branch_point()?.clone();
    let moved = curve.shifted(&a)?.with_branch_point(curve.field().zero())?;
    let shift = ring.embed(&a);
    let xs = divisor.xs.iter().map(|x| ring.sub(x, &shift)).collect();
    let d = SymDivisor::new(&moved, ring, xs, divisor.ys.clone(), divisor.signs.clone())?;
    Ok((moved, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::field_divisor;
    use crate::fixtures::{even_rational, rng, Leading};
    use crate::scalar::{GaussianField, GaussianRational, Ring};

    type Q = GaussianRational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn quartic() -> Curve<GaussianField> {
        Curve::even(GaussianField, 1, vec![q(1), q(0), q(0), q(0), q(-1)])
            .unwrap()
            .with_branch_point(q(1))
            .unwrap()
    }

    #[test]
    fn quartic_image_by_hand() {
        // N = x⁴ − 1, a = 1, s = t = 4: M̃ = ((X + 4)⁴ − X⁴)/16
        let br = Bridge::canonical(quartic(), &q(1)).unwrap();
        assert_eq!((br.s().clone(), br.t().clone()), (q(4), q(4)));
        assert_eq!(br.target().poly(), vec![q(16), q(16), q(6), q(1)]);
        let f = GaussianField;
        let (bx, by) = br.zeta(&f, &q(0), &Q::i()).unwrap();
        assert_eq!(bx, q(-4));
        assert_eq!(by, f.mul(&q(4), &Q::i()));
        let (nx, ny) = br.zeta(&f, &q(0), &f.neg(&Q::i())).unwrap();
        assert_eq!((nx, ny), (bx, f.neg(&by)));
        assert!(matches!(br.zeta(&f, &q(1), &q(0)), Err(Error::Precondition(_))));
    }

    #[test]
    fn bad_parameters_rejected() {
        assert!(Bridge::new(quartic(), q(4), q(3)).is_err());
        assert!(Bridge::new(quartic(), q(0), q(0)).is_err());
    }

    fn rooted(g: usize, lead: i64, a: i64, roots: &[i64]) -> Curve<GaussianField> {
        let f = GaussianField;
        let mut rs: Vec<Q> = roots.iter().map(|&r| q(r)).collect();
        rs.push(q(a));
        let n = poly::scale(&f, &poly::from_roots(&f, &rs), &q(lead));
        Curve::even(f, g, n.into_iter().rev().collect())
            .unwrap()
            .with_branch_point(q(a))
            .unwrap()
    }

    #[test]
    fn target_matches_root_product() {
        let f = GaussianField;
        let c = rooted(2, -3, 1, &[-2, 0, 3, 5, -4]);
        for w in [q(1), Q::from_ratio(1, 2)] {
            let br = Bridge::canonical(c.clone(), &w).unwrap();
            let roots: Vec<Q> = [-2, 0, 3, 5, -4]
                .iter()
                .map(|&r| f.div(br.s(), &q(r - 1)).unwrap())
                .collect();
            assert_eq!(br.target().poly(), poly::from_roots(&f, &roots));
            // (x − a)^{2g+2} M̃(s/(x − a)) = t² N(x)
            for x in [-7, 2, 9] {
                let h = q(x - 1);
                let m = poly::eval(&f, &br.target().poly(), &f.div(br.s(), &h).unwrap());
                let lhs = f.mul(&f.pow(&h, 6), &m);
                assert_eq!(lhs, f.mul(&f.square(br.t()), &c.eval(&q(x)).0));
            }
        }
    }

    #[test]
    fn d_matrix_examples_and_pullback() {
        let f = GaussianField;
        let c = rooted(2, 2, 3, &[-2, 0, 1, 5, -4]);
        let br = Bridge::canonical(c, &q(1)).unwrap();
        let st = f.div(br.s(), br.t()).unwrap();
        let d = br.d_matrix();
        assert_eq!(d[0], vec![f.mul(&st, br.s()), q(0)]);
        assert_eq!(d[1], vec![f.mul(&st, &q(-3)), st.clone()]);
        for x in [-5, 2, 7, 11, 13] {
            assert!(br.pullback_defect(&q(x)).unwrap().iter().all(|v| v.is_zero()));
        }
        let c0 = rooted(3, 1, 0, &[-2, 1, 3, 5, -4, 6, 2]);
        let br0 = Bridge::canonical(c0, &q(1)).unwrap();
        let d0 = br0.d_matrix();
        for (i, row) in d0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i == j {
                    let e = f.div(&f.pow(br0.s(), (3 - i) as u32), br0.t()).unwrap();
                    assert_eq!(*v, e);
                } else {
                    assert!(v.is_zero());
                }
            }
        }
    }

    #[test]
    fn transported_pairing_matches_curve() {
        let f = GaussianField;
        let b = Bivar(&f);
        let c = rooted(2, -1, 2, &[-2, 0, 1, 5, -4]);
        let br = Bridge::canonical(c.clone(), &q(1)).unwrap();
        let fb = br.f_bar();
        assert!(fb.is_symmetric());
        for e in [-3, 1, 4] {
            let (n, dn) = c.eval(&q(e));
            assert_eq!(b.eval(&fb, &q(e), &q(e)), f.mul_i64(&n, 2));
            let d2 = b.partial_e2(&fb);
            assert_eq!(b.eval(&d2, &q(e), &q(e)), dn);
        }
        assert!(br.n_matrix().unwrap().is_symmetric());
        let c0 = rooted(2, -1, 0, &[-2, 3, 1, 5, -4]);
        let br0 = Bridge::canonical(c0.clone(), &q(1)).unwrap();
        let fb0 = br0.f_bar();
        assert!(b.sub(&fb0, &pair_poly(&c0)).grid().iter().flatten().all(|v| v.is_zero()));
    }

    #[test]
    fn relations_hold_on_rational_fixtures() {
        for g in 1..=3 {
            let fx = even_rational(g, 60 + g as u64, Leading::default()).unwrap();
            let d = fx.divisor(&mut rng(g as u64)).unwrap();
            let br = Bridge::canonical(fx.curve.clone(), &q(1)).unwrap();
            let pt = BridgePoint::new(&br, &GaussianField, &d).unwrap();
            for rep in pt.check_all().unwrap() {
                assert!(rep.passed(), "{rep:?}");
            }
            let (c0, d0) = recenter(&fx.curve, &GaussianField, &d).unwrap();
            let br0 = Bridge::canonical(c0, &q(1)).unwrap();
            let pt0 = BridgePoint::new(&br0, &GaussianField, &d0).unwrap();
            for rep in pt0.check_all().unwrap() {
                assert!(rep.passed(), "{rep:?}");
            }
        }
    }

    #[test]
    fn unit_normalization_with_both_signs() {
        // a = 0, ν_{4g+2} = N′(0) = 1, s = 1, t = ±1: P and ℘ coincide
        let f = GaussianField;
        // N = (x³ − 5x² + 4x)² + x
        let c = Curve::even(f, 2, vec![q(1), q(-10), q(33), q(-40), q(16), q(1), q(0)])
            .unwrap()
            .with_branch_point(q(0))
            .unwrap();
        assert!(c.validate().is_ok());
        let pts = [(q(1), q(1)), (q(4), q(2))];
        let d = field_divisor(&c, &pts).unwrap();
        for t in [q(1), q(-1)] {
            let br = Bridge::new(c.clone(), q(1), t).unwrap();
            let pt = BridgePoint::new(&br, &f, &d).unwrap();
            for i in 1..=2 {
                for j in 1..=2 {
                    assert_eq!(pt.p(6 - 2 * i, 6 - 2 * j), pt.wp(2 * i - 1, 2 * j - 1));
                }
            }
            assert!(pt.check_origin().unwrap().passed());
        }
    }
}
