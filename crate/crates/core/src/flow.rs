//! Divisors carried along up to three commuting Jacobian flows as truncated
//! power series, giving exact iterated derivatives of matrix entries.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::baker::{p_matrix, tangent_basis, PMatrix};
use crate::curve::{Curve, Model, SymDivisor};
use crate::error::{Error, Result};
use crate::scalar::{Algebra, Field, Jet, JetRing, Monomial, Ring};

/// `Σ γ_k ∂_k` over derivation suffixes `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction<E> {
    pub terms: Vec<(usize, E)>,
}

impl<E> Direction<E> {
    pub fn single<K: Ring<Elem = E>>(field: &K, suffix: usize) -> Self {
        Direction {
            terms: vec![(suffix, field.one())],
        }
    }

    pub fn zero() -> Self {
        Direction { terms: Vec::new() }
    }
}

/// One to three directions, attached to the jet variables `t1, t2, t3`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowDirections<E> {
    model: Model,
    directions: Vec<Direction<E>>,
}

impl<E> FlowDirections<E> {
    pub fn new(model: Model, genus: usize, directions: Vec<Direction<E>>) -> Result<Self> {
        if directions.is_empty() || directions.len() > 3 {
            return Err(Error::Input(format!(
                "between one and three flow directions are allowed, got {}",
                directions.len()
            )));
        }
        for d in &directions {
            for (s, _) in &d.terms {
                if model.exponent(genus, *s as i64).is_none() {
                    return Err(Error::Input(format!("no derivation with suffix {s} in genus {genus}")));
                }
            }
        }
        Ok(FlowDirections { model, directions })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn directions(&self) -> &[Direction<E>] {
        &self.directions
    }

    pub(crate) fn set_directions(&mut self, directions: Vec<Direction<E>>) {
        self.directions = directions;
    }

    /// The same directions in another order.
    pub fn permuted(&self, order: &[usize]) -> Self
    where
        E: Clone,
    {
        FlowDirections {
            model: self.model,
            directions: order.iter().map(|&i| self.directions[i].clone()).collect(),
        }
    }
}

/// The divisor with `x_j(t)`, `y_j(t)` as jets.
pub type DivisorJet<A> = SymDivisor<JetRing<A>>;

/// Solves `∂x_j/∂t_k = c_j^{(k)}`, `∂y_j/∂t_k = c_j^{(k)} N′(x_j)/(2y_j)`
/// degree by degree: the degree-`n` part of the solution is
/// `(1/n) Σ_k t_k · [V_k(Z)]_{n−1}`.
pub fn propagate<K: Field, A: Algebra<K>>(
    curve: &Curve<K>,
    ring: &A,
    divisor: &SymDivisor<A>,
    directions: &FlowDirections<K::Elem>,
    order: usize,
) -> Result<(JetRing<A>, DivisorJet<A>)> {
    if directions.model() != curve.model() {
        return Err(Error::Input("flow directions belong to the other model".into()));
    }
    let field = curve.field();
    let jets = JetRing::new(ring.clone(), order);
    let g = divisor.len();
    let mut xs: Vec<Jet<A::Elem>> = divisor.xs.iter().map(|x| jets.constant(x.clone())).collect();
    let mut ys: Vec<Jet<A::Elem>> = divisor.ys.iter().map(|y| jets.constant(y.clone())).collect();
    for n in 1..=order {
        let low = jets.with_order(n - 1);
        let current = SymDivisor {
            xs: xs.iter().map(|x| low.convert(x)).collect(),
            ys: ys.iter().map(|y| low.convert(y)).collect(),
            signs: divisor.signs.clone(),
        };
        let basis = tangent_basis(curve, &low, &current)?;
        let inv_n = ring.embed(&field.from_ratio(1, n as i64));
        let mut dx = vec![jets.zero(); g];
        let mut dy = vec![jets.zero(); g];
        for (k, dir) in directions.directions().iter().enumerate() {
            for (suffix, gamma) in &dir.terms {
                let i = crate::baker::DerivationField {
                    model: curve.model(),
                    suffix: *suffix,
                }
                .basis_index();
                let gamma = ring.mul(&ring.embed(gamma), &inv_n);
                for j in 0..g {
                    let (vx, vy) = &basis[i][j];
                    for (acc, v) in [(&mut dx[j], vx), (&mut dy[j], vy)] {
                        let top = jets.convert(&low.homogeneous_part(v, n - 1));
                        let lifted = jets.mul_variable(&top, k);
                        let scaled = jets.map_coeffs(&lifted, |_, c| ring.mul(c, &gamma));
                        jets.add_assign(acc, &scaled);
                    }
                }
            }
        }
        for j in 0..g {
            jets.add_assign(&mut xs[j], &dx[j]);
            jets.add_assign(&mut ys[j], &dy[j]);
        }
    }
    Ok((
        jets,
        SymDivisor {
            xs,
            ys,
            signs: divisor.signs.clone(),
        },
    ))
}

/// `y_j(t)² − N(x_j(t))` for each point.
pub fn relation_defects<K: Field, A: Algebra<K>>(curve: &Curve<K>, jets: &JetRing<A>, d: &DivisorJet<A>) -> Vec<Jet<A::Elem>> {
    d.xs
        .iter()
        .zip(&d.ys)
        .map(|(x, y)| jets.sub(&jets.square(y), &curve.eval_in(jets, x).0))
        .collect()
}

/// The matrix of entries as jets along the flows.
pub fn directional_matrix<K: Field, A: Algebra<K>>(
    curve: &Curve<K>,
    ring: &A,
    divisor: &SymDivisor<A>,
    directions: &FlowDirections<K::Elem>,
    order: usize,
) -> Result<(JetRing<A>, PMatrix<Jet<A::Elem>>)> {
    let (jets, d) = propagate(curve, ring, divisor, directions, order)?;
    let p = p_matrix(curve, &jets, &d)?;
    Ok((jets, p))
}

/// The jet of one entry `(s, t)` along the flows.
pub fn directional_value<K: Field, A: Algebra<K>>(
    curve: &Curve<K>,
    ring: &A,
    divisor: &SymDivisor<A>,
    entry: (usize, usize),
    directions: &FlowDirections<K::Elem>,
    order: usize,
) -> Result<(JetRing<A>, Jet<A::Elem>)> {
    let (jets, p) = directional_matrix(curve, ring, divisor, directions, order)?;
    let v = p
        .get(entry.0 as i64, entry.1 as i64)
        .cloned()
        .ok_or_else(|| Error::Input(format!("no entry with suffixes {entry:?}")))?;
    Ok((jets, v))
}

/// Values of `∂_{k_1} ⋯ ∂_{k_l} P_{s,t}` addressed by the full suffix list
/// `(s, t, k_1, …, k_l)`, with one jet run per set of distinct derivation
/// suffixes.
pub struct Derivatives<'a, K: Field, A: Algebra<K>> {
    curve: &'a Curve<K>,
    ring: &'a A,
    divisor: &'a SymDivisor<A>,
    order: usize,
    runs: Mutex<HashMap<Vec<usize>, (JetRing<A>, PMatrix<Jet<A::Elem>>)>>,
}

impl<'a, K: Field, A: Algebra<K>> Derivatives<'a, K, A> {
    pub fn new(curve: &'a Curve<K>, ring: &'a A, divisor: &'a SymDivisor<A>, order: usize) -> Self {
        Derivatives {
            curve,
            ring,
            divisor,
            order,
            runs: Mutex::new(HashMap::new()),
        }
    }

    pub fn ring(&self) -> &A {
        self.ring
    }

    pub fn curve(&self) -> &Curve<K> {
        self.curve
    }

    /// Number of jet runs performed so far.
    pub fn runs(&self) -> usize {
        self.runs.lock().expect("cache lock").len()
    }

    /// The value with the given suffixes; out-of-range suffixes give zero.
    /// The first two suffixes are the matrix entry, the rest derivations.
    pub fn get(&self, suffixes: &[i64]) -> Result<A::Elem> {
        if suffixes.len() < 2 {
            return Err(Error::Input("an entry needs at least two suffixes".into()));
        }
        let g = self.curve.genus();
        let model = self.curve.model();
        if suffixes.iter().any(|&s| model.exponent(g, s).is_none()) {
            return Ok(self.ring.zero());
        }
        let (entry, derivs) = suffixes.split_at(2);
        if derivs.is_empty() {
            let p = self.matrix_for(&[])?;
            return Ok(p.1.get(entry[0], entry[1]).expect("suffix in range").constant().clone());
        }
        if derivs.len() > self.order {
            return Err(Error::Input(format!(
                "{} derivatives exceed the jet order {}",
                derivs.len(),
                self.order
            )));
        }
        let mut distinct: Vec<usize> = derivs.iter().map(|&s| s as usize).collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() > 3 {
            return Err(Error::Input("at most three distinct derivation suffixes".into()));
        }
        let mut m: Monomial = [0; 3];
        for &s in derivs {
            let k = distinct.iter().position(|&d| d == s as usize).expect("listed");
            m[k] += 1;
        }
        let (jets, p) = self.matrix_for(&distinct)?;
        let jet = p.get(entry[0], entry[1]).expect("suffix in range");
        Ok(jets.derivative_value(jet, m).expect("monomial within order"))
    }

    /// Like [`Derivatives::get`] with the entry taken from the first two suffixes
    /// of the sorted list, so any ordering of the same multiset hits the
    /// same run.
    pub fn get_sorted(&self, suffixes: &[i64]) -> Result<A::Elem> {
        let mut s = suffixes.to_vec();
        s.sort_unstable_by(|a, b| b.cmp(a));
        self.get(&s)
    }

    fn matrix_for(&self, distinct: &[usize]) -> Result<(JetRing<A>, PMatrix<Jet<A::Elem>>)> {
        if let Some(hit) = self.runs.lock().expect("cache lock").get(distinct) {
            return Ok(hit.clone());
        }
        let field = self.curve.field();
        let dirs: Vec<Direction<K::Elem>> = if distinct.is_empty() {
            vec![Direction::zero()]
        } else {
            distinct.iter().map(|&s| Direction::single(field, s)).collect()
        };
        let flows = FlowDirections::new(self.curve.model(), self.curve.genus(), dirs)?;
        let order = if distinct.is_empty() { 0 } else { self.order };
        let run = directional_matrix(self.curve, self.ring, self.divisor, &flows, order)?;
        self.runs
            .lock()
            .expect("cache lock")
            .insert(distinct.to_vec(), run.clone());
        Ok(run)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baker::DerivationField;
    use crate::curve::etale_divisor;
    use crate::scalar::{EtaleRing, GaussianField, GaussianRational};

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    fn qs(v: &[i64]) -> Vec<GaussianRational> {
        v.iter().map(|&n| q(n)).collect()
    }

    fn setup(g: usize) -> (Curve<GaussianField>, EtaleRing, SymDivisor<EtaleRing>) {
        let mut nus: Vec<i64> = (0..2 * g as i64 + 3).map(|k| (k * 5 % 7) - 3).collect();
        nus[0] = 1;
        let partial: i64 = nus[..nus.len() - 1].iter().sum();
        *nus.last_mut().unwrap() = -partial;
        let c = Curve::even(GaussianField, g, qs(&nus))
            .unwrap()
            .with_branch_point(q(1))
            .unwrap();
        let xs: Vec<i64> = (0..g as i64).map(|k| 3 * k + 2).collect();
        let signs: Vec<i8> = (0..g).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect();
        let (ring, d) = etale_divisor(&c, &qs(&xs), &signs).unwrap();
        (c, ring, d)
    }

    fn dirs(g: usize, suffixes: &[usize]) -> FlowDirections<GaussianRational> {
        FlowDirections::new(
            Model::Even,
            g,
            suffixes.iter().map(|&s| Direction::single(&GaussianField, s)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn first_order_matches_derivation() {
        let (c, ring, d) = setup(2);
        let (jets, dj) = propagate(&c, &ring, &d, &dirs(2, &[2, 4]), 2).unwrap();
        for (k, s) in [2usize, 4].iter().enumerate() {
            let t = DerivationField::new(Model::Even, 2, *s).unwrap().tangent(&c, &ring, &d).unwrap();
            let mut m = [0; 3];
            m[k] = 1;
            for j in 0..2 {
                assert_eq!(jets.coeff(&dj.xs[j], m).unwrap(), &t[j].0);
                assert_eq!(jets.coeff(&dj.ys[j], m).unwrap(), &t[j].1);
            }
        }
    }

    #[test]
    fn zero_direction_is_constant() {
        let (c, ring, d) = setup(2);
        let flows = FlowDirections::new(Model::Even, 2, vec![Direction::zero()]).unwrap();
        let (jets, dj) = propagate(&c, &ring, &d, &flows, 3).unwrap();
        assert!(dj.xs.iter().chain(&dj.ys).all(|x| jets.is_constant(x)));
    }

    #[test]
    fn curve_relation_holds_as_jets() {
        for g in 1..=3 {
            let (c, ring, d) = setup(g);
            let suffixes: Vec<usize> = (1..=g.min(3)).map(|i| 2 * i).collect();
            let (jets, dj) = propagate(&c, &ring, &d, &dirs(g, &suffixes), 3).unwrap();
            assert!(relation_defects(&c, &jets, &dj).iter().all(|e| jets.is_zero(e)));
        }
    }

    #[test]
    fn base_coefficient_is_plain_entry() {
        let (c, ring, d) = setup(2);
        let p = p_matrix(&c, &ring, &d).unwrap();
        let (_, v) = directional_value(&c, &ring, &d, (2, 4), &dirs(2, &[2]), 2).unwrap();
        assert_eq!(v.constant(), p.get(2, 4).unwrap());
    }

    #[test]
    fn mixed_partials_commute() {
        let (c, ring, d) = setup(2);
        let a = dirs(2, &[2, 4]);
        let (jets, va) = directional_value(&c, &ring, &d, (2, 2), &a, 2).unwrap();
        let (_, vb) = directional_value(&c, &ring, &d, (2, 2), &a.permuted(&[1, 0]), 2).unwrap();
        assert_eq!(jets.coeff(&va, [1, 1, 0]), jets.coeff(&vb, [1, 1, 0]));
        assert_eq!(jets.coeff(&va, [2, 0, 0]), jets.coeff(&vb, [0, 2, 0]));
    }

    #[test]
    fn fourth_order_factorizations_agree() {
        let (c, ring, d) = setup(2);
        let oracle = Derivatives::new(&c, &ring, &d, 2);
        let a = oracle.get(&[2, 2, 4, 4]).unwrap();
        assert_eq!(oracle.get(&[2, 4, 2, 4]).unwrap(), a);
        assert_eq!(oracle.get(&[4, 4, 2, 2]).unwrap(), a);
        assert_eq!(oracle.get(&[2, 8, 2]).unwrap(), ring.zero());
    }

    #[test]
    fn third_derivatives_symmetric() {
        for g in 2..=4 {
            let (c, ring, d) = setup(g);
            let oracle = Derivatives::new(&c, &ring, &d, 1);
            let s: Vec<i64> = (1..=g as i64).map(|i| 2 * i).collect();
            for &a in &s {
                for &b in &s {
                    for &e in &s {
                        let v = oracle.get(&[a, b, e]).unwrap();
                        assert_eq!(oracle.get(&[e, b, a]).unwrap(), v);
                        assert_eq!(oracle.get(&[a, e, b]).unwrap(), v);
                    }
                }
            }
        }
    }

    #[test]
    fn odd_model_flow() {
        let c = Curve::odd(GaussianField, 2, qs(&[1, -2, 0, 3, 5])).unwrap();
        let (ring, d) = etale_divisor(&c, &qs(&[2, -1]), &[1, 1]).unwrap();
        let flows = FlowDirections::new(Model::Odd, 2, vec![Direction::single(&GaussianField, 1)]).unwrap();
        let (jets, dj) = propagate(&c, &ring, &d, &flows, 3).unwrap();
        assert!(relation_defects(&c, &jets, &dj).iter().all(|e| jets.is_zero(e)));
        assert!(FlowDirections::new(Model::Odd, 2, vec![Direction::single(&GaussianField, 2)]).is_err());
    }
}
