//! Command-line runs: input loading, fixture generation, and JSON reports.
//!
//! Every command produces a [`Report`]. Reports contain no timing unless
//! asked for, so a fixed seed and configuration give byte-identical output.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::baker::{duality_matrix, p_matrix};
use crate::bridge::{recenter, Bridge, BridgePoint};
use crate::curve::{etale_divisor, field_divisor, sqrt_divisor, Curve, CurveSpec, DivisorSpec, Model, PointSpec, SymDivisor};
use crate::error::{Error, Result};
use crate::fixtures::{even_rational, even_split, odd_rational, rng, Leading, RationalFixture};
use crate::flow::Derivatives;
use crate::identities::{check_all, Context, Family, IdentityReport, Verdict};
use crate::kp::{make_constants, residual, solution, Branch, KpSolution, Variant};
use crate::scalar::{Algebra, ComplexFloatField, EtaleRing, Field, GaussianField, GaussianRational, Render, MIN_PRECISION};

pub const SCHEMA: &str = "hyperkp-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

/// How a KP-I solution is turned into a KP-II solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum Kp2 {
    /// `t2 ↦ √−1·t2`.
    #[value(name = "sqrt-1")]
    #[serde(rename = "sqrt-1")]
    SqrtMinusOne,
    /// `ξ²Φ(ξt1, t2, ξ³t3)` with `ξ⁸ = 1`; numeric only.
    #[value(name = "xi8")]
    #[serde(rename = "xi8")]
    Xi8,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub precision: usize,
    pub jet_order: usize,
    pub seed: u64,
    #[serde(skip)]
    pub timing: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mode == Mode::Numeric && self.precision < MIN_PRECISION {
            return Err(Error::Input(format!(
                "precision {} below the minimum of {MIN_PRECISION} bits",
                self.precision
            )));
        }
        if self.jet_order < 4 {
            return Err(Error::Input("KP residuals need jet order at least 4".into()));
        }
        Ok(())
    }

    fn float_field(&self) -> Result<ComplexFloatField> {
        Ok(ComplexFloatField::new(self.precision)?)
    }
}

/// One checked quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl Entry {
    pub fn info(name: &str, detail: Value) -> Self {
        Entry {
            name: name.to_string(),
            passed: true,
            detail,
        }
    }

    fn from_identity(rep: IdentityReport) -> Self {
        let mut name = rep.id.clone();
        for (k, v) in &rep.params {
            name.push_str(&format!(" {k}={v}"));
        }
        Entry {
            name,
            passed: rep.passed(),
            detail: serde_json::to_value(&rep).expect("serializable report"),
        }
    }

    fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}{}", self.name);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub results: Vec<Entry>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, config: RunConfig, results: Vec<Entry>) -> Self {
        let passed = results.iter().all(|e| e.passed);
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config,
            results,
            passed,
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable report");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    /// One line per entry.
    pub fn summary(&self) -> String {
        self.results
            .iter()
            .map(|e| format!("{} {}\n", if e.passed { "PASS" } else { "FAIL" }, e.name))
            .collect()
    }
}

/// 1 for verification failures, 2 for precondition and usage errors.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::MultipleRoot | Error::Internal(_) => 1,
        _ => 2,
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    fs::write(path, s).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// A curve and divisor in the ring the mode calls for.
pub enum Setting {
    Rational(Curve<GaussianField>, SymDivisor<GaussianField>),
    Etale(Curve<GaussianField>, EtaleRing, SymDivisor<EtaleRing>),
    Numeric(Curve<ComplexFloatField>, ComplexFloatField, SymDivisor<ComplexFloatField>),
}

/// Runs `$body` with `$c`, `$r`, `$d` bound to the curve, ring and divisor of
/// whichever setting is present.
macro_rules! with_setting {
    ($s:expr, |$c:ident, $r:ident, $d:ident| $body:expr) => {
        match $s {
            Setting::Rational(curve, div) => {
                let ($c, $r, $d) = (curve, curve.field(), div);
                $body
            }
            Setting::Etale(curve, ring, div) => {
                let ($c, $r, $d) = (curve, ring, div);
                $body
            }
            Setting::Numeric(curve, ring, div) => {
                let ($c, $r, $d) = (curve, ring, div);
                $body
            }
        }
    };
}

impl Setting {
    pub fn load(curve: &Curve<GaussianField>, spec: &DivisorSpec, config: &RunConfig) -> Result<Self> {
        let explicit = spec.explicit_points();
        match config.mode {
            Mode::Exact => match explicit {
                Some(points) => Ok(Setting::Rational(curve.clone(), field_divisor(curve, &points)?)),
                None => {
                    let (ring, d) = etale_divisor(curve, &spec.xs(), &spec.signs()?)?;
                    Ok(Setting::Etale(curve.clone(), ring, d))
                }
            },
            Mode::Numeric => {
                let cf = config.float_field()?;
                let nc = curve.to_numeric(cf)?;
                let d = match explicit {
                    Some(points) => {
                        let pts: Vec<_> = points.iter().map(|(x, y)| (cf.from_gaussian(x), cf.from_gaussian(y))).collect();
                        field_divisor(&nc, &pts)?
                    }
                    None => {
                        let xs: Vec<_> = spec.xs().iter().map(|x| cf.from_gaussian(x)).collect();
                        sqrt_divisor(&nc, &xs, &spec.signs()?)?
                    }
                };
                Ok(Setting::Numeric(nc, cf, d))
            }
        }
    }

    fn from_fixture(fx: &RationalFixture, seed: u64, config: &RunConfig) -> Result<Self> {
        let d = fx.divisor(&mut rng(seed))?;
        Setting::load(&fx.curve, &divisor_spec(&d), config)
    }

    pub fn genus(&self) -> usize {
        with_setting!(self, |c, _r, _d| c.genus())
    }

    pub fn model(&self) -> Model {
        with_setting!(self, |c, _r, _d| c.model())
    }
}

fn divisor_spec(d: &SymDivisor<GaussianField>) -> DivisorSpec {
    DivisorSpec {
        points: d
            .xs
            .iter()
            .zip(&d.ys)
            .map(|(x, y)| PointSpec {
                x: x.clone(),
                y_sign: None,
                y: Some(y.clone()),
            })
            .collect(),
    }
}

pub fn validate_curve(curve: &Curve<GaussianField>) -> Vec<Entry> {
    let audit = curve.weight_audit();
    let weight = Entry {
        name: "weight_homogeneous".into(),
        passed: audit.homogeneous,
        detail: serde_json::to_value(&audit).expect("serializable audit"),
    };
    let cert = match curve.validate() {
        Ok(c) => Entry::info("nonsingular", json!({"resultant": GaussianField.to_json(&c.resultant)})),
        Err(e) => Entry {
            name: "nonsingular".into(),
            passed: false,
            detail: json!({"error": e.to_string()}),
        },
    };
    vec![cert, weight]
}

pub fn eval_p(setting: &Setting) -> Result<Vec<Entry>> {
    with_setting!(setting, |c, r, d| {
        let p = p_matrix(c, r, d)?;
        Ok(vec![Entry::info("p_matrix", p.to_json(r))])
    })
}

/// The entry with the given suffixes; the first two name the matrix entry.
pub fn jet_eval(setting: &Setting, suffixes: &[i64], config: &RunConfig) -> Result<Vec<Entry>> {
    let order = suffixes.len().saturating_sub(2).max(1).max(config.jet_order.min(suffixes.len()));
    with_setting!(setting, |c, r, d| {
        let derivs = Derivatives::new(c, r, d, order);
        let v = derivs.get(suffixes)?;
        Ok(vec![Entry::info(
            "derivative",
            json!({"suffixes": suffixes, "value": r.to_json(&v)}),
        )])
    })
}

fn residual_entry<K: Field, A: Algebra<K> + Render>(
    label: &str,
    curve: &Curve<K>,
    ring: &A,
    divisor: &SymDivisor<A>,
    sol: &KpSolution<K::Elem>,
    order: usize,
) -> Result<Entry> {
    let (jets, res) = residual(curve, ring, divisor, sol, order)?;
    let verdict = Verdict::from_defects(ring, res.coeffs());
    let coefficients: Vec<Value> = jets
        .monomials()
        .iter()
        .zip(res.coeffs())
        .map(|(m, c)| json!({"monomial": m, "value": ring.to_json(c)}))
        .collect();
    Ok(Entry {
        name: label.to_string(),
        passed: verdict.passed(),
        detail: json!({
            "variant": sol.variant.name(),
            "equation": format!("{:?}", sol.equation),
            "genus": curve.genus(),
            "jet_order": order,
            "verdict": verdict,
            "coefficients": coefficients,
        }),
    })
}

fn kp_solution<K: Field>(variant: Variant, curve: &Curve<K>, branch: Branch, sqrt_minus_one: bool) -> Result<KpSolution<K::Elem>> {
    let k = make_constants(variant, curve, branch)?;
    let sol = solution(variant, curve, &k)?;
    if sqrt_minus_one {
        sol.sqrt_minus_one(curve.field())
    } else {
        Ok(sol)
    }
}

pub fn kp_residual(setting: &Setting, variant: Variant, branch: Branch, kp2: Option<Kp2>, config: &RunConfig) -> Result<Vec<Entry>> {
    let order = config.jet_order;
    let label = match kp2 {
        None => format!("{}_kp1", variant.name()),
        Some(Kp2::SqrtMinusOne) => format!("{}_kp2_sqrt-1", variant.name()),
        Some(Kp2::Xi8) => format!("{}_kp2_xi8", variant.name()),
    };
    if kp2 == Some(Kp2::Xi8) {
        let Setting::Numeric(c, cf, d) = setting else {
            return Err(Error::Precondition("the ξ8 transform needs --mode numeric".into()));
        };
        let sol = kp_solution(variant, c, branch, false)?.xi8(cf);
        return Ok(vec![residual_entry(&label, c, cf, d, &sol, order)?]);
    }
    let flip = kp2 == Some(Kp2::SqrtMinusOne);
    with_setting!(setting, |c, r, d| {
        let sol = kp_solution(variant, c, branch, flip)?;
        Ok(vec![residual_entry(&label, c, r, d, &sol, order)?])
    })
}

/// Identity names accepted by `check-identity`.
pub const IDENTITY_IDS: &[&str] = &[
    "p_third",
    "quartic_baker",
    "wp_family",
    "wp_quartic_top",
    "h_inversion",
    "suffix_symmetry",
    "bridge",
    "all",
];

pub fn identity_model(id: &str) -> Result<Model> {
    match id {
        "p_third" | "quartic_baker" | "bridge" => Ok(Model::Even),
        "wp_family" | "wp_quartic_top" | "h_inversion" => Ok(Model::Odd),
        "suffix_symmetry" | "all" => Err(Error::Input(format!("{id} applies to either model; pass --curve"))),
        _ => Err(Error::Input(format!("unknown identity {id:?}; expected one of {}", IDENTITY_IDS.join(", ")))),
    }
}

/// The four-point e-configurations used by default.
fn e_configurations<K: Field>(f: &K) -> Vec<[K::Elem; 4]> {
    vec![
        [f.from_i64(-2), f.from_ratio(1, 2), f.from_i64(3), f.from_i64(7)],
        [f.from_i64(0), f.from_i64(1), f.from_i64(-1), f.from_i64(5)],
        [f.from_ratio(-3, 2), f.from_i64(4), f.from_i64(-6), f.from_ratio(2, 3)],
    ]
}

/// All suffix multisets of size four.
fn quadruples(model: Model, g: usize) -> Vec<[i64; 4]> {
    let s: Vec<i64> = model.suffixes(g).into_iter().map(|v| v as i64).collect();
    let mut out = Vec::new();
    for a in 0..s.len() {
        for b in a..s.len() {
            for c in b..s.len() {
                for d in c..s.len() {
                    out.push([s[a], s[b], s[c], s[d]]);
                }
            }
        }
    }
    out
}

fn identity_entries<K: Field + Render, A: Algebra<K> + Render>(
    id: &str,
    curve: &Curve<K>,
    ring: &A,
    divisor: &SymDivisor<A>,
    config: &RunConfig,
) -> Result<Vec<Entry>> {
    let ctx = Context::new(curve, ring, divisor).with_timing(config.timing);
    let g = curve.genus() as i64;
    let mut reps = Vec::new();
    match id {
        "p_third" => {
            for k in 1..=g {
                reps.push(ctx.check_p_third(k)?);
            }
        }
        "quartic_baker" => {
            for e in e_configurations(curve.field()) {
                reps.push(ctx.check_quartic_baker(&e)?);
            }
        }
        "wp_family" => {
            for i in 1..=g {
                reps.push(ctx.check_wp_family(Family::I, i, i)?);
                for j in 1..=g {
                    for which in [Family::II, Family::III, Family::IV] {
                        reps.push(ctx.check_wp_family(which, i, j)?);
                    }
                }
            }
        }
        "wp_quartic_top" => reps.push(ctx.check_wp_quartic_top()?),
        "h_inversion" => reps.push(ctx.check_h_inversion()?),
        "suffix_symmetry" => {
            for s in quadruples(curve.model(), curve.genus()) {
                reps.push(ctx.check_suffix_symmetry(s)?);
            }
        }
        "bridge" => return bridge_entries(curve, ring, divisor, false),
        "all" => reps = check_all(&ctx)?,
        _ => return Err(Error::Input(format!("unknown identity {id:?}"))),
    }
    Ok(reps.into_iter().map(Entry::from_identity).collect())
}

pub fn check_identity(setting: &Setting, id: &str, config: &RunConfig) -> Result<Vec<Entry>> {
    with_setting!(setting, |c, r, d| identity_entries(id, c, r, d, config))
}

/// The fixture `check-identity` generates when no curve is given.
pub fn identity_fixture(id: &str, genus: usize, config: &RunConfig) -> Result<Setting> {
    let fx = match identity_model(id)? {
        Model::Even => even_rational(genus, config.seed, Leading::default())?,
        Model::Odd => odd_rational(genus, config.seed, Leading::default())?,
    };
    Setting::from_fixture(&fx, config.seed, config)
}

fn bridge_entries<K: Field + Render, A: Algebra<K> + Render>(
    curve: &Curve<K>,
    ring: &A,
    divisor: &SymDivisor<A>,
    a0: bool,
) -> Result<Vec<Entry>> {
    let f = curve.field();
    let run = |c: Curve<K>, d: &SymDivisor<A>, prefix: &str| -> Result<Vec<Entry>> {
        let br = Bridge::canonical(c, &f.one())?;
        let pt = BridgePoint::new(&br, ring, d)?;
        let mut out = vec![Entry::info(&format!("{prefix}bridge_params"), br.params_json(f))];
        let pullback: Vec<K::Elem> = (0..5)
            .flat_map(|k| br.pullback_defect(&f.from_i64(3 * k + 2)).unwrap_or_default())
            .collect();
        out.push(Entry {
            name: format!("{prefix}bridge_pullback"),
            passed: Verdict::from_defects(f, &pullback).passed(),
            detail: json!({"d_matrix": br.d_matrix().iter().map(|row| row.iter().map(|v| f.to_json(v)).collect::<Vec<_>>()).collect::<Vec<_>>()}),
        });
        out.extend(pt.check_all()?.into_iter().map(|r| Entry::from_identity(r).prefixed(prefix)));
        Ok(out)
    };
    let mut out = run(curve.clone(), divisor, "")?;
    if a0 || !f.is_zero(curve.require_branch_point()?) {
        let (c0, d0) = recenter(curve, ring, divisor)?;
        out.extend(run(c0, &d0, "a0 ")?);
    }
    Ok(out)
}

pub fn bridge_check(setting: &Setting, a0: bool) -> Result<Vec<Entry>> {
    with_setting!(setting, |c, r, d| bridge_entries(c, r, d, a0))
}

fn duality_entry<K: Field, A: Algebra<K> + Render>(curve: &Curve<K>, ring: &A, divisor: &SymDivisor<A>) -> Result<Entry> {
    let m = duality_matrix(curve, ring, divisor)?;
    let mut defects = Vec::new();
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { ring.one() } else { ring.zero() };
            defects.push(ring.sub(v, &target));
        }
    }
    let verdict = Verdict::from_defects(ring, &defects);
    Ok(Entry {
        name: format!("duality {:?}", curve.model()).to_lowercase(),
        passed: verdict.passed(),
        detail: json!({"verdict": verdict}),
    })
}

type Task<'a> = Box<dyn Fn() -> Result<Vec<Entry>> + Send + Sync + 'a>;

/// Every check that applies at genus `g` on the two fixtures.
fn suite_tasks<'a, K, A>(
    even: (&'a Curve<K>, &'a A, &'a SymDivisor<A>),
    odd: (&'a Curve<K>, &'a A, &'a SymDivisor<A>),
    config: &'a RunConfig,
) -> Vec<Task<'a>>
where
    K: Field + Render,
    A: Algebra<K> + Render,
{
    let g = even.0.genus();
    let order = config.jet_order;
    let mut tasks: Vec<Task<'a>> = Vec::new();
    for (c, r, d) in [even, odd] {
        tasks.push(Box::new(move || Ok(vec![duality_entry(c, r, d)?])));
        tasks.push(Box::new(move || {
            let ctx = Context::new(c, r, d).with_timing(config.timing);
            Ok(check_all(&ctx)?.into_iter().map(Entry::from_identity).collect())
        }));
        tasks.push(Box::new(move || identity_entries("suffix_symmetry", c, r, d, config)));
    }
    let (ec, er, ed) = even;
    let (oc, or, od) = odd;
    tasks.push(Box::new(move || identity_entries("quartic_baker", ec, er, ed, config)));
    tasks.push(Box::new(move || bridge_entries(ec, er, ed, true)));
    if g >= 3 {
        tasks.push(Box::new(move || {
            let sol = kp_solution(Variant::Psi, ec, Branch::Principal, false)?;
            Ok(vec![residual_entry("psi_kp1", ec, er, ed, &sol, order)?])
        }));
        tasks.push(Box::new(move || {
            let sol = kp_solution(Variant::Psi, ec, Branch::Principal, true)?;
            Ok(vec![residual_entry("psi_kp2_sqrt-1", ec, er, ed, &sol, order)?])
        }));
        tasks.push(Box::new(move || {
            let sol = kp_solution(Variant::Phi, oc, Branch::Principal, false)?;
            Ok(vec![residual_entry("phi_kp1", oc, or, od, &sol, order)?])
        }));
    }
    if g >= 2 {
        tasks.push(Box::new(move || {
            let sol = kp_solution(Variant::Upsilon, oc, Branch::Principal, false)?;
            Ok(vec![residual_entry("upsilon_kp1", oc, or, od, &sol, order)?])
        }));
    }
    tasks
}

fn run_tasks(tasks: Vec<Task<'_>>) -> Result<Vec<Entry>> {
    let results: Vec<Result<Vec<Entry>>> = tasks.par_iter().map(|t| t()).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Fixtures used by `suite`: an even curve with `ν₀ = −3` and an odd curve
/// with `λ_{4g+2} = −3` and, from genus 2, `λ₂ = 4`.
pub fn suite_fixtures(genus: usize, seed: u64) -> Result<(RationalFixture, RationalFixture)> {
    let even = even_rational(
        genus,
        seed,
        Leading {
            minus_three_square: Some(1),
            ..Default::default()
        },
    )?;
    let odd = odd_rational(
        genus,
        seed.wrapping_add(1),
        Leading {
            minus_three_square: Some(1),
            lambda2_square: (genus >= 2).then_some(2),
        },
    )?;
    Ok((even, odd))
}

pub fn suite(genus: usize, config: &RunConfig) -> Result<Vec<Entry>> {
    if genus == 0 {
        return Err(Error::Input("genus must be at least 1".into()));
    }
    let (even, odd) = suite_fixtures(genus, config.seed)?;
    let ed = even.divisor(&mut rng(config.seed))?;
    let od = odd.divisor(&mut rng(config.seed))?;
    match config.mode {
        Mode::Exact => {
            let f = GaussianField;
            run_tasks(suite_tasks((&even.curve, &f, &ed), (&odd.curve, &f, &od), config))
        }
        Mode::Numeric => {
            let cf = config.float_field()?;
            let convert = |c: &Curve<GaussianField>, d: &SymDivisor<GaussianField>| -> Result<_> {
                let nc = c.to_numeric(cf)?;
                let pts: Vec<_> = d.xs.iter().zip(&d.ys).map(|(x, y)| (cf.from_gaussian(x), cf.from_gaussian(y))).collect();
                let nd = field_divisor(&nc, &pts)?;
                Ok((nc, nd))
            };
            let (nec, ned) = convert(&even.curve, &ed)?;
            let (noc, nod) = convert(&odd.curve, &od)?;
            let mut tasks = suite_tasks((&nec, &cf, &ned), (&noc, &cf, &nod), config);
            let order = config.jet_order;
            if genus >= 2 {
                let (c, d) = (&noc, &nod);
                let cf = &cf;
                tasks.push(Box::new(move || {
                    let sol = kp_solution(Variant::Upsilon, c, Branch::Principal, false)?.xi8(cf);
                    Ok(vec![residual_entry("upsilon_kp2_xi8", c, cf, d, &sol, order)?])
                }));
            }
            if genus >= 3 {
                let (c, d) = (&nec, &ned);
                let cf = &cf;
                tasks.push(Box::new(move || {
                    let sol = kp_solution(Variant::Psi, c, Branch::Principal, false)?.xi8(cf);
                    Ok(vec![residual_entry("psi_kp2_xi8", c, cf, d, &sol, order)?])
                }));
            }
            run_tasks(tasks)
        }
    }
}

/// Constraint names accepted by `gen-fixture`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Constraint {
    RationalRoots,
    Nu0Neg3Square,
    LambdaTopNeg3Square,
    Lambda2Square,
    AZero,
}

/// A curve file and a divisor file satisfying the constraints.
pub fn gen_fixture(genus: usize, constraints: &[Constraint], seed: u64) -> Result<(CurveSpec, DivisorSpec)> {
    use Constraint::*;
    let has = |c| constraints.contains(&c);
    let odd = has(LambdaTopNeg3Square) || has(Lambda2Square);
    let even = has(RationalRoots) || has(Nu0Neg3Square) || has(AZero);
    if odd && even {
        return Err(Error::Precondition("even-model and odd-model constraints cannot be combined".into()));
    }
    let w = 1 + (seed % 3) as i64;
    let (curve, divisor) = if odd {
        let fx = odd_rational(
            genus,
            seed,
            Leading {
                minus_three_square: has(LambdaTopNeg3Square).then_some(w),
                lambda2_square: has(Lambda2Square).then_some(w + 1),
            },
        )?;
        let d = fx.divisor(&mut rng(seed))?;
        (fx.curve, divisor_spec(&d))
    } else if has(RationalRoots) {
        let c = even_split(genus, seed, has(Nu0Neg3Square).then_some(w))?;
        let mut r = rng(seed);
        let mut curve = c;
        if has(AZero) {
            let a = curve.require_branch_point()?.clone();
            curve = curve.shifted(&a)?.with_branch_point(GaussianRational::from_int(0))?;
        }
        let spec = etale_spec(&curve, &mut r)?;
        (curve, spec)
    } else {
        let fx = even_rational(
            genus,
            seed,
            Leading {
                minus_three_square: has(Nu0Neg3Square).then_some(w),
                ..Default::default()
            },
        )?;
        let d = fx.divisor(&mut rng(seed))?;
        if has(AZero) {
            let (c0, d0) = recenter(&fx.curve, &GaussianField, &d)?;
            (c0, divisor_spec(&d0))
        } else {
            (fx.curve, divisor_spec(&d))
        }
    };
    curve.validate()?;
    Ok((curve.to_spec(), divisor))
}

fn etale_spec(curve: &Curve<GaussianField>, r: &mut rand_chacha::ChaCha8Rng) -> Result<DivisorSpec> {
    use rand::Rng as _;
    let seed: u64 = r.gen();
    let (_, d) = crate::fixtures::etale_random(curve, seed)?;
    Ok(DivisorSpec {
        points: d
            .xs
            .iter()
            .zip(&d.signs)
            .map(|(x, &s)| PointSpec {
                x: x.as_base().expect("rational abscissa").clone(),
                y_sign: Some(s),
                y: None,
            })
            .collect(),
    })
}
