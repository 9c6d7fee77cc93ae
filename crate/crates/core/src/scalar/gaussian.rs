//! Exact Gaussian rationals `(re + i·im) / den` over big integers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use dashu_base::{BitTest, Gcd, SquareRoot, UnsignedAbs};
use dashu_int::{IBig, UBig};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Field, Ring, ScalarError};

/// An element of ℚ(i), kept over a common positive denominator with
/// `gcd(re, im, den) = 1`, so structural equality is exact equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: IBig,
    im: IBig,
    den: IBig,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational `{0}`")]
pub struct ParseRationalError(pub String);

fn gcd3(a: &IBig, b: &IBig, c: &IBig) -> IBig {
    let g: UBig = a.gcd(b);
    let g = if g.is_zero() {
        c.gcd(c)
    } else {
        IBig::from(g).gcd(c)
    };
    IBig::from(g)
}

impl GaussianRational {
    fn normalized(mut re: IBig, mut im: IBig, mut den: IBig) -> Self {
        assert!(den != IBig::ZERO, "zero denominator");
        if re == IBig::ZERO && im == IBig::ZERO {
            return Self::zero();
        }
        if den < IBig::ZERO {
            re = -re;
            im = -im;
            den = -den;
        }
        if den != IBig::ONE {
            let g = gcd3(&re, &im, &den);
            if g != IBig::ONE {
                re = &re / &g;
                im = &im / &g;
                den = &den / &g;
            }
        }
        GaussianRational { re, im, den }
    }

    pub fn zero() -> Self {
        GaussianRational {
            re: IBig::ZERO,
            im: IBig::ZERO,
            den: IBig::ONE,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussianRational {
            re: IBig::ZERO,
            im: IBig::ONE,
            den: IBig::ONE,
        }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational {
            re: IBig::from(n),
            im: IBig::ZERO,
            den: IBig::ONE,
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::normalized(IBig::from(num), IBig::ZERO, IBig::from(den))
    }

    pub fn from_parts(re: IBig, im: IBig, den: IBig) -> Self {
        Self::normalized(re, im, den)
    }

    /// `re_num/re_den + i·im_num/im_den`.
    pub fn from_components(re_num: IBig, re_den: IBig, im_num: IBig, im_den: IBig) -> Self {
        let den = &re_den * &im_den;
        Self::normalized(re_num * &im_den, im_num * &re_den, den)
    }

    pub fn is_zero(&self) -> bool {
        self.re == IBig::ZERO && self.im == IBig::ZERO
    }

    pub fn is_real(&self) -> bool {
        self.im == IBig::ZERO
    }

    /// Real part as a reduced `(num, den)` pair.
    pub fn re_parts(&self) -> (IBig, IBig) {
        reduce(&self.re, &self.den)
    }

    pub fn im_parts(&self) -> (IBig, IBig) {
        reduce(&self.im, &self.den)
    }

    pub fn re(&self) -> Self {
        Self::normalized(self.re.clone(), IBig::ZERO, self.den.clone())
    }

    pub fn im(&self) -> Self {
        Self::normalized(self.im.clone(), IBig::ZERO, self.den.clone())
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
            den: self.den.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::normalized(&self.re + &o.re, &self.im + &o.im, self.den.clone());
        }
        let re = &self.re * &o.den + &o.re * &self.den;
        let im = if self.im == IBig::ZERO && o.im == IBig::ZERO {
            IBig::ZERO
        } else {
            &self.im * &o.den + &o.im * &self.den
        };
        Self::normalized(re, im, &self.den * &o.den)
    }

    pub fn neg(&self) -> Self {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let den = &self.den * &o.den;
        if self.im == IBig::ZERO && o.im == IBig::ZERO {
            return Self::normalized(&self.re * &o.re, IBig::ZERO, den);
        }
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        Self::normalized(re, im, den)
    }

    pub fn mul_int(&self, n: i64) -> Self {
        let n = IBig::from(n);
        Self::normalized(&self.re * &n, &self.im * &n, self.den.clone())
    }

    /// `|z|²` as a rational (imaginary part zero).
    pub fn norm(&self) -> Self {
        Self::normalized(
            &self.re * &self.re + &self.im * &self.im,
            IBig::ZERO,
            &self.den * &self.den,
        )
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Self::normalized(
            &self.re * &self.den,
            -(&self.im * &self.den),
            n,
        ))
    }

    pub fn pow(&self, e: u32) -> Self {
        GaussianField.pow(self, e)
    }

    /// Principal square root when it lies in ℚ(i).
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        // (p + iq)^2 = a + ib with r = |a + ib|: p^2 = (a + r)/2, q^2 = (r - a)/2.
        let r = self.norm().rational_sqrt()?;
        let a = self.re();
        let half = Self::from_ratio(1, 2);
        let p2 = a.add(&r).mul(&half);
        let q2 = r.sub(&a).mul(&half);
        let p = p2.rational_sqrt()?;
        let q = q2.rational_sqrt()?;
        // choose signs: q carries the sign of Im, principal branch has p >= 0
        let q = if self.im < IBig::ZERO { q.neg() } else { q };
        let root = p.add(&q.mul(&Self::i()));
        debug_assert_eq!(root.mul(&root), *self);
        Some(root)
    }

    /// Nonnegative square root of a nonnegative rational.
    fn rational_sqrt(&self) -> Option<Self> {
        if !self.is_real() || self.re < IBig::ZERO {
            return None;
        }
        let (n, d) = self.re_parts();
        let sn = int_sqrt(&n)?;
        let sd = int_sqrt(&d)?;
        Some(Self::normalized(sn, IBig::ZERO, sd))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (ratio_to_f64(&self.re, &self.den), ratio_to_f64(&self.im, &self.den))
    }

    pub fn abs_f64(&self) -> f64 {
        let (a, b) = self.to_f64_pair();
        a.hypot(b)
    }

    /// Sign of a real element; `None` when the imaginary part is nonzero.
    pub fn real_sign(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        Some(self.re.cmp(&IBig::ZERO))
    }

    pub fn raw_parts(&self) -> (&IBig, &IBig, &IBig) {
        (&self.re, &self.im, &self.den)
    }
}

fn reduce(n: &IBig, d: &IBig) -> (IBig, IBig) {
    if *n == IBig::ZERO {
        return (IBig::ZERO, IBig::ONE);
    }
    let g = IBig::from(n.gcd(d));
    (n / &g, d / &g)
}

fn int_sqrt(n: &IBig) -> Option<IBig> {
    if *n < IBig::ZERO {
        return None;
    }
    let u = UBig::try_from(n.clone()).ok()?;
    let s = u.sqrt();
    if &s * &s == u {
        Some(IBig::from(s))
    } else {
        None
    }
}

fn ratio_to_f64(n: &IBig, d: &IBig) -> f64 {
    if *n == IBig::ZERO {
        return 0.0;
    }
    // shift both to ~60 significant bits before converting
    let nb = n.unsigned_abs().bit_len() as i64;
    let db = d.unsigned_abs().bit_len() as i64;
    let sn = (nb - 60).max(0) as usize;
    let sd = (db - 60).max(0) as usize;
    let nf = (n >> sn).to_f64().value();
    let df = (d >> sd).to_f64().value();
    nf / df * 2f64.powi((sn as i64 - sd as i64) as i32)
}

fn fmt_ratio(n: &IBig, d: &IBig) -> String {
    let (n, d) = reduce(n, d);
    if d == IBig::ONE {
        format!("{n}")
    } else {
        format!("{n}/{d}")
    }
}

impl GaussianRational {
    pub fn re_string(&self) -> String {
        fmt_ratio(&self.re, &self.den)
    }

    pub fn im_string(&self) -> String {
        fmt_ratio(&self.im, &self.den)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re_string())
        } else if self.re == IBig::ZERO {
            write!(f, "({})i", self.im_string())
        } else {
            write!(f, "{} + ({})i", self.re_string(), self.im_string())
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `p`, `p/q`, optionally signed.
pub fn parse_rational(s: &str) -> Result<(IBig, IBig), ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = IBig::from_str(n).map_err(|_| err())?;
    let d = IBig::from_str(d).map_err(|_| err())?;
    if d == IBig::ZERO {
        return Err(err());
    }
    Ok(reduce(&n, &d))
}

impl FromStr for GaussianRational {
    type Err = ParseRationalError;

    /// Accepts a plain rational `p/q` (real).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = parse_rational(s)?;
        Ok(Self::normalized(n, IBig::ZERO, d))
    }
}

#[derive(Serialize, Deserialize)]
struct GaussianJson {
    re: String,
    #[serde(default = "zero_string")]
    im: String,
}

fn zero_string() -> String {
    "0".into()
}

impl Serialize for GaussianRational {
    /// Real values as a bare `"p/q"` string, others as `{"re", "im"}`.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.im_string() == "0" {
            return s.serialize_str(&self.re_string());
        }
        GaussianJson {
            re: self.re_string(),
            im: self.im_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    /// Accepts `{"re":"p/q","im":"p/q"}`, a bare string `"p/q"`, or an integer.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Obj(GaussianJson),
            Str(String),
            Int(i64),
        }
        let bad = |e: ParseRationalError| serde::de::Error::custom(e.to_string());
        match Repr::deserialize(d)? {
            Repr::Obj(g) => {
                let (rn, rd) = parse_rational(&g.re).map_err(bad)?;
                let (in_, id) = parse_rational(&g.im).map_err(bad)?;
                Ok(Self::from_components(rn, rd, in_, id))
            }
            Repr::Str(s) => s.parse().map_err(bad),
            Repr::Int(n) => Ok(Self::from_int(n)),
        }
    }
}

/// The field ℚ(i).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GaussianField;

impl Ring for GaussianField {
    type Elem = GaussianRational;

    fn zero(&self) -> GaussianRational {
        GaussianRational::zero()
    }
    fn one(&self) -> GaussianRational {
        GaussianRational::one()
    }
    fn from_i64(&self, n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }
    fn add(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a.add(b)
    }
    fn sub(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a.sub(b)
    }
    fn mul(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a.mul(b)
    }
    fn neg(&self, a: &GaussianRational) -> GaussianRational {
        a.neg()
    }
    fn is_zero(&self, a: &GaussianRational) -> bool {
        a.is_zero()
    }
    fn try_inv(&self, a: &GaussianRational) -> Result<GaussianRational, ScalarError> {
        a.inv()
            .ok_or_else(|| ScalarError::Singular("division by zero in Q(i)".into()))
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn magnitude(&self, a: &GaussianRational) -> f64 {
        a.abs_f64()
    }
    fn mul_i64(&self, a: &GaussianRational, n: i64) -> GaussianRational {
        a.mul_int(n)
    }
}

impl Field for GaussianField {
    fn from_gaussian(&self, q: &GaussianRational) -> GaussianRational {
        q.clone()
    }
    fn sqrt(&self, a: &GaussianRational) -> Option<GaussianRational> {
        a.sqrt_exact()
    }
    fn render(&self, a: &GaussianRational) -> String {
        a.to_string()
    }
}

impl super::Algebra<GaussianField> for GaussianField {
    fn embed(&self, c: &GaussianRational) -> GaussianRational {
        c.clone()
    }
}

impl super::Render for GaussianField {
    fn to_json(&self, a: &GaussianRational) -> serde_json::Value {
        serde_json::to_value(a).expect("gaussian rational serializes")
    }
}
