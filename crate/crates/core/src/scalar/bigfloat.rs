//! Complex numbers over binary floats of fixed working precision.

use dashu_base::{Abs, SquareRoot};
use dashu_float::{round::mode::HalfEven, FBig};
use dashu_int::IBig;

use super::{Algebra, Field, GaussianRational, Render, Ring, ScalarError};

pub const DEFAULT_PRECISION: usize = 256;
pub const MIN_PRECISION: usize = 128;

type Float = FBig<HalfEven, 2>;

#[derive(Clone, PartialEq)]
pub struct BigFloatComplex {
    pub re: Float,
    pub im: Float,
}

impl std::fmt::Debug for BigFloatComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {}i", to_decimal_string(&self.re), to_decimal_string(&self.im))
    }
}

impl BigFloatComplex {
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().value(), self.im.to_f64().value())
    }
}

fn to_decimal_string(x: &Float) -> String {
    let d = x.to_decimal().value();
    format!("{d}")
}

/// ℂ at a fixed binary precision; every operation rounds to `precision` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexFloatField {
    precision: usize,
}

impl Default for ComplexFloatField {
    fn default() -> Self {
        ComplexFloatField {
            precision: DEFAULT_PRECISION,
        }
    }
}

impl ComplexFloatField {
    pub fn new(precision: usize) -> Result<Self, ScalarError> {
        if precision < MIN_PRECISION {
            return Err(ScalarError::ParameterMismatch(format!(
                "precision {precision} below the minimum of {MIN_PRECISION} bits"
            )));
        }
        Ok(ComplexFloatField { precision })
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    fn round(&self, x: Float) -> Float {
        x.with_precision(self.precision).value()
    }

    fn int(&self, n: IBig) -> Float {
        self.round(Float::from(n))
    }

    fn real(&self, x: Float) -> BigFloatComplex {
        BigFloatComplex {
            re: x,
            im: self.int(IBig::ZERO),
        }
    }

    fn ratio(&self, n: &IBig, d: &IBig) -> Float {
        if *d == IBig::ONE {
            return self.int(n.clone());
        }
        self.int(n.clone()) / self.int(d.clone())
    }

    pub fn from_f64(&self, re: f64, im: f64) -> BigFloatComplex {
        let conv = |v: f64| self.round(Float::try_from(v).expect("finite float"));
        BigFloatComplex {
            re: conv(re),
            im: conv(im),
        }
    }

    pub fn i(&self) -> BigFloatComplex {
        BigFloatComplex {
            re: self.int(IBig::ZERO),
            im: self.int(IBig::ONE),
        }
    }

    pub fn conj(&self, a: &BigFloatComplex) -> BigFloatComplex {
        BigFloatComplex {
            re: a.re.clone(),
            im: -a.im.clone(),
        }
    }

    pub fn abs(&self, a: &BigFloatComplex) -> Float {
        (&a.re * &a.re + &a.im * &a.im).sqrt()
    }
}

impl Ring for ComplexFloatField {
    type Elem = BigFloatComplex;

    fn zero(&self) -> BigFloatComplex {
        self.from_i64(0)
    }
    fn one(&self) -> BigFloatComplex {
        self.from_i64(1)
    }
    fn from_i64(&self, n: i64) -> BigFloatComplex {
        self.real(self.int(IBig::from(n)))
    }
    fn add(&self, a: &BigFloatComplex, b: &BigFloatComplex) -> BigFloatComplex {
        BigFloatComplex {
            re: &a.re + &b.re,
            im: &a.im + &b.im,
        }
    }
    fn sub(&self, a: &BigFloatComplex, b: &BigFloatComplex) -> BigFloatComplex {
        BigFloatComplex {
            re: &a.re - &b.re,
            im: &a.im - &b.im,
        }
    }
    fn mul(&self, a: &BigFloatComplex, b: &BigFloatComplex) -> BigFloatComplex {
        BigFloatComplex {
            re: &a.re * &b.re - &a.im * &b.im,
            im: &a.re * &b.im + &a.im * &b.re,
        }
    }
    fn neg(&self, a: &BigFloatComplex) -> BigFloatComplex {
        BigFloatComplex {
            re: -a.re.clone(),
            im: -a.im.clone(),
        }
    }
    fn is_zero(&self, a: &BigFloatComplex) -> bool {
        a.re.repr().is_zero() && a.im.repr().is_zero()
    }
    fn try_inv(&self, a: &BigFloatComplex) -> Result<BigFloatComplex, ScalarError> {
        if self.is_zero(a) {
            return Err(ScalarError::Singular("division by zero in complex floats".into()));
        }
        let n = &a.re * &a.re + &a.im * &a.im;
        Ok(BigFloatComplex {
            re: &a.re / &n,
            im: -(&a.im / &n),
        })
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn magnitude(&self, a: &BigFloatComplex) -> f64 {
        let re = a.re.clone().abs().to_f64().value();
        let im = a.im.clone().abs().to_f64().value();
        re.max(im)
    }
}

impl Field for ComplexFloatField {
    fn from_gaussian(&self, q: &GaussianRational) -> BigFloatComplex {
        let (rn, rd) = q.re_parts();
        let (in_, id) = q.im_parts();
        BigFloatComplex {
            re: self.ratio(&rn, &rd),
            im: self.ratio(&in_, &id),
        }
    }

    /// Principal branch: real part ≥ 0, imaginary part sign of `Im a` on the
    /// cut.
    fn sqrt(&self, a: &BigFloatComplex) -> Option<BigFloatComplex> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        let r = self.abs(a);
        let two = self.int(IBig::from(2));
        let p = ((&r + &a.re) / &two).sqrt();
        let mut q = ((&r - &a.re) / &two).sqrt();
        if a.im.repr().sign() == dashu_base::Sign::Negative {
            q = -q;
        }
        Some(BigFloatComplex { re: p, im: q })
    }

    fn render(&self, a: &BigFloatComplex) -> String {
        format!("{a:?}")
    }
}

impl Algebra<ComplexFloatField> for ComplexFloatField {
    fn embed(&self, c: &BigFloatComplex) -> BigFloatComplex {
        c.clone()
    }
}

impl Render for ComplexFloatField {
    fn to_json(&self, a: &BigFloatComplex) -> serde_json::Value {
        serde_json::json!({
            "re": to_decimal_string(&a.re),
            "im": to_decimal_string(&a.im),
        })
    }
}
