//! Working precision and the numeric carrier types shared by every module.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{GaussError, Result};

/// Complex number carried at context precision.
pub type ComplexValue = Complex;

/// Extra binary digits carried beyond the requested decimal precision.
pub const GUARD_BITS: u32 = 24;

/// Smallest precision accepted by [`PrecisionContext::new`].
pub const MIN_DIGITS: u32 = 15;

/// Largest precision accepted; beyond this the internal Bernoulli tables and
/// continued-fraction caps are not sized for the work.
pub const MAX_DIGITS: u32 = 500;

/// Working precision in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        if !(MIN_DIGITS..=MAX_DIGITS).contains(&digits) {
            return Err(GaussError::domain(format!(
                "digits must lie in [{MIN_DIGITS}, {MAX_DIGITS}], got {digits}"
            )));
        }
        Ok(PrecisionContext { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Binary precision of every intermediate `Float`.
    pub fn bits(&self) -> u32 {
        (f64::from(self.digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// Unit roundoff proxy `10^(1 - digits)`.
    pub fn eps(&self) -> Float {
        let ten = Float::with_val(self.bits(), 10);
        ten.pow(1 - self.digits as i32)
    }

    pub fn eps_f64(&self) -> f64 {
        10f64.powi(1 - self.digits as i32)
    }

    pub fn float<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        let mut f = Float::new(self.bits());
        rug::Assign::assign(&mut f, v);
        f
    }

    pub fn zero(&self) -> Complex {
        Complex::new(self.bits())
    }

    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        let mut c = Complex::new(self.bits());
        rug::Assign::assign(&mut c, v);
        c
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), rug::float::Constant::Pi)
    }

}

/// A value together with a rigorous absolute-error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedValue {
    pub value: ComplexValue,
    pub bound: f64,
}

/// Converts to `f64` rounding away from zero, so bounds stay upper bounds.
pub fn upper_f64(v: &Float) -> f64 {
    v.to_f64_round(Round::Up)
}

pub(crate) fn ensure_finite(z: &Complex, what: &str) -> Result<()> {
    if z.real().is_finite() && z.imag().is_finite() {
        Ok(())
    } else {
        Err(GaussError::precision(format!("{what} produced a non-finite value")))
    }
}

/// `|z|` as `f64`, for tolerance checks.
pub fn abs_f64(z: &Complex) -> f64 {
    Float::with_val(z.prec().0, z.abs_ref()).to_f64()
}

/// `e^{i pi phase}` with `phase` already reduced to a small range.
pub(crate) fn unit_phase(phase: &Float, bits: u32) -> Complex {
    let c = Float::with_val(bits, phase.cos_pi_ref());
    let s = Float::with_val(bits, phase.sin_pi_ref());
    Complex::with_val(bits, (c, s))
}

/// Reduces `phase` modulo 2 into `(-1, 1]`.
pub(crate) fn reduce_mod2(phase: &Float) -> Float {
    let two = 2u32;
    let mut r = Float::with_val(phase.prec(), phase / two);
    r = Float::with_val(phase.prec(), phase - Float::with_val(phase.prec(), r.round_even_ref()) * two);
    if r <= -1 {
        r += 2;
    }
    r
}
