//! Complementary error function of complex argument.
//!
//! Three regimes are used for `Re z >= 0`:
//! * the Maclaurin series of `erf` for `|z| <= SERIES_RADIUS`, carried with
//!   enough guard bits to absorb the `e^{|z|^2}` cancellation;
//! * the Laplace continued fraction for `e^{z^2} erfc(z)` beyond that radius;
//! * the asymptotic series at optimal truncation when the continued fraction
//!   stalls (directions close to the imaginary axis) and `|z|` is large.
//!
//! `Re z < 0` goes through `erfc(z) = 2 - erfc(-z)`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{GaussError, Result};
use crate::precision::{ensure_finite, PrecisionContext};

/// Radius below which the Maclaurin series is used.
pub const SERIES_RADIUS: f64 = 4.0;

/// Continued-fraction depth cap; exceeding it is reported, never truncated.
pub const MAX_CF_DEPTH: usize = 200_000;

/// Largest `|z|` at which the Maclaurin series is still attempted as a
/// fallback; the guard bits grow like `|z|^2`.
const MAX_SERIES_FALLBACK_RADIUS: f64 = 60.0;

/// `erfc(z)` to roughly `eps` relative accuracy.
pub fn erfc_complex(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if !(z.real().is_finite() && z.imag().is_finite()) {
        return Err(GaussError::domain("erfc: non-finite argument"));
    }
    let bits = ctx.bits();
    let out = if z.real().is_sign_negative() && !z.real().is_zero() {
        let minus = Complex::with_val(bits, -z);
        let r = erfc_right(&minus, bits)?;
        Complex::with_val(bits, 2 - r)
    } else {
        erfc_right(z, bits)?
    };
    ensure_finite(&out, "erfc")?;
    Ok(out)
}

/// `e^{z^2} erfc(z)` for `Re z >= 0`.
///
/// On the ray `arg z = -pi/4` the factor `e^{z^2}` has modulus one, which is
/// how the modified error function `E(t)` is built.
pub fn erfcx_right(z: &Complex, bits: u32) -> Result<Complex> {
    debug_assert!(!z.real().is_sign_negative() || z.real().is_zero());
    let r = abs(z);
    if r <= SERIES_RADIUS {
        let erfc = series_erfc(z, bits);
        let z2 = Complex::with_val(bits, z.square_ref());
        return Ok(Complex::with_val(bits, erfc * z2.exp()));
    }
    match continued_fraction(z, bits) {
        Some(v) => Ok(v),
        None => {
            if let Some(v) = asymptotic_scaled(z, bits) {
                return Ok(v);
            }
            if r <= MAX_SERIES_FALLBACK_RADIUS {
                let erfc = series_erfc(z, bits);
                let z2 = Complex::with_val(bits, z.square_ref());
                return Ok(Complex::with_val(bits, erfc * z2.exp()));
            }
            Err(GaussError::precision(format!(
                "erfc: no branch converges at |z| = {r:.3e} within depth {MAX_CF_DEPTH}"
            )))
        }
    }
}

fn erfc_right(z: &Complex, bits: u32) -> Result<Complex> {
    if abs(z) <= SERIES_RADIUS {
        return Ok(series_erfc(z, bits));
    }
    let scaled = erfcx_right(z, bits)?;
    let z2 = Complex::with_val(bits, z.square_ref());
    let damp = Complex::with_val(bits, -z2).exp();
    Ok(Complex::with_val(bits, scaled * damp))
}

fn abs(z: &Complex) -> f64 {
    Float::with_val(64, z.abs_ref()).to_f64()
}

/// `1 - erf(z)` by the Maclaurin series of `erf`.
fn series_erfc(z: &Complex, bits: u32) -> Complex {
    let r = abs(z);
    let z2 = Complex::with_val(53, z.square_ref());
    let re_z2 = z2.real().to_f64();
    // terms peak near e^{|z|^2}; the final 1 - erf loses e^{Re z^2} more
    let guard = (r * r * std::f64::consts::LOG2_E).ceil() as u32
        + (re_z2.max(0.0) * std::f64::consts::LOG2_E).ceil() as u32
        + 16;
    let wb = bits + guard;
    let z = Complex::with_val(wb, z);
    let neg_z2 = Complex::with_val(wb, -Complex::with_val(wb, z.square_ref()));
    let mut term = z.clone();
    let mut sum = z.clone();
    let tiny = Float::with_val(wb, 1u32) >> (bits + 8);
    let mut k: u32 = 0;
    loop {
        k += 1;
        term *= &neg_z2;
        term /= k;
        let contrib = Complex::with_val(wb, &term / (2 * k + 1));
        sum += &contrib;
        if f64::from(k) > r * r {
            let mag = Float::with_val(wb, contrib.abs_ref());
            if mag < tiny {
                break;
            }
        }
    }
    let two_over_sqrt_pi = two_over_sqrt_pi(wb);
    let erf = Complex::with_val(wb, sum * two_over_sqrt_pi);
    Complex::with_val(bits, 1 - erf)
}

fn two_over_sqrt_pi(bits: u32) -> Float {
    let pi = Float::with_val(bits, Constant::Pi);
    Float::with_val(bits, 2u32) / pi.sqrt()
}

/// `e^{z^2} erfc(z) = (1/sqrt(pi)) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))`
/// evaluated by the modified Lentz recurrence until successive convergents
/// agree to the working precision.
fn continued_fraction(z: &Complex, bits: u32) -> Option<Complex> {
    let wb = bits + 16;
    let z = Complex::with_val(wb, z);
    let tol = Float::with_val(wb, 1u32) >> (bits + 2);
    let tiny = Float::with_val(wb, 1u32) >> (wb * 2);
    let mut f = z.clone();
    let mut c = f.clone();
    let mut d = Complex::new(wb);
    for k in 1..=MAX_CF_DEPTH {
        let a = Float::with_val(wb, k as u32) / 2u32;
        d *= &a;
        d += &z;
        if Float::with_val(wb, d.abs_ref()) < tiny {
            d = Complex::with_val(wb, (&tiny, 0));
        }
        d.recip_mut();
        c.recip_mut();
        c *= &a;
        c += &z;
        if Float::with_val(wb, c.abs_ref()) < tiny {
            c = Complex::with_val(wb, (&tiny, 0));
        }
        let delta = Complex::with_val(wb, &c * &d);
        f *= &delta;
        let change = Float::with_val(wb, Complex::with_val(wb, &delta - 1u32).abs_ref());
        if change < tol {
            let sqrt_pi = Float::with_val(wb, Constant::Pi).sqrt();
            let v = Complex::with_val(wb, f * sqrt_pi).recip();
            return Some(Complex::with_val(bits, v));
        }
    }
    None
}

/// Asymptotic series of `e^{z^2} erfc(z)` truncated at its smallest term,
/// accepted only when that term is below the working precision.
fn asymptotic_scaled(z: &Complex, bits: u32) -> Option<Complex> {
    let wb = bits + 16;
    let z = Complex::with_val(wb, z);
    let inv2 = Complex::with_val(wb, Complex::with_val(wb, z.square_ref()).recip());
    let tol = Float::with_val(wb, 1u32) >> (bits + 4);
    let mut term = Complex::with_val(wb, 1u32);
    let mut sum = term.clone();
    let mut prev = Float::with_val(wb, 1u32);
    let mut r: u32 = 0;
    loop {
        r += 1;
        term *= &inv2;
        term *= -(f64::from(r) - 0.5);
        let mag = Float::with_val(wb, term.abs_ref());
        if mag > prev {
            return None;
        }
        sum += &term;
        if mag < tol {
            break;
        }
        prev = mag;
    }
    let sqrt_pi = Float::with_val(wb, Constant::Pi).sqrt();
    let lead = Complex::with_val(wb, &z * sqrt_pi).recip();
    Some(Complex::with_val(bits, lead * sum))
}

/// `(1/2)_n = (1/2)(3/2)...(n - 1/2)`.
pub fn pochhammer_half(n: u32, bits: u32) -> Float {
    let mut p = Float::with_val(bits, 1u32);
    for k in 0..n {
        p *= Float::with_val(bits, 2 * k + 1) / 2u32;
    }
    p
}

/// `x^{k + 1/2}` for `x > 0`.
pub(crate) fn pow_half_integer(x: &Float, k: u32) -> Float {
    let bits = x.prec();
    let p = Float::with_val(bits, x.pow(k));
    p * Float::with_val(bits, x.sqrt_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    fn on_ray(r: f64, arg_quarter_turns: f64, bits: u32) -> Complex {
        let pi = Float::with_val(bits, Constant::Pi);
        let a = Float::with_val(bits, &pi * arg_quarter_turns) / 4u32;
        let c = Complex::with_val(bits, (a.clone().cos(), a.sin()));
        c * Float::with_val(bits, r)
    }

    #[test]
    fn erfc_zero_is_one() {
        let c = ctx(30);
        let v = erfc_complex(&c.zero(), &c).unwrap();
        assert_eq!(v, Complex::with_val(c.bits(), 1));
    }

    #[test]
    fn reflection_on_rays() {
        for d in [15, 30, 50] {
            let c = ctx(d);
            let z = on_ray(3.0, -1.0, c.bits());
            let a = erfc_complex(&z, &c).unwrap();
            let b = erfc_complex(&Complex::with_val(c.bits(), -&z), &c).unwrap();
            let res = Complex::with_val(c.bits(), a + b) - 2u32;
            assert!(abs(&res) < 10.0 * c.eps_f64());
        }
    }

    #[test]
    fn real_axis_known_values() {
        let c = ctx(30);
        // erfc(1) = 0.157299207050285130658779364917390740703933002034...
        let v = erfc_complex(&c.complex(1), &c).unwrap();
        let want = Float::with_val(
            c.bits(),
            Float::parse("0.157299207050285130658779364917390740703933002034").unwrap(),
        );
        let err = Float::with_val(c.bits(), v.real() - &want).abs().to_f64();
        assert!(err < 1e-29, "{err}");
        // erfc(5) = 1.5374597944280348501883434853833788901180503147e-12
        let v = erfc_complex(&c.complex(5), &c).unwrap();
        let want = 1.537_459_794_428_035e-12;
        assert!((v.real().to_f64() / want - 1.0).abs() < 1e-15);
    }

    #[test]
    fn branches_agree_at_seam() {
        // both sides of the series radius along the working ray
        let c = ctx(50);
        let bits = c.bits();
        for r in [3.999, 4.0, 4.001, 4.5, 6.0] {
            let z = on_ray(r, -1.0, bits);
            let s = series_erfc(&z, bits);
            let z2 = Complex::with_val(bits, z.square_ref());
            let cf = continued_fraction(&z, bits).unwrap();
            let cf = cf * Complex::with_val(bits, -z2).exp();
            let d = Complex::with_val(bits, &s - &cf);
            assert!(abs(&d) <= 10.0 * c.eps_f64() * abs(&s), "r = {r}");
        }
    }

    #[test]
    fn imaginary_axis_large_argument() {
        // erfc(iy) = 1 - i erfi(y); relative check against the asymptotic form
        let c = ctx(30);
        let z = Complex::with_val(c.bits(), (0, 40));
        let v = erfc_complex(&z, &c).unwrap();
        assert!(v.real().is_finite() && v.imag().is_finite());
        let minus = erfc_complex(&Complex::with_val(c.bits(), (0, -40)), &c).unwrap();
        let res = Complex::with_val(c.bits(), &v + &minus) - 2u32;
        assert!(abs(&res) <= 10.0 * c.eps_f64() * abs(&v));
    }

    #[test]
    fn rejects_non_finite() {
        let c = ctx(20);
        let z = Complex::with_val(c.bits(), (f64::NAN, 0.0));
        assert!(matches!(erfc_complex(&z, &c), Err(GaussError::Domain(_))));
    }

    #[test]
    fn pochhammer_half_values() {
        assert_eq!(pochhammer_half(0, 64).to_f64(), 1.0);
        assert_eq!(pochhammer_half(1, 64).to_f64(), 0.5);
        assert_eq!(pochhammer_half(3, 64).to_f64(), 0.5 * 1.5 * 2.5);
    }
}
