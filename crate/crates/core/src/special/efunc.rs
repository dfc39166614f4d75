//! The modified error function `E(t) = e^{-pi i t^2/x} erfc(omega t sqrt(pi/x))`
//! with `omega = e^{-pi i/4}`, and its large-argument expansion.

use rug::{Complex, Float};

use super::erfc::{erfcx_right, pochhammer_half, pow_half_integer};
use crate::error::{GaussError, Result};
use crate::precision::{ensure_finite, reduce_mod2, unit_phase, upper_f64, BoundedValue, PrecisionContext};

pub(crate) fn check_x(x: &Float) -> Result<()> {
    if !(x.is_finite() && *x > 0 && *x < 1) {
        return Err(GaussError::domain(format!(
            "x must satisfy 0 < x < 1, got {}",
            x.to_f64()
        )));
    }
    Ok(())
}

/// `E(t)` for any real `t`.
///
/// For `t >= 0` the argument of erfc lies on `arg z = -pi/4` where
/// `e^{-pi i t^2/x} = e^{z^2}`, so `E(t)` is exactly the scaled
/// `e^{z^2} erfc(z)`. Negative `t` (`arg z = 3pi/4`) uses
/// `erfc(z) = 2 - erfc(-z)`, i.e. `E(-t) = 2 e^{-pi i t^2/x} - E(t)`.
pub fn e_func(t: &Float, x: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    check_x(x)?;
    if !t.is_finite() {
        return Err(GaussError::domain("E: non-finite argument"));
    }
    let bits = ctx.bits();
    if t.is_zero() {
        return Ok(ctx.complex(1));
    }
    let abs_t = Float::with_val(bits, t.abs_ref());
    let scale = Float::with_val(bits, ctx.pi() / x).sqrt();
    let s = Float::with_val(bits, &abs_t * &scale);
    // omega * s = s (1 - i)/sqrt(2)
    let half_sqrt2 = Float::with_val(bits, Float::with_val(bits, 2u32).sqrt() / 2u32);
    let comp = Float::with_val(bits, &s * &half_sqrt2);
    let z = Complex::with_val(bits, (&comp, -comp.clone()));
    let e_pos = erfcx_right(&z, bits)?;
    let out = if t.is_sign_positive() {
        e_pos
    } else {
        let phase = quad_phase(&abs_t, x, bits);
        let p = unit_phase(&phase, bits);
        Complex::with_val(bits, p * 2u32 - e_pos)
    };
    ensure_finite(&out, "E")?;
    Ok(out)
}

/// `-t^2/x` reduced mod 2, computed with enough extra bits that the reduced
/// value keeps full working precision.
pub(crate) fn quad_phase(t: &Float, x: &Float, bits: u32) -> Float {
    let mag = Float::with_val(64, t.square_ref()) / x.to_f64();
    let extra = mag.to_f64().abs().max(1.0).log2().ceil() as u32 + 8;
    let wb = bits + extra;
    let tt = Float::with_val(wb, t);
    let v = Float::with_val(wb, tt.square_ref()) / Float::with_val(wb, x);
    let r = reduce_mod2(&Float::with_val(wb, -v));
    Float::with_val(bits, r)
}

/// First `n` terms of the large-`t` expansion of `E(t)` with the tail bound
/// `Gamma(n + 1/2)/pi * (x/(pi t^2))^{n + 1/2}`.
pub fn e_asym(t: &Float, x: &Float, n: u32, ctx: &PrecisionContext) -> Result<BoundedValue> {
    check_x(x)?;
    if !(t.is_finite() && *t > 0) {
        return Err(GaussError::domain(
            "E_asym requires t > 0; apply the reflection for negative arguments",
        ));
    }
    if n == 0 {
        return Err(GaussError::domain("E_asym requires n >= 1"));
    }
    let bits = ctx.bits();
    let pi = ctx.pi();
    let tt = Float::with_val(bits, t.square_ref());
    let q = Float::with_val(bits, x / Float::with_val(bits, &pi * &tt));
    let sqrt_pi = Float::with_val(bits, pi.sqrt_ref());
    // (i q)^{r + 1/2} = q^{r + 1/2} e^{i pi (2r + 1)/4}
    let mut sum = ctx.zero();
    for r in 0..n {
        let mag = pochhammer_half(r, bits) * pow_half_integer(&q, r);
        let signed = if r % 2 == 1 { -mag } else { mag };
        let rot = eighth_turns(2 * r + 1, bits);
        sum += Complex::with_val(bits, rot * signed);
    }
    let value = Complex::with_val(bits, sum / &sqrt_pi);
    // Gamma(n + 1/2) = (1/2)_n sqrt(pi)
    let bound = pochhammer_half(n, bits) * &sqrt_pi / &pi * pow_half_integer(&q, n);
    Ok(BoundedValue {
        value,
        bound: upper_f64(&bound),
    })
}

/// `e^{i pi k/4}`, exact for multiples of a quarter turn.
pub(crate) fn eighth_turns(k: u32, bits: u32) -> Complex {
    let h = Float::with_val(bits, 2u32).sqrt() / 2u32;
    let k = k % 8;
    let (re, im) = match k {
        0 => (Float::with_val(bits, 1), Float::new(bits)),
        1 => (h.clone(), h.clone()),
        2 => (Float::new(bits), Float::with_val(bits, 1)),
        3 => (-h.clone(), h.clone()),
        4 => (Float::with_val(bits, -1), Float::new(bits)),
        5 => (-h.clone(), -h.clone()),
        6 => (Float::new(bits), Float::with_val(bits, -1)),
        _ => (h.clone(), -h.clone()),
    };
    Complex::with_val(bits, (re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::abs_f64;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    #[test]
    fn e_at_zero_is_one() {
        let c = ctx(30);
        let v = e_func(&c.float(0), &c.float(0.01), &c).unwrap();
        assert_eq!(v, c.complex(1));
    }

    #[test]
    fn reflection_identity() {
        for d in [15, 30, 50] {
            let c = ctx(d);
            let x = c.float(0.01);
            let t = c.float(0.7);
            let a = e_func(&Float::with_val(c.bits(), -&t), &x, &c).unwrap();
            let b = e_func(&t, &x, &c).unwrap();
            let phase = quad_phase(&t, &x, c.bits());
            let want = Complex::with_val(c.bits(), unit_phase(&phase, c.bits()) * 2u32 - &b);
            let res = Complex::with_val(c.bits(), &a - &want);
            assert!(abs_f64(&res) < 10.0 * c.eps_f64(), "digits {d}");
        }
    }

    #[test]
    fn leading_term_example() {
        let c = ctx(30);
        let b = e_asym(&c.float(1), &c.float(0.01), 1, &c).unwrap();
        // e^{i pi/4} sqrt(0.01/pi)/sqrt(pi)
        let mag = (0.01f64 / std::f64::consts::PI).sqrt() / std::f64::consts::PI.sqrt();
        assert!((abs_f64(&b.value) - mag).abs() < 1e-15);
        assert!((mag - 0.031831).abs() < 1e-6);
        let re = b.value.real().to_f64();
        let im = b.value.imag().to_f64();
        assert!((re - im).abs() < 1e-15 && re > 0.0);
        assert!((b.bound - 5.066e-5).abs() < 1e-8, "{}", b.bound);
        let exact = e_func(&c.float(1), &c.float(0.01), &c).unwrap();
        let d = Complex::with_val(c.bits(), &exact - &b.value);
        assert!(abs_f64(&d) <= b.bound);
    }

    #[test]
    fn bound_decreases_in_t() {
        let c = ctx(20);
        let x = c.float(0.02);
        let mut last = f64::INFINITY;
        for k in 1..40 {
            let t = c.float(0.25 * f64::from(k));
            let b = e_asym(&t, &x, 4, &c).unwrap().bound;
            assert!(b < last);
            last = b;
        }
    }

    #[test]
    fn containment_sweep() {
        let c = ctx(30);
        let x = c.float(0.005);
        for theta in [-0.5, -0.3, -0.125, 0.0, 0.2, 0.45] {
            for k in 1..=50 {
                for sign in [-1.0, 1.0] {
                    let t = f64::from(k) + sign * theta;
                    let t = c.float(t);
                    let a = e_asym(&t, &x, 3, &c).unwrap();
                    let e = e_func(&t, &x, &c).unwrap();
                    let d = Complex::with_val(c.bits(), &e - &a.value);
                    assert!(abs_f64(&d) <= a.bound, "t = {}", t.to_f64());
                }
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = ctx(20);
        assert!(e_func(&c.float(1), &c.float(1.0), &c).is_err());
        assert!(e_func(&c.float(1), &c.float(0.0), &c).is_err());
        assert!(e_asym(&c.float(0), &c.float(0.1), 2, &c).is_err());
        assert!(e_asym(&c.float(-1), &c.float(0.1), 2, &c).is_err());
    }
}
