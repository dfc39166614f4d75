//! Helpers shared by the integration tests: an independent tanh-sinh
//! quadrature oracle and small conveniences.

#![allow(dead_code)]

use qgauss::gauss::GaussParams;
use qgauss::precision::abs_f64;
use qgauss::PrecisionContext;
use rug::float::Constant;
use rug::{Complex, Float};

pub fn ctx(digits: u32) -> PrecisionContext {
    PrecisionContext::new(digits).unwrap()
}

pub fn dist(a: &Complex, b: &Complex) -> f64 {
    let bits = a.prec().0.max(b.prec().0);
    abs_f64(&Complex::with_val(bits, a - b))
}

pub fn params(x: f64, theta: f64, n: u64, c: &PrecisionContext) -> GaussParams {
    GaussParams::from_f64(x, theta, n, c).unwrap()
}

/// Tanh-sinh quadrature of a complex integrand over `[a, b]`, refining the
/// step until two levels agree to `tol` (absolute).
pub fn tanh_sinh<F>(f: F, a: &Float, b: &Float, bits: u32, tol: f64) -> Complex
where
    F: Fn(&Float) -> Complex,
{
    let pi = Float::with_val(bits, Constant::Pi);
    let half_pi = Float::with_val(bits, &pi / 2u32);
    let mid = Float::with_val(bits, a + b) / 2u32;
    let rad = Float::with_val(bits, b - a) / 2u32;
    let t_max = 6.0;

    // contribution of the node at parameter t (both signs for t > 0)
    let node = |t: &Float| -> Complex {
        let sh = Float::with_val(bits, t.sinh_ref());
        let u = Float::with_val(bits, &half_pi * &sh);
        let ch_u = Float::with_val(bits, u.cosh_ref());
        let w = Float::with_val(bits, &half_pi * Float::with_val(bits, t.cosh_ref()))
            / Float::with_val(bits, ch_u.square_ref());
        let y = Float::with_val(bits, u.tanh_ref());
        let off = Float::with_val(bits, &rad * &y);
        let xp = Float::with_val(bits, &mid + &off);
        let xm = Float::with_val(bits, &mid - &off);
        let mut s = f(&xp);
        if !t.is_zero() {
            s += f(&xm);
        }
        s * w
    };

    let mut h = Float::with_val(bits, 0.5);
    let mut sum = node(&Float::new(bits));
    let mut k = 1u32;
    loop {
        let t = Float::with_val(bits, &h * k);
        if t.to_f64() > t_max {
            break;
        }
        sum += node(&t);
        k += 1;
    }
    let mut prev = Complex::with_val(bits, &sum * &h) * &rad;
    for _level in 0..14 {
        h /= 2u32;
        // only the new (odd) nodes
        let mut k = 1u32;
        loop {
            let t = Float::with_val(bits, &h * k);
            if t.to_f64() > t_max {
                break;
            }
            sum += node(&t);
            k += 2;
        }
        let cur = Complex::with_val(bits, &sum * &h) * &rad;
        let d = dist(&cur, &prev);
        prev = cur;
        if d < tol {
            break;
        }
    }
    prev
}

/// `erfc(z) = (2/sqrt pi) int_0^inf e^{-(z+s)^2} ds` along the horizontal
/// path, valid for `Re z > 0`.
pub fn erfc_by_quadrature(z: &Complex, bits: u32, tol: f64) -> Complex {
    let wb = bits + 32;
    let z = Complex::with_val(wb, z);
    let re = z.real().to_f64();
    // e^{-s^2 - 2 s Re z} is negligible past this point
    let s_max = ((bits as f64) * 0.7).sqrt().ceil() + 2.0 - re.min(0.0);
    let mut total = Complex::new(wb);
    let mut lo = 0.0;
    while lo < s_max {
        let a = Float::with_val(wb, lo);
        let b = Float::with_val(wb, lo + 1.0);
        total += tanh_sinh(
            |s| {
                let w = Complex::with_val(wb, &z + s);
                let w2 = Complex::with_val(wb, w.square_ref());
                (-w2).exp()
            },
            &a,
            &b,
            wb,
            tol / 100.0,
        );
        lo += 1.0;
    }
    let pi = Float::with_val(wb, Constant::Pi);
    let c = Float::with_val(wb, pi.sqrt_ref()).recip() * 2u32;
    Complex::with_val(bits, total * c)
}

/// `int_0^N e^{pi i (x t^2 + 2 theta t)} dt` by quadrature over unit pieces.
pub fn jn_by_quadrature(x: &Float, theta: &Float, n: u64, bits: u32, tol: f64) -> Complex {
    let wb = bits + 32;
    let pi = Float::with_val(wb, Constant::Pi);
    let mut total = Complex::new(wb);
    for k in 0..n {
        let a = Float::with_val(wb, k);
        let b = Float::with_val(wb, k + 1);
        total += tanh_sinh(
            |t| {
                let tt = Float::with_val(wb, t.square_ref());
                let ph = Float::with_val(wb, &tt * x) + Float::with_val(wb, t * theta) * 2u32;
                let ang = Float::with_val(wb, &ph * &pi);
                let (s, c) = ang.sin_cos(Float::new(wb));
                Complex::with_val(wb, (c, s))
            },
            &a,
            &b,
            wb,
            tol / (10.0 * n as f64),
        );
    }
    Complex::with_val(bits, total)
}
