//! The coefficient functions `Delta_r^-` and `Delta_r^+` built from Hurwitz
//! zeta values at `1 +- lambda`.

use rug::Float;

use super::zeta::{hurwitz_zeta_odd, zeta_even};
use crate::error::{GaussError, Result};
use crate::precision::PrecisionContext;

/// Below this `|lambda|` the regularised cotangent uses its power series.
pub const COT_SERIES_RADIUS: f64 = 0.1;

fn check_lambda(lambda: &Float) -> Result<()> {
    if !(lambda.is_finite() && *lambda > -1 && *lambda < 1) {
        return Err(GaussError::domain(format!(
            "|lambda| < 1 required, got {}",
            lambda.to_f64()
        )));
    }
    Ok(())
}

/// `pi cot(pi lambda) - 1/lambda`, extended by 0 at `lambda = 0`.
pub fn cot_pi_reg(lambda: &Float, ctx: &PrecisionContext) -> Result<Float> {
    check_lambda(lambda)?;
    let bits = ctx.bits();
    if lambda.is_zero() {
        return Ok(Float::new(bits));
    }
    let neg = lambda.is_sign_negative();
    let l = Float::with_val(bits + 16, lambda.abs_ref());
    let v = if l < COT_SERIES_RADIUS {
        cot_series(&l, bits + 16)?
    } else {
        let wb = bits + 16;
        let pi = Float::with_val(wb, rug::float::Constant::Pi);
        let arg = Float::with_val(wb, &l * &pi);
        let cot = Float::with_val(wb, arg.tan_ref()).recip();
        pi * cot - l.recip()
    };
    let v = Float::with_val(bits, v);
    Ok(if neg { -v } else { v })
}

/// `-sum_{m >= 1} 2 zeta(2m) lambda^{2m-1}` for `0 < lambda < 0.1`.
fn cot_series(l: &Float, bits: u32) -> Result<Float> {
    let l2 = Float::with_val(bits, l.square_ref());
    let mut pow = l.clone();
    let mut sum = Float::new(bits);
    let tol = Float::with_val(bits, 1u32) >> bits;
    let mut m = 1u32;
    loop {
        let term = zeta_even(m, bits)? * &pow * 2u32;
        sum -= &term;
        if term < Float::with_val(bits, &tol * Float::with_val(bits, sum.abs_ref())) {
            return Ok(sum);
        }
        pow *= &l2;
        m += 1;
    }
}

/// `Delta_r^-(lambda)`: `cot_pi_reg` for `r = 0`, otherwise
/// `zeta(2r+1, 1+lambda) - zeta(2r+1, 1-lambda)`. Odd in `lambda` exactly.
pub fn delta_minus(r: u32, lambda: &Float, ctx: &PrecisionContext) -> Result<Float> {
    check_lambda(lambda)?;
    if r == 0 {
        return cot_pi_reg(lambda, ctx);
    }
    let bits = ctx.bits();
    if lambda.is_zero() {
        return Ok(Float::new(bits));
    }
    let l = Float::with_val(bits, lambda.abs_ref());
    let up = hurwitz_zeta_odd(r, &Float::with_val(bits, 1 + &l), ctx)?;
    let down = hurwitz_zeta_odd(r, &Float::with_val(bits, 1 - &l), ctx)?;
    let d = up - down;
    Ok(if lambda.is_sign_negative() { -d } else { d })
}

/// `Delta_r^+(lambda) = zeta(2r+1, 1+lambda) + zeta(2r+1, 1-lambda)` for
/// `r >= 1`. Even in `lambda` exactly.
pub fn delta_plus(r: u32, lambda: &Float, ctx: &PrecisionContext) -> Result<Float> {
    check_lambda(lambda)?;
    if r == 0 {
        return Err(GaussError::domain("Delta^+ is defined for r >= 1"));
    }
    let bits = ctx.bits();
    let l = Float::with_val(bits, lambda.abs_ref());
    let up = hurwitz_zeta_odd(r, &Float::with_val(bits, 1 + &l), ctx)?;
    let down = hurwitz_zeta_odd(r, &Float::with_val(bits, 1 - &l), ctx)?;
    Ok(up + down)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    #[test]
    fn cot_reg_special_values() {
        let c = ctx(30);
        assert!(cot_pi_reg(&c.float(0), &c).unwrap().is_zero());
        let half = cot_pi_reg(&c.float(0.5), &c).unwrap();
        assert!((half.to_f64() + 2.0).abs() < 1e-28);
        let quarter = cot_pi_reg(&c.float(0.25), &c).unwrap();
        let want = Float::with_val(c.bits(), c.pi() - 4u32);
        assert!(Float::with_val(c.bits(), &quarter - &want).abs() < 1e-28);
        assert!((want.to_f64() + 0.858407).abs() < 1e-6);
    }

    #[test]
    fn cot_reg_seam_agreement() {
        for d in [15, 30, 50] {
            let c = ctx(d);
            let bits = c.bits() + 16;
            for l in [0.0999, 0.1, 0.1001] {
                let lf = Float::with_val(bits, l);
                let s = cot_series(&lf, bits).unwrap();
                let pi = Float::with_val(bits, rug::float::Constant::Pi);
                let closed = Float::with_val(bits, &pi * Float::with_val(bits, &lf * &pi).tan().recip())
                    - Float::with_val(bits, lf.recip_ref());
                let diff = Float::with_val(bits, &s - &closed).abs().to_f64();
                assert!(diff < c.eps_f64(), "digits {d} lambda {l}: {diff}");
            }
        }
    }

    #[test]
    fn domain_checks() {
        let c = ctx(20);
        assert!(cot_pi_reg(&c.float(1.0), &c).is_err());
        assert!(delta_minus(2, &c.float(-1.0), &c).is_err());
        assert!(delta_plus(0, &c.float(0.1), &c).is_err());
        assert!(delta_plus(1, &c.float(1.5), &c).is_err());
    }

    #[test]
    fn delta_zero_values() {
        let c = ctx(30);
        for r in 0..=10 {
            assert!(delta_minus(r, &c.float(0), &c).unwrap().is_zero());
        }
        let p = delta_plus(1, &c.float(0), &c).unwrap().to_f64();
        assert!((p - 2.404_113_806_319_188_5).abs() < 1e-14);
    }
}
