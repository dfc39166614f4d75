//! Hurwitz zeta at odd integer arguments by Euler-Maclaurin summation.

use std::sync::OnceLock;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{GaussError, Result};
use crate::precision::PrecisionContext;

/// Number of even-index Bernoulli numbers tabulated (`B_2 .. B_{2 * BERNOULLI_COUNT}`).
pub const BERNOULLI_COUNT: usize = 320;

static BERNOULLI: OnceLock<Vec<Rational>> = OnceLock::new();

/// `B_{2k}` for `k = 1..=BERNOULLI_COUNT` (index 0 holds `B_2`).
///
/// Tangent numbers by the Brent-Harvey integer recurrence, then
/// `B_{2k} = (-1)^{k-1} 2k T_k / (4^k (4^k - 1))`.
pub fn bernoulli_even() -> &'static [Rational] {
    BERNOULLI.get_or_init(|| {
        let n = BERNOULLI_COUNT;
        let mut t: Vec<Integer> = vec![Integer::new(); n + 1];
        t[1] = Integer::from(1);
        for k in 2..=n {
            t[k] = Integer::from(&t[k - 1] * (k as u32 - 1));
        }
        for k in 2..=n {
            for j in k..=n {
                let a = Integer::from(&t[j - 1] * (j - k) as u32);
                let b = Integer::from(&t[j] * (j - k + 2) as u32);
                t[j] = a + b;
            }
        }
        (1..=n)
            .map(|k| {
                let four_k = Integer::from(Integer::u_pow_u(4, k as u32));
                let den: Integer = &four_k * Integer::from(&four_k - 1u32);
                let num = Integer::from(&t[k] * (2 * k) as u32);
                let r = Rational::from((num, den));
                if k % 2 == 1 {
                    r
                } else {
                    -r
                }
            })
            .collect()
    })
}

/// `zeta(2r + 1, a) = sum_{k >= 0} (k + a)^{-2r-1}` for `r >= 1`, `a > 0`.
pub fn hurwitz_zeta_odd(r: u32, a: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if r == 0 {
        return Err(GaussError::domain("hurwitz_zeta_odd requires r >= 1 (s >= 3)"));
    }
    if !(a.is_finite() && *a > 0) {
        return Err(GaussError::domain(format!(
            "hurwitz_zeta_odd requires a > 0, got {}",
            a.to_f64()
        )));
    }
    let bits = ctx.bits();
    let shift = ctx.digits().max(10);
    hurwitz_em(2 * r + 1, a, shift, bits + 16).map(|v| Float::with_val(bits, v))
}

/// Euler-Maclaurin with `shift` leading terms summed directly. For
/// `f(t) = (t + a)^{-s}` all derivatives keep one sign, so the remainder is
/// bounded by the first omitted correction; that term is driven below the
/// working precision relative to the partial sum.
pub(crate) fn hurwitz_em(s: u32, a: &Float, shift: u32, bits: u32) -> Result<Float> {
    let a = Float::with_val(bits, a);
    let mut head = Float::new(bits);
    for k in (0..shift).rev() {
        let base = Float::with_val(bits, &a + k);
        head += base.pow(s).recip();
    }
    let w = Float::with_val(bits, &a + shift);
    let w_s = Float::with_val(bits, (&w).pow(s)).recip();
    // integral and half-endpoint terms
    let mut sum = Float::with_val(bits, &w_s * &w) / (s - 1);
    sum += Float::with_val(bits, &w_s / 2u32);
    sum += &head;

    let w2_inv = Float::with_val(bits, w.square_ref()).recip();
    // factor_j = s (s+1) ... (s+2j-2) / (2j)! * w^{-s-2j+1}
    let mut factor = Float::with_val(bits, &w_s * &w) * s / 2u32 * &w2_inv;
    let tol = Float::with_val(bits, &sum) >> (bits - 8);
    let table = bernoulli_even();
    for (j, b) in table.iter().enumerate() {
        let j = j as u32 + 1;
        let term = Float::with_val(bits, &factor * b);
        let mag = Float::with_val(bits, term.abs_ref());
        sum += &term;
        if mag < tol {
            return Ok(sum);
        }
        let num = (s + 2 * j - 1) * (s + 2 * j);
        let den = (2 * j + 1) * (2 * j + 2);
        factor *= num;
        factor /= den;
        factor *= &w2_inv;
    }
    Err(GaussError::precision(format!(
        "hurwitz zeta: Euler-Maclaurin did not converge within {BERNOULLI_COUNT} corrections"
    )))
}

/// `zeta(2m)` for `m >= 1` from the Bernoulli table.
pub(crate) fn zeta_even(m: u32, bits: u32) -> Result<Float> {
    let table = bernoulli_even();
    let b = table.get(m as usize - 1).ok_or_else(|| {
        GaussError::precision(format!("zeta(2m): m = {m} exceeds the Bernoulli table"))
    })?;
    // zeta(2m) = (-1)^{m+1} B_{2m} (2 pi)^{2m} / (2 (2m)!)
    let two_pi = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
    let num = Float::with_val(bits, two_pi.pow(2 * m)) * Float::with_val(bits, Rational::from(b.abs_ref()));
    let fact = Float::with_val(bits, Integer::from(Integer::factorial(2 * m)));
    Ok(num / fact / 2u32)
}
