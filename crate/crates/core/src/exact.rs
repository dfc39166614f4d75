//! Exact representation
//! `S_N = (f(N) - 1)/2 + J_N + e^{pi i/4} (I_N - I_0)` through the modified
//! error function, with controlled truncation of the two `E`-series.

use rayon::prelude::*;
use rug::{Complex, Float};

use crate::error::{GaussError, Result};
use crate::gauss::{term_f, GaussParams};
use crate::precision::{upper_f64, ComplexValue, PrecisionContext};
use crate::special::{e_func, eighth_turns, hurwitz_zeta_odd, pochhammer_half, pow_half_integer};
use crate::summation::CompensatedComplexSum;

/// Default cap on the number of explicitly summed pairs.
pub const DEFAULT_K_MAX_CAP: u64 = 1_000_000;

/// Pairs summed past `|a|` before the asymptotic tail takes over.
const TAIL_OFFSET: u64 = 8;

/// Largest number of asymptotic terms tried for the tail correction.
const MAX_TAIL_TERMS: u32 = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMode {
    /// Sum pairs until the bound on everything beyond `k_stop` is below
    /// `tol`. The tail decays like `1/k_stop`, so only loose tolerances are
    /// reachable within `k_max_cap`.
    Truncate,
    /// Sum pairs explicitly up to `k_stop` and replace the remainder by the
    /// large-argument expansion of `E` summed in closed form with Hurwitz
    /// zeta values, plus a rigorous bound on the neglected part.
    AsymptoticTail,
}

/// Truncation control for the `I_j` series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailPolicy {
    pub tol: f64,
    pub k_max_cap: u64,
    pub mode: TailMode,
}

impl TailPolicy {
    pub fn new(tol: f64, ctx: &PrecisionContext) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(GaussError::domain("tail tolerance must be positive"));
        }
        if tol < ctx.eps_f64() {
            return Err(GaussError::domain(format!(
                "tail tolerance {tol:e} is below the working precision {:e}",
                ctx.eps_f64()
            )));
        }
        Ok(TailPolicy {
            tol,
            k_max_cap: DEFAULT_K_MAX_CAP,
            mode: TailMode::AsymptoticTail,
        })
    }

    /// Tolerance equal to the working precision.
    pub fn for_context(ctx: &PrecisionContext) -> Self {
        TailPolicy {
            tol: ctx.eps_f64(),
            k_max_cap: DEFAULT_K_MAX_CAP,
            mode: TailMode::AsymptoticTail,
        }
    }

    pub fn with_mode(mut self, mode: TailMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.k_max_cap = cap;
        self
    }
}

/// Which of the two series `I_0`, `I_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailIndex {
    Zero,
    N,
}

/// A truncated `I_j` with its truncation bound.
#[derive(Debug, Clone, PartialEq)]
pub struct TailSum {
    pub value: ComplexValue,
    /// Number of pairs summed explicitly.
    pub k_stop: u64,
    /// Rigorous bound on the absolute truncation error.
    pub tail_bound: f64,
}

/// Components of the assembled representation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactReport {
    pub value: ComplexValue,
    pub boundary_term: ComplexValue,
    pub j_n: ComplexValue,
    pub i_n: TailSum,
    pub i_0: TailSum,
}

/// `J_N = int_0^N f(t) dt = e^{pi i/4}/(2 sqrt x) {E(theta) - f(N) E(xi)}`.
pub fn integral_jn(params: &GaussParams, ctx: &PrecisionContext) -> Result<ComplexValue> {
    let bits = ctx.bits();
    let x = params.x();
    let xi = Float::with_val(bits, x * params.n()) + params.theta();
    let e_theta = e_func(params.theta(), x, ctx)?;
    let e_xi = e_func(&xi, x, ctx)?;
    let f_n = term_f(&ctx.float(params.n()), params, ctx);
    let inner = Complex::with_val(bits, &e_theta - Complex::with_val(bits, &f_n * &e_xi));
    Ok(Complex::with_val(bits, inner * half_rot_over_sqrt_x(x, bits)))
}

/// `e^{pi i/4} / (2 sqrt x)`.
fn half_rot_over_sqrt_x(x: &Float, bits: u32) -> Complex {
    let s = Float::with_val(bits, x.sqrt_ref()) * 2u32;
    Complex::with_val(bits, eighth_turns(1, bits) / s)
}

/// `I_j = f(j)/(2 sqrt x) sum_{k >= 1} {E(k - a) - E(k + a)}`, `a = j x + theta`.
pub fn tail_sum_i(
    which: TailIndex,
    params: &GaussParams,
    policy: &TailPolicy,
    ctx: &PrecisionContext,
) -> Result<TailSum> {
    let bits = ctx.bits();
    let x = params.x();
    let (a, f_j) = match which {
        TailIndex::Zero => (Float::with_val(bits, params.theta()), ctx.complex(1)),
        TailIndex::N => (
            Float::with_val(bits, x * params.n()) + params.theta(),
            term_f(&ctx.float(params.n()), params, ctx),
        ),
    };
    if a.is_zero() {
        return Ok(TailSum {
            value: ctx.zero(),
            k_stop: 0,
            tail_bound: 0.0,
        });
    }
    let inv_2sqrtx = Float::with_val(bits, x.sqrt_ref()).recip() / 2u32;
    let abs_a = a.to_f64().abs();

    let (k_stop, tail_value, tail_bound) = match policy.mode {
        TailMode::Truncate => {
            let k = truncation_point(abs_a, x.to_f64(), policy)?;
            (k, ctx.zero(), truncation_estimate(k, abs_a, x.to_f64()))
        }
        TailMode::AsymptoticTail => asymptotic_tail(&a, x, policy, ctx)?,
    };

    let pairs = pair_sum(&a, x, k_stop, ctx)?;
    let total = Complex::with_val(bits, &pairs + &tail_value);
    let value = Complex::with_val(bits, total * &f_j) * &inv_2sqrtx;
    Ok(TailSum {
        value,
        k_stop,
        tail_bound,
    })
}

/// `sum_{k=1}^{k_stop} {E(k - a) - E(k + a)}`, pairs evaluated in parallel and
/// reduced in ascending `k`.
fn pair_sum(a: &Float, x: &Float, k_stop: u64, ctx: &PrecisionContext) -> Result<Complex> {
    let bits = ctx.bits();
    let terms: Vec<Result<Complex>> = (1..=k_stop)
        .into_par_iter()
        .map(|k| {
            let lo = Float::with_val(bits, k) - a;
            let hi = Float::with_val(bits, k) + a;
            let e_lo = e_func(&lo, x, ctx)?;
            let e_hi = e_func(&hi, x, ctx)?;
            Ok(Complex::with_val(bits, e_lo - e_hi))
        })
        .collect();
    let mut acc = CompensatedComplexSum::new(bits + 8);
    for t in terms {
        acc.add(&t?);
    }
    Ok(Complex::with_val(bits, acc.value()))
}

/// Bound on `(1/(2 sqrt x)) |sum_{k > K} {E(k-a) - E(k+a)}|` from the one-term
/// expansion of `E` and its remainder, summed against integrals:
/// `sqrt(x)/pi * ln((K+|a|)/(K-|a|)) + Gamma(3/2)/pi (x/pi)^{3/2} (1/(2(K-|a|)^2) + 1/(2(K+|a|)^2))`.
pub fn truncation_estimate(k: u64, abs_a: f64, x: f64) -> f64 {
    let k = k as f64;
    if k <= abs_a {
        return f64::INFINITY;
    }
    let pi = std::f64::consts::PI;
    let lead = x.sqrt() / pi * ((k + abs_a) / (k - abs_a)).ln();
    let gamma_3_2 = pi.sqrt() / 2.0;
    let rem = gamma_3_2 / pi
        * (x / pi).powf(1.5)
        * (0.5 / (k - abs_a).powi(2) + 0.5 / (k + abs_a).powi(2));
    // a little headroom for f64 rounding in the estimate itself
    (lead + rem) / (2.0 * x.sqrt()) * (1.0 + 1e-12)
}

fn truncation_point(abs_a: f64, x: f64, policy: &TailPolicy) -> Result<u64> {
    let mut lo = abs_a.floor() as u64 + 1;
    if truncation_estimate(lo, abs_a, x) < policy.tol {
        return Ok(lo);
    }
    let mut hi = lo.max(1);
    loop {
        hi = hi.saturating_mul(2);
        if hi > policy.k_max_cap.saturating_mul(2) {
            return Err(GaussError::Truncation(format!(
                "tail tolerance {:e} needs more than k_max_cap = {} pairs",
                policy.tol, policy.k_max_cap
            )));
        }
        if truncation_estimate(hi, abs_a, x) < policy.tol {
            break;
        }
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if truncation_estimate(mid, abs_a, x) < policy.tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi > policy.k_max_cap {
        return Err(GaussError::Truncation(format!(
            "tail tolerance {:e} needs k_stop = {hi} > k_max_cap = {}",
            policy.tol, policy.k_max_cap
        )));
    }
    Ok(hi)
}

/// Chooses `k_stop` and the number of expansion terms, and returns the
/// closed-form tail `sum_{k > k_stop}` (without the `f(j)/(2 sqrt x)` factor)
/// and the bound on the error of the whole `I_j` introduced by it.
fn asymptotic_tail(
    a: &Float,
    x: &Float,
    policy: &TailPolicy,
    ctx: &PrecisionContext,
) -> Result<(u64, Complex, f64)> {
    let bits = ctx.bits();
    let pi = ctx.pi();
    let q = Float::with_val(bits, x / &pi);
    let inv_2sqrtx = Float::with_val(bits, x.sqrt_ref()).recip() / 2u32;
    let sqrt_pi = Float::with_val(bits, pi.sqrt_ref());
    let abs_a = Float::with_val(bits, a.abs_ref());

    let mut k_stop = abs_a.to_f64().floor() as u64 + TAIL_OFFSET;
    loop {
        if k_stop > policy.k_max_cap {
            return Err(GaussError::Truncation(format!(
                "asymptotic tail cannot reach tolerance {:e} within k_max_cap = {}",
                policy.tol, policy.k_max_cap
            )));
        }
        // shifted arguments K + 1 -+ a, both positive
        let lo = Float::with_val(bits, k_stop + 1) - a;
        let hi = Float::with_val(bits, k_stop + 1) + a;
        let mut best: Option<(u32, Float)> = None;
        for n in 1..=MAX_TAIL_TERMS {
            // Gamma(n + 1/2)/pi (x/pi)^{n + 1/2} [zeta(2n+1, lo) + zeta(2n+1, hi)]
            let z = hurwitz_zeta_odd(n, &lo, ctx)? + hurwitz_zeta_odd(n, &hi, ctx)?;
            let b = pochhammer_half(n, bits) * &sqrt_pi / &pi * pow_half_integer(&q, n) * z * &inv_2sqrtx;
            let improved = best.as_ref().is_none_or(|(_, prev)| b < *prev);
            if improved {
                best = Some((n, b.clone()));
                if b < policy.tol {
                    break;
                }
            } else {
                break;
            }
        }
        let (n_terms, bound) = best.expect("at least one term tried");
        if bound < policy.tol {
            let value = tail_expansion(a, &lo, &hi, &q, n_terms, ctx)?;
            return Ok((k_stop, value, upper_f64(&bound)));
        }
        k_stop = k_stop.saturating_mul(2);
    }
}

/// `(1/sqrt pi) sum_{r < n} (-1)^r (1/2)_r (i x/pi)^{r + 1/2} D_r` with
/// `D_0 = psi(hi) - psi(lo)` and `D_r = zeta(2r+1, lo) - zeta(2r+1, hi)`.
fn tail_expansion(
    _a: &Float,
    lo: &Float,
    hi: &Float,
    q: &Float,
    n_terms: u32,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    let bits = ctx.bits();
    let sqrt_pi = ctx.pi().sqrt();
    let mut sum = ctx.zero();
    for r in 0..n_terms {
        let d = if r == 0 {
            let wb = bits + 32;
            let ph = Float::with_val(wb, hi).digamma();
            let pl = Float::with_val(wb, lo).digamma();
            Float::with_val(bits, ph - pl)
        } else {
            hurwitz_zeta_odd(r, lo, ctx)? - hurwitz_zeta_odd(r, hi, ctx)?
        };
        let mag = pochhammer_half(r, bits) * pow_half_integer(q, r) * d;
        let signed = if r % 2 == 1 { -mag } else { mag };
        sum += Complex::with_val(bits, eighth_turns(2 * r + 1, bits) * signed);
    }
    Ok(Complex::with_val(bits, sum / sqrt_pi))
}

/// The assembled representation.
pub fn exact_sum(params: &GaussParams, policy: &TailPolicy, ctx: &PrecisionContext) -> Result<ComplexValue> {
    exact_sum_report(params, policy, ctx).map(|r| r.value)
}

pub fn exact_sum_report(
    params: &GaussParams,
    policy: &TailPolicy,
    ctx: &PrecisionContext,
) -> Result<ExactReport> {
    let bits = ctx.bits();
    let f_n = term_f(&ctx.float(params.n()), params, ctx);
    let boundary_term = Complex::with_val(bits, Complex::with_val(bits, &f_n - 1u32) / 2u32);
    let j_n = integral_jn(params, ctx)?;
    let i_n = tail_sum_i(TailIndex::N, params, policy, ctx)?;
    let i_0 = tail_sum_i(TailIndex::Zero, params, policy, ctx)?;
    let diff = Complex::with_val(bits, &i_n.value - &i_0.value);
    let rotated = Complex::with_val(bits, diff * eighth_turns(1, bits));
    let mut value = Complex::with_val(bits, &boundary_term + &j_n);
    value += rotated;
    Ok(ExactReport {
        value,
        boundary_term,
        j_n,
        i_n,
        i_0,
    })
}
