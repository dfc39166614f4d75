//! Small-`x` expansion of `S_N(x, theta)` with an `N`-independent remainder
//! bound.
//!
//! With `xi = N x + theta`, `M` the nearest integer to `xi` (ties down) and
//! `eps = xi - M`,
//!
//! ```text
//! S_N = e^{-pi i theta^2/x + pi i/4}/sqrt(x) S_M(-1/x, theta/x) + (f(N) - 1)/2
//!     + e^{pi i/4}/(2 sqrt x) {E(theta) - f(N) E(eps)}
//!     + 1/(2 pi i) sum_{r<n} (1/2)_r (x/(pi i))^r C_r + R_n
//! ```
//!
//! where `C_r = f(N) Delta_r^-(eps) - Delta_r^-(theta)` and
//! `|R_n| <= (1/2)_n/(2 pi) (x/pi)^n {Delta_n^+(eps) + Delta_n^+(theta)}`.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{GaussError, Result};
use crate::gauss::{decompose_xi, direct_sum, gauss_sum_raw, term_f, GaussParams, XiDecomposition};
use crate::precision::{unit_phase, upper_f64, ComplexValue, PrecisionContext};
use crate::special::{delta_minus, delta_plus, e_func, eighth_turns, pochhammer_half, quad_phase};

/// Cap on the default number of terms.
pub const DEFAULT_MAX_TERMS: u32 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    /// Reconstructed `S_N`.
    pub value: ComplexValue,
    /// The series part, `sum` of `terms`.
    pub script_s: ComplexValue,
    /// Contribution of each `r = 0..n_used`.
    pub terms: Vec<ComplexValue>,
    pub remainder_bound: f64,
    pub renorm_term: ComplexValue,
    pub boundary_term: ComplexValue,
    pub e_term: ComplexValue,
    pub n_used: u32,
    pub optimal_n: u64,
    /// `n_used >= optimal_n`: past the smallest term of a divergent series.
    pub divergent: bool,
    pub m: u64,
    pub eps: Float,
}

impl ExpansionReport {
    /// Everything except the series part.
    pub fn non_series(&self) -> ComplexValue {
        let bits = self.value.prec().0;
        let mut s = Complex::with_val(bits, &self.renorm_term + &self.boundary_term);
        s += &self.e_term;
        s
    }
}

fn check_half(v: &Float, what: &str) -> Result<()> {
    if !(v.is_finite() && *v >= -0.5 && *v <= 0.5) {
        return Err(GaussError::domain(format!(
            "|{what}| <= 1/2 required, got {}",
            v.to_f64()
        )));
    }
    Ok(())
}

/// `C_r = f(N) Delta_r^-(eps) - Delta_r^-(theta)`.
pub fn coeff_c(
    r: u32,
    params: &GaussParams,
    decomp: &XiDecomposition,
    ctx: &PrecisionContext,
) -> Result<ComplexValue> {
    let bits = ctx.bits();
    let f_n = term_f(&ctx.float(params.n()), params, ctx);
    let d_eps = delta_minus(r, &decomp.eps, ctx)?;
    let d_theta = delta_minus(r, params.theta(), ctx)?;
    Ok(Complex::with_val(bits, f_n * d_eps) - d_theta)
}

/// `(1/2)_n/(2 pi) (x/pi)^n {Delta_n^+(eps) + Delta_n^+(theta)}`, rounded up.
pub fn remainder_bound(n: u32, x: &Float, eps: &Float, theta: &Float, ctx: &PrecisionContext) -> Result<f64> {
    if n == 0 {
        return Err(GaussError::domain("remainder bound needs n >= 1"));
    }
    check_half(eps, "eps")?;
    check_half(theta, "theta")?;
    let bits = ctx.bits();
    let q = Float::with_val(bits, x / ctx.pi());
    let dp = delta_plus(n, eps, ctx)? + delta_plus(n, theta, ctx)?;
    let two_pi = ctx.pi() * 2u32;
    let b = pochhammer_half(n, bits) / two_pi * Float::with_val(bits, (&q).pow(n)) * dp;
    Ok(upper_f64(&b))
}

/// The `theta = 0` bound `(1/2)_n/(2 pi) (x/pi)^n Delta_n^+(eps)`, rounded up.
pub fn classical_remainder_bound(n: u32, x: &Float, eps: &Float, ctx: &PrecisionContext) -> Result<f64> {
    if n == 0 {
        return Err(GaussError::domain("remainder bound needs n >= 1"));
    }
    check_half(eps, "eps")?;
    let bits = ctx.bits();
    let q = Float::with_val(bits, x / ctx.pi());
    let dp = delta_plus(n, eps, ctx)?;
    let b = pochhammer_half(n, bits) / (ctx.pi() * 2u32) * Float::with_val(bits, (&q).pow(n)) * dp;
    Ok(upper_f64(&b))
}

/// `max(1, round(pi (1 - |eps|)^2 / x))`.
pub fn optimal_truncation(x: &Float, eps: &Float) -> u64 {
    let bits = x.prec().max(eps.prec()).max(64);
    let one_minus = Float::with_val(bits, 1u32) - Float::with_val(bits, eps.abs_ref());
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let r = pi * Float::with_val(bits, one_minus.square_ref()) / x;
    let r = r.round();
    r.to_integer()
        .and_then(|i| i.to_u64())
        .unwrap_or(u64::MAX)
        .max(1)
}

/// `e^{-pi i theta^2/x + pi i/4}/sqrt(x) S_M(-1/x, theta/x)`, zero when `M = 0`.
pub fn renorm_term(params: &GaussParams, m: u64, ctx: &PrecisionContext) -> ComplexValue {
    let bits = ctx.bits();
    if m == 0 {
        return ctx.zero();
    }
    let wide = bits + 64;
    let x = Float::with_val(wide, params.x());
    let neg_inv_x = -Float::with_val(wide, x.recip_ref());
    let th = Float::with_val(wide, params.theta() / &x);
    let s_m = gauss_sum_raw(&neg_inv_x, &th, m, ctx);
    let mut phase = quad_phase(params.theta(), params.x(), bits);
    phase += 0.25;
    let rot = unit_phase(&phase, bits);
    let sqrt_x = Float::with_val(bits, params.x().sqrt_ref());
    Complex::with_val(bits, s_m * rot) / sqrt_x
}

/// `(f(N) - 1)/2`.
fn boundary(params: &GaussParams, ctx: &PrecisionContext) -> Complex {
    let bits = ctx.bits();
    let f_n = term_f(&ctx.float(params.n()), params, ctx);
    Complex::with_val(bits, Complex::with_val(bits, f_n - 1u32) / 2u32)
}

/// `e^{pi i/4}/(2 sqrt x) {E(theta) - f(N) E(eps)}`.
fn e_part(params: &GaussParams, eps: &Float, ctx: &PrecisionContext) -> Result<Complex> {
    let bits = ctx.bits();
    let f_n = term_f(&ctx.float(params.n()), params, ctx);
    let e_theta = e_func(params.theta(), params.x(), ctx)?;
    let e_eps = e_func(eps, params.x(), ctx)?;
    let inner = Complex::with_val(bits, e_theta - Complex::with_val(bits, f_n * e_eps));
    let s = Float::with_val(bits, params.x().sqrt_ref()) * 2u32;
    Ok(Complex::with_val(bits, inner * eighth_turns(1, bits)) / s)
}

/// `(1/2)_r (x/pi)^r (-i)^r / (2 pi i)`, the weight multiplying `C_r`.
fn series_weight(r: u32, x: &Float, ctx: &PrecisionContext) -> Complex {
    let bits = ctx.bits();
    let q = Float::with_val(bits, x / ctx.pi());
    let mag = pochhammer_half(r, bits) * Float::with_val(bits, (&q).pow(r)) / (ctx.pi() * 2u32);
    // (-i)^r / i = (-i)^{r+1}, a multiple of a quarter turn
    let (re, im) = match (r + 1) % 4 {
        0 => (mag, Float::new(bits)),
        1 => (Float::new(bits), -mag),
        2 => (-mag, Float::new(bits)),
        _ => (Float::new(bits), mag),
    };
    Complex::with_val(bits, (re, im))
}

fn series_terms(
    n: u32,
    x: &Float,
    coeff: impl Fn(u32) -> Result<Complex> + Sync,
    ctx: &PrecisionContext,
) -> Result<(Vec<Complex>, Complex)> {
    let bits = ctx.bits();
    let terms: Vec<Complex> = (0..n)
        .into_par_iter()
        .map(|r| Ok(series_weight(r, x, ctx) * coeff(r)?))
        .collect::<Result<_>>()?;
    let mut sum = ctx.zero();
    for t in &terms {
        sum += t;
    }
    Ok((terms, Complex::with_val(bits, sum)))
}

/// Full small-`x` evaluation. `n = None` uses `min(10, optimal_n)` terms.
pub fn theorem1_eval(params: &GaussParams, n: Option<u32>, ctx: &PrecisionContext) -> Result<ExpansionReport> {
    check_half(params.theta(), "theta")?;
    let decomp = decompose_xi(params, ctx);
    let optimal_n = optimal_truncation(params.x(), &decomp.eps);
    let n = match n {
        Some(0) => return Err(GaussError::domain("number of expansion terms must be >= 1")),
        Some(n) => n,
        None => DEFAULT_MAX_TERMS.min(optimal_n.min(u32::MAX as u64) as u32),
    };
    let bits = ctx.bits();
    let (terms, script_s) = series_terms(n, params.x(), |r| coeff_c(r, params, &decomp, ctx), ctx)?;
    let bound = remainder_bound(n, params.x(), &decomp.eps, params.theta(), ctx)?;
    let renorm = renorm_term(params, decomp.m, ctx);
    let boundary_term = boundary(params, ctx);
    let e_term = e_part(params, &decomp.eps, ctx)?;
    let mut value = Complex::with_val(bits, &renorm + &boundary_term);
    value += &e_term;
    value += &script_s;
    Ok(ExpansionReport {
        value,
        script_s,
        terms,
        remainder_bound: bound,
        renorm_term: renorm,
        boundary_term,
        e_term,
        n_used: n,
        optimal_n,
        divergent: n as u64 >= optimal_n,
        m: decomp.m,
        eps: decomp.eps,
    })
}

/// The series side and the oracle side of `S_N - (renorm + boundary + E-part)`.
/// Their difference is the actual remainder `R_n`.
pub fn script_s_pair(params: &GaussParams, n: u32, ctx: &PrecisionContext) -> Result<(ComplexValue, ComplexValue)> {
    let report = theorem1_eval(params, Some(n), ctx)?;
    let oracle = direct_sum(params, ctx)?;
    let reference = Complex::with_val(ctx.bits(), &oracle - report.non_series());
    Ok((report.script_s, reference))
}

/// The `theta = 0` case, where `I_0` vanishes, `E(0) = 1` and the coefficients
/// reduce to `f(N) Delta_r^-(eps)`.
pub fn classical_theta0(n_sum: u64, x: &Float, n: u32, ctx: &PrecisionContext) -> Result<ExpansionReport> {
    if n == 0 {
        return Err(GaussError::domain("number of expansion terms must be >= 1"));
    }
    let bits = ctx.bits();
    let params = GaussParams::new(Float::with_val(bits, x), ctx.float(0), n_sum)?;
    let decomp = decompose_xi(&params, ctx);
    let optimal_n = optimal_truncation(x, &decomp.eps);
    let f_n = term_f(&ctx.float(n_sum), &params, ctx);

    let (terms, script_s) = series_terms(
        n,
        x,
        |r| Ok(Complex::with_val(bits, &f_n * delta_minus(r, &decomp.eps, ctx)?)),
        ctx,
    )?;

    let bound = classical_remainder_bound(n, x, &decomp.eps, ctx)?;

    let renorm = renorm_term(&params, decomp.m, ctx);
    let boundary_term = boundary(&params, ctx);
    let e_eps = e_func(&decomp.eps, x, ctx)?;
    let inner = Complex::with_val(bits, 1u32 - Complex::with_val(bits, &f_n * e_eps));
    let s = Float::with_val(bits, x.sqrt_ref()) * 2u32;
    let e_term = Complex::with_val(bits, inner * eighth_turns(1, bits)) / s;

    let mut value = Complex::with_val(bits, &renorm + &boundary_term);
    value += &e_term;
    value += &script_s;
    Ok(ExpansionReport {
        value,
        script_s,
        terms,
        remainder_bound: bound,
        renorm_term: renorm,
        boundary_term,
        e_term,
        n_used: n,
        optimal_n,
        divergent: n as u64 >= optimal_n,
        m: decomp.m,
        eps: decomp.eps,
    })
}
