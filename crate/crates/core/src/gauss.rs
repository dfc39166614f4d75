//! Parameters of the sum, their normalisation, and the direct-summation
//! oracle `S_N(x, theta) = sum_{j=1}^N f(j)`, `f(t) = e^{pi i (x t^2 + 2 theta t)}`.

use rayon::prelude::*;
use rug::{Assign, Complex, Float, Integer};

use crate::error::{GaussError, Result};
use crate::precision::{reduce_mod2, unit_phase, ComplexValue, PrecisionContext};
use crate::summation::CompensatedComplexSum;

/// Default ceiling on the number of terms `direct_sum` will evaluate.
pub const DEFAULT_TERM_BUDGET: u64 = 100_000_000;

/// Terms per independently summed block in [`direct_sum`].
const BLOCK: u64 = 4096;

/// Validated `(x, theta, N)` with `0 < x < 1`, `|theta| <= 1/2`, `N >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussParams {
    x: Float,
    theta: Float,
    n: u64,
}

impl GaussParams {
    pub fn new(x: Float, theta: Float, n: u64) -> Result<Self> {
        if !(x.is_finite() && x > 0 && x < 1) {
            return Err(GaussError::domain(format!("x must satisfy 0 < x < 1, got {}", x.to_f64())));
        }
        if !(theta.is_finite() && (-0.5..=0.5).contains(&theta)) {
            return Err(GaussError::domain(format!(
                "theta must satisfy -1/2 <= theta <= 1/2, got {}",
                theta.to_f64()
            )));
        }
        if n == 0 {
            return Err(GaussError::domain("N must be a positive integer"));
        }
        Ok(GaussParams { x, theta, n })
    }

    /// Convenience constructor from `f64` values, exact in binary.
    pub fn from_f64(x: f64, theta: f64, n: u64, ctx: &PrecisionContext) -> Result<Self> {
        GaussParams::new(ctx.float(x), ctx.float(theta), n)
    }

    pub fn x(&self) -> &Float {
        &self.x
    }

    pub fn theta(&self) -> &Float {
        &self.theta
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The same parameters with a different `N`.
    pub fn with_n(&self, n: u64) -> Result<Self> {
        GaussParams::new(self.x.clone(), self.theta.clone(), n)
    }
}

/// `xi = N x + theta = M + eps` with `M` the nearest integer, ties down.
#[derive(Debug, Clone, PartialEq)]
pub struct XiDecomposition {
    pub xi: Float,
    pub m: u64,
    pub eps: Float,
}

pub fn decompose_xi(params: &GaussParams, ctx: &PrecisionContext) -> XiDecomposition {
    let bits = ctx.bits();
    let wb = bits + 64 + 64;
    let xi_wide = Float::with_val(wb, &params.x * params.n) + &params.theta;
    // M = ceil(xi - 1/2) puts eps in (-1/2, 1/2] with eps = 1/2 at ties
    let shifted = Float::with_val(wb, &xi_wide - 0.5f64);
    let m_int = shifted.ceil().to_integer().expect("finite xi");
    let eps_wide = Float::with_val(wb, &xi_wide - &m_int);
    let m = m_int.to_u64().expect("xi > -1/2 keeps M >= 0");
    XiDecomposition {
        xi: Float::with_val(bits, &xi_wide),
        m,
        eps: Float::with_val(bits, &eps_wide),
    }
}

/// How raw parameters were mapped into the canonical ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationRecord {
    pub conjugated: bool,
    /// `x_raw = x_reduced + 2 * x_shift` before any conjugation.
    pub x_shift: Integer,
    /// `theta_pre = theta + theta_shift`, where `theta_pre` is the raw theta
    /// (negated when conjugated).
    pub theta_shift: Integer,
}

impl NormalizationRecord {
    /// Maps a sum at the normalised parameters back to the raw parameters.
    pub fn restore(&self, value: &Complex) -> Complex {
        if self.conjugated {
            Complex::with_val(value.prec(), value.conj_ref())
        } else {
            value.clone()
        }
    }
}

/// Applies the period-2 symmetry in `x`, the conjugation
/// `(x, theta) -> (2 - x, -theta)` and the period-1 symmetry in `theta`.
pub fn normalize_params(
    x_raw: &Float,
    theta_raw: &Float,
    n: u64,
    ctx: &PrecisionContext,
) -> Result<(GaussParams, NormalizationRecord)> {
    if !(x_raw.is_finite() && theta_raw.is_finite()) {
        return Err(GaussError::domain("x and theta must be finite"));
    }
    if n == 0 {
        return Err(GaussError::domain("N must be a positive integer"));
    }
    let bits = ctx.bits();
    let wb = bits.max(x_raw.prec()).max(theta_raw.prec()) + 64;
    let x = Float::with_val(wb, x_raw);
    let half = Float::with_val(wb, &x / 2u32);
    let x_shift = half.floor().to_integer().expect("finite");
    let mut x_red = Float::with_val(wb, &x - Integer::from(&x_shift * 2u32));
    if x_red.is_zero() {
        return Err(GaussError::domain("x is an even integer; the reduced x = 0 is excluded"));
    }
    if x_red == 1 {
        return Err(GaussError::domain("x is an odd integer; x = 1 has no image in 0 < x < 1"));
    }
    let mut theta = Float::with_val(wb, theta_raw);
    let conjugated = x_red > 1;
    if conjugated {
        x_red = Float::with_val(wb, 2u32 - &x_red);
        theta = -theta;
    }
    let theta_shift = Float::with_val(wb, theta.round_even_ref())
        .to_integer()
        .expect("finite");
    let theta_red = Float::with_val(wb, &theta - &theta_shift);
    let params = GaussParams::new(Float::with_val(bits, x_red), Float::with_val(bits, theta_red), n)?;
    Ok((
        params,
        NormalizationRecord {
            conjugated,
            x_shift,
            theta_shift,
        },
    ))
}

/// `f(t) = e^{pi i (x t^2 + 2 theta t)}` with the phase reduced mod 2 at
/// extended precision before the trigonometric evaluation.
pub fn term_f(t: &Float, params: &GaussParams, ctx: &PrecisionContext) -> Complex {
    let bits = ctx.bits();
    let wb = bits + phase_extra_bits(t.to_f64().abs());
    let t = Float::with_val(wb, t);
    let tt = Float::with_val(wb, t.square_ref());
    let mut phase = Float::with_val(wb, &tt * &params.x);
    phase += Float::with_val(wb, &t * &params.theta) * 2u32;
    unit_phase(&reduce_mod2(&phase), bits)
}

/// Bits lost to the integer part of a phase of size about `t^2`.
fn phase_extra_bits(t_abs: f64) -> u32 {
    (t_abs.max(1.0).log2() * 2.0).ceil() as u32 + 16
}

/// Sum of the first `n` terms with arbitrary real `x`, `theta` (no range
/// restrictions), e.g. the renormalised sum `S_M(-1/x, theta/x)`.
pub fn gauss_sum_raw(x: &Float, theta: &Float, n: u64, ctx: &PrecisionContext) -> ComplexValue {
    let bits = ctx.bits();
    let x_mag = x.to_f64().abs().max(1.0).log2().ceil() as u32;
    let theta_mag = theta.to_f64().abs().max(1.0).log2().ceil() as u32;
    let wb = bits + phase_extra_bits(n as f64) + x_mag.max(theta_mag);
    let x = Float::with_val(wb, x);
    let two_theta = Float::with_val(wb, theta * 2u32);

    let blocks = n.div_ceil(BLOCK);
    let partial: Vec<CompensatedComplexSum> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK + 1;
            let hi = ((b + 1) * BLOCK).min(n);
            let mut acc = CompensatedComplexSum::new(bits + 8);
            let mut phase = Float::new(wb);
            let mut lin = Float::new(wb);
            for j in lo..=hi {
                let jj = Integer::from(j) * j;
                phase.assign(&x * &jj);
                lin.assign(&two_theta * j);
                phase += &lin;
                let term = unit_phase(&reduce_mod2(&phase), bits + 8);
                acc.add(&term);
            }
            acc
        })
        .collect();
    let mut total = CompensatedComplexSum::new(bits + 8);
    for p in &partial {
        total.add(&p.value());
    }
    Complex::with_val(bits, total.value())
}

/// Ground-truth `S_N(x, theta)` by compensated summation with a term budget
/// of [`DEFAULT_TERM_BUDGET`].
pub fn direct_sum(params: &GaussParams, ctx: &PrecisionContext) -> Result<ComplexValue> {
    direct_sum_with_budget(params, ctx, DEFAULT_TERM_BUDGET)
}

pub fn direct_sum_with_budget(
    params: &GaussParams,
    ctx: &PrecisionContext,
    budget: u64,
) -> Result<ComplexValue> {
    if params.n > budget {
        return Err(GaussError::Resource(format!(
            "direct summation of N = {} terms exceeds the budget of {budget}",
            params.n
        )));
    }
    Ok(gauss_sum_raw(&params.x, &params.theta, params.n, ctx))
}

/// Partial sums `S_0 = 0, S_1, ..., S_N` (the curlicue trajectory).
pub fn partial_sums(params: &GaussParams, ctx: &PrecisionContext, budget: u64) -> Result<Vec<Complex>> {
    Ok(partial_sums_strided(params, ctx, budget, 1)?
        .into_iter()
        .map(|(_, s)| s)
        .collect())
}

/// `(j, S_j)` for `j = 0, stride, 2 stride, ...` and always `j = N`.
pub fn partial_sums_strided(
    params: &GaussParams,
    ctx: &PrecisionContext,
    budget: u64,
    stride: u64,
) -> Result<Vec<(u64, Complex)>> {
    if params.n > budget {
        return Err(GaussError::Resource(format!(
            "trajectory of N = {} points exceeds the budget of {budget}",
            params.n
        )));
    }
    if stride == 0 {
        return Err(GaussError::domain("stride must be positive"));
    }
    let bits = ctx.bits();
    let wb = bits + phase_extra_bits(params.n as f64);
    let x = Float::with_val(wb, &params.x);
    let two_theta = Float::with_val(wb, &params.theta * 2u32);
    let mut out = Vec::with_capacity((params.n / stride) as usize + 2);
    let mut acc = CompensatedComplexSum::new(bits + 8);
    out.push((0, ctx.zero()));
    let mut phase = Float::new(wb);
    let mut lin = Float::new(wb);
    for j in 1..=params.n {
        let jj = Integer::from(j) * j;
        phase.assign(&x * &jj);
        lin.assign(&two_theta * j);
        phase += &lin;
        acc.add(&unit_phase(&reduce_mod2(&phase), bits + 8));
        if j % stride == 0 || j == params.n {
            out.push((j, Complex::with_val(bits, acc.value())));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::abs_f64;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        abs_f64(&Complex::with_val(a.prec().0, a - b)) <= tol
    }

    #[test]
    fn params_validation() {
        let c = ctx(20);
        assert!(GaussParams::from_f64(0.0, 0.0, 5, &c).is_err());
        assert!(GaussParams::from_f64(1.0, 0.0, 5, &c).is_err());
        assert!(GaussParams::from_f64(0.5, 0.51, 5, &c).is_err());
        assert!(GaussParams::from_f64(0.5, -0.5, 5, &c).is_ok());
        assert!(GaussParams::from_f64(0.5, 0.5, 0, &c).is_err());
    }

    #[test]
    fn term_f_examples() {
        let c = ctx(30);
        let p = GaussParams::from_f64(0.5, 0.0, 1, &c).unwrap();
        assert_eq!(term_f(&c.float(0), &p, &c), c.complex(1));
        let v = term_f(&c.float(2), &p, &c);
        assert!(close(&v, &c.complex(1), 1e-29));
    }

    #[test]
    fn single_and_four_term_sums() {
        let c = ctx(30);
        let p = GaussParams::from_f64(0.3, 0.2, 1, &c).unwrap();
        let s1 = direct_sum(&p, &c).unwrap();
        assert!(close(&s1, &term_f(&c.float(1), &p, &c), 1e-29));
        let p = GaussParams::from_f64(0.5, 0.0, 4, &c).unwrap();
        let s4 = direct_sum(&p, &c).unwrap();
        assert!(close(&s4, &c.complex((2, 2)), 1e-28));
    }

    #[test]
    fn budget_is_enforced() {
        let c = ctx(20);
        let p = GaussParams::from_f64(0.3, 0.2, 1000, &c).unwrap();
        assert!(matches!(
            direct_sum_with_budget(&p, &c, 999),
            Err(GaussError::Resource(_))
        ));
    }

    #[test]
    fn xi_examples() {
        let c = ctx(30);
        let p = GaussParams::from_f64(0.001, 0.0, 300, &c).unwrap();
        let d = decompose_xi(&p, &c);
        assert_eq!(d.m, 0);
        assert!((d.eps.to_f64() - 0.3).abs() < 1e-15);

        // xi = 16.5 exactly: 33 * 0.5 with theta = 0 ... use x = 0.5, N = 33
        let p = GaussParams::from_f64(0.5, 0.0, 33, &c).unwrap();
        let d = decompose_xi(&p, &c);
        assert_eq!(d.m, 16);
        assert_eq!(d.eps.to_f64(), 0.5);

        let p = GaussParams::from_f64(0.25, -0.5, 3, &c).unwrap();
        let d = decompose_xi(&p, &c);
        assert_eq!(d.m, 0);
        assert_eq!(d.eps.to_f64(), 0.25);
    }

    #[test]
    fn normalization_identities() {
        let c = ctx(30);
        let base = GaussParams::from_f64(0.375, 0.1875, 50, &c).unwrap();
        let s = direct_sum(&base, &c).unwrap();

        let (p, rec) = normalize_params(&c.float(2.375), &c.float(0.1875), 50, &c).unwrap();
        assert!(!rec.conjugated);
        assert_eq!(rec.x_shift, 1);
        assert!(close(&rec.restore(&direct_sum(&p, &c).unwrap()), &s, 1e-26));

        let (p, rec) = normalize_params(&c.float(0.375), &c.float(1.1875), 50, &c).unwrap();
        assert_eq!(rec.theta_shift, 1);
        assert!(close(&rec.restore(&direct_sum(&p, &c).unwrap()), &s, 1e-26));

        // (-x, -theta) gives the conjugate sum
        let (p, rec) = normalize_params(&c.float(-0.375), &c.float(-0.1875), 50, &c).unwrap();
        assert!(rec.conjugated);
        let raw = rec.restore(&direct_sum(&p, &c).unwrap());
        let conj = Complex::with_val(c.bits(), s.conj_ref());
        assert!(close(&raw, &conj, 1e-26));
    }

    #[test]
    fn normalization_rejects_even_integer_x() {
        let c = ctx(20);
        assert!(normalize_params(&c.float(4.0), &c.float(0.1), 5, &c).is_err());
        assert!(normalize_params(&c.float(0.0), &c.float(0.1), 5, &c).is_err());
        assert!(normalize_params(&c.float(3.0), &c.float(0.1), 5, &c).is_err());
    }

    #[test]
    fn trajectory_hand_values() {
        let c = ctx(20);
        let p = GaussParams::from_f64(0.5, 0.0, 4, &c).unwrap();
        let pts = partial_sums(&p, &c, 100).unwrap();
        let want = [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)];
        for (z, (re, im)) in pts.iter().zip(want) {
            assert!(close(z, &c.complex((re, im)), 1e-18));
        }
    }
}
