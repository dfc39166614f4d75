//! Command-line front end: argument model, commands, table presets and report
//! formatting. `main.rs` only forwards `std::env::args_os()` here.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Complex, Float};
use serde_json::{Map, Value};

use crate::asymptotic::{classical_remainder_bound, classical_theta0, remainder_bound, theorem1_eval, ExpansionReport};
use crate::error::{GaussError, Result};
use crate::exact::{exact_sum_report, TailMode, TailPolicy};
use crate::expr::eval_str;
use crate::gauss::{decompose_xi, direct_sum, normalize_params, partial_sums_strided, GaussParams, NormalizationRecord, DEFAULT_TERM_BUDGET};
use crate::precision::{abs_f64, PrecisionContext};

pub const DEFAULT_DIGITS: u32 = 30;

/// Truncation levels of the first and second published tables.
pub const TABLE1_NS: [u32; 7] = [1, 2, 3, 4, 6, 8, 10];
pub const TABLE2_NS: [u32; 6] = [1, 2, 4, 6, 8, 10];

#[derive(Debug, Parser)]
#[command(name = "qgauss", version, about = "Quadratic Gauss sums: direct, exact and asymptotic evaluation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Direct compensated summation.
    Sum(EvalArgs),
    /// Exact representation through erfc.
    Exact(ExactArgs),
    /// Small-x expansion with remainder bound.
    Asym(AsymArgs),
    /// Absolute error of the series part for n = 1, 2, 3, 4, 6, 8, 10.
    Table1(TableArgs),
    /// |R_n| against the bound for n = 1, 2, 4, 6, 8, 10.
    Table2(TableArgs),
    /// Decide which corrected parameter set reproduces the third error column.
    ResolveCol3(OutputArgs),
    /// Partial sums S_0 .. S_N as j,re,im rows.
    Curlicue(CurlicueArgs),
    /// Timing of direct summation against the expansion.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailArg {
    Asymptotic,
    Truncate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetName {
    Col1,
    Col2,
    Col3a,
    Col3b,
    /// The third column with its parameters exactly as printed.
    Col3Printed,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Working precision in decimal digits.
    #[arg(long)]
    pub digits: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// x as an expression, e.g. "1/(250*sqrt(pi))".
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub theta: String,
    #[arg(long = "N")]
    pub big_n: u64,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Truncation tolerance for each tail series (default: working precision).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "asymptotic")]
    pub tail: TailArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AsymArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Number of series terms (default: min(10, optimal)).
    #[arg(long = "n")]
    pub n: Option<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub preset: Option<PresetName>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long = "N")]
    pub big_n: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CurlicueArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 1)]
    pub stride: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub digits: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Grid of N values (repeatable).
    #[arg(long = "N", num_args = 1..)]
    pub big_n: Vec<u64>,
    /// Target value of N x; x = nx / N.
    #[arg(long, default_value = "17.3")]
    pub nx: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0.25")]
    pub theta: String,
    #[arg(long = "n", default_value_t = 8)]
    pub n: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A published parameter set with its printed columns.
#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub x: &'static str,
    pub theta: &'static str,
    pub big_n: u64,
    pub min_digits: u32,
    /// First table, rows for [`TABLE1_NS`].
    pub table1: [f64; 7],
    /// Second table `(|R_n|, bound)`, rows for [`TABLE2_NS`].
    pub table2: Option<[(f64, f64); 6]>,
}

const COL3_ERRORS: [f64; 7] = [1.386e-5, 1.221e-8, 1.590e-11, 2.708e-14, 1.420e-19, 1.360e-24, 2.082e-29];

pub const COL1: Preset = Preset {
    name: "col1",
    x: "1/(250*sqrt(pi))",
    theta: "-0.125",
    big_n: 7300,
    min_digits: 40,
    table1: [2.216e-4, 5.642e-7, 2.346e-9, 1.369e-11, 9.569e-16, 1.334e-19, 3.096e-23],
    table2: Some([
        (2.216e-4, 4.062e-4),
        (5.642e-7, 7.077e-7),
        (1.369e-11, 1.435e-11),
        (9.569e-16, 9.691e-16),
        (1.334e-19, 1.339e-19),
        (3.096e-23, 3.100e-23),
    ]),
};

pub const COL2: Preset = Preset {
    name: "col2",
    x: "1/(250*sqrt(pi))",
    theta: "0.25",
    big_n: 7430,
    min_digits: 40,
    table1: [1.198e-4, 2.527e-7, 8.332e-10, 3.752e-12, 1.509e-16, 1.194e-20, 1.568e-24],
    table2: Some([
        (1.200e-4, 3.272e-4),
        (2.527e-7, 4.137e-7),
        (3.752e-12, 4.309e-12),
        (1.509e-16, 1.570e-16),
        (1.194e-20, 1.208e-20),
        (1.568e-24, 1.574e-24),
    ]),
};

pub const COL3A: Preset = Preset {
    name: "col3a",
    x: "1/(500*sqrt(3))",
    theta: "0",
    big_n: 6000,
    min_digits: 50,
    table1: COL3_ERRORS,
    table2: None,
};

pub const COL3B: Preset = Preset {
    name: "col3b",
    x: "1/(250*sqrt(3))",
    theta: "0",
    big_n: 3000,
    min_digits: 50,
    table1: COL3_ERRORS,
    table2: None,
};

pub const COL3_PRINTED: Preset = Preset {
    name: "col3-printed",
    x: "1/(250*sqrt(3))",
    theta: "0",
    big_n: 6000,
    min_digits: 50,
    table1: COL3_ERRORS,
    table2: None,
};

impl PresetName {
    pub fn preset(self) -> Preset {
        match self {
            PresetName::Col1 => COL1,
            PresetName::Col2 => COL2,
            PresetName::Col3a => COL3A,
            PresetName::Col3b => COL3B,
            PresetName::Col3Printed => COL3_PRINTED,
        }
    }
}

/// One line of a table comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub n: u32,
    /// `|S_oracle - S_expansion|` for the series part.
    pub abs_error: f64,
    /// The same quantity read as the remainder `R_n`.
    pub abs_rn: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// A trajectory point `(j, S_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub j: u64,
    pub re: Float,
    pub im: Float,
}

/// Rounds to three significant figures, as printed in the tables.
pub fn sig3(v: f64) -> String {
    format!("{v:.2e}")
}

/// Three-figure agreement of a computed value with a printed one.
pub fn agrees_3sf(computed: f64, printed: f64) -> bool {
    sig3(computed) == sig3(printed)
}

/// Agreement allowing one unit in the third figure, for printed values whose
/// own rounding differs between tables.
pub fn agrees_3sf_within_one(computed: f64, printed: f64) -> bool {
    let (a, b) = (sig3(computed), sig3(printed));
    let exp = |s: &str| -> i32 { s.split_once('e').map_or(0, |(_, e)| e.parse().unwrap_or(0)) };
    let ulp = 10f64.powi(exp(&a).min(exp(&b)) - 2);
    let (va, vb): (f64, f64) = (a.parse().unwrap_or(f64::NAN), b.parse().unwrap_or(f64::NAN));
    (va - vb).abs() <= ulp * (1.0 + 1e-9)
}

/// Series-part errors and bounds for every `n` in `ns` from a single oracle
/// sum. With `theta = 0` the bound without the `Delta^+(theta)` part is used.
pub fn comparison_rows(params: &GaussParams, ns: &[u32], ctx: &PrecisionContext) -> Result<Vec<ComparisonRow>> {
    let n_max = ns.iter().copied().max().unwrap_or(1).max(1);
    let classical = params.theta().is_zero();
    let report: ExpansionReport = if classical {
        classical_theta0(params.n(), params.x(), n_max, ctx)?
    } else {
        theorem1_eval(params, Some(n_max), ctx)?
    };
    let oracle = direct_sum(params, ctx)?;
    let bits = ctx.bits();
    let reference = Complex::with_val(bits, &oracle - report.non_series());
    ns.iter()
        .map(|&n| {
            let mut partial = ctx.zero();
            for t in &report.terms[..n as usize] {
                partial += t;
            }
            let err = abs_f64(&Complex::with_val(bits, &reference - &partial));
            let bound = if classical {
                classical_remainder_bound(n, params.x(), &report.eps, ctx)?
            } else {
                remainder_bound(n, params.x(), &report.eps, params.theta(), ctx)?
            };
            Ok(ComparisonRow {
                n,
                abs_error: err,
                abs_rn: err,
                bound,
                ratio: bound / err,
            })
        })
        .collect()
}

/// Evaluates the expressions of a preset at the given precision.
pub fn preset_params(p: &Preset, ctx: &PrecisionContext) -> Result<GaussParams> {
    GaussParams::new(eval_str(p.x, ctx)?, eval_str(p.theta, ctx)?, p.big_n)
}

// ---------------------------------------------------------------------------
// output

#[derive(Debug, Clone)]
enum Field {
    Text(String),
    Int(i64),
    Real(f64),
    Big(Float),
    Bool(bool),
    Null,
}

type Record = Vec<(&'static str, Field)>;

struct Report {
    records: Vec<Record>,
    /// Single object rather than an array in JSON.
    single: bool,
    digits: u32,
}

fn sci_f64(v: f64) -> String {
    if v == 0.0 {
        "0e0".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn sci_big(v: &Float, digits: u32) -> String {
    if v.is_zero() {
        "0e0".to_string()
    } else {
        format!("{:.*e}", digits.max(17) as usize, v)
    }
}

impl Report {
    fn text(&self, f: &Field) -> String {
        match f {
            Field::Text(s) => s.clone(),
            Field::Int(i) => i.to_string(),
            Field::Real(v) => sci_f64(*v),
            Field::Big(v) => sci_big(v, self.digits),
            Field::Bool(b) => b.to_string(),
            Field::Null => String::new(),
        }
    }

    fn json_value(&self, f: &Field) -> Value {
        let as_string = self.digits > 17;
        match f {
            Field::Text(s) => Value::String(s.clone()),
            Field::Int(i) => Value::from(*i),
            Field::Bool(b) => Value::Bool(*b),
            Field::Null => Value::Null,
            Field::Real(v) if as_string || !v.is_finite() => Value::String(sci_f64(*v)),
            Field::Real(v) => Value::from(*v),
            Field::Big(v) if as_string => Value::String(sci_big(v, self.digits)),
            Field::Big(v) => Value::from(v.to_f64()),
        }
    }

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let objs: Vec<Value> = self
                    .records
                    .iter()
                    .map(|r| {
                        let mut m = Map::new();
                        for (k, v) in r {
                            m.insert((*k).to_string(), self.json_value(v));
                        }
                        Value::Object(m)
                    })
                    .collect();
                let v = if self.single && objs.len() == 1 {
                    objs.into_iter().next().expect("one record")
                } else {
                    Value::Array(objs)
                };
                let mut s = serde_json::to_string_pretty(&v).map_err(|e| GaussError::Resource(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                if let Some(first) = self.records.first() {
                    w.write_record(first.iter().map(|(k, _)| *k))
                        .map_err(|e| GaussError::Resource(e.to_string()))?;
                }
                for r in &self.records {
                    w.write_record(r.iter().map(|(_, v)| self.text(v)))
                        .map_err(|e| GaussError::Resource(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| GaussError::Resource(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| GaussError::Resource(e.to_string()))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// commands

fn context(digits: Option<u32>, floor: u32) -> Result<PrecisionContext> {
    PrecisionContext::new(digits.unwrap_or(DEFAULT_DIGITS.max(floor)))
}

struct RawParams {
    x: Float,
    theta: Float,
    params: GaussParams,
    record: NormalizationRecord,
}

fn raw_params(args: &ParamArgs, ctx: &PrecisionContext) -> Result<RawParams> {
    let x = eval_str(&args.x, ctx)?;
    let theta = eval_str(&args.theta, ctx)?;
    let (params, record) = normalize_params(&x, &theta, args.big_n, ctx)?;
    Ok(RawParams {
        x,
        theta,
        params,
        record,
    })
}

fn head(method: &str, raw: &RawParams, ctx: &PrecisionContext) -> Record {
    vec![
        ("method", Field::Text(method.to_string())),
        ("x", Field::Big(raw.x.clone())),
        ("theta", Field::Big(raw.theta.clone())),
        ("N", Field::Int(raw.params.n() as i64)),
        ("digits", Field::Int(ctx.digits() as i64)),
    ]
}

fn push_value(rec: &mut Record, v: &Complex) {
    rec.push(("value_re", Field::Big(v.real().clone())));
    rec.push(("value_im", Field::Big(v.imag().clone())));
}

fn elapsed(start: Instant) -> Field {
    Field::Int(start.elapsed().as_nanos().min(i64::MAX as u128) as i64)
}

fn cmd_sum(a: &EvalArgs) -> Result<(Report, Format)> {
    let ctx = context(a.output.digits, 0)?;
    let raw = raw_params(&a.params, &ctx)?;
    let t = Instant::now();
    let v = raw.record.restore(&direct_sum(&raw.params, &ctx)?);
    let el = elapsed(t);
    let mut rec = head("sum", &raw, &ctx);
    push_value(&mut rec, &v);
    rec.push(("elapsed_ns", el));
    Ok((single(rec, &ctx), a.output.format))
}

fn cmd_exact(a: &ExactArgs) -> Result<(Report, Format)> {
    let ctx = context(a.output.digits, 0)?;
    let raw = raw_params(&a.params, &ctx)?;
    let mut policy = match a.tol {
        Some(t) => TailPolicy::new(t, &ctx)?,
        None => TailPolicy::for_context(&ctx),
    };
    if a.tail == TailArg::Truncate {
        policy = policy.with_mode(TailMode::Truncate);
    }
    let t = Instant::now();
    let rep = exact_sum_report(&raw.params, &policy, &ctx)?;
    let el = elapsed(t);
    let v = raw.record.restore(&rep.value);
    let mut rec = head("exact", &raw, &ctx);
    push_value(&mut rec, &v);
    rec.push(("bound", Field::Real(rep.i_n.tail_bound + rep.i_0.tail_bound)));
    rec.push(("elapsed_ns", el));
    rec.push(("k_stop_n", Field::Int(rep.i_n.k_stop as i64)));
    rec.push(("k_stop_0", Field::Int(rep.i_0.k_stop as i64)));
    Ok((single(rec, &ctx), a.output.format))
}

fn cmd_asym(a: &AsymArgs) -> Result<(Report, Format)> {
    let ctx = context(a.output.digits, 0)?;
    let raw = raw_params(&a.params, &ctx)?;
    let t = Instant::now();
    let rep = theorem1_eval(&raw.params, a.n, &ctx)?;
    let el = elapsed(t);
    let v = raw.record.restore(&rep.value);
    let mut rec = head("asym", &raw, &ctx);
    rec.push(("n", Field::Int(rep.n_used as i64)));
    push_value(&mut rec, &v);
    rec.push(("bound", Field::Real(rep.remainder_bound)));
    rec.push(("elapsed_ns", el));
    rec.push(("M", Field::Int(rep.m as i64)));
    rec.push(("eps", Field::Big(rep.eps.clone())));
    rec.push(("optimal_n", Field::Int(rep.optimal_n.min(i64::MAX as u64) as i64)));
    rec.push(("divergent", Field::Bool(rep.divergent)));
    if rep.divergent {
        eprintln!(
            "warning: n = {} is at or past the optimal truncation {}; the series is divergent there",
            rep.n_used, rep.optimal_n
        );
    }
    Ok((single(rec, &ctx), a.output.format))
}

fn single(rec: Record, ctx: &PrecisionContext) -> Report {
    Report {
        records: vec![rec],
        single: true,
        digits: ctx.digits(),
    }
}

fn table_source(a: &TableArgs) -> Result<(Option<Preset>, String, String, u64, u32)> {
    if let Some(p) = a.preset {
        let p = p.preset();
        return Ok((Some(p), p.x.to_string(), p.theta.to_string(), p.big_n, p.min_digits));
    }
    match (&a.x, a.big_n) {
        (Some(x), Some(n)) => Ok((
            None,
            x.clone(),
            a.theta.clone().unwrap_or_else(|| "0".to_string()),
            n,
            40,
        )),
        _ => Err(GaussError::Syntax {
            offset: 0,
            message: "either --preset or both --x and --N are required".to_string(),
        }),
    }
}

fn cmd_table(a: &TableArgs, second: bool) -> Result<(Report, Format)> {
    let (preset, x, theta, big_n, floor) = table_source(a)?;
    let ctx = context(a.output.digits, floor)?;
    let params = GaussParams::new(eval_str(&x, &ctx)?, eval_str(&theta, &ctx)?, big_n)?;
    let ns: &[u32] = if second { &TABLE2_NS } else { &TABLE1_NS };
    let rows = comparison_rows(&params, ns, &ctx)?;
    let label = preset.map_or("custom", |p| p.name);
    let records = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let (pub_err, pub_bound) = match (preset, second) {
                (Some(p), false) => (Some(p.table1[i]), None),
                (Some(p), true) => match p.table2 {
                    Some(t) => (Some(t[i].0), Some(t[i].1)),
                    None => (None, None),
                },
                (None, _) => (None, None),
            };
            let agrees = pub_err.map(|e| {
                agrees_3sf(r.abs_error, e) && pub_bound.is_none_or(|b| agrees_3sf(r.bound, b))
            });
            let opt = |v: Option<f64>| v.map_or(Field::Null, Field::Real);
            vec![
                ("preset", Field::Text(label.to_string())),
                ("n", Field::Int(r.n as i64)),
                ("abs_error", Field::Real(r.abs_error)),
                ("abs_Rn", Field::Real(r.abs_rn)),
                ("bound", Field::Real(r.bound)),
                ("ratio", Field::Real(r.ratio)),
                ("published_error", opt(pub_err)),
                ("published_bound", opt(pub_bound)),
                ("agrees_3sf", agrees.map_or(Field::Null, Field::Bool)),
            ]
        })
        .collect();
    Ok((
        Report {
            records,
            single: false,
            digits: ctx.digits(),
        },
        a.output.format,
    ))
}

/// Outcome for one candidate parameter set of the third column.
#[derive(Debug, Clone)]
pub struct Col3Candidate {
    pub preset: Preset,
    pub xi: f64,
    pub rows: Vec<ComparisonRow>,
    pub matched: usize,
}

/// Runs the printed parameters and both corrections against the printed
/// error column. A candidate is adopted when every row agrees.
pub fn resolve_col3(ctx: &PrecisionContext) -> Result<Vec<Col3Candidate>> {
    [COL3_PRINTED, COL3A, COL3B]
        .iter()
        .map(|p| {
            let params = preset_params(p, ctx)?;
            let xi = decompose_xi(&params, ctx).xi.to_f64();
            let rows = comparison_rows(&params, &TABLE1_NS, ctx)?;
            let matched = rows
                .iter()
                .zip(p.table1.iter())
                .filter(|(r, e)| agrees_3sf(r.abs_error, **e))
                .count();
            Ok(Col3Candidate {
                preset: *p,
                xi,
                rows,
                matched,
            })
        })
        .collect()
}

fn cmd_resolve(a: &OutputArgs) -> Result<(Report, Format)> {
    let ctx = context(a.digits, 50)?;
    let cands = resolve_col3(&ctx)?;
    let names = ["err_n1", "err_n2", "err_n3", "err_n4", "err_n6", "err_n8", "err_n10"];
    let records = cands
        .iter()
        .map(|c| {
            let mut rec: Record = vec![
                ("candidate", Field::Text(c.preset.name.to_string())),
                ("x", Field::Text(c.preset.x.to_string())),
                ("N", Field::Int(c.preset.big_n as i64)),
                ("xi", Field::Real(c.xi)),
            ];
            for (k, r) in names.iter().zip(&c.rows) {
                rec.push((k, Field::Real(r.abs_error)));
            }
            rec.push(("matched", Field::Int(c.matched as i64)));
            rec.push(("adopted", Field::Bool(c.matched == TABLE1_NS.len())));
            rec
        })
        .collect();
    Ok((
        Report {
            records,
            single: false,
            digits: ctx.digits(),
        },
        a.format,
    ))
}

/// Trajectory points for `j = 0, stride, ...` and `j = N`.
pub fn curlicue_points(
    x: &Float,
    theta: &Float,
    big_n: u64,
    stride: u64,
    ctx: &PrecisionContext,
) -> Result<Vec<TrajectoryPoint>> {
    let (params, record) = normalize_params(x, theta, big_n, ctx)?;
    let pts = partial_sums_strided(&params, ctx, DEFAULT_TERM_BUDGET, stride)?;
    Ok(pts
        .into_iter()
        .map(|(j, s)| {
            let s = record.restore(&s);
            let (re, im) = s.into_real_imag();
            TrajectoryPoint { j, re, im }
        })
        .collect())
}

fn cmd_curlicue(a: &CurlicueArgs) -> Result<(Report, Format)> {
    let ctx = context(a.digits, 0)?;
    let x = eval_str(&a.params.x, &ctx)?;
    let theta = eval_str(&a.params.theta, &ctx)?;
    let pts = curlicue_points(&x, &theta, a.params.big_n, a.stride, &ctx)?;
    let records = pts
        .into_iter()
        .map(|p| vec![("j", Field::Int(p.j as i64)), ("re", Field::Big(p.re)), ("im", Field::Big(p.im))])
        .collect();
    Ok((
        Report {
            records,
            single: false,
            digits: ctx.digits(),
        },
        a.format,
    ))
}

/// One grid point of the benchmark.
#[derive(Debug, Clone)]
pub struct BenchPoint {
    pub big_n: u64,
    pub direct_ns: u128,
    pub expansion_ns: u128,
    pub abs_error: f64,
    pub bound: f64,
    pub certified: bool,
}

impl BenchPoint {
    pub fn speedup(&self) -> f64 {
        self.direct_ns as f64 / self.expansion_ns.max(1) as f64
    }
}

/// Times both paths at one parameter set. Accuracy is certified when the
/// error is within the bound plus `1e4 eps N` of summation noise.
pub fn bench_point(params: &GaussParams, n: u32, ctx: &PrecisionContext) -> Result<BenchPoint> {
    let t = Instant::now();
    let s = direct_sum(params, ctx)?;
    let direct_ns = t.elapsed().as_nanos();
    let t = Instant::now();
    let rep = theorem1_eval(params, Some(n), ctx)?;
    let expansion_ns = t.elapsed().as_nanos();
    let err = abs_f64(&Complex::with_val(ctx.bits(), &s - &rep.value));
    let noise = 1e4 * ctx.eps_f64() * params.n() as f64;
    Ok(BenchPoint {
        big_n: params.n(),
        direct_ns,
        expansion_ns,
        abs_error: err,
        bound: rep.remainder_bound,
        certified: err <= rep.remainder_bound + noise,
    })
}

fn cmd_bench(a: &BenchArgs) -> Result<(Report, Format)> {
    let ctx = context(a.output.digits, 0)?;
    let grid = if a.big_n.is_empty() {
        vec![1_000, 10_000, 100_000, 1_000_000]
    } else {
        a.big_n.clone()
    };
    let nx = eval_str(&a.nx, &ctx)?;
    let theta = eval_str(&a.theta, &ctx)?;
    let mut records = Vec::new();
    let mut failed = Vec::new();
    for &big_n in &grid {
        let x = Float::with_val(ctx.bits(), &nx / big_n);
        let params = GaussParams::new(x.clone(), theta.clone(), big_n)?;
        let p = bench_point(&params, a.n, &ctx)?;
        if !p.certified {
            failed.push(big_n);
        }
        records.push(vec![
            ("N", Field::Int(big_n as i64)),
            ("x", Field::Big(x)),
            ("theta", Field::Big(theta.clone())),
            ("n", Field::Int(a.n as i64)),
            ("digits", Field::Int(ctx.digits() as i64)),
            ("abs_error", Field::Real(p.abs_error)),
            ("bound", Field::Real(p.bound)),
            ("certified", Field::Bool(p.certified)),
            ("direct_ns", Field::Int(p.direct_ns.min(i64::MAX as u128) as i64)),
            ("expansion_ns", Field::Int(p.expansion_ns.min(i64::MAX as u128) as i64)),
            ("speedup", Field::Real(p.speedup())),
        ]);
    }
    if !failed.is_empty() {
        return Err(GaussError::precision(format!(
            "error exceeded the remainder bound at N = {failed:?}"
        )));
    }
    Ok((
        Report {
            records,
            single: false,
            digits: ctx.digits(),
        },
        a.output.format,
    ))
}

/// Runs a parsed command and returns the rendered output and its destination.
pub fn run(cli: &Cli) -> Result<(String, Option<PathBuf>)> {
    let (report, format, out) = match &cli.command {
        Command::Sum(a) => with_out(cmd_sum(a)?, &a.output.out),
        Command::Exact(a) => with_out(cmd_exact(a)?, &a.output.out),
        Command::Asym(a) => with_out(cmd_asym(a)?, &a.output.out),
        Command::Table1(a) => with_out(cmd_table(a, false)?, &a.output.out),
        Command::Table2(a) => with_out(cmd_table(a, true)?, &a.output.out),
        Command::ResolveCol3(a) => with_out(cmd_resolve(a)?, &a.out),
        Command::Curlicue(a) => with_out(cmd_curlicue(a)?, &a.out),
        Command::Bench(a) => with_out(cmd_bench(a)?, &a.output.out),
    };
    Ok((report.render(format)?, out))
}

fn with_out((r, f): (Report, Format), out: &Option<PathBuf>) -> (Report, Format, Option<PathBuf>) {
    (r, f, out.clone())
}

/// Full process behaviour; returns the exit code. Nothing is written to the
/// output until the whole report has been produced.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok((text, None)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return 4;
            }
            0
        }
        Ok((text, Some(path))) => match std::fs::write(&path, text) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                4
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_figure_rounding() {
        assert!(agrees_3sf(2.2157e-4, 2.216e-4));
        assert!(!agrees_3sf(2.2251e-4, 2.216e-4));
        assert!(agrees_3sf_within_one(1.2049e-4, 1.198e-4));
        assert!(agrees_3sf_within_one(9.996e-5, 1.0e-4));
        assert!(!agrees_3sf_within_one(1.23e-4, 1.198e-4));
    }

    #[test]
    fn sci_formats() {
        assert_eq!(sci_f64(2.0), "2.0000000000000000e0");
        assert_eq!(sci_f64(0.0), "0e0");
        let f = Float::with_val(200, 2);
        assert_eq!(sci_big(&f, 30), format!("2.{}e0", "0".repeat(29)));
    }

    #[test]
    fn parse_negative_theta() {
        let cli = Cli::try_parse_from(["qgauss", "asym", "--x", "0.01", "--theta", "-0.125", "--N", "10", "--n", "3"]).unwrap();
        match cli.command {
            Command::Asym(a) => {
                assert_eq!(a.params.theta, "-0.125");
                assert_eq!(a.n, Some(3));
                assert_eq!(a.params.big_n, 10);
            }
            other => panic!("{other:?}"),
        }
    }
}
