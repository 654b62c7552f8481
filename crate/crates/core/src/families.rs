//! Power, quasi-arithmetic, Gini, Bajraktarević and deviation means.
//!
//! Exponent branches are selected exactly: `p == 0` and `p == q` are bitwise
//! tests. Exponents within [`NEAR_SINGULAR`] of a branch point are evaluated
//! with the general formula and lose accuracy to cancellation; see
//! [`exponent_warning`].

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{MeanError, Result};
use crate::generator::{ratio_monotonicity, Generator, Monotonicity};
use crate::numerics::{bisect, compensated_sum, log_power_sum, ROOT_MAX_ITER, ROOT_REL_TOL};
use crate::sample::SampleVector;

/// Distance to a branch point below which cancellation degrades accuracy.
pub const NEAR_SINGULAR: f64 = 1e-8;

/// Relative slack accepted at bracket endpoints when rounding pushes a
/// target just outside the range spanned by the endpoints.
const ENDPOINT_SLACK: f64 = 1e-12;

/// Warning text for exponents close to, but not on, a branch point.
pub fn exponent_warning(what: &str, distance: f64) -> Option<String> {
    (distance != 0.0 && distance.abs() < NEAR_SINGULAR).then(|| {
        format!("{what} = {distance:e} is within {NEAR_SINGULAR:e} of a branch point; accuracy degraded by cancellation")
    })
}

/// Index of the entry maximizing `p · ln x`.
fn reference_index(p: f64, logs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &l) in logs.iter().enumerate() {
        if p * l > p * logs[best] {
            best = i;
        }
    }
    best
}

/// The power (Hölder) mean `((Σ x^p)/n)^(1/p)`, geometric mean at `p = 0`.
///
/// The entry maximizing `x^p` is factored out before summing, so every term
/// lies in `(0, 1]`.
pub fn power_mean(p: f64, x: &SampleVector) -> f64 {
    let logs: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    if p == 0.0 {
        let r = reference_index(1.0, &logs);
        let mean_log = compensated_sum(logs.iter().map(|l| l - logs[r])) / n;
        return x[r] * mean_log.exp();
    }
    let r = reference_index(p, &logs);
    let s = compensated_sum(logs.iter().map(|l| (p * (l - logs[r])).exp()));
    x[r] * ((s / n).ln() / p).exp()
}

/// The Gini mean `((Σ x^p)/(Σ x^q))^(1/(p−q))`, with the exponential form at
/// `p = q`. The parameters are sorted first, so `G(p,q)` and `G(q,p)` run the
/// same computation.
pub fn gini_mean(p: f64, q: f64, x: &SampleVector) -> f64 {
    let (a, b) = if p >= q { (p, q) } else { (q, p) };
    let logs: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    if a == b {
        let r = reference_index(a, &logs);
        let mut num = crate::numerics::CompensatedSum::new();
        let mut den = crate::numerics::CompensatedSum::new();
        for &l in &logs {
            let d = l - logs[r];
            let w = (a * d).exp();
            num.add(w * d);
            den.add(w);
        }
        return x[r] * (num.value() / den.value()).exp();
    }
    let la = log_power_sum(a, &logs);
    let lb = log_power_sum(b, &logs);
    ((la - lb) / (a - b)).exp()
}

/// The quasi-arithmetic mean `f⁻¹((Σ f(x_i))/n)`.
pub fn quasi_arithmetic_mean(gen: &Generator, x: &SampleVector) -> Result<f64> {
    if !gen.is_strictly_monotone() {
        return Err(MeanError::InvalidExpr(format!(
            "generator `{gen}` is not strictly monotone"
        )));
    }
    let mut terms = Vec::with_capacity(x.len());
    for &v in x.iter() {
        terms.push(gen.eval_checked(v)?);
    }
    let m = compensated_sum(terms) / x.len() as f64;
    finish_inverse(gen, m, x)
}

pub(crate) fn finish_inverse(gen: &Generator, m: f64, x: &SampleVector) -> Result<f64> {
    let y = gen.inverse(m);
    if y.is_finite() && y > 0.0 {
        Ok(y)
    } else if x.is_constant() {
        Ok(x[0])
    } else {
        Err(MeanError::Overflow {
            generator: gen.to_string(),
            at: m,
        })
    }
}

/// Checks the weight/ratio contract of a Bajraktarević pair.
pub fn validate_pair(f: &Generator, g: &Generator) -> Result<Monotonicity> {
    f.validate()?;
    g.validate()?;
    if !g.is_positive() {
        return Err(MeanError::InvalidExpr(format!(
            "weight generator `{g}` is not positive on the positive reals"
        )));
    }
    match ratio_monotonicity(f, g) {
        Monotonicity::None => Err(MeanError::InvalidExpr(format!(
            "`{f}`/`{g}` is not strictly monotone on sampled points"
        ))),
        m => Ok(m),
    }
}

/// Solves `h(y) = 0` for a monotone `h` on `[lo, hi]`, accepting an endpoint
/// when rounding alone prevents a sign change.
fn solve_on_bracket<F>(
    solver: &'static str,
    mut h: F,
    lo: f64,
    hi: f64,
    scale: f64,
    rel_tol: f64,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if lo == hi {
        return Ok(lo);
    }
    let (h_lo, h_hi) = (h(lo), h(hi));
    if h_lo.signum() != h_hi.signum() || h_lo == 0.0 || h_hi == 0.0 {
        return bisect(solver, h, lo, hi, rel_tol, ROOT_MAX_ITER);
    }
    let slack = ENDPOINT_SLACK * scale;
    if h_lo.abs() <= h_hi.abs() && h_lo.abs() <= slack {
        Ok(lo)
    } else if h_hi.abs() <= slack {
        Ok(hi)
    } else {
        Err(MeanError::NoSignChange { solver, lo, hi })
    }
}

/// The Bajraktarević mean `(f/g)⁻¹((Σ f(x_i))/(Σ g(x_i)))`, inverted by
/// bisection on `[min x, max x]`.
pub fn bajraktarevic_mean(f: &Generator, g: &Generator, x: &SampleVector) -> Result<f64> {
    let mut sf = Vec::with_capacity(x.len());
    let mut sg = Vec::with_capacity(x.len());
    for &v in x.iter() {
        sf.push(f.eval_checked(v)?);
        sg.push(g.eval_checked(v)?);
    }
    bajraktarevic_from_sums(f, g, compensated_sum(sf), compensated_sum(sg), x.min(), x.max())
}

pub(crate) fn bajraktarevic_from_sums(
    f: &Generator,
    g: &Generator,
    sum_f: f64,
    sum_g: f64,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    let target = sum_f / sum_g;
    let ratio = |y: f64| f.eval(y) / g.eval(y);
    solve_on_bracket(
        "bajraktarevic inversion",
        |y| ratio(y) - target,
        lo,
        hi,
        target.abs().max(f64::MIN_POSITIVE),
        f64::EPSILON,
    )
}

/// A deviation function `E(x, y)`: zero on the diagonal, strictly decreasing in `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeviationSpec {
    /// `E(x, y) = x − y`
    Arithmetic,
    /// `E(x, y) = f(x) − g(x)·(f/g)(y)`
    FromPair { f: Generator, g: Generator },
}

impl DeviationSpec {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            DeviationSpec::Arithmetic => x - y,
            DeviationSpec::FromPair { f, g } => f.eval(x) - g.eval(x) * (f.eval(y) / g.eval(y)),
        }
    }

    /// `E(x, ·)` is strictly decreasing iff `f/g` is strictly increasing,
    /// given a positive `g`.
    pub fn validate(&self) -> Result<()> {
        match self {
            DeviationSpec::Arithmetic => Ok(()),
            DeviationSpec::FromPair { f, g } => match validate_pair(f, g)? {
                Monotonicity::Increasing => Ok(()),
                _ => Err(MeanError::InvalidExpr(format!(
                    "deviation pair ({f}, {g}) is increasing in its second argument; `{f}`/`{g}` must be increasing"
                ))),
            },
        }
    }
}

impl fmt::Display for DeviationSpec {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeviationSpec::Arithmetic => write!(fm, "arith"),
            DeviationSpec::FromPair { f, g } => write!(fm, "pair:{f},{g}"),
        }
    }
}

/// The deviation (Daróczy) mean: the root `y ∈ [min x, max x]` of
/// `Σ E(x_i, y) = 0`, found by bisection.
pub fn deviation_mean(dev: &DeviationSpec, x: &SampleVector) -> Result<f64> {
    let scale = compensated_sum(x.iter().map(|&xi| dev.eval(xi, x.min()).abs()))
        .max(f64::MIN_POSITIVE);
    solve_on_bracket(
        "deviation root",
        |y| compensated_sum(x.iter().map(|&xi| dev.eval(xi, y))),
        x.min(),
        x.max(),
        scale,
        ROOT_REL_TOL,
    )
}

/// Root of the deviation equation from aggregated sums, for prefix sweeps.
/// Both deviation kinds are affine in the per-entry terms, so
/// `Σ E(x_i, y)` is determined by `(Σ f(x_i), Σ g(x_i))`.
pub(crate) fn deviation_from_sums(
    dev: &DeviationSpec,
    sum_a: f64,
    sum_b: f64,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    let h = |y: f64| match dev {
        DeviationSpec::Arithmetic => sum_a - sum_b * y,
        DeviationSpec::FromPair { f, g } => sum_a - sum_b * (f.eval(y) / g.eval(y)),
    };
    let scale = h(lo).abs().max(h(hi).abs()).max(f64::MIN_POSITIVE);
    solve_on_bracket("deviation root", h, lo, hi, scale, ROOT_REL_TOL)
}
