//! Summation, log-domain power sums and bracketed bisection.

use crate::error::{MeanError, Result};

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = CompensatedSum::new();
    for v in it {
        s.add(v);
    }
    s.value()
}

/// `ln Σ exp(p · l_i)`, shifted by the largest exponent so no term overflows.
pub fn log_power_sum(p: f64, logs: &[f64]) -> f64 {
    let shift = logs
        .iter()
        .map(|&l| p * l)
        .fold(f64::NEG_INFINITY, f64::max);
    shift + compensated_sum(logs.iter().map(|&l| (p * l - shift).exp())).ln()
}

/// Relative stopping tolerance used for deviation-mean roots.
pub const ROOT_REL_TOL: f64 = 1e-13;
pub const ROOT_MAX_ITER: usize = 200;

/// Finds a root of a continuous, strictly monotone `f` on `[lo, hi]` with
/// `0 < lo <= hi`.
///
/// Wide brackets (`hi > 4 lo`) are split at the geometric midpoint so that
/// brackets spanning many orders of magnitude shrink quickly.
pub fn bisect<F>(
    solver: &'static str,
    mut f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let f_hi = f(hi);
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if lo == hi {
        return Ok(lo);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(MeanError::NoSignChange { solver, lo, hi });
    }
    let lo_positive = f_lo > 0.0;
    for _ in 0..max_iter {
        let mid = if hi > 4.0 * lo {
            (0.5 * (lo.ln() + hi.ln())).exp()
        } else {
            lo + 0.5 * (hi - lo)
        };
        if mid <= lo || mid >= hi || hi - lo <= rel_tol * hi {
            return Ok(mid.clamp(lo, hi));
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.is_nan() {
            return Err(MeanError::NoSignChange { solver, lo, hi });
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(MeanError::NonConvergence {
        solver,
        iterations: max_iter,
        gap: (hi - lo) / hi,
    })
}
