//! Gaussian product of means: iterate `v ↦ (M_1(v), …, M_N(v))` until the
//! components agree.

use serde::{Deserialize, Serialize};

use crate::error::{MeanError, Result};
use crate::expr::MeanExpr;
use crate::sample::SampleVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussConfig {
    /// Stop once `(max − min)/max` of the iterate drops below this.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for GaussConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            max_iter: 10_000,
        }
    }
}

impl GaussConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(MeanError::InvalidConfig("gauss tolerance must be > 0".into()));
        }
        if self.max_iter < 1 {
            return Err(MeanError::InvalidConfig("gauss max iterations must be >= 1".into()));
        }
        Ok(())
    }
}

/// Outcome of a converged Gaussian iteration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussRun {
    /// Midpoint of the final bracket.
    pub value: f64,
    pub iterations: usize,
    /// `(min, max)` of each iterate, starting with the input.
    pub envelope: Vec<(f64, f64)>,
}

fn validate_means(means: &[MeanExpr]) -> Result<()> {
    if means.len() < 2 {
        return Err(MeanError::InvalidExpr(format!(
            "gaussian product needs at least 2 means, got {}",
            means.len()
        )));
    }
    means.iter().try_for_each(MeanExpr::validate)
}

/// One application of the mean vector: component `i` is `M_i(v)`.
pub fn gauss_step(means: &[MeanExpr], v: &SampleVector) -> Result<SampleVector> {
    validate_means(means)?;
    step_valid(means, v)
}

fn step_valid(means: &[MeanExpr], v: &SampleVector) -> Result<SampleVector> {
    let next = means
        .iter()
        .map(|m| m.eval_valid(v))
        .collect::<Result<Vec<_>>>()?;
    SampleVector::new(next)
}

/// The common limit of the iterates, as the midpoint of the final bracket.
pub fn gauss_product(means: &[MeanExpr], v: &SampleVector, cfg: &GaussConfig) -> Result<f64> {
    gauss_run(means, v, cfg).map(|r| r.value)
}

/// Like [`gauss_product`], also returning the iterate envelope.
pub fn gauss_run(means: &[MeanExpr], v: &SampleVector, cfg: &GaussConfig) -> Result<GaussRun> {
    cfg.validate()?;
    validate_means(means)?;
    product_valid(means, v, cfg)
}

pub(crate) fn product_valid(
    means: &[MeanExpr],
    v: &SampleVector,
    cfg: &GaussConfig,
) -> Result<GaussRun> {
    let mut current = v.clone();
    let mut envelope = Vec::new();
    for iterations in 0..=cfg.max_iter {
        let (lo, hi) = (current.min(), current.max());
        envelope.push((lo, hi));
        if (hi - lo) / hi < cfg.rel_tol {
            return Ok(GaussRun {
                value: lo + 0.5 * (hi - lo),
                iterations,
                envelope,
            });
        }
        if iterations == cfg.max_iter {
            return Err(MeanError::NonConvergence {
                solver: "gaussian product",
                iterations,
                gap: (hi - lo) / hi,
            });
        }
        current = step_valid(means, &current)?;
    }
    unreachable!("loop returns on its last iteration")
}
