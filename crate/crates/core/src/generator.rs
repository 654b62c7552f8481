use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{MeanError, Result};

/// Named generating functions on the positive half-line.
///
/// `Pow(0.0)` is the constant function 1. It is accepted as a weight `g` in a
/// Bajraktarević mean but rejected wherever strict monotonicity is required.
/// New generators are added as variants here; arbitrary closures are not
/// supported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "snake_case")]
pub enum Generator {
    Identity,
    Log,
    Exp,
    /// `x ↦ x^p`
    Pow(f64),
    /// `x ↦ −x^p`
    NegPow(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    None,
}

impl Generator {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Generator::Identity => x,
            Generator::Log => x.ln(),
            Generator::Exp => x.exp(),
            Generator::Pow(p) => x.powf(p),
            Generator::NegPow(p) => -x.powf(p),
        }
    }

    /// Evaluates and reports non-finite results as overflow.
    pub fn eval_checked(&self, x: f64) -> Result<f64> {
        let v = self.eval(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(MeanError::Overflow {
                generator: self.to_string(),
                at: x,
            })
        }
    }

    /// Inverse on the range of the generator. Undefined for constant generators.
    pub fn inverse(&self, y: f64) -> f64 {
        match *self {
            Generator::Identity => y,
            Generator::Log => y.exp(),
            Generator::Exp => y.ln(),
            Generator::Pow(p) => y.powf(1.0 / p),
            Generator::NegPow(p) => (-y).powf(1.0 / p),
        }
    }

    pub fn parameter(&self) -> Option<f64> {
        match *self {
            Generator::Pow(p) | Generator::NegPow(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_strictly_monotone(&self) -> bool {
        !matches!(*self, Generator::Pow(p) | Generator::NegPow(p) if p == 0.0)
    }

    /// Positivity on the whole of ℝ₊, as required of a Bajraktarević weight.
    pub fn is_positive(&self) -> bool {
        matches!(
            self,
            Generator::Identity | Generator::Exp | Generator::Pow(_)
        )
    }

    pub fn validate(&self) -> Result<()> {
        match self.parameter() {
            Some(p) if !p.is_finite() => Err(MeanError::InvalidExpr(format!(
                "generator parameter {p} is not finite"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Identity => write!(f, "id"),
            Generator::Log => write!(f, "log"),
            Generator::Exp => write!(f, "exp"),
            Generator::Pow(p) => write!(f, "pow:{p}"),
            Generator::NegPow(p) => write!(f, "negpow:{p}"),
        }
    }
}

/// Log-spaced probe grid used for sampled monotonicity contracts.
fn contract_grid() -> impl Iterator<Item = f64> {
    const POINTS: usize = 97;
    (0..POINTS).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / (POINTS - 1) as f64))
}

/// Sampled monotonicity of `f/g` on `[1e-3, 1e3]`; grid points where either
/// generator is not finite are skipped.
pub fn ratio_monotonicity(f: &Generator, g: &Generator) -> Monotonicity {
    let values: Vec<f64> = contract_grid()
        .map(|x| f.eval(x) / g.eval(x))
        .filter(|v| v.is_finite())
        .collect();
    if values.len() < 2 {
        return Monotonicity::None;
    }
    let inc = values.windows(2).all(|w| w[1] > w[0]);
    let dec = values.windows(2).all(|w| w[1] < w[0]);
    match (inc, dec) {
        (true, _) => Monotonicity::Increasing,
        (_, true) => Monotonicity::Decreasing,
        _ => Monotonicity::None,
    }
}
