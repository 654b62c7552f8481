use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{MeanError, Result};

/// A nonempty tuple of strictly positive, finite reals: the argument of every mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SampleVector(Vec<f64>);

impl SampleVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(MeanError::InvalidSample("empty vector".into()));
        }
        if let Some((i, v)) = entries
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(MeanError::InvalidSample(format!(
                "entry {i} = {v} is not a positive finite real"
            )));
        }
        Ok(Self(entries))
    }

    /// `(c, …, c)` of length `n`.
    pub fn constant(c: f64, n: usize) -> Result<Self> {
        Self::new(vec![c; n])
    }

    /// `(1, 1/2, …, 1/n)`.
    pub fn harmonic(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| 1.0 / i as f64).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&v| v == self.0[0])
    }

    /// Multiplies every entry by `t > 0`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|v| v * t).collect())
    }

    /// Blockwise repetition: each entry repeated `m` times in place.
    pub fn repeated(&self, m: usize) -> Self {
        Self(
            self.0
                .iter()
                .flat_map(|&v| std::iter::repeat_n(v, m))
                .collect(),
        )
    }

    /// Appends one positive entry.
    pub fn pushed(&self, v: f64) -> Result<Self> {
        let mut out = self.0.clone();
        out.push(v);
        Self::new(out)
    }
}

impl Deref for SampleVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for SampleVector {
    type Error = MeanError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SampleVector> for Vec<f64> {
    fn from(v: SampleVector) -> Self {
        v.0
    }
}
