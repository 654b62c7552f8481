//! Sampling-based probes for the structural properties of a mean.
//!
//! A probe can only refute: `HoldsOnSamples` means no violation was found at
//! the configured tolerance on the sampled inputs.
//!
//! Non-strict properties are violated when the defining inequality fails by
//! more than `tolerance` (relative). Strict properties (strictly increasing,
//! min-diminishing, strictness) are violated when the strict gap is not
//! positive in floating point; their counterexample margin is the shortfall
//! `−gap ≥ 0`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{MeanError, Result};
use crate::expr::MeanExpr;
use crate::sample::SampleVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Symmetry,
    MeanValue,
    RepetitionInvariance,
    Homogeneity,
    Increasing,
    StrictlyIncreasing,
    JensenConcavity,
    JensenConvexity,
    MinDiminishing,
    Strictness,
}

impl Property {
    pub const ALL: [Property; 10] = [
        Property::Symmetry,
        Property::MeanValue,
        Property::RepetitionInvariance,
        Property::Homogeneity,
        Property::Increasing,
        Property::StrictlyIncreasing,
        Property::JensenConcavity,
        Property::JensenConvexity,
        Property::MinDiminishing,
        Property::Strictness,
    ];

    pub fn is_strict(self) -> bool {
        matches!(
            self,
            Property::StrictlyIncreasing | Property::MinDiminishing | Property::Strictness
        )
    }

    fn stream(self) -> u64 {
        Property::ALL.iter().position(|&p| p == self).unwrap() as u64 + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeConfig {
    pub samples: usize,
    pub min_dim: usize,
    pub max_dim: usize,
    pub seed: u64,
    /// Relative tolerance for non-strict properties.
    pub tolerance: f64,
    /// Entries are drawn log-uniformly from this range.
    pub entry_range: (f64, f64),
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            samples: 200,
            min_dim: 1,
            max_dim: 8,
            seed: 0,
            tolerance: 1e-9,
            entry_range: (1e-3, 1e3),
        }
    }
}

impl ProbeConfig {
    pub fn with_seed(seed: u64, samples: usize) -> Self {
        Self {
            seed,
            samples,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.entry_range;
        if self.samples < 1 {
            Err(MeanError::InvalidConfig("probe sample count must be >= 1".into()))
        } else if !(self.tolerance > 0.0) {
            Err(MeanError::InvalidConfig("probe tolerance must be > 0".into()))
        } else if self.min_dim < 1 || self.max_dim < self.min_dim {
            Err(MeanError::InvalidConfig("probe dimension range must satisfy 1 <= min <= max".into()))
        } else if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            Err(MeanError::InvalidConfig("probe entry range must satisfy 0 < lo <= hi".into()))
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub inputs: Vec<Vec<f64>>,
    pub observed: Vec<f64>,
    pub margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsOnSamples,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyOutcome {
    pub property: Property,
    pub verdict: Verdict,
    /// Number of samples on which the property was applicable.
    pub checked: usize,
    /// Worst violation found.
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub expr: String,
    pub config: ProbeConfig,
    pub outcomes: Vec<PropertyOutcome>,
    pub note: &'static str,
}

impl PropertyReport {
    pub fn outcome(&self, p: Property) -> Option<&PropertyOutcome> {
        self.outcomes.iter().find(|o| o.property == p)
    }

    /// `true` when `p` was probed and no violation was found.
    pub fn holds(&self, p: Property) -> bool {
        self.outcome(p)
            .is_some_and(|o| o.verdict == Verdict::HoldsOnSamples)
    }
}

const NOTE: &str = "sampling-based: holds_on_samples means no violation was found at the configured tolerance";

/// Probes every property in [`Property::ALL`].
pub fn probe_properties(expr: &MeanExpr, cfg: &ProbeConfig) -> Result<PropertyReport> {
    probe_selected(expr, cfg, &Property::ALL)
}

/// Probes only the listed properties. Each property draws from its own
/// seeded stream, so the outcome for one property does not depend on which
/// others are requested.
pub fn probe_selected(
    expr: &MeanExpr,
    cfg: &ProbeConfig,
    properties: &[Property],
) -> Result<PropertyReport> {
    cfg.validate()?;
    expr.validate()?;
    let outcomes = properties
        .iter()
        .map(|&p| probe_one(expr, cfg, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(PropertyReport {
        expr: expr.to_string(),
        config: cfg.clone(),
        outcomes,
        note: NOTE,
    })
}

struct Sampler<'a> {
    rng: ChaCha8Rng,
    cfg: &'a ProbeConfig,
}

impl Sampler<'_> {
    fn entry(&mut self) -> f64 {
        let (lo, hi) = self.cfg.entry_range;
        (lo.ln() + self.rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
    }

    fn dim(&mut self, at_least: usize) -> usize {
        let lo = self.cfg.min_dim.max(at_least);
        let hi = self.cfg.max_dim.max(lo);
        self.rng.random_range(lo..=hi)
    }

    fn vector(&mut self, n: usize) -> SampleVector {
        SampleVector::new((0..n).map(|_| self.entry()).collect()).expect("positive entries")
    }

    /// A vector of random dimension `≥ at_least`.
    fn any_vector(&mut self, at_least: usize) -> SampleVector {
        let n = self.dim(at_least);
        self.vector(n)
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

struct Worst {
    margin: f64,
    example: Option<Counterexample>,
}

impl Worst {
    fn offer(&mut self, violated: bool, margin: f64, make: impl FnOnce() -> Counterexample) {
        if violated && (self.example.is_none() || margin > self.margin) {
            self.margin = margin;
            self.example = Some(make());
        }
    }
}

fn probe_one(expr: &MeanExpr, cfg: &ProbeConfig, property: Property) -> Result<PropertyOutcome> {
    let mut s = Sampler {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ property.stream().wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        cfg,
    };
    let tol = cfg.tolerance;
    let mut worst = Worst {
        margin: 0.0,
        example: None,
    };
    let mut checked = 0;
    for _ in 0..cfg.samples {
        match property {
            Property::Symmetry => {
                let x = s.any_vector(1);
                let mut perm = x.to_vec();
                perm.shuffle(&mut s.rng);
                let perm = SampleVector::new(perm)?;
                let (a, b) = (expr.evaluate(&x)?, expr.evaluate(&perm)?);
                let m = rel_diff(a, b);
                worst.offer(m > tol, m, || Counterexample {
                    inputs: vec![x.to_vec(), perm.to_vec()],
                    observed: vec![a, b],
                    margin: m,
                    detail: "M(x) != M(permuted x)".into(),
                });
            }
            Property::MeanValue => {
                let x = s.any_vector(1);
                let v = expr.evaluate(&x)?;
                let m = ((x.min() - v) / x.min()).max((v - x.max()) / x.max());
                worst.offer(m > tol, m, || Counterexample {
                    inputs: vec![x.to_vec()],
                    observed: vec![x.min(), v, x.max()],
                    margin: m,
                    detail: "M(x) outside [min x, max x]".into(),
                });
            }
            Property::RepetitionInvariance => {
                let x = s.any_vector(1);
                let v = expr.evaluate(&x)?;
                for reps in [2, 3] {
                    let r = x.repeated(reps);
                    let w = expr.evaluate(&r)?;
                    let m = rel_diff(v, w);
                    worst.offer(m > tol, m, || Counterexample {
                        inputs: vec![x.to_vec(), r.to_vec()],
                        observed: vec![v, w],
                        margin: m,
                        detail: format!("M(x) != M(x repeated {reps} times blockwise)"),
                    });
                }
            }
            Property::Homogeneity => {
                let x = s.any_vector(1);
                let t = (s.rng.random::<f64>() * 4.0 - 2.0) * std::f64::consts::LN_10;
                let t = t.exp();
                let tx = x.scaled(t)?;
                let (a, b) = (expr.evaluate(&tx)?, t * expr.evaluate(&x)?);
                let m = rel_diff(a, b);
                worst.offer(m > tol, m, || Counterexample {
                    inputs: vec![x.to_vec(), tx.to_vec()],
                    observed: vec![a, b, t],
                    margin: m,
                    detail: "M(t x) != t M(x)".into(),
                });
            }
            Property::Increasing | Property::StrictlyIncreasing => {
                let x = s.any_vector(1);
                let i = s.rng.random_range(0..x.len());
                let mut bumped = x.to_vec();
                bumped[i] *= 1.1;
                let bumped = SampleVector::new(bumped)?;
                let (a, b) = (expr.evaluate(&x)?, expr.evaluate(&bumped)?);
                let gain = (b - a) / a;
                let (violated, m) = if property == Property::Increasing {
                    (-gain > tol, -gain)
                } else {
                    (gain <= 0.0, -gain)
                };
                worst.offer(violated, m, || Counterexample {
                    inputs: vec![x.to_vec(), bumped.to_vec()],
                    observed: vec![a, b],
                    margin: m,
                    detail: format!("coordinate {i} raised by 10%"),
                });
            }
            Property::JensenConcavity | Property::JensenConvexity => {
                let n = s.dim(1);
                let (u, w) = (s.vector(n), s.vector(n));
                let mid = SampleVector::new(u.iter().zip(w.iter()).map(|(a, b)| 0.5 * (a + b)).collect())?;
                let at_mid = expr.evaluate(&mid)?;
                let avg = 0.5 * (expr.evaluate(&u)? + expr.evaluate(&w)?);
                let scale = at_mid.abs().max(avg.abs());
                let m = if property == Property::JensenConcavity {
                    (avg - at_mid) / scale
                } else {
                    (at_mid - avg) / scale
                };
                worst.offer(m > tol, m, || Counterexample {
                    inputs: vec![u.to_vec(), w.to_vec()],
                    observed: vec![at_mid, avg],
                    margin: m,
                    detail: "M((u+v)/2) vs (M(u)+M(v))/2".into(),
                });
            }
            Property::MinDiminishing => {
                let x = s.any_vector(2);
                if x.is_constant() {
                    continue;
                }
                let ext = x.pushed(x.min())?;
                let (a, b) = (expr.evaluate(&x)?, expr.evaluate(&ext)?);
                let gap = (a - b) / a;
                worst.offer(gap <= 0.0, -gap, || Counterexample {
                    inputs: vec![x.to_vec(), ext.to_vec()],
                    observed: vec![a, b],
                    margin: -gap,
                    detail: "M(x, min x) not below M(x)".into(),
                });
            }
            Property::Strictness => {
                let x = s.any_vector(2);
                if x.is_constant() {
                    continue;
                }
                let v = expr.evaluate(&x)?;
                let gap = ((v - x.min()) / v).min((x.max() - v) / v);
                worst.offer(gap <= 0.0, -gap, || Counterexample {
                    inputs: vec![x.to_vec()],
                    observed: vec![x.min(), v, x.max()],
                    margin: -gap,
                    detail: "M(x) not strictly between min and max".into(),
                });
            }
        }
        checked += 1;
    }
    Ok(PropertyOutcome {
        property,
        verdict: if worst.example.is_some() {
            Verdict::Violated
        } else {
            Verdict::HoldsOnSamples
        },
        checked,
        counterexample: worst.example,
    })
}
