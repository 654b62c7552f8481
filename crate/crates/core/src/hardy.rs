//! Hardy constants: the sequence `p_n = n·M(1, 1/2, …, 1/n)`, sup–liminf
//! grid estimates, lower bounds on the truncated constants `Hc_n`, and the
//! registry of known closed forms.
//!
//! For increasing, symmetric, repetition invariant, Jensen concave and
//! homogeneous means, `p_n` is nondecreasing and converges to the Hardy
//! constant, so `p_{n_max}` is a lower estimate of it. Outside that class
//! every number produced here is an uncertified estimate and is labelled so.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{MeanError, Result};
use crate::expr::MeanExpr;
use crate::gauss::{gauss_product, GaussConfig};
use crate::optimize::NelderMead;
use crate::prefix::{prefix_means, PrefixEvaluator};
use crate::probe::{probe_selected, Property, ProbeConfig};
use crate::sample::SampleVector;

/// A nonnegative extended real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            ExtReal::Infinite => s.serialize_str("inf"),
        }
    }
}

// ---------------------------------------------------------------------------
// p_n

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PnSequence {
    /// `values[n-1] = p_n`.
    pub values: Vec<f64>,
    /// Largest observed `p_n − p_{n+1}` (0 when nondecreasing).
    pub max_decrease: f64,
    pub max_decrease_at: Option<usize>,
    /// First `n` with `p_n` above the ceiling, if the sweep stopped there.
    pub ceiling_witness: Option<usize>,
}

impl PnSequence {
    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("n_max >= 1")
    }

    pub fn get(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    /// `(n, p_n)` at `n_max/4`, `n_max/2` and `n_max`.
    pub fn growth_trace(&self) -> Vec<(usize, f64)> {
        let n = self.n_max();
        let mut points: Vec<usize> = [n / 4, n / 2, n].into_iter().filter(|&k| k >= 1).collect();
        points.dedup();
        points.into_iter().map(|k| (k, self.get(k))).collect()
    }
}

/// `p_n = n·M(1, 1/2, …, 1/n)` for `n = 1..=n_max`.
pub fn pn_sequence(expr: &MeanExpr, n_max: usize) -> Result<PnSequence> {
    pn_sequence_with_ceiling(expr, n_max, None)
}

/// As [`pn_sequence`], stopping at the first `p_n` above `ceiling`.
pub fn pn_sequence_with_ceiling(
    expr: &MeanExpr,
    n_max: usize,
    ceiling: Option<f64>,
) -> Result<PnSequence> {
    if n_max < 1 {
        return Err(MeanError::InvalidConfig("n_max must be >= 1".into()));
    }
    let mut ev = PrefixEvaluator::new(expr)?;
    let mut values = Vec::with_capacity(n_max);
    let mut ceiling_witness = None;
    for n in 1..=n_max {
        let p = n as f64 * ev.push(1.0 / n as f64)?;
        values.push(p);
        if ceiling.is_some_and(|c| p > c) {
            ceiling_witness = Some(n);
            break;
        }
    }
    let (mut max_decrease, mut max_decrease_at) = (0.0, None);
    for (i, w) in values.windows(2).enumerate() {
        let d = w[0] - w[1];
        if d > max_decrease {
            max_decrease = d;
            max_decrease_at = Some(i + 1);
        }
    }
    Ok(PnSequence {
        values,
        max_decrease,
        max_decrease_at,
        ceiling_witness,
    })
}

// ---------------------------------------------------------------------------
// Closed forms

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm {
    Finite { value: f64, source: &'static str },
    NotHardy { reason: &'static str },
}

impl ClosedForm {
    pub fn value(&self) -> Option<f64> {
        match self {
            ClosedForm::Finite { value, .. } => Some(*value),
            ClosedForm::NotHardy { .. } => None,
        }
    }
}

fn power_constant(p: f64) -> ClosedForm {
    if p == 0.0 {
        ClosedForm::Finite {
            value: std::f64::consts::E,
            source: "power mean, p = 0: e",
        }
    } else if p < 1.0 {
        ClosedForm::Finite {
            value: (1.0 - p).powf(-1.0 / p),
            source: "power mean, p < 1: (1-p)^(-1/p)",
        }
    } else {
        ClosedForm::NotHardy {
            reason: "power mean with p >= 1 is not a Hardy mean",
        }
    }
}

fn gini_constant(p: f64, q: f64) -> Option<ClosedForm> {
    let (lo, hi) = (p.min(q), p.max(q));
    if lo <= 0.0 && 0.0 <= hi && hi < 1.0 {
        Some(if p == q {
            ClosedForm::Finite {
                value: std::f64::consts::E,
                source: "gini mean, p = q = 0: e",
            }
        } else {
            ClosedForm::Finite {
                value: ((1.0 - q) / (1.0 - p)).powf(1.0 / (p - q)),
                source: "gini mean, min(p,q) <= 0 <= max(p,q) < 1: ((1-q)/(1-p))^(1/(p-q))",
            }
        })
    } else if !(lo <= 0.0 && hi < 1.0) {
        Some(ClosedForm::NotHardy {
            reason: "gini mean is Hardy only if min(p,q) <= 0 and max(p,q) < 1",
        })
    } else {
        None
    }
}

/// Registry of known Hardy constants.
///
/// * power means: `(1−p)^(−1/p)` for `p < 1`, `e` at `p = 0`, not Hardy for `p ≥ 1`;
/// * Gini means with `min(p,q) ≤ 0 ≤ max(p,q) < 1`: `((1−q)/(1−p))^(1/(p−q))`,
///   `e` at `p = q = 0`; not Hardy when `min(p,q) > 0` or `max(p,q) ≥ 1`;
/// * Gaussian products of registry means from the two classes above: the
///   product evaluated at the children's constants. A product of power means
///   is not Hardy as soon as one exponent is `≥ 1`.
pub fn closed_form_hardy(expr: &MeanExpr) -> Option<ClosedForm> {
    if let Some(p) = expr.power_exponent() {
        return Some(power_constant(p));
    }
    match expr {
        MeanExpr::Gini(p, q) => gini_constant(*p, *q),
        MeanExpr::Gauss(children) => {
            let forms: Vec<Option<ClosedForm>> = children.iter().map(closed_form_hardy).collect();
            let all_power = children.iter().all(|c| c.power_exponent().is_some());
            if all_power && forms.iter().any(|f| matches!(f, Some(ClosedForm::NotHardy { .. }))) {
                return Some(ClosedForm::NotHardy {
                    reason: "gaussian product of power means is Hardy only if every exponent is < 1",
                });
            }
            let constants = forms
                .iter()
                .map(|f| f.as_ref().and_then(ClosedForm::value))
                .collect::<Option<Vec<f64>>>()?;
            let at = SampleVector::new(constants).ok()?;
            let value = gauss_product(children, &at, &GaussConfig::default()).ok()?;
            Some(ClosedForm::Finite {
                value,
                source: "gaussian product evaluated at the children's Hardy constants",
            })
        }
        _ => None,
    }
}

/// Relative tolerance of `p_{10^4}` against the closed form, where published.
///
/// 0.5% for power means with `p ≤ 0` and Gini means with both parameters
/// `≤ 0`; 1.5% when the largest exponent lies in `(0, 1)`. A Gaussian product
/// takes the loosest tolerance of its children.
pub fn convergence_tolerance(expr: &MeanExpr) -> Option<f64> {
    let by_max = |hi: f64| {
        if hi <= 0.0 {
            Some(0.005)
        } else if hi < 1.0 {
            Some(0.015)
        } else {
            None
        }
    };
    if let Some(p) = expr.power_exponent() {
        return by_max(p);
    }
    match expr {
        MeanExpr::Gini(p, q) => by_max(p.max(*q)),
        MeanExpr::Gauss(children) => children
            .iter()
            .map(convergence_tolerance)
            .collect::<Option<Vec<f64>>>()
            .map(|v| v.into_iter().fold(0.0, f64::max)),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Hardy constant estimate

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HardyMethod {
    HomogeneousLimit,
    SupLiminfGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    #[serde(rename = "certified-from-below")]
    CertifiedFromBelow,
    #[serde(rename = "estimate (uncertified)")]
    Uncertified,
    #[serde(rename = "closed form")]
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Divergence {
    /// First `n` at which the growth ceiling was crossed.
    pub witness_n: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardyConfig {
    pub n_max: usize,
    /// `y` values for the sup–liminf estimator; 41 log-spaced points in
    /// `[1e-3, 1e3]` when absent.
    pub y_grid: Option<Vec<f64>>,
    /// `p_n` above this declares the mean non-Hardy at this scale.
    pub ceiling: f64,
    /// Probes deciding the method and annotating the hypotheses.
    pub probe: ProbeConfig,
}

impl Default for HardyConfig {
    fn default() -> Self {
        Self {
            n_max: 10_000,
            y_grid: None,
            ceiling: 1e6,
            probe: ProbeConfig::with_seed(0, 64),
        }
    }
}

pub fn default_y_grid() -> Vec<f64> {
    log_grid(1e-3, 1e3, 41)
}

pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    (0..points)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardyEstimate {
    pub method: HardyMethod,
    pub provenance: Provenance,
    pub estimate: ExtReal,
    pub n_max: usize,
    pub y_grid: Option<Vec<f64>>,
    pub reference: Option<ClosedForm>,
    pub tolerance: Option<f64>,
    pub divergence: Option<Divergence>,
    /// Probed hypotheses of the limit formula and their verdicts.
    pub hypotheses: Vec<(Property, bool)>,
    pub growth_trace: Vec<(usize, f64)>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub pn: Option<PnSequence>,
}

const HYPOTHESES: [Property; 5] = [
    Property::Homogeneity,
    Property::Symmetry,
    Property::Increasing,
    Property::RepetitionInvariance,
    Property::JensenConcavity,
];

/// Estimates the Hardy constant of `expr`.
///
/// Homogeneous means (by probe) use `p_{n_max}`; others use the sup–liminf
/// grid estimator. A registry verdict of "not Hardy" or `p_n` crossing the
/// ceiling yields an infinite estimate with a divergence record.
pub fn hardy_constant(expr: &MeanExpr, cfg: &HardyConfig) -> Result<HardyEstimate> {
    expr.validate()?;
    if cfg.n_max < 1 {
        return Err(MeanError::InvalidConfig("n_max must be >= 1".into()));
    }
    if !(cfg.ceiling > 1.0) {
        return Err(MeanError::InvalidConfig("ceiling must exceed 1".into()));
    }
    let reference = closed_form_hardy(expr);
    cfg.probe.validate()?;
    let mut notes = expr.precision_warnings();
    // a probe that cannot evaluate the mean (e.g. generator overflow on the
    // probe range) leaves every hypothesis unverified
    let hypotheses: Vec<(Property, bool)> = match probe_selected(expr, &cfg.probe, &HYPOTHESES) {
        Ok(report) => HYPOTHESES.iter().map(|&p| (p, report.holds(p))).collect(),
        Err(e) => {
            notes.push(format!("property probes failed to evaluate ({}): {e}", e.code()));
            HYPOTHESES.iter().map(|&p| (p, false)).collect()
        }
    };
    let homogeneous = hypotheses[0].1;
    let failed: Vec<String> = hypotheses
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(p, _)| format!("{p:?}"))
        .collect();

    if !failed.is_empty() {
        notes.push(format!(
            "probes found violations of: {}; the limit formula is not guaranteed",
            failed.join(", ")
        ));
    }
    let not_hardy = match &reference {
        Some(ClosedForm::NotHardy { reason }) => Some(*reason),
        _ => None,
    };

    let (method, value, y_grid, pn, witness) = if homogeneous {
        let pn = pn_sequence_with_ceiling(expr, cfg.n_max, Some(cfg.ceiling))?;
        if pn.max_decrease > 1e-11 {
            notes.push(format!(
                "p_n decreased by {:e} at n = {}",
                pn.max_decrease,
                pn.max_decrease_at.unwrap_or(0)
            ));
        }
        (HardyMethod::HomogeneousLimit, pn.last(), None, Some(pn.clone()), pn.ceiling_witness)
    } else {
        let grid = cfg.y_grid.clone().unwrap_or_else(default_y_grid);
        let (value, witness) = sup_liminf_grid(expr, cfg.n_max, &grid, cfg.ceiling)?;
        notes.push("sup over y and liminf over n are approximated on a finite grid and tail window".into());
        (HardyMethod::SupLiminfGrid, value, Some(grid), None, witness)
    };

    let divergence = if let Some(n) = witness {
        Some(Divergence {
            witness_n: Some(n),
            reason: format!("growth exceeded ceiling {:e}: non-Hardy at this scale", cfg.ceiling),
        })
    } else {
        not_hardy.map(|r| Divergence {
            witness_n: None,
            reason: r.to_string(),
        })
    };

    let growth_trace = pn.as_ref().map(PnSequence::growth_trace).unwrap_or_default();
    if divergence.is_none() && reference.is_none() && growth_trace.len() == 3 {
        let (d1, d2) = (growth_trace[2].1 - growth_trace[1].1, growth_trace[1].1 - growth_trace[0].1);
        if d2 > 0.0 && d1 / d2 > 0.97 {
            notes.push("p_n increments are not shrinking; divergence is not excluded".into());
        }
    }

    let provenance = if divergence.is_some() {
        Provenance::ClosedForm
    } else if method == HardyMethod::HomogeneousLimit && failed.is_empty() {
        Provenance::CertifiedFromBelow
    } else {
        Provenance::Uncertified
    };
    if divergence.is_some() {
        notes.push(format!("last computed value {value} is not a constant"));
    }

    Ok(HardyEstimate {
        method,
        provenance,
        estimate: if divergence.is_some() {
            ExtReal::Infinite
        } else {
            ExtReal::Finite(value)
        },
        n_max: cfg.n_max,
        y_grid,
        tolerance: convergence_tolerance(expr),
        reference,
        divergence,
        hypotheses,
        growth_trace,
        notes,
        pn,
    })
}

/// `max_y min_{n ∈ window} (n/y)·M(y/1, …, y/n)`, with the first ceiling
/// crossing (if any).
fn sup_liminf_grid(
    expr: &MeanExpr,
    n_max: usize,
    grid: &[f64],
    ceiling: f64,
) -> Result<(f64, Option<usize>)> {
    if grid.is_empty() || grid.iter().any(|y| !(y.is_finite() && *y > 0.0)) {
        return Err(MeanError::InvalidConfig("y grid must be nonempty and positive".into()));
    }
    let window_start = (n_max / 2).max(1);
    let per_y = grid
        .par_iter()
        .map(|&y| -> Result<(f64, Option<usize>)> {
            let mut ev = PrefixEvaluator::new(expr)?;
            let mut tail_min = f64::INFINITY;
            for n in 1..=n_max {
                let v = n as f64 / y * ev.push(y / n as f64)?;
                if v > ceiling {
                    return Ok((v, Some(n)));
                }
                if n >= window_start {
                    tail_min = tail_min.min(v);
                }
            }
            Ok((tail_min, None))
        })
        .collect::<Result<Vec<_>>>()?;
    let witness = per_y.iter().filter_map(|r| r.1).min();
    let best = per_y.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    Ok((best, witness))
}

// ---------------------------------------------------------------------------
// Liminf lower bound

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonSummable {
    /// `x_n = 1/n`
    Harmonic,
    /// `x_n = 1`
    Constant,
    /// `x_n = 1/√n`
    Sqrt,
}

impl NonSummable {
    pub fn term(self, n: usize) -> f64 {
        match self {
            NonSummable::Harmonic => 1.0 / n as f64,
            NonSummable::Constant => 1.0,
            NonSummable::Sqrt => 1.0 / (n as f64).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiminfEstimate {
    pub estimate: f64,
    pub window: (usize, usize),
    /// Index at which the window minimum is attained.
    pub argmin_n: usize,
}

/// `min_{n ∈ [n_max/2, n_max]} M(x_1, …, x_n) / x_n`, estimating the liminf
/// that bounds the Hardy constant from below.
pub fn liminf_ratio(expr: &MeanExpr, seq: NonSummable, n_max: usize) -> Result<LiminfEstimate> {
    if n_max < 2 {
        return Err(MeanError::InvalidConfig("n_max must be >= 2".into()));
    }
    let mut ev = PrefixEvaluator::new(expr)?;
    let lo = n_max / 2;
    let (mut best, mut at) = (f64::INFINITY, lo);
    for n in 1..=n_max {
        let x = seq.term(n);
        let m = ev.push(x)?;
        if n >= lo {
            let r = m / x;
            if r < best {
                best = r;
                at = n;
            }
        }
    }
    Ok(LiminfEstimate {
        estimate: best,
        window: (lo, n_max),
        argmin_n: at,
    })
}

// ---------------------------------------------------------------------------
// Partial sums

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialCheck {
    pub n: usize,
    /// `Σ_k M(x_1, …, x_k) / Σ_k x_k`.
    pub ratio: f64,
    pub constant: f64,
    pub strictly_below: bool,
}

pub fn hardy_ratio(expr: &MeanExpr, x: &[f64]) -> Result<f64> {
    let means = prefix_means(expr, x)?;
    Ok(means.iter().sum::<f64>() / x.iter().sum::<f64>())
}

/// Compares the truncated Hardy ratio of `x` with a reference constant.
pub fn hardy_partial_check(expr: &MeanExpr, x: &SampleVector, constant: f64) -> Result<PartialCheck> {
    if !(constant > 0.0) {
        return Err(MeanError::InvalidConfig("reference constant must be > 0".into()));
    }
    let ratio = hardy_ratio(expr, x)?;
    Ok(PartialCheck {
        n: x.len(),
        ratio,
        constant,
        strictly_below: ratio < constant,
    })
}

// ---------------------------------------------------------------------------
// Lower bounds on Hc_n

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeqBoundConfig {
    pub restarts: usize,
    pub seed: u64,
    /// Objective evaluations per restart.
    pub budget: usize,
    /// Search the unit simplex (scale-free ratio). Decided by a homogeneity
    /// probe when absent.
    pub homogeneous: Option<bool>,
}

impl Default for SeqBoundConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            seed: 0,
            budget: 4_000,
            homogeneous: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardySeqBound {
    pub n: usize,
    /// Best ratio found: a lower estimate of `Hc_n`.
    pub estimate: f64,
    /// The vector attaining `estimate`.
    pub argmax: Vec<f64>,
    pub restarts: usize,
    pub evaluations: usize,
    /// Best objective after each restart, in restart order.
    pub best_trace: Vec<f64>,
    pub simplex_search: bool,
}

/// Softmax coordinates clamp; `e^-50` keeps entries positive and negligible.
const SIMPLEX_BOUND: f64 = 50.0;
/// Log-coordinates clamp for scale-dependent means: `x ∈ [1e-6, 1e6]`.
const LOG_BOUND: f64 = 13.815_510_557_964_274;

struct Search<'a> {
    expr: &'a MeanExpr,
    n: usize,
    simplex: bool,
}

impl Search<'_> {
    fn dim(&self) -> usize {
        if self.simplex {
            self.n - 1
        } else {
            self.n
        }
    }

    fn bound(&self) -> f64 {
        if self.simplex {
            SIMPLEX_BOUND
        } else {
            LOG_BOUND
        }
    }

    fn point(&self, z: &[f64]) -> Vec<f64> {
        if self.simplex {
            let m = z.iter().copied().fold(0.0, f64::max);
            let w: Vec<f64> = std::iter::once(0.0).chain(z.iter().copied()).map(|v| (v - m).exp()).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|v| v / s).collect()
        } else {
            z.iter().map(|v| v.exp()).collect()
        }
    }

    fn coords(&self, x: &[f64]) -> Vec<f64> {
        let b = self.bound();
        if self.simplex {
            x[1..].iter().map(|v| (v / x[0]).ln().clamp(-b, b)).collect()
        } else {
            x.iter().map(|v| v.ln().clamp(-b, b)).collect()
        }
    }

    fn objective(&self, z: &[f64]) -> f64 {
        hardy_ratio(self.expr, &self.point(z)).unwrap_or(f64::NAN)
    }

    fn run(&self, start: &[f64], budget: usize) -> (Vec<f64>, f64, usize) {
        let nm = NelderMead {
            initial_step: 1.0,
            max_evaluations: budget / 2,
            f_tol: 1e-15,
            bound: self.bound(),
        };
        let first = nm.minimize(|z| -self.objective(z), start);
        let polish = NelderMead {
            initial_step: 0.1,
            max_evaluations: budget - budget / 2,
            ..nm
        };
        let second = polish.minimize(|z| -self.objective(z), &first.x);
        (second.x, -second.value, first.evaluations + second.evaluations)
    }
}

fn bound_search(
    expr: &MeanExpr,
    n: usize,
    cfg: &SeqBoundConfig,
    simplex: bool,
    warm: Option<&[f64]>,
) -> Result<HardySeqBound> {
    if n == 1 {
        return Ok(HardySeqBound {
            n,
            estimate: 1.0,
            argmax: vec![1.0],
            restarts: 0,
            evaluations: 0,
            best_trace: vec![],
            simplex_search: simplex,
        });
    }
    let search = Search { expr, n, simplex };
    let dim = search.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if let Some(w) = warm {
        let mut x = w.to_vec();
        x.push(w.iter().copied().fold(f64::INFINITY, f64::min) * (-SIMPLEX_BOUND).exp());
        starts.push(search.coords(&x));
    }
    // decaying sequence, then the flat vector, then random points
    starts.push(match simplex {
        true => (1..=dim).map(|i| -(i as f64)).collect(),
        false => (0..dim).map(|i| -(i as f64)).collect(),
    });
    starts.push(vec![0.0; dim]);
    while starts.len() < cfg.restarts.max(1) + warm.is_some() as usize {
        starts.push((0..dim).map(|_| rng.random_range(-5.0..5.0)).collect());
    }

    let runs: Vec<(Vec<f64>, f64, usize)> = starts
        .par_iter()
        .map(|s| search.run(s, cfg.budget.max(2 * (dim + 2))))
        .collect();

    let mut best: Option<(usize, f64)> = None;
    let mut best_trace = Vec::with_capacity(runs.len());
    for (i, r) in runs.iter().enumerate() {
        if r.1.is_finite() && best.is_none_or(|(_, v)| r.1 > v) {
            best = Some((i, r.1));
        }
        best_trace.push(best.map_or(f64::NAN, |b| b.1));
    }
    let (i, _) = best.ok_or(MeanError::BudgetExhausted)?;
    let argmax = search.point(&runs[i].0);
    let estimate = hardy_ratio(expr, &argmax)?;
    Ok(HardySeqBound {
        n,
        estimate,
        argmax,
        restarts: runs.len(),
        evaluations: runs.iter().map(|r| r.2).sum(),
        best_trace,
        simplex_search: simplex,
    })
}

fn use_simplex(expr: &MeanExpr, cfg: &SeqBoundConfig) -> Result<bool> {
    match cfg.homogeneous {
        Some(h) => Ok(h),
        None => {
            let r = probe_selected(expr, &ProbeConfig::with_seed(cfg.seed, 64), &[Property::Homogeneity]);
            Ok(r.is_ok_and(|r| r.holds(Property::Homogeneity)))
        }
    }
}

/// Multi-start Nelder–Mead search for `max R(x)`,
/// `R(x) = (M(x_1) + … + M(x_1, …, x_n)) / (x_1 + … + x_n)`.
/// The result is a lower estimate of `Hc_n`.
pub fn hardy_sequence_bound(expr: &MeanExpr, n: usize, cfg: &SeqBoundConfig) -> Result<HardySeqBound> {
    expr.validate()?;
    if n < 1 {
        return Err(MeanError::InvalidConfig("n must be >= 1".into()));
    }
    let simplex = use_simplex(expr, cfg)?;
    bound_search(expr, n, cfg, simplex, None)
}

/// Bounds for `n = 1..=n_max`, each search also started from the previous
/// maximizer with a negligible entry appended, so the estimates are
/// nondecreasing in `n` up to rounding.
pub fn hardy_sequence_bounds(expr: &MeanExpr, n_max: usize, cfg: &SeqBoundConfig) -> Result<Vec<HardySeqBound>> {
    expr.validate()?;
    if n_max < 1 {
        return Err(MeanError::InvalidConfig("n must be >= 1".into()));
    }
    let simplex = use_simplex(expr, cfg)?;
    let mut out: Vec<HardySeqBound> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let warm = out.last().map(|b| b.argmax.as_slice());
        out.push(bound_search(expr, n, cfg, simplex, warm)?);
    }
    Ok(out)
}
