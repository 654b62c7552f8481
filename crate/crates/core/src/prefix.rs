//! Means of all prefixes `M(x_1), M(x_1, x_2), …` of a sequence.
//!
//! Families that are functions of a few running sums (power, Gini,
//! quasi-arithmetic, Bajraktarević, deviation) are updated incrementally;
//! a Gaussian product is evaluated from its children's prefix values, which
//! is exactly its first iteration step. Whenever a running sum leaves the
//! representable range the prefix is re-evaluated in full.

use crate::error::{MeanError, Result};
use crate::expr::MeanExpr;
use crate::families::{bajraktarevic_from_sums, deviation_from_sums, finish_inverse, DeviationSpec};
use crate::gauss::{self, GaussConfig};
use crate::generator::Generator;
use crate::numerics::CompensatedSum;
use crate::sample::SampleVector;

enum Acc {
    Power { p: f64, sum: CompensatedSum },
    Geom { sum_log: CompensatedSum },
    Gini { a: f64, b: f64, sa: CompensatedSum, sb: CompensatedSum },
    GiniDiag { a: f64, num: CompensatedSum, den: CompensatedSum },
    Quasi { gen: Generator, sum: CompensatedSum },
    Bajrak { f: Generator, g: Generator, sf: CompensatedSum, sg: CompensatedSum },
    Deviation { dev: DeviationSpec, sa: CompensatedSum, sb: CompensatedSum },
    Gauss { children: Vec<PrefixEvaluator> },
    Min,
    Max,
}

/// Streaming evaluator: push entries one at a time, read the mean of the
/// prefix seen so far.
pub struct PrefixEvaluator {
    expr: MeanExpr,
    acc: Acc,
    seen: Vec<f64>,
    min: f64,
    max: f64,
}

impl PrefixEvaluator {
    pub fn new(expr: &MeanExpr) -> Result<Self> {
        expr.validate()?;
        Ok(Self::new_valid(expr))
    }

    fn new_valid(expr: &MeanExpr) -> Self {
        let acc = match expr {
            MeanExpr::Power(p) if *p == 0.0 => Acc::Geom { sum_log: CompensatedSum::new() },
            MeanExpr::Geom => Acc::Geom { sum_log: CompensatedSum::new() },
            MeanExpr::Power(p) => Acc::Power { p: *p, sum: CompensatedSum::new() },
            MeanExpr::Arith => Acc::Power { p: 1.0, sum: CompensatedSum::new() },
            MeanExpr::Harm => Acc::Power { p: -1.0, sum: CompensatedSum::new() },
            MeanExpr::Gini(p, q) => {
                let (a, b) = if p >= q { (*p, *q) } else { (*q, *p) };
                if a == b {
                    Acc::GiniDiag { a, num: CompensatedSum::new(), den: CompensatedSum::new() }
                } else {
                    Acc::Gini { a, b, sa: CompensatedSum::new(), sb: CompensatedSum::new() }
                }
            }
            MeanExpr::QuasiArithmetic(gen) => Acc::Quasi { gen: *gen, sum: CompensatedSum::new() },
            MeanExpr::Bajraktarevic(f, g) => Acc::Bajrak {
                f: *f,
                g: *g,
                sf: CompensatedSum::new(),
                sg: CompensatedSum::new(),
            },
            MeanExpr::Deviation(dev) => Acc::Deviation {
                dev: *dev,
                sa: CompensatedSum::new(),
                sb: CompensatedSum::new(),
            },
            MeanExpr::Gauss(children) => Acc::Gauss {
                children: children.iter().map(PrefixEvaluator::new_valid).collect(),
            },
            MeanExpr::Min => Acc::Min,
            MeanExpr::Max => Acc::Max,
        };
        Self {
            expr: expr.clone(),
            acc,
            seen: Vec::new(),
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }

    /// Appends `x` and returns the mean of the prefix including it.
    pub fn push(&mut self, x: f64) -> Result<f64> {
        if !(x.is_finite() && x > 0.0) {
            return Err(MeanError::InvalidSample(format!(
                "entry {} = {x} is not a positive finite real",
                self.seen.len()
            )));
        }
        self.seen.push(x);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
        let k = self.seen.len() as f64;
        let (lo, hi) = (self.min, self.max);
        let expr = &self.expr;
        let fast = match &mut self.acc {
            Acc::Power { p, sum } => {
                sum.add(x.powf(*p));
                Some((sum.value() / k).powf(1.0 / *p))
            }
            Acc::Geom { sum_log } => {
                sum_log.add(x.ln());
                Some((sum_log.value() / k).exp())
            }
            Acc::Gini { a, b, sa, sb } => {
                sa.add(x.powf(*a));
                sb.add(x.powf(*b));
                Some((sa.value() / sb.value()).powf(1.0 / (*a - *b)))
            }
            Acc::GiniDiag { a, num, den } => {
                let w = x.powf(*a);
                num.add(w * x.ln());
                den.add(w);
                Some((num.value() / den.value()).exp())
            }
            Acc::Quasi { gen, sum } => {
                sum.add(gen.eval_checked(x)?);
                let sample = SampleVector::new(vec![lo, hi])?;
                Some(finish_inverse(gen, sum.value() / k, &sample)?)
            }
            Acc::Bajrak { f, g, sf, sg } => {
                sf.add(f.eval_checked(x)?);
                sg.add(g.eval_checked(x)?);
                Some(bajraktarevic_from_sums(f, g, sf.value(), sg.value(), lo, hi)?)
            }
            Acc::Deviation { dev, sa, sb } => {
                match dev {
                    DeviationSpec::Arithmetic => {
                        sa.add(x);
                        sb.add(1.0);
                    }
                    DeviationSpec::FromPair { f, g } => {
                        sa.add(f.eval_checked(x)?);
                        sb.add(g.eval_checked(x)?);
                    }
                }
                Some(deviation_from_sums(dev, sa.value(), sb.value(), lo, hi)?)
            }
            Acc::Gauss { children } => {
                let values = children
                    .iter_mut()
                    .map(|c| c.push(x))
                    .collect::<Result<Vec<_>>>()?;
                let v = SampleVector::new(values)?;
                let MeanExpr::Gauss(means) = expr else {
                    unreachable!("gauss accumulator built from a gauss node")
                };
                let run = gauss::product_valid(means, &v, &GaussConfig::default())?;
                Some(run.value)
            }
            Acc::Min => Some(lo),
            Acc::Max => Some(hi),
        };
        match fast {
            Some(v) if v.is_finite() && v >= lo * (1.0 - 1e-9) && v <= hi * (1.0 + 1e-9) => Ok(v),
            _ => {
                let prefix = SampleVector::new(self.seen.clone())?;
                self.expr.eval_valid(&prefix)
            }
        }
    }
}

/// `[M(x_1), M(x_1, x_2), …, M(x_1, …, x_n)]`.
pub fn prefix_means(expr: &MeanExpr, xs: &[f64]) -> Result<Vec<f64>> {
    let mut ev = PrefixEvaluator::new(expr)?;
    xs.iter().map(|&x| ev.push(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::DeviationSpec;

    fn exprs() -> Vec<MeanExpr> {
        vec![
            MeanExpr::Power(0.0),
            MeanExpr::Power(0.5),
            MeanExpr::Power(-2.0),
            MeanExpr::Arith,
            MeanExpr::Harm,
            MeanExpr::Gini(0.5, -1.0),
            MeanExpr::Gini(0.5, 0.5),
            MeanExpr::QuasiArithmetic(Generator::Log),
            MeanExpr::QuasiArithmetic(Generator::Pow(3.0)),
            MeanExpr::Bajraktarevic(Generator::Pow(2.0), Generator::Pow(1.0)),
            MeanExpr::Deviation(DeviationSpec::Arithmetic),
            MeanExpr::Deviation(DeviationSpec::FromPair {
                f: Generator::Log,
                g: Generator::Pow(0.0),
            }),
            MeanExpr::Gauss(vec![MeanExpr::Power(-1.0), MeanExpr::Power(0.0)]),
            MeanExpr::Min,
            MeanExpr::Max,
        ]
    }

    #[test]
    fn prefix_values_match_full_evaluation() {
        let xs = [3.0, 0.2, 7.5, 1.0, 0.01, 40.0, 2.0];
        for e in exprs() {
            let pre = prefix_means(&e, &xs).unwrap();
            for k in 1..=xs.len() {
                let full = e.evaluate(&SampleVector::new(xs[..k].to_vec()).unwrap()).unwrap();
                let rel = ((pre[k - 1] - full) / full).abs();
                assert!(rel < 1e-10, "{e} k={k}: {} vs {full}", pre[k - 1]);
            }
        }
    }

    #[test]
    fn falls_back_when_running_sums_overflow() {
        let e = MeanExpr::Power(-200.0);
        let xs = [1e-3, 1e-2, 5.0];
        let pre = prefix_means(&e, &xs).unwrap();
        for k in 1..=xs.len() {
            let full = e.evaluate(&SampleVector::new(xs[..k].to_vec()).unwrap()).unwrap();
            assert!(((pre[k - 1] - full) / full).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_entries() {
        assert!(prefix_means(&MeanExpr::Arith, &[1.0, 0.0]).is_err());
    }
}
