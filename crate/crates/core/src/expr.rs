use std::fmt;

use crate::error::{MeanError, Result};
use crate::families::{
    bajraktarevic_mean, deviation_mean, exponent_warning, gini_mean, power_mean,
    quasi_arithmetic_mean, validate_pair, DeviationSpec,
};
use crate::gauss::{self, GaussConfig};
use crate::generator::Generator;
use crate::sample::SampleVector;

/// Abstract syntax of a mean.
#[derive(Debug, Clone, PartialEq)]
pub enum MeanExpr {
    Power(f64),
    QuasiArithmetic(Generator),
    Gini(f64, f64),
    Bajraktarevic(Generator, Generator),
    Deviation(DeviationSpec),
    /// Gaussian product of at least two means.
    Gauss(Vec<MeanExpr>),
    Arith,
    Geom,
    Harm,
    Min,
    Max,
}

impl MeanExpr {
    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(MeanError::InvalidExpr(format!("{name} parameter {v} is not finite")))
            }
        };
        match self {
            MeanExpr::Power(p) => finite("power", *p),
            MeanExpr::Gini(p, q) => finite("gini", *p).and(finite("gini", *q)),
            MeanExpr::QuasiArithmetic(g) => {
                g.validate()?;
                if g.is_strictly_monotone() {
                    Ok(())
                } else {
                    Err(MeanError::InvalidExpr(format!(
                        "quasi-arithmetic generator `{g}` is not strictly monotone"
                    )))
                }
            }
            MeanExpr::Bajraktarevic(f, g) => validate_pair(f, g).map(|_| ()),
            MeanExpr::Deviation(d) => d.validate(),
            MeanExpr::Gauss(children) => {
                if children.len() < 2 {
                    return Err(MeanError::InvalidExpr(format!(
                        "gaussian product needs at least 2 means, got {}",
                        children.len()
                    )));
                }
                children.iter().try_for_each(MeanExpr::validate)
            }
            MeanExpr::Arith | MeanExpr::Geom | MeanExpr::Harm | MeanExpr::Min | MeanExpr::Max => {
                Ok(())
            }
        }
    }

    /// Evaluates the mean at `x`. The result lies in `[min x, max x]`.
    pub fn evaluate(&self, x: &SampleVector) -> Result<f64> {
        self.validate()?;
        self.eval_valid(x)
    }

    /// Evaluation for an expression that already passed [`MeanExpr::validate`].
    pub(crate) fn eval_valid(&self, x: &SampleVector) -> Result<f64> {
        match self {
            MeanExpr::Power(p) => Ok(power_mean(*p, x)),
            MeanExpr::Arith => Ok(power_mean(1.0, x)),
            MeanExpr::Geom => Ok(power_mean(0.0, x)),
            MeanExpr::Harm => Ok(power_mean(-1.0, x)),
            MeanExpr::Gini(p, q) => Ok(gini_mean(*p, *q, x)),
            MeanExpr::QuasiArithmetic(g) => quasi_arithmetic_mean(g, x),
            MeanExpr::Bajraktarevic(f, g) => bajraktarevic_mean(f, g, x),
            MeanExpr::Deviation(d) => deviation_mean(d, x),
            MeanExpr::Gauss(children) => {
                gauss::product_valid(children, x, &GaussConfig::default()).map(|r| r.value)
            }
            MeanExpr::Min => Ok(x.min()),
            MeanExpr::Max => Ok(x.max()),
        }
    }

    /// Exponent of a syntactic power mean (`power(p)`, `arith`, `geom`, `harm`).
    pub fn power_exponent(&self) -> Option<f64> {
        match self {
            MeanExpr::Power(p) => Some(*p),
            MeanExpr::Arith => Some(1.0),
            MeanExpr::Geom => Some(0.0),
            MeanExpr::Harm => Some(-1.0),
            _ => None,
        }
    }

    /// Accuracy warnings for exponents near a branch point, collected recursively.
    pub fn precision_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_warnings(&mut out);
        out
    }

    fn collect_warnings(&self, out: &mut Vec<String>) {
        match self {
            MeanExpr::Power(p) => out.extend(exponent_warning("power exponent", *p)),
            MeanExpr::Gini(p, q) => out.extend(exponent_warning("gini p - q", p - q)),
            MeanExpr::QuasiArithmetic(g) => {
                if let Some(p) = g.parameter() {
                    out.extend(exponent_warning("generator exponent", p));
                }
            }
            MeanExpr::Gauss(children) => children.iter().for_each(|c| c.collect_warnings(out)),
            _ => {}
        }
    }
}

impl fmt::Display for MeanExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanExpr::Power(p) => write!(f, "power({p})"),
            MeanExpr::Gini(p, q) => write!(f, "gini({p},{q})"),
            MeanExpr::QuasiArithmetic(g) => write!(f, "quasi({g})"),
            MeanExpr::Bajraktarevic(a, b) => write!(f, "bajrak({a},{b})"),
            MeanExpr::Deviation(d) => write!(f, "dev({d})"),
            MeanExpr::Gauss(children) => {
                write!(f, "gauss(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            MeanExpr::Arith => write!(f, "arith"),
            MeanExpr::Geom => write!(f, "geom"),
            MeanExpr::Harm => write!(f, "harm"),
            MeanExpr::Min => write!(f, "min"),
            MeanExpr::Max => write!(f, "max"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[f64]) -> SampleVector {
        SampleVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let x = sv(&[1.0, 2.0, 3.0]);
        assert!((MeanExpr::Power(1.0).evaluate(&x).unwrap() - 2.0).abs() < 1e-15);
        assert!((MeanExpr::Power(0.0).evaluate(&sv(&[2.0, 8.0])).unwrap() - 4.0).abs() < 1e-14);
        let g = MeanExpr::Gini(2.0, 1.0).evaluate(&x).unwrap();
        assert!((g - 14.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn invalid_expressions() {
        let x = sv(&[1.0, 2.0]);
        assert!(MeanExpr::Gauss(vec![MeanExpr::Arith]).evaluate(&x).is_err());
        assert!(MeanExpr::Power(f64::NAN).evaluate(&x).is_err());
        assert!(MeanExpr::Gini(1.0, f64::INFINITY).evaluate(&x).is_err());
        assert!(MeanExpr::QuasiArithmetic(Generator::Pow(0.0)).evaluate(&x).is_err());
        assert!(MeanExpr::Bajraktarevic(Generator::Pow(1.0), Generator::Log)
            .evaluate(&x)
            .is_err());
    }

    #[test]
    fn min_max() {
        let x = sv(&[3.0, 1.0, 2.0]);
        assert_eq!(MeanExpr::Min.evaluate(&x).unwrap(), 1.0);
        assert_eq!(MeanExpr::Max.evaluate(&x).unwrap(), 3.0);
    }

    #[test]
    fn display_follows_grammar() {
        let e = MeanExpr::Gauss(vec![
            MeanExpr::Power(-1.0),
            MeanExpr::Deviation(DeviationSpec::FromPair {
                f: Generator::Pow(2.0),
                g: Generator::Identity,
            }),
            MeanExpr::QuasiArithmetic(Generator::NegPow(-0.5)),
        ]);
        assert_eq!(e.to_string(), "gauss(power(-1),dev(pair:pow:2,id),quasi(negpow:-0.5))");
    }

    #[test]
    fn warnings_near_branch_points() {
        assert_eq!(MeanExpr::Power(1e-10).precision_warnings().len(), 1);
        assert!(MeanExpr::Power(0.0).precision_warnings().is_empty());
        assert_eq!(MeanExpr::Gini(0.5, 0.5 + 1e-9).precision_warnings().len(), 1);
    }
}
