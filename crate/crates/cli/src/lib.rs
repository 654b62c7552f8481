//! Command-line front end for `hardy-core`.
//!
//! Every subcommand prints one JSON report on stdout. The report keys are
//! fixed: `command, version, seed, method, estimate, reference,
//! reference_kind, tolerance, nmax, notes`, plus a command-specific `result`.
//! Errors go to stderr as `error[CODE]: message`.
//!
//! Exit codes: 0 success, 1 computation error, 2 usage error (bad flags,
//! unparsable or invalid mean, invalid input vector).

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use hardy_core::hardy::{self, log_grid, pn_sequence_with_ceiling, ClosedForm, ExtReal, HardyMethod};
use hardy_core::kedlaya::{self, check_dominated_kedlaya, check_kedlaya_inequality, factorial};
use hardy_core::{
    gauss_run, hardy_constant, hardy_sequence_bounds, liminf_ratio, parse_mean_expr, probe_properties,
    GaussConfig, HardyConfig, KedlayaTable, MeanError, MeanExpr, NonSummable, ProbeConfig, SampleVector,
    SeqBoundConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hardy-means", version, about = "Means, Hardy constants and Kedlaya combinatorics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a mean at a vector.
    Eval {
        mean: String,
        #[arg(required = true, num_args = 1.., allow_negative_numbers = true)]
        x: Vec<f64>,
    },
    /// Sampled property probes with counterexamples.
    Probe {
        mean: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
    },
    /// Estimate the Hardy constant.
    Hardy {
        mean: String,
        #[arg(long, default_value_t = 10_000)]
        nmax: usize,
        /// `lo:hi:points` (log-spaced) or a comma-separated list.
        #[arg(long)]
        ygrid: Option<String>,
        /// Write `n,p_n` to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Seed of the hypothesis probes.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e6)]
        ceiling: f64,
    },
    /// Lower estimates of the truncated Hardy constants Hc_1..Hc_n.
    HardySeq {
        mean: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Objective evaluations per restart.
        #[arg(long, default_value_t = 4_000)]
        budget: usize,
    },
    /// Window minimum of M(x_1..x_n)/x_n along a non-summable sequence.
    Liminf {
        mean: String,
        #[arg(long, value_enum)]
        seq: SeqKind,
        #[arg(long, default_value_t = 10_000)]
        nmax: usize,
    },
    /// Kedlaya coefficients, block matrix and inequality checks.
    Kedlaya {
        #[command(subcommand)]
        what: KedlayaCommand,
    },
    /// Gaussian product of two or more means at a vector.
    Gauss {
        #[arg(required = true, num_args = 2..)]
        means: Vec<String>,
        #[arg(long, required = true, num_args = 1.., allow_negative_numbers = true)]
        at: Vec<f64>,
        #[arg(long, default_value_t = 1e-13)]
        rel_tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
}

#[derive(Subcommand, Debug)]
enum KedlayaCommand {
    /// Exact coefficient table and its property audit.
    Coeffs {
        #[arg(long)]
        n: usize,
    },
    /// The n!×n! block matrix and its occurrence-count audit.
    Matrix {
        #[arg(long)]
        n: usize,
    },
    /// Kedlaya inequality margins on seeded random vectors.
    Check {
        mean: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_dim: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeqKind {
    Harmonic,
    Constant,
    Sqrt,
}

impl From<SeqKind> for NonSummable {
    fn from(s: SeqKind) -> Self {
        match s {
            SeqKind::Harmonic => NonSummable::Harmonic,
            SeqKind::Constant => NonSummable::Constant,
            SeqKind::Sqrt => NonSummable::Sqrt,
        }
    }
}

/// The JSON report printed by every subcommand.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub method: &'static str,
    pub estimate: Value,
    pub reference: Value,
    pub reference_kind: Option<&'static str>,
    pub tolerance: Option<f64>,
    pub nmax: Option<usize>,
    pub notes: Vec<String>,
    pub result: Value,
}

impl Report {
    fn new(command: &[String], method: &'static str) -> Self {
        Self {
            command: command.to_vec(),
            version: env!("CARGO_PKG_VERSION"),
            seed: None,
            method,
            estimate: Value::Null,
            reference: Value::Null,
            reference_kind: None,
            tolerance: None,
            nmax: None,
            notes: Vec::new(),
            result: Value::Null,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage { code: &'static str, message: String },
    Computation(MeanError),
}

impl From<MeanError> for Failure {
    fn from(e: MeanError) -> Self {
        match e {
            MeanError::InvalidSample(_)
            | MeanError::InvalidExpr(_)
            | MeanError::InvalidConfig(_)
            | MeanError::OutOfRange { .. } => Failure::Usage {
                code: e.code(),
                message: e.to_string(),
            },
            other => Failure::Computation(other),
        }
    }
}

fn usage(code: &'static str, message: impl Into<String>) -> Failure {
    Failure::Usage {
        code,
        message: message.into(),
    }
}

fn mean_arg(text: &str) -> Result<MeanExpr, Failure> {
    let e = parse_mean_expr(text).map_err(|e| usage(e.code(), format!("in `{text}`: {e}")))?;
    e.validate()?;
    Ok(e)
}

fn sample_arg(x: &[f64]) -> Result<SampleVector, Failure> {
    Ok(SampleVector::new(x.to_vec())?)
}

fn ext(v: ExtReal) -> Value {
    match v {
        ExtReal::Finite(f) => json!(f),
        ExtReal::Infinite => json!("inf"),
    }
}

/// Decimal rendering with `digits` significant digits (scientific outside
/// `[1e-5, 10^digits)`).
pub fn format_sig(v: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.*e}", digits - 1);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..digits as i32).contains(&exp) {
        format!("{:.*}", (digits as i32 - 1 - exp) as usize, v)
    } else {
        sci
    }
}

pub fn format_sig15(v: f64) -> String {
    format_sig(v, 15)
}

/// CSV with header `n,p_n`, LF line endings.
pub fn pn_csv(values: &[f64]) -> String {
    let mut out = String::from("n,p_n\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, format_sig15(*v)));
    }
    out
}

fn parse_ygrid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || usage("E_USAGE", format!("bad --ygrid `{spec}`: use lo:hi:points or a comma list"));
    let grid = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, k] = parts[..] else { return Err(bad()) };
        let (lo, hi): (f64, f64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
        let k: usize = k.trim().parse().map_err(|_| bad())?;
        if !(lo > 0.0 && hi >= lo && k >= 1) {
            return Err(bad());
        }
        log_grid(lo, hi, k)
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?
    };
    if grid.is_empty() || grid.iter().any(|y| !(y.is_finite() && *y > 0.0)) {
        return Err(bad());
    }
    Ok(grid)
}

fn cmd_hardy(
    argv: &[String],
    mean: &str,
    nmax: usize,
    ygrid: Option<&str>,
    csv: Option<&PathBuf>,
    seed: u64,
    ceiling: f64,
) -> Result<Report, Failure> {
    let expr = mean_arg(mean)?;
    let cfg = HardyConfig {
        n_max: nmax,
        y_grid: ygrid.map(parse_ygrid).transpose()?,
        ceiling,
        probe: ProbeConfig::with_seed(seed, 64),
    };
    let est = hardy_constant(&expr, &cfg)?;
    if let Some(path) = csv {
        let pn = match &est.pn {
            Some(pn) => pn.clone(),
            None => pn_sequence_with_ceiling(&expr, nmax, Some(ceiling))?,
        };
        std::fs::write(path, pn_csv(&pn.values))
            .map_err(|e| usage("E_IO", format!("cannot write {}: {e}", path.display())))?;
    }
    let mut r = Report::new(
        argv,
        match est.method {
            HardyMethod::HomogeneousLimit => "homogeneous-limit",
            HardyMethod::SupLiminfGrid => "sup-liminf-grid",
        },
    );
    r.seed = Some(seed);
    r.estimate = ext(est.estimate);
    r.nmax = Some(nmax);
    r.tolerance = est.tolerance;
    match &est.reference {
        Some(ClosedForm::Finite { value, source }) => {
            r.reference = json!(value);
            r.reference_kind = Some("closed form");
            r.notes.push(format!("reference: {source}"));
        }
        Some(ClosedForm::NotHardy { reason }) => {
            r.reference = json!("inf");
            r.reference_kind = Some("not hardy");
            r.notes.push(format!("reference: {reason}"));
        }
        None => {}
    }
    r.notes.push(format!("provenance: {}", serde_json::to_value(est.provenance).unwrap().as_str().unwrap()));
    r.notes.extend(est.notes.iter().cloned());
    r.result = serde_json::to_value(&est).expect("serializable");
    Ok(r)
}

fn cmd_kedlaya(argv: &[String], what: &KedlayaCommand) -> Result<Report, Failure> {
    match what {
        KedlayaCommand::Coeffs { n } => {
            let table = KedlayaTable::new(*n)?;
            let audit = table.audit();
            let coefficients: Vec<Value> = (1..=*n)
                .flat_map(|i| (1..=*n).map(move |j| (i, j)))
                .map(|(i, j)| json!({"i": i, "j": j, "a": (1..=*n).map(|k| table.get(i, j, k)).collect::<Vec<u64>>()}))
                .collect();
            let mut r = Report::new(argv, "exact-integer");
            r.estimate = json!(audit.all_hold());
            r.tolerance = Some(0.0);
            r.notes.push(format!("row sums of a_k(i,j) over k equal (n-1)! = {}", factorial(n - 1)));
            r.result = json!({"n": n, "coefficients": coefficients, "audit": audit});
            Ok(r)
        }
        KedlayaCommand::Matrix { n } => {
            let m = kedlaya::kedlaya_matrix(*n)?;
            let audit = m.audit();
            let rows: Vec<String> = m
                .rows()
                .map(|row| row.iter().map(|&v| char::from(b'0' + v)).collect())
                .collect();
            let mut r = Report::new(argv, "exact-integer");
            r.estimate = json!(audit.all_hold());
            r.tolerance = Some(0.0);
            r.notes.push("each row is a string of symbols 1..n".into());
            r.result = json!({"n": n, "size": m.size(), "rows": rows, "audit": audit});
            Ok(r)
        }
        KedlayaCommand::Check {
            mean,
            samples,
            seed,
            max_dim,
        } => {
            let expr = mean_arg(mean)?;
            if *max_dim < 1 || *samples < 1 {
                return Err(usage("E_USAGE", "--samples and --max-dim must be >= 1"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let (mut worst, mut worst_x) = (f64::INFINITY, Vec::new());
            let mut worst_dominated = f64::INFINITY;
            let mut max_abs = 0.0f64;
            for _ in 0..*samples {
                let n = rng.random_range(1..=*max_dim);
                let x: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(-3.0..0.0))).collect();
                let sv = SampleVector::new(x.clone())?;
                let m = check_kedlaya_inequality(&expr, &sv)?;
                max_abs = max_abs.max(m.abs());
                if m < worst {
                    worst = m;
                    worst_x = x;
                }
                worst_dominated = worst_dominated.min(check_dominated_kedlaya(&expr, &sv)?);
            }
            let mut r = Report::new(argv, "sampled-margin");
            r.seed = Some(*seed);
            r.estimate = json!(worst);
            r.tolerance = Some(1e-12);
            r.notes
                .push("entries log-uniform in [1e-3, 1]; margin = M(averages) - average of prefix means".into());
            r.result = json!({
                "samples": samples,
                "max_dim": max_dim,
                "min_margin": worst,
                "argmin": worst_x,
                "max_abs_margin": max_abs,
                "holds": worst >= -1e-12,
                "min_dominated_margin": worst_dominated,
            });
            Ok(r)
        }
    }
}

fn dispatch(argv: &[String], cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Eval { mean, x } => {
            let expr = mean_arg(mean)?;
            let v = expr.evaluate(&sample_arg(x)?)?;
            let mut r = Report::new(argv, "direct");
            r.estimate = json!(v);
            r.notes = expr.precision_warnings();
            r.result = json!({"mean": expr.to_string(), "x": x, "value": v});
            Ok(r)
        }
        Command::Probe {
            mean,
            seed,
            samples,
            max_dim,
        } => {
            let expr = mean_arg(mean)?;
            let cfg = ProbeConfig {
                max_dim: *max_dim,
                ..ProbeConfig::with_seed(*seed, *samples)
            };
            let report = probe_properties(&expr, &cfg)?;
            let mut r = Report::new(argv, "sampled-probe");
            r.seed = Some(*seed);
            r.tolerance = Some(cfg.tolerance);
            r.notes.push(report.note.to_string());
            r.result = serde_json::to_value(&report).expect("serializable");
            Ok(r)
        }
        Command::Hardy {
            mean,
            nmax,
            ygrid,
            csv,
            seed,
            ceiling,
        } => cmd_hardy(argv, mean, *nmax, ygrid.as_deref(), csv.as_ref(), *seed, *ceiling),
        Command::HardySeq {
            mean,
            n,
            restarts,
            seed,
            budget,
        } => {
            let expr = mean_arg(mean)?;
            let cfg = SeqBoundConfig {
                restarts: *restarts,
                seed: *seed,
                budget: *budget,
                homogeneous: None,
            };
            let bounds = hardy_sequence_bounds(&expr, *n, &cfg)?;
            let last = bounds.last().expect("n >= 1");
            let mut r = Report::new(argv, "multistart-nelder-mead");
            r.seed = Some(*seed);
            r.estimate = json!(last.estimate);
            r.nmax = Some(*n);
            r.notes.push("provenance: estimate (uncertified); each value is attained, so it bounds Hc_n from below".into());
            if let Some(c) = hardy::closed_form_hardy(&expr).and_then(|c| c.value()) {
                r.reference = json!(c);
                r.reference_kind = Some("closed form");
                r.notes.push("reference is the limit Hc_inf, an upper bound for every Hc_n".into());
            }
            r.result = serde_json::to_value(&bounds).expect("serializable");
            Ok(r)
        }
        Command::Liminf { mean, seq, nmax } => {
            let expr = mean_arg(mean)?;
            let est = liminf_ratio(&expr, (*seq).into(), *nmax)?;
            let mut r = Report::new(argv, "tail-window-minimum");
            r.estimate = json!(est.estimate);
            r.nmax = Some(*nmax);
            r.notes.push("provenance: estimate (uncertified)".into());
            if let Some(c) = hardy::closed_form_hardy(&expr).and_then(|c| c.value()) {
                r.reference = json!(c);
                r.reference_kind = Some("closed form");
            }
            r.result = serde_json::to_value(&est).expect("serializable");
            Ok(r)
        }
        Command::Kedlaya { what } => cmd_kedlaya(argv, what),
        Command::Gauss {
            means,
            at,
            rel_tol,
            max_iter,
        } => {
            let exprs = means.iter().map(|m| mean_arg(m)).collect::<Result<Vec<_>, _>>()?;
            let cfg = GaussConfig {
                rel_tol: *rel_tol,
                max_iter: *max_iter,
            };
            let run = gauss_run(&exprs, &sample_arg(at)?, &cfg)?;
            let mut r = Report::new(argv, "gauss-iteration");
            r.estimate = json!(run.value);
            r.tolerance = Some(*rel_tol);
            r.result = json!({
                "means": exprs.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "at": at,
                "value": run.value,
                "value_4sig": format_sig(run.value, 4),
                "iterations": run.iterations,
                "envelope": run.envelope,
            });
            Ok(r)
        }
    }
}

/// Runs one command. `argv` excludes the program name.
pub fn run_command(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("hardy-means".to_string()).chain(argv.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "error[E_USAGE]: {e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(argv, &cli.command) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("serializable");
            let _ = writeln!(out, "{text}");
            EXIT_OK
        }
        Err(Failure::Usage { code, message }) => {
            let _ = writeln!(err, "error[{code}]: {message}");
            EXIT_USAGE
        }
        Err(Failure::Computation(e)) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            EXIT_COMPUTATION
        }
    }
}
