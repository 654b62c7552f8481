//! Means of positive reals and their Hardy constants.
//!
//! * [`families`] — power, Gini, quasi-arithmetic, Bajraktarević and
//!   deviation means; [`MeanExpr`] composes them (with Gaussian products).
//! * [`probe`] — sampled checks of symmetry, monotonicity, homogeneity,
//!   concavity and friends, with counterexamples.
//! * [`gauss`] — Gaussian products by iteration to a common limit.
//! * [`kedlaya`] — exact Kedlaya coefficients, the block matrix and the
//!   Kedlaya inequality.
//! * [`hardy`] — `p_n` sequences, Hardy constant estimates, lower bounds on
//!   the truncated constants and the closed-form registry.
//! * [`parse`] — text syntax such as `gauss(power(-1),power(0))`.

pub mod error;
pub mod expr;
pub mod families;
pub mod gauss;
pub mod generator;
pub mod hardy;
pub mod kedlaya;
pub mod numerics;
pub mod optimize;
pub mod parse;
pub mod prefix;
pub mod probe;
pub mod sample;

pub use error::{MeanError, Result};
pub use expr::MeanExpr;
pub use families::{
    bajraktarevic_mean, deviation_mean, gini_mean, power_mean, quasi_arithmetic_mean, DeviationSpec,
};
pub use gauss::{gauss_product, gauss_run, GaussConfig, GaussRun};
pub use generator::{Generator, Monotonicity};
pub use hardy::{
    closed_form_hardy, hardy_constant, hardy_partial_check, hardy_sequence_bound, hardy_sequence_bounds,
    liminf_ratio, pn_sequence, ClosedForm, ExtReal, HardyConfig, HardyEstimate, HardyMethod, HardySeqBound,
    NonSummable, PnSequence, Provenance, SeqBoundConfig,
};
pub use kedlaya::{kedlaya_coefficient, kedlaya_matrix, KedlayaMatrix, KedlayaTable};
pub use parse::{parse_mean_expr, ParseError};
pub use prefix::{prefix_means, PrefixEvaluator};
pub use probe::{probe_properties, probe_selected, ProbeConfig, Property, PropertyReport, Verdict};
pub use sample::SampleVector;
