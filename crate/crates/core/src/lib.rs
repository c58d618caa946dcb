//! Chern connections, Chern curvature and holomorphic sectional curvature of
//! Hermitian metrics on chart domains of `C^n`, with numerical checks of the
//! curvature of a sum of metrics and of Wu's bound.
//!
//! Curvature conventions are fixed in [`curvature`].

// Index loops mirror the component formulas; negated comparisons also reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod curvature;
pub mod error;
pub mod expr;
pub mod field;
pub mod jet;
pub mod linalg;
pub mod metric_spec;
pub mod point;
pub mod random;
pub mod sampling;
pub mod selftest;
pub mod wu;

#[cfg(feature = "cli")]
pub mod cli;

pub use curvature::{
    chern_connection, curvature_tensor, gaussian_curvature_1d, hsc, hsc_extrema, hsc_extrema_at_jet,
    ConnectionCoefficients, CurvatureTensor, Direction, ExtremaOptions, HscEvaluator, HscExtremaReport,
};
pub use error::{Error, ParseError, Result};
pub use field::{builtin, BuiltinParams, Domain, MetricField};
pub use jet::{jet_product, jet_scale, jet_sum, MetricJet2};
pub use linalg::{inverse, is_positive_definite, is_positive_semidefinite, pullback_metric, solve, Endomorphism, HermitianMatrix, C64};
pub use metric_spec::{parse_metric_spec, render_metric_spec};
pub use point::ChartPoint;
pub use wu::{
    decompose, quotient_metric, quotient_metric_oracle, scalar_mixing_inequality, second_fundamental_form, wu_bound,
    wu_verify, DecompositionReport, SecondFundamentalForm, WuOptions, WuReport,
};
