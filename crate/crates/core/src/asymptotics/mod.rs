//! High-precision analytic side: `H(z)`, the Chernoff bound and the Cauchy
//! integral for `N(k)`, the `W` landscape, thresholds and envelopes.

mod bessel;
mod chernoff;
mod landscape;
mod lemma1;
mod params;
mod saddle;
mod thresholds;

pub use bessel::{eval_H, eval_H_series, eval_I0_integral, log_relative_difference, series_cancellation_bits, HOptions};
pub use chernoff::{chernoff_bound_logN, chernoff_exp_form_logN};
pub use landscape::{eval_W, W_grid_scan, W_hessian_check, W_hessian_det_closed_form, W_hessian_origin, HessianCheck, Hessian2, WScan};
pub use lemma1::{lemma1_validate, Lemma1Grid, Lemma1Report, Lemma1Violation};
pub use params::{QuadratureSpec, SaddleParams};
pub use saddle::{saddle_integral_logN, SaddleReport};
pub use thresholds::{
    default_degree_cap, default_degree_cap_in, part_a_envelope_log, part_b_estimate_log, threshold_lower,
    threshold_lower_in, threshold_upper, threshold_upper_in, Envelope, EnvelopeQualifier, LogBase,
};
