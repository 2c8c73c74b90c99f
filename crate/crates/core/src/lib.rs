//! Constructive stability for symmetric multiadditive maps.
//!
//! Given a symmetric n-ary map whose additivity defect is dominated by a
//! power-type control, the direct method recovers the unique nearby
//! n-additive map as a limit of rescaled dyadic iterates, together with a
//! certified pointwise error bound obtained by literal summation of the
//! stabilizer series. At the threshold exponent r = 1 the certificate
//! machinery fails, and the [`threshold`] module produces the explicit
//! counterexamples: a whole interval of equally good multiadditive
//! approximants for the absolute product, and a deterministic witness that
//! no multiadditive map approximates the bounded-counterexample product.
//!
//! Two routes everywhere: quantities defined by series or folds are computed
//! by literal summation, and every closed form is a separate layer that is
//! cross-checked against the summation rather than substituted for it.
//!
//! ```
//! use hyers_lab_core::{
//!     approximate, scalars, ControlSpec, DirectMethodConfig, ScalingMode,
//!     SymmetricKind, SymmetricSpec,
//! };
//!
//! // a product map with a square-root perturbation, dominated by the control
//! let g = SymmetricSpec::new(2, 1, SymmetricKind::PowerPerturbed {
//!     c: 1.0, beta: 0.1, r: 0.5,
//! })?;
//! let phi = ControlSpec::power(2, 0.1, 0.5)?;
//! let cfg = DirectMethodConfig::for_arity(2, ScalingMode::Doubling);
//!
//! let y = scalars(&[2.0, 3.0]);
//! let out = approximate(&g, &phi, &y, ScalingMode::Doubling, &cfg)?;
//! assert!((out.value - 6.0).abs() < 1e-9);                 // the perturbation is gone
//! assert!((g.evaluate(&y)? - out.value).abs() <= out.bound); // certified pointwise
//! # Ok::<(), hyers_lab_core::Error>(())
//! ```

// `!(x > 0.0)` is a NaN guard: `x <= 0.0` is false for NaN and would admit it
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approximate;
pub mod control;
pub mod direct;
pub mod error;
pub mod float;
pub mod gajda;
pub mod point;
pub mod sampling;
pub mod selftest;
pub mod series;
pub mod symmetric;
pub mod threshold;

pub use approximate::{
    approximate, approximate_with_spot_check, defect_hypothesis_check, verify_pointwise_bound,
    ApproximationResult, SlackReport, SlackRow,
};
pub use control::{
    fold_control, kappa, power_factor, stability_constant, ControlKind, ControlSpec,
    StabilityConstant,
};
pub use direct::{direct_method, DirectMethodConfig, DirectMethodResult};
pub use error::{Error, Result};
pub use gajda::{cauchy_defect, gajda_exact, gajda_multi, gajda_series, zeta};
pub use point::{scalars, Point};
pub use sampling::{TupleSampler, WeylSequence, DEFAULT_SEED, RNG_NAME};
pub use selftest::{run_invariants, Fault, InvariantOutcome};
pub use series::{
    stabilizer_closed_form, stabilizer_series, ScalingMode, SeriesSum,
};
pub use symmetric::{defect_rounding_allowance, SymmetricKind, SymmetricSpec};
pub use threshold::{
    find_witness, nonuniqueness_family, reduce_to_additive, AdditiveCandidate, WitnessReport,
};
