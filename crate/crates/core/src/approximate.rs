//! The approximation pipeline: recover the unique nearby multiadditive map
//! from a perturbed symmetric one by dyadic iteration, with a certified
//! per-point error bound.

use crate::control::{fold_control, ControlSpec};
use crate::direct::{direct_method, DirectMethodConfig};
use crate::error::{Error, Result};
use crate::point::{check_arity, check_dims, max_abs_coord, scale_tuple, Point};
use crate::sampling::{weyl_tuples, DEFAULT_SEED};
use crate::series::{check_convergence, stabilizer_series, step_ratio, ScalingMode};
use crate::symmetric::{defect_rounding_allowance, SymmetricSpec};

/// Coordinates are not allowed past 2^RANGE_LIMIT during dyadic ascent;
/// keeps every intermediate well inside double range.
const RANGE_LIMIT: i32 = 500;

/// Terms summed for the certified bound; the exact geometric tail covers the
/// rest.
const BOUND_TERMS: usize = 40;

/// Default defect-hypothesis spot check: 512 low-discrepancy tuples.
pub const DEFAULT_SPOT_SAMPLES: usize = 512;

/// Relative slack for the sampled hypothesis comparison `|D_n g(z)| <= phi(z)`;
/// the absolute part is ulp-scaled to the cancelled products.
const HYPOTHESIS_REL_SLACK: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ApproximationResult {
    /// Estimate of the multiadditive limit `a(y)`.
    pub value: f64,
    /// Certified bound on `|g(y) - a(y)|` (the stabilizer series at `y`).
    pub bound: f64,
    pub iterations: usize,
    /// False only when the step cap was hit before the tail fell below tol.
    pub certified: bool,
    /// Rescaled iterates `(k, 2^{-nk} g(2^k y))` (or the halving mirror).
    pub trace: Vec<(usize, f64)>,
}

/// Verify `|D_n g(z)| <= phi(z)` on a deterministic low-discrepancy sample.
///
/// The hypothesis cannot be checked for all z; a violation on any sampled
/// tuple is treated as a hard contract error, since a false hypothesis
/// invalidates every certificate built on it.
pub fn defect_hypothesis_check(
    spec: &SymmetricSpec,
    control: &ControlSpec,
    samples: usize,
    half_width: f64,
) -> Result<()> {
    if spec.n() != control.n() {
        return Err(Error::Config(format!(
            "control arity {} does not match map arity {}",
            control.n(),
            spec.n()
        )));
    }
    for z in weyl_tuples(samples, spec.n() + 1, spec.d(), half_width, DEFAULT_SEED) {
        let eval = spec.defect_eval(&z)?;
        let defect = eval.value.abs();
        let phi = control.evaluate(&z)?;
        if defect
            > phi * (1.0 + HYPOTHESIS_REL_SLACK)
                + defect_rounding_allowance(spec.n(), eval.magnitude)
        {
            let coords: Vec<String> = z
                .iter()
                .map(|p| format!("({})", p.coords().iter().map(|c| format!("{c:.6}")).collect::<Vec<_>>().join(", ")))
                .collect();
            return Err(Error::ContractViolation(format!(
                "defect bound hypothesis violated at z = [{}]: |D_n g| = {defect:e} > phi = {phi:e}",
                coords.join(", ")
            )));
        }
    }
    Ok(())
}

/// Run the direct method on `g` at `y` under the given control.
///
/// Doubling mode iterates `b_k = g(2^k y)` with contraction `2^n` and defect
/// bounds `alpha_k = r_n phi(2^k y)`; halving mode iterates `b_k = g(2^{-k} y)`
/// with contraction `2^{-n}` and `alpha_k = 2^{-n} r_n phi(2^{-k-1} y)`.
/// The returned bound is the stabilizer series value plus its exact tail.
pub fn approximate(
    spec: &SymmetricSpec,
    control: &ControlSpec,
    y: &[Point],
    mode: ScalingMode,
    cfg: &DirectMethodConfig,
) -> Result<ApproximationResult> {
    approximate_with_spot_check(spec, control, y, mode, cfg, DEFAULT_SPOT_SAMPLES)
}

pub fn approximate_with_spot_check(
    spec: &SymmetricSpec,
    control: &ControlSpec,
    y: &[Point],
    mode: ScalingMode,
    cfg: &DirectMethodConfig,
    spot_samples: usize,
) -> Result<ApproximationResult> {
    let n = spec.n();
    check_arity(y, n)?;
    check_dims(y, spec.d())?;
    check_convergence(control, mode)?;
    if cfg.mode != mode {
        return Err(Error::Config(format!(
            "direct-method config is set up for {} but {} was requested",
            cfg.mode.label(),
            mode.label(),
        )));
    }
    let expected_c = match mode {
        ScalingMode::Doubling => (2.0_f64).powi(n as i32),
        ScalingMode::Halving => (2.0_f64).powi(-(n as i32)),
    };
    if cfg.c != expected_c {
        return Err(Error::Config(format!(
            "contraction base {} does not match 2^(+-n) = {expected_c} for n = {n}",
            cfg.c
        )));
    }

    if spot_samples > 0 {
        let spot_width = 4.0_f64.max(2.0 * max_abs_coord(y));
        defect_hypothesis_check(spec, control, spot_samples, spot_width)?;
    }

    // exact geometric structure of the scaled defect-bound series:
    // tail(k) = sum_{j >= k} c^{-j-1} alpha_j = t_0 q^k / (1 - q)
    let bound_series = stabilizer_series(control, y, mode, BOUND_TERMS)?;
    let fold_at = |points: &[Point]| fold_control(control, points);
    let first_scaled_alpha = match mode {
        ScalingMode::Doubling => (2.0_f64).powi(-(n as i32)) * fold_at(y)?,
        ScalingMode::Halving => fold_at(&scale_tuple(y, 0.5))?,
    };
    let q = step_ratio(control, y, mode);
    let tail_bound = move |k: usize| {
        if first_scaled_alpha == 0.0 {
            0.0
        } else {
            first_scaled_alpha * q.powi(k as i32) / (1.0 - q)
        }
    };

    let max_coord = max_abs_coord(y).max(f64::MIN_POSITIVE);
    let overflow_guard = |k: usize| -> Result<()> {
        if let ScalingMode::Doubling = mode {
            if (k as f64) + max_coord.log2() > RANGE_LIMIT as f64 {
                return Err(Error::RangeOverflow { k, limit: RANGE_LIMIT });
            }
        }
        Ok(())
    };

    let b = |k: usize| -> Result<f64> {
        overflow_guard(k)?;
        let factor = match mode {
            ScalingMode::Doubling => (2.0_f64).powi(k as i32),
            ScalingMode::Halving => (2.0_f64).powi(-(k as i32)),
        };
        spec.evaluate(&scale_tuple(y, factor))
    };
    let alpha = |k: usize| -> Result<f64> {
        overflow_guard(k)?;
        match mode {
            ScalingMode::Doubling => fold_at(&scale_tuple(y, (2.0_f64).powi(k as i32))),
            ScalingMode::Halving => Ok((2.0_f64).powi(-(n as i32))
                * fold_at(&scale_tuple(y, (2.0_f64).powi(-(k as i32) - 1)))?),
        }
    };

    let out = direct_method(b, alpha, tail_bound, cfg)?;
    Ok(ApproximationResult {
        value: out.limit,
        bound: bound_series.upper(),
        iterations: out.iterations,
        certified: out.certified,
        trace: out.trace,
    })
}

/// Per-sample slack of the certified bound against the observed error.
#[derive(Clone, Debug)]
pub struct SlackRow {
    pub index: usize,
    pub g: f64,
    pub approximant: f64,
    pub bound: f64,
    /// `bound - |g - approximant|`; negative beyond tolerance means violation.
    pub slack: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SlackReport {
    pub rows: Vec<SlackRow>,
}

impl SlackReport {
    pub fn worst(&self) -> Option<&SlackRow> {
        self.rows
            .iter()
            .min_by(|a, b| a.slack.partial_cmp(&b.slack).expect("slacks are finite"))
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Check `|g(y) - a(y)| <= Phi(y)` pointwise over precomputed approximants.
pub fn verify_pointwise_bound(
    spec: &SymmetricSpec,
    approximants: &[(Vec<Point>, f64)],
    control: &ControlSpec,
    mode: ScalingMode,
    tol: f64,
) -> Result<SlackReport> {
    let mut rows = Vec::with_capacity(approximants.len());
    for (index, (y, value)) in approximants.iter().enumerate() {
        let g = spec.evaluate(y)?;
        let bound = stabilizer_series(control, y, mode, BOUND_TERMS)?.upper();
        let slack = bound - (g - value).abs();
        rows.push(SlackRow { index, g, approximant: *value, bound, slack, pass: slack >= -tol });
    }
    Ok(SlackReport { rows })
}
