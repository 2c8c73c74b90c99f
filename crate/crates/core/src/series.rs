//! Stabilizer series: the canonical certified error bound.
//!
//! Doubling mode sums `2^{-n(k+1)} r_n phi(2^k y)`; halving mode sums
//! `2^{nk} r_n phi(2^{-k-1} y)`. For power controls the summand is exactly
//! geometric, so the truncation tail is exact, and the closed form
//! `r_n phi(y) / |2^n - 2^{nr}|` is available as an independent cross-check.

use crate::control::{fold_control, ControlSpec};
use crate::error::{Error, Result};
use crate::point::{check_arity, scale_tuple, Point};

/// Direction of the dyadic iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingMode {
    /// Ascend `y -> 2^k y`, rescale by `2^{-nk}`; converges for r < 1.
    Doubling,
    /// Descend `y -> 2^{-k} y`, rescale by `2^{nk}`; converges for r > 1.
    Halving,
}

impl ScalingMode {
    pub fn label(self) -> &'static str {
        match self {
            ScalingMode::Doubling => "doubling",
            ScalingMode::Halving => "halving",
        }
    }

    /// The mode a power control of exponent r admits; errors at the threshold.
    pub fn for_exponent(r: f64) -> Result<Self> {
        if r < 1.0 {
            Ok(ScalingMode::Doubling)
        } else if r > 1.0 {
            Ok(ScalingMode::Halving)
        } else {
            Err(Error::StabilityThreshold)
        }
    }
}

/// Reject control/mode pairs whose series diverges.
pub fn check_convergence(control: &ControlSpec, mode: ScalingMode) -> Result<()> {
    let r = control.exponent();
    match mode {
        ScalingMode::Doubling if r >= 1.0 => Err(Error::DivergentSeries {
            mode: "doubling",
            condition: "summability of the downscaled folds",
            requirement: "r < 1",
            r,
        }),
        ScalingMode::Halving if r <= 1.0 => Err(Error::DivergentSeries {
            mode: "halving",
            condition: "summability of the upscaled folds",
            requirement: "r > 1",
            r,
        }),
        _ => Ok(()),
    }
}

/// Partial sum of the stabilizer series plus a rigorous tail bound.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

impl SeriesSum {
    /// Upper bound on the full series.
    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }
}

/// Exact per-step ratio of the scaled summands for a power control at `y`.
///
/// Each of the n effective slots of every fold term holds one coordinate of
/// `y`, so one doubling multiplies the fold by `2^{m r}` with m the number of
/// rescaling slots (zero points are pinned for r <= 0).
pub fn step_ratio(control: &ControlSpec, y: &[Point], mode: ScalingMode) -> f64 {
    let n = control.n() as f64;
    let m = control.scaling_slots(y) as f64;
    let r = control.exponent();
    match mode {
        ScalingMode::Doubling => (2.0_f64).powf(m * r - n),
        ScalingMode::Halving => (2.0_f64).powf(n - m * r),
    }
}

/// Sum `k_terms` summands of the stabilizer series by literal evaluation and
/// bound the dropped tail by the exact geometric continuation.
pub fn stabilizer_series(
    control: &ControlSpec,
    y: &[Point],
    mode: ScalingMode,
    k_terms: usize,
) -> Result<SeriesSum> {
    let n = control.n();
    check_arity(y, n)?;
    check_convergence(control, mode)?;
    assert!(k_terms >= 1, "k_terms must be at least 1");

    let mut value = 0.0;
    let mut last_term = 0.0;
    for k in 0..k_terms {
        let term = match mode {
            ScalingMode::Doubling => {
                let scaled = scale_tuple(y, (2.0_f64).powi(k as i32));
                (2.0_f64).powi(-((n * (k + 1)) as i32)) * fold_control(control, &scaled)?
            }
            ScalingMode::Halving => {
                let scaled = scale_tuple(y, (2.0_f64).powi(-(k as i32) - 1));
                (2.0_f64).powi((n * k) as i32) * fold_control(control, &scaled)?
            }
        };
        value += term;
        last_term = term;
    }

    // an identically-zero fold (a zero point with r > 0) needs no tail; the
    // step ratio is only meaningful on the nonzero branch, where the
    // convergence gate forces it below 1
    let tail_bound = if last_term == 0.0 {
        0.0
    } else {
        let q = step_ratio(control, y, mode);
        debug_assert!(q < 1.0);
        last_term * q / (1.0 - q)
    };
    Ok(SeriesSum { value, tail_bound, terms: k_terms })
}

/// Closed form of the full series for power controls:
/// `fold(y) / (2^n - 2^{nr})` in doubling mode and
/// `fold(y) / (2^{nr} - 2^n)` in halving mode (positive orientation; on
/// tuples with zero points and r <= 0 the effective exponent is `m r`).
/// Cross-checked against the literal partial sums, never used in their place.
pub fn stabilizer_closed_form(
    control: &ControlSpec,
    y: &[Point],
    mode: ScalingMode,
) -> Result<f64> {
    check_arity(y, control.n())?;
    check_convergence(control, mode)?;
    let fold = fold_control(control, y)?;
    if fold == 0.0 {
        return Ok(0.0);
    }
    let n = control.n();
    let first = match mode {
        // first summand 2^{-n} fold(y)
        ScalingMode::Doubling => (2.0_f64).powi(-(n as i32)) * fold,
        // first summand fold(y / 2) = 2^{-mr} fold(y)
        ScalingMode::Halving => {
            let half = scale_tuple(y, 0.5);
            fold_control(control, &half)?
        }
    };
    let q = step_ratio(control, y, mode);
    Ok(first / (1.0 - q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::scalars;

    #[test]
    fn doubling_series_matches_geometric_oracle() {
        // fold value 6 at r = 0, ratio 1/4: series = 6 / (4 - 1) = 2
        let phi = ControlSpec::power(2, 1.0, 0.0).unwrap();
        let y = scalars(&[1.0, 1.0]);
        let s = stabilizer_series(&phi, &y, ScalingMode::Doubling, 40).unwrap();
        assert!((s.value + s.tail_bound - 2.0).abs() < 1e-12);
        assert!(s.tail_bound < 1e-12);
        let cf = stabilizer_closed_form(&phi, &y, ScalingMode::Doubling).unwrap();
        assert!((cf - 2.0).abs() < 1e-14);
    }

    #[test]
    fn halving_series_matches_geometric_oracle() {
        // n = 1, r = 2: fold(1) = 2 eps = 2, series = 2 / (2^2 - 2) = 1
        let phi = ControlSpec::power(1, 1.0, 2.0).unwrap();
        let y = scalars(&[1.0]);
        let s = stabilizer_series(&phi, &y, ScalingMode::Halving, 40).unwrap();
        assert!((s.value + s.tail_bound - 1.0).abs() < 1e-12);
        let cf = stabilizer_closed_form(&phi, &y, ScalingMode::Halving).unwrap();
        assert!((cf - 1.0).abs() < 1e-14);
    }

    #[test]
    fn threshold_exponent_rejected() {
        let phi = ControlSpec::power(2, 1.0, 1.0).unwrap();
        let y = scalars(&[1.0, 1.0]);
        let err = stabilizer_series(&phi, &y, ScalingMode::Doubling, 10).unwrap_err();
        assert!(err.to_string().contains("r < 1"));
        let phi = ControlSpec::power(2, 1.0, 0.5).unwrap();
        assert!(stabilizer_series(&phi, &y, ScalingMode::Halving, 10).is_err());
    }

    #[test]
    fn zero_point_with_positive_exponent_vanishes() {
        let phi = ControlSpec::power(2, 1.0, 0.5).unwrap();
        let y = scalars(&[0.0, 3.0]);
        let s = stabilizer_series(&phi, &y, ScalingMode::Doubling, 10).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.tail_bound, 0.0);
    }

    #[test]
    fn zero_point_with_negative_exponent_still_sums() {
        // pinned factor: effective exponent m r with m = 1
        let phi = ControlSpec::power(2, 1.0, -1.0).unwrap();
        let y = scalars(&[0.0, 2.0]);
        let s = stabilizer_series(&phi, &y, ScalingMode::Doubling, 60).unwrap();
        let cf = stabilizer_closed_form(&phi, &y, ScalingMode::Doubling).unwrap();
        assert!((s.upper() - cf).abs() <= 1e-12 * cf.abs());
    }
}
