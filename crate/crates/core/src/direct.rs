//! The direct-method convergence engine.
//!
//! Given a sequence `b_k`, a contraction base `c > 0`, and defect bounds
//! `alpha_k` with `|b_{k+1} - c b_k| <= alpha_k` and
//! `beta = sum c^{-k-1} alpha_k < infinity`, the rescaled sequence
//! `c^{-k} b_k` converges and its limit `b` satisfies `|b - b_0| <= beta`.
//! The engine iterates until the certified remaining tail drops below `tol`,
//! spot-checking the contraction contract at every step.

use crate::error::{Error, Result};
use crate::series::ScalingMode;

/// Relative slack allowed when checking `|b_{k+1} - c b_k| <= alpha_k`;
/// absorbs rounding in the caller's evaluation of both sides.
const CONTRACT_REL_SLACK: f64 = 1e-9;
/// Absolute floor for the same check, for alpha values at or near zero.
const CONTRACT_ABS_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DirectMethodConfig {
    /// Contraction base (2^n for doubling, 2^-n for halving).
    pub c: f64,
    /// Hard cap on dyadic steps.
    pub k_max: usize,
    /// Stop once the certified remaining tail falls below this.
    pub tol: f64,
    pub mode: ScalingMode,
}

impl DirectMethodConfig {
    pub const DEFAULT_K_MAX: usize = 60;
    pub const DEFAULT_TOL: f64 = 1e-12;

    pub fn new(c: f64, k_max: usize, tol: f64, mode: ScalingMode) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Config(format!("contraction base must be positive, got {c}")));
        }
        if k_max == 0 {
            return Err(Error::Config("k_max must be at least 1".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::Config(format!("tol must be positive, got {tol}")));
        }
        Ok(DirectMethodConfig { c, k_max, tol, mode })
    }

    /// The canonical configuration for an n-ary map in the given mode.
    pub fn for_arity(n: usize, mode: ScalingMode) -> Self {
        let c = match mode {
            ScalingMode::Doubling => (2.0_f64).powi(n as i32),
            ScalingMode::Halving => (2.0_f64).powi(-(n as i32)),
        };
        DirectMethodConfig { c, k_max: Self::DEFAULT_K_MAX, tol: Self::DEFAULT_TOL, mode }
    }

    pub fn with_k_max(mut self, k_max: usize) -> Self {
        self.k_max = k_max;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

#[derive(Clone, Debug)]
pub struct DirectMethodResult {
    /// Estimate of `lim c^{-k} b_k`, within `tol` of the limit when certified.
    pub limit: f64,
    /// Certified bound with `|limit - b_0| <= beta`.
    pub beta: f64,
    /// Number of sequence elements consumed.
    pub iterations: usize,
    /// False only when `k_max` was exhausted with the tail still above `tol`.
    pub certified: bool,
    /// Rescaled iterates `(k, c^{-k} b_k)`.
    pub trace: Vec<(usize, f64)>,
}

/// Run the direct method.
///
/// `b(k)` and `alpha(k)` provide the sequence and its defect bounds;
/// `tail_bound(k)` must return a rigorous upper bound on
/// `sum_{j >= k} c^{-j-1} alpha_j` (exact for geometric defect sequences,
/// which is what the dyadic folds produce). An observed step defect above
/// `alpha_k` is a contract violation and aborts the run.
pub fn direct_method(
    mut b: impl FnMut(usize) -> Result<f64>,
    mut alpha: impl FnMut(usize) -> Result<f64>,
    tail_bound: impl Fn(usize) -> f64,
    cfg: &DirectMethodConfig,
) -> Result<DirectMethodResult> {
    DirectMethodConfig::new(cfg.c, cfg.k_max, cfg.tol, cfg.mode)?;
    let c = cfg.c;
    let mut beta_partial = 0.0;
    let mut trace = Vec::new();
    let mut b_k = b(0)?;

    for k in 0..=cfg.k_max {
        let scaled = c.powi(-(k as i32)) * b_k;
        trace.push((k, scaled));
        let tail = tail_bound(k);
        if tail < cfg.tol || k == cfg.k_max {
            return Ok(DirectMethodResult {
                limit: scaled,
                beta: beta_partial + tail,
                iterations: k + 1,
                certified: tail < cfg.tol,
                trace,
            });
        }

        let b_next = b(k + 1)?;
        let alpha_k = alpha(k)?;
        let step_defect = (b_next - c * b_k).abs();
        let allowance = alpha_k * (1.0 + CONTRACT_REL_SLACK)
            + CONTRACT_ABS_SLACK * b_k.abs().max(1.0);
        if step_defect > allowance {
            return Err(Error::ContractViolation(format!(
                "|b_{} - c b_{}| = {step_defect:e} exceeds alpha_{} = {alpha_k:e}",
                k + 1,
                k,
                k
            )));
        }
        beta_partial += c.powi(-(k as i32) - 1) * alpha_k;
        b_k = b_next;
    }
    unreachable!("loop returns at k = k_max")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(c: f64) -> DirectMethodConfig {
        DirectMethodConfig::new(c, 60, 1e-12, ScalingMode::Doubling).unwrap()
    }

    #[test]
    fn exact_geometric_sequence_stops_immediately() {
        let out = direct_method(
            |k| Ok((2.0_f64).powi(k as i32) * 5.0),
            |_| Ok(0.0),
            |_| 0.0,
            &cfg(2.0),
        )
        .unwrap();
        assert_eq!(out.limit, 5.0);
        assert_eq!(out.beta, 0.0);
        assert_eq!(out.iterations, 1);
        assert!(out.certified);
    }

    #[test]
    fn telescoping_oracle() {
        // b_k = 2^k + 1: |b_{k+1} - 2 b_k| = 1, beta = sum 2^{-k-1} = 1,
        // limit 1, and |limit - b_0| = 1 <= beta.
        let out = direct_method(
            |k| Ok((2.0_f64).powi(k as i32) + 1.0),
            |_| Ok(1.0),
            |k| (2.0_f64).powi(-(k as i32)),
            &cfg(2.0),
        )
        .unwrap();
        assert!((out.limit - 1.0).abs() <= 1e-12);
        assert_eq!(out.beta, 1.0);
        assert!(out.certified);
        let b0 = 2.0;
        assert!((out.limit - b0).abs() <= out.beta * (1.0 + 1e-12));
    }

    #[test]
    fn zero_defects_return_first_element() {
        let out = direct_method(|k| Ok(3.0 * (0.5_f64).powi(k as i32)), |_| Ok(0.0), |_| 0.0, &cfg(0.5))
            .unwrap();
        assert_eq!(out.limit, 3.0);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn contract_violation_detected() {
        // claims alpha = 0 but the sequence has defect 1 at every step
        let err = direct_method(
            |k| Ok((2.0_f64).powi(k as i32) + 1.0),
            |_| Ok(0.0),
            |_| 0.5, // keeps the loop going past k = 0
            &cfg(2.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ContractViolation(_)));
    }

    #[test]
    fn exhaustion_flags_uncertified() {
        let cfg = DirectMethodConfig::new(2.0, 5, 1e-12, ScalingMode::Doubling).unwrap();
        let out = direct_method(
            |k| Ok((2.0_f64).powi(k as i32) + 1.0),
            |_| Ok(1.0),
            |k| (2.0_f64).powi(-(k as i32)),
            &cfg,
        )
        .unwrap();
        assert!(!out.certified);
        assert_eq!(out.iterations, 6);
        // beta still accounts for the unexplored tail
        assert_eq!(out.beta, 1.0);
    }
}
