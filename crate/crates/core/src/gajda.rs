//! The bounded counterexample function at the stability threshold.
//!
//! `f_G(x) = sum_{k>=0} 2^{-k} zeta(2^k x)` is bounded by `eps/3` yet its
//! Cauchy defect is controlled by `eps(|x| + |y|)`, so no additive map stays
//! within `delta |x|` of it. Everything here evaluates in closed form; the
//! truncated series is kept as an independent oracle.

use crate::error::{Error, Result};
use crate::float::{sorted_product, sorted_sum};

/// Saturating sawtooth seed of the series: `eps/6` on `[1, inf)`,
/// linear `eps/6 * x` on `(-1, 1)`, `-eps/6` on `(-inf, -1]`.
///
/// The negative branch is taken on `x <= -1`; that is the only reading
/// consistent with oddness and with the linear middle branch (the interval
/// is sometimes printed as `(-inf, 1]`, which would overlap the middle).
pub fn zeta(x: f64, eps: f64) -> f64 {
    if x >= 1.0 {
        eps / 6.0
    } else if x <= -1.0 {
        -eps / 6.0
    } else {
        eps / 6.0 * x
    }
}

/// Smallest k >= 0 with 2^k |x| >= 1. Exact: doubling a finite float is exact
/// up to overflow, and |x| >= 2^-1074 bounds the loop.
fn saturation_index(x: f64) -> u32 {
    debug_assert!(x != 0.0 && x.is_finite());
    let mut t = x.abs();
    let mut k = 0u32;
    while t < 1.0 {
        t *= 2.0;
        k += 1;
    }
    k
}

/// Closed-form value of the series: with K the saturation index of x,
/// the first K terms are each `eps/6 * x` and the saturated tail is a
/// geometric sum, giving `eps/6 * (K x + sign(x) 2^(1-K))`.
pub fn gajda_exact(x: f64, eps: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let k = saturation_index(x);
    let tail = x.signum() * (2.0_f64).powi(1 - k as i32);
    eps / 6.0 * (k as f64 * x + tail)
}

/// Truncated series with a rigorous tail bound.
///
/// Returns the partial sum over `k < k_terms` and the bound
/// `eps/6 * 2^(1 - k_terms)` on everything dropped (each summand is at most
/// `2^-k * eps/6` in magnitude).
pub fn gajda_series(x: f64, eps: f64, k_terms: u32) -> (f64, f64) {
    assert!(k_terms >= 1, "k_terms must be at least 1");
    let mut sum = 0.0;
    for k in 0..k_terms {
        let weight = (2.0_f64).powi(-(k as i32));
        sum += weight * zeta((2.0_f64).powi(k as i32) * x, eps);
    }
    let tail_bound = eps / 6.0 * (2.0_f64).powi(1 - k_terms as i32);
    (sum, tail_bound)
}

/// Cauchy defect `f_G(x+y) - f_G(x) - f_G(y)`, evaluated in closed form.
///
/// Callers assert `|result| <= eps (|x| + |y|)`.
pub fn cauchy_defect(x: f64, y: f64, eps: f64) -> f64 {
    gajda_exact(x + y, eps) - gajda_exact(x, eps) - gajda_exact(y, eps)
}

/// The n-variable counterexample: `sum_i f_G(x_i) * prod_{j != i} x_j`.
///
/// Defined for scalars (d = 1) and n >= 2; for n = 1 there are no product
/// factors, use [`gajda_exact`] directly. Terms and factors are reduced in a
/// canonical order so symmetry under permutation holds bit-exactly.
pub fn gajda_multi(xs: &[f64], eps: f64) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::ScalarCounterexample);
    }
    let terms: Vec<f64> = (0..xs.len())
        .map(|i| {
            let mut factors: Vec<f64> = Vec::with_capacity(xs.len());
            factors.push(gajda_exact(xs[i], eps));
            factors.extend(xs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x));
            sorted_product(factors)
        })
        .collect();
    Ok(sorted_sum(terms))
}
