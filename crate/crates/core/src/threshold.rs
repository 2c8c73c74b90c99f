//! The r = 1 threshold machinery: the family of multiadditive maps that all
//! approximate the absolute product (non-uniqueness), and the constructive
//! witness that no multiadditive map approximates the bounded-counterexample
//! product (non-existence).

use crate::error::{Error, Result};
use crate::gajda::gajda_exact;
use crate::sampling::{WeylSequence, DEFAULT_SEED};

/// Dyadic depths used by the additivity spot-check.
const ADDITIVITY_DEPTHS: [i32; 6] = [0, -1, -3, -7, -13, -20];
/// Relative tolerance of the dyadic-additivity check.
const ADDITIVITY_REL_TOL: f64 = 1e-12;
/// Deepest dyadic witness that still evaluates exactly in doubles
/// (2^-depth stays representable with room for the linear term).
const MAX_WITNESS_DEPTH: u64 = 1060;
/// Fallback scan depths when the analytic witness degenerates numerically.
const FALLBACK_SCAN_DEPTH: u64 = 200;

/// Decide whether `a(y) = alpha * x_1...x_n` stays within
/// `delta * prod |x_i|` of the absolute product `g(y) = eps/2 * prod |x_i|`.
///
/// On positive tuples the ratio `|g - a| / prod x_i` equals `|eps/2 - alpha|`
/// exactly, so validity is `|eps/2 - alpha| <= delta`; every alpha in the
/// closed interval of half-width delta around eps/2 yields a valid
/// multiadditive approximant, which is the non-uniqueness at the threshold.
/// The analytic decision is confirmed against a positive-orthant sample.
pub fn nonuniqueness_family(n: usize, eps: f64, delta: f64, alpha: f64) -> Result<bool> {
    if n == 0 {
        return Err(Error::Config("need n >= 1".into()));
    }
    if !(eps > 0.0) || !(delta >= 0.0) {
        return Err(Error::Config(format!(
            "need eps > 0 and delta >= 0, got eps = {eps}, delta = {delta}"
        )));
    }
    let analytic = (eps / 2.0 - alpha).abs() <= delta;

    // positive-orthant sampler: worst observed ratio must match |eps/2 - alpha|
    let mut seq = WeylSequence::new(n, DEFAULT_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..256 {
        let unit = seq.next_unit();
        let xs: Vec<f64> = unit.iter().map(|u| 0.25 + 3.75 * u).collect();
        let prod: f64 = xs.iter().product();
        let g = eps / 2.0 * prod;
        let a = alpha * prod;
        worst = worst.max((g - a).abs() / prod);
    }
    let expected = (eps / 2.0 - alpha).abs();
    if (worst - expected).abs() > 1e-9 * expected.max(1.0) {
        return Err(Error::ContractViolation(format!(
            "sampled deviation ratio {worst:e} disagrees with the analytic value {expected:e}"
        )));
    }
    Ok(analytic)
}

/// A candidate additive map on the reals, carried as its dyadic slope
/// `c = m(1)` plus an evaluation handle.
///
/// Additivity alone pins `m(x) = c x` on dyadic rationals, which is all the
/// witness construction needs; nothing is assumed on the rest of the line.
pub struct AdditiveCandidate {
    slope: f64,
    eval: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    additive_on_dyadics: bool,
}

impl AdditiveCandidate {
    /// Wrap an evaluation handle; the slope is `m(1)` and the dyadic
    /// additivity `m(2x) = 2 m(x)` is spot-checked immediately.
    pub fn from_fn(eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let slope = eval(1.0);
        let mut ok = slope.is_finite();
        if ok {
            for &depth in &ADDITIVITY_DEPTHS {
                let x = (2.0_f64).powi(depth);
                let doubled = eval(2.0 * x);
                let twice = 2.0 * eval(x);
                let scale = doubled.abs().max(twice.abs()).max(1e-300);
                if (doubled - twice).abs() > ADDITIVITY_REL_TOL * scale {
                    ok = false;
                    break;
                }
            }
        }
        AdditiveCandidate { slope, eval: Box::new(eval), additive_on_dyadics: ok }
    }

    /// The linear map `m(x) = c x`.
    pub fn linear(c: f64) -> Self {
        Self::from_fn(move |x| c * x)
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn value_at(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Whether the dyadic-additivity spot-check passed at construction.
    pub fn additive_on_dyadics(&self) -> bool {
        self.additive_on_dyadics
    }
}

impl std::fmt::Debug for AdditiveCandidate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AdditiveCandidate")
            .field("slope", &self.slope)
            .field("additive_on_dyadics", &self.additive_on_dyadics)
            .finish()
    }
}

/// Collapse a symmetric n-ary candidate to the additive map
/// `m(x) = a(1, ..., 1, x) - (n-1) f_G(1) x`.
///
/// If `a` is n-additive, `m` is additive; when `a` also approximates the
/// n-variable counterexample within `delta * prod |x_i|`, then `m`
/// approximates the bounded counterexample function within `delta |x|`,
/// which [`find_witness`] refutes.
pub fn reduce_to_additive(
    a: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    n: usize,
    eps: f64,
) -> Result<AdditiveCandidate> {
    if n < 2 {
        return Err(Error::ScalarCounterexample);
    }
    if !(eps > 0.0) {
        return Err(Error::Config(format!("eps must be positive, got {eps}")));
    }
    let fg_one = eps / 3.0; // closed-form value of the counterexample function at 1
    let m = move |x: f64| {
        let mut args = vec![1.0; n];
        args[n - 1] = x;
        a(&args) - (n as f64 - 1.0) * fg_one * x
    };
    Ok(AdditiveCandidate::from_fn(m))
}

/// A point certifying that the candidate fails the threshold bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessReport {
    pub x_star: f64,
    /// `|f_G(x*) - m(x*)|`.
    pub lhs: f64,
    /// `delta * |x*|`.
    pub rhs: f64,
    /// `lhs / rhs`; a valid witness has ratio > 1.
    pub ratio: f64,
    /// Dyadic depth: `x* = 2^-depth`.
    pub depth: u64,
}

/// Produce a point `x*` with `|f_G(x*) - m(x*)| > delta |x*|`.
///
/// With `c = m(1)`, the depth `N = ceil(6 (delta + |c|) / eps) + 1` and
/// `x* = 2^-N` give `f_G(x*) >= (N eps / 6) x*`, so the deviation exceeds
/// `(N eps/6 - |c|) x* > delta x*`. If the analytic point fails numerically
/// (degenerate candidate), a scan over `x = 2^-j` is the fallback.
pub fn find_witness(m: &AdditiveCandidate, eps: f64, delta: f64) -> Result<WitnessReport> {
    if !(eps > 0.0) || !(delta > 0.0) {
        return Err(Error::Config(format!(
            "need eps > 0 and delta > 0, got eps = {eps}, delta = {delta}"
        )));
    }
    let c = m.slope();
    let depth = (6.0 * (delta + c.abs()) / eps).ceil() as u64 + 1;
    if depth > MAX_WITNESS_DEPTH {
        return Err(Error::WitnessDepthOverflow { depth, max: MAX_WITNESS_DEPTH });
    }

    let report_at = |j: u64| -> WitnessReport {
        let x = (2.0_f64).powi(-(j as i32));
        let lhs = (gajda_exact(x, eps) - m.value_at(x)).abs();
        let rhs = delta * x;
        WitnessReport { x_star: x, lhs, rhs, ratio: lhs / rhs, depth: j }
    };

    let analytic = report_at(depth);
    if analytic.ratio > 1.0 {
        return Ok(analytic);
    }
    for j in 1..=FALLBACK_SCAN_DEPTH {
        let scanned = report_at(j);
        if scanned.ratio > 1.0 {
            return Ok(scanned);
        }
    }
    Err(Error::WitnessNotFound)
}
