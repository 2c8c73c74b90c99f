//! Control functions and the fold that bounds the double-step defect.
//!
//! A control `phi` on n+1 arguments dominates the defect of a perturbed
//! symmetric map. Folding it produces the n-term combination `r_n phi` with
//! `|g(2y) - 2^n g(y)| <= r_n phi(y)`; the fold is always computed by literal
//! summation of its n terms. Closed-form coefficients live in a separate
//! layer ([`kappa`], [`stability_constant`]) that is cross-checked against
//! the summation, never substituted for it.

use crate::error::{Error, Result};
use crate::point::{check_arity, Point};

/// `t^r` with the zero convention used throughout: a zero norm counts as 1
/// when r <= 0 (and is 0 for r > 0, as the power itself gives).
pub fn power_factor(norm: f64, r: f64) -> f64 {
    if norm == 0.0 {
        if r <= 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        norm.powf(r)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ControlKind {
    /// `phi(x_1..x_{n+1}) = eps ||x_1||^r ... ||x_{n-1}||^r (||x_n||^r + ||x_{n+1}||^r)`.
    ///
    /// For n = 1 the product prefix is empty: `phi(x, y) = eps (||x||^r + ||y||^r)`.
    Power { eps: f64, r: f64 },
}

/// A control function on n+1 arguments.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlSpec {
    n: usize,
    kind: ControlKind,
}

impl ControlSpec {
    pub fn power(n: usize, eps: f64, r: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("control needs n >= 1".into()));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Config(format!("control eps must be positive, got {eps}")));
        }
        if !r.is_finite() {
            return Err(Error::Config(format!("control exponent must be finite, got {r}")));
        }
        Ok(ControlSpec { n, kind: ControlKind::Power { eps, r } })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of arguments the control takes (n + 1).
    pub fn arity(&self) -> usize {
        self.n + 1
    }

    pub fn kind(&self) -> &ControlKind {
        &self.kind
    }

    /// The power exponent r.
    pub fn exponent(&self) -> f64 {
        match self.kind {
            ControlKind::Power { r, .. } => r,
        }
    }

    pub fn eps(&self) -> f64 {
        match self.kind {
            ControlKind::Power { eps, .. } => eps,
        }
    }

    /// Evaluate `phi(z)` on an (n+1)-tuple.
    pub fn evaluate(&self, z: &[Point]) -> Result<f64> {
        check_arity(z, self.arity())?;
        match self.kind {
            ControlKind::Power { eps, r } => {
                let mut prefix = eps;
                for p in &z[..self.n - 1] {
                    prefix *= power_factor(p.norm(), r);
                }
                let tail =
                    power_factor(z[self.n - 1].norm(), r) + power_factor(z[self.n].norm(), r);
                Ok(prefix * tail)
            }
        }
    }

    /// Number of coordinates of `y` whose factor actually rescales when `y`
    /// is doubled (zero points are pinned at 1 for r <= 0). Drives the exact
    /// geometric ratio of the stabilizer series.
    pub(crate) fn scaling_slots(&self, y: &[Point]) -> usize {
        match self.kind {
            ControlKind::Power { .. } => y.iter().filter(|p| !p.is_zero()).count(),
        }
    }
}

/// The fold `r_n phi`: the weighted n-term combination bounding the
/// double-step defect, evaluated by literal summation.
///
/// Term j (j = 0..n-1) carries weight 2^j and evaluates `phi` at
/// `(2x_1, ..., 2x_{n-1-j}, x_n, ..., x_{n-j+1}, x_{n-j}, x_{n-j})`.
/// For n = 1 this is the single term `phi(x_1, x_1)`.
pub fn fold_control(control: &ControlSpec, y: &[Point]) -> Result<f64> {
    let n = control.n();
    check_arity(y, n)?;
    let mut total = 0.0;
    for j in 0..n {
        let mut args: Vec<Point> = Vec::with_capacity(n + 1);
        // doubled prefix x_1 .. x_{n-1-j}
        for p in &y[..n - 1 - j] {
            args.push(p.scaled(2.0));
        }
        // descending run x_n .. x_{n-j+1}
        for p in y[n - j..].iter().rev() {
            args.push(p.clone());
        }
        // repeated last argument x_{n-j}
        args.push(y[n - 1 - j].clone());
        args.push(y[n - 1 - j].clone());
        let weight = (2.0_f64).powi(j as i32);
        total += weight * control.evaluate(&args)?;
    }
    Ok(total)
}

/// The exact fold coefficient for power controls on nonzero tuples:
/// `kappa(n, r) = sum_{j=0}^{n-1} 2^{(n-1-j) r + j + 1}`, so that
/// `fold = eps * kappa * prod ||x_i||^r`. Computed as the literal finite sum;
/// defined for every r (at the threshold, `kappa(n, 1) = n 2^n`).
pub fn kappa(n: usize, r: f64) -> f64 {
    assert!(n >= 1, "kappa needs n >= 1");
    let mut total = 0.0;
    for j in 0..n {
        let exponent = (n - 1 - j) as f64 * r + j as f64 + 1.0;
        total += (2.0_f64).powf(exponent);
    }
    total
}

/// Per-eps coefficient of the certified bound for power controls, away from
/// the threshold r = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityConstant {
    /// From the literal fold summation: `kappa(n, r) / |2^n - 2^{nr}|`.
    pub definitional: f64,
    /// The closed form quoted in the stability literature,
    /// `2^{(n-1)(r-1)+1} / |2^r - 2|`. It agrees with the definitional value
    /// for n = 1 but differs by the factor 2^{(n-1)(r-1)} for n >= 2, r != 1;
    /// the definitional value is authoritative.
    pub literature: f64,
}

impl StabilityConstant {
    /// Relative agreement of the two routes at 1e-10.
    pub fn agree(&self) -> bool {
        let scale = self.definitional.abs().max(self.literature.abs()).max(f64::MIN_POSITIVE);
        (self.definitional - self.literature).abs() <= 1e-10 * scale
    }
}

/// Certified per-eps bound coefficient `C(n, r)` for power controls, with the
/// literature closed form alongside for comparison.
///
/// Errors at the threshold r = 1, where the geometric series degenerates.
pub fn stability_constant(n: usize, r: f64) -> Result<StabilityConstant> {
    if n == 0 {
        return Err(Error::Config("stability constant needs n >= 1".into()));
    }
    if r == 1.0 {
        return Err(Error::StabilityThreshold);
    }
    let denom = ((2.0_f64).powi(n as i32) - (2.0_f64).powf(n as f64 * r)).abs();
    let definitional = kappa(n, r) / denom;
    let literature = (2.0_f64).powf((n as f64 - 1.0) * (r - 1.0) + 1.0)
        / ((2.0_f64).powf(r) - 2.0).abs();
    Ok(StabilityConstant { definitional, literature })
}
