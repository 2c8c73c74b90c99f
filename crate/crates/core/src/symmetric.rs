//! The catalog of evaluable symmetric n-ary maps and the defect operator.
//!
//! Every constructor yields a function symmetric under argument permutation.
//! The defect operator measures the failure of additivity in the last
//! argument; a symmetric map is n-additive exactly when its defect vanishes.

use crate::control::power_factor;
use crate::error::{Error, Result};
use crate::float::sorted_product;
use crate::gajda::gajda_multi;
use crate::point::{check_arity, check_dims, Point};

#[derive(Clone, Debug, PartialEq)]
pub enum SymmetricKind {
    /// `c * prod_i s(x_i)` with `s` the coordinate sum; the n-additive
    /// kernel of the catalog (for d = 1 this is `c * x_1 ... x_n`).
    ExactMultiadditive { c: f64 },
    /// The multiadditive kernel plus a power perturbation:
    /// `c * prod s(x_i) + beta * prod ||x_i||^r`.
    PowerPerturbed { c: f64, beta: f64, r: f64 },
    /// `eps/2 * prod ||x_i||`; at the threshold exponent this map is
    /// approximated by a whole family of multiadditive maps.
    AbsProduct { eps: f64 },
    /// The threshold counterexample `sum_i f_G(x_i) prod_{j != i} x_j`
    /// (scalar domain, n >= 2); no multiadditive map approximates it.
    GajdaMulti { eps: f64 },
}

/// Declarative description of an evaluable symmetric map `g: (R^d)^n -> R`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricSpec {
    n: usize,
    d: usize,
    kind: SymmetricKind,
}

impl SymmetricSpec {
    pub fn new(n: usize, d: usize, kind: SymmetricKind) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::Config(format!("need n >= 1 and d >= 1, got n = {n}, d = {d}")));
        }
        match kind {
            SymmetricKind::AbsProduct { eps } | SymmetricKind::GajdaMulti { eps } => {
                if !(eps > 0.0) {
                    return Err(Error::Config(format!("eps must be positive, got {eps}")));
                }
            }
            SymmetricKind::PowerPerturbed { r, .. } => {
                if !r.is_finite() {
                    return Err(Error::Config(format!("perturbation exponent must be finite, got {r}")));
                }
            }
            SymmetricKind::ExactMultiadditive { .. } => {}
        }
        if let SymmetricKind::GajdaMulti { .. } = kind {
            if d != 1 {
                return Err(Error::Config("the threshold counterexample is scalar (d = 1)".into()));
            }
            if n < 2 {
                return Err(Error::ScalarCounterexample);
            }
        }
        Ok(SymmetricSpec { n, d, kind })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> &SymmetricKind {
        &self.kind
    }

    /// Evaluate `g(y)` on an n-tuple.
    pub fn evaluate(&self, y: &[Point]) -> Result<f64> {
        check_arity(y, self.n)?;
        check_dims(y, self.d)?;
        match self.kind {
            SymmetricKind::ExactMultiadditive { c } => {
                Ok(c * sorted_product(y.iter().map(Point::coord_sum).collect()))
            }
            SymmetricKind::PowerPerturbed { c, beta, r } => {
                let kernel = sorted_product(y.iter().map(Point::coord_sum).collect());
                let perturbation =
                    sorted_product(y.iter().map(|p| power_factor(p.norm(), r)).collect());
                Ok(c * kernel + beta * perturbation)
            }
            SymmetricKind::AbsProduct { eps } => {
                Ok(eps / 2.0 * sorted_product(y.iter().map(Point::norm).collect()))
            }
            SymmetricKind::GajdaMulti { eps } => {
                let xs: Vec<f64> =
                    y.iter().map(Point::as_scalar).collect::<Result<_>>()?;
                gajda_multi(&xs, eps)
            }
        }
    }

    /// The defect on an (n+1)-tuple:
    /// `D_n g(z) = g(x_1..x_{n-1}, x_n + x_{n+1}) - g(x_1..x_{n-1}, x_n) -
    /// g(x_1..x_{n-1}, x_{n+1})`; for n = 1 this is the plain Cauchy defect.
    pub fn defect(&self, z: &[Point]) -> Result<f64> {
        self.defect_eval(z).map(|d| d.value)
    }

    /// Defect together with the magnitude of the three evaluations that
    /// formed it, which sets the rounding scale of the cancellation.
    pub fn defect_eval(&self, z: &[Point]) -> Result<DefectEval> {
        check_arity(z, self.n + 1)?;
        check_dims(z, self.d)?;
        let n = self.n;
        let mut joined: Vec<Point> = z[..n - 1].to_vec();
        joined.push(z[n - 1].add(&z[n]));
        let mut first: Vec<Point> = z[..n - 1].to_vec();
        first.push(z[n - 1].clone());
        let mut second: Vec<Point> = z[..n - 1].to_vec();
        second.push(z[n].clone());
        let a = self.evaluate(&joined)?;
        let b = self.evaluate(&first)?;
        let c = self.evaluate(&second)?;
        Ok(DefectEval { value: a - b - c, magnitude: a.abs() + b.abs() + c.abs() })
    }
}

/// Defect value plus the rounding scale of the evaluations behind it.
#[derive(Clone, Copy, Debug)]
pub struct DefectEval {
    pub value: f64,
    pub magnitude: f64,
}

/// Absolute rounding allowance for a computed defect: a few ulps per factor
/// of the products that cancelled, scaled by their magnitude.
pub fn defect_rounding_allowance(n: usize, magnitude: f64) -> f64 {
    4.0 * (n as f64 + 2.0) * f64::EPSILON * magnitude.max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::scalars;

    #[test]
    fn product_kernel() {
        let spec = SymmetricSpec::new(2, 1, SymmetricKind::ExactMultiadditive { c: 1.0 }).unwrap();
        assert_eq!(spec.evaluate(&scalars(&[3.0, 4.0])).unwrap(), 12.0);
    }

    #[test]
    fn abs_product_values() {
        let spec = SymmetricSpec::new(2, 1, SymmetricKind::AbsProduct { eps: 1.0 }).unwrap();
        // 0.5 * |-2| * |3|
        assert_eq!(spec.evaluate(&scalars(&[-2.0, 3.0])).unwrap(), 3.0);
    }

    #[test]
    fn multiadditive_kernel_of_defect() {
        let spec = SymmetricSpec::new(3, 1, SymmetricKind::ExactMultiadditive { c: -2.5 }).unwrap();
        let z = scalars(&[1.5, -0.25, 3.0, 7.0]);
        assert!(spec.defect(&z).unwrap().abs() < 1e-12);
    }

    #[test]
    fn abs_product_defect_values() {
        let spec = SymmetricSpec::new(2, 1, SymmetricKind::AbsProduct { eps: 1.0 }).unwrap();
        // 0.5 * |1| * (|0| - 1 - 1)
        assert_eq!(spec.defect(&scalars(&[1.0, 1.0, -1.0])).unwrap(), -1.0);
        // same-sign absolute values are additive
        assert_eq!(spec.defect(&scalars(&[1.0, 2.0, 3.0])).unwrap(), 0.0);
    }

    #[test]
    fn cauchy_defect_for_unary_maps() {
        let spec = SymmetricSpec::new(1, 1, SymmetricKind::AbsProduct { eps: 2.0 }).unwrap();
        // g(x) = |x|: g(1 + -1) - g(1) - g(-1) = -2
        assert_eq!(spec.defect(&scalars(&[1.0, -1.0])).unwrap(), -2.0);
    }

    #[test]
    fn arity_and_dim_guards() {
        let spec = SymmetricSpec::new(2, 1, SymmetricKind::ExactMultiadditive { c: 1.0 }).unwrap();
        assert!(spec.evaluate(&scalars(&[1.0])).is_err());
        let p2 = Point::new(vec![1.0, 2.0]).unwrap();
        assert!(spec.evaluate(&[p2.clone(), p2]).is_err());
    }

    #[test]
    fn gajda_multi_requires_scalar_domain() {
        assert!(SymmetricSpec::new(2, 2, SymmetricKind::GajdaMulti { eps: 1.0 }).is_err());
        assert!(SymmetricSpec::new(1, 1, SymmetricKind::GajdaMulti { eps: 1.0 }).is_err());
        assert!(SymmetricSpec::new(2, 1, SymmetricKind::GajdaMulti { eps: 1.0 }).is_ok());
    }

    #[test]
    fn coordinate_sum_kernel_in_higher_dimension() {
        let spec = SymmetricSpec::new(2, 2, SymmetricKind::ExactMultiadditive { c: 2.0 }).unwrap();
        let a = Point::new(vec![1.0, 2.0]).unwrap();
        let b = Point::new(vec![3.0, -1.0]).unwrap();
        // 2 * (1+2) * (3-1) = 12
        assert_eq!(spec.evaluate(&[a, b]).unwrap(), 12.0);
    }
}
