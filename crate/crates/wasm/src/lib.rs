//! Browser demo bindings: three interactive views over the stability kernel.
//!
//! Everything heavy stays in Rust; the page gets flat `Float64Array` buffers
//! to draw. Build with `wasm-pack build --target web` (or cargo +
//! wasm-bindgen-cli) and serve `www/`.

use wasm_bindgen::prelude::*;

use hyers_lab_core::approximate::approximate_with_spot_check;
use hyers_lab_core::{
    defect_hypothesis_check, find_witness, gajda_exact, reduce_to_additive, scalars,
    stabilizer_series, zeta, ControlSpec, DirectMethodConfig, Result as CoreResult, ScalingMode,
    SymmetricKind, SymmetricSpec,
};

fn into_js(err: hyers_lab_core::Error) -> JsError {
    JsError::new(&err.to_string())
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + step * i as f64).collect()
}

/// Sample the bounded counterexample function on an even grid.
#[wasm_bindgen]
pub fn gajda_curve(eps: f64, x_min: f64, x_max: f64, count: usize) -> Vec<f64> {
    linspace(x_min, x_max, count).into_iter().map(|x| gajda_exact(x, eps)).collect()
}

/// Sample the sawtooth seed on the same grid.
#[wasm_bindgen]
pub fn zeta_curve(eps: f64, x_min: f64, x_max: f64, count: usize) -> Vec<f64> {
    linspace(x_min, x_max, count).into_iter().map(|x| zeta(x, eps)).collect()
}

/// A 1-D slice through the n = 2 approximation problem: the perturbed map
/// g(t, anchor), the recovered multiadditive map, and the certified band.
#[wasm_bindgen]
pub struct ApproxSlice {
    xs: Vec<f64>,
    g: Vec<f64>,
    approximant: Vec<f64>,
    bound: Vec<f64>,
    max_iterations: u32,
}

#[wasm_bindgen]
impl ApproxSlice {
    #[wasm_bindgen(getter)]
    pub fn xs(&self) -> Vec<f64> {
        self.xs.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn g(&self) -> Vec<f64> {
        self.g.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn approximant(&self) -> Vec<f64> {
        self.approximant.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn bound(&self) -> Vec<f64> {
        self.bound.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn max_iterations(&self) -> u32 {
        self.max_iterations
    }
}

fn slice_spec(beta: f64, r: f64, eps: f64) -> CoreResult<(SymmetricSpec, ControlSpec)> {
    let spec = SymmetricSpec::new(2, 1, SymmetricKind::PowerPerturbed { c: 1.0, beta, r })?;
    let control = ControlSpec::power(2, eps, r)?;
    Ok((spec, control))
}

/// Recover the multiadditive map along `y = (t, anchor)` for
/// `g = t * anchor + beta * |t * anchor|^r`-style perturbations.
#[wasm_bindgen]
pub fn approx_slice(
    beta: f64,
    r: f64,
    anchor: f64,
    t_min: f64,
    t_max: f64,
    count: usize,
) -> Result<ApproxSlice, JsError> {
    approx_slice_impl(beta, r, anchor, t_min, t_max, count).map_err(into_js)
}

fn approx_slice_impl(
    beta: f64,
    r: f64,
    anchor: f64,
    t_min: f64,
    t_max: f64,
    count: usize,
) -> CoreResult<ApproxSlice> {
    let eps = beta.abs().max(1e-6);
    let (spec, control) = slice_spec(beta, r, eps)?;
    let mode = ScalingMode::for_exponent(r)?;
    let half_width = t_min.abs().max(t_max.abs()).max(anchor.abs()).max(2.0) * 2.0;
    defect_hypothesis_check(&spec, &control, 256, half_width)?;
    let cfg = DirectMethodConfig::for_arity(2, mode);

    let xs = linspace(t_min, t_max, count);
    let mut g = Vec::with_capacity(xs.len());
    let mut approximant = Vec::with_capacity(xs.len());
    let mut bound = Vec::with_capacity(xs.len());
    let mut max_iterations = 0u32;
    for &t in &xs {
        let y = scalars(&[t, anchor]);
        g.push(spec.evaluate(&y)?);
        let out = approximate_with_spot_check(&spec, &control, &y, mode, &cfg, 0)?;
        approximant.push(out.value);
        bound.push(out.bound);
        max_iterations = max_iterations.max(out.iterations as u32);
    }
    Ok(ApproxSlice { xs, g, approximant, bound, max_iterations })
}

/// Rescaled dyadic iterates at a single point, for the convergence view.
#[wasm_bindgen]
pub struct ConvergenceTrace {
    steps: Vec<f64>,
    values: Vec<f64>,
    limit: f64,
    bound: f64,
}

#[wasm_bindgen]
impl ConvergenceTrace {
    #[wasm_bindgen(getter)]
    pub fn steps(&self) -> Vec<f64> {
        self.steps.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn limit(&self) -> f64 {
        self.limit
    }

    #[wasm_bindgen(getter)]
    pub fn bound(&self) -> f64 {
        self.bound
    }
}

#[wasm_bindgen]
pub fn convergence_trace(beta: f64, r: f64, x1: f64, x2: f64) -> Result<ConvergenceTrace, JsError> {
    convergence_trace_impl(beta, r, x1, x2).map_err(into_js)
}

fn convergence_trace_impl(beta: f64, r: f64, x1: f64, x2: f64) -> CoreResult<ConvergenceTrace> {
    let eps = beta.abs().max(1e-6);
    let (spec, control) = slice_spec(beta, r, eps)?;
    let mode = ScalingMode::for_exponent(r)?;
    let cfg = DirectMethodConfig::for_arity(2, mode);
    let y = scalars(&[x1, x2]);
    let out = approximate_with_spot_check(&spec, &control, &y, mode, &cfg, 0)?;
    let (steps, values) =
        out.trace.iter().map(|&(k, v)| (k as f64, v)).unzip();
    Ok(ConvergenceTrace { steps, values, limit: out.value, bound: out.bound })
}

/// The certified pointwise bound along the slice exponent, for display.
#[wasm_bindgen]
pub fn bound_at(beta: f64, r: f64, x1: f64, x2: f64) -> Result<f64, JsError> {
    bound_at_impl(beta, r, x1, x2).map_err(into_js)
}

fn bound_at_impl(beta: f64, r: f64, x1: f64, x2: f64) -> CoreResult<f64> {
    let eps = beta.abs().max(1e-6);
    let (_, control) = slice_spec(beta, r, eps)?;
    let mode = ScalingMode::for_exponent(r)?;
    Ok(stabilizer_series(&control, &scalars(&[x1, x2]), mode, 40)?.upper())
}

/// A violation witness for the threshold counterexample (n = 2): reduce the
/// candidate `c * x1 * x2` to an additive map and find where it escapes the
/// `delta |x|` cone.
#[wasm_bindgen]
pub struct WitnessDemo {
    x_star: f64,
    lhs: f64,
    rhs: f64,
    ratio: f64,
    depth: u32,
    slope: f64,
}

#[wasm_bindgen]
impl WitnessDemo {
    #[wasm_bindgen(getter)]
    pub fn x_star(&self) -> f64 {
        self.x_star
    }

    #[wasm_bindgen(getter)]
    pub fn lhs(&self) -> f64 {
        self.lhs
    }

    #[wasm_bindgen(getter)]
    pub fn rhs(&self) -> f64 {
        self.rhs
    }

    #[wasm_bindgen(getter)]
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    #[wasm_bindgen(getter)]
    pub fn depth(&self) -> u32 {
        self.depth
    }

    #[wasm_bindgen(getter)]
    pub fn slope(&self) -> f64 {
        self.slope
    }
}

#[wasm_bindgen]
pub fn threshold_witness(c: f64, eps: f64, delta: f64) -> Result<WitnessDemo, JsError> {
    threshold_witness_impl(c, eps, delta).map_err(into_js)
}

fn threshold_witness_impl(c: f64, eps: f64, delta: f64) -> CoreResult<WitnessDemo> {
    let candidate =
        reduce_to_additive(move |xs: &[f64]| c * xs.iter().product::<f64>(), 2, eps)?;
    let w = find_witness(&candidate, eps, delta)?;
    Ok(WitnessDemo {
        x_star: w.x_star,
        lhs: w.lhs,
        rhs: w.rhs,
        ratio: w.ratio,
        depth: w.depth as u32,
        slope: candidate.slope(),
    })
}

/// Deviation ratios `|f_G(2^-j) - m(2^-j)| / (delta 2^-j)` over dyadic
/// depths 1..=max_depth; crossing 1 marks a witness.
#[wasm_bindgen]
pub fn witness_profile(c: f64, eps: f64, delta: f64, max_depth: u32) -> Result<Vec<f64>, JsError> {
    witness_profile_impl(c, eps, delta, max_depth).map_err(into_js)
}

fn witness_profile_impl(c: f64, eps: f64, delta: f64, max_depth: u32) -> CoreResult<Vec<f64>> {
    let candidate =
        reduce_to_additive(move |xs: &[f64]| c * xs.iter().product::<f64>(), 2, eps)?;
    let slope = candidate.slope();
    Ok((1..=max_depth)
        .map(|j| {
            let x = (2.0_f64).powi(-(j as i32));
            (gajda_exact(x, eps) - slope * x).abs() / (delta * x)
        })
        .collect())
}
