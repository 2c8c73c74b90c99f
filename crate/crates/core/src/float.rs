//! Small floating-point helpers shared across the kernel.

/// Product in a canonical factor order: permuting the inputs cannot change
/// the rounding, so symmetric constructions stay bit-exact under argument
/// permutation.
pub fn sorted_product(mut factors: Vec<f64>) -> f64 {
    factors.sort_by(f64::total_cmp);
    factors.into_iter().product()
}

/// Sum in a canonical term order; see [`sorted_product`].
pub fn sorted_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}

/// Relative closeness at tolerance `rel`, with a tiny absolute floor so
/// exact zeros compare equal.
pub fn close_rel(a: f64, b: f64, rel: f64) -> bool {
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= rel * scale + f64::MIN_POSITIVE
}
