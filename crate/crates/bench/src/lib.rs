//! Shared fixtures for the operator benchmarks.

use std::f64::consts::PI;

use frax_core::grid::sample;
use frax_core::GridFunction;

/// A band-limited test function with a handful of modes per axis.
pub fn band_limited(sizes: &[usize]) -> GridFunction {
    let periods = vec![2.0 * PI; sizes.len()];
    sample(
        |x| x.iter().enumerate().map(|(a, v)| ((a + 2) as f64 * v).cos() + 0.3 * (5.0 * v).sin()).product(),
        sizes,
        &periods,
    )
    .expect("valid grid")
}
