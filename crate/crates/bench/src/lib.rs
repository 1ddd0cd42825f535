//! Shared inputs for the benchmarks.

use condsym_core::{make_random_polynomial, ModelParams, Point, RandomPolynomialField};

/// A random cubic in `N = 2`, `z = 2`.
pub fn cubic_field(seed: u64) -> (RandomPolynomialField, ModelParams) {
    let params = ModelParams::new(2, 2.0).expect("valid parameters");
    let f = make_random_polynomial(seed, &params, 3, 1.0).expect("valid field");
    (f, params)
}

pub fn sample_point() -> Point {
    Point::new(1.2, [0.3, -0.4])
}
