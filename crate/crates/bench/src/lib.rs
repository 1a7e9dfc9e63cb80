//! Seeded instances shared by the criterion benches.

use l1embed_cli::gen;
use l1embed_core::{FiniteMetricSpace, Rational, SimpleGraph};

/// Separating cut sum on `n` points with `k` cuts.
pub fn cut_sum(n: usize, k: usize, seed: u64) -> FiniteMetricSpace {
    let mut rng = gen::rng(seed);
    gen::cut_sum(n, k, true, &mut rng)
        .expect("valid shape")
        .to_metric()
        .expect("separating")
}

pub fn random_metric(n: usize, seed: u64) -> FiniteMetricSpace {
    let mut rng = gen::rng(seed);
    gen::random_metric(n, &Rational::from_integer(12), &mut rng).expect("valid parameters")
}

pub fn random_graph(n: usize, seed: u64) -> SimpleGraph {
    let mut rng = gen::rng(seed);
    gen::random_graph(n, 0.5, &mut rng).expect("valid parameters")
}
