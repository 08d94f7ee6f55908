//! Harmonic sums over missing-digit sets: exact partial sums, per-block
//! brackets, the estimates behind both convergence tests, and the
//! classifier built on them.

mod bounds;
mod bracket;
mod classify;
mod sum;

pub use bounds::{
    block_lower_estimate, density, one_minus_product, survival_product, tail_upper_estimate, weierstrass_lower,
};
pub use bracket::{block_bracket, block_reports, BlockReport};
pub use classify::{
    classify, classify_with, convergence_by_bounded_quotients, delta_grid, divergence_by_unbounded_quotients,
    Attempt, Classification, ClassifyOptions, Hypothesis, Margin, Verdict, DEFAULT_I_WINDOW, DEFAULT_K_WINDOW,
};
pub use sum::{
    block_range_sum, block_sum_enclosure, block_sum_exact, partial_sum_exact, partial_sum_exact_with, PartialSum,
    DEFAULT_BUDGET,
};
