//! Colored type-B set partitions.
//!
//! A `(c, m)`-colored `B_n`-partition is a set partition of `[n] ∪ {0}` in
//! which the elements of the block holding `0` (the zero-block) take one of
//! `c` colors and the elements of every other block take one of `m` colors,
//! with each block minimum forced to the first color. This crate counts them
//! exactly, studies the polynomials `T_n(x) = Σ_k T_{n,k} x^k` by number of
//! non-zero blocks, computes the exact law of that block count, evaluates the
//! saddle-point asymptotics of `T_n`, and samples partitions uniformly.
//!
//! Modules:
//!
//! * [`enumeration`]: the count table and independent counting oracles.
//! * [`polynomials`]: block-count polynomials and Sturm root certificates.
//! * [`statistics`]: exact moments, the pmf of the block count, KS distance.
//! * [`asymptotics`]: saddle-point solver and log-scale estimates.
//! * [`sampler`]: rank/unrank bijection and uniform sampling.

pub mod asymptotics;
pub mod bigmath;
pub mod enumeration;
mod error;
mod params;
pub mod partition;
pub mod polynomials;
pub mod sampler;
pub mod statistics;

pub use asymptotics::{
    lemma_residuals, log_total_asymptotic, log_total_exact, saddle_growth_check,
    second_divided_difference, solve_saddle, GrowthDiagnostics, LemmaResiduals, LogEstimate,
    SaddleParams, SaddlePoint,
};
pub use enumeration::{
    brute_force_enumerate, brute_force_total, closed_form_total, count_table, egf_series_total,
    stirling2, total, CountTable, Rows,
};
pub use error::{Error, Result};
pub use params::ColorParams;
pub use partition::{ColoredPartition, Tagged};
pub use polynomials::{
    block_polynomial, count_distinct_negative_roots, newton_inequalities, verify_poly_recurrence,
    BlockPolynomial, RootCount,
};
pub use sampler::{rank, sample_uniform, unrank, validate, SampleRecord, Sampler};
pub use statistics::{
    chi_square_gof, exact_pmf, ks_to_normal, moments_direct, moments_ratio, ChiSquare,
    DistributionSummary, MomentPair,
};
