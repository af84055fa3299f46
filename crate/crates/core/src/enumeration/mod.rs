//! Exact oracles over all r-tuples in `{1..n}^r`: brute force where
//! affordable, divisor-sum accelerated paths where an identity allows.

mod coprime;
mod count;
mod dist;
mod gcd;
mod lcm;
mod triple;

pub use coprime::pairwise_coprime_count;
pub use count::{count, CountKind, CountQuery};
pub use dist::{EmpiricalDist, Provenance};
pub use gcd::{coprime_tuple_count, gcd_exact_distribution, gcd_exact_moment, log_lcm_exact_mean};
pub use lcm::{
    lcm_exact_cdf, lcm_exact_cdf_brute, lcm_exact_cdf_grid, lcm_exact_moment, lcm_exact_moment_brute, lcm_scan,
    LcmScan,
};
pub use triple::{decompose_triple, lcm_via_gcd_product, TripleDecomposition};

use crate::error::{Error, Result};

/// Default cap on tuple visits for brute-force enumeration.
pub const ENUMERATION_BUDGET: u128 = 1_000_000_000;

/// `n^r`, or a resource error when it exceeds `budget`.
pub(crate) fn check_budget(n: u64, r: u32, budget: u128, what: &str) -> Result<u128> {
    match (n as u128).checked_pow(r) {
        Some(v) if v <= budget => Ok(v),
        other => Err(Error::Resource {
            what: format!("{what}: n^r tuple visits with n={n}, r={r}"),
            needed: other.unwrap_or(u128::MAX),
            budget,
        }),
    }
}

/// Largest integer `B` with `B ≤ t·scale`, nudged so exact ties such as
/// `t = 1/2, scale = 4` are not lost to rounding.
pub(crate) fn threshold(t: f64, scale: f64) -> u128 {
    let x = t * scale;
    if x <= 0.0 {
        return 0;
    }
    (x * (1.0 + 1e-12)).floor() as u128
}
