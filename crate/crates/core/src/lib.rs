//! Exact, asymptotic and simulated laws for the gcd and lcm of random
//! r-tuples drawn uniformly from `{1, …, n}`, and for the waiting times of the
//! running gcd and lcm.

pub mod analytic;
pub mod arith;
pub mod cli;
pub mod enumeration;
pub mod error;
pub mod montecarlo;
pub mod quad;
pub mod waiting;

pub use error::{Error, Result};
