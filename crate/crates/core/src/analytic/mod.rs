//! Limit laws for gcd and lcm of random tuples, and the constants they need.

mod laws;
mod products;
mod zeta;

pub use laws::*;
pub use products::{coprimality_constant, j_series, prime_factor_weights, upsilon};
pub use zeta::{prime_zeta, zeta, zeta_derivative, zeta_log_deriv, zeta_minus_one, EULER_GAMMA};

use crate::error::{Error, Result};
use std::fmt;

/// Absolute error target for a numerically evaluated quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(f64);

impl Tolerance {
    /// Default for constants (`ζ`, `T_r`, `J`).
    pub const CONSTANT: Tolerance = Tolerance(1e-9);
    /// Default for integrals and expectations.
    pub const EXPECTATION: Tolerance = Tolerance(1e-6);

    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::invalid(format!("tolerance must lie in (0, 1), got {eps}")));
        }
        Ok(Tolerance(eps))
    }

    pub fn eps(self) -> f64 {
        self.0
    }

    /// A tighter tolerance, `eps · factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Tolerance((self.0 * factor).clamp(f64::MIN_POSITIVE, 0.5))
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::CONSTANT
    }
}

/// A two-sided bound `lower ≤ value ≤ upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
}

impl BoundPair {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::numeric(format!("inverted bounds [{lower}, {upper}]")));
        }
        Ok(BoundPair { lower, upper })
    }

    /// Like [`BoundPair::new`], but two numerically evaluated ends that cross by
    /// at most `slack` are merged at their midpoint.
    pub fn from_estimates(lower: f64, upper: f64, slack: f64) -> Result<Self> {
        if lower > upper && lower - upper <= slack {
            let mid = 0.5 * (lower + upper);
            return Ok(BoundPair { lower: mid, upper: mid });
        }
        BoundPair::new(lower, upper)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn strictly_contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

impl fmt::Display for BoundPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

/// A limiting value known either in closed form or only up to bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LawValue {
    Exact(f64),
    Bounds(BoundPair),
}

impl LawValue {
    pub fn exact(&self) -> Option<f64> {
        match self {
            LawValue::Exact(v) => Some(*v),
            LawValue::Bounds(_) => None,
        }
    }

    /// Bounds, degenerate when the value is exact.
    pub fn bounds(&self) -> BoundPair {
        match *self {
            LawValue::Exact(v) => BoundPair { lower: v, upper: v },
            LawValue::Bounds(b) => b,
        }
    }
}

/// Which statistic of an r-tuple a law describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    /// `P(gcd = k)`.
    GcdMass,
    /// `E(gcd^q)`, growth regime depends on `q` against `r`.
    GcdMoment,
    /// `P(lcm / n^r ≤ t)`.
    LcmCdf,
    /// `E(lcm^q) / n^{qr}`.
    LcmMoment,
    /// `P(lcm / product ≤ t)`.
    LcmOverProductCdf,
    /// `E((lcm / product)^q)`.
    LcmOverProductMoment,
    /// `E(ln lcm) − r·ln n + r` in the limit.
    LogLcmMean,
}

/// A fully specified limit-law query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawSpec {
    pub statistic: Statistic,
    pub r: u32,
    /// `k` for [`Statistic::GcdMass`].
    pub k: u64,
    /// `t` for the CDF statistics.
    pub t: f64,
    /// Moment order.
    pub q: u32,
    /// Range size, used by [`Statistic::GcdMoment`] only.
    pub n: u64,
}

impl LawSpec {
    pub fn new(statistic: Statistic, r: u32) -> Self {
        LawSpec {
            statistic,
            r,
            k: 1,
            t: 0.5,
            q: 1,
            n: 0,
        }
    }

    pub fn with_k(mut self, k: u64) -> Self {
        self.k = k;
        self
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn with_q(mut self, q: u32) -> Self {
        self.q = q;
        self
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = n;
        self
    }

    /// Evaluates the law; exact where a closed form exists, bounds otherwise.
    pub fn evaluate(&self, tol: Tolerance) -> Result<LawValue> {
        let r = self.r;
        match self.statistic {
            Statistic::GcdMass => gcd_limit_mass(r, self.k, tol).map(LawValue::Exact),
            Statistic::GcdMoment => gcd_moment_asymptotic(r, self.q, self.n, tol).map(|a| LawValue::Exact(a.value)),
            Statistic::LcmCdf => match r {
                2 => lcm_pair_cdf_limit(self.t).map(LawValue::Exact),
                3 => lcm3_cdf_limit(self.t, tol).map(LawValue::Exact),
                _ => lcm_r_cdf_bounds(r, self.t, tol).map(LawValue::Bounds),
            },
            Statistic::LcmMoment => match r {
                2 => lcm_pair_moment_limit(self.q, tol).map(LawValue::Exact),
                3 => lcm3_moment_limit(self.q, tol).map(LawValue::Exact),
                _ => lcm_r_moment_bounds(r, self.q, tol).map(LawValue::Bounds),
            },
            Statistic::LcmOverProductCdf => lcm_over_product_cdf(r, self.t, tol),
            Statistic::LcmOverProductMoment => lcm_over_product_moment(r, self.q, tol),
            Statistic::LogLcmMean => log_lcm_mean_limit(r, tol).map(LawValue::Exact),
        }
    }
}
