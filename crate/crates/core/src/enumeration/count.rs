use super::{check_budget, threshold, ENUMERATION_BUDGET};
use crate::arith::gcd;
use crate::error::{Error, Result};

/// Which lattice points of `[1, z]^r` are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    /// `x₁⋯x_r ≤ t z^r`.
    Product,
    /// As [`CountKind::Product`], restricted to `gcd(x) = 1`.
    CoprimeProduct,
    /// `lcm(x) ≤ t z^r`.
    Lcm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountQuery {
    pub r: u32,
    pub z: f64,
    pub t: f64,
    pub kind: CountKind,
}

impl CountQuery {
    pub fn new(r: u32, z: f64, t: f64, kind: CountKind) -> Result<Self> {
        if r < 1 {
            return Err(Error::invalid("count query needs r >= 1"));
        }
        if !(z >= 1.0 && z.is_finite()) {
            return Err(Error::invalid(format!("box edge z must be >= 1, got {z}")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::invalid(format!("threshold t must be > 0, got {t}")));
        }
        Ok(CountQuery { r, z, t, kind })
    }
}

struct Walker {
    m: u64,
    r: usize,
    bound: u128,
    kind: CountKind,
}

impl Walker {
    fn walk(&self, depth: usize, prefix: u128, g: u64) -> u128 {
        if depth == self.r {
            return match self.kind {
                CountKind::CoprimeProduct if g != 1 => 0,
                _ => 1,
            };
        }
        if self.kind == CountKind::Product && depth + 1 == self.r {
            return (self.bound / prefix).min(self.m as u128);
        }
        let mut total = 0;
        for x in 1..=self.m {
            let next = match self.kind {
                CountKind::Lcm => {
                    let xg = gcd((prefix % x as u128) as u64, x) as u128;
                    prefix / xg * x as u128
                }
                _ => prefix.saturating_mul(x as u128),
            };
            if next > self.bound {
                if self.kind == CountKind::Lcm && (x as u128) <= self.bound {
                    continue;
                }
                break;
            }
            total += self.walk(depth + 1, next, gcd(g, x));
        }
        total
    }
}

/// Exact lattice-point count for `query`, enumerating at most
/// [`ENUMERATION_BUDGET`] tuples.
pub fn count(query: &CountQuery) -> Result<u128> {
    count_with_budget(query, ENUMERATION_BUDGET)
}

pub fn count_with_budget(query: &CountQuery, budget: u128) -> Result<u128> {
    let m = query.z.floor() as u64;
    check_budget(m, query.r, budget, "lattice count")?;
    let scale = query.z.powi(query.r as i32);
    let walker = Walker {
        m,
        r: query.r as usize,
        bound: threshold(query.t, scale),
        kind: query.kind,
    };
    Ok(walker.walk(0, 1, 0))
}
