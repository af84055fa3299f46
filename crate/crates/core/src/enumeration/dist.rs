use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Where a distribution came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

/// A finitely supported distribution stored as integer counts over a total,
/// so masses are exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDist {
    support: Vec<u128>,
    counts: Vec<u128>,
    total: u128,
    n: u64,
    r: u32,
    provenance: Provenance,
}

impl EmpiricalDist {
    /// Aggregates `(value, count)` pairs; zero counts are dropped and the
    /// total is the sum of the counts.
    pub fn from_counts<I>(pairs: I, n: u64, r: u32, provenance: Provenance) -> Result<Self>
    where
        I: IntoIterator<Item = (u128, u128)>,
    {
        let mut map = BTreeMap::new();
        let mut total: u128 = 0;
        for (value, count) in pairs {
            if count == 0 {
                continue;
            }
            total = total.checked_add(count).ok_or_else(|| Error::range("distribution total exceeds 128 bits"))?;
            *map.entry(value).or_insert(0u128) += count;
        }
        if total == 0 {
            return Err(Error::invalid("empty distribution"));
        }
        let (support, counts) = map.into_iter().unzip();
        Ok(EmpiricalDist {
            support,
            counts,
            total,
            n,
            r,
            provenance,
        })
    }

    pub fn support(&self) -> &[u128] {
        &self.support
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn masses(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.total as f64).collect()
    }

    fn count_of(&self, value: u128) -> u128 {
        self.support
            .binary_search(&value)
            .map(|i| self.counts[i])
            .unwrap_or(0)
    }

    pub fn mass(&self, value: u128) -> f64 {
        self.count_of(value) as f64 / self.total as f64
    }

    pub fn mass_exact(&self, value: u128) -> BigRational {
        BigRational::new(BigInt::from(self.count_of(value)), BigInt::from(self.total))
    }

    /// Sum of all masses as a rational; 1 by construction.
    pub fn exact_mass_sum(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for &c in &self.counts {
            acc += BigRational::new(BigInt::from(c), BigInt::from(self.total));
        }
        acc
    }

    /// `P(X ≤ x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        let below: u128 = self
            .support
            .iter()
            .zip(&self.counts)
            .take_while(|(v, _)| (**v as f64) <= x)
            .map(|(_, c)| c)
            .sum();
        below as f64 / self.total as f64
    }

    pub fn moment(&self, q: i32) -> f64 {
        self.support
            .iter()
            .zip(&self.counts)
            .map(|(&v, &c)| (v as f64).powi(q) * c as f64)
            .sum::<f64>()
            / self.total as f64
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn aggregation_and_masses() {
        let d = EmpiricalDist::from_counts([(3, 1), (1, 2), (3, 1), (2, 0)], 3, 1, Provenance::Exact).unwrap();
        assert_eq!(d.support(), &[1, 3]);
        assert_eq!(d.counts(), &[2, 2]);
        assert_eq!(d.total(), 4);
        assert_eq!(d.mass(1), 0.5);
        assert_eq!(d.mass(2), 0.0);
        assert!(d.exact_mass_sum().is_one());
        assert_eq!(d.cdf(2.5), 0.5);
        assert_eq!(d.mean(), 2.0);
    }

    #[test]
    fn rejects_empty() {
        assert!(EmpiricalDist::from_counts([(1, 0)], 1, 1, Provenance::Exact).is_err());
    }
}
