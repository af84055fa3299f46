use super::ENUMERATION_BUDGET;
use crate::arith::{gcd_u128, Factorization};
use crate::error::{Error, Result};

struct Search<'a> {
    caps: &'a [u64],
    anchor_primes: &'a [Vec<u64>],
}

impl Search<'_> {
    // `product` holds the entries chosen so far; a new entry must be coprime to it.
    fn walk(&self, depth: usize, product: u128) -> u128 {
        if depth == self.caps.len() {
            return 1;
        }
        let forbidden = &self.anchor_primes[depth];
        let mut total = 0;
        for x in 1..=self.caps[depth] {
            if forbidden.iter().any(|&p| x % p == 0) || gcd_u128(product, x as u128) != 1 {
                continue;
            }
            total += self.walk(depth + 1, product * x as u128);
        }
        total
    }
}

/// Number of pairwise coprime tuples with `1 ≤ x_i ≤ caps[i]` (default `n`),
/// additionally requiring `gcd(x_i, anchor[i]) = 1` when an anchor is given.
pub fn pairwise_coprime_count(r: u32, n: u64, caps: Option<&[u64]>, anchor: Option<&[u64]>) -> Result<u128> {
    if r < 2 {
        return Err(Error::invalid(format!("pairwise coprimality needs r >= 2, got {r}")));
    }
    let r = r as usize;
    let caps: Vec<u64> = match caps {
        Some(c) if c.len() == r => c.to_vec(),
        Some(c) => return Err(Error::invalid(format!("expected {r} caps, got {}", c.len()))),
        None => vec![n; r],
    };
    let anchor_primes: Vec<Vec<u64>> = match anchor {
        Some(a) if a.len() == r => a
            .iter()
            .map(|&v| Factorization::of(v).map(|f| f.primes().collect()))
            .collect::<Result<_>>()?,
        Some(a) => return Err(Error::invalid(format!("expected {r} anchor entries, got {}", a.len()))),
        None => vec![Vec::new(); r],
    };
    let visits = caps
        .iter()
        .try_fold(1u128, |acc, &c| acc.checked_mul(c as u128))
        .unwrap_or(u128::MAX);
    if visits > ENUMERATION_BUDGET {
        return Err(Error::Resource {
            what: "pairwise coprime enumeration: box size".into(),
            needed: visits,
            budget: ENUMERATION_BUDGET,
        });
    }
    if caps.contains(&0) {
        return Ok(0);
    }
    let search = Search {
        caps: &caps,
        anchor_primes: &anchor_primes,
    };
    Ok(search.walk(0, 1))
}
