use super::{check_budget, threshold, ENUMERATION_BUDGET};
use crate::arith::{gcd, PrimeTable};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

/// One brute-force pass over `{1..n}^r`: counts of `lcm ≤ ⌊t·n^r⌋` for each
/// requested `t`, and power sums `Σ lcm^q` for `q = 1..=max_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct LcmScan {
    pub r: u32,
    pub n: u64,
    pub ts: Vec<f64>,
    /// `cdf_counts[i]` pairs with `ts[i]`.
    pub cdf_counts: Vec<u128>,
    /// `power_sums[q-1] = Σ lcm^q`.
    pub power_sums: Vec<u128>,
    pub total: u128,
}

impl LcmScan {
    pub fn cdf(&self) -> Vec<f64> {
        self.cdf_counts
            .iter()
            .map(|&c| c as f64 / self.total as f64)
            .collect()
    }

    /// `E(lcm^q)` as an exact rational.
    pub fn moment(&self, q: u32) -> Option<BigRational> {
        let s = *self.power_sums.get(q.checked_sub(1)? as usize)?;
        Some(BigRational::new(BigInt::from(s), BigInt::from(self.total)))
    }
}

#[derive(Clone)]
struct Tally {
    buckets: Vec<u128>,
    sums: Vec<u128>,
    overflow: bool,
}

impl Tally {
    fn new(buckets: usize, max_q: u32) -> Self {
        Tally {
            buckets: vec![0; buckets],
            sums: vec![0; max_q as usize],
            overflow: false,
        }
    }

    #[inline]
    fn add(&mut self, sorted: &[u128], lcm: u128, weight: u128) {
        let idx = sorted.partition_point(|&b| b < lcm);
        self.buckets[idx] += weight;
        let mut p: u128 = 1;
        for s in self.sums.iter_mut() {
            let next = p
                .checked_mul(lcm)
                .and_then(|p2| p2.checked_mul(weight).map(|v| (p2, v)))
                .and_then(|(p2, v)| s.checked_add(v).map(|s2| (p2, s2)));
            match next {
                Some((p2, s2)) => {
                    p = p2;
                    *s = s2;
                }
                None => {
                    self.overflow = true;
                    return;
                }
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.buckets.iter_mut().zip(other.buckets) {
            *a += b;
        }
        for (a, b) in self.sums.iter_mut().zip(other.sums) {
            match a.checked_add(b) {
                Some(v) => *a = v,
                None => self.overflow = true,
            }
        }
        self.overflow |= other.overflow;
        self
    }
}

fn scan_triples(n: u64, sorted: &[u128], max_q: u32) -> Tally {
    (1..=n)
        .into_par_iter()
        .map(|x| {
            let mut tally = Tally::new(sorted.len() + 1, max_q);
            for y in x..=n {
                let lxy = x / gcd(x, y) * y;
                for z in y..=n {
                    let l = (lxy / gcd(lxy % z, z)) as u128 * z as u128;
                    let weight = if x == z {
                        1
                    } else if x == y || y == z {
                        3
                    } else {
                        6
                    };
                    tally.add(sorted, l, weight);
                }
            }
            tally
        })
        .reduce(|| Tally::new(sorted.len() + 1, max_q), Tally::merge)
}

fn scan_general(n: u64, r: u32, sorted: &[u128], max_q: u32) -> Tally {
    fn walk(n: u64, left: u32, prefix: u128, sorted: &[u128], tally: &mut Tally) {
        if left == 0 {
            tally.add(sorted, prefix, 1);
            return;
        }
        for x in 1..=n {
            let g = gcd((prefix % x as u128) as u64, x) as u128;
            walk(n, left - 1, prefix / g * x as u128, sorted, tally);
        }
    }
    (1..=n)
        .into_par_iter()
        .map(|x| {
            let mut tally = Tally::new(sorted.len() + 1, max_q);
            walk(n, r - 1, x as u128, sorted, &mut tally);
            tally
        })
        .reduce(|| Tally::new(sorted.len() + 1, max_q), Tally::merge)
}

/// Brute-force pass over all `n^r` tuples (triples use the sorted loop with
/// multiplicities 6/3/1). Refuses work above [`ENUMERATION_BUDGET`].
pub fn lcm_scan(r: u32, n: u64, ts: &[f64], max_q: u32) -> Result<LcmScan> {
    lcm_scan_with_budget(r, n, ts, max_q, ENUMERATION_BUDGET)
}

pub fn lcm_scan_with_budget(r: u32, n: u64, ts: &[f64], max_q: u32, budget: u128) -> Result<LcmScan> {
    if r < 1 || n < 1 {
        return Err(Error::invalid(format!("lcm scan needs r, n >= 1 (r={r}, n={n})")));
    }
    for &t in ts {
        check_t(t)?;
    }
    let total = check_budget(n, r, budget, "lcm enumeration")?;
    let scale = (n as f64).powi(r as i32);
    let bounds: Vec<u128> = ts.iter().map(|&t| threshold(t, scale)).collect();
    let mut order: Vec<usize> = (0..ts.len()).collect();
    order.sort_by_key(|&i| bounds[i]);
    let sorted: Vec<u128> = order.iter().map(|&i| bounds[i]).collect();
    let tally = if r == 3 {
        scan_triples(n, &sorted, max_q)
    } else {
        scan_general(n, r, &sorted, max_q)
    };
    if tally.overflow {
        return Err(Error::range(format!("power sums of lcm exceed 128 bits (r={r}, n={n}, q<={max_q})")));
    }
    let mut cdf_counts = vec![0u128; ts.len()];
    let mut running = 0u128;
    for (pos, &i) in order.iter().enumerate() {
        running += tally.buckets[pos];
        cdf_counts[i] = running;
    }
    Ok(LcmScan {
        r,
        n,
        ts: ts.to_vec(),
        cdf_counts,
        power_sums: tally.sums,
        total,
    })
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain(format!("t must lie in (0, 1], got {t}")));
    }
    Ok(())
}

/// `#{a, b ≤ m : ab ≤ y}`.
fn hyperbola_count(m: u64, y: u64) -> u64 {
    let top = m.min(y);
    if top == 0 {
        return 0;
    }
    // For a <= y/m every b <= m fits.
    let full = (y / m).min(top);
    let mut total = full * m;
    let mut a = full + 1;
    while a <= top {
        let q = y / a;
        let hi = (y / q).min(top);
        total += q * (hi - a + 1);
        a = hi + 1;
    }
    total
}

/// Pairs in `{1..n}²` with `lcm ≤ bound`, by splitting on `g = gcd` and
/// counting coprime `(a, b)` with `ab ≤ bound/g` through Möbius inversion.
fn pair_lcm_count(n: u64, bound: u64, table: &PrimeTable) -> u128 {
    let mut total: i128 = 0;
    for g in 1..=n.min(bound) {
        let m = n / g;
        let y = bound / g;
        let mut d = 1u64;
        while d <= m && d * d <= y {
            let mu = table.mobius(d as usize);
            if mu != 0 {
                total += mu as i128 * hyperbola_count(m / d, y / (d * d)) as i128;
            }
            d += 1;
        }
    }
    total as u128
}

/// Exact `P(lcm/n^r ≤ t)` on `{1..n}^r`; pairs use the divisor-sum path,
/// larger tuples brute force.
pub fn lcm_exact_cdf(r: u32, n: u64, t: f64) -> Result<f64> {
    Ok(lcm_exact_cdf_grid(r, n, &[t])?[0])
}

/// [`lcm_exact_cdf`] at many thresholds with a single enumeration.
pub fn lcm_exact_cdf_grid(r: u32, n: u64, ts: &[f64]) -> Result<Vec<f64>> {
    if r < 2 || n < 1 {
        return Err(Error::invalid(format!("lcm CDF needs r >= 2, n >= 1 (r={r}, n={n})")));
    }
    if r != 2 {
        return Ok(lcm_scan(r, n, ts, 0)?.cdf());
    }
    for &t in ts {
        check_t(t)?;
    }
    let total = (n as u128) * (n as u128);
    if total > u64::MAX as u128 {
        return Err(Error::range(format!("n = {n} too large for the pair path")));
    }
    let table = PrimeTable::new((n as usize).max(2))?;
    Ok(ts
        .par_iter()
        .map(|&t| {
            let bound = threshold(t, total as f64).min(total) as u64;
            pair_lcm_count(n, bound, &table) as f64 / total as f64
        })
        .collect())
}

/// Plain enumeration, kept as a cross-check for the pair path.
pub fn lcm_exact_cdf_brute(r: u32, n: u64, t: f64) -> Result<f64> {
    Ok(lcm_scan(r, n, &[t], 0)?.cdf()[0])
}

/// `Σ_{x,y ≤ n} lcm(x,y)^q = Σ_g g^q Σ_d μ(d) d^{2q} S_q(⌊n/(gd)⌋)²` with
/// `S_q(m) = Σ_{a ≤ m} a^q`.
fn pair_power_sum(n: u64, q: u32) -> Result<BigInt> {
    let table = PrimeTable::new((n as usize).max(2))?;
    let mut prefix = Vec::with_capacity(n as usize + 1);
    let mut acc = BigInt::from(0u8);
    prefix.push(acc.clone());
    for a in 1..=n {
        acc += BigInt::from(a).pow(q);
        prefix.push(acc.clone());
    }
    let mut total = BigInt::from(0u8);
    for g in 1..=n {
        let m = n / g;
        let mut inner = BigInt::from(0u8);
        for d in 1..=m {
            let mu = table.mobius(d as usize);
            if mu == 0 {
                continue;
            }
            let s = &prefix[(m / d) as usize];
            let term = BigInt::from(d).pow(2 * q) * s * s;
            if mu > 0 {
                inner += term;
            } else {
                inner -= term;
            }
        }
        total += BigInt::from(g).pow(q) * inner;
    }
    Ok(total)
}

/// Exact `E(lcm^q)` on `{1..n}^r` (divide by `n^{rq}` to normalise).
pub fn lcm_exact_moment(r: u32, n: u64, q: u32) -> Result<BigRational> {
    if q == 0 {
        return Err(Error::domain("moment order q must be >= 1"));
    }
    if r == 2 && n >= 1 {
        let total = BigInt::from(n) * BigInt::from(n);
        return Ok(BigRational::new(pair_power_sum(n, q)?, total));
    }
    lcm_exact_moment_brute(r, n, q)
}

pub fn lcm_exact_moment_brute(r: u32, n: u64, q: u32) -> Result<BigRational> {
    if q == 0 {
        return Err(Error::domain("moment order q must be >= 1"));
    }
    let scan = lcm_scan(r, n, &[], q)?;
    Ok(scan.moment(q).expect("q <= max_q"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::lcm_slice;
    use num_traits::{One, ToPrimitive};

    fn naive(r: u32, n: u64, t: f64) -> f64 {
        let bound = threshold(t, (n as f64).powi(r as i32));
        let mut x = vec![1u64; r as usize];
        let (mut hit, mut all) = (0u64, 0u64);
        loop {
            all += 1;
            hit += (lcm_slice(&x).unwrap() <= bound) as u64;
            let mut i = 0;
            loop {
                if i == x.len() {
                    return hit as f64 / all as f64;
                }
                if x[i] < n {
                    x[i] += 1;
                    break;
                }
                x[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn examples() {
        assert_eq!(lcm_exact_cdf(2, 2, 0.5).unwrap(), 1.0);
        assert_eq!(lcm_exact_cdf(3, 7, 1.0).unwrap(), 1.0);
        assert_eq!(lcm_exact_cdf(2, 9, 1.0).unwrap(), 1.0);
        assert_eq!(lcm_exact_moment(2, 2, 1).unwrap(), BigRational::new(7.into(), 4.into()));
        for r in 2..=4 {
            assert!(lcm_exact_moment(r, 1, 2).unwrap().is_one());
        }
    }

    #[test]
    fn hyperbola_counts() {
        for m in 0..30u64 {
            for y in 0..120u64 {
                let direct = (1..=m).map(|a| (1..=m).filter(|b| a * b <= y).count() as u64).sum::<u64>();
                assert_eq!(hyperbola_count(m, y), direct, "m={m} y={y}");
            }
        }
    }

    #[test]
    fn pair_path_matches_brute_force() {
        let ts: Vec<f64> = (1..=20).map(|i| i as f64 / 20.0).chain([0.013, 0.333, 0.7072]).collect();
        for n in [1u64, 2, 3, 10, 37, 120] {
            let fast = lcm_exact_cdf_grid(2, n, &ts).unwrap();
            for (i, &t) in ts.iter().enumerate() {
                assert_eq!(fast[i], lcm_exact_cdf_brute(2, n, t).unwrap(), "n={n} t={t}");
            }
        }
    }

    #[test]
    fn scans_match_naive_enumeration() {
        let ts = [0.01, 0.1, 0.25, 0.5, 0.8, 1.0];
        for (r, n) in [(3u32, 1u64), (3, 2), (3, 13), (3, 24), (4, 9), (2, 31)] {
            let grid = lcm_exact_cdf_grid(r, n, &ts).unwrap();
            for (i, &t) in ts.iter().enumerate() {
                assert_eq!(grid[i], naive(r, n, t), "r={r} n={n} t={t}");
            }
        }
    }

    #[test]
    fn grid_order_does_not_matter() {
        let a = lcm_exact_cdf_grid(3, 20, &[0.9, 0.1, 0.5]).unwrap();
        let b = lcm_exact_cdf_grid(3, 20, &[0.1, 0.5, 0.9]).unwrap();
        assert_eq!(a, vec![b[2], b[0], b[1]]);
    }

    #[test]
    fn moments_agree_between_paths() {
        for n in [1u64, 5, 17, 40] {
            for q in 1..=3 {
                assert_eq!(lcm_exact_moment(2, n, q).unwrap(), lcm_exact_moment_brute(2, n, q).unwrap());
            }
        }
        let m = lcm_exact_moment(3, 12, 2).unwrap();
        let mut direct = 0u128;
        for x in 1..=12u64 {
            for y in 1..=12 {
                for z in 1..=12 {
                    direct += lcm_slice(&[x, y, z]).unwrap().pow(2);
                }
            }
        }
        assert_eq!(m, BigRational::new(direct.into(), 1728.into()));
    }

    #[test]
    fn pair_mean_close_to_limit() {
        let n = 1000u64;
        let m = lcm_exact_moment(2, n, 1).unwrap().to_f64().unwrap() / (n * n) as f64;
        assert!((m - 0.182_690_742).abs() < 0.005);
    }

    #[test]
    fn guards() {
        assert!(matches!(lcm_exact_cdf(3, 1001, 0.5), Err(Error::Resource { .. })));
        assert!(lcm_exact_cdf(3, 10, 0.0).is_err());
        assert!(lcm_exact_cdf(2, 10, 1.5).is_err());
    }
}
