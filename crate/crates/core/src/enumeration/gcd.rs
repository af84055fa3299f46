use super::dist::{EmpiricalDist, Provenance};
use crate::arith::{cesaro_sum, von_mangoldt, ArithFn, CesaroSum, PrimeTable};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

fn mertens_prefix(table: &PrimeTable, n: usize) -> Vec<i64> {
    let mut acc = 0i64;
    let mut out = Vec::with_capacity(n + 1);
    out.push(0);
    for j in 1..=n {
        acc += table.mobius(j) as i64;
        out.push(acc);
    }
    out
}

// Σ_{j ≤ m} μ(j)·⌊m/j⌋^r, grouped over blocks of constant quotient.
fn coprime_count_with(m: u64, r: u32, mertens: &[i64]) -> Result<u128> {
    let overflow = || Error::range(format!("coprime count for m={m}, r={r} exceeds 128 bits"));
    let mut acc: i128 = 0;
    let mut j = 1u64;
    while j <= m {
        let q = m / j;
        let hi = m / q;
        let weight = (mertens[hi as usize] - mertens[j as usize - 1]) as i128;
        if weight != 0 {
            let pow = (q as i128).checked_pow(r).ok_or_else(overflow)?;
            acc = pow
                .checked_mul(weight)
                .and_then(|v| acc.checked_add(v))
                .ok_or_else(overflow)?;
        }
        j = hi + 1;
    }
    u128::try_from(acc).map_err(|_| overflow())
}

/// Number of r-tuples in `{1..m}^r` with gcd 1.
pub fn coprime_tuple_count(r: u32, m: u64) -> Result<u128> {
    if r == 0 {
        return Err(Error::invalid("r must be >= 1"));
    }
    if m == 0 {
        return Ok(0);
    }
    let table = PrimeTable::new((m as usize).max(2))?;
    coprime_count_with(m, r, &mertens_prefix(&table, m as usize))
}

/// Exact law of `gcd(X₁,…,X_r)` on `{1..n}^r`: the tuples with gcd `k` are
/// `k` times the coprime tuples of `{1..⌊n/k⌋}^r`.
pub fn gcd_exact_distribution(r: u32, n: u64) -> Result<EmpiricalDist> {
    if r < 2 || n < 1 {
        return Err(Error::invalid(format!("gcd distribution needs r >= 2, n >= 1 (r={r}, n={n})")));
    }
    (n as u128)
        .checked_pow(r)
        .filter(|&v| v < u128::MAX / 4)
        .ok_or_else(|| Error::range(format!("n^r exceeds 128 bits (n={n}, r={r})")))?;
    let table = PrimeTable::new((n as usize).max(2))?;
    let mertens = mertens_prefix(&table, n as usize);
    let mut pairs = Vec::with_capacity(n as usize);
    let mut k = 1u64;
    while k <= n {
        let m = n / k;
        let hi = n / m;
        let c = coprime_count_with(m, r, &mertens)?;
        pairs.extend((k..=hi).map(|kk| (kk as u128, c)));
        k = hi + 1;
    }
    let dist = EmpiricalDist::from_counts(pairs, n, r, Provenance::Exact)?;
    debug_assert_eq!(Some(dist.total()), (n as u128).checked_pow(r));
    Ok(dist)
}

/// `E(gcd^q)` on `{1..n}^r` as an exact rational.
pub fn gcd_exact_moment(r: u32, n: u64, q: u32) -> Result<BigRational> {
    let total = match cesaro_sum(ArithFn::Power(q), n, r)? {
        CesaroSum::Exact(v) => v,
        CesaroSum::Approx(_) => unreachable!("powers are integer valued"),
    };
    let denom = (n as u128)
        .checked_pow(r)
        .ok_or_else(|| Error::range(format!("n^r exceeds 128 bits (n={n}, r={r})")))?;
    Ok(BigRational::new(BigInt::from(total), BigInt::from(denom)))
}

/// Exact `E(ln lcm(X₁,…,X_r))` on `{1..n}^r`.
///
/// Inclusion–exclusion over sub-tuple gcds, with `μ * ln = Λ`, collapses to
/// `Σ_{j ≤ n} Λ(j)·(1 − (1 − ⌊n/j⌋/n)^r)`.
pub fn log_lcm_exact_mean(r: u32, n: u64) -> Result<f64> {
    if r < 1 || n < 1 {
        return Err(Error::invalid(format!("log-lcm mean needs r, n >= 1 (r={r}, n={n})")));
    }
    let nf = n as f64;
    let mut acc = 0.0;
    for j in (2..=n).rev() {
        let lam = von_mangoldt(j)?;
        if lam == 0.0 {
            continue;
        }
        let a = (n / j) as f64 / nf;
        acc += lam * -(r as f64 * (-a).ln_1p()).exp_m1();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gcd_slice, lcm_slice};
    use num_traits::{One, ToPrimitive};

    fn brute_gcd_counts(r: u32, n: u64) -> Vec<u128> {
        let mut counts = vec![0u128; n as usize + 1];
        let mut x = vec![1u64; r as usize];
        loop {
            counts[gcd_slice(&x) as usize] += 1;
            let mut i = 0;
            loop {
                if i == x.len() {
                    return counts;
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
        let d = gcd_exact_distribution(2, 10).unwrap();
        assert_eq!(d.mass_exact(1), BigRational::new(63.into(), 100.into()));
        let d = gcd_exact_distribution(2, 1).unwrap();
        assert_eq!(d.mass(1), 1.0);
        assert_eq!(coprime_tuple_count(2, 10).unwrap(), 63);
        assert_eq!(coprime_tuple_count(2, 3).unwrap(), 7);
    }

    #[test]
    fn matches_brute_force() {
        for r in [2, 3] {
            let top = if r == 2 { 100 } else { 40 };
            for n in 1..=top {
                let d = gcd_exact_distribution(r, n).unwrap();
                let b = brute_gcd_counts(r, n);
                for k in 1..=n {
                    let got = d.support().binary_search(&(k as u128)).map(|i| d.counts()[i]).unwrap_or(0);
                    assert_eq!(got, b[k as usize], "r={r} n={n} k={k}");
                }
                assert!(d.exact_mass_sum().is_one());
            }
        }
    }

    #[test]
    fn moment_matches_distribution() {
        let d = gcd_exact_distribution(3, 150).unwrap();
        for q in 1..=3 {
            let m = gcd_exact_moment(3, 150, q).unwrap().to_f64().unwrap();
            assert!((m - d.moment(q as i32)).abs() < 1e-9 * m);
        }
    }

    #[test]
    fn log_lcm_against_brute_force() {
        for (r, n) in [(1, 30), (2, 40), (3, 17)] {
            let mut acc = 0.0;
            let mut cnt = 0u64;
            let mut x = vec![1u64; r as usize];
            'outer: loop {
                acc += (lcm_slice(&x).unwrap() as f64).ln();
                cnt += 1;
                let mut i = 0;
                loop {
                    if i == x.len() {
                        break 'outer;
                    }
                    if x[i] < n {
                        x[i] += 1;
                        break;
                    }
                    x[i] = 1;
                    i += 1;
                }
            }
            let exact = log_lcm_exact_mean(r, n).unwrap();
            assert!((exact - acc / cnt as f64).abs() < 1e-10, "r={r} n={n}");
        }
    }
}
