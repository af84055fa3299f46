//! Euler products: the pairwise-coprimality constant `T_r`, the weighted
//! series `J(s)` and the multiplicative weights behind the triple law.

use super::zeta::{prime_zeta, zeta};
use super::Tolerance;
use crate::arith::{primes_up_to, Factorization, PrimeTable};
use crate::error::{Error, Result};

// Largest prime cut-off an Euler product may use before giving up.
const MAX_PRIME_CUTOFF: u64 = 100_000_000;

/// Coefficient of `u^k` in `ln((1−u)^{r−1}(1+(r−1)u))`; zero for `k = 1`.
fn log_factor_coeff(r: u32, k: u32) -> f64 {
    let a = (r - 1) as f64;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    (sign * a.powi(k as i32) - a) / k as f64
}

/// `T_r = ∏_p (1−1/p)^{r−1}(1+(r−1)/p)`, the density of pairwise coprime
/// r-tuples, within `tol` absolutely.
///
/// Primes up to a cut-off `P` are multiplied directly. Beyond `P` the
/// logarithm of each factor is expanded in powers of `1/p` and summed with
/// prime-zeta tails `Σ_{p>P} p^{−k}`.
pub fn coprimality_constant(r: u32, tol: Tolerance) -> Result<f64> {
    if r < 2 {
        return Err(Error::domain(format!("coprimality constant needs r >= 2, got {r}")));
    }
    let eps = tol.eps();
    let a = (r - 1) as f64;
    let mut cutoff = (16.0 * a).max(1000.0) as u64;
    loop {
        if cutoff > MAX_PRIME_CUTOFF {
            return Err(Error::Resource {
                what: format!("prime cut-off for T_{r}"),
                needed: cutoff as u128,
                budget: MAX_PRIME_CUTOFF as u128,
            });
        }
        let p_f = cutoff as f64;
        // Smallest K whose omitted terms are negligible; the ratio (r−1)/P <= 1/16
        // makes the remainder at most twice the first omitted term.
        let omitted = |k: u32| {
            let kf = k as f64;
            2.0 * (a.powi(k as i32) + a) * p_f.powf(1.0 - kf) / (kf * (kf - 1.0))
        };
        let mut k_max = 2;
        while omitted(k_max + 1) > eps / 8.0 {
            k_max += 1;
        }
        // Each tail Σ_{p>P} p^{-k} is a difference of two O(2^{-k}) numbers.
        let cancellation: f64 = (2..=k_max)
            .map(|k| log_factor_coeff(r, k).abs() * 1e-15 * 2f64.powi(-(k as i32)))
            .sum();
        if cancellation > eps / 8.0 {
            cutoff *= 4;
            continue;
        }

        let primes = primes_up_to(cutoff);
        let head: f64 = primes
            .iter()
            .rev()
            .map(|&p| {
                let u = 1.0 / p as f64;
                a * (-u).ln_1p() + (a * u).ln_1p()
            })
            .sum();
        let inner = tol.scaled(1e-3);
        let mut tail = 0.0;
        for k in 2..=k_max {
            let below: f64 = primes.iter().rev().map(|&p| (p as f64).powi(-(k as i32))).sum();
            let above = (prime_zeta(k as f64, inner)? - below).max(0.0);
            tail += log_factor_coeff(r, k) * above;
        }
        log::debug!("T_{r}: cut-off {cutoff}, {k_max} tail orders");
        return Ok((head + tail).exp());
    }
}

/// `J(s) = Σ_m Υ₃(m) 3^{ω(m)} m^{−s} = ∏_p (1 + 3(p+1)/((p+2)(p^s−1)))`.
///
/// Evaluated as `ζ(s)³ ∏_p (1−x)²(1 + x(2+1/p)/(1+2/p))` with `x = p^{−s}`;
/// the corrected factors satisfy `|ln c_p| ≤ 3p^{−s−1} + 4p^{−2s}`, which
/// fixes the prime cut-off.
pub fn j_series(s: f64, tol: Tolerance) -> Result<f64> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::domain(format!("J(s) needs s > 1, got {s}")));
    }
    let eps = tol.eps();
    let z = zeta(s, tol.scaled(1e-3))?;
    let cube = z * z * z;
    // J <= ζ(s)^3, so a log error δ costs at most ζ(s)^3·δ.
    let delta = eps / (4.0 * cube);
    let p1 = (6.0 / (s * delta)).powf(1.0 / s);
    let p2 = (8.0 / ((2.0 * s - 1.0) * delta)).powf(1.0 / (2.0 * s - 1.0));
    let cutoff = p1.max(p2).max(100.0).ceil();
    if cutoff > MAX_PRIME_CUTOFF as f64 {
        return Err(Error::Resource {
            what: format!("prime cut-off for J({s})"),
            needed: cutoff as u128,
            budget: MAX_PRIME_CUTOFF as u128,
        });
    }
    let log_product: f64 = primes_up_to(cutoff as u64)
        .iter()
        .rev()
        .map(|&p| {
            let pf = p as f64;
            let u = 1.0 / pf;
            let x = pf.powf(-s);
            2.0 * (-x).ln_1p() + (x * (2.0 + u) / (1.0 + 2.0 * u)).ln_1p()
        })
        .sum();
    Ok(cube * log_product.exp())
}

/// `Υ_r(m) = ∏_{p|m} (1+(r−2)/p)/(1+(r−1)/p)`.
pub fn upsilon(r: u32, m: u64) -> Result<f64> {
    if r < 2 {
        return Err(Error::domain(format!("upsilon needs r >= 2, got {r}")));
    }
    let f = Factorization::of(m)?;
    Ok(f.primes()
        .map(|p| {
            let p = p as f64;
            (1.0 + (r as f64 - 2.0) / p) / (1.0 + (r as f64 - 1.0) / p)
        })
        .product())
}

/// Table of `Υ₃(m)·3^{ω(m)} = ∏_{p|m} 3(p+1)/(p+2)` for `m ≤ limit`
/// (index 0 unused).
pub fn prime_factor_weights(limit: usize) -> Result<Vec<f64>> {
    let table = PrimeTable::new(limit.max(2))?;
    let mut w = vec![0.0; limit + 1];
    if limit >= 1 {
        w[1] = 1.0;
    }
    for m in 2..=limit {
        let p = table.spf(m) as usize;
        let k = m / p;
        w[m] = if k % p == 0 {
            w[k]
        } else {
            let pf = p as f64;
            w[k] * 3.0 * (pf + 1.0) / (pf + 2.0)
        };
    }
    Ok(w)
}
