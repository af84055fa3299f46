//! Integer arithmetic substrate: sieves, factorizations, multiplicative
//! functions, Dirichlet convolution and Cesàro summation over gcds.

use crate::error::{Error, Result};

/// Largest `limit` accepted by [`PrimeTable::new`]; `spf` is stored as `u32`.
pub const MAX_TABLE_LIMIT: usize = u32::MAX as usize;

/// Above this size `cesaro_sum` groups `j` into blocks of constant `⌊n/j⌋`.
const BLOCK_THRESHOLD: u64 = 100_000;

/// Output of a linear sieve: primes, smallest prime factors and Möbius values.
///
/// Immutable after construction, so it can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: usize,
    primes: Vec<u32>,
    spf: Vec<u32>,
    mobius: Vec<i8>,
}

impl PrimeTable {
    /// Linear sieve up to and including `limit`, computing `spf` and `μ` in one pass.
    pub fn new(limit: usize) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid(format!("prime table limit must be >= 2, got {limit}")));
        }
        if limit > MAX_TABLE_LIMIT {
            return Err(Error::Resource {
                what: "prime table".into(),
                needed: limit as u128,
                budget: MAX_TABLE_LIMIT as u128,
            });
        }
        let mut spf = vec![0u32; limit + 1];
        let mut mobius = vec![0i8; limit + 1];
        let mut primes = Vec::with_capacity(estimate_prime_count(limit));
        spf[1] = 1;
        mobius[1] = 1;
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mobius[i] = -1;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let ip = i * p as usize;
                if p > si || ip > limit {
                    break;
                }
                spf[ip] = p;
                mobius[ip] = if p == si { 0 } else { -mobius[i] };
            }
        }
        Ok(PrimeTable {
            limit,
            primes,
            spf,
            mobius,
        })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Smallest prime factor of `m`, for `2 <= m <= limit`.
    pub fn spf(&self, m: usize) -> u32 {
        debug_assert!((2..=self.limit).contains(&m));
        self.spf[m]
    }

    pub fn mobius(&self, m: usize) -> i8 {
        debug_assert!((1..=self.limit).contains(&m));
        self.mobius[m]
    }

    /// The whole Möbius array, index 0 unused.
    pub fn mobius_slice(&self) -> &[i8] {
        &self.mobius
    }

    pub fn is_prime(&self, m: usize) -> bool {
        m >= 2 && m <= self.limit && self.spf[m] as usize == m
    }

    /// π(x) for `x <= limit`.
    pub fn prime_count(&self, x: usize) -> usize {
        assert!(x <= self.limit, "prime_count({x}) beyond table limit {}", self.limit);
        self.primes.partition_point(|&p| p as usize <= x)
    }

    /// Number of distinct prime factors of `m <= limit`.
    pub fn omega(&self, m: usize) -> u32 {
        let mut m = m;
        let mut count = 0;
        while m > 1 {
            let p = self.spf[m] as usize;
            while m % p == 0 {
                m /= p;
            }
            count += 1;
        }
        count
    }

    /// Prime factorization of `m` using the smallest-prime-factor array.
    pub fn factorize(&self, m: u64) -> Result<Factorization> {
        if m < 1 || m as u128 > self.limit as u128 {
            return Err(Error::invalid(format!(
                "cannot factorize {m}: outside [1, {}]",
                self.limit
            )));
        }
        let mut rest = m as usize;
        let mut factors = Vec::new();
        while rest > 1 {
            let p = self.spf[rest] as usize;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Ok(Factorization { value: m, factors })
    }
}

fn estimate_prime_count(limit: usize) -> usize {
    let x = limit as f64;
    if x < 17.0 {
        8
    } else {
        (1.26 * x / x.ln()) as usize
    }
}

/// All primes `<= limit`, from an odd-only bit sieve.
///
/// Much lighter than [`PrimeTable`] when only the primes are needed, e.g. for
/// truncated Euler products.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // bit i represents the odd number 2i + 1
    let half = (limit as usize - 1) / 2 + 1;
    let mut composite = vec![0u64; half / 64 + 1];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if composite[i / 64] & (1 << (i % 64)) == 0 {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j < half {
                composite[j / 64] |= 1 << (j % 64);
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = vec![2u64];
    for i in 1..half {
        if composite[i / 64] & (1 << (i % 64)) == 0 {
            primes.push(2 * i as u64 + 1);
        }
    }
    primes
}

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factorization by trial division; fine for `m` up to ~10^12.
    pub fn of(m: u64) -> Result<Self> {
        if m < 1 {
            return Err(Error::invalid("factorization needs m >= 1"));
        }
        let mut rest = m;
        let mut factors = Vec::new();
        let mut p = 2u64;
        while p * p <= rest {
            if rest % p == 0 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if rest > 1 {
            factors.push((rest, 1));
        }
        Ok(Factorization { value: m, factors })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn mobius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

/// Number of distinct primes dividing `m` (0 for `m = 1`).
pub fn omega_distinct(m: u64) -> Result<u32> {
    if m < 1 {
        return Err(Error::invalid("omega_distinct needs m >= 1"));
    }
    Ok(Factorization::of(m)?.omega())
}

/// Von Mangoldt function: `ln p` on prime powers `p^k`, 0 elsewhere.
pub fn von_mangoldt(m: u64) -> Result<f64> {
    if m < 1 {
        return Err(Error::invalid("von_mangoldt needs m >= 1"));
    }
    let f = Factorization::of(m)?;
    Ok(match f.factors() {
        [(p, _)] => (*p as f64).ln(),
        _ => 0.0,
    })
}

/// Möbius function by trial division.
pub fn mobius(m: u64) -> Result<i8> {
    Ok(Factorization::of(m)?.mobius())
}

/// Jordan totient `φ_q(m) = m^q ∏_{p|m} (1 − p^{−q})`, exact.
pub fn jordan_totient(q: u32, m: u64) -> Result<u128> {
    if q < 1 || m < 1 {
        return Err(Error::invalid(format!("jordan_totient needs q, m >= 1 (q={q}, m={m})")));
    }
    let overflow = || Error::range(format!("jordan_totient({q}, {m}) exceeds 128 bits"));
    let mut acc: u128 = 1;
    for &(p, e) in Factorization::of(m)?.factors() {
        let pq = (p as u128).checked_pow(q).ok_or_else(overflow)?;
        let head = pq.checked_pow(e - 1).ok_or_else(overflow)?;
        acc = acc
            .checked_mul(head)
            .and_then(|a| a.checked_mul(pq - 1))
            .ok_or_else(overflow)?;
    }
    Ok(acc)
}

/// `ln n!`, summed directly up to 10⁷ and through `ln Γ` beyond.
pub fn ln_factorial(n: u64) -> f64 {
    if n <= 10_000_000 {
        (2..=n).map(|j| (j as f64).ln()).sum()
    } else {
        statrs::function::gamma::ln_gamma(n as f64 + 1.0)
    }
}

/// Binary gcd.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `lcm(a, b)` with 128-bit intermediates; `None` on overflow.
pub fn lcm_checked(a: u128, b: u128) -> Option<u128> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd_u128(a, b)).checked_mul(b)
}

/// lcm of a slice of positive integers; `None` on 128-bit overflow.
pub fn lcm_slice(xs: &[u64]) -> Option<u128> {
    xs.iter()
        .try_fold(1u128, |acc, &x| lcm_checked(acc, x as u128))
}

pub fn gcd_slice(xs: &[u64]) -> u64 {
    xs.iter().fold(0, |acc, &x| gcd(acc, x))
}

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= n) {
        x += 1;
    }
    x
}

/// Arithmetic functions used throughout: `f: Z+ → R`, some exactly integer valued.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithFn {
    /// `δ₁(m)`: 1 at `m = 1`, 0 elsewhere. Identity for Dirichlet convolution.
    Delta1,
    /// `I_q(m) = m^q`; `Power(0)` is the constant 1.
    Power(u32),
    /// `D_r(m) = m^r − (m−1)^r`, whose summatory function is `m^r`.
    DiffPower(u32),
    /// Jordan totient `φ_q = μ * I_q`.
    Jordan(u32),
    Mobius,
    VonMangoldt,
    /// Natural logarithm.
    Ln,
}

impl ArithFn {
    pub fn is_integer_valued(self) -> bool {
        !matches!(self, ArithFn::Ln | ArithFn::VonMangoldt)
    }

    /// Largest argument for which [`ArithFn::eval_exact`] cannot overflow `i128`.
    pub fn limit(self) -> u64 {
        let root = |q: u32| -> u64 {
            if q == 0 {
                return u64::MAX;
            }
            let r = (i128::MAX as f64).powf(1.0 / q as f64).floor();
            if r >= u64::MAX as f64 {
                u64::MAX
            } else {
                r as u64
            }
        };
        match self {
            ArithFn::Power(q) | ArithFn::DiffPower(q) | ArithFn::Jordan(q) => root(q),
            _ => u64::MAX,
        }
    }

    /// Exact integer value; `Ok(None)` when the function is not integer valued.
    pub fn eval_exact(self, m: u64) -> Result<Option<i128>> {
        if m < 1 {
            return Err(Error::invalid("arithmetic functions are defined on m >= 1"));
        }
        let overflow = || Error::range(format!("{self:?}({m}) exceeds 128 bits"));
        let v = match self {
            ArithFn::Delta1 => i128::from(m == 1),
            ArithFn::Power(q) => (m as i128).checked_pow(q).ok_or_else(overflow)?,
            ArithFn::DiffPower(r) => {
                let a = (m as i128).checked_pow(r).ok_or_else(overflow)?;
                let b = (m as i128 - 1).checked_pow(r).ok_or_else(overflow)?;
                a - b
            }
            ArithFn::Jordan(q) => {
                i128::try_from(jordan_totient(q, m)?).map_err(|_| overflow())?
            }
            ArithFn::Mobius => i128::from(mobius(m)?),
            ArithFn::VonMangoldt | ArithFn::Ln => return Ok(None),
        };
        Ok(Some(v))
    }

    pub fn eval(self, m: u64) -> Result<f64> {
        match self {
            ArithFn::Ln => Ok((m as f64).ln()),
            ArithFn::VonMangoldt => von_mangoldt(m),
            ArithFn::Power(q) => Ok((m as f64).powi(q as i32)),
            _ => Ok(self.eval_exact(m)?.expect("integer valued") as f64),
        }
    }
}

/// Summatory function of a Dirichlet convolution:
/// `Σ_{j ≤ x} α(j) · Acc(β)(x / j)`, where `beta_summatory` is `Acc(β)`.
pub fn dirichlet_summatory<F>(alpha: ArithFn, beta_summatory: F, x: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(x >= 1.0) {
        return Err(Error::invalid(format!("dirichlet_summatory needs x >= 1, got {x}")));
    }
    let top = x.floor() as u64;
    let values = tabulate_float(alpha, top)?;
    let mut acc = 0.0;
    for (j, a) in values.iter().enumerate().skip(1) {
        if *a != 0.0 {
            acc += a * beta_summatory(x / j as f64);
        }
    }
    Ok(acc)
}

/// Result of a Cesàro sum: exact when `f` is integer valued.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CesaroSum {
    Exact(i128),
    Approx(f64),
}

impl CesaroSum {
    pub fn as_f64(self) -> f64 {
        match self {
            CesaroSum::Exact(v) => v as f64,
            CesaroSum::Approx(v) => v,
        }
    }
}

/// `Σ_{x ∈ [1,n]^r} f(gcd(x))`, evaluated as `Σ_{j ≤ n} (μ * f)(j) ⌊n/j⌋^r`.
///
/// For `r = 1` the convention `gcd(j) = j` applies. Work is `O(n log n)`.
pub fn cesaro_sum(f: ArithFn, n: u64, r: u32) -> Result<CesaroSum> {
    if n < 1 || r < 1 {
        return Err(Error::invalid(format!("cesaro_sum needs n, r >= 1 (n={n}, r={r})")));
    }
    let table = PrimeTable::new((n as usize).max(2))?;
    cesaro_sum_with(f, n, r, &table)
}

/// [`cesaro_sum`] reusing an existing table with `limit >= n`.
pub fn cesaro_sum_with(f: ArithFn, n: u64, r: u32, table: &PrimeTable) -> Result<CesaroSum> {
    if table.limit() < n as usize {
        return Err(Error::invalid("prime table too small for cesaro_sum"));
    }
    if f.is_integer_valued() {
        let g = mobius_convolve_exact(f, n, table)?;
        cesaro_weights_exact(&g, n, r).map(CesaroSum::Exact)
    } else {
        let g = mobius_convolve_float(f, n, table)?;
        Ok(CesaroSum::Approx(cesaro_weights_float(&g, n, r)))
    }
}

/// `(μ * f)(j)` for `1 <= j <= n`, by enumerating every divisor pair `d·k = j`.
pub fn mobius_convolve_exact(f: ArithFn, n: u64, table: &PrimeTable) -> Result<Vec<i128>> {
    let n = n as usize;
    let fvals: Vec<i128> = (0..=n)
        .map(|k| {
            if k == 0 {
                Ok(0)
            } else {
                f.eval_exact(k as u64).map(|v| v.expect("integer valued"))
            }
        })
        .collect::<Result<_>>()?;
    let mut g = vec![0i128; n + 1];
    for d in 1..=n {
        let mu = table.mobius(d) as i128;
        if mu == 0 {
            continue;
        }
        for (k, fk) in fvals.iter().enumerate().take(n / d + 1).skip(1) {
            let slot = &mut g[d * k];
            *slot = slot
                .checked_add(mu * fk)
                .ok_or_else(|| Error::range("(μ*f) exceeds 128 bits"))?;
        }
    }
    Ok(g)
}

pub fn mobius_convolve_float(f: ArithFn, n: u64, table: &PrimeTable) -> Result<Vec<f64>> {
    let n = n as usize;
    let fvals = tabulate_float_with(f, n as u64, table)?;
    let mut g = vec![0.0f64; n + 1];
    for d in 1..=n {
        let mu = table.mobius(d) as f64;
        if mu == 0.0 {
            continue;
        }
        for (k, fk) in fvals.iter().enumerate().take(n / d + 1).skip(1) {
            g[d * k] += mu * fk;
        }
    }
    Ok(g)
}

fn tabulate_float(f: ArithFn, n: u64) -> Result<Vec<f64>> {
    match f {
        ArithFn::Mobius | ArithFn::VonMangoldt | ArithFn::Jordan(_) if n >= 2 => {
            let table = PrimeTable::new(n as usize)?;
            tabulate_float_with(f, n, &table)
        }
        _ => (0..=n)
            .map(|m| if m == 0 { Ok(0.0) } else { f.eval(m) })
            .collect(),
    }
}

fn tabulate_float_with(f: ArithFn, n: u64, table: &PrimeTable) -> Result<Vec<f64>> {
    let n = n as usize;
    let mut out = vec![0.0; n + 1];
    for (m, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = match f {
            ArithFn::Mobius => table.mobius(m) as f64,
            ArithFn::VonMangoldt => {
                if m == 1 {
                    0.0
                } else {
                    let p = table.spf(m) as usize;
                    let mut rest = m;
                    while rest % p == 0 {
                        rest /= p;
                    }
                    if rest == 1 {
                        (p as f64).ln()
                    } else {
                        0.0
                    }
                }
            }
            _ => f.eval(m as u64)?,
        };
    }
    Ok(out)
}

fn cesaro_weights_exact(g: &[i128], n: u64, r: u32) -> Result<i128> {
    let overflow = || Error::range(format!("Cesàro sum at n={n}, r={r} exceeds 128 bits"));
    let term = |sum_g: i128, q: u64| -> Result<i128> {
        let w = (q as i128).checked_pow(r).ok_or_else(overflow)?;
        sum_g.checked_mul(w).ok_or_else(overflow)
    };
    let mut acc: i128 = 0;
    if n <= BLOCK_THRESHOLD {
        for j in 1..=n {
            acc = acc.checked_add(term(g[j as usize], n / j)?).ok_or_else(overflow)?;
        }
    } else {
        let mut prefix = vec![0i128; g.len()];
        for j in 1..g.len() {
            prefix[j] = prefix[j - 1].checked_add(g[j]).ok_or_else(overflow)?;
        }
        let mut j = 1u64;
        while j <= n {
            let q = n / j;
            let last = n / q;
            let block = prefix[last as usize] - prefix[j as usize - 1];
            acc = acc.checked_add(term(block, q)?).ok_or_else(overflow)?;
            j = last + 1;
        }
    }
    Ok(acc)
}

fn cesaro_weights_float(g: &[f64], n: u64, r: u32) -> f64 {
    let mut acc = 0.0;
    let mut j = 1u64;
    if n <= BLOCK_THRESHOLD {
        for j in 1..=n {
            acc += g[j as usize] * ((n / j) as f64).powi(r as i32);
        }
        return acc;
    }
    let mut prefix = vec![0.0f64; g.len()];
    for k in 1..g.len() {
        prefix[k] = prefix[k - 1] + g[k];
    }
    while j <= n {
        let q = n / j;
        let last = n / q;
        acc += (prefix[last as usize] - prefix[j as usize - 1]) * (q as f64).powi(r as i32);
        j = last + 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_is_prime(m: u64) -> bool {
        m >= 2 && (2..m).take_while(|d| d * d <= m).all(|d| m % d != 0)
    }

    #[test]
    fn small_tables() {
        let t = PrimeTable::new(10).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
        assert_eq!(t.prime_count(10), 4);
        assert_eq!(PrimeTable::new(2).unwrap().primes(), &[2]);
        assert_eq!(PrimeTable::new(30).unwrap().mobius(30), -1);
        assert!(matches!(PrimeTable::new(1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn table_invariants_against_trial_division() {
        let t = PrimeTable::new(5000).unwrap();
        let expected: Vec<u32> = (2..=5000u64).filter(|&m| trial_is_prime(m)).map(|m| m as u32).collect();
        assert_eq!(t.primes(), expected.as_slice());
        for m in 2..=5000usize {
            let p = t.spf(m) as usize;
            assert_eq!(m % p, 0);
            assert!(trial_is_prime(p as u64));
            let square_free = (2..=m).take_while(|d| d * d <= m).all(|d| m % (d * d) != 0);
            assert_eq!(t.mobius(m) == 0, !square_free, "m={m}");
        }
        assert_eq!(t.mobius(1), 1);
    }

    #[test]
    fn bit_sieve_matches_linear_sieve() {
        let t = PrimeTable::new(100_000).unwrap();
        let fast = primes_up_to(100_000);
        assert_eq!(fast.len(), t.primes().len());
        assert!(fast.iter().zip(t.primes()).all(|(a, b)| *a == *b as u64));
        assert_eq!(primes_up_to(2), vec![2]);
        assert_eq!(primes_up_to(3), vec![2, 3]);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn factorizations() {
        let t = PrimeTable::new(3000).unwrap();
        assert_eq!(t.factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert!(t.factorize(1).unwrap().factors().is_empty());
        assert_eq!(
            t.factorize(2520).unwrap().factors(),
            &[(2, 3), (3, 2), (5, 1), (7, 1)]
        );
        assert!(t.factorize(0).is_err());
        assert!(t.factorize(3001).is_err());
        for m in 1..=3000u64 {
            let f = t.factorize(m).unwrap();
            assert_eq!(f, Factorization::of(m).unwrap());
            let prod: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, m);
        }
    }

    #[test]
    fn omega_and_mangoldt() {
        assert_eq!(omega_distinct(1).unwrap(), 0);
        assert_eq!(omega_distinct(12).unwrap(), 2);
        assert_eq!(omega_distinct(2310).unwrap(), 5);
        assert!(omega_distinct(0).is_err());
        assert_eq!(von_mangoldt(8).unwrap(), 2f64.ln());
        assert_eq!(von_mangoldt(6).unwrap(), 0.0);
        assert_eq!(von_mangoldt(1).unwrap(), 0.0);
    }

    #[test]
    fn jordan_examples_and_overflow() {
        assert_eq!(jordan_totient(1, 10).unwrap(), 4);
        assert_eq!(jordan_totient(2, 6).unwrap(), 24);
        assert_eq!(jordan_totient(5, 1).unwrap(), 1);
        assert!(matches!(jordan_totient(40, 1_000_003), Err(Error::Range(_))));
    }

    #[test]
    fn jordan_equals_divisor_sum() {
        let t = PrimeTable::new(10_000).unwrap();
        for q in 1..=3u32 {
            for m in 1..=10_000u64 {
                let mut direct: i128 = 0;
                for d in 1..=m {
                    if m % d == 0 {
                        direct += t.mobius(d as usize) as i128 * ((m / d) as i128).pow(q);
                    }
                }
                assert_eq!(jordan_totient(q, m).unwrap() as i128, direct, "q={q} m={m}");
            }
        }
    }

    #[test]
    fn mobius_multiplicative_on_coprime_pairs() {
        let t = PrimeTable::new(10_000).unwrap();
        for a in 1..=100usize {
            for b in 1..=100usize {
                if gcd(a as u64, b as u64) == 1 {
                    assert_eq!(t.mobius(a * b), t.mobius(a) * t.mobius(b));
                }
            }
        }
    }

    #[test]
    fn dirichlet_summatory_examples() {
        let floor = |y: f64| y.floor();
        let v = dirichlet_summatory(ArithFn::Mobius, floor, 10.0).unwrap();
        assert_eq!(v, 1.0);
        // δ₁ is the convolution identity
        let acc = |y: f64| y * y;
        assert_eq!(dirichlet_summatory(ArithFn::Delta1, acc, 7.3).unwrap(), acc(7.3));
        // I₀ against δ₁ counts integers <= x
        let delta_acc = |y: f64| if y >= 1.0 { 1.0 } else { 0.0 };
        assert_eq!(dirichlet_summatory(ArithFn::Power(0), delta_acc, 7.5).unwrap(), 7.0);
        assert!(dirichlet_summatory(ArithFn::Mobius, floor, 0.5).is_err());
    }

    #[test]
    fn cesaro_examples() {
        assert_eq!(cesaro_sum(ArithFn::Delta1, 3, 2).unwrap(), CesaroSum::Exact(7));
        assert_eq!(cesaro_sum(ArithFn::Delta1, 10, 2).unwrap(), CesaroSum::Exact(63));
        for r in 1..=4 {
            assert_eq!(cesaro_sum(ArithFn::Power(1), 1, r).unwrap(), CesaroSum::Exact(1));
        }
    }

    #[test]
    fn cesaro_block_path_matches_plain_path() {
        let n = 150_000u64;
        let t = PrimeTable::new(n as usize).unwrap();
        let g = mobius_convolve_exact(ArithFn::Delta1, n, &t).unwrap();
        let mut plain: i128 = 0;
        for j in 1..=n {
            plain += g[j as usize] * ((n / j) as i128).pow(2);
        }
        assert_eq!(cesaro_sum_with(ArithFn::Delta1, n, 2, &t).unwrap(), CesaroSum::Exact(plain));
        let gf = mobius_convolve_float(ArithFn::Ln, n, &t).unwrap();
        let plain_f: f64 = (1..=n).map(|j| gf[j as usize] * ((n / j) as f64).powi(2)).sum();
        let blocked = cesaro_sum_with(ArithFn::Ln, n, 2, &t).unwrap().as_f64();
        assert!((plain_f - blocked).abs() <= 1e-9 * plain_f.abs());
    }

    #[test]
    fn mobius_times_ln_is_von_mangoldt() {
        let t = PrimeTable::new(2000).unwrap();
        let g = mobius_convolve_float(ArithFn::Ln, 2000, &t).unwrap();
        for m in 1..=2000u64 {
            assert!((g[m as usize] - von_mangoldt(m).unwrap()).abs() < 1e-10, "m={m}");
        }
    }

    #[test]
    fn gcd_lcm_helpers() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(0, 5), 5);
        assert_eq!(gcd(17, 0), 17);
        assert_eq!(lcm_slice(&[4, 6, 9]), Some(36));
        assert_eq!(gcd_slice(&[12, 18, 30]), 6);
        assert_eq!(lcm_checked(u128::MAX, 2), None);
        for n in [0u64, 1, 3, 4, 15, 16, 17, 99, 100, 1 << 40, u64::MAX] {
            let s = isqrt(n);
            assert!(s as u128 * s as u128 <= n as u128);
            assert!((s as u128 + 1) * (s as u128 + 1) > n as u128);
        }
    }

    #[test]
    fn arith_fn_limits_hold() {
        for f in [ArithFn::Power(3), ArithFn::DiffPower(4), ArithFn::Power(7)] {
            let lim = f.limit();
            assert!(f.eval_exact(lim).is_ok());
        }
        assert_eq!(ArithFn::DiffPower(3).eval_exact(4).unwrap(), Some(64 - 27));
        assert_eq!(ArithFn::Ln.eval_exact(4).unwrap(), None);
    }
}
