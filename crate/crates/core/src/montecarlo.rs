//! Seeded sampling of r-tuples and of the running gcd/lcm processes.
//!
//! Work is split over `workers` independent ChaCha8 streams: worker `i` uses
//! the generator seeded from `seed` with stream number `i`, and draws
//! `⌊samples/workers⌋` (plus one for the first `samples mod workers`)
//! samples. Partial results are merged in worker order, so the output depends
//! on `(seed, workers)` only.

use crate::arith::{gcd, gcd_u128, ln_factorial};
use crate::enumeration::{EmpiricalDist, Provenance};
use crate::error::{Error, Result};
use crate::waiting::CouponStructure;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Identifier of the generator and seeding scheme, for output metadata.
pub const RNG_ALGORITHM: &str = "chacha8-stream";

/// Maximum number of draws in one gcd hitting-time trial.
pub const GCD_WAIT_DRAW_CAP: u64 = 100_000;

/// Largest `m` for which tail frequencies `P(T_n > m)` are reported.
pub const GCD_WAIT_TAIL_MAX: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub n: u64,
    pub r: u32,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SamplerConfig {
    pub fn new(n: u64, r: u32, samples: u64, seed: u64) -> Result<Self> {
        let c = SamplerConfig {
            n,
            r,
            samples,
            seed,
            workers: 1,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_workers(mut self, workers: usize) -> Result<Self> {
        self.workers = workers;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 1 || self.r < 1 || self.samples < 1 {
            return Err(Error::invalid(format!(
                "sampler needs n, r, samples >= 1 (got n={}, r={}, samples={})",
                self.n, self.r, self.samples
            )));
        }
        if self.workers < 1 {
            return Err(Error::invalid("worker count must be >= 1"));
        }
        Ok(())
    }
}

/// Sample mean with its standard error `s/√N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl Estimate {
    /// Whether `target` lies within `k` standard errors.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.stderr
    }
}

/// Welford accumulator, mergeable with Chan's pairwise update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Accumulator {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Accumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        self.mean += d * other.count as f64 / n;
        self.m2 += other.m2 + d * d * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn estimate(&self) -> Estimate {
        let stderr = if self.count > 1 {
            (self.m2.max(0.0) / (self.count - 1) as f64 / self.count as f64).sqrt()
        } else {
            0.0
        };
        Estimate {
            value: self.mean,
            stderr,
            samples: self.count,
        }
    }
}

fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

fn shares(total: u64, workers: usize) -> Vec<u64> {
    let w = workers as u64;
    (0..w).map(|i| total / w + u64::from(i < total % w)).collect()
}

/// Runs `job(rng, share)` on every worker and returns the results in worker
/// order.
fn run_workers<T, F>(total: u64, seed: u64, workers: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    shares(total, workers)
        .into_par_iter()
        .enumerate()
        .map(|(i, share)| job(&mut worker_rng(seed, i), share))
        .collect()
}

/// Quantity computed from each sampled tuple `(x₁, …, x_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampledStatistic {
    Gcd,
    /// `lcm(x)/n^r`.
    LcmScaled,
    /// `lcm(x)/(x₁⋯x_r)`.
    LcmOverProduct,
    /// `ln lcm(x) − (r/n) Σ_{j≤n} ln j`.
    LogLcmCentered,
}

/// What is averaged over the samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional {
    /// `X^q`.
    Power(f64),
    /// `1{X ≤ t}`.
    AtMost(f64),
    /// `1{X = v}`.
    Equals(f64),
}

impl Functional {
    fn apply(self, x: f64) -> f64 {
        match self {
            Functional::Power(1.0) => x,
            Functional::Power(q) => x.powf(q),
            Functional::AtMost(t) => f64::from(u8::from(x <= t)),
            Functional::Equals(v) => f64::from(u8::from(x == v)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub estimate: Estimate,
    /// Histogram of the raw integer gcd or lcm, when requested.
    pub dist: Option<EmpiricalDist>,
}

enum Lcm {
    Small(u128),
    Big(BigUint),
}

impl Lcm {
    fn push(&mut self, x: u64) {
        match self {
            Lcm::Small(l) => {
                let g = gcd_u128(*l, x as u128);
                match (*l / g).checked_mul(x as u128) {
                    Some(v) => *l = v,
                    None => *self = Lcm::Big(BigUint::from(*l / g) * x),
                }
            }
            Lcm::Big(l) => {
                let rem = (&*l % x).to_u64().unwrap_or(0);
                let g = gcd(rem, x);
                *l = &*l / g * x;
            }
        }
    }

    fn ln(&self) -> f64 {
        match self {
            Lcm::Small(l) => (*l as f64).ln(),
            Lcm::Big(l) => {
                let shift = l.bits().saturating_sub(64);
                let top = (l >> shift).to_u64().unwrap_or(u64::MAX);
                (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
            }
        }
    }
}

/// Monte Carlo mean of `functional(statistic)` over uniform r-tuples from
/// `{1..n}`, optionally with the histogram of the underlying gcd or lcm.
pub fn sample_statistic(
    config: &SamplerConfig,
    statistic: SampledStatistic,
    functional: Functional,
    keep_dist: bool,
) -> Result<Sample> {
    config.validate()?;
    let n = config.n;
    let r = config.r as usize;
    let nf = n as f64;
    let ln_scale = r as f64 * nf.ln();
    let ln_center = r as f64 / nf * ln_factorial(n);
    let uniform = Uniform::new_inclusive(1, n).map_err(|e| Error::invalid(e.to_string()))?;

    let parts = run_workers(config.samples, config.seed, config.workers, |rng, share| -> Result<_> {
        let mut acc = Accumulator::default();
        let mut hist: BTreeMap<u128, u128> = BTreeMap::new();
        let mut xs = vec![0u64; r];
        for _ in 0..share {
            for x in xs.iter_mut() {
                *x = uniform.sample(rng);
            }
            let (raw, value) = match statistic {
                SampledStatistic::Gcd => {
                    let g = xs.iter().fold(0, |a, &x| gcd(a, x));
                    (Some(g as u128), g as f64)
                }
                _ => {
                    let mut l = Lcm::Small(1);
                    for &x in &xs {
                        l.push(x);
                    }
                    let raw = match l {
                        Lcm::Small(v) => Some(v),
                        Lcm::Big(_) => None,
                    };
                    let value = match (statistic, &l) {
                        (SampledStatistic::LcmScaled, Lcm::Small(v)) if r as f64 * nf.log2() < 1000.0 => {
                            *v as f64 / nf.powi(r as i32)
                        }
                        (SampledStatistic::LcmScaled, _) => (l.ln() - ln_scale).exp(),
                        (SampledStatistic::LcmOverProduct, Lcm::Small(v)) => {
                            match xs.iter().try_fold(1u128, |a, &x| a.checked_mul(x as u128)) {
                                Some(p) => *v as f64 / p as f64,
                                None => (l.ln() - xs.iter().map(|&x| (x as f64).ln()).sum::<f64>()).exp(),
                            }
                        }
                        (SampledStatistic::LcmOverProduct, Lcm::Big(_)) => {
                            (l.ln() - xs.iter().map(|&x| (x as f64).ln()).sum::<f64>()).exp()
                        }
                        _ => l.ln() - ln_center,
                    };
                    (raw, value)
                }
            };
            acc.push(functional.apply(value));
            if keep_dist {
                let v = raw.ok_or_else(|| Error::range("lcm exceeds 128 bits, histogram unavailable"))?;
                *hist.entry(v).or_insert(0) += 1;
            }
        }
        Ok((acc, hist))
    });

    let mut acc = Accumulator::default();
    let mut hist: BTreeMap<u128, u128> = BTreeMap::new();
    for part in parts {
        let (a, h) = part?;
        acc.merge(&a);
        for (v, c) in h {
            *hist.entry(v).or_insert(0) += c;
        }
    }
    let dist = if keep_dist {
        Some(EmpiricalDist::from_counts(
            hist,
            n,
            config.r,
            Provenance::MonteCarlo {
                samples: config.samples,
                seed: config.seed,
            },
        )?)
    } else {
        None
    };
    Ok(Sample {
        estimate: acc.estimate(),
        dist,
    })
}

/// Simulated gcd hitting time: the mean and `P(T_n > m)` for `m ≤ 20`.
#[derive(Debug, Clone)]
pub struct GcdWaitSimulation {
    pub mean: Estimate,
    /// `tail[m]` estimates `P(T_n > m)`.
    pub tail: Vec<Estimate>,
}

/// Draws until the running gcd reaches 1, `trials` times.
pub fn simulate_gcd_waiting(n: u64, trials: u64, seed: u64, workers: usize) -> Result<GcdWaitSimulation> {
    check_sim(n, trials, workers)?;
    let uniform = Draw::new(n)?;
    let parts = run_workers(trials, seed, workers, |rng, share| -> Result<_> {
        let mut acc = Accumulator::default();
        let mut tails = vec![Accumulator::default(); GCD_WAIT_TAIL_MAX + 1];
        for _ in 0..share {
            let mut g = uniform.sample(rng);
            let mut draws = 1u64;
            while g != 1 {
                if draws >= GCD_WAIT_DRAW_CAP {
                    return Err(Error::Resource {
                        what: "draws in one gcd hitting-time trial".into(),
                        needed: draws as u128 + 1,
                        budget: GCD_WAIT_DRAW_CAP as u128,
                    });
                }
                g = gcd(g, uniform.sample(rng));
                draws += 1;
            }
            acc.push(draws as f64);
            for (m, t) in tails.iter_mut().enumerate() {
                t.push(f64::from(u8::from(draws > m as u64)));
            }
        }
        Ok((acc, tails))
    });
    let mut acc = Accumulator::default();
    let mut tails = vec![Accumulator::default(); GCD_WAIT_TAIL_MAX + 1];
    for part in parts {
        let (a, t) = part?;
        acc.merge(&a);
        for (x, y) in tails.iter_mut().zip(&t) {
            x.merge(y);
        }
    }
    Ok(GcdWaitSimulation {
        mean: acc.estimate(),
        tail: tails.iter().map(Accumulator::estimate).collect(),
    })
}

fn check_sim(n: u64, trials: u64, workers: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("waiting-time simulation needs n >= 2, got {n}")));
    }
    if trials < 1 || workers < 1 {
        return Err(Error::invalid("trials and workers must be >= 1"));
    }
    Ok(())
}

/// Locates the coupon class of a draw using only the list of primes: small
/// primes (`p² ≤ n`) are tested as `p^γ | x`, and whatever remains after
/// removing them is 1 or the single prime factor above `√n`.
#[derive(Debug, Clone)]
pub struct ClassLocator {
    small: Vec<(u64, u64)>,
    primes: Vec<u64>,
}

impl ClassLocator {
    pub fn new(s: &CouponStructure) -> Self {
        let n = s.n();
        let small = s
            .classes()
            .iter()
            .take_while(|c| c.p * c.p <= n)
            .map(|c| (c.p, c.power()))
            .collect();
        ClassLocator {
            small,
            primes: s.classes().iter().map(|c| c.p).collect(),
        }
    }

    /// Index (in increasing prime order) of the class containing `x`.
    pub fn locate(&self, x: u64) -> Option<usize> {
        let mut rest = x;
        for (i, &(p, q)) in self.small.iter().enumerate() {
            if p * p > rest {
                break;
            }
            if rest % p == 0 {
                if x % q == 0 {
                    return Some(i);
                }
                while rest % p == 0 {
                    rest /= p;
                }
            }
        }
        if rest == 1 {
            return None;
        }
        // `rest` is prime here; it is a class only if it exceeds √n, or if
        // it is a small prime p with p^γ = p, i.e. γ = 1.
        let i = self.primes.binary_search(&rest).ok()?;
        if i < self.small.len() && x % self.small[i].1 != 0 {
            return None;
        }
        Some(i)
    }
}

/// Largest `n` for which the class of every `x ≤ n` is tabulated rather than
/// located by trial division.
pub const CLASS_TABLE_LIMIT: u64 = 1 << 22;

const NO_CLASS: u32 = u32::MAX;

fn class_table(s: &CouponStructure) -> Vec<u32> {
    let mut table = vec![NO_CLASS; s.n() as usize + 1];
    for (i, c) in s.classes().iter().enumerate() {
        for x in c.members() {
            table[x as usize] = i as u32;
        }
    }
    table
}

/// Uniform draws from `{1..n}`, on 32 bits when `n` allows.
enum Draw {
    Narrow(Uniform<u32>),
    Wide(Uniform<u64>),
}

impl Draw {
    fn new(n: u64) -> Result<Self> {
        let e = |e: rand::distr::uniform::Error| Error::invalid(e.to_string());
        Ok(match u32::try_from(n) {
            Ok(m) => Draw::Narrow(Uniform::new_inclusive(1, m).map_err(e)?),
            Err(_) => Draw::Wide(Uniform::new_inclusive(1, n).map_err(e)?),
        })
    }

    #[inline]
    fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        match self {
            Draw::Narrow(u) => u.sample(rng) as u64,
            Draw::Wide(u) => u.sample(rng),
        }
    }
}

/// Draws until every coupon class has been hit, `trials` times.
pub fn simulate_lcm_waiting(n: u64, trials: u64, seed: u64, workers: usize) -> Result<Estimate> {
    check_sim(n, trials, workers)?;
    let s = CouponStructure::new(n)?;
    let classes = s.classes().len();
    let draw = Draw::new(n)?;
    let table = (n <= CLASS_TABLE_LIMIT).then(|| class_table(&s));
    let locator = ClassLocator::new(&s);
    let locate = |x: u64| -> Option<usize> {
        match &table {
            Some(t) => match t[x as usize] {
                NO_CLASS => None,
                i => Some(i as usize),
            },
            None => locator.locate(x),
        }
    };
    let parts = run_workers(trials, seed, workers, |rng, share| {
        let mut acc = Accumulator::default();
        let mut seen = vec![false; classes];
        for _ in 0..share {
            seen.fill(false);
            let mut remaining = classes;
            let mut draws = 0u64;
            while remaining > 0 {
                draws += 1;
                if let Some(i) = locate(draw.sample(rng)) {
                    if !seen[i] {
                        seen[i] = true;
                        remaining -= 1;
                    }
                }
            }
            acc.push(draws as f64);
        }
        acc
    });
    let mut acc = Accumulator::default();
    for a in &parts {
        acc.merge(a);
    }
    Ok(acc.estimate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{coprimality_constant, lcm_r_moment_bounds, Tolerance};
    use crate::waiting::{gcd_wait_mean, gcd_wait_tail, lcm_wait_mean_exact, lcm_wait_mean_inclusion_exclusion};

    #[test]
    fn accumulator_matches_two_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 1013) as f64 / 17.0).collect();
        let mut a = Accumulator::default();
        xs.iter().for_each(|&x| a.push(x));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        let e = a.estimate();
        assert!((e.value - mean).abs() < 1e-12);
        assert!((e.stderr - (var / xs.len() as f64).sqrt()).abs() < 1e-12);

        let mut left = Accumulator::default();
        let mut right = Accumulator::default();
        xs[..333].iter().for_each(|&x| left.push(x));
        xs[333..].iter().for_each(|&x| right.push(x));
        left.merge(&right);
        assert!((left.estimate().value - mean).abs() < 1e-12);
        assert!((left.estimate().stderr - e.stderr).abs() < 1e-12);
    }

    #[test]
    fn shares_partition_samples() {
        assert_eq!(shares(10, 3), vec![4, 3, 3]);
        assert_eq!(shares(2, 4), vec![1, 1, 0, 0]);
    }

    #[test]
    fn degenerate_box() {
        let c = SamplerConfig::new(1, 3, 1000, 5).unwrap();
        let s = sample_statistic(&c, SampledStatistic::Gcd, Functional::Power(1.0), true).unwrap();
        assert_eq!(s.estimate.value, 1.0);
        assert_eq!(s.estimate.stderr, 0.0);
        assert_eq!(s.dist.unwrap().support(), &[1]);
        assert!(SamplerConfig::new(5, 2, 0, 1).is_err());
    }

    #[test]
    fn deterministic_for_fixed_seed_and_workers() {
        let c = SamplerConfig::new(1000, 3, 20_000, 42).unwrap().with_workers(3).unwrap();
        let a = sample_statistic(&c, SampledStatistic::LcmScaled, Functional::Power(1.0), true).unwrap();
        let b = sample_statistic(&c, SampledStatistic::LcmScaled, Functional::Power(1.0), true).unwrap();
        assert_eq!(a.estimate.value.to_bits(), b.estimate.value.to_bits());
        assert_eq!(a.estimate.stderr.to_bits(), b.estimate.stderr.to_bits());
        assert_eq!(a.dist, b.dist);
        let d = sample_statistic(&c.with_workers(2).unwrap(), SampledStatistic::LcmScaled, Functional::Power(1.0), false)
            .unwrap();
        assert_ne!(a.estimate.value.to_bits(), d.estimate.value.to_bits());
    }

    #[test]
    fn coprime_pair_frequency() {
        let c = SamplerConfig::new(10_000, 2, 200_000, 11).unwrap().with_workers(4).unwrap();
        let s = sample_statistic(&c, SampledStatistic::Gcd, Functional::Equals(1.0), false).unwrap();
        let t2 = coprimality_constant(2, Tolerance::CONSTANT).unwrap();
        assert!(s.estimate.agrees_with(t2, 3.0), "{:?}", s.estimate);
    }

    #[test]
    fn lcm_moment_inside_bounds() {
        let c = SamplerConfig::new(10_000, 3, 100_000, 3).unwrap().with_workers(4).unwrap();
        let s = sample_statistic(&c, SampledStatistic::LcmScaled, Functional::Power(1.0), false).unwrap();
        let b = lcm_r_moment_bounds(3, 1, Tolerance::EXPECTATION).unwrap();
        let e = s.estimate;
        assert!(e.value + 3.0 * e.stderr >= b.lower && e.value - 3.0 * e.stderr <= b.upper);
    }

    #[test]
    fn lcm_overflow_falls_back_to_big_integers() {
        let c = SamplerConfig::new(u64::MAX / 2, 4, 200, 9).unwrap();
        let s = sample_statistic(&c, SampledStatistic::LcmOverProduct, Functional::Power(1.0), false).unwrap();
        assert!(s.estimate.value > 0.0 && s.estimate.value <= 1.0);
        let s = sample_statistic(&c, SampledStatistic::LcmScaled, Functional::Power(1.0), false).unwrap();
        assert!(s.estimate.value > 0.0 && s.estimate.value <= 1.0);
        assert!(sample_statistic(&c, SampledStatistic::LcmScaled, Functional::Power(1.0), true).is_err());

        let mut l = Lcm::Small(1);
        let mut exact = BigUint::from(1u8);
        for x in [u64::MAX, u64::MAX - 2, u64::MAX - 4, 1 << 63] {
            l.push(x);
            exact = num_integer_lcm(&exact, x);
        }
        match l {
            Lcm::Big(ref v) => assert_eq!(*v, exact),
            Lcm::Small(_) => panic!("expected overflow"),
        }
    }

    fn num_integer_lcm(a: &BigUint, x: u64) -> BigUint {
        let mut p = a.clone();
        let mut q = BigUint::from(x);
        while q != BigUint::from(0u8) {
            let t = &p % &q;
            p = q;
            q = t;
        }
        a * x / p
    }

    #[test]
    fn centered_log_lcm_is_centered() {
        let c = SamplerConfig::new(1, 2, 10, 0).unwrap();
        let s = sample_statistic(&c, SampledStatistic::LogLcmCentered, Functional::Power(1.0), false).unwrap();
        assert_eq!(s.estimate.value, 0.0);
    }

    #[test]
    fn gcd_waiting_small() {
        let sim = simulate_gcd_waiting(2, 100_000, 1, 2).unwrap();
        assert!(sim.mean.agrees_with(2.0, 4.0));
        for m in 0..=10 {
            assert!(sim.tail[m].agrees_with(0.5f64.powi(m as i32), 4.0) || m == 0);
        }
        assert_eq!(sim.tail[0].value, 1.0);
        assert!(simulate_gcd_waiting(1, 10, 1, 1).is_err());
    }

    #[test]
    fn gcd_waiting_matches_exact() {
        let sim = simulate_gcd_waiting(10_000, 200_000, 5, 4).unwrap();
        assert!(sim.mean.agrees_with(gcd_wait_mean(10_000).unwrap(), 3.0), "{:?}", sim.mean);
        assert!(sim.tail[2].agrees_with(gcd_wait_tail(10_000, 2).unwrap(), 3.0));
    }

    #[test]
    fn locator_matches_classes() {
        for n in 2..=200u64 {
            let s = CouponStructure::new(n).unwrap();
            let loc = ClassLocator::new(&s);
            for x in 1..=n {
                let direct = s.classes().iter().position(|c| c.contains(x));
                assert_eq!(loc.locate(x), direct, "n={n} x={x}");
                let by_set = s.classes().iter().position(|c| c.members().contains(&x));
                assert_eq!(direct, by_set);
            }
        }
    }

    #[test]
    fn class_table_matches_locator() {
        for n in [2u64, 3, 10, 97, 360, 1000, 4096] {
            let s = CouponStructure::new(n).unwrap();
            let t = class_table(&s);
            let loc = ClassLocator::new(&s);
            for x in 1..=n {
                let via_table = (t[x as usize] != NO_CLASS).then(|| t[x as usize] as usize);
                assert_eq!(via_table, loc.locate(x), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn lcm_waiting_small_cases() {
        let sim = simulate_lcm_waiting(2, 50_000, 3, 2).unwrap();
        assert!(sim.agrees_with(2.0, 4.0));
        let sim = simulate_lcm_waiting(10, 100_000, 4, 4).unwrap();
        assert!(sim.agrees_with(lcm_wait_mean_inclusion_exclusion(10).unwrap(), 3.0), "{sim:?}");
        let sim = simulate_lcm_waiting(100, 20_000, 8, 4).unwrap();
        let exact = lcm_wait_mean_exact(100, Tolerance::EXPECTATION).unwrap();
        assert!(sim.agrees_with(exact, 3.0), "{sim:?} vs {exact}");
    }
}
