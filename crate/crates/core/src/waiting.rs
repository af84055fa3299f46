//! Waiting times for the running gcd to reach 1 and for the running lcm to
//! reach `lcm(1, …, n)` when drawing uniformly from `{1..n}`.

use crate::analytic::{zeta_minus_one, BoundPair, Tolerance, EULER_GAMMA};
use crate::arith::PrimeTable;
use crate::error::{Error, Result};
use crate::quad;
use std::collections::BTreeMap;

/// Largest `π(n)` for which the lcm waiting-time tail is expanded by
/// inclusion–exclusion.
pub const MAX_INCLUSION_EXCLUSION_CLASSES: usize = 12;

/// Default Möbius-side cut-off for [`gcd_wait_mean_limit`].
pub const MOBIUS_CUTOFF: u64 = 1_000_000;

fn check_n(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("waiting times need n >= 2, got {n}")));
    }
    Ok(())
}

/// `P(T_n > m)` for the gcd waiting time, grouped over blocks of equal
/// `⌊n/k⌋`: `−Σ_{k≥2} μ(k) a_k^m` with `a_k = ⌊n/k⌋/n`.
#[derive(Debug, Clone)]
pub struct GcdWait {
    n: u64,
    // (a, Σ μ(k) over the block), k >= 2 only
    blocks: Vec<(f64, f64)>,
}

impl GcdWait {
    pub fn new(n: u64) -> Result<Self> {
        check_n(n)?;
        let table = PrimeTable::new(n as usize)?;
        let mut mertens = vec![0i64; n as usize + 1];
        for k in 1..=n as usize {
            mertens[k] = mertens[k - 1] + table.mobius(k) as i64;
        }
        let mut blocks = Vec::new();
        let mut k = 2u64;
        while k <= n {
            let q = n / k;
            let hi = n / q;
            let w = mertens[hi as usize] - mertens[k as usize - 1];
            if w != 0 {
                blocks.push((q as f64 / n as f64, w as f64));
            }
            k = hi + 1;
        }
        Ok(GcdWait { n, blocks })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn tail(&self, m: u32) -> f64 {
        if m == 0 {
            return 1.0;
        }
        -self.blocks.iter().rev().map(|&(a, w)| w * a.powi(m as i32)).sum::<f64>()
    }

    /// `E(T_n) = 2 − 1/n − Σ_{k≥2} μ(k) a_k²/(1 − a_k)`.
    pub fn mean(&self) -> f64 {
        let s: f64 = self.blocks.iter().rev().map(|&(a, w)| w * a * a / (1.0 - a)).sum();
        2.0 - 1.0 / self.n as f64 - s
    }
}

/// `P(T_n > m)` for the gcd waiting time.
pub fn gcd_wait_tail(n: u64, m: u32) -> Result<f64> {
    Ok(GcdWait::new(n)?.tail(m))
}

/// `E(T_n)` for the gcd waiting time, in closed form.
pub fn gcd_wait_mean(n: u64) -> Result<f64> {
    Ok(GcdWait::new(n)?.mean())
}

/// Both evaluations of `lim E(T_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcdWaitLimit {
    /// `2 + Σ_{m≥2} (1 − 1/ζ(m))`.
    pub zeta_side: f64,
    /// `2 − Σ_{2≤k≤K} μ(k)/(k(k−1))`, i.e. `1 − Σ μ(k)/(k−1)` after
    /// removing `Σ μ(k)/k = 0`.
    pub mobius_side: f64,
    /// Bound `1/K` on the omitted Möbius terms.
    pub mobius_bound: f64,
}

/// `lim E(T_n)`, evaluated through ζ values and through a Möbius sum; the
/// two must agree or a consistency error is raised.
pub fn gcd_wait_mean_limit(tol: Tolerance) -> Result<GcdWaitLimit> {
    gcd_wait_mean_limit_with(tol, MOBIUS_CUTOFF)
}

pub fn gcd_wait_mean_limit_with(tol: Tolerance, cutoff: u64) -> Result<GcdWaitLimit> {
    if cutoff < 2 {
        return Err(Error::invalid("Möbius cut-off must be >= 2"));
    }
    let eps = tol.eps();
    // Terms (ζ(m)−1)/ζ(m) < 2^{1−m}; stop once the remainder 2^{2−m} is below eps/10.
    let mut zeta_side = 2.0;
    let mut terms = Vec::new();
    let mut m = 2u32;
    loop {
        let zm1 = zeta_minus_one(m as f64, tol.scaled(0.01))?;
        terms.push(zm1 / (1.0 + zm1));
        if 2f64.powi(2 - m as i32) < eps / 10.0 {
            break;
        }
        m += 1;
    }
    zeta_side += terms.iter().rev().sum::<f64>();

    let table = PrimeTable::new(cutoff as usize)?;
    let mut s = 0.0;
    for k in (2..=cutoff).rev() {
        let mu = table.mobius(k as usize);
        if mu != 0 {
            let kf = k as f64;
            s += mu as f64 / (kf * (kf - 1.0));
        }
    }
    let mobius_side = 2.0 - s;
    let mobius_bound = 1.0 / cutoff as f64;
    let allowed = 2.0 * eps.max(mobius_bound);
    if (zeta_side - mobius_side).abs() > allowed {
        return Err(Error::Consistency {
            what: "gcd waiting-time limit, ζ side vs Möbius side".into(),
            left: zeta_side,
            right: mobius_side,
            allowed,
        });
    }
    Ok(GcdWaitLimit {
        zeta_side,
        mobius_side,
        mobius_bound,
    })
}

/// Class of multiples of `p^γ` in `{1..n}`, where `p^γ ≤ n < p^{γ+1}`; it
/// has `β = ⌊n/p^γ⌋ < p` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeClass {
    pub p: u64,
    pub gamma: u32,
    pub beta: u64,
}

impl PrimeClass {
    pub fn power(&self) -> u64 {
        self.p.pow(self.gamma)
    }

    pub fn contains(&self, x: u64) -> bool {
        x % self.power() == 0
    }

    pub fn members(&self) -> Vec<u64> {
        let q = self.power();
        (1..=self.beta).map(|k| k * q).collect()
    }
}

/// The coupon classes whose union must be hit for the running lcm to reach
/// `lcm(1..n)`, and the multiplicities `ω_j = #{p : β_p = j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouponStructure {
    n: u64,
    classes: Vec<PrimeClass>,
    omega: BTreeMap<u64, u64>,
}

impl CouponStructure {
    pub fn new(n: u64) -> Result<Self> {
        check_n(n)?;
        let table = PrimeTable::new(n as usize)?;
        let mut classes = Vec::with_capacity(table.primes().len());
        let mut omega = BTreeMap::new();
        for &p in table.primes() {
            let p = p as u64;
            let mut q = p;
            let mut gamma = 1;
            while q <= n / p {
                q *= p;
                gamma += 1;
            }
            let beta = n / q;
            classes.push(PrimeClass { p, gamma, beta });
            *omega.entry(beta).or_insert(0) += 1;
        }
        Ok(CouponStructure { n, classes, omega })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn classes(&self) -> &[PrimeClass] {
        &self.classes
    }

    pub fn class_of_prime(&self, p: u64) -> Option<&PrimeClass> {
        self.classes.iter().find(|c| c.p == p)
    }

    /// `π(n)`.
    pub fn prime_count(&self) -> u64 {
        self.classes.len() as u64
    }

    /// `ω_j(n)`.
    pub fn omega(&self, j: u64) -> u64 {
        self.omega.get(&j).copied().unwrap_or(0)
    }

    /// Non-zero `(j, ω_j)` pairs in increasing `j`.
    pub fn omegas(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.omega.iter().map(|(&j, &w)| (j, w))
    }

    /// `1 − ∏_j (1 − e^{−tj})^{ω_j}`, the probability that some class is
    /// still missing after an exponential clock of rate 1/n reads `t`.
    pub fn missing_probability(&self, t: f64) -> f64 {
        let log_all: f64 = self
            .omega
            .iter()
            .map(|(&j, &w)| w as f64 * (-(-t * j as f64).exp_m1()).ln())
            .sum();
        -log_all.exp_m1()
    }
}

pub fn build_coupon_structure(n: u64) -> Result<CouponStructure> {
    CouponStructure::new(n)
}

/// Harmonic numbers extended to real arguments: `H(a) = ψ(a+1) + γ`, summed
/// directly for integers up to 10⁷.
pub fn harmonic(a: f64) -> Result<f64> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::domain(format!("harmonic number needs a > 0, got {a}")));
    }
    if a.fract() == 0.0 && a <= 1e7 {
        return Ok((1..=a as u64).rev().map(|j| 1.0 / j as f64).sum());
    }
    Ok(statrs::function::gamma::digamma(a + 1.0) + EULER_GAMMA)
}

/// Mean waiting time for the lcm, `n∫₀^∞ (1 − ∏_j (1−e^{−tj})^{ω_j}) dt`,
/// with relative error below `tol`.
pub fn lcm_wait_mean_exact(n: u64, tol: Tolerance) -> Result<f64> {
    let s = CouponStructure::new(n)?;
    lcm_wait_mean_with(&s, tol)
}

pub fn lcm_wait_mean_with(s: &CouponStructure, tol: Tolerance) -> Result<f64> {
    let eps = tol.eps();
    // E/n >= 1, and the integrand beyond t_hi is below Σ_j ω_j e^{−t j} <= π(n) e^{−t}.
    let pi = s.prime_count() as f64;
    let t_hi = (10.0 * pi / eps).ln().max(1.0);
    let q = quad::integrate(|t| s.missing_probability(t), 0.0, t_hi, 0.0, 0.1 * eps, 4000)?;
    log::debug!(
        "lcm waiting mean n={}: {} intervals, {} evaluations, error estimate {}",
        s.n(),
        q.intervals,
        q.evaluations,
        q.abs_error
    );
    Ok(s.n() as f64 * q.value)
}

/// `[n·H(ω₁), n·H(ω₁) + n(π(n) − ω₁)/ω₁²]`.
pub fn lcm_wait_mean_bounds(n: u64) -> Result<BoundPair> {
    let s = CouponStructure::new(n)?;
    let nf = n as f64;
    let w1 = s.omega(1);
    if w1 == 0 {
        // Bertrand's postulate gives a prime in (n/2, n], so this is never reached.
        log::warn!("ω₁({n}) = 0, bounds replaced by the quadrature value");
        let v = lcm_wait_mean_with(&s, Tolerance::EXPECTATION)?;
        return BoundPair::new(v, v);
    }
    let h = harmonic(w1 as f64)?;
    let w1f = w1 as f64;
    let lower = nf * h;
    BoundPair::new(lower, lower + nf * (s.prime_count() as f64 - w1f) / (w1f * w1f))
}

/// `n ln n − n ln ln n + n(γ − ln 2)`.
pub fn lcm_wait_mean_asymptotic(n: u64) -> Result<f64> {
    if n < 16 {
        return Err(Error::domain(format!("asymptotic form needs n >= 16, got {n}")));
    }
    let nf = n as f64;
    Ok(nf * nf.ln() - nf * nf.ln().ln() + nf * (EULER_GAMMA - std::f64::consts::LN_2))
}

/// Collector that needs every prime `p ≤ n` itself: `n·H(π(n))`.
pub fn simple_collector_mean(n: u64) -> Result<f64> {
    check_n(n)?;
    let pi = PrimeTable::new(n as usize)?.prime_count(n as usize);
    Ok(n as f64 * harmonic(pi as f64)?)
}

fn class_subsets(s: &CouponStructure) -> Result<Vec<(f64, bool)>> {
    let k = s.classes().len();
    if k > MAX_INCLUSION_EXCLUSION_CLASSES {
        return Err(Error::Resource {
            what: format!("inclusion–exclusion over π({}) coupon classes", s.n()),
            needed: 1u128.checked_shl(k as u32).unwrap_or(u128::MAX),
            budget: 1u128 << MAX_INCLUSION_EXCLUSION_CLASSES,
        });
    }
    let n = s.n() as f64;
    Ok((1u32..(1 << k))
        .map(|mask| {
            let weight: u64 = s
                .classes()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, c)| c.beta)
                .sum();
            (weight as f64 / n, mask.count_ones() % 2 == 1)
        })
        .collect())
}

/// `P(T_n > l)` for the lcm waiting time by inclusion–exclusion over the
/// classes; only for `π(n) ≤ 12`.
pub fn lcm_wait_tail(n: u64, l: u32) -> Result<f64> {
    let s = CouponStructure::new(n)?;
    if l == 0 {
        return Ok(1.0);
    }
    Ok(class_subsets(&s)?
        .iter()
        .map(|&(p, odd)| {
            let v = (1.0 - p).powi(l as i32);
            if odd {
                v
            } else {
                -v
            }
        })
        .sum())
}

/// `E(T_n)` for the lcm by inclusion–exclusion, `Σ_S ±n/Σ_{p∈S} β_p`.
pub fn lcm_wait_mean_inclusion_exclusion(n: u64) -> Result<f64> {
    let s = CouponStructure::new(n)?;
    Ok(class_subsets(&s)?
        .iter()
        .map(|&(p, odd)| if odd { 1.0 / p } else { -1.0 / p })
        .sum())
}

/// Which running statistic the waiting time refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaitKind {
    Gcd,
    Lcm,
}

/// Tail and mean of a waiting time.
#[derive(Debug, Clone)]
pub struct WaitLaw {
    pub kind: WaitKind,
    pub n: u64,
    pub mean: f64,
    gcd: Option<GcdWait>,
}

impl WaitLaw {
    pub fn new(kind: WaitKind, n: u64, tol: Tolerance) -> Result<Self> {
        match kind {
            WaitKind::Gcd => {
                let g = GcdWait::new(n)?;
                Ok(WaitLaw {
                    kind,
                    n,
                    mean: g.mean(),
                    gcd: Some(g),
                })
            }
            WaitKind::Lcm => Ok(WaitLaw {
                kind,
                n,
                mean: lcm_wait_mean_exact(n, tol)?,
                gcd: None,
            }),
        }
    }

    /// `P(T_n > m)`; for the lcm only while inclusion–exclusion is affordable.
    pub fn tail(&self, m: u32) -> Result<f64> {
        match &self.gcd {
            Some(g) => Ok(g.tail(m)),
            None => lcm_wait_tail(self.n, m),
        }
    }
}
