use super::products::{coprimality_constant, j_series, prime_factor_weights};
use super::zeta::{zeta, zeta_log_deriv};
use super::{BoundPair, LawValue, Tolerance};
use crate::arith::{cesaro_sum, ArithFn};
use crate::error::{Error, Result};

/// Largest `1/t` for which the triple-law double sums are evaluated.
pub const MAX_INVERSE_T: f64 = 4.0e6;

// Ties such as D²m·t = 1 must land on the "not below" side.
const TIE_SLACK: f64 = 1e-12;

fn check_r(r: u32, min: u32, what: &str) -> Result<()> {
    if r < min {
        return Err(Error::domain(format!("{what} needs r >= {min}, got {r}")));
    }
    Ok(())
}

fn check_q(q: u32) -> Result<()> {
    if q == 0 {
        return Err(Error::domain("moment order q must be >= 1"));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain(format!("t must lie in (0, 1], got {t}")));
    }
    Ok(())
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Volume of `{x ∈ [0,1]^r : x₁⋯x_r ≤ s}`: `s·Σ_{j<r} ln(1/s)^j/j!` for
/// `s < 1`, and 1 otherwise.
pub fn omega_volume(r: u32, s: f64) -> Result<f64> {
    if r == 0 {
        return Err(Error::domain("omega_volume needs r >= 1"));
    }
    if s.is_nan() || s <= 0.0 {
        return Err(Error::domain(format!("omega_volume needs s > 0, got {s}")));
    }
    if s >= 1.0 {
        return Ok(1.0);
    }
    let l = -s.ln();
    let mut term = 1.0;
    let mut acc = 1.0;
    for j in 1..r {
        term *= l / j as f64;
        acc += term;
    }
    Ok((s * acc).min(1.0))
}

/// Limiting mass `P(gcd = k) → 1/(k^r ζ(r))`.
pub fn gcd_limit_mass(r: u32, k: u64, tol: Tolerance) -> Result<f64> {
    check_r(r, 2, "gcd mass")?;
    if k == 0 {
        return Err(Error::domain("gcd value k must be >= 1"));
    }
    Ok(1.0 / ((k as f64).powi(r as i32) * zeta(r as f64, tol)?))
}

/// Growth regime of `E(gcd^q)` for r-tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcdMomentRegime {
    /// `q ≤ r−2`: converges to `ζ(r−q)/ζ(r)`.
    Convergent,
    /// `q = r−1`: grows like `ln(n)/ζ(r)`.
    Logarithmic,
    /// `q ≥ r`: grows like `D_{r,q}·n^{q−r+1}`.
    Power,
}

impl GcdMomentRegime {
    pub fn of(r: u32, q: u32) -> Self {
        if q + 2 <= r {
            GcdMomentRegime::Convergent
        } else if q + 1 == r {
            GcdMomentRegime::Logarithmic
        } else {
            GcdMomentRegime::Power
        }
    }
}

/// Leading-order value of `E(gcd^q)` together with its regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcdMomentAsymptotic {
    pub regime: GcdMomentRegime,
    pub value: f64,
}

/// `D_{r,q} = (1/((q+1)ζ(q+1))) Σ_{k=1}^r C(r,k)(−1)^{k+1} ζ(q−r+k+1)` for `q ≥ r`.
pub fn gcd_moment_constant(r: u32, q: u32, tol: Tolerance) -> Result<f64> {
    check_r(r, 2, "gcd moment constant")?;
    if q < r {
        return Err(Error::domain(format!("D_(r,q) needs q >= r, got r={r}, q={q}")));
    }
    let inner = tol.scaled(1.0 / (4.0 * 2f64.powi(r as i32)));
    let mut acc = 0.0;
    for k in 1..=r {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        acc += sign * binomial(r, k) * zeta((q - r + k + 1) as f64, inner)?;
    }
    Ok(acc / ((q + 1) as f64 * zeta((q + 1) as f64, inner)?))
}

/// Leading term of `E(gcd^q)` for r-tuples on `{1..n}`.
///
/// For `r = 2, q = 1` this is `ln(n)/ζ(2)` without the additive constant; see
/// [`fitted_pair_gcd_intercept`].
pub fn gcd_moment_asymptotic(r: u32, q: u32, n: u64, tol: Tolerance) -> Result<GcdMomentAsymptotic> {
    check_r(r, 2, "gcd moment")?;
    check_q(q)?;
    let regime = GcdMomentRegime::of(r, q);
    if regime != GcdMomentRegime::Convergent && n < 2 {
        return Err(Error::domain(format!("growing gcd moments need n >= 2, got {n}")));
    }
    let value = match regime {
        GcdMomentRegime::Convergent => zeta((r - q) as f64, tol.scaled(0.25))? / zeta(r as f64, tol.scaled(0.25))?,
        GcdMomentRegime::Logarithmic => (n as f64).ln() / zeta(r as f64, tol)?,
        GcdMomentRegime::Power => gcd_moment_constant(r, q, tol)? * (n as f64).powi((q - r + 1) as i32),
    };
    Ok(GcdMomentAsymptotic { regime, value })
}

/// Average over `ns` of `E_n(gcd of a pair) − ln(n)/ζ(2)`, from exact
/// Cesàro sums. An empirical fit, not a derived constant.
pub fn fitted_pair_gcd_intercept(ns: &[u64]) -> Result<f64> {
    if ns.is_empty() {
        return Err(Error::invalid("no sizes to fit the intercept on"));
    }
    let z2 = zeta(2.0, Tolerance::CONSTANT)?;
    let mut acc = 0.0;
    for &n in ns {
        if n < 2 {
            return Err(Error::domain(format!("fit sizes must be >= 2, got {n}")));
        }
        let total = cesaro_sum(ArithFn::Power(1), n, 2)?.as_f64();
        acc += total / (n as f64 * n as f64) - (n as f64).ln() / z2;
    }
    Ok(acc / ns.len() as f64)
}

/// `lim P(lcm(X,Y)/n² ≤ t) = 1 − (1/ζ(2)) Σ_{j ≤ 1/t} (1 − Ω₂(jt))/j²`.
pub fn lcm_pair_cdf_limit(t: f64) -> Result<f64> {
    check_t(t)?;
    let z2 = zeta(2.0, Tolerance::CONSTANT)?;
    let jmax = (1.0 / t).floor() as u64;
    let mut s = 0.0;
    for j in (1..=jmax).rev() {
        let jf = j as f64;
        s += (1.0 - omega_volume(2, jf * t)?) / (jf * jf);
    }
    Ok(1.0 - s / z2)
}

/// `lim E(lcm(X,Y)^q)/n^{2q} = ζ(q+2)/(ζ(2)(q+1)²)`.
pub fn lcm_pair_moment_limit(q: u32, tol: Tolerance) -> Result<f64> {
    check_q(q)?;
    let t = tol.scaled(0.25);
    let qf = (q + 1) as f64;
    Ok(zeta(q as f64 + 2.0, t)? / (zeta(2.0, t)? * qf * qf))
}

/// `Σ_{j^{r−1} t < 1} (1 − Ω_r(t j^{r−1}))/j^r`, the sum shared by both CDF bounds.
fn cdf_bound_sum(r: u32, t: f64) -> Result<f64> {
    let mut terms = Vec::new();
    let mut j = 1u64;
    loop {
        let jf = j as f64;
        let arg = t * jf.powi(r as i32 - 1);
        if arg >= 1.0 {
            break;
        }
        terms.push((1.0 - omega_volume(r, arg)?) / jf.powi(r as i32));
        j += 1;
    }
    Ok(terms.iter().rev().sum())
}

/// Liminf/limsup bounds for `P(lcm/n^r ≤ t)`:
/// `[1 − S/ζ(r), 1 − T_r·S]` with `S = Σ_j (1 − Ω_r(t j^{r−1}))/j^r`.
pub fn lcm_r_cdf_bounds(r: u32, t: f64, tol: Tolerance) -> Result<BoundPair> {
    check_r(r, 2, "lcm CDF bounds")?;
    check_t(t)?;
    let s = cdf_bound_sum(r, t)?;
    let zr = zeta(r as f64, tol.scaled(0.25))?;
    let tr = coprimality_constant(r, tol.scaled(0.25))?;
    BoundPair::from_estimates(1.0 - s / zr, 1.0 - tr * s, tol.eps())
}

/// Liminf/limsup bounds for `E(lcm^q)/n^{rq}`:
/// `[T_r, 1/ζ(r)] · ζ(r(q+1)−q)/(q+1)^r`.
pub fn lcm_r_moment_bounds(r: u32, q: u32, tol: Tolerance) -> Result<BoundPair> {
    check_r(r, 2, "lcm moment bounds")?;
    check_q(q)?;
    let t = tol.scaled(0.2);
    let base = zeta((r * (q + 1) - q) as f64, t)? / ((q + 1) as f64).powi(r as i32);
    let tr = coprimality_constant(r, t)?;
    let zr = zeta(r as f64, t)?;
    BoundPair::from_estimates(tr * base, base / zr, tol.eps())
}

fn weights_for(t: f64) -> Result<Vec<f64>> {
    let inv = 1.0 / t;
    if inv > MAX_INVERSE_T {
        return Err(Error::Resource {
            what: "inner range 1/t of the triple-law sum".into(),
            needed: inv.ceil() as u128,
            budget: MAX_INVERSE_T as u128,
        });
    }
    prime_factor_weights(inv.ceil() as usize)
}

/// Exact triple law `lim P(lcm(X,Y,Z)/n³ ≤ t)`:
/// `1 − T₃ Σ_j j^{−3} Σ_m w(m) m^{−2} (1 − Ω₃(t j² m))` with
/// `w(m) = Υ₃(m)·3^{ω(m)}`. Both sums stop once `t j² m ≥ 1`.
///
/// At `t = 0` this is `1 − T₃ζ(3)J(2)`, which vanishes.
pub fn lcm3_cdf_limit(t: f64, tol: Tolerance) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t must lie in [0, 1], got {t}")));
    }
    if t == 0.0 {
        let inner = tol.scaled(0.1);
        let z3 = zeta(3.0, inner)?;
        return Ok(1.0 - coprimality_constant(3, inner)? * z3 * j_series(2.0, inner)?);
    }
    let w = weights_for(t)?;
    let mut outer = Vec::new();
    let mut j = 1u64;
    loop {
        let tj = t * (j * j) as f64;
        if tj >= 1.0 {
            break;
        }
        let mmax = ((1.0 / tj).ceil() as usize).min(w.len() - 1);
        let mut inner = 0.0;
        for m in (1..=mmax).rev() {
            let arg = tj * m as f64;
            if arg >= 1.0 {
                continue;
            }
            let mf = m as f64;
            inner += w[m] / (mf * mf) * (1.0 - omega_volume(3, arg)?);
        }
        outer.push(inner / (j as f64).powi(3));
        j += 1;
    }
    let s: f64 = outer.iter().rev().sum();
    // s <= ζ(3)J(2) < 3.5
    let t3 = coprimality_constant(3, tol.scaled(0.25))?;
    Ok(1.0 - t3 * s)
}

/// Exact triple-law moments `T₃·ζ(2q+3)·J(q+2)/(q+1)³`.
pub fn lcm3_moment_limit(q: u32, tol: Tolerance) -> Result<f64> {
    check_q(q)?;
    let t = tol.scaled(0.1);
    let qf = (q + 1) as f64;
    Ok(coprimality_constant(3, t)? * zeta((2 * q + 3) as f64, t)? * j_series((q + 2) as f64, t)? / (qf * qf * qf))
}

/// Limit law of `P(lcm/(X₁⋯X_r) ≤ t)`: exact for `r ≤ 3`, bounds otherwise.
pub fn lcm_over_product_cdf(r: u32, t: f64, tol: Tolerance) -> Result<LawValue> {
    check_r(r, 2, "lcm/product CDF")?;
    check_t(t)?;
    let below = |x: f64| x * t < 1.0 - TIE_SLACK;
    match r {
        2 => {
            let mut s = 0.0;
            let mut j = 1u64;
            while below(j as f64) {
                s += 1.0 / (j as f64 * j as f64);
                j += 1;
            }
            Ok(LawValue::Exact(1.0 - s / zeta(2.0, tol)?))
        }
        3 => {
            let w = weights_for(t)?;
            let mut s = 0.0;
            let mut d = 1u64;
            while below((d * d) as f64) {
                let dd = (d * d) as f64;
                let mut inner = 0.0;
                let mut m = 1usize;
                while m < w.len() && below(dd * m as f64) {
                    let mf = m as f64;
                    inner += w[m] / (mf * mf);
                    m += 1;
                }
                s += inner / (d as f64).powi(3);
                d += 1;
            }
            let t3 = coprimality_constant(3, tol.scaled(0.25))?;
            Ok(LawValue::Exact(1.0 - t3 * s))
        }
        _ => {
            let mut s = 0.0;
            let mut j = 1u64;
            while below((j as f64).powi(r as i32 - 1)) {
                s += (j as f64).powi(-(r as i32));
                j += 1;
            }
            let zr = zeta(r as f64, tol.scaled(0.25))?;
            let tr = coprimality_constant(r, tol.scaled(0.25))?;
            Ok(LawValue::Bounds(BoundPair::from_estimates(1.0 - s / zr, 1.0 - tr * s, tol.eps())?))
        }
    }
}

/// Limit of `E((lcm/(X₁⋯X_r))^q)`: `ζ(q+2)/ζ(2)` for pairs,
/// `T₃ζ(2q+3)J(q+2)` for triples, bounds `[T_r, 1/ζ(r)]·ζ(r(q+1)−q)` beyond.
pub fn lcm_over_product_moment(r: u32, q: u32, tol: Tolerance) -> Result<LawValue> {
    check_r(r, 2, "lcm/product moment")?;
    check_q(q)?;
    let t = tol.scaled(0.2);
    match r {
        2 => Ok(LawValue::Exact(zeta((q + 2) as f64, t)? / zeta(2.0, t)?)),
        3 => {
            let qf = (q + 1) as f64;
            Ok(LawValue::Exact(lcm3_moment_limit(q, tol.scaled(0.02))? * qf * qf * qf))
        }
        _ => {
            let base = zeta((r * (q + 1) - q) as f64, t)?;
            let tr = coprimality_constant(r, t)?;
            let zr = zeta(r as f64, t)?;
            Ok(LawValue::Bounds(BoundPair::from_estimates(tr * base, base / zr, tol.eps())?))
        }
    }
}

/// `lim (E(ln lcm) − r·ln n + r) = Σ_{k=2}^r C(r,k)(−1)^k ζ′(k)/ζ(k)`.
pub fn log_lcm_mean_limit(r: u32, tol: Tolerance) -> Result<f64> {
    check_r(r, 2, "log-lcm mean")?;
    let mut acc = 0.0;
    for k in 2..=r {
        let c = binomial(r, k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let inner = tol.scaled(1.0 / (c * r as f64));
        acc += sign * c * zeta_log_deriv(k as f64, inner)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::zeta::z;

    const TOL: Tolerance = Tolerance::CONSTANT;

    #[test]
    fn pair_gcd_intercept_settles() {
        let a = fitted_pair_gcd_intercept(&[500, 1000]).unwrap();
        let b = fitted_pair_gcd_intercept(&[4000, 8000]).unwrap();
        assert!((a - b).abs() < 0.05, "{a} vs {b}");
        assert!(fitted_pair_gcd_intercept(&[]).is_err());
        assert!(fitted_pair_gcd_intercept(&[1]).is_err());
    }

    #[test]
    fn omega_volume_examples() {
        assert_eq!(omega_volume(3, 1.0).unwrap(), 1.0);
        assert!((omega_volume(2, 0.5).unwrap() - 0.5 * (1.0 - 0.5f64.ln())).abs() < 1e-15);
        let l = 10f64.ln();
        assert!((omega_volume(3, 0.1).unwrap() - 0.1 * (1.0 + l + l * l / 2.0)).abs() < 1e-15);
        assert!(omega_volume(2, 0.0).is_err());
        assert!(omega_volume(2, -1.0).is_err());
    }

    #[test]
    fn omega_volume_continuous_and_monotone() {
        for r in 1..=6 {
            let left = omega_volume(r, 1.0 - 1e-10).unwrap();
            assert!((left - 1.0).abs() < 1e-8);
            let mut prev = 0.0;
            for i in 1..=200 {
                let v = omega_volume(r, i as f64 / 200.0).unwrap();
                assert!(v >= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn omega_volume_matches_sampled_volume() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let samples = 400_000;
        let hits = (0..samples)
            .filter(|_| rng.random::<f64>() * rng.random::<f64>() * rng.random::<f64>() <= 0.1)
            .count();
        let p = hits as f64 / samples as f64;
        let se = (p * (1.0 - p) / samples as f64).sqrt();
        assert!((p - omega_volume(3, 0.1).unwrap()).abs() < 4.0 * se);
    }

    #[test]
    fn gcd_masses() {
        assert!((gcd_limit_mass(2, 1, TOL).unwrap() - 0.607_927_1).abs() < 1e-7);
        assert!((gcd_limit_mass(3, 2, TOL).unwrap() - 0.103_988_4).abs() < 1e-7);
        // Σ_{k≤K} mass = 1 − tail, tail <= K^{1−r}/((r−1)ζ(r))
        for r in [2, 3, 5] {
            let kmax = 2000;
            let s: f64 = (1..=kmax).rev().map(|k| gcd_limit_mass(r, k, TOL).unwrap()).sum();
            let bound = (kmax as f64).powi(1 - r as i32) / ((r - 1) as f64 * z(r as f64));
            // masses carry the 1e-9 error of ζ(r)
            assert!(1.0 - s >= -2e-9 && 1.0 - s <= bound + 2e-9, "r={r}");
        }
    }

    #[test]
    fn gcd_moment_regimes() {
        let a = gcd_moment_asymptotic(3, 1, 10, TOL).unwrap();
        assert_eq!(a.regime, GcdMomentRegime::Convergent);
        assert!((a.value - 1.368_432).abs() < 1e-6);
        let b = gcd_moment_asymptotic(3, 2, 1000, TOL).unwrap();
        assert_eq!(b.regime, GcdMomentRegime::Logarithmic);
        assert!((b.value - 5.7466).abs() < 1e-4);
        let c = gcd_moment_asymptotic(3, 3, 100, TOL).unwrap();
        assert_eq!(c.regime, GcdMomentRegime::Power);
        assert!((c.value / 100.0 - gcd_moment_constant(3, 3, TOL).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn pair_moment_constant_reduces() {
        for q in 2..8 {
            let qf = q as f64;
            let direct = (2.0 * z(qf) - z(qf + 1.0)) / ((qf + 1.0) * z(qf + 1.0));
            assert!((gcd_moment_constant(2, q, TOL).unwrap() - direct).abs() < 1e-9);
        }
        assert!((gcd_moment_constant(3, 3, TOL).unwrap() - 0.556_893).abs() < 1e-5);
    }

    #[test]
    fn pair_cdf() {
        assert_eq!(lcm_pair_cdf_limit(1.0).unwrap(), 1.0);
        let expect = 1.0 - (1.0 - 0.5 * (1.0 - 0.5f64.ln())) / z(2.0);
        assert!((lcm_pair_cdf_limit(0.5).unwrap() - expect).abs() < 1e-12);
        assert!((lcm_pair_cdf_limit(0.5).unwrap() - 0.9067).abs() < 1e-4);
        assert!(lcm_pair_cdf_limit(1e-5).unwrap() < 1e-3);
        assert!(lcm_pair_cdf_limit(0.0).is_err());
        assert!(lcm_pair_cdf_limit(1.5).is_err());
    }

    #[test]
    fn pair_moments() {
        assert!((lcm_pair_moment_limit(1, TOL).unwrap() - 0.182_690).abs() < 1e-6);
        assert!((lcm_pair_moment_limit(2, TOL).unwrap() - 0.073_108_181).abs() < 1e-8);
        let q = 40;
        let v = lcm_pair_moment_limit(q, TOL).unwrap();
        assert!((v * 41.0 * 41.0 * z(2.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cdf_bounds_properties() {
        for r in 3..=5 {
            let mut prev = BoundPair { lower: 0.0, upper: 0.0 };
            for i in 1..=50 {
                let t = i as f64 / 50.0;
                let b = lcm_r_cdf_bounds(r, t, TOL).unwrap();
                assert!(b.lower <= b.upper);
                assert!(b.lower >= prev.lower - 1e-15 && b.upper >= prev.upper - 1e-15);
                prev = b;
            }
            assert_eq!(prev.lower, 1.0);
            assert_eq!(prev.upper, 1.0);
            let small = lcm_r_cdf_bounds(r, 1e-9, TOL).unwrap();
            let tr = coprimality_constant(r, TOL).unwrap();
            assert!(small.lower < 1e-4, "r={r}: {}", small.lower);
            assert!((small.upper - (1.0 - tr * z(r as f64))).abs() < 1e-4);
        }
    }

    #[test]
    fn pair_bounds_collapse_to_pair_law() {
        for t in [0.1, 0.3, 0.77] {
            let b = lcm_r_cdf_bounds(2, t, TOL).unwrap();
            let exact = lcm_pair_cdf_limit(t).unwrap();
            assert!((b.lower - exact).abs() < 1e-9 && (b.upper - exact).abs() < 1e-9);
        }
        for q in 1..4 {
            let b = lcm_r_moment_bounds(2, q, TOL).unwrap();
            let exact = lcm_pair_moment_limit(q, TOL).unwrap();
            assert!(b.width() < 1e-9 && (b.lower - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn moment_bounds_ratio_and_values() {
        let b = lcm_r_moment_bounds(3, 1, TOL).unwrap();
        assert!((b.lower - 0.037_17).abs() < 1e-5);
        for q in 1..5 {
            let b = lcm_r_moment_bounds(4, q, TOL).unwrap();
            let ratio = b.upper / b.lower;
            let t4 = coprimality_constant(4, TOL).unwrap();
            assert!((ratio * t4 * z(4.0) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn triple_cdf_endpoints_and_shape() {
        assert!(lcm3_cdf_limit(0.0, TOL).unwrap().abs() < 1e-8);
        assert!((lcm3_cdf_limit(1.0, TOL).unwrap() - 1.0).abs() < 1e-15);
        let mut prev = -1.0;
        for i in 0..=40 {
            let t = i as f64 / 40.0;
            let v = lcm3_cdf_limit(t, TOL).unwrap();
            assert!(v >= prev - 1e-12, "t={t}");
            prev = v;
        }
        assert!(lcm3_cdf_limit(-0.1, TOL).is_err());
    }

    #[test]
    fn triple_cdf_reference_values() {
        let cases = [(0.2, 0.92532), (0.5, 0.990_447_538_1), (0.8, 0.999_550_396_9)];
        for (t, v) in cases {
            assert!((lcm3_cdf_limit(t, TOL).unwrap() - v).abs() < 1e-5, "t={t}");
        }
        let b = lcm_r_cdf_bounds(3, 0.2, TOL).unwrap();
        let v = lcm3_cdf_limit(0.2, TOL).unwrap();
        assert!(b.strictly_contains(v));
    }

    #[test]
    fn triple_cdf_resource_guard() {
        assert!(matches!(lcm3_cdf_limit(1e-8, TOL), Err(Error::Resource { .. })));
    }

    #[test]
    fn triple_moments() {
        for q in 1..=3 {
            let v = lcm3_moment_limit(q, TOL).unwrap();
            let b = lcm_r_moment_bounds(3, q, TOL).unwrap();
            assert!(b.contains(v), "q={q}");
            let qf = (q + 1) as f64;
            let t3 = coprimality_constant(3, TOL).unwrap();
            let j = v / (t3 * z((2 * q + 3) as f64) / (qf * qf * qf));
            assert!((j - j_series((q + 2) as f64, TOL).unwrap()).abs() < 1e-7);
        }
        assert!((lcm3_moment_limit(1, TOL).unwrap() - 0.055_468_2).abs() < 1e-6);
    }

    #[test]
    fn lcm_over_product_laws() {
        assert_eq!(lcm_over_product_cdf(2, 1.0, TOL).unwrap(), LawValue::Exact(1.0));
        let v = lcm_over_product_cdf(2, 0.4, TOL).unwrap().exact().unwrap();
        assert!((v - 0.240_09).abs() < 1e-5);
        let v = lcm_over_product_cdf(3, 1.0, TOL).unwrap().exact().unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(matches!(lcm_over_product_cdf(4, 0.3, TOL).unwrap(), LawValue::Bounds(_)));

        let m = lcm_over_product_moment(2, 1, TOL).unwrap().exact().unwrap();
        assert!((m - 0.730_763).abs() < 1e-6);
        for q in 1..=3 {
            let m3 = lcm_over_product_moment(3, q, TOL).unwrap().exact().unwrap();
            let qf = (q + 1) as f64;
            assert!((m3 - qf * qf * qf * lcm3_moment_limit(q, TOL).unwrap()).abs() < 1e-8);
        }
        let b = lcm_over_product_moment(4, 1, TOL).unwrap().bounds();
        let t4 = coprimality_constant(4, TOL).unwrap();
        assert!((b.lower / b.upper - t4 * z(4.0)).abs() < 1e-8);
    }

    #[test]
    fn log_lcm_limits() {
        assert!((log_lcm_mean_limit(2, TOL).unwrap() + 0.569_961).abs() < 1e-6);
        let expect = -1.545_060_297_125_321;
        assert!((log_lcm_mean_limit(3, TOL).unwrap() - expect).abs() < 1e-8);
    }
}
