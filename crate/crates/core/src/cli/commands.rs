use super::format::{cell, fmt_g, parse_f64_list, parse_u64_list, Table};
use super::{
    CompareArgs, CompareStat, Failure, LawArgs, LawStat, Output, SimStat, SimulateArgs, WaitKind, WaitingArgs,
};
use crate::analytic::{
    fitted_pair_gcd_intercept, gcd_limit_mass, gcd_moment_asymptotic, lcm3_cdf_limit, lcm3_moment_limit, lcm_over_product_cdf,
    lcm_over_product_moment, lcm_pair_cdf_limit, lcm_pair_moment_limit, lcm_r_cdf_bounds, lcm_r_moment_bounds,
    log_lcm_mean_limit, BoundPair, GcdMomentRegime, LawSpec, LawValue, Statistic, Tolerance,
};
use crate::arith::ln_factorial;
use crate::enumeration::{gcd_exact_distribution, lcm_exact_cdf_grid, lcm_exact_moment, log_lcm_exact_mean};
use crate::montecarlo::{
    sample_statistic, simulate_gcd_waiting, simulate_lcm_waiting, Estimate, Functional, SampledStatistic,
    SamplerConfig,
};
use crate::waiting::{gcd_wait_mean, gcd_wait_mean_limit, lcm_wait_mean_asymptotic, lcm_wait_mean_bounds, lcm_wait_mean_exact};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

const PAIR_FIT_SIZES: [u64; 4] = [1000, 2000, 4000, 8000];

type CmdResult = std::result::Result<Output, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn u64s(flag: &str, v: &Option<String>, default: Option<&str>) -> std::result::Result<Vec<u64>, Failure> {
    match v.as_deref().or(default) {
        Some(s) => parse_u64_list(s).map_err(|e| usage(format!("--{flag}: {e}"))),
        None => Err(usage(format!("--{flag} is required"))),
    }
}

fn u32s(flag: &str, v: &Option<String>) -> std::result::Result<Vec<u32>, Failure> {
    u64s(flag, v, Some("1"))?
        .into_iter()
        .map(|q| u32::try_from(q).map_err(|_| usage(format!("--{flag}: {q} is too large"))))
        .collect()
}

fn ts(t: &Option<String>, grid: &Option<String>) -> std::result::Result<Vec<f64>, Failure> {
    match (t, grid) {
        (Some(s), _) | (None, Some(s)) => parse_f64_list(s).map_err(|e| usage(format!("t values: {e}"))),
        (None, None) => Err(usage("one of --t or --t-grid is required")),
    }
}

fn ratio(v: &BigRational, scale: &BigInt) -> f64 {
    (v / BigRational::from_integer(scale.clone())).to_f64().unwrap_or(f64::NAN)
}

pub(super) fn law(a: &LawArgs, tol: Tolerance) -> CmdResult {
    let r = a.r;
    let exact_col = r <= 3;
    match a.stat {
        LawStat::GcdMass => {
            let mut t = Table::new(&["k", "mass"]);
            for k in u64s("k", &a.k, None)? {
                t.row([k.to_string(), fmt_g(gcd_limit_mass(r, k, tol)?)]);
            }
            Ok(Output::new(t))
        }
        LawStat::GcdMoment => {
            let mut t = Table::new(&["q", "n", "regime", "value"]);
            let n = a.n.unwrap_or(0);
            for q in u32s("q", &a.q)? {
                let v = gcd_moment_asymptotic(r, q, n, tol)?;
                let regime = match v.regime {
                    GcdMomentRegime::Convergent => "convergent",
                    GcdMomentRegime::Logarithmic => "logarithmic",
                    GcdMomentRegime::Power => "power",
                };
                t.row([q.to_string(), n.to_string(), regime.into(), fmt_g(v.value)]);
            }
            let mut o = Output::new(t);
            if r == 2 && u32s("q", &a.q)?.contains(&1) {
                let c = fitted_pair_gcd_intercept(&PAIR_FIT_SIZES)?;
                o.notes.push(format!(
                    "fitted intercept (empirical, not derived) for q = 1: E(gcd) - ln(n)/zeta(2) ~ {} over n = 1000..8000",
                    fmt_g(c)
                ));
            }
            Ok(o)
        }
        LawStat::LcmCdf | LawStat::LcmOverProductCdf => {
            let mut head = vec!["t", "lower", "upper"];
            if exact_col {
                head.push("exact");
            }
            let mut t = Table::new(&head);
            for x in ts(&a.t, &a.t_grid)? {
                let (b, exact) = if a.stat == LawStat::LcmCdf {
                    let v = LawSpec::new(Statistic::LcmCdf, r).with_t(x).evaluate(tol)?;
                    (lcm_r_cdf_bounds(r, x, tol)?, v.exact())
                } else {
                    let v = lcm_over_product_cdf(r, x, tol)?;
                    (v.bounds(), v.exact())
                };
                let mut row = vec![fmt_g(x), fmt_g(b.lower), fmt_g(b.upper)];
                if exact_col {
                    row.push(cell(exact));
                }
                t.row(row);
            }
            Ok(Output::new(t))
        }
        LawStat::LcmMoment | LawStat::LcmOverProductMoment => {
            let mut head = vec!["q", "lower", "upper"];
            if exact_col {
                head.push("exact");
            }
            let mut t = Table::new(&head);
            for q in u32s("q", &a.q)? {
                let (b, exact) = if a.stat == LawStat::LcmMoment {
                    let v = LawSpec::new(Statistic::LcmMoment, r).with_q(q).evaluate(tol)?;
                    (lcm_r_moment_bounds(r, q, tol)?, v.exact())
                } else {
                    let v = lcm_over_product_moment(r, q, tol)?;
                    (v.bounds(), v.exact())
                };
                let mut row = vec![q.to_string(), fmt_g(b.lower), fmt_g(b.upper)];
                if exact_col {
                    row.push(cell(exact));
                }
                t.row(row);
            }
            Ok(Output::new(t))
        }
        LawStat::LogLcmMean => {
            let mut t = Table::new(&["r", "value"]);
            t.row([r.to_string(), fmt_g(log_lcm_mean_limit(r, tol)?)]);
            Ok(Output::new(t))
        }
    }
}

struct Row {
    param: String,
    theory: f64,
    exact: f64,
    sim: Option<Estimate>,
}

pub(super) fn compare(a: &CompareArgs, tol: Tolerance, workers: usize) -> CmdResult {
    if !(a.tol >= 0.0) {
        return Err(usage("--tol must be >= 0"));
    }
    let n = a.n;
    let sampler = |r: u32| -> std::result::Result<Option<SamplerConfig>, Failure> {
        match a.samples {
            Some(s) => Ok(Some(SamplerConfig::new(n, r, s, a.seed)?.with_workers(workers)?)),
            None => Ok(None),
        }
    };
    let sample = |cfg: &Option<SamplerConfig>, stat, f| -> std::result::Result<Option<Estimate>, Failure> {
        match cfg {
            Some(c) => Ok(Some(sample_statistic(c, stat, f, false)?.estimate)),
            None => Ok(None),
        }
    };
    let mut rows = Vec::new();
    let (param, relative) = match a.stat {
        CompareStat::GcdMass => {
            let dist = gcd_exact_distribution(a.r, n)?;
            let cfg = sampler(a.r)?;
            for k in u64s("k", &a.k, None)? {
                rows.push(Row {
                    param: k.to_string(),
                    theory: gcd_limit_mass(a.r, k, tol)?,
                    exact: dist.mass(k as u128),
                    sim: sample(&cfg, SampledStatistic::Gcd, Functional::Equals(k as f64))?,
                });
            }
            ("k", false)
        }
        CompareStat::LcmCdf | CompareStat::Lcm3Cdf => {
            let r = if a.stat == CompareStat::Lcm3Cdf { 3 } else { a.r };
            if !(2..=3).contains(&r) {
                return Err(usage(format!("exact lcm CDF limit exists for r = 2, 3 only, got r={r}")));
            }
            let grid = ts(&a.t, &a.t_grid)?;
            let exact = lcm_exact_cdf_grid(r, n, &grid)?;
            let cfg = sampler(r)?;
            for (&t, &e) in grid.iter().zip(&exact) {
                let theory = if r == 2 { lcm_pair_cdf_limit(t)? } else { lcm3_cdf_limit(t, tol)? };
                rows.push(Row {
                    param: fmt_g(t),
                    theory,
                    exact: e,
                    sim: sample(&cfg, SampledStatistic::LcmScaled, Functional::AtMost(t))?,
                });
            }
            ("t", false)
        }
        CompareStat::LcmMoment => {
            if !(2..=3).contains(&a.r) {
                return Err(usage(format!("exact lcm moment limit exists for r = 2, 3 only, got r={}", a.r)));
            }
            let cfg = sampler(a.r)?;
            for q in u32s("q", &a.q)? {
                let scale = BigInt::from(n).pow(a.r * q);
                let theory = if a.r == 2 { lcm_pair_moment_limit(q, tol)? } else { lcm3_moment_limit(q, tol)? };
                rows.push(Row {
                    param: q.to_string(),
                    theory,
                    exact: ratio(&lcm_exact_moment(a.r, n, q)?, &scale),
                    sim: sample(&cfg, SampledStatistic::LcmScaled, Functional::Power(q as f64))?,
                });
            }
            ("q", false)
        }
        CompareStat::LogLcmMean => {
            let centered = log_lcm_exact_mean(a.r, n)? - a.r as f64 / n as f64 * ln_factorial(n);
            let cfg = sampler(a.r)?;
            rows.push(Row {
                param: a.r.to_string(),
                theory: log_lcm_mean_limit(a.r, tol)?,
                exact: centered,
                sim: sample(&cfg, SampledStatistic::LogLcmCentered, Functional::Power(1.0))?,
            });
            ("r", false)
        }
        CompareStat::WaitGcdMean => {
            let sim = match a.samples {
                Some(s) => Some(simulate_gcd_waiting(n, s, a.seed, workers)?.mean),
                None => None,
            };
            rows.push(Row {
                param: n.to_string(),
                theory: gcd_wait_mean_limit(tol)?.zeta_side,
                exact: gcd_wait_mean(n)?,
                sim,
            });
            ("n", false)
        }
        CompareStat::WaitLcmMean => {
            let sim = match a.samples {
                Some(s) => Some(simulate_lcm_waiting(n, s, a.seed, workers)?),
                None => None,
            };
            rows.push(Row {
                param: n.to_string(),
                theory: lcm_wait_mean_asymptotic(n)?,
                exact: lcm_wait_mean_exact(n, Tolerance::EXPECTATION)?,
                sim,
            });
            ("n", true)
        }
    };

    let mut t = Table::new(&[param, "theory", "exact", "simulated", "stderr", "abs_dev", "rel_dev", "pass"]);
    let mut passed = true;
    for row in &rows {
        let abs = (row.exact - row.theory).abs();
        let rel = abs / row.theory.abs();
        let ok = if relative { rel <= a.tol } else { abs <= a.tol };
        passed &= ok;
        t.row([
            row.param.clone(),
            fmt_g(row.theory),
            fmt_g(row.exact),
            cell(row.sim.map(|s| s.value)),
            cell(row.sim.map(|s| s.stderr)),
            fmt_g(abs),
            fmt_g(rel),
            if ok { "pass" } else { "fail" }.to_string(),
        ]);
    }
    let mut out = Output::new(t);
    out.passed = passed;
    out.tol = Some(a.tol);
    out.seed = a.samples.map(|_| a.seed);
    out.notes.push(format!(
        "deviation: |exact - theory|{}",
        if relative { " / |theory|" } else { "" }
    ));
    Ok(out)
}

pub(super) fn waiting(a: &WaitingArgs, tol: Tolerance, workers: usize) -> CmdResult {
    let ns = match (a.n, &a.n_grid) {
        (Some(n), _) => vec![n],
        (None, Some(g)) => parse_u64_list(g).map_err(|e| usage(format!("--n-grid: {e}")))?,
        (None, None) => return Err(usage("one of --n or --n-grid is required")),
    };
    let mut exacts = Vec::with_capacity(ns.len());
    let mut t = match a.kind {
        WaitKind::Gcd => Table::new(&["n", "exact", "limit", "simulated", "stderr"]),
        WaitKind::Lcm => Table::new(&["n", "exact", "lower", "upper", "asymptotic", "simulated", "stderr"]),
    };
    let limit = match a.kind {
        WaitKind::Gcd => Some(gcd_wait_mean_limit(tol)?.zeta_side),
        WaitKind::Lcm => None,
    };
    for &n in &ns {
        match a.kind {
            WaitKind::Gcd => {
                let exact = gcd_wait_mean(n)?;
                let sim = match a.trials {
                    Some(tr) => Some(simulate_gcd_waiting(n, tr, a.seed, workers)?.mean),
                    None => None,
                };
                exacts.push(exact);
                t.row([
                    n.to_string(),
                    fmt_g(exact),
                    cell(limit),
                    cell(sim.map(|s| s.value)),
                    cell(sim.map(|s| s.stderr)),
                ]);
            }
            WaitKind::Lcm => {
                let exact = lcm_wait_mean_exact(n, tol)?;
                let b: BoundPair = lcm_wait_mean_bounds(n)?;
                let asym = if n >= 16 { Some(lcm_wait_mean_asymptotic(n)?) } else { None };
                let sim = match a.trials {
                    Some(tr) => Some(simulate_lcm_waiting(n, tr, a.seed, workers)?),
                    None => None,
                };
                exacts.push(exact);
                t.row([
                    n.to_string(),
                    fmt_g(exact),
                    fmt_g(b.lower),
                    fmt_g(b.upper),
                    cell(asym),
                    cell(sim.map(|s| s.value)),
                    cell(sim.map(|s| s.stderr)),
                ]);
            }
        }
    }
    let mut out = Output::new(t);
    out.seed = a.trials.map(|_| a.seed);
    let drops: Vec<String> = ns
        .windows(2)
        .zip(exacts.windows(2))
        .filter(|(n, e)| n[1] > n[0] && e[1] < e[0])
        .map(|(n, _)| n[1].to_string())
        .collect();
    if !drops.is_empty() {
        out.notes.push(format!("exact mean decreases at n = {}", drops.join(" ")));
    }
    Ok(out)
}

pub(super) fn simulate(a: &SimulateArgs, tol: Tolerance, workers: usize) -> CmdResult {
    let cfg = SamplerConfig::new(a.n, a.r, a.samples, a.seed)?.with_workers(workers)?;
    let (functional, label, param) = match (a.q, a.t, a.k) {
        (_, _, Some(k)) => {
            if a.stat != SimStat::Gcd {
                return Err(usage("--k applies to --stat gcd only"));
            }
            (Functional::Equals(k as f64), "equals", k.to_string())
        }
        (_, Some(t), _) => (Functional::AtMost(t), "at_most", fmt_g(t)),
        (q, None, None) => {
            let q = q.unwrap_or(1);
            if q == 0 {
                return Err(usage("--q must be >= 1"));
            }
            (Functional::Power(q as f64), "moment", q.to_string())
        }
    };
    let statistic = match a.stat {
        SimStat::Gcd => SampledStatistic::Gcd,
        SimStat::Lcm => SampledStatistic::LcmScaled,
        SimStat::LcmOverProduct => SampledStatistic::LcmOverProduct,
        SimStat::LogLcm => SampledStatistic::LogLcmCentered,
    };
    let est = sample_statistic(&cfg, statistic, functional, false)?.estimate;
    let (bounds, exact) = simulate_theory(a, functional, tol)?;
    let name = match a.stat {
        SimStat::Gcd => "gcd",
        SimStat::Lcm => "lcm/n^r",
        SimStat::LcmOverProduct => "lcm/product",
        SimStat::LogLcm => "ln lcm - (r/n) ln n!",
    };
    let mut t = Table::new(&[
        "statistic",
        "r",
        "n",
        "functional",
        "parameter",
        "estimate",
        "stderr",
        "samples",
        "theory_lower",
        "theory_upper",
        "theory_exact",
    ]);
    t.row([
        name.to_string(),
        a.r.to_string(),
        a.n.to_string(),
        label.to_string(),
        param,
        fmt_g(est.value),
        fmt_g(est.stderr),
        est.samples.to_string(),
        cell(bounds.map(|b| b.lower)),
        cell(bounds.map(|b| b.upper)),
        cell(exact),
    ]);
    let mut out = Output::new(t);
    out.seed = Some(a.seed);
    Ok(out)
}

/// Limit law matching a simulated quantity, when one is available: general
/// bounds and the exact value.
fn simulate_theory(
    a: &SimulateArgs,
    f: Functional,
    tol: Tolerance,
) -> std::result::Result<(Option<BoundPair>, Option<f64>), Failure> {
    let r = a.r;
    if r < 2 {
        return Ok((None, None));
    }
    Ok(match (a.stat, f) {
        (SimStat::Gcd, Functional::Equals(k)) => (None, Some(gcd_limit_mass(r, k as u64, tol)?)),
        (SimStat::Gcd, Functional::Power(q)) => {
            let v = gcd_moment_asymptotic(r, q as u32, a.n.max(2), tol)?;
            (None, (v.regime == GcdMomentRegime::Convergent).then_some(v.value))
        }
        (SimStat::Lcm, Functional::Power(q)) => (
            Some(lcm_r_moment_bounds(r, q as u32, tol)?),
            LawSpec::new(Statistic::LcmMoment, r).with_q(q as u32).evaluate(tol)?.exact(),
        ),
        (SimStat::Lcm, Functional::AtMost(t)) if t > 0.0 => (
            Some(lcm_r_cdf_bounds(r, t, tol)?),
            LawSpec::new(Statistic::LcmCdf, r).with_t(t).evaluate(tol)?.exact(),
        ),
        (SimStat::LcmOverProduct, Functional::Power(q)) => split(lcm_over_product_moment(r, q as u32, tol)?),
        (SimStat::LcmOverProduct, Functional::AtMost(t)) if t > 0.0 => split(lcm_over_product_cdf(r, t, tol)?),
        (SimStat::LogLcm, Functional::Power(1.0)) => (None, Some(log_lcm_mean_limit(r, tol)?)),
        _ => (None, None),
    })
}

fn split(v: LawValue) -> (Option<BoundPair>, Option<f64>) {
    match v {
        LawValue::Exact(x) => (None, Some(x)),
        LawValue::Bounds(b) => (Some(b), None),
    }
}
