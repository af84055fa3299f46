//! C ABI over the `gcdlcm` library.
//!
//! Every function returns a [`GcdlcmStatus`] and writes results through
//! out-pointers, which are left untouched on failure. The message of the
//! last failure on the calling thread is available from
//! [`gcdlcm_last_error_message`]. Panics are caught at the boundary and
//! reported as [`GcdlcmStatus::Panic`].

#![allow(clippy::missing_safety_doc)]

use gcdlcm::analytic::{self, LawSpec, LawValue, Statistic, Tolerance};
use gcdlcm::arith::PrimeTable;
use gcdlcm::montecarlo::{self, Functional, SampledStatistic, SamplerConfig};
use gcdlcm::waiting::{self, CouponStructure};
use gcdlcm::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcdlcmStatus {
    Ok = 0,
    InvalidArgument = 1,
    Domain = 2,
    Range = 3,
    Resource = 4,
    Numeric = 5,
    Consistency = 6,
    NullPointer = 7,
    Panic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GcdlcmStatus {
    match e {
        Error::InvalidArgument(_) => GcdlcmStatus::InvalidArgument,
        Error::Domain(_) => GcdlcmStatus::Domain,
        Error::Range(_) => GcdlcmStatus::Range,
        Error::Resource { .. } => GcdlcmStatus::Resource,
        Error::Numeric(_) => GcdlcmStatus::Numeric,
        Error::Consistency { .. } => GcdlcmStatus::Consistency,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard<F>(f: F) -> GcdlcmStatus
where
    F: FnOnce() -> Result<(), StatusError>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GcdlcmStatus::Ok,
        Ok(Err(StatusError(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            GcdlcmStatus::Panic
        }
    }
}

struct StatusError(GcdlcmStatus, String);

impl From<Error> for StatusError {
    fn from(e: Error) -> Self {
        StatusError(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> StatusError {
    StatusError(GcdlcmStatus::NullPointer, format!("{what} is null"))
}

fn tolerance(eps: f64) -> Result<Tolerance, StatusError> {
    Ok(Tolerance::new(eps)?)
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), StatusError> {
    if out.is_null() {
        return Err(null(what));
    }
    unsafe { out.write(v) };
    Ok(())
}

fn check_out<T>(out: *mut T, what: &str) -> Result<(), StatusError> {
    if out.is_null() {
        Err(null(what))
    } else {
        Ok(())
    }
}

/// Message of the last failure on this thread, or null if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gcdlcm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Clears the last failure message on this thread.
#[no_mangle]
pub extern "C" fn gcdlcm_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gcdlcm_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// `ζ(s)` for `s > 1`.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_zeta(s: f64, eps: f64, out: *mut f64) -> GcdlcmStatus {
    guard(|| {
        check_out(out, "out")?;
        let v = analytic::zeta(s, tolerance(eps)?)?;
        unsafe { write(out, v, "out") }
    })
}

/// Density of pairwise coprime r-tuples.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_coprimality_constant(r: u32, eps: f64, out: *mut f64) -> GcdlcmStatus {
    guard(|| {
        check_out(out, "out")?;
        let v = analytic::coprimality_constant(r, tolerance(eps)?)?;
        unsafe { write(out, v, "out") }
    })
}

/// Statistic selector for [`gcdlcm_law`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcdlcmStatistic {
    GcdMass = 0,
    GcdMoment = 1,
    LcmCdf = 2,
    LcmMoment = 3,
    LcmOverProductCdf = 4,
    LcmOverProductMoment = 5,
    LogLcmMean = 6,
}

impl From<GcdlcmStatistic> for Statistic {
    fn from(s: GcdlcmStatistic) -> Self {
        match s {
            GcdlcmStatistic::GcdMass => Statistic::GcdMass,
            GcdlcmStatistic::GcdMoment => Statistic::GcdMoment,
            GcdlcmStatistic::LcmCdf => Statistic::LcmCdf,
            GcdlcmStatistic::LcmMoment => Statistic::LcmMoment,
            GcdlcmStatistic::LcmOverProductCdf => Statistic::LcmOverProductCdf,
            GcdlcmStatistic::LcmOverProductMoment => Statistic::LcmOverProductMoment,
            GcdlcmStatistic::LogLcmMean => Statistic::LogLcmMean,
        }
    }
}

/// Law parameters; fields not used by the statistic are ignored.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcdlcmLawQuery {
    pub statistic: GcdlcmStatistic,
    pub r: u32,
    pub k: u64,
    pub t: f64,
    pub q: u32,
    pub n: u64,
    pub eps: f64,
}

/// Evaluated law: `lower == upper == exact` when `has_exact` is set.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcdlcmLaw {
    pub lower: f64,
    pub upper: f64,
    pub exact: f64,
    pub has_exact: bool,
}

#[no_mangle]
pub unsafe extern "C" fn gcdlcm_law(query: *const GcdlcmLawQuery, out: *mut GcdlcmLaw) -> GcdlcmStatus {
    guard(|| {
        if query.is_null() {
            return Err(null("query"));
        }
        check_out(out, "out")?;
        let q = unsafe { *query };
        let spec = LawSpec::new(q.statistic.into(), q.r)
            .with_k(q.k)
            .with_t(q.t)
            .with_q(q.q)
            .with_n(q.n);
        let v = spec.evaluate(tolerance(q.eps)?)?;
        let b = v.bounds();
        let law = GcdlcmLaw {
            lower: b.lower,
            upper: b.upper,
            exact: v.exact().unwrap_or(f64::NAN),
            has_exact: matches!(v, LawValue::Exact(_)),
        };
        unsafe { write(out, law, "out") }
    })
}

/// `P(T_n > m)` for the gcd waiting time.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_gcd_wait_tail(n: u64, m: u32, out: *mut f64) -> GcdlcmStatus {
    guard(|| {
        check_out(out, "out")?;
        let v = waiting::gcd_wait_tail(n, m)?;
        unsafe { write(out, v, "out") }
    })
}

/// `E(T_n)` for the gcd waiting time.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_gcd_wait_mean(n: u64, out: *mut f64) -> GcdlcmStatus {
    guard(|| {
        check_out(out, "out")?;
        let v = waiting::gcd_wait_mean(n)?;
        unsafe { write(out, v, "out") }
    })
}

/// Limit of the gcd waiting-time mean through ζ values and through a
/// Möbius sum with `cutoff` terms.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_gcd_wait_mean_limit(
    eps: f64,
    cutoff: u64,
    zeta_side: *mut f64,
    mobius_side: *mut f64,
) -> GcdlcmStatus {
    guard(|| {
        check_out(zeta_side, "zeta_side")?;
        check_out(mobius_side, "mobius_side")?;
        let l = waiting::gcd_wait_mean_limit_with(tolerance(eps)?, cutoff)?;
        unsafe {
            write(zeta_side, l.zeta_side, "zeta_side")?;
            write(mobius_side, l.mobius_side, "mobius_side")
        }
    })
}

/// `E(T_n)` for the lcm waiting time, by quadrature.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_lcm_wait_mean(n: u64, eps: f64, out: *mut f64) -> GcdlcmStatus {
    guard(|| {
        check_out(out, "out")?;
        let v = waiting::lcm_wait_mean_exact(n, tolerance(eps)?)?;
        unsafe { write(out, v, "out") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn gcdlcm_lcm_wait_mean_bounds(n: u64, lower: *mut f64, upper: *mut f64) -> GcdlcmStatus {
    guard(|| {
        check_out(lower, "lower")?;
        check_out(upper, "upper")?;
        let b = waiting::lcm_wait_mean_bounds(n)?;
        unsafe {
            write(lower, b.lower, "lower")?;
            write(upper, b.upper, "upper")
        }
    })
}

/// Monte Carlo estimate with its standard error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcdlcmEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl From<montecarlo::Estimate> for GcdlcmEstimate {
    fn from(e: montecarlo::Estimate) -> Self {
        GcdlcmEstimate {
            value: e.value,
            stderr: e.stderr,
            samples: e.samples,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcdlcmSampled {
    Gcd = 0,
    LcmScaled = 1,
    LcmOverProduct = 2,
    LogLcmCentered = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcdlcmFunctional {
    /// Mean of `X^param`.
    Power = 0,
    /// Frequency of `X ≤ param`.
    AtMost = 1,
    /// Frequency of `X = param`.
    Equals = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcdlcmSamplerConfig {
    pub n: u64,
    pub r: u32,
    pub samples: u64,
    pub seed: u64,
    pub workers: u32,
}

/// Mean of a functional of a tuple statistic over uniform samples.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_sample_statistic(
    config: *const GcdlcmSamplerConfig,
    statistic: GcdlcmSampled,
    functional: GcdlcmFunctional,
    param: f64,
    out: *mut GcdlcmEstimate,
) -> GcdlcmStatus {
    guard(|| {
        if config.is_null() {
            return Err(null("config"));
        }
        check_out(out, "out")?;
        let c = unsafe { *config };
        let cfg = SamplerConfig::new(c.n, c.r, c.samples, c.seed)?.with_workers(c.workers as usize)?;
        let stat = match statistic {
            GcdlcmSampled::Gcd => SampledStatistic::Gcd,
            GcdlcmSampled::LcmScaled => SampledStatistic::LcmScaled,
            GcdlcmSampled::LcmOverProduct => SampledStatistic::LcmOverProduct,
            GcdlcmSampled::LogLcmCentered => SampledStatistic::LogLcmCentered,
        };
        let f = match functional {
            GcdlcmFunctional::Power => Functional::Power(param),
            GcdlcmFunctional::AtMost => Functional::AtMost(param),
            GcdlcmFunctional::Equals => Functional::Equals(param),
        };
        let s = montecarlo::sample_statistic(&cfg, stat, f, false)?;
        unsafe { write(out, s.estimate.into(), "out") }
    })
}

/// Simulated gcd waiting time; `tail` (may be null) receives `tail_len`
/// estimates of `P(T_n > m)` for `m = 0, 1, …`, at most 21.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_simulate_gcd_waiting(
    n: u64,
    trials: u64,
    seed: u64,
    workers: u32,
    mean: *mut GcdlcmEstimate,
    tail: *mut GcdlcmEstimate,
    tail_len: usize,
) -> GcdlcmStatus {
    guard(|| {
        check_out(mean, "mean")?;
        if tail.is_null() && tail_len > 0 {
            return Err(null("tail"));
        }
        if tail_len > montecarlo::GCD_WAIT_TAIL_MAX + 1 {
            return Err(StatusError(
                GcdlcmStatus::InvalidArgument,
                format!("tail_len must be <= {}", montecarlo::GCD_WAIT_TAIL_MAX + 1),
            ));
        }
        let sim = montecarlo::simulate_gcd_waiting(n, trials, seed, workers as usize)?;
        unsafe {
            for (i, e) in sim.tail.iter().take(tail_len).enumerate() {
                tail.add(i).write((*e).into());
            }
            write(mean, sim.mean.into(), "mean")
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn gcdlcm_simulate_lcm_waiting(
    n: u64,
    trials: u64,
    seed: u64,
    workers: u32,
    out: *mut GcdlcmEstimate,
) -> GcdlcmStatus {
    guard(|| {
        check_out(out, "out")?;
        let e = montecarlo::simulate_lcm_waiting(n, trials, seed, workers as usize)?;
        unsafe { write(out, e.into(), "out") }
    })
}

/// Opaque sieve of primes, smallest prime factors and Möbius values.
pub struct GcdlcmPrimeTable(PrimeTable);

#[no_mangle]
pub unsafe extern "C" fn gcdlcm_prime_table_new(limit: u64, out: *mut *mut GcdlcmPrimeTable) -> GcdlcmStatus {
    guard(|| {
        check_out(out, "out")?;
        let limit = usize::try_from(limit)
            .map_err(|_| StatusError(GcdlcmStatus::Range, format!("limit {limit} exceeds usize")))?;
        let t = Box::new(GcdlcmPrimeTable(PrimeTable::new(limit)?));
        unsafe { write(out, Box::into_raw(t), "out") }
    })
}

/// Frees a table; null is accepted.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_prime_table_free(table: *mut GcdlcmPrimeTable) {
    if !table.is_null() {
        drop(unsafe { Box::from_raw(table) });
    }
}

unsafe fn table_ref<'a>(t: *const GcdlcmPrimeTable) -> Result<&'a PrimeTable, StatusError> {
    if t.is_null() {
        return Err(null("table"));
    }
    Ok(unsafe { &(*t).0 })
}

fn in_table(t: &PrimeTable, m: u64) -> Result<usize, StatusError> {
    if m as u128 > t.limit() as u128 {
        return Err(StatusError(
            GcdlcmStatus::Range,
            format!("{m} exceeds the table limit {}", t.limit()),
        ));
    }
    Ok(m as usize)
}

#[no_mangle]
pub unsafe extern "C" fn gcdlcm_prime_table_limit(table: *const GcdlcmPrimeTable, out: *mut u64) -> GcdlcmStatus {
    guard(|| {
        let t = unsafe { table_ref(table)? };
        unsafe { write(out, t.limit() as u64, "out") }
    })
}

/// `π(x)` for `x` up to the table limit.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_prime_table_prime_count(
    table: *const GcdlcmPrimeTable,
    x: u64,
    out: *mut u64,
) -> GcdlcmStatus {
    guard(|| {
        let t = unsafe { table_ref(table)? };
        let x = in_table(t, x)?;
        unsafe { write(out, t.prime_count(x) as u64, "out") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn gcdlcm_prime_table_mobius(
    table: *const GcdlcmPrimeTable,
    m: u64,
    out: *mut i8,
) -> GcdlcmStatus {
    guard(|| {
        let t = unsafe { table_ref(table)? };
        if m == 0 {
            return Err(StatusError(GcdlcmStatus::Domain, "μ(0) is undefined".into()));
        }
        let m = in_table(t, m)?;
        unsafe { write(out, t.mobius(m), "out") }
    })
}

#[no_mangle]
pub unsafe extern "C" fn gcdlcm_prime_table_is_prime(
    table: *const GcdlcmPrimeTable,
    m: u64,
    out: *mut bool,
) -> GcdlcmStatus {
    guard(|| {
        let t = unsafe { table_ref(table)? };
        let m = in_table(t, m)?;
        unsafe { write(out, t.is_prime(m), "out") }
    })
}

/// Borrowed view of the primes in increasing order, valid while the table
/// lives.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_prime_table_primes(
    table: *const GcdlcmPrimeTable,
    primes: *mut *const u32,
    len: *mut usize,
) -> GcdlcmStatus {
    guard(|| {
        let t = unsafe { table_ref(table)? };
        check_out(primes, "primes")?;
        check_out(len, "len")?;
        unsafe {
            write(primes, t.primes().as_ptr(), "primes")?;
            write(len, t.primes().len(), "len")
        }
    })
}

/// Opaque coupon-class structure of `{1..n}`.
pub struct GcdlcmCouponStructure(CouponStructure);

/// The class of multiples of `p^gamma`, with `beta` members.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GcdlcmPrimeClass {
    pub p: u64,
    pub gamma: u32,
    pub beta: u64,
}

#[no_mangle]
pub unsafe extern "C" fn gcdlcm_coupon_structure_new(
    n: u64,
    out: *mut *mut GcdlcmCouponStructure,
) -> GcdlcmStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = Box::new(GcdlcmCouponStructure(CouponStructure::new(n)?));
        unsafe { write(out, Box::into_raw(s), "out") }
    })
}

/// Frees a structure; null is accepted.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_coupon_structure_free(s: *mut GcdlcmCouponStructure) {
    if !s.is_null() {
        drop(unsafe { Box::from_raw(s) });
    }
}

unsafe fn coupon_ref<'a>(s: *const GcdlcmCouponStructure) -> Result<&'a CouponStructure, StatusError> {
    if s.is_null() {
        return Err(null("structure"));
    }
    Ok(unsafe { &(*s).0 })
}

/// Number of classes, i.e. `π(n)`.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_coupon_structure_class_count(
    s: *const GcdlcmCouponStructure,
    out: *mut u64,
) -> GcdlcmStatus {
    guard(|| {
        let s = unsafe { coupon_ref(s)? };
        unsafe { write(out, s.prime_count(), "out") }
    })
}

/// Class `index` in increasing prime order.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_coupon_structure_class(
    s: *const GcdlcmCouponStructure,
    index: u64,
    out: *mut GcdlcmPrimeClass,
) -> GcdlcmStatus {
    guard(|| {
        let s = unsafe { coupon_ref(s)? };
        let c = s.classes().get(index as usize).ok_or_else(|| {
            StatusError(
                GcdlcmStatus::Range,
                format!("class index {index} out of range (count {})", s.classes().len()),
            )
        })?;
        let v = GcdlcmPrimeClass {
            p: c.p,
            gamma: c.gamma,
            beta: c.beta,
        };
        unsafe { write(out, v, "out") }
    })
}

/// `ω_j(n)`: how many classes have exactly `j` members.
#[no_mangle]
pub unsafe extern "C" fn gcdlcm_coupon_structure_omega(
    s: *const GcdlcmCouponStructure,
    j: u64,
    out: *mut u64,
) -> GcdlcmStatus {
    guard(|| {
        let s = unsafe { coupon_ref(s)? };
        unsafe { write(out, s.omega(j), "out") }
    })
}
