//! C ABI for `gk-secrecy`.
//!
//! Scenarios live behind an opaque [`GkScenario`] handle created with
//! [`gk_scenario_new`] and released with [`gk_scenario_free`]. Every fallible
//! call returns a [`GkStatus`]; on failure a message is kept per thread and can
//! be read back with [`gk_last_error_message`]. Output pointers are only written
//! on success. No function panics across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gk_secrecy::gk_model::gk_cdf as core_gk_cdf;
use gk_secrecy::montecarlo::{sop_mc, McConfig};
use gk_secrecy::sop::{asop, sop_approx, sop_exact};
use gk_secrecy::{Error, GkParams, SecrecyScenario, SopEstimate};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    /// The requested formula does not apply to these shapes.
    Regime = 4,
    UnsupportedShape = 5,
    NonConvergence = 6,
    Overflow = 7,
    Underflow = 8,
    /// A Rust panic was caught at the boundary.
    Internal = 9,
}

/// Method that produced an estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GkMethod {
    Approx = 0,
    Rayleigh = 1,
    Nakagami = 2,
    Exact = 3,
    AsymptoticDistinct = 4,
    AsymptoticEqual = 5,
    AsymptoticK1M1 = 6,
    MonteCarlo = 7,
}

/// Opaque secrecy scenario: main link, eavesdropper link and target rate.
pub struct GkScenario {
    inner: SecrecyScenario,
}

/// Analytic SOP estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GkEstimate {
    /// Probability clamped to [0, 1].
    pub value: f64,
    /// Value before clamping.
    pub raw_value: f64,
    /// Variance of the eavesdropper SNR.
    pub sigma_e_sq: f64,
    pub method: GkMethod,
    /// Non-zero when the estimate is outside its validity range.
    pub validity_warning: i32,
}

/// Monte-Carlo SOP estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GkMcResult {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub mean_gamma_d: f64,
    pub mean_gamma_e: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GkStatus {
    match e {
        Error::Domain { .. } => GkStatus::Domain,
        Error::InvalidParameter { .. } => GkStatus::InvalidParameter,
        Error::UnsupportedShape(_) | Error::LargeShape { .. } => GkStatus::UnsupportedShape,
        Error::Regime(_) => GkStatus::Regime,
        Error::NonConvergence { .. } => GkStatus::NonConvergence,
        Error::Overflow { .. } => GkStatus::Overflow,
        Error::Underflow { .. } => GkStatus::Underflow,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), GkStatus>>(f: F) -> GkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GkStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_last_error("internal error (panic caught at the C boundary)");
            GkStatus::Internal
        }
    }
}

fn check<T>(r: gk_secrecy::Result<T>) -> Result<T, GkStatus> {
    r.map_err(|e| {
        set_last_error(&e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> GkStatus {
    set_last_error(&format!("{what} is NULL"));
    GkStatus::NullPointer
}

fn method_of(e: &SopEstimate) -> GkMethod {
    use gk_secrecy::SopMethod as M;
    match e.method {
        M::Approx => GkMethod::Approx,
        M::RayleighClosed => GkMethod::Rayleigh,
        M::NakagamiClosed => GkMethod::Nakagami,
        M::ExactQuadrature => GkMethod::Exact,
        M::AsymptoticDistinct => GkMethod::AsymptoticDistinct,
        M::AsymptoticEqual => GkMethod::AsymptoticEqual,
        M::AsymptoticK1M1 => GkMethod::AsymptoticK1M1,
        M::MonteCarlo => GkMethod::MonteCarlo,
    }
}

fn to_c(e: &SopEstimate) -> GkEstimate {
    GkEstimate {
        value: e.value,
        raw_value: e.raw_value,
        sigma_e_sq: e.sigma_e_sq,
        method: method_of(e),
        validity_warning: e.validity_warning as i32,
    }
}

/// Creates a scenario. Mean SNRs are linear (not dB); `rs` is in bits/s/Hz.
///
/// # Safety
/// `out` must be NULL or valid for writing one pointer. The handle written
/// there must be released with [`gk_scenario_free`].
#[no_mangle]
pub unsafe extern "C" fn gk_scenario_new(
    kd: f64,
    md: f64,
    snr_d: f64,
    ke: f64,
    me: f64,
    snr_e: f64,
    rs: f64,
    out: *mut *mut GkScenario,
) -> GkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let main = check(GkParams::new(kd, md, snr_d))?;
        let eve = check(GkParams::new(ke, me, snr_e))?;
        let inner = check(SecrecyScenario::new(main, eve, rs))?;
        // SAFETY: `out` is non-null and valid for writes per the contract.
        unsafe { *out = Box::into_raw(Box::new(GkScenario { inner })) };
        Ok(())
    })
}

/// Releases a scenario. NULL is accepted.
///
/// # Safety
/// `s` must be NULL or a handle from [`gk_scenario_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gk_scenario_free(s: *mut GkScenario) {
    if !s.is_null() {
        // SAFETY: ownership is returned from `gk_scenario_new`.
        drop(unsafe { Box::from_raw(s) });
    }
}

unsafe fn estimate_with(
    s: *const GkScenario,
    out: *mut GkEstimate,
    f: fn(&SecrecyScenario) -> gk_secrecy::Result<SopEstimate>,
) -> GkStatus {
    guard(|| {
        if s.is_null() {
            return Err(null("scenario"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: both pointers are non-null and valid per the caller's contract.
        let est = check(f(unsafe { &(*s).inner }))?;
        unsafe { *out = to_c(&est) };
        Ok(())
    })
}

/// Closed-form second-order approximation (Rayleigh/Nakagami forms when both links reduce).
///
/// # Safety
/// `s` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gk_sop_approx(s: *const GkScenario, out: *mut GkEstimate) -> GkStatus {
    unsafe { estimate_with(s, out, sop_approx) }
}

/// SOP by adaptive quadrature.
///
/// # Safety
/// `s` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gk_sop_exact(s: *const GkScenario, out: *mut GkEstimate) -> GkStatus {
    unsafe { estimate_with(s, out, sop_exact) }
}

/// High-SNR asymptote for the main-link shapes of the scenario.
///
/// # Safety
/// `s` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gk_sop_asymptotic(s: *const GkScenario, out: *mut GkEstimate) -> GkStatus {
    unsafe { estimate_with(s, out, asop) }
}

/// Monte-Carlo estimate; `workers = 0` uses all available cores.
/// Results depend only on `samples` and `seed`.
///
/// # Safety
/// `s` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gk_sop_mc(
    s: *const GkScenario,
    samples: u64,
    seed: u64,
    workers: u32,
    out: *mut GkMcResult,
) -> GkStatus {
    guard(|| {
        if s.is_null() {
            return Err(null("scenario"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let workers = match workers {
            0 => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            w => w as usize,
        };
        let cfg = check(McConfig::new(samples, seed, workers))?;
        // SAFETY: pointers checked above; validity is the caller's contract.
        let r = check(sop_mc(unsafe { &(*s).inner }, &cfg))?;
        unsafe {
            *out = GkMcResult {
                estimate: r.estimate,
                std_error: r.stderr,
                samples: r.samples,
                seed: r.seed,
                mean_gamma_d: r.mean_gamma_d,
                mean_gamma_e: r.mean_gamma_e,
            }
        };
        Ok(())
    })
}

/// CDF of a generalized-K SNR with shapes `k`, `m` and linear mean `mean_snr`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gk_cdf(k: f64, m: f64, mean_snr: f64, gamma: f64, out: *mut f64) -> GkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = check(GkParams::new(k, m, mean_snr))?;
        let v = check(core_gk_cdf(&p, gamma))?;
        unsafe { *out = v };
        Ok(())
    })
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
