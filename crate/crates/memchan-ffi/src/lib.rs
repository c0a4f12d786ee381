//! C ABI over the capacity library: opaque environment handles, status
//! codes, and scalar outputs through out-pointers. The generated header
//! lands in `include/memchan.h`.
//!
//! Every function returns a [`MemchanStatus`]; on failure the thread-local
//! message retrieved by [`memchan_last_error_message`] carries the detail.

use std::cell::RefCell;
use std::ffi::{c_char, CString};

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use memchan::env::{ClassicalIsingEnv, Environment, MarkovEnv, Rank1MpsEnv};
use memchan::error::Error;
use memchan::rates::{
    entropy_rate_brute, entropy_rate_thermo, entropy_rate_transfer, markov_entropy_rate,
    params_for,
};

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

/// Status codes returned by every `memchan_*` call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemchanStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments failed validation.
    InvalidArgument = 2,
    /// The request exceeds the Hilbert-dimension cap.
    CapExceeded = 3,
    /// The environment is degenerate for the requested quantity.
    Degenerate = 4,
    /// A numeric invariant failed.
    Numeric = 5,
    /// The operation is not defined for this environment kind.
    Unsupported = 6,
}

fn status_of(err: &Error) -> MemchanStatus {
    match err {
        Error::CapExceeded { .. } => MemchanStatus::CapExceeded,
        Error::DegenerateEnvironment(_) | Error::NullState | Error::NoIsingImage => {
            MemchanStatus::Degenerate
        }
        Error::Unsupported(_) => MemchanStatus::Unsupported,
        Error::NotHermitian(_) | Error::NotPositive(_) | Error::BadTrace(_) | Error::NonFinite(_) => {
            MemchanStatus::Numeric
        }
        _ => MemchanStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> MemchanStatus {
    let status = status_of(&err);
    set_last_error(&err.to_string());
    status
}

/// Opaque environment handle.
pub struct MemchanEnv {
    inner: Environment,
}

fn env_out(out: *mut *mut MemchanEnv, env: Environment) -> MemchanStatus {
    if out.is_null() {
        set_last_error("output handle pointer is null");
        return MemchanStatus::NullPointer;
    }
    let boxed = Box::new(MemchanEnv { inner: env });
    unsafe { *out = Box::into_raw(boxed) };
    MemchanStatus::Ok
}

unsafe fn env_ref<'a>(env: *const MemchanEnv) -> Result<&'a Environment, MemchanStatus> {
    if env.is_null() {
        set_last_error("environment handle is null");
        return Err(MemchanStatus::NullPointer);
    }
    Ok(&(*env).inner)
}

fn write_out(out: *mut f64, value: f64) -> MemchanStatus {
    if out.is_null() {
        set_last_error("output pointer is null");
        return MemchanStatus::NullPointer;
    }
    unsafe { *out = value };
    MemchanStatus::Ok
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn memchan_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the last error message into `buf` (truncated to `cap` bytes,
/// always NUL-terminated when `cap > 0`). Returns the full message length.
#[no_mangle]
pub unsafe extern "C" fn memchan_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Ground-state family of the spin chain with a capacity transition at
/// `g = 0`.
#[no_mangle]
pub extern "C" fn memchan_env_wolf(g: f64, out: *mut *mut MemchanEnv) -> MemchanStatus {
    if !g.is_finite() {
        set_last_error("g must be finite");
        return MemchanStatus::InvalidArgument;
    }
    env_out(out, Environment::Wolf { g })
}

/// Classical Ising ring at inverse temperature `beta`.
#[no_mangle]
pub extern "C" fn memchan_env_ising(
    coupling: f64,
    field: f64,
    beta: f64,
    out: *mut *mut MemchanEnv,
) -> MemchanStatus {
    match ClassicalIsingEnv::new(coupling, field, beta) {
        Ok(env) => env_out(out, Environment::Ising(env)),
        Err(e) => fail(e),
    }
}

/// Markov chain from a row-major `states x states` row-stochastic matrix.
/// The stationary distribution is computed internally.
#[no_mangle]
pub unsafe extern "C" fn memchan_env_markov(
    transition: *const f64,
    states: usize,
    out: *mut *mut MemchanEnv,
) -> MemchanStatus {
    if transition.is_null() {
        set_last_error("transition matrix pointer is null");
        return MemchanStatus::NullPointer;
    }
    if states == 0 || states > 64 {
        set_last_error("state count must be in 1..=64");
        return MemchanStatus::InvalidArgument;
    }
    let data = std::slice::from_raw_parts(transition, states * states);
    let p = DMatrix::from_row_slice(states, states, data);
    match MarkovEnv::new(p) {
        Ok(env) => env_out(out, Environment::Markov(env)),
        Err(e) => fail(e),
    }
}

/// Rank-1 MPS environment. Each matrix is 8 doubles: row-major 2x2 with
/// interleaved (re, im) entries.
#[no_mangle]
pub unsafe extern "C" fn memchan_env_mps(
    q0: *const f64,
    q1: *const f64,
    out: *mut *mut MemchanEnv,
) -> MemchanStatus {
    if q0.is_null() || q1.is_null() {
        set_last_error("matrix pointer is null");
        return MemchanStatus::NullPointer;
    }
    let read = |p: *const f64| -> Matrix2<Complex64> {
        let s = std::slice::from_raw_parts(p, 8);
        Matrix2::new(
            Complex64::new(s[0], s[1]),
            Complex64::new(s[2], s[3]),
            Complex64::new(s[4], s[5]),
            Complex64::new(s[6], s[7]),
        )
    };
    match Rank1MpsEnv::new(read(q0), read(q1)) {
        Ok(env) => env_out(out, Environment::Mps(env)),
        Err(e) => fail(e),
    }
}

/// Releases an environment handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn memchan_env_free(env: *mut MemchanEnv) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

/// Transfer-matrix entropy rate (bits/site). Defined for wolf, mps and
/// ising environments.
#[no_mangle]
pub unsafe extern "C" fn memchan_rate_transfer(
    env: *const MemchanEnv,
    rate: *mut f64,
) -> MemchanStatus {
    let environment = match env_ref(env) {
        Ok(e) => e,
        Err(s) => return s,
    };
    match params_for(environment) {
        Ok(params) => write_out(rate, entropy_rate_transfer(&params).rate),
        Err(e) => fail(e),
    }
}

/// Thermodynamic entropy rate (bits/site): ising environments directly,
/// wolf/mps through their Ising image at `beta = 1`.
#[no_mangle]
pub unsafe extern "C" fn memchan_rate_thermo(
    env: *const MemchanEnv,
    rate: *mut f64,
) -> MemchanStatus {
    let environment = match env_ref(env) {
        Ok(e) => e,
        Err(s) => return s,
    };
    let result = match environment {
        Environment::Ising(ising) => entropy_rate_thermo(ising),
        other => params_for(other)
            .and_then(|p| memchan::rates::params_to_ising(&p, 1.0))
            .and_then(|ising| entropy_rate_thermo(&ising)),
    };
    match result {
        Ok(r) => write_out(rate, r.rate),
        Err(e) => fail(e),
    }
}

/// Stationary entropy rate of a markov environment (bits/site).
#[no_mangle]
pub unsafe extern "C" fn memchan_rate_markov(
    env: *const MemchanEnv,
    rate: *mut f64,
) -> MemchanStatus {
    let environment = match env_ref(env) {
        Ok(e) => e,
        Err(s) => return s,
    };
    match environment {
        Environment::Markov(chain) => write_out(rate, markov_entropy_rate(chain).rate),
        _ => {
            set_last_error("markov rate is only defined for markov environments");
            MemchanStatus::Unsupported
        }
    }
}

/// Brute-force entropy rate from dephased diagonals at the given strictly
/// increasing ring sizes (at least 3 of them).
#[no_mangle]
pub unsafe extern "C" fn memchan_rate_brute(
    env: *const MemchanEnv,
    sites: *const usize,
    count: usize,
    rate: *mut f64,
) -> MemchanStatus {
    let environment = match env_ref(env) {
        Ok(e) => e,
        Err(s) => return s,
    };
    if sites.is_null() {
        set_last_error("sites pointer is null");
        return MemchanStatus::NullPointer;
    }
    let list = std::slice::from_raw_parts(sites, count);
    match entropy_rate_brute(environment, list) {
        Ok(r) => write_out(rate, r.rate),
        Err(e) => fail(e),
    }
}

/// Shannon entropy (bits) of the dephased diagonal on `sites` sites.
#[no_mangle]
pub unsafe extern "C" fn memchan_diagonal_entropy(
    env: *const MemchanEnv,
    sites: usize,
    entropy: *mut f64,
) -> MemchanStatus {
    let environment = match env_ref(env) {
        Ok(e) => e,
        Err(s) => return s,
    };
    match environment.dephased_diagonal(sites) {
        Ok(diag) => write_out(entropy, diag.shannon_entropy()),
        Err(e) => fail(e),
    }
}

/// Capacity `log2(levels) - rate`, floored at zero; `*floored` records
/// whether flooring happened.
#[no_mangle]
pub unsafe extern "C" fn memchan_capacity_from_rate(
    rate: f64,
    levels: u32,
    capacity: *mut f64,
    floored: *mut bool,
) -> MemchanStatus {
    if levels < 2 {
        set_last_error("levels must be at least 2");
        return MemchanStatus::InvalidArgument;
    }
    if !rate.is_finite() {
        set_last_error("rate must be finite");
        return MemchanStatus::InvalidArgument;
    }
    let raw = (levels as f64).log2() - rate;
    let clipped = raw.max(0.0);
    if capacity.is_null() {
        set_last_error("capacity pointer is null");
        return MemchanStatus::NullPointer;
    }
    *capacity = clipped;
    if !floored.is_null() {
        *floored = raw < 0.0;
    }
    MemchanStatus::Ok
}
