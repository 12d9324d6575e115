//! C interface to the simulator.
//!
//! Every function returns a [`ComonetStatus`]. On anything other than
//! `COMONET_OK` a description of the failure is available from
//! [`comonet_last_error_message`] on the same thread. Strings handed out by
//! the library are owned by the caller and released with
//! [`comonet_string_free`]; scenario and report handles have their own free
//! functions.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use comonet::address::{AddressPlan, CommunityAddress};
use comonet::harness::{self, Format, RunOptions, RunReport, Scenario, ScenarioError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComonetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Bad address, number, or out-of-range argument.
    InvalidArgument = 3,
    /// The scenario failed to parse or validate.
    InvalidScenario = 4,
    Io = 5,
    /// The simulation itself failed.
    RunFailed = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComonetFormat {
    Table = 0,
    Csv = 1,
}

/// A validated scenario.
pub struct ComonetScenario(Scenario);

/// The result of one run.
pub struct ComonetReport(RunReport);

/// Per-call figures. Undefined metrics are NaN; flags are 1 (pass),
/// 0 (fail) or -1 (undefined).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComonetCallMetrics {
    pub delay_ms: f64,
    pub jitter_ms: f64,
    pub loss: f64,
    pub setup_s: f64,
    pub delay_ok: i8,
    pub jitter_ok: i8,
    pub loss_ok: i8,
    /// Non-zero if the call could not be established at all.
    pub failed: u8,
    pub packets_sent: u64,
    pub packets_played: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

struct Failure(ComonetStatus, String);

impl Failure {
    fn arg(msg: impl ToString) -> Self {
        Failure(ComonetStatus::InvalidArgument, msg.to_string())
    }
}

/// Runs `f`, records any failure, and turns panics into `Panic`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ComonetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ComonetStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            ComonetStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(
            ComonetStatus::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            ComonetStatus::InvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(
            ComonetStatus::NullPointer,
            format!("{what} is null"),
        ))
    } else {
        Ok(())
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(ComonetStatus::NullPointer, format!("{what} is null")))
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::arg("result contains a nul byte"))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn scenario_failure(e: ScenarioError) -> Failure {
    let status = match e {
        ScenarioError::Io { .. } => ComonetStatus::Io,
        _ => ComonetStatus::InvalidScenario,
    };
    let mut msg = e.to_string();
    for issue in e.issues() {
        msg.push_str(&format!("\n  {issue}"));
    }
    Failure(status, msg)
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn comonet_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn comonet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Maps a ten-digit number under the default "07" plan to its dotted address.
///
/// # Safety
/// `number` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comonet_addr_encode(
    number: *const c_char,
    out: *mut *mut c_char,
) -> ComonetStatus {
    guard(|| {
        let number = text(number, "number")?;
        out_ptr(out, "out")?;
        let addr = AddressPlan::default()
            .address_of(number)
            .map_err(Failure::arg)?;
        give_string(addr.to_string(), out)
    })
}

/// Maps a dotted community address back to its phone number.
///
/// # Safety
/// `address` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comonet_addr_decode(
    address: *const c_char,
    out: *mut *mut c_char,
) -> ComonetStatus {
    guard(|| {
        let address = text(address, "address")?;
        out_ptr(out, "out")?;
        let addr: CommunityAddress = address.parse().map_err(Failure::arg)?;
        let number = AddressPlan::default().decode(addr).map_err(Failure::arg)?;
        give_string(number.as_str().to_string(), out)
    })
}

/// Reads and validates a scenario file.
///
/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comonet_scenario_load(
    path: *const c_char,
    out: *mut *mut ComonetScenario,
) -> ComonetStatus {
    guard(|| {
        let path = text(path, "path")?;
        out_ptr(out, "out")?;
        let s = Scenario::load(path).map_err(scenario_failure)?;
        *out = Box::into_raw(Box::new(ComonetScenario(s)));
        Ok(())
    })
}

/// Parses and validates scenario text.
///
/// # Safety
/// `source` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comonet_scenario_parse(
    source: *const c_char,
    out: *mut *mut ComonetScenario,
) -> ComonetStatus {
    guard(|| {
        let source = text(source, "source")?;
        out_ptr(out, "out")?;
        let s = Scenario::parse(source).map_err(scenario_failure)?;
        *out = Box::into_raw(Box::new(ComonetScenario(s)));
        Ok(())
    })
}

/// # Safety
/// `scenario` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn comonet_scenario_free(scenario: *mut ComonetScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Simulates `scenario` under `seed`.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comonet_run(
    scenario: *const ComonetScenario,
    seed: u64,
    out: *mut *mut ComonetReport,
) -> ComonetStatus {
    guard(|| {
        let s = handle(scenario, "scenario")?;
        out_ptr(out, "out")?;
        let r = harness::run_scenario(&s.0, seed, RunOptions::default())
            .map_err(|e| Failure(ComonetStatus::RunFailed, e.to_string()))?;
        *out = Box::into_raw(Box::new(ComonetReport(r)));
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comonet_report_call_count(
    report: *const ComonetReport,
    out: *mut usize,
) -> ComonetStatus {
    guard(|| {
        let r = handle(report, "report")?;
        out_ptr(out, "out")?;
        *out = r.0.calls.len();
        Ok(())
    })
}

fn flag(v: Option<bool>) -> i8 {
    v.map_or(-1, i8::from)
}

/// Figures for the call at `index`, in scenario order.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comonet_report_call_metrics(
    report: *const ComonetReport,
    index: usize,
    out: *mut ComonetCallMetrics,
) -> ComonetStatus {
    guard(|| {
        let r = handle(report, "report")?;
        out_ptr(out, "out")?;
        let c = r.0.calls.get(index).ok_or_else(|| {
            Failure::arg(format!(
                "call index {index} out of range ({} calls)",
                r.0.calls.len()
            ))
        })?;
        let q = c.qos;
        *out = ComonetCallMetrics {
            delay_ms: q.delay_ms.unwrap_or(f64::NAN),
            jitter_ms: q.jitter_ms.unwrap_or(f64::NAN),
            loss: q.loss.unwrap_or(f64::NAN),
            setup_s: q.setup_s.unwrap_or(f64::NAN),
            delay_ok: flag(c.flags.delay_ok),
            jitter_ok: flag(c.flags.jitter_ok),
            loss_ok: flag(c.flags.loss_ok),
            failed: u8::from(c.failed),
            packets_sent: c.totals.iter().map(|t| t.sent).sum(),
            packets_played: c.totals.iter().map(|t| t.played).sum(),
        };
        Ok(())
    })
}

/// Renders the report the way the command-line tool prints it.
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn comonet_report_render(
    report: *const ComonetReport,
    format: ComonetFormat,
    out: *mut *mut c_char,
) -> ComonetStatus {
    guard(|| {
        let r = handle(report, "report")?;
        out_ptr(out, "out")?;
        let format = match format {
            ComonetFormat::Table => Format::Table,
            ComonetFormat::Csv => Format::Csv,
        };
        give_string(harness::render(std::slice::from_ref(&r.0), format), out)
    })
}

/// # Safety
/// `report` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn comonet_report_free(report: *mut ComonetReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
