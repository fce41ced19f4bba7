//! C interface to the successor-rule generators.
//!
//! Every function returns a [`DbsStatus`]. On failure a description is kept per thread
//! and can be read with [`dbs_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use debruijn::generator::{generate, verify_de_bruijn, BitStream};
use debruijn::{BitWord, Error, Rule, RuleSpec};

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DbsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidSpec = 2,
    InvalidArgument = 3,
    NotDeBruijn = 4,
    BudgetExceeded = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// A compiled rule. Create with `dbs_rule_from_json`, release with `dbs_rule_free`.
pub struct DbsRule {
    rule: Rule,
}

/// A bit stream owning a copy of its rule.
pub struct DbsStream {
    stream: BitStream<Rule>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: DbsStatus, msg: impl Into<String>) -> DbsStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> DbsStatus {
    let status = match &e {
        Error::NotDeBruijn { .. } | Error::NotConjugateClosed(_) | Error::NotATree(_) => {
            DbsStatus::NotDeBruijn
        }
        Error::Budget { .. } => DbsStatus::BudgetExceeded,
        Error::InvalidSpec(_) | Error::Json(_) | Error::Parse(_) | Error::Singular(_) => {
            DbsStatus::InvalidSpec
        }
        _ => DbsStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> DbsStatus) -> DbsStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(DbsStatus::Panic, "internal panic"))
}

fn state_word(rule: &Rule, state: u64) -> Result<BitWord, DbsStatus> {
    BitWord::new(state, rule.order()).map_err(from_error)
}

/// Parses and validates a JSON rule spec `{"n":..,"family":..,"params":{..}}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dbs_rule_from_json(
    json: *const c_char,
    out: *mut *mut DbsRule,
) -> DbsStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(DbsStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(_) => return fail(DbsStatus::InvalidSpec, "spec is not UTF-8"),
        };
        match RuleSpec::from_json_str(text).and_then(|s| s.compile()) {
            Ok(rule) => {
                *out = Box::into_raw(Box::new(DbsRule { rule }));
                DbsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `rule` must come from `dbs_rule_from_json` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dbs_rule_free(rule: *mut DbsRule) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

/// Order `n` of the rule, or 0 for a null handle.
///
/// # Safety
/// `rule` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dbs_rule_order(rule: *const DbsRule) -> u32 {
    rule.as_ref().map_or(0, |r| r.rule.order() as u32)
}

/// Successor bit of `state`, whose bit `n - 1` is the oldest stage.
///
/// # Safety
/// `rule` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dbs_rule_next_bit(
    rule: *const DbsRule,
    state: u64,
    out: *mut u8,
) -> DbsStatus {
    guard(|| {
        let (Some(r), false) = (rule.as_ref(), out.is_null()) else {
            return fail(DbsStatus::NullPointer, "null argument");
        };
        match state_word(&r.rule, state) {
            Ok(w) => {
                *out = r.rule.next_bit_raw(w.value());
                DbsStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Writes one period (`2^n` bytes of 0 or 1) starting at `start` into `buf`.
///
/// `written` receives the period length; if `len` is too small nothing else is written
/// and `DBS_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `buf` must hold `len` bytes; `rule` and `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dbs_generate(
    rule: *const DbsRule,
    start: u64,
    buf: *mut u8,
    len: usize,
    written: *mut usize,
) -> DbsStatus {
    guard(|| {
        let Some(r) = rule.as_ref() else {
            return fail(DbsStatus::NullPointer, "null rule");
        };
        if written.is_null() {
            return fail(DbsStatus::NullPointer, "null length pointer");
        }
        let n = r.rule.order();
        if n >= usize::BITS as usize {
            return fail(
                DbsStatus::InvalidArgument,
                format!("order {n} is too large to materialise"),
            );
        }
        *written = 1usize << n;
        if len < *written {
            return fail(
                DbsStatus::BufferTooSmall,
                format!("need {} bytes, got {len}", *written),
            );
        }
        if buf.is_null() {
            return fail(DbsStatus::NullPointer, "null buffer");
        }
        let start = match state_word(&r.rule, start) {
            Ok(w) => w,
            Err(s) => return s,
        };
        match generate(&r.rule, &start) {
            Ok(seq) => {
                ptr::copy_nonoverlapping(seq.bits.as_ptr(), buf, seq.bits.len());
                DbsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Opens a stream at `start`. The stream keeps its own copy of the rule.
///
/// # Safety
/// `rule` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dbs_stream_new(
    rule: *const DbsRule,
    start: u64,
    out: *mut *mut DbsStream,
) -> DbsStatus {
    guard(|| {
        let (Some(r), false) = (rule.as_ref(), out.is_null()) else {
            return fail(DbsStatus::NullPointer, "null argument");
        };
        *out = ptr::null_mut();
        let start = match state_word(&r.rule, start) {
            Ok(w) => w,
            Err(s) => return s,
        };
        let stream = BitStream::from_state(r.rule.clone(), &start);
        *out = Box::into_raw(Box::new(DbsStream { stream }));
        DbsStatus::Ok
    })
}

/// Fills `buf` with the next `len` bits.
///
/// # Safety
/// `stream` must be a live handle and `buf` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn dbs_stream_next(
    stream: *mut DbsStream,
    buf: *mut u8,
    len: usize,
) -> DbsStatus {
    guard(|| {
        let Some(s) = stream.as_mut() else {
            return fail(DbsStatus::NullPointer, "null stream");
        };
        if len == 0 {
            return DbsStatus::Ok;
        }
        if buf.is_null() {
            return fail(DbsStatus::NullPointer, "null buffer");
        }
        for b in std::slice::from_raw_parts_mut(buf, len) {
            *b = s.stream.next_bit();
        }
        DbsStatus::Ok
    })
}

/// Current register state of the stream.
///
/// # Safety
/// `stream` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dbs_stream_state(stream: *const DbsStream) -> u64 {
    stream.as_ref().map_or(0, |s| s.stream.state())
}

/// # Safety
/// `stream` must come from `dbs_stream_new` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dbs_stream_free(stream: *mut DbsStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

/// Sets `*out` to whether `bits[0..len]` (bytes of 0 or 1) is a de Bruijn sequence of order `n`.
///
/// # Safety
/// `bits` must hold `len` bytes and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dbs_verify(
    bits: *const u8,
    len: usize,
    n: u32,
    out: *mut bool,
) -> DbsStatus {
    guard(|| {
        if out.is_null() || (bits.is_null() && len > 0) {
            return fail(DbsStatus::NullPointer, "null argument");
        }
        let slice = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(bits, len)
        };
        *out = verify_de_bruijn(slice, n as usize);
        DbsStatus::Ok
    })
}

/// Copy of the calling thread's last error message, or null if there is none.
/// Release with `dbs_free_string`.
#[no_mangle]
pub extern "C" fn dbs_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dbs_free_string(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
