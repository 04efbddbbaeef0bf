//! C ABI for the `milnor` library: opaque handles, integer status codes,
//! and library-owned UTF-8 strings.
//!
//! Conventions, mirrored in the generated `include/milnor.h`:
//!
//! * Every fallible function returns a [`MilnorStatus`]; out-parameters
//!   are written only when the status is `MILNOR_STATUS_OK`.
//! * Handles are created by `*_new`/`*_parse`/`*_builtin` and destroyed by
//!   the matching `*_free`. Using a handle after freeing it, or freeing it
//!   twice, is undefined behavior.
//! * Strings returned through `char **` are NUL-terminated UTF-8 owned by
//!   the library; release them with [`milnor_string_free`].
//! * On failure, [`milnor_last_error`] returns a message for the most
//!   recent error on the calling thread; the pointer stays valid until the
//!   next failing call on that thread.
//! * Handles are not synchronized: each may be used by one thread at a
//!   time, but distinct handles can be used concurrently.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;

use milnor::arrangement::{builtin, CentralArrangement};
use milnor::ffcount::{CountMethod, PointCounter, PrimeField};
use milnor::hodge::milnor_fiber_table;
use milnor::Error;

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MilnorStatus {
    /// The call succeeded and all out-parameters were written.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input document or built-in name could not be parsed.
    ParseError = 3,
    /// The hyperplane data does not define a valid arrangement for the
    /// requested operation (zero normal, duplicate, not essential, ...).
    InvalidArrangement = 4,
    /// The supplied modulus is not a prime number.
    NotPrime = 5,
    /// The prime is one of bad reduction for this arrangement, so exact
    /// counting over it proves nothing.
    BadPrime = 6,
    /// The enumeration would exceed the configured evaluation budget.
    BudgetExceeded = 7,
    /// The exact result does not fit in the requested integer type; use
    /// the string-returning variant instead.
    Overflow = 8,
    /// The operation is defined, but not for this arrangement (for
    /// example a count polynomial of a non-Tate table).
    Unsupported = 9,
}

/// How to count points: exhaustive enumeration, per-factor histogram
/// tables glued by convolution, or the same with character-sum shortcuts.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MilnorMethod {
    Brute = 0,
    Factored = 1,
    Fast = 2,
}

impl From<MilnorMethod> for CountMethod {
    fn from(m: MilnorMethod) -> CountMethod {
        match m {
            MilnorMethod::Brute => CountMethod::Brute,
            MilnorMethod::Factored => CountMethod::Factored,
            MilnorMethod::Fast => CountMethod::Fast,
        }
    }
}

/// Opaque handle to a central hyperplane arrangement.
pub struct MilnorArrangement(CentralArrangement);

/// Opaque handle to a point counter with its budget and thread settings.
pub struct MilnorCounter(PointCounter);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn classify(e: &Error) -> MilnorStatus {
    match e {
        Error::Parse(_) => MilnorStatus::ParseError,
        Error::RaggedRows
        | Error::ZeroNormal
        | Error::DuplicateHyperplane
        | Error::EmptyArrangement
        | Error::BadAmbientDimension
        | Error::NotEssential => MilnorStatus::InvalidArrangement,
        Error::NotPrime(_) => MilnorStatus::NotPrime,
        Error::BadPrime(_) => MilnorStatus::BadPrime,
        Error::BudgetExceeded { .. } => MilnorStatus::BudgetExceeded,
        _ => MilnorStatus::Unsupported,
    }
}

fn fail(e: &Error) -> MilnorStatus {
    set_message(&e.to_string());
    classify(e)
}

fn fail_with(status: MilnorStatus, message: &str) -> MilnorStatus {
    set_message(message);
    status
}

fn set_message(message: &str) {
    let owned = CString::new(message.as_bytes())
        .unwrap_or_else(|_| CString::new("error message contained NUL").expect("static message"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

/// Reads a required UTF-8 string argument.
///
/// # Safety
/// `p`, if non-null, must point to a NUL-terminated string.
unsafe fn require_str<'a>(p: *const c_char) -> Result<&'a str, MilnorStatus> {
    if p.is_null() {
        return Err(fail_with(MilnorStatus::NullArgument, "string argument is NULL"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail_with(MilnorStatus::InvalidUtf8, "string argument is not valid UTF-8"))
}

fn give_string(text: String, out: *mut *mut c_char) -> MilnorStatus {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            MilnorStatus::Ok
        }
        Err(_) => fail_with(MilnorStatus::Unsupported, "result contained an interior NUL"),
    }
}

/// The crate version as a static NUL-terminated string. Never NULL.
#[no_mangle]
pub extern "C" fn milnor_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// A message describing the most recent failure on the calling thread, or
/// an empty string if none. Never NULL; valid until the next failing call
/// on this thread.
#[no_mangle]
pub extern "C" fn milnor_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a pointer previously returned through a `char **`
/// out-parameter of this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn milnor_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an arrangement document (JSON with rational coefficient strings)
/// into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn milnor_arrangement_parse(
    json: *const c_char,
    out: *mut *mut MilnorArrangement,
) -> MilnorStatus {
    if out.is_null() {
        return fail_with(MilnorStatus::NullArgument, "out pointer is NULL");
    }
    let text = match require_str(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match CentralArrangement::parse_document(text) {
        Ok(a) => {
            *out = Box::into_raw(Box::new(MilnorArrangement(a)));
            MilnorStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Creates a built-in arrangement by name: `g2`, `g4`, `a11`,
/// `boolean:N`, `g:N`, or `a:U,V`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn milnor_arrangement_builtin(
    name: *const c_char,
    out: *mut *mut MilnorArrangement,
) -> MilnorStatus {
    if out.is_null() {
        return fail_with(MilnorStatus::NullArgument, "out pointer is NULL");
    }
    let name = match require_str(name) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match builtin(name) {
        Ok(a) => {
            *out = Box::into_raw(Box::new(MilnorArrangement(a)));
            MilnorStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Frees an arrangement handle. NULL is ignored.
///
/// # Safety
/// `a` must be NULL or an unfreed handle from this library.
#[no_mangle]
pub unsafe extern "C" fn milnor_arrangement_free(a: *mut MilnorArrangement) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Ambient complex dimension, or 0 if `a` is NULL.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn milnor_arrangement_dim(a: *const MilnorArrangement) -> usize {
    a.as_ref().map_or(0, |a| a.0.ambient_dim())
}

/// Number of hyperplanes (the degree of the defining polynomial), or 0 if
/// `a` is NULL.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn milnor_arrangement_degree(a: *const MilnorArrangement) -> usize {
    a.as_ref().map_or(0, |a| a.0.degree())
}

/// Order of the monodromy acting on the Milnor fiber: the gcd of the
/// irreducible factor degrees.
///
/// # Safety
/// `a` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn milnor_arrangement_monodromy_order(
    a: *const MilnorArrangement,
    out: *mut usize,
) -> MilnorStatus {
    let (Some(a), false) = (a.as_ref(), out.is_null()) else {
        return fail_with(MilnorStatus::NullArgument, "handle or out pointer is NULL");
    };
    match milnor::decompose::irreducible_decomposition(&a.0) {
        Ok(d) => {
            *out = d.monodromy_order();
            MilnorStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Whether the arrangement splits as a product of at least two factors.
///
/// # Safety
/// `a` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn milnor_arrangement_is_reducible(
    a: *const MilnorArrangement,
    out: *mut bool,
) -> MilnorStatus {
    let (Some(a), false) = (a.as_ref(), out.is_null()) else {
        return fail_with(MilnorStatus::NullArgument, "handle or out pointer is NULL");
    };
    match milnor::decompose::irreducible_decomposition(&a.0) {
        Ok(d) => {
            *out = d.is_reducible();
            MilnorStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Serializes the arrangement back to its document form.
///
/// # Safety
/// `a` must be a live handle; `out` must be a valid pointer. Free the
/// result with [`milnor_string_free`].
#[no_mangle]
pub unsafe extern "C" fn milnor_arrangement_to_json(
    a: *const MilnorArrangement,
    out: *mut *mut c_char,
) -> MilnorStatus {
    let (Some(a), false) = (a.as_ref(), out.is_null()) else {
        return fail_with(MilnorStatus::NullArgument, "handle or out pointer is NULL");
    };
    give_string(a.0.to_document(), out)
}

/// The candidate count polynomial of the Milnor fiber, printed in
/// ascending powers of `t` (for example `-15 + 60 t - ... + t^7`).
///
/// Fails with `MILNOR_STATUS_UNSUPPORTED` when the eigenspace cohomology
/// is not of Tate type, since no candidate is defined there.
///
/// # Safety
/// `a` must be a live handle; `out` must be a valid pointer. Free the
/// result with [`milnor_string_free`].
#[no_mangle]
pub unsafe extern "C" fn milnor_arrangement_candidate_polynomial(
    a: *const MilnorArrangement,
    out: *mut *mut c_char,
) -> MilnorStatus {
    let (Some(a), false) = (a.as_ref(), out.is_null()) else {
        return fail_with(MilnorStatus::NullArgument, "handle or out pointer is NULL");
    };
    let candidate = milnor_fiber_table(&a.0).and_then(|t| t.katz_candidate());
    match candidate {
        Ok(poly) => give_string(poly.to_string(), out),
        Err(e) => fail(&e),
    }
}

/// Creates a point counter for an essential arrangement, with the default
/// evaluation budget (10^9) and one worker thread.
///
/// # Safety
/// `a` must be a live handle; `out` must be a valid pointer. The counter
/// keeps its own copy, so `a` may be freed afterwards.
#[no_mangle]
pub unsafe extern "C" fn milnor_counter_new(
    a: *const MilnorArrangement,
    out: *mut *mut MilnorCounter,
) -> MilnorStatus {
    let (Some(a), false) = (a.as_ref(), out.is_null()) else {
        return fail_with(MilnorStatus::NullArgument, "handle or out pointer is NULL");
    };
    match PointCounter::new(&a.0) {
        Ok(c) => {
            *out = Box::into_raw(Box::new(MilnorCounter(c)));
            MilnorStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Frees a counter handle. NULL is ignored.
///
/// # Safety
/// `c` must be NULL or an unfreed handle from this library.
#[no_mangle]
pub unsafe extern "C" fn milnor_counter_free(c: *mut MilnorCounter) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Caps the number of point evaluations a single counting call may use.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn milnor_counter_set_budget(
    c: *mut MilnorCounter,
    budget: u64,
) -> MilnorStatus {
    let Some(c) = c.as_mut() else {
        return fail_with(MilnorStatus::NullArgument, "handle is NULL");
    };
    c.0.set_budget(budget);
    MilnorStatus::Ok
}

/// Sets the number of worker threads (minimum 1). Results never depend on
/// the thread count.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn milnor_counter_set_threads(
    c: *mut MilnorCounter,
    threads: usize,
) -> MilnorStatus {
    let Some(c) = c.as_mut() else {
        return fail_with(MilnorStatus::NullArgument, "handle is NULL");
    };
    c.0.set_threads(threads);
    MilnorStatus::Ok
}

/// Whether `p` is a prime of good reduction for this arrangement.
/// Returns false for NULL handles and for composites.
///
/// # Safety
/// `c` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn milnor_counter_is_good_prime(
    c: *const MilnorCounter,
    p: u64,
) -> bool {
    c.as_ref().is_some_and(|c| c.0.is_good_prime(p))
}

fn count_at(c: &PointCounter, p: u64, method: MilnorMethod) -> Result<milnor::CountResult, Error> {
    let field = PrimeField::new(p)?;
    c.count_milnor_fiber(&field, method.into())
}

/// Counts points of the Milnor fiber over `F_p`, writing the exact count
/// to `out`.
///
/// Fails with `MILNOR_STATUS_OVERFLOW` if the count does not fit in 64
/// bits; use [`milnor_counter_count_string`] then.
///
/// # Safety
/// `c` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn milnor_counter_count(
    c: *const MilnorCounter,
    p: u64,
    method: MilnorMethod,
    out: *mut u64,
) -> MilnorStatus {
    let (Some(c), false) = (c.as_ref(), out.is_null()) else {
        return fail_with(MilnorStatus::NullArgument, "handle or out pointer is NULL");
    };
    match count_at(&c.0, p, method) {
        Ok(result) => match u64::try_from(&result.value) {
            Ok(v) => {
                *out = v;
                MilnorStatus::Ok
            }
            Err(_) => fail_with(
                MilnorStatus::Overflow,
                "count exceeds 64 bits; use milnor_counter_count_string",
            ),
        },
        Err(e) => fail(&e),
    }
}

/// Counts points of the Milnor fiber over `F_p`, returning the exact
/// count as a decimal string of unbounded size.
///
/// # Safety
/// `c` must be a live handle; `out` must be a valid pointer. Free the
/// result with [`milnor_string_free`].
#[no_mangle]
pub unsafe extern "C" fn milnor_counter_count_string(
    c: *const MilnorCounter,
    p: u64,
    method: MilnorMethod,
    out: *mut *mut c_char,
) -> MilnorStatus {
    let (Some(c), false) = (c.as_ref(), out.is_null()) else {
        return fail_with(MilnorStatus::NullArgument, "handle or out pointer is NULL");
    };
    match count_at(&c.0, p, method) {
        Ok(result) => give_string(result.value.to_string(), out),
        Err(e) => fail(&e),
    }
}
