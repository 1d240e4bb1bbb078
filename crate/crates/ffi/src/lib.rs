//! C ABI over `abelfdb`.
//!
//! Every function returns an [`AbelfdbStatus`]; results come back through out
//! pointers. Series and Hopf contexts are opaque heap handles released with
//! their `_free` function, and returned strings are released with
//! [`abelfdb_string_free`]. After a non-`OK` status,
//! [`abelfdb_last_error`] gives a message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use abelfdb::abelfeed::{devlin, ferfera};
use abelfdb::hopf::{Algorithm, CoordGen, HopfContext};
use abelfdb::numeric::{center_check, Signal};
use abelfdb::verify::{self, Suite, VerifyConfig};
use abelfdb::{Error, NCSeries, Word};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbelfdbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    QueryBeyondCap = 4,
    NotInvertible = 5,
    AlphabetMismatch = 6,
    ShapeMismatch = 7,
    Numeric = 8,
    AlgorithmMismatch = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbelfdbAlgorithm {
    Classical = 0,
    Coderivation = 1,
}

/// Truncated noncommutative series with exact rational coefficients.
pub struct AbelfdbSeries(NCSeries);

/// Antipode evaluator for a fixed `(m, mbar)`, with its memo.
pub struct AbelfdbHopf {
    ctx: HopfContext,
    classical: Box<dyn abelfdb::hopf::Antipode + Send>,
    coderivation: Box<dyn abelfdb::hopf::Antipode + Send>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AbelfdbStatus {
    match e {
        Error::QueryBeyondCap { .. } => AbelfdbStatus::QueryBeyondCap,
        Error::AlphabetMismatch { .. } => AbelfdbStatus::AlphabetMismatch,
        Error::NotInvertible => AbelfdbStatus::NotInvertible,
        Error::ShapeMismatch(_) => AbelfdbStatus::ShapeMismatch,
        Error::Parse(_) => AbelfdbStatus::Parse,
        Error::LetterOutOfRange { .. } | Error::UnboundGenerator(_) | Error::InvalidArgument(_) => AbelfdbStatus::InvalidArgument,
        Error::OutOfGrid { .. } | Error::Blowup { .. } | Error::DenominatorVanished { .. } | Error::PreconditionFailed(_) => {
            AbelfdbStatus::Numeric
        }
        Error::AlgorithmMismatch(_) => AbelfdbStatus::AlgorithmMismatch,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
    Other(AbelfdbStatus, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AbelfdbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AbelfdbStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer passed for {what}"));
            AbelfdbStatus::NullPointer
        }
        Ok(Err(Failure::Other(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            AbelfdbStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Other(AbelfdbStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Other(AbelfdbStatus::InvalidArgument, "string contains NUL".into()))?;
    write_out(out, c.into_raw(), "out")
}

unsafe fn series_ref<'a>(p: *const AbelfdbSeries, what: &'static str) -> Result<&'a NCSeries, Failure> {
    p.as_ref().map(|s| &s.0).ok_or(Failure::Null(what))
}

unsafe fn write_series(out: *mut *mut AbelfdbSeries, s: NCSeries) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    out.write(Box::into_raw(Box::new(AbelfdbSeries(s))));
    Ok(())
}

/// Message for the last failing call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn abelfdb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the JSON form `{"m", "cap", "terms": [{"word", "coeff"}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_series_from_json(json: *const c_char, out: *mut *mut AbelfdbSeries) -> AbelfdbStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let s: NCSeries = serde_json::from_str(text).map_err(|e| Failure::Other(AbelfdbStatus::Parse, e.to_string()))?;
        write_series(out, s)
    })
}

/// # Safety
/// `s` must be a live series handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_series_to_json(s: *const AbelfdbSeries, out: *mut *mut c_char) -> AbelfdbStatus {
    guard(|| {
        let s = series_ref(s, "series")?;
        let text = serde_json::to_string(s).map_err(|e| Failure::Other(AbelfdbStatus::InvalidArgument, e.to_string()))?;
        write_string(out, text)
    })
}

/// # Safety
/// `s` must come from this library or be NULL; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_series_free(s: *mut AbelfdbSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// `c_{A,m}` truncated at degree `cap` from the Devlin recursion.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_abel_series(m: usize, cap: usize, out: *mut *mut AbelfdbSeries) -> AbelfdbStatus {
    guard(|| write_series(out, devlin(m, cap)?.sum))
}

/// `sum_k k! x_1^k` over `m` letters, truncated at `cap`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_ferfera_series(m: usize, cap: usize, out: *mut *mut AbelfdbSeries) -> AbelfdbStatus {
    guard(|| write_series(out, ferfera(m, cap)))
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_series_shuffle(a: *const AbelfdbSeries, b: *const AbelfdbSeries, out: *mut *mut AbelfdbSeries) -> AbelfdbStatus {
    guard(|| {
        let r = series_ref(a, "a")?.shuffle(series_ref(b, "b")?)?;
        write_series(out, r)
    })
}

/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_series_shuffle_inverse(a: *const AbelfdbSeries, out: *mut *mut AbelfdbSeries) -> AbelfdbStatus {
    guard(|| {
        let r = series_ref(a, "a")?.shuffle_inverse()?;
        write_series(out, r)
    })
}

/// Coefficient of `word` (such as `x1.x2`, or `e`) as a `p/q` string.
///
/// # Safety
/// `s` must be a live handle, `word` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_series_coefficient(s: *const AbelfdbSeries, word: *const c_char, out: *mut *mut c_char) -> AbelfdbStatus {
    guard(|| {
        let s = series_ref(s, "series")?;
        let w = Word::parse(read_str(word, "word")?)?;
        write_string(out, abelfdb::rational::fmt_q(&s.coefficient(&w)?))
    })
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_series_equal(a: *const AbelfdbSeries, b: *const AbelfdbSeries, out: *mut c_int) -> AbelfdbStatus {
    guard(|| {
        let eq = series_ref(a, "a")? == series_ref(b, "b")?;
        write_out(out, eq as c_int, "out")
    })
}

/// Antipode evaluator over `m` letters with roots `1..=mbar`,
/// `m - 1 <= mbar <= m`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_hopf_new(m: usize, mbar: usize, out: *mut *mut AbelfdbHopf) -> AbelfdbStatus {
    guard(|| {
        let ctx = HopfContext::new(m, mbar)?;
        let h = AbelfdbHopf { ctx, classical: Algorithm::Classical.build(ctx), coderivation: Algorithm::Coderivation.build(ctx) };
        write_out(out, Box::into_raw(Box::new(h)), "out")
    })
}

/// # Safety
/// `h` must come from [`abelfdb_hopf_new`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_hopf_free(h: *mut AbelfdbHopf) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// `S a[root; word]` rendered as text.
///
/// # Safety
/// `h` must be a live handle, `word` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_hopf_antipode(
    h: *mut AbelfdbHopf,
    root: usize,
    word: *const c_char,
    algorithm: AbelfdbAlgorithm,
    out: *mut *mut c_char,
) -> AbelfdbStatus {
    guard(|| {
        let h = h.as_mut().ok_or(Failure::Null("hopf"))?;
        let g = CoordGen::new(root, Word::parse(read_str(word, "word")?)?);
        h.ctx.check(&g)?;
        let s = match algorithm {
            AbelfdbAlgorithm::Classical => h.classical.generator(&g),
            AbelfdbAlgorithm::Coderivation => h.coderivation.generator(&g),
        };
        write_string(out, s.to_string())
    })
}

/// Center check for `u_1 = cos`, `u_2 = sin` on `[0, omega]` with `steps`
/// RK4 steps; writes `|z(omega) - r|`.
///
/// # Safety
/// `out_error` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_center_error(omega: f64, steps: usize, r: f64, out_error: *mut f64) -> AbelfdbStatus {
    guard(|| {
        let u = Signal::cos_sin(2, omega, steps + 1)?;
        let report = center_check(&u, &[r])?;
        write_out(out_error, report.samples[0].return_error, "out_error")
    })
}

/// Runs a verification suite by name and writes the JSON report and the
/// overall verdict (1 pass, 0 fail).
///
/// # Safety
/// `suite` must be NUL-terminated; `out_json` and `out_pass` writable.
#[no_mangle]
pub unsafe extern "C" fn abelfdb_verify(
    suite: *const c_char,
    m: usize,
    cap: usize,
    grade: usize,
    seed: u64,
    out_json: *mut *mut c_char,
    out_pass: *mut c_int,
) -> AbelfdbStatus {
    guard(|| {
        let suite: Suite = read_str(suite, "suite")?.parse()?;
        let report = verify::run(suite, &VerifyConfig { m, cap, grade, seed })?;
        let text = serde_json::to_string(&report).map_err(|e| Failure::Other(AbelfdbStatus::InvalidArgument, e.to_string()))?;
        write_out(out_pass, report.pass as c_int, "out_pass")?;
        write_string(out_json, text)
    })
}
