//! C interface to `golden-core`.
//!
//! Every object crosses the boundary as an opaque pointer created and
//! destroyed by this library. Functions return a [`GoldenStatus`]; on
//! failure the message is available from [`golden_last_error`] on the same
//! thread. Strings handed out must be released with [`golden_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use golden_core::dynamics::{matching_index, MapKind, MatchOutcome};
use golden_core::measures::{density_s, density_t_from, freq_s, freq_t, measure_j0, FreqNumber, StepFunction};
use golden_core::montecarlo::{simulate, SimConfig};
use golden_core::words::{enumerate_matching_words, Atlas};
use golden_core::{Error, GoldenNum};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoldenStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    DivisionByZero = 5,
    NotAdmissible = 6,
    ExceptionalWord = 7,
    NotFound = 8,
    NonMatchingExact = 9,
    Construction = 10,
    Numeric = 11,
    InvalidConfig = 12,
    OutOfRange = 13,
    Internal = 14,
    Panic = 15,
}

/// An element of Q(β).
pub struct GoldenNumber(GoldenNum);

/// An enumerated set of matching words with their intervals.
pub struct GoldenAtlas(Atlas);

/// An exact step-function density on [−1, 1].
pub struct GoldenDensity(StepFunction);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GoldenStatus {
    match e {
        Error::DivisionByZero => GoldenStatus::DivisionByZero,
        Error::Domain(_) => GoldenStatus::Domain,
        Error::Parse(_) => GoldenStatus::Parse,
        Error::NotAdmissible { .. } => GoldenStatus::NotAdmissible,
        Error::ExceptionalWord(_) => GoldenStatus::ExceptionalWord,
        Error::NotFound { .. } => GoldenStatus::NotFound,
        Error::NonMatchingExact(_) => GoldenStatus::NonMatchingExact,
        Error::Construction(_) => GoldenStatus::Construction,
        Error::Numeric(_) => GoldenStatus::Numeric,
        Error::InvalidConfig(_) => GoldenStatus::InvalidConfig,
        _ => GoldenStatus::Internal,
    }
}

struct Failure(GoldenStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording any error or panic for `golden_last_error`.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> GoldenStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GoldenStatus::Ok,
        Ok(Err(Failure(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            GoldenStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(GoldenStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(GoldenStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior nul removed").into_raw()
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn golden_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the last error message on this thread, or NULL if none.
/// Release with `golden_string_free`.
#[no_mangle]
pub extern "C" fn golden_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn golden_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses "p/q + r/s*b" (or an integer or fraction).
///
/// # Safety
/// `text` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn golden_number_parse(text: *const c_char, out: *mut *mut GoldenNumber) -> GoldenStatus {
    guard(|| {
        let s = read_str(text, "text")?;
        let g: GoldenNum = s.parse()?;
        put(out, boxed(GoldenNumber(g)), "out")
    })
}

/// a/b + (c/d)·β.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn golden_number_from_parts(
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    out: *mut *mut GoldenNumber,
) -> GoldenStatus {
    guard(|| {
        if b == 0 || d == 0 {
            return Err(Error::DivisionByZero.into());
        }
        put(out, boxed(GoldenNumber(GoldenNum::from_parts(a, b, c, d))), "out")
    })
}

/// # Safety
/// `x` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn golden_number_free(x: *mut GoldenNumber) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Exact text form.
///
/// # Safety
/// `x` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn golden_number_to_string(x: *const GoldenNumber, out: *mut *mut c_char) -> GoldenStatus {
    guard(|| {
        let x = borrow(x, "x")?;
        put(out, to_c(x.0.to_string()), "out")
    })
}

/// Decimal text with `digits` significant digits.
///
/// # Safety
/// `x` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn golden_number_to_decimal(
    x: *const GoldenNumber,
    digits: usize,
    out: *mut *mut c_char,
) -> GoldenStatus {
    guard(|| {
        let x = borrow(x, "x")?;
        if digits == 0 {
            return Err(Failure(GoldenStatus::InvalidConfig, "digits must be at least 1".into()));
        }
        put(out, to_c(x.0.approx_sig(digits)), "out")
    })
}

/// Nearest double; NaN for a null handle.
///
/// # Safety
/// `x` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn golden_number_to_f64(x: *const GoldenNumber) -> f64 {
    x.as_ref().map_or(f64::NAN, |x| x.0.to_f64())
}

/// Exact comparison: −1, 0 or 1, written to `out`.
///
/// # Safety
/// `x`, `y` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn golden_number_cmp(
    x: *const GoldenNumber,
    y: *const GoldenNumber,
    out: *mut c_int,
) -> GoldenStatus {
    guard(|| {
        let (x, y) = (borrow(x, "x")?, borrow(y, "y")?);
        put(out, x.0.cmp(&y.0) as c_int, "out")
    })
}

/// Field operation selector for `golden_number_arith`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoldenOp {
    Add = 0,
    Sub = 1,
    Mul = 2,
    Div = 3,
}

/// x op y as a new handle.
///
/// # Safety
/// `x`, `y` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn golden_number_arith(
    op: GoldenOp,
    x: *const GoldenNumber,
    y: *const GoldenNumber,
    out: *mut *mut GoldenNumber,
) -> GoldenStatus {
    guard(|| {
        let (x, y) = (&borrow(x, "x")?.0, &borrow(y, "y")?.0);
        let r = match op {
            GoldenOp::Add => x + y,
            GoldenOp::Sub => x - y,
            GoldenOp::Mul => x * y,
            GoldenOp::Div => x.checked_div(y)?,
        };
        put(out, boxed(GoldenNumber(r)), "out")
    })
}

/// Matching index of S_α. On a match `kind` is 0 and `word` receives the
/// matching word; when the critical orbits turn periodic first, `kind` is
/// 1, `m` is 0 and `word` is NULL.
///
/// # Safety
/// `alpha` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn golden_matching_index(
    alpha: *const GoldenNumber,
    max_iter: usize,
    kind: *mut c_int,
    m: *mut usize,
    word: *mut *mut c_char,
) -> GoldenStatus {
    guard(|| {
        let a = &borrow(alpha, "alpha")?.0;
        if kind.is_null() || m.is_null() || word.is_null() {
            return Err(null("output"));
        }
        match matching_index(a, max_iter)? {
            MatchOutcome::Matched(info) => {
                let w: String = info.d.iter().map(|d| char::from(b'0' + d.value().max(0) as u8)).collect();
                kind.write(0);
                m.write(info.m);
                word.write(to_c(w));
            }
            MatchOutcome::MarkovDetected(_) => {
                kind.write(1);
                m.write(0);
                word.write(ptr::null_mut());
            }
        }
        Ok(())
    })
}

/// Enumerates all matching words of length at most `max_len`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn golden_atlas_enumerate(max_len: usize, out: *mut *mut GoldenAtlas) -> GoldenStatus {
    guard(|| {
        let atlas = enumerate_matching_words(max_len)?;
        put(out, boxed(GoldenAtlas(atlas)), "out")
    })
}

/// # Safety
/// `atlas` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn golden_atlas_free(atlas: *mut GoldenAtlas) {
    if !atlas.is_null() {
        drop(Box::from_raw(atlas));
    }
}

/// Number of words; 0 for a null handle.
///
/// # Safety
/// `atlas` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn golden_atlas_len(atlas: *const GoldenAtlas) -> usize {
    atlas.as_ref().map_or(0, |a| a.0.len())
}

/// Word, left and right endpoint of entry `index` (sorted by descending
/// left endpoint). Any of the out pointers may be NULL to skip it.
///
/// # Safety
/// `atlas` must be a live handle; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn golden_atlas_entry(
    atlas: *const GoldenAtlas,
    index: usize,
    word: *mut *mut c_char,
    alpha_minus: *mut *mut GoldenNumber,
    alpha_plus: *mut *mut GoldenNumber,
) -> GoldenStatus {
    guard(|| {
        let a = &borrow(atlas, "atlas")?.0;
        let r = a
            .records
            .get(index)
            .ok_or_else(|| Failure(GoldenStatus::OutOfRange, format!("index {index} of {}", a.len())))?;
        if !word.is_null() {
            word.write(to_c(r.d.to_string()));
        }
        if !alpha_minus.is_null() {
            alpha_minus.write(boxed(GoldenNumber(r.alpha_minus.clone())));
        }
        if !alpha_plus.is_null() {
            alpha_plus.write(boxed(GoldenNumber(r.alpha_plus.clone())));
        }
        Ok(())
    })
}

/// The atlas as CSV text.
///
/// # Safety
/// `atlas` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn golden_atlas_to_csv(atlas: *const GoldenAtlas, out: *mut *mut c_char) -> GoldenStatus {
    guard(|| {
        let a = &borrow(atlas, "atlas")?.0;
        let mut buf = Vec::new();
        a.write_csv(&mut buf)?;
        put(out, to_c(String::from_utf8(buf).expect("CSV is UTF-8")), "out")
    })
}

/// Invariant density of S_α (`map` = 'S') or T_α (`map` = 'T').
///
/// # Safety
/// `alpha` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn golden_density(
    alpha: *const GoldenNumber,
    map: c_char,
    out: *mut *mut GoldenDensity,
) -> GoldenStatus {
    guard(|| {
        let a = &borrow(alpha, "alpha")?.0;
        let f = density_s(a)?;
        let f = match map as u8 {
            b'S' | b's' => f,
            b'T' | b't' => density_t_from(&f)?,
            other => {
                return Err(Failure(GoldenStatus::InvalidConfig, format!("map {:?} is not S or T", other as char)))
            }
        };
        put(out, boxed(GoldenDensity(f)), "out")
    })
}

/// # Safety
/// `f` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn golden_density_free(f: *mut GoldenDensity) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of constant pieces; 0 for a null handle.
///
/// # Safety
/// `f` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn golden_density_pieces(f: *const GoldenDensity) -> usize {
    f.as_ref().map_or(0, |f| f.0.values().len())
}

/// f(x) as a new handle.
///
/// # Safety
/// `f`, `x` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn golden_density_eval(
    f: *const GoldenDensity,
    x: *const GoldenNumber,
    out: *mut *mut GoldenNumber,
) -> GoldenStatus {
    guard(|| {
        let v = borrow(f, "f")?.0.eval(&borrow(x, "x")?.0)?;
        put(out, boxed(GoldenNumber(v)), "out")
    })
}

/// Mass of [−1/β, 1/β].
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn golden_density_measure_j0(
    f: *const GoldenDensity,
    out: *mut *mut GoldenNumber,
) -> GoldenStatus {
    guard(|| {
        let v = measure_j0(&borrow(f, "f")?.0);
        put(out, boxed(GoldenNumber(v)), "out")
    })
}

/// The density as CSV text.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn golden_density_to_csv(f: *const GoldenDensity, out: *mut *mut c_char) -> GoldenStatus {
    guard(|| {
        let mut buf = Vec::new();
        borrow(f, "f")?.0.write_csv(&mut buf)?;
        put(out, to_c(String::from_utf8(buf).expect("CSV is UTF-8")), "out")
    })
}

/// Exact frequencies of the digit 0 for S_α and T_α. Either out pointer
/// may be NULL.
///
/// # Safety
/// `alpha` must be a live handle; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn golden_frequencies(
    alpha: *const GoldenNumber,
    freq_s_out: *mut *mut GoldenNumber,
    freq_t_out: *mut *mut GoldenNumber,
) -> GoldenStatus {
    guard(|| {
        let fs = freq_s(&borrow(alpha, "alpha")?.0)?;
        let ft = freq_t(&fs)?;
        let exact = |v: FreqNumber| match v {
            FreqNumber::Exact(g) => Ok(g),
            FreqNumber::Float(_) => Err(Failure(GoldenStatus::Internal, "expected an exact frequency".into())),
        };
        let (s, t) = (exact(fs.value)?, exact(ft.value)?);
        if !freq_s_out.is_null() {
            freq_s_out.write(boxed(GoldenNumber(s)));
        }
        if !freq_t_out.is_null() {
            freq_t_out.write(boxed(GoldenNumber(t)));
        }
        Ok(())
    })
}

/// Birkhoff frequency of the digit 0 along `iterations` steps of the map
/// 'S', 'T' or 'B', seeded and reproducible.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn golden_simulate_zero_frequency(
    map: c_char,
    alpha: f64,
    iterations: u64,
    seed: u64,
    out: *mut f64,
) -> GoldenStatus {
    guard(|| {
        let map: MapKind = (map as u8 as char).to_string().parse()?;
        let r = simulate(&SimConfig::new(map, alpha, iterations, seed))?;
        put(out, r.freq(0), "out")
    })
}
