//! C ABI over `enriques-bn`.
//!
//! Classes and configurations are opaque handles created by `ebn_*_new` /
//! `ebn_*_parse` and released with the matching `_free`. Every fallible call
//! returns an [`EbnStatus`]; on failure [`ebn_last_error_message`] describes
//! the error. Strings returned through `char **` must be released with
//! [`ebn_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use enriques_bn::brill_noether::{check_mn_bound, example_5_1, rho, BnError};
use enriques_bn::cli::{run, RunConfig};
use enriques_bn::invariants::{clifford_from_report, gonality_with_cap, InvariantsError};
use enriques_bn::lattice::{LatticeError, NumClass, RANK};
use enriques_bn::literal::{format_class, parse_class, resolve_config, ParseError, ResolvedConfig};
use enriques_bn::positivity::{classify_positivity, cohomology};
use enriques_bn::DivisorClass;

/// Number of coordinates of a class.
pub const EBN_RANK: usize = 10;
const _: () = assert!(EBN_RANK == RANK);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    SearchExhausted = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// Opaque divisor class.
pub struct EbnClass(DivisorClass);

/// Opaque configuration with its embedded generators.
pub struct EbnConfig(ResolvedConfig);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EbnCohomology {
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
    pub chi: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EbnGonality {
    pub k: i64,
    pub phi: i64,
    /// `-1` when no value was found below `mu_cap`.
    pub mu: i64,
    pub mu_cap: i64,
    pub floor_term: i64,
    pub genus: i64,
    pub clifford: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EbnMnBound {
    /// `-1` when there are no candidates.
    pub min_mn: i64,
    pub k: i64,
    pub holds: bool,
    pub candidates: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EbnExample51 {
    pub n: i64,
    pub lsq: i64,
    pub g: i64,
    pub phi: i64,
    pub k: i64,
    pub gon_special: i64,
    pub plane_genus: i64,
    pub cs_bound: i64,
    pub cs_holds: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(EbnStatus, String);

impl From<ParseError> for Fail {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Lattice(l) => l.into(),
            e => Fail(EbnStatus::Parse, e.to_string()),
        }
    }
}

impl From<LatticeError> for Fail {
    fn from(e: LatticeError) -> Self {
        let status = match e {
            LatticeError::NotRealizable { .. } => EbnStatus::SearchExhausted,
            LatticeError::InvalidConfiguration(_) => EbnStatus::InvalidArgument,
            _ => EbnStatus::Domain,
        };
        Fail(status, e.to_string())
    }
}

impl From<InvariantsError> for Fail {
    fn from(e: InvariantsError) -> Self {
        let status = match e {
            InvariantsError::SearchExhausted { .. } => EbnStatus::SearchExhausted,
            _ => EbnStatus::Domain,
        };
        Fail(status, e.to_string())
    }
}

impl From<BnError> for Fail {
    fn from(e: BnError) -> Self {
        match e {
            BnError::Invariants(i) => i.into(),
            BnError::Lattice(l) => l.into(),
            BnError::InvalidArgument(_) | BnError::RangeError { .. } => Fail(EbnStatus::InvalidArgument, e.to_string()),
            e => Fail(EbnStatus::Domain, e.to_string()),
        }
    }
}

fn set_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("no interior NUL"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EbnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            EbnStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            EbnStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(EbnStatus::NullPointer, "null pointer".into()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(EbnStatus::NullPointer, "null output pointer".into()))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(EbnStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(EbnStatus::InvalidUtf8, e.to_string()))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior NUL").into_raw()
}

/// Message for the last failed call on this thread, or NULL after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ebn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ebn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Resolves a configuration name such as `"i:2"` or `"custom:[[0,3],[3,0]]"`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebn_config_new(name: *const c_char, out_config: *mut *mut EbnConfig) -> EbnStatus {
    guard(|| {
        let slot = out(out_config)?;
        let cfg = resolve_config(text(name)?)?;
        *slot = Box::into_raw(Box::new(EbnConfig(cfg)));
        Ok(())
    })
}

/// # Safety
/// `config` must come from [`ebn_config_new`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ebn_config_free(config: *mut EbnConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Parses a class literal; `config` may be NULL when no `E<i>` symbols occur.
///
/// # Safety
/// `literal` must be a NUL-terminated string, `config` NULL or a live handle,
/// and `out_class` writable.
#[no_mangle]
pub unsafe extern "C" fn ebn_class_parse(
    literal: *const c_char,
    config: *const EbnConfig,
    out_class: *mut *mut EbnClass,
) -> EbnStatus {
    guard(|| {
        let slot = out(out_class)?;
        let cfg = config.as_ref().map(|c| &c.0);
        let class = parse_class(text(literal)?, cfg)?;
        *slot = Box::into_raw(Box::new(EbnClass(class)));
        Ok(())
    })
}

/// Builds a class from [`EBN_RANK`] coordinates and a torsion bit.
///
/// # Safety
/// `coords` must point to `len` readable values; `out_class` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebn_class_from_coords(
    coords: *const i64,
    len: usize,
    torsion: bool,
    out_class: *mut *mut EbnClass,
) -> EbnStatus {
    guard(|| {
        let slot = out(out_class)?;
        deref(coords)?;
        if len != RANK {
            return Err(Fail(EbnStatus::InvalidArgument, format!("expected {RANK} coordinates, got {len}")));
        }
        let v = std::slice::from_raw_parts(coords, len).to_vec();
        let class = DivisorClass::new(NumClass::new(v), torsion)?;
        *slot = Box::into_raw(Box::new(EbnClass(class)));
        Ok(())
    })
}

/// # Safety
/// `class` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ebn_class_free(class: *mut EbnClass) {
    if !class.is_null() {
        drop(Box::from_raw(class));
    }
}

/// Writes [`EBN_RANK`] coordinates to `out_coords` and the torsion bit to `out_torsion`.
///
/// # Safety
/// `class` must be live; `out_coords` must have room for [`EBN_RANK`] values.
#[no_mangle]
pub unsafe extern "C" fn ebn_class_coords(
    class: *const EbnClass,
    out_coords: *mut i64,
    out_torsion: *mut bool,
) -> EbnStatus {
    guard(|| {
        let c = &deref(class)?.0;
        let t = out(out_torsion)?;
        out(out_coords)?;
        std::slice::from_raw_parts_mut(out_coords, RANK).copy_from_slice(c.coords());
        *t = c.torsion();
        Ok(())
    })
}

/// Compact JSON literal of the class.
///
/// # Safety
/// `class` must be live; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebn_class_to_json(class: *const EbnClass, out_json: *mut *mut c_char) -> EbnStatus {
    guard(|| {
        let c = &deref(class)?.0;
        *out(out_json)? = into_c_string(format_class(c));
        Ok(())
    })
}

/// Intersection number `a·b`.
///
/// # Safety
/// Both handles must be live; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebn_class_dot(a: *const EbnClass, b: *const EbnClass, out_value: *mut i64) -> EbnStatus {
    guard(|| {
        let (a, b) = (&deref(a)?.0, &deref(b)?.0);
        *out(out_value)? = a.dot(b);
        Ok(())
    })
}

/// # Safety
/// `class` must be live; `out_ample` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebn_class_is_ample(class: *const EbnClass, out_ample: *mut bool) -> EbnStatus {
    guard(|| {
        *out(out_ample)? = classify_positivity(&deref(class)?.0).is_ample;
        Ok(())
    })
}

/// # Safety
/// `class` must be live; `out_profile` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebn_class_cohomology(class: *const EbnClass, out_profile: *mut EbnCohomology) -> EbnStatus {
    guard(|| {
        let p = cohomology(&deref(class)?.0);
        *out(out_profile)? = EbnCohomology { h0: p.h0, h1: p.h1, h2: p.h2, chi: p.chi };
        Ok(())
    })
}

/// Gonality data of an ample class; `mu_cap <= 0` selects the default cap.
///
/// # Safety
/// `class` must be live; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebn_gonality(class: *const EbnClass, mu_cap: i64, out_report: *mut EbnGonality) -> EbnStatus {
    guard(|| {
        let l = &deref(class)?.0;
        let slot = out(out_report)?;
        let rep = gonality_with_cap(l, (mu_cap > 0).then_some(mu_cap))?;
        *slot = EbnGonality {
            k: rep.k,
            phi: rep.phi.value,
            mu: rep.mu.value.unwrap_or(-1),
            mu_cap: rep.mu.cap,
            floor_term: rep.floor_term,
            genus: rep.genus,
            clifford: clifford_from_report(&rep)?,
        };
        Ok(())
    })
}

/// `M·N ≥ k − 1` audit over all destabilizing decompositions at degree `d`.
///
/// # Safety
/// `class` must be live; `out_bound` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebn_check_mn_bound(class: *const EbnClass, d: i64, out_bound: *mut EbnMnBound) -> EbnStatus {
    guard(|| {
        let l = &deref(class)?.0;
        let slot = out(out_bound)?;
        let r = check_mn_bound(l, d)?;
        *slot = EbnMnBound {
            min_mn: r.min_mn.unwrap_or(-1),
            k: r.k,
            holds: r.holds,
            candidates: r.candidates as u64,
        };
        Ok(())
    })
}

/// `ρ(g, r, d) = g − (r+1)(g − d + r)`.
#[no_mangle]
pub extern "C" fn ebn_rho(g: i64, r: i64, d: i64) -> i64 {
    rho(g, r, d)
}

/// The family `L = n(E₁ + E₂)`, `E₁·E₂ = 2`, for `n ≥ 3`.
///
/// # Safety
/// `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebn_example_5_1(n: i64, out_report: *mut EbnExample51) -> EbnStatus {
    guard(|| {
        let slot = out(out_report)?;
        let r = example_5_1(n)?;
        *slot = EbnExample51 {
            n: r.n,
            lsq: r.lsq,
            g: r.g,
            phi: r.phi,
            k: r.k,
            gon_special: r.gon_special,
            plane_genus: r.plane_genus,
            cs_bound: r.cs_bound,
            cs_holds: r.cs_holds,
        };
        Ok(())
    })
}

/// Runs the command-line front end on `argv` (without the program name).
/// Writes the process exit code and newly allocated stdout / stderr strings;
/// either string pointer may be NULL to discard it.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `out_code` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ebn_run_cli(
    argv: *const *const c_char,
    argc: usize,
    out_code: *mut i32,
    out_stdout: *mut *mut c_char,
    out_stderr: *mut *mut c_char,
) -> EbnStatus {
    guard(|| {
        let code = out(out_code)?;
        if argc > 0 {
            deref(argv)?;
        }
        let mut args = vec!["enriques-bn".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i))?.to_string());
        }
        let (c, stdout, stderr) = match RunConfig::from_args(&args) {
            Ok(cfg) => {
                let o = run(&cfg);
                (o.code, o.stdout, o.stderr)
            }
            Err(e) if e.use_stderr() => (1, String::new(), e.to_string()),
            Err(e) => (0, e.to_string(), String::new()),
        };
        *code = c;
        if let Some(p) = out_stdout.as_mut() {
            *p = into_c_string(stdout);
        }
        if let Some(p) = out_stderr.as_mut() {
            *p = into_c_string(stderr);
        }
        Ok(())
    })
}
