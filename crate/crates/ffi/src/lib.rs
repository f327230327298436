//! C ABI over `nicadil`.
//!
//! Objects are opaque handles created by `*_new`/`*_build` functions and
//! released with the matching `*_free`. Every fallible function returns a
//! [`NicadilStatus`]; on failure `nicadil_last_error()` describes the error
//! for the calling thread. Group elements are passed as flat `int64_t`
//! coefficient arrays in factor order, of length
//! `nicadil_lattice_total_generators()`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nicadil::dilation::{build_dilation, DilationSpace, SupportSet};
use nicadil::linalg::{c, CMatrix};
use nicadil::representation::kernel_positivity;
use nicadil::scenario::{run_scenario_text, FactorInput, RunOptions};
use nicadil::{Error, GroupElement, Lattice, NicaRep, Tolerances};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NicadilStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    ShapeMismatch = 4,
    InvalidFactor = 5,
    IndeterminateSign = 6,
    NotInMonoid = 7,
    NormExceeded = 8,
    NonCommuting = 9,
    GramNotPsd = 10,
    CapExceeded = 11,
    NotInAlgebra = 12,
    InvalidArgument = 13,
    SamplerExhausted = 14,
    NumericalError = 15,
    Panic = 16,
}

impl From<&Error> for NicadilStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::ShapeMismatch(_) => NicadilStatus::ShapeMismatch,
            Error::InvalidFactor(_) => NicadilStatus::InvalidFactor,
            Error::IndeterminateSign(_) => NicadilStatus::IndeterminateSign,
            Error::NotInMonoid(_) => NicadilStatus::NotInMonoid,
            Error::NormExceeded { .. } => NicadilStatus::NormExceeded,
            Error::NonCommuting(_) | Error::NonCommutingEntries { .. } => NicadilStatus::NonCommuting,
            Error::GramNotPsd { .. } => NicadilStatus::GramNotPsd,
            Error::CapExceeded { .. } => NicadilStatus::CapExceeded,
            Error::NotInAlgebra { .. } => NicadilStatus::NotInAlgebra,
            Error::InvalidArgument(_) => NicadilStatus::InvalidArgument,
            Error::SamplerExhausted { .. } => NicadilStatus::SamplerExhausted,
            Error::Parse(_) => NicadilStatus::Parse,
            Error::NotHermitian { .. } => NicadilStatus::NumericalError,
        }
    }
}

/// Opaque lattice handle.
pub struct NicadilLattice(Lattice);

/// Opaque representation handle.
pub struct NicadilRep(NicaRep);

/// Opaque dilation handle.
pub struct NicadilDilation(DilationSpace);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(NicadilStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(NicadilStatus::from(&e), format!("{}: {e}", e.kind()))
    }
}

fn null(what: &str) -> Failure {
    Failure(NicadilStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NicadilStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NicadilStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NicadilStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(NicadilStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_arg<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

unsafe fn element(lattice: &Lattice, coeffs: *const i64, what: &str) -> Result<GroupElement, Failure> {
    let flat = slice_arg(coeffs, lattice.total_generators(), what)?;
    Ok(lattice.element_from_flat(flat)?)
}

unsafe fn points(lattice: &Lattice, coeffs: *const i64, n_points: usize) -> Result<Vec<GroupElement>, Failure> {
    let m = lattice.total_generators();
    let flat = slice_arg(coeffs, n_points * m, "points")?;
    flat.chunks(m.max(1))
        .take(n_points)
        .map(|c| lattice.element_from_flat(c).map_err(Failure::from))
        .collect()
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn nicadil_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nicadil_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nicadil_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs a scenario given as JSON text. On success `*report` receives the
/// report JSON (free with `nicadil_string_free`) and `*exit_code` the CLI exit
/// code (0 pass, 1 failed verdict, 3 computation error). A malformed scenario
/// returns `NICADIL_STATUS_PARSE`.
///
/// # Safety
/// `scenario_json` must be NUL-terminated; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nicadil_run_scenario(
    scenario_json: *const c_char,
    report: *mut *mut c_char,
    exit_code: *mut c_int,
) -> NicadilStatus {
    guard(|| {
        let text = str_arg(scenario_json, "scenario_json")?;
        if report.is_null() || exit_code.is_null() {
            return Err(null("output pointer"));
        }
        let r = run_scenario_text(text, &RunOptions::default())
            .map_err(|e| Failure(NicadilStatus::Parse, e.to_string()))?;
        let json = CString::new(r.to_json()).expect("report has no NUL bytes");
        out_arg(exit_code, r.exit_code(), "exit_code")?;
        out_arg(report, json.into_raw(), "report")
    })
}

/// `ℤ^k` with `k` cyclic factors generated by 1.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nicadil_lattice_integer_grid(k: usize, out: *mut *mut NicadilLattice) -> NicadilStatus {
    guard(|| {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()).into());
        }
        let handle = Box::new(NicadilLattice(Lattice::integer_grid(k)));
        out_arg(out, Box::into_raw(handle), "out")
    })
}

/// Lattice from a JSON array of factors, e.g.
/// `[{"kind":"cyclic"},{"kind":"real","generators":["1","1.414"]}]`.
///
/// # Safety
/// `factors_json` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn nicadil_lattice_from_json(
    factors_json: *const c_char,
    out: *mut *mut NicadilLattice,
) -> NicadilStatus {
    guard(|| {
        let text = str_arg(factors_json, "factors_json")?;
        let inputs: Vec<FactorInput> =
            serde_json::from_str(text).map_err(|e| Failure(NicadilStatus::Parse, e.to_string()))?;
        let factors = inputs
            .iter()
            .enumerate()
            .map(|(i, f)| f.resolve(i))
            .collect::<nicadil::Result<Vec<_>>>()?;
        let handle = Box::new(NicadilLattice(Lattice::new(factors)?));
        out_arg(out, Box::into_raw(handle), "out")
    })
}

/// Total number of generators, the length of a coefficient array.
///
/// # Safety
/// `lattice` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn nicadil_lattice_total_generators(lattice: *const NicadilLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.0.total_generators())
}

/// # Safety
/// `lattice` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nicadil_lattice_free(lattice: *mut NicadilLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Representation from full-space generator matrices. `data` holds one
/// `dim × dim` complex matrix per generator in factor order, row-major with
/// interleaved real and imaginary parts (`2·dim²` doubles per generator).
///
/// # Safety
/// `data` must hold `2·dim²·total_generators` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nicadil_rep_new_direct(
    lattice: *const NicadilLattice,
    dim: usize,
    data: *const f64,
    tol: f64,
    out: *mut *mut NicadilRep,
) -> NicadilStatus {
    guard(|| {
        let lattice = &ref_arg(lattice, "lattice")?.0;
        if dim == 0 {
            return Err(Error::InvalidArgument("dim must be positive".into()).into());
        }
        let per = 2 * dim * dim;
        let values = slice_arg(data, per * lattice.total_generators(), "data")?;
        let mut chunks = values.chunks(per);
        let generators = lattice
            .shape()
            .iter()
            .map(|&m| {
                (0..m)
                    .map(|_| {
                        let d = chunks.next().expect("length checked");
                        CMatrix::from_fn(dim, dim, |i, j| c(d[2 * (i * dim + j)], d[2 * (i * dim + j) + 1]))
                    })
                    .collect()
            })
            .collect();
        let handle = Box::new(NicadilRep(NicaRep::direct(lattice, generators, tol)?));
        out_arg(out, Box::into_raw(handle), "out")
    })
}

/// # Safety
/// `rep` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn nicadil_rep_dim(rep: *const NicadilRep) -> usize {
    rep.as_ref().map_or(0, |r| r.0.dim())
}

/// # Safety
/// `rep` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nicadil_rep_free(rep: *mut NicadilRep) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Smallest eigenvalue of the operator matrix `[T_{s_j − s_i}]` on
/// `n_points` cone points given as consecutive coefficient arrays.
///
/// # Safety
/// `coeffs` must hold `n_points · total_generators` integers.
#[no_mangle]
pub unsafe extern "C" fn nicadil_kernel_min_eigenvalue(
    rep: *const NicadilRep,
    coeffs: *const i64,
    n_points: usize,
    out: *mut f64,
) -> NicadilStatus {
    guard(|| {
        let rep = &ref_arg(rep, "rep")?.0;
        let pts = points(rep.lattice(), coeffs, n_points)?;
        let kp = kernel_positivity(rep, &pts, &Tolerances::default(), false)?;
        out_arg(out, kp.min_eigenvalue, "out")
    })
}

/// Truncated minimal isometric dilation on the given support, which must
/// contain 0.
///
/// # Safety
/// `coeffs` must hold `n_points · total_generators` integers; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn nicadil_dilation_build(
    rep: *const NicadilRep,
    coeffs: *const i64,
    n_points: usize,
    out: *mut *mut NicadilDilation,
) -> NicadilStatus {
    guard(|| {
        let rep = &ref_arg(rep, "rep")?.0;
        let support = SupportSet::new(rep.lattice(), points(rep.lattice(), coeffs, n_points)?)?;
        let dil = build_dilation(rep, &support, &Tolerances::default())?;
        out_arg(out, Box::into_raw(Box::new(NicadilDilation(dil))), "out")
    })
}

/// Dimension of the truncated dilation space.
///
/// # Safety
/// `dil` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn nicadil_dilation_rank(dil: *const NicadilDilation) -> usize {
    dil.as_ref().map_or(0, |d| d.0.rank())
}

/// `‖V_s*V_s − I‖` on the truncated space.
///
/// # Safety
/// `s` must hold `total_generators` integers; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nicadil_dilation_verify_isometry(
    dil: *const NicadilDilation,
    s: *const i64,
    out: *mut f64,
) -> NicadilStatus {
    guard(|| {
        let dil = &ref_arg(dil, "dil")?.0;
        let s = element(dil.rep().lattice(), s, "s")?;
        out_arg(out, dil.verify_isometry(&s)?, "out")
    })
}

/// `‖P_H V_{g₋}* V_{g₊}|_H − T_g‖`.
///
/// # Safety
/// `g` must hold `total_generators` integers; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn nicadil_dilation_verify_regularity(
    dil: *const NicadilDilation,
    g: *const i64,
    out: *mut f64,
) -> NicadilStatus {
    guard(|| {
        let dil = &ref_arg(dil, "dil")?.0;
        let g = element(dil.rep().lattice(), g, "g")?;
        out_arg(out, dil.verify_regularity(&g)?, "out")
    })
}

/// Nica pairing defects for `s`, `t` in different factors. `*restricted` is
/// NaN when `s ∧ μ ≠ 0`.
///
/// # Safety
/// Each element pointer must hold `total_generators` integers; the out
/// pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nicadil_dilation_verify_nica(
    dil: *const NicadilDilation,
    s: *const i64,
    t: *const i64,
    mu: *const i64,
    nu: *const i64,
    full: *mut f64,
    restricted: *mut f64,
) -> NicadilStatus {
    guard(|| {
        let dil = &ref_arg(dil, "dil")?.0;
        let l = dil.rep().lattice();
        let d = dil.verify_nica_dilation(
            &element(l, s, "s")?,
            &element(l, t, "t")?,
            &element(l, mu, "mu")?,
            &element(l, nu, "nu")?,
        )?;
        out_arg(full, d.full, "full")?;
        out_arg(restricted, d.restricted.unwrap_or(f64::NAN), "restricted")
    })
}

/// # Safety
/// `dil` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nicadil_dilation_free(dil: *mut NicadilDilation) {
    if !dil.is_null() {
        drop(Box::from_raw(dil));
    }
}
