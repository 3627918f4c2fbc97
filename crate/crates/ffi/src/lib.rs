//! C ABI for valnet.
//!
//! Models are parsed into an opaque [`VnModel`] handle that the caller owns
//! and releases with [`vn_model_free`]. Every fallible function returns a
//! [`VnStatus`]; on failure, [`vn_last_error`] describes the most recent
//! error on the calling thread. Strings returned through `char **` are
//! owned by the caller and released with [`vn_string_free`]. Variable sets
//! are passed as comma-separated names (`"A,B"`, or `""` for the empty set).

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use valnet::converters::{d_separated, moral_separated};
use valnet::independence::{numeric_holds, Criterion, StructuralOracle, Verdict};
use valnet::model::{parse_model, ModelFile};
use valnet::{AlgebraKind, Error, Table, ValuationNetwork, VarSet};

/// Result codes shared by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed model text or arguments.
    ParseError = 3,
    /// Well-formed input that violates a model or algebra rule.
    ModelError = 4,
    /// The output buffer is too small; the required length was reported.
    BufferTooSmall = 5,
    /// The operation is not defined for this model or algebra.
    Unsupported = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VnCriterion {
    VnSeparation = 0,
    DSeparation = 1,
    Moralization = 2,
    Numeric = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VnVerdict {
    Independent = 0,
    NotDerivable = 1,
    NotIndependent = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VnAlgebra {
    Probability = 0,
    Kappa = 1,
    Possibility = 2,
}

/// A parsed model together with its validated network.
pub struct VnModel {
    file: ModelFile,
    network: ValuationNetwork,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> VnStatus {
    match err {
        Error::Syntax { .. } | Error::Usage(_) => VnStatus::ParseError,
        Error::Unsupported { .. } | Error::StructureOnly(_) => VnStatus::Unsupported,
        _ => VnStatus::ModelError,
    }
}

struct Failure(VnStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> VnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            VnStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            VnStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(VnStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(VnStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn names(p: *const c_char, what: &str) -> Result<Vec<String>, Failure> {
    Ok(text(p, what)?
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect())
}

unsafe fn model<'a>(m: *const VnModel) -> Result<&'a VnModel, Failure> {
    m.as_ref().ok_or_else(|| Failure(VnStatus::NullPointer, "model is null".into()))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(VnStatus::ModelError, "output contains a NUL byte".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Parses and validates model text. On success `*out` receives a handle
/// that must be released with `vn_model_free`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vn_model_parse(text_ptr: *const c_char, out: *mut *mut VnModel) -> VnStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(VnStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let file = parse_model(text(text_ptr, "text")?)?;
        let network = file.to_network()?;
        *out = Box::into_raw(Box::new(VnModel { file, network }));
        Ok(())
    })
}

/// Releases a model handle. Null is ignored.
///
/// # Safety
/// `model` must come from `vn_model_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vn_model_free(model: *mut VnModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vn_model_variable_count(model: *const VnModel) -> usize {
    model.as_ref().map_or(0, |m| m.network.variables().len())
}

/// Number of valuation nodes, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vn_model_node_count(model: *const VnModel) -> usize {
    model.as_ref().map_or(0, |m| m.network.nodes().len())
}

/// True when every node carries a table.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vn_model_has_tables(model: *const VnModel) -> bool {
    model.as_ref().is_some_and(|m| m.file.has_tables())
}

/// The algebra of the model's tables.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vn_model_algebra(model_ptr: *const VnModel, out: *mut VnAlgebra) -> VnStatus {
    guard(|| {
        let m = model(model_ptr)?;
        if out.is_null() {
            return Err(Failure(VnStatus::NullPointer, "out is null".into()));
        }
        *out = match m.file.kind {
            AlgebraKind::Probability => VnAlgebra::Probability,
            AlgebraKind::Kappa => VnAlgebra::Kappa,
            AlgebraKind::Possibility => VnAlgebra::Possibility,
        };
        Ok(())
    })
}

/// Decides `r ⊥ s | v` with the chosen criterion. d-separation and
/// moralization need a `dag` model; the numeric criterion needs
/// probability or kappa tables.
///
/// # Safety
/// `model` must be a live handle, the three sets NUL-terminated strings and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vn_model_query(
    model_ptr: *const VnModel,
    r: *const c_char,
    s: *const c_char,
    v: *const c_char,
    criterion: VnCriterion,
    out: *mut VnVerdict,
) -> VnStatus {
    guard(|| {
        let m = model(model_ptr)?;
        if out.is_null() {
            return Err(Failure(VnStatus::NullPointer, "out is null".into()));
        }
        let r: VarSet = names(r, "r")?.into_iter().collect();
        let s: VarSet = names(s, "s")?.into_iter().collect();
        let v: VarSet = names(v, "v")?.into_iter().collect();
        let need_dag = || {
            m.file.dag().ok_or_else(|| Failure(VnStatus::Unsupported, "criterion needs a dag model".into()))
        };
        let (c, holds) = match criterion {
            VnCriterion::VnSeparation => (Criterion::VnSeparation, StructuralOracle::new(&m.network).holds(&r, &s, &v)?),
            VnCriterion::DSeparation => (Criterion::DSeparation, d_separated(need_dag()?, &r, &s, &v)?),
            VnCriterion::Moralization => (Criterion::Moralization, moral_separated(need_dag()?, &r, &s, &v)?),
            VnCriterion::Numeric => {
                if !m.file.has_tables() {
                    return Err(Failure(VnStatus::Unsupported, "numeric criterion needs tables".into()));
                }
                if r.is_empty() || s.is_empty() {
                    return Err(Failure(VnStatus::ModelError, "r and s must be non-empty".into()));
                }
                (Criterion::Numeric, numeric_holds(&m.network.joint()?, &r, &s, &v)?)
            }
        };
        *out = match c.verdict(holds) {
            Verdict::Independent => VnVerdict::Independent,
            Verdict::NotDerivable => VnVerdict::NotDerivable,
            Verdict::NotIndependent => VnVerdict::NotIndependent,
        };
        Ok(())
    })
}

/// Writes the marginal for `target` (row-major in the listed order, last
/// variable fastest) into `buf`. Kappa ranks are written as doubles with
/// infinity for impossible configurations. `*written` always receives the
/// required length; if `len` is smaller, nothing is written and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `model` must be a live handle, `target` a NUL-terminated string, `buf`
/// valid for `len` doubles (or null when `len` is 0) and `written` valid.
#[no_mangle]
pub unsafe extern "C" fn vn_model_marginal(
    model_ptr: *const VnModel,
    target: *const c_char,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> VnStatus {
    guard(|| {
        let m = model(model_ptr)?;
        if written.is_null() {
            return Err(Failure(VnStatus::NullPointer, "written is null".into()));
        }
        let target = names(target, "target")?;
        let marginal = valnet::fusion::marginal(&m.network, &target)?;
        let values: Vec<f64> = match marginal.table() {
            Table::Real(x) => x.clone(),
            Table::Rank(x) => x.iter().map(|r| r.finite().map_or(f64::INFINITY, |k| k as f64)).collect(),
        };
        *written = values.len();
        if len < values.len() {
            return Err(Failure(VnStatus::BufferTooSmall, format!("need {} entries, got {len}", values.len())));
        }
        if buf.is_null() {
            return Err(Failure(VnStatus::NullPointer, "buf is null".into()));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
        Ok(())
    })
}

/// Graphviz rendering of the network.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vn_model_dot(model_ptr: *const VnModel, out: *mut *mut c_char) -> VnStatus {
    guard(|| {
        let m = model(model_ptr)?;
        if out.is_null() {
            return Err(Failure(VnStatus::NullPointer, "out is null".into()));
        }
        out_string(valnet::dot::to_dot(&m.network), out)
    })
}

/// Canonical model text.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vn_model_serialize(model_ptr: *const VnModel, out: *mut *mut c_char) -> VnStatus {
    guard(|| {
        let m = model(model_ptr)?;
        if out.is_null() {
            return Err(Failure(VnStatus::NullPointer, "out is null".into()));
        }
        out_string(m.file.serialize(), out)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null after a
/// success. Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn vn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
