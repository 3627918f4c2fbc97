use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use valnet_ffi::*;

fn models() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/models")
}

fn parse(name: &str) -> *mut VnModel {
    let text = CString::new(std::fs::read_to_string(models().join(name)).unwrap()).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { vn_model_parse(text.as_ptr(), &mut m) }, VnStatus::Ok);
    assert!(!m.is_null());
    m
}

fn query(m: *const VnModel, r: &str, s: &str, v: &str, c: VnCriterion) -> Result<VnVerdict, VnStatus> {
    let (r, s, v) = (CString::new(r).unwrap(), CString::new(s).unwrap(), CString::new(v).unwrap());
    let mut out = VnVerdict::NotDerivable;
    match unsafe { vn_model_query(m, r.as_ptr(), s.as_ptr(), v.as_ptr(), c, &mut out) } {
        VnStatus::Ok => Ok(out),
        e => Err(e),
    }
}

fn last_error() -> String {
    let p = vn_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take(p: *mut std::os::raw::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { vn_string_free(p) };
    s
}

#[test]
fn counts_and_queries() {
    let m = parse("fork.dag");
    unsafe {
        assert_eq!(vn_model_variable_count(m), 5);
        assert_eq!(vn_model_node_count(m), 5);
        assert!(!vn_model_has_tables(m));
    }
    assert_eq!(query(m, "W", "X", "V", VnCriterion::VnSeparation), Ok(VnVerdict::Independent));
    assert_eq!(query(m, "W", "X", "V,Z", VnCriterion::VnSeparation), Ok(VnVerdict::NotDerivable));
    assert_eq!(query(m, "W", "X", "V", VnCriterion::DSeparation), Ok(VnVerdict::Independent));
    assert_eq!(query(m, "W", "X", "V,Z", VnCriterion::Moralization), Ok(VnVerdict::NotDerivable));
    assert_eq!(query(m, "W", "X", "", VnCriterion::Numeric), Err(VnStatus::Unsupported));
    assert!(last_error().contains("tables"));
    assert_eq!(query(m, "Q", "X", "", VnCriterion::VnSeparation), Err(VnStatus::ModelError));
    unsafe { vn_model_free(m) };
}

#[test]
fn numeric_verdicts() {
    let m = parse("tabled.vn");
    let mut kind = VnAlgebra::Kappa;
    assert_eq!(unsafe { vn_model_algebra(m, &mut kind) }, VnStatus::Ok);
    assert_eq!(kind, VnAlgebra::Probability);
    assert_eq!(query(m, "W", "X", "V", VnCriterion::Numeric), Ok(VnVerdict::Independent));
    assert_eq!(query(m, "W", "X", "", VnCriterion::Numeric), Ok(VnVerdict::NotIndependent));
    assert_eq!(query(m, "W", "X", "", VnCriterion::DSeparation), Err(VnStatus::Unsupported));
    unsafe { vn_model_free(m) };
}

#[test]
fn marginal_buffers() {
    let m = parse("kappa_chain.vn");
    let target = CString::new("W,Y").unwrap();
    let mut written = 0;
    let status = unsafe { vn_model_marginal(m, target.as_ptr(), ptr::null_mut(), 0, &mut written) };
    assert_eq!((status, written), (VnStatus::BufferTooSmall, 4));
    let mut buf = [0.0; 4];
    let status = unsafe { vn_model_marginal(m, target.as_ptr(), buf.as_mut_ptr(), buf.len(), &mut written) };
    assert_eq!(status, VnStatus::Ok);
    assert_eq!(buf, [0.0, 1.0, 2.0, 2.0]);
    assert!(vn_last_error().is_null());
    unsafe { vn_model_free(m) };

    let m = parse("tabled.vn");
    let target = CString::new("V").unwrap();
    let mut buf = [0.0; 2];
    assert_eq!(unsafe { vn_model_marginal(m, target.as_ptr(), buf.as_mut_ptr(), 2, &mut written) }, VnStatus::Ok);
    assert!((buf[0] - 0.6).abs() < 1e-12 && (buf[1] - 0.4).abs() < 1e-12);
    unsafe { vn_model_free(m) };
}

#[test]
fn impossible_ranks_are_infinite() {
    let m = parse("kappa_chain.vn");
    let target = CString::new("X,Y,Z").unwrap();
    let mut buf = [0.0; 8];
    let mut written = 0;
    assert_eq!(unsafe { vn_model_marginal(m, target.as_ptr(), buf.as_mut_ptr(), 8, &mut written) }, VnStatus::Ok);
    assert!(buf.iter().any(|x| x.is_infinite()));
    unsafe { vn_model_free(m) };
}

#[test]
fn strings_round_trip() {
    let m = parse("kappa_chain.vn");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { vn_model_serialize(m, &mut out) }, VnStatus::Ok);
    let text = take(out);
    let again = CString::new(text.clone()).unwrap();
    let mut m2 = ptr::null_mut();
    assert_eq!(unsafe { vn_model_parse(again.as_ptr(), &mut m2) }, VnStatus::Ok);
    let mut out2 = ptr::null_mut();
    assert_eq!(unsafe { vn_model_serialize(m2, &mut out2) }, VnStatus::Ok);
    assert_eq!(take(out2), text);
    assert_eq!(unsafe { vn_model_dot(m, &mut out) }, VnStatus::Ok);
    assert!(take(out).starts_with("graph vn {"));
    unsafe {
        vn_model_free(m);
        vn_model_free(m2);
    }
}

#[test]
fn errors_are_reported() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { vn_model_parse(ptr::null(), &mut m) }, VnStatus::NullPointer);
    let bad = CString::new("model vn\nvar A 2\nbogus\n").unwrap();
    assert_eq!(unsafe { vn_model_parse(bad.as_ptr(), &mut m) }, VnStatus::ParseError);
    assert!(m.is_null());
    assert!(last_error().contains("line 3"));
    let cyclic = CString::new("model dag\nvar A 2\nvar B 2\narc A B\narc B A\n").unwrap();
    assert_eq!(unsafe { vn_model_parse(cyclic.as_ptr(), &mut m) }, VnStatus::ModelError);
    let invalid = [0xffu8, 0];
    assert_eq!(unsafe { vn_model_parse(invalid.as_ptr().cast(), &mut m) }, VnStatus::InvalidUtf8);
    assert_eq!(query(ptr::null(), "A", "B", "", VnCriterion::VnSeparation), Err(VnStatus::NullPointer));
    unsafe {
        assert_eq!(vn_model_variable_count(ptr::null()), 0);
        vn_model_free(ptr::null_mut());
        vn_string_free(ptr::null_mut());
    }
}

#[test]
fn c_program_links_against_the_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/valnet.h");
    assert!(header.exists(), "header not generated");
    let deps = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../target/debug");
    let lib = deps.join("libvalnet_ffi.a");
    if !lib.exists() {
        eprintln!("skipping C smoke test: {} not built", lib.display());
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("valnet_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status();
    let Ok(status) = status else {
        eprintln!("skipping C smoke test: no C compiler");
        return;
    };
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "0 1 2 2\nok\n");
}
