use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use enriques_bn_ffi::*;

fn class(literal: &str, config: *const EbnConfig) -> *mut EbnClass {
    let text = CString::new(literal).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ebn_class_parse(text.as_ptr(), config, &mut out) }, EbnStatus::Ok);
    out
}

fn last_error() -> String {
    let p = ebn_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn coordinates_round_trip() {
    let coords = [1i64, 2, 0, 0, 0, 0, 0, 0, 0, -1];
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(ebn_class_from_coords(coords.as_ptr(), coords.len(), true, &mut c), EbnStatus::Ok);
        let mut back = [0i64; EBN_RANK];
        let mut t = false;
        assert_eq!(ebn_class_coords(c, back.as_mut_ptr(), &mut t), EbnStatus::Ok);
        assert_eq!((back, t), (coords, true));
        let mut json = ptr::null_mut();
        assert_eq!(ebn_class_to_json(c, &mut json), EbnStatus::Ok);
        assert_eq!(CStr::from_ptr(json).to_str().unwrap(), r#"{"coords":[1,2,0,0,0,0,0,0,0,-1],"torsion":1}"#);
        ebn_string_free(json);
        ebn_class_free(c);
    }
}

#[test]
fn wrong_length_and_nulls() {
    let coords = [1i64, 2];
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(ebn_class_from_coords(coords.as_ptr(), 2, false, &mut c), EbnStatus::InvalidArgument);
        assert!(c.is_null());
        assert_eq!(ebn_class_from_coords(ptr::null(), 10, false, &mut c), EbnStatus::NullPointer);
        assert_eq!(ebn_class_parse(ptr::null(), ptr::null(), &mut c), EbnStatus::NullPointer);
        let mut v = 0;
        assert_eq!(ebn_class_dot(ptr::null(), ptr::null(), &mut v), EbnStatus::NullPointer);
        ebn_class_free(ptr::null_mut());
        ebn_string_free(ptr::null_mut());
    }
}

#[test]
fn cohomology_and_pairing() {
    let a = class("3f+K", ptr::null());
    let b = class("g", ptr::null());
    unsafe {
        let mut h = EbnCohomology::default();
        assert_eq!(ebn_class_cohomology(a, &mut h), EbnStatus::Ok);
        assert_eq!(h, EbnCohomology { h0: 2, h1: 1, h2: 0, chi: 1 });
        let mut v = 0;
        assert_eq!(ebn_class_dot(a, b, &mut v), EbnStatus::Ok);
        assert_eq!(v, 3);
        let mut ample = true;
        assert_eq!(ebn_class_is_ample(a, &mut ample), EbnStatus::Ok);
        assert!(!ample);
        ebn_class_free(a);
        ebn_class_free(b);
    }
}

#[test]
fn gonality_and_errors() {
    let name = CString::new("i:2").unwrap();
    let mut cfg = ptr::null_mut();
    unsafe {
        assert_eq!(ebn_config_new(name.as_ptr(), &mut cfg), EbnStatus::Ok);
        let l = class("2E1+4E2", cfg);
        let mut g = EbnGonality::default();
        assert_eq!(ebn_gonality(l, 0, &mut g), EbnStatus::Ok);
        assert_eq!((g.phi, g.k, g.genus), (2, 4, 9));
        assert_eq!(g.mu, -1);
        let mut mn = EbnMnBound::default();
        assert_eq!(ebn_check_mn_bound(l, 5, &mut mn), EbnStatus::Ok);
        assert_eq!((mn.min_mn, mn.k, mn.holds), (4, 4, true));
        assert_eq!(ebn_check_mn_bound(l, 99, &mut mn), EbnStatus::InvalidArgument);
        assert!(last_error().contains("outside the range"));
        ebn_class_free(l);

        let not_ample = class("-f", ptr::null());
        assert_eq!(ebn_gonality(not_ample, 0, &mut g), EbnStatus::Domain);
        ebn_class_free(not_ample);
        ebn_config_free(cfg);

        let big = CString::new("custom:[[0,60],[60,0]]").unwrap();
        assert_eq!(ebn_config_new(big.as_ptr(), &mut cfg), EbnStatus::SearchExhausted);
    }
    assert!(last_error().contains("search bounds"));
    assert_eq!(ebn_rho(1, 1, 1), -1);
    let mut r = EbnExample51::default();
    assert_eq!(unsafe { ebn_example_5_1(3, &mut r) }, EbnStatus::Ok);
    assert!(ebn_last_error_message().is_null());
}

#[test]
fn example_and_rho() {
    let mut r = EbnExample51::default();
    unsafe {
        assert_eq!(ebn_example_5_1(4, &mut r), EbnStatus::Ok);
        assert_eq!((r.k, r.gon_special, r.g), (14, 12, 33));
        assert_eq!(ebn_example_5_1(2, &mut r), EbnStatus::InvalidArgument);
    }
    assert_eq!(ebn_rho(9, 1, 5), -1);
}

#[test]
fn run_cli_matches_binary_contract() {
    let args: Vec<CString> = ["lattice", "--print-gram"].iter().map(|s| CString::new(*s).unwrap()).collect();
    let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let (mut code, mut out, mut err) = (-1, ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(ebn_run_cli(argv.as_ptr(), argv.len(), &mut code, &mut out, &mut err), EbnStatus::Ok);
        assert_eq!(code, 0);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap().lines().count(), 10);
        ebn_string_free(out);
        ebn_string_free(err);

        let bogus = [c"--bogus".as_ptr()];
        assert_eq!(ebn_run_cli(bogus.as_ptr(), 1, &mut code, ptr::null_mut(), &mut err), EbnStatus::Ok);
        assert_eq!(code, 1);
        assert!(CStr::from_ptr(err).to_str().unwrap().contains("--bogus"));
        ebn_string_free(err);
    }
}

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libenriques_bn_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let exe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("ebn_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
