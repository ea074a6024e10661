use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use dp5_ffi::*;

#[test]
fn counts_through_handles() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(dp5_count_report_new(50, true, true, 0.0, 1, &mut r), Dp5Status::Ok);
        let (mut a, mut b) = (0, 0);
        assert_eq!(dp5_count_report_naive(r, &mut a), Dp5Status::Ok);
        assert_eq!(dp5_count_report_torsor(r, &mut b), Dp5Status::Ok);
        assert_eq!((a, b), (940, 940));
        let mut split = [0u64; 3];
        assert_eq!(dp5_count_report_split(r, split.as_mut_ptr()), Dp5Status::Unavailable);
        dp5_count_report_free(r);
        dp5_count_report_free(ptr::null_mut());
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut n = 0;
        assert_eq!(dp5_count_torsor(0, 1, &mut n), Dp5Status::InvalidArgument);
        let msg = CStr::from_ptr(dp5_last_error()).to_str().unwrap();
        assert!(msg.contains("nonzero"), "{msg}");
        assert_eq!(dp5_count_naive(501, 1, &mut n), Dp5Status::NaiveBoundExceeded);
        let (mut v, mut e) = (0.0, 0.0);
        assert_eq!(dp5_euler_product(1, &mut v, &mut e), Dp5Status::InvalidArgument);
        assert_eq!(dp5_omega_infty(-1.0, &mut v, &mut e), Dp5Status::InvalidArgument);
        // not a torsor point: the equation fails
        let eta = [1i64; 6];
        let alpha = [1i64, 1];
        let mut x = [0i64; 6];
        assert_eq!(dp5_psi(eta.as_ptr(), alpha.as_ptr(), x.as_mut_ptr()), Dp5Status::InvalidArgument);
    }
}

#[test]
fn constant_handle() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(dp5_constant_new(1e-3, 10_000, &mut c), Dp5Status::Ok);
        let (mut v, mut e) = (0.0, 0.0);
        assert_eq!(dp5_constant_value(c, &mut v, &mut e), Dp5Status::Ok);
        assert!(v > 0.0 && e > 0.0 && e < v);
        let (mut w, mut we) = (0.0, 0.0);
        assert_eq!(dp5_constant_omega(c, &mut w, &mut we), Dp5Status::Ok);
        let (mut w2, mut we2) = (0.0, 0.0);
        assert_eq!(dp5_omega_infty(1e-3, &mut w2, &mut we2), Dp5Status::Ok);
        assert_eq!(w, w2);
        dp5_constant_free(c);
    }
}

/// Builds `smoke.c` against the generated header and the static library.
/// Test builds only produce the rlib, so the library is built here first.
#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let built = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "dp5-ffi", "--lib"])
        .current_dir(&manifest)
        .status()
        .expect("running cargo");
    assert!(built.success(), "building the static library failed");
    let exe = std::env::current_exe().unwrap();
    // target/<profile>/deps/<test binary>
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libdp5_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let out = std::env::temp_dir().join(format!("dp5-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("running cc");
    assert!(status.success(), "compiling smoke.c failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(
        run.status.success(),
        "smoke test failed: {}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
