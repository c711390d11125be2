use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use entropy_collapse_ffi::*;

fn last_error() -> String {
    let p = ecl_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn uniform_entropy_and_probs() {
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(ecl_distribution_uniform(4, &mut d), EclStatus::Ok);
        assert_eq!(ecl_distribution_len(d), 4);
        let mut buf = [0.0; 4];
        assert_eq!(ecl_distribution_probs(d, buf.as_mut_ptr(), 4), EclStatus::Ok);
        assert_eq!(buf, [0.25; 4]);
        let mut h = 0.0;
        assert_eq!(ecl_entropy(d, 1.0, &mut h), EclStatus::Ok);
        assert!((h - 4f64.ln()).abs() < 1e-15);
        assert_eq!(ecl_entropy(d, 2.0, &mut h), EclStatus::Ok);
        assert!((h - 4f64.ln()).abs() < 1e-15);
        assert!((ecl_normalized_entropy(d) - 1.0).abs() < 1e-15);

        assert_eq!(ecl_distribution_probs(d, buf.as_mut_ptr(), 3), EclStatus::InvalidArgument);
        assert_eq!(ecl_entropy(d, -1.0, &mut h), EclStatus::InvalidArgument);
        assert!(last_error().contains('q'));
        ecl_distribution_free(d);
    }
}

#[test]
fn bad_inputs_map_to_status_codes() {
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(ecl_distribution_uniform(1, &mut d), EclStatus::InvalidDimension);
        assert!(d.is_null());
        assert_eq!(ecl_distribution_uniform(3, ptr::null_mut()), EclStatus::NullPointer);
        let bad = [0.5, 0.6];
        assert_ne!(ecl_distribution_from_probs(bad.as_ptr(), 2, &mut d), EclStatus::Ok);
        assert!(d.is_null());
        assert_eq!(ecl_distribution_from_probs(ptr::null(), 2, &mut d), EclStatus::NullPointer);
        assert_eq!(ecl_distribution_len(ptr::null()), 0);
        assert!(ecl_normalized_entropy(ptr::null()).is_nan());
        ecl_distribution_free(ptr::null_mut());
        ecl_trajectory_free(ptr::null_mut());
    }
}

#[test]
fn from_probs_copies() {
    let probs = [0.7, 0.2, 0.1];
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(ecl_distribution_from_probs(probs.as_ptr(), 3, &mut d), EclStatus::Ok);
        let mut out = [0.0; 3];
        ecl_distribution_probs(d, out.as_mut_ptr(), 3);
        assert_eq!(out, probs);
        ecl_distribution_free(d);
    }
}

#[test]
fn evolve_matches_core_and_is_deterministic() {
    let mut p0 = ptr::null_mut();
    let mut a = ptr::null_mut();
    let mut b = ptr::null_mut();
    unsafe {
        assert_eq!(ecl_distribution_dirichlet(50, 42, 7, &mut p0), EclStatus::Ok);
        for t in [&mut a, &mut b] {
            let s = ecl_evolve(p0, 1.5, 0.003, EclRule::Replicator, 0.05, 100, 42, 7, t);
            assert_eq!(s, EclStatus::Ok);
        }
        assert_eq!(ecl_trajectory_len(a), 101);
        let mut xa = vec![0.0; 101];
        let mut xb = vec![0.0; 101];
        ecl_trajectory_entropy_norm(a, xa.as_mut_ptr(), 101);
        ecl_trajectory_entropy_norm(b, xb.as_mut_ptr(), 101);
        assert_eq!(xa, xb);
        assert!(xa[100] < xa[0]);

        let mut last = ptr::null_mut();
        assert_eq!(ecl_trajectory_final_state(a, &mut last), EclStatus::Ok);
        assert!((ecl_normalized_entropy(last) - xa[100]).abs() < 1e-15);

        let mut bad = ptr::null_mut();
        assert_eq!(
            ecl_evolve(p0, -1.0, 0.003, EclRule::Softmax, 0.0, 10, 0, 0, &mut bad),
            EclStatus::InvalidArgument
        );
        assert!(last_error().contains("alpha"));
        assert_eq!(
            ecl_evolve(p0, 1.0, 0.003, EclRule::Softmax, 0.0, 0, 0, 0, &mut bad),
            EclStatus::InvalidArgument
        );
        assert!(bad.is_null());

        for h in [p0, last] {
            ecl_distribution_free(h);
        }
        ecl_trajectory_free(a);
        ecl_trajectory_free(b);
    }
}

#[test]
fn write_csv_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let mut p0 = ptr::null_mut();
    let mut t = ptr::null_mut();
    unsafe {
        ecl_distribution_uniform(10, &mut p0);
        ecl_evolve(p0, 0.5, 0.01, EclRule::Multiplicative, 0.0, 20, 1, 0, &mut t);
        let path = CString::new(dir.path().join("t.csv").to_str().unwrap()).unwrap();
        assert_eq!(ecl_trajectory_write_csv(t, path.as_ptr()), EclStatus::Ok);
        let text = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
        assert_eq!(text.lines().count(), 22);

        std::fs::write(dir.path().join("file"), "x").unwrap();
        let blocked = CString::new(dir.path().join("file/t.csv").to_str().unwrap()).unwrap();
        assert_eq!(ecl_trajectory_write_csv(t, blocked.as_ptr()), EclStatus::Io);
        assert_eq!(ecl_trajectory_write_csv(t, ptr::null()), EclStatus::NullPointer);
        ecl_trajectory_free(t);
        ecl_distribution_free(p0);
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(ecl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

const SMOKE_C: &str = r#"
#include <math.h>
#include <stdio.h>
#include "entropy_collapse.h"

int main(void) {
    EclDistribution *p0 = NULL;
    EclTrajectory *t = NULL;
    if (ecl_distribution_uniform(1, &p0) != ECL_STATUS_INVALID_DIMENSION) return 10;
    if (ecl_last_error() == NULL) return 11;
    if (ecl_distribution_dirichlet(20, 42, 0, &p0) != ECL_STATUS_OK) return 12;
    if (ecl_evolve(p0, 1.5, 0.003, ECL_RULE_SOFTMAX, 0.0, 50, 42, 0, &t) != ECL_STATUS_OK) return 13;
    size_t n = ecl_trajectory_len(t);
    double h[51];
    if (n != 51 || ecl_trajectory_entropy_norm(t, h, n) != ECL_STATUS_OK) return 14;
    printf("%.17g %.17g\n", h[0], h[50]);
    ecl_trajectory_free(t);
    ecl_distribution_free(p0);
    return 0;
}
"#;

// Compile a C program against the generated header and the static library.
// Skipped when no C compiler or no staticlib is available.
#[test]
fn c_smoke_test() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libentropy_collapse_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping C smoke test: no compiler or {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, SMOKE_C).unwrap();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&header_dir)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    let text = String::from_utf8(out.stdout).unwrap();
    let vals: Vec<f64> = text.split_whitespace().map(|s| s.parse().unwrap()).collect();
    let mut p0 = ptr::null_mut();
    let mut t = ptr::null_mut();
    let mut h = vec![0.0; 51];
    unsafe {
        ecl_distribution_dirichlet(20, 42, 0, &mut p0);
        ecl_evolve(p0, 1.5, 0.003, EclRule::Softmax, 0.0, 50, 42, 0, &mut t);
        ecl_trajectory_entropy_norm(t, h.as_mut_ptr(), 51);
        ecl_trajectory_free(t);
        ecl_distribution_free(p0);
    }
    assert_eq!(vals, vec![h[0], h[50]]);
}
