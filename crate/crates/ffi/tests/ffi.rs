use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use nuinarch_ffi::*;

fn last_error() -> String {
    let p = nu_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn series_round_trip_and_estimates() {
    let values: Vec<u64> = vec![0, 2, 2, 2, 2, 2];
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(nu_series_new(values.as_ptr(), values.len(), &mut s), NuStatus::Ok);
        assert_eq!(nu_series_len(s), 6);
        let mut buf = vec![0u64; 6];
        assert_eq!(nu_series_values(s, buf.as_mut_ptr(), buf.len()), NuStatus::Ok);
        assert_eq!(buf, values);
        assert_eq!(nu_series_values(s, buf.as_mut_ptr(), 3), NuStatus::InvalidArgument);

        let mut alpha = 0.0;
        assert_eq!(nu_cls_alpha(s, 1.0, &mut alpha), NuStatus::Ok);
        assert_eq!(alpha, 0.5);

        let (mut b, mut a, mut l) = (0.0, 0.0, 0.0);
        assert_eq!(nu_cml_fit(s, 0, 0.0, &mut b, &mut a, &mut l), NuStatus::Ok);
        assert!((b - 2.0).abs() < 1e-9);
        nu_series_free(s);
    }
}

#[test]
fn error_statuses_and_messages() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(nu_series_simulate(-1.0, 0.5, 0, 10, 1, 0, &mut s), NuStatus::InvalidArgument);
        assert!(last_error().contains("beta"));
        assert!(s.is_null());

        let zeros = [0u64; 5];
        assert_eq!(nu_series_new(zeros.as_ptr(), 5, &mut s), NuStatus::Ok);
        let mut alpha = 0.0;
        assert_eq!(nu_cls_alpha(s, 1.0, &mut alpha), NuStatus::NumericalError);
        assert_eq!(nu_cls_alpha(s, 1.0, ptr::null_mut()), NuStatus::NullPointer);
        assert!(last_error().contains("alpha_hat"));
        nu_series_free(s);

        let short = [1u64, 2];
        assert_eq!(nu_series_new(short.as_ptr(), 2, &mut s), NuStatus::Ok);
        assert_eq!(nu_cls_alpha(s, 1.0, &mut alpha), NuStatus::DataError);
        nu_series_free(s);

        // success clears the message
        assert_eq!(nu_series_new(short.as_ptr(), 2, &mut s), NuStatus::Ok);
        assert!(nu_last_error().is_null());
        nu_series_free(s);
        nu_series_free(ptr::null_mut());
        nu_limit_free(ptr::null_mut());
    }
}

#[test]
fn limit_tables_and_unit_root_test() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("d0.json").to_str().unwrap()).unwrap();
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(nu_limit_sample(1.0, 0.0, 200, 1000, 5, &mut d), NuStatus::Ok);
        assert_eq!(nu_limit_len(d), 1000);
        let mut q = 0.0;
        assert_eq!(nu_limit_quantile(d, 0.05, &mut q), NuStatus::Ok);
        let mut p = 0.0;
        assert_eq!(nu_limit_cdf(d, q, &mut p), NuStatus::Ok);
        assert!((p - 0.05).abs() < 1e-12);
        assert_eq!(nu_limit_quantile(d, 0.0, &mut q), NuStatus::InvalidArgument);

        assert_eq!(nu_limit_write_table(d, path.as_ptr()), NuStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(nu_limit_read_table(path.as_ptr(), 1.0, 0.0, &mut back), NuStatus::Ok);
        let mut q2 = 0.0;
        assert_eq!(nu_limit_quantile(back, 0.05, &mut q2), NuStatus::Ok);
        assert_eq!(nu_limit_quantile(d, 0.05, &mut q), NuStatus::Ok);
        assert_eq!(q.to_bits(), q2.to_bits());
        let mut wrong = ptr::null_mut();
        assert_eq!(nu_limit_read_table(path.as_ptr(), 2.0, 0.0, &mut wrong), NuStatus::InvalidArgument);
        assert!(last_error().contains("beta"));

        let mut s = ptr::null_mut();
        assert_eq!(nu_series_simulate(1.0, 1.0, 0, 200, 9, 0, &mut s), NuStatus::Ok);
        let mut r = NuUrtResult::default();
        assert_eq!(nu_unit_root_test(s, 1.0, d, 0.05, &mut r), NuStatus::Ok);
        assert_eq!(r.n, 200);
        assert_eq!(r.reject == 1, r.statistic < r.critical_value);
        assert_eq!(r.reject == 1, r.p_value < 0.05);

        let mut ci = NuInterval::default();
        assert_eq!(nu_ci_nearly_unstable(s, 1.0, 0.95, 200, 1000, 1, &mut ci), NuStatus::Ok);
        assert!(ci.lower < ci.upper);
        let mut st = NuInterval::default();
        let mut st_series = ptr::null_mut();
        assert_eq!(nu_series_simulate(1.0, 0.5, 0, 500, 2, 0, &mut st_series), NuStatus::Ok);
        assert_eq!(nu_ci_stationary(st_series, 1.0, 0.95, &mut st), NuStatus::Ok);
        assert!(st.lower < 0.5 + 0.2 && st.upper > 0.5 - 0.2);

        nu_series_free(st_series);
        nu_series_free(s);
        nu_limit_free(back);
        nu_limit_free(d);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/nuinarch.h")).unwrap();
    for name in [
        "nu_last_error",
        "nu_series_new",
        "nu_series_simulate",
        "nu_series_len",
        "nu_series_values",
        "nu_series_free",
        "nu_cls_alpha",
        "nu_cml_fit",
        "nu_limit_sample",
        "nu_limit_len",
        "nu_limit_quantile",
        "nu_limit_cdf",
        "nu_limit_write_table",
        "nu_limit_read_table",
        "nu_limit_free",
        "nu_unit_root_test",
        "nu_ci_stationary",
        "nu_ci_nearly_unstable",
        "typedef struct NuSeries NuSeries",
        "NU_STATUS_NUMERICAL_ERROR = 4",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

/// Compile the C smoke test against the generated header and static library.
#[test]
fn c_program_links_and_runs() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libnuinarch_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let output = Command::new(&exe).output().unwrap();
    assert!(
        output.status.success(),
        "smoke test exited with {:?}: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    let text = String::from_utf8(output.stdout).unwrap();
    assert_eq!(text.split_whitespace().count(), 3);
}
