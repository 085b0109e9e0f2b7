use std::ffi::CStr;
use std::ptr;

use qdephase_ffi::*;

fn spec(alpha: f64, omega0: f64) -> *mut QdNoiseSpec {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { qd_noise_spec_new(alpha, omega0, 50.0, 0.0, &mut h) }, QdStatus::Ok);
    assert!(!h.is_null());
    h
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qd_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn handle_lifecycle_and_gamma() {
    let h = spec(0.5, 0.06285);
    unsafe {
        assert_eq!(qd_noise_spec_mode_count(h), 795);
        let mut g = f64::NAN;
        assert_eq!(qd_gamma(h, 0.0, &mut g), QdStatus::Ok);
        assert_eq!(g, 0.0);
        let mut grid = vec![0.0; 2001];
        assert_eq!(qd_gamma_on_grid(h, 100.0, 2001, grid.as_mut_ptr(), grid.len()), QdStatus::Ok);
        assert_eq!(qd_gamma(h, 50.0, &mut g), QdStatus::Ok);
        assert!((grid[1000] - g).abs() < 1e-10);
        let mut d = f64::NAN;
        assert_eq!(qd_gamma_dot(h, 25.0, &mut d), QdStatus::Ok);
        assert!(d > 0.0);
        qd_noise_spec_free(h);
        qd_noise_spec_free(ptr::null_mut());
    }
}

#[test]
fn invalid_spec_reports_domain_error() {
    let mut h = ptr::null_mut();
    let status = unsafe { qd_noise_spec_new(0.5, -1.0, 50.0, 0.0, &mut h) };
    assert_eq!(status, QdStatus::Domain);
    assert!(h.is_null());
    assert!(last_error().contains("omega0"), "{}", last_error());
}

#[test]
fn null_pointers_are_rejected() {
    let mut x = 0.0;
    unsafe {
        assert_eq!(qd_gamma(ptr::null(), 1.0, &mut x), QdStatus::NullPointer);
        let h = spec(0.5, 0.1);
        assert_eq!(qd_gamma(h, 1.0, ptr::null_mut()), QdStatus::NullPointer);
        assert_eq!(qd_noise_spec_mode_count(ptr::null()), 0);
        qd_noise_spec_free(h);
    }
}

#[test]
fn short_buffer() {
    let h = spec(0.5, 0.1);
    let mut buf = [0.0; 10];
    unsafe {
        assert_eq!(qd_gamma_on_grid(h, 100.0, 2001, buf.as_mut_ptr(), buf.len()), QdStatus::BufferTooSmall);
        qd_noise_spec_free(h);
    }
    assert!(last_error().contains("2001"));
}

#[test]
fn coherence_and_blp() {
    unsafe {
        let h = spec(0.5, 0.2514);
        let (mut cz, mut cx) = (0.0, 0.0);
        assert_eq!(qd_coherence_z(h, 25.0, &mut cz), QdStatus::Ok);
        assert_eq!(qd_coherence_xy(h, 0.1257, 50.0, &mut cx), QdStatus::Ok);
        assert!(cz >= 0.98 && cx >= 0.98);
        qd_noise_spec_free(h);

        let (mut n, mut onset) = (f64::NAN, 0.0);
        let h = spec(0.5, 0.03);
        assert_eq!(qd_blp_measure(h, 100.0, 2001, &mut n, &mut onset), QdStatus::Ok);
        assert_eq!(n, 0.0);
        assert!(onset.is_nan());
        qd_noise_spec_free(h);
        let h = spec(0.5, 0.06285);
        assert_eq!(qd_blp_measure(h, 100.0, 2001, &mut n, ptr::null_mut()), QdStatus::Ok);
        assert!(n > 0.0);
        qd_noise_spec_free(h);
    }
}

#[test]
fn design_rules() {
    let mut x = 0.0;
    unsafe {
        assert_eq!(qd_critical_omega0(100.0, &mut x), QdStatus::Ok);
        assert!((x - 0.0314).abs() < 1e-4);
        assert_eq!(qd_critical_zeeman(100.0, &mut x), QdStatus::Ok);
        assert!((x - 0.0157).abs() < 1e-4);
        assert_eq!(qd_resonant_zeeman(0.2514, &mut x), QdStatus::Ok);
        assert!((x - 0.1257).abs() < 1e-4);
        assert_eq!(qd_critical_zeeman(0.0, &mut x), QdStatus::Domain);

        let mut times = [0.0; 8];
        let (mut count, mut full) = (0usize, -1);
        assert_eq!(qd_predict_z_revivals(0.2514, 100.0, times.as_mut_ptr(), 8, &mut count, &mut full), QdStatus::Ok);
        assert_eq!((count, full), (4, 1));
        assert!((times[3] - 100.0).abs() < 0.01);
        assert_eq!(
            qd_predict_z_revivals(0.2514, 100.0, times.as_mut_ptr(), 2, &mut count, &mut full),
            QdStatus::BufferTooSmall
        );
    }
}

#[test]
fn ensemble_tracks_analytic() {
    unsafe {
        let h = spec(0.5, 0.2514);
        let mut mc = vec![0.0; 201];
        assert_eq!(qd_ensemble_coherence(h, 0.1257, 1, 100.0, 201, 200, 7, mc.as_mut_ptr(), mc.len()), QdStatus::Ok);
        let mut again = vec![0.0; 201];
        qd_ensemble_coherence(h, 0.1257, 1, 100.0, 201, 200, 7, again.as_mut_ptr(), again.len());
        assert_eq!(mc, again);
        for (k, v) in mc.iter().enumerate() {
            let mut exact = 0.0;
            qd_coherence_xy(h, 0.1257, k as f64 * 0.5, &mut exact);
            assert!((v - exact).abs() < 0.25);
        }
        assert_eq!(qd_ensemble_coherence(h, 0.1, 5, 100.0, 201, 10, 7, mc.as_mut_ptr(), mc.len()), QdStatus::Domain);
        qd_noise_spec_free(h);
    }
}

#[test]
fn grape_hadamard() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re = [s, s, s, -s];
    let im = [0.0; 4];
    let mut controls = vec![0.0; 100];
    let (mut f, mut iters) = (0.0, 0usize);
    let status = unsafe {
        qd_grape_1q(re.as_ptr(), im.as_ptr(), 50, 0.1, 5.0, 2000, 0.999, 3, controls.as_mut_ptr(), controls.len(), &mut f, &mut iters)
    };
    assert_eq!(status, QdStatus::Ok, "{}", last_error());
    assert!(f >= 0.999, "{f}");
    assert!(controls.iter().all(|u| u.abs() <= 5.0));

    let bad = [2.0, 0.0, 0.0, 2.0];
    let status = unsafe {
        qd_grape_1q(bad.as_ptr(), im.as_ptr(), 50, 0.1, 5.0, 10, 0.999, 3, controls.as_mut_ptr(), controls.len(), &mut f, &mut iters)
    };
    assert_eq!(status, QdStatus::Domain);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(qd_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
