use std::ffi::{CStr, CString};
use std::ptr;

use sinrsched_ffi::*;

fn last_error() -> String {
    let p = sinr_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn gadget(n: usize) -> *mut SinrInstance {
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { sinr_gen_gadget(n, 2.0, &mut inst) }, SinrStatus::Ok);
    inst
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(sinr_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn gadget_queries() {
    let inst = gadget(2);
    unsafe {
        let mut n = 0;
        assert_eq!(sinr_instance_link_count(inst, &mut n), SinrStatus::Ok);
        assert_eq!(n, 4);

        let mut a = 0.0;
        assert_eq!(sinr_affectance(inst, 0, 1, true, &mut a), SinrStatus::Ok);
        assert_eq!(a, 1.0);
        assert_eq!(sinr_affectance(inst, 0, 1, false, &mut a), SinrStatus::Ok);
        assert_eq!(a, 2.0);

        let mut ok = true;
        let all = [0usize, 1, 2, 3];
        assert_eq!(sinr_is_feasible(inst, all.as_ptr(), 4, &mut ok), SinrStatus::Ok);
        assert!(!ok);
        let firsts = [0usize, 2];
        assert_eq!(sinr_is_feasible(inst, firsts.as_ptr(), 2, &mut ok), SinrStatus::Ok);
        assert!(ok);
        assert_eq!(sinr_is_delta_signal(inst, firsts.as_ptr(), 2, 2.0, &mut ok), SinrStatus::Ok);
        assert!(ok);

        let mut s = 0.0;
        assert_eq!(sinr_sinr(inst, 0, firsts.as_ptr(), 2, &mut s), SinrStatus::Ok);
        // gadget 2 sender at 8, link 0 receiver at 5: SINR = 3^2
        assert!((s - 9.0).abs() < 1e-9);

        let mut t = 0;
        assert_eq!(sinr_scheduling_number_exact(inst, &mut t), SinrStatus::Ok);
        assert_eq!(t, 2);
        let mut lam = 0.0;
        assert_eq!(sinr_lambda_exact(inst, &mut lam), SinrStatus::Ok);
        assert!(lam > 0.0);
        let mut abar = 0.0;
        assert_eq!(sinr_max_avg_affectance(inst, true, &mut abar), SinrStatus::Ok);
        assert!(abar >= 1.0);
        sinr_instance_free(inst);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let inst = gadget(2);
        let mut a = 0.0;
        assert_eq!(sinr_affectance(inst, 0, 9, true, &mut a), SinrStatus::UnknownLink);
        assert!(last_error().contains('9'));
        assert_eq!(sinr_affectance(ptr::null(), 0, 1, true, &mut a), SinrStatus::NullPointer);
        assert!(last_error().contains("instance"));
        assert_eq!(sinr_affectance(inst, 0, 1, true, ptr::null_mut()), SinrStatus::NullPointer);
        sinr_instance_free(inst);

        let mut bad = ptr::null_mut();
        assert_eq!(sinr_gen_gadget(1, 2.0, &mut bad), SinrStatus::InvalidArgument);
        assert!(bad.is_null());

        let big = gadget(8);
        let mut t = 0;
        assert_eq!(sinr_scheduling_number_exact(big, &mut t), SinrStatus::TooLarge);
        sinr_instance_free(big);

        let json = CString::new("{\"metric\": 3}").unwrap();
        assert_eq!(sinr_instance_from_json(json.as_ptr(), &mut bad), SinrStatus::Parse);
        let path = CString::new("/nonexistent/instance.json").unwrap();
        assert_eq!(sinr_instance_load(path.as_ptr(), &mut bad), SinrStatus::Io);
        assert!(last_error().contains("/nonexistent/instance.json"));
    }
}

#[test]
fn json_round_trip_and_files() {
    unsafe {
        let inst = gadget(3);
        let mut text = ptr::null_mut();
        assert_eq!(sinr_instance_to_json(inst, &mut text), SinrStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(sinr_instance_from_json(text, &mut back), SinrStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(sinr_instance_to_json(back, &mut again), SinrStatus::Ok);
        assert_eq!(CStr::from_ptr(text), CStr::from_ptr(again));

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("g.json").to_str().unwrap()).unwrap();
        assert_eq!(sinr_instance_save(inst, path.as_ptr()), SinrStatus::Ok);
        let mut loaded = ptr::null_mut();
        assert_eq!(sinr_instance_load(path.as_ptr(), &mut loaded), SinrStatus::Ok);
        let mut n = 0;
        sinr_instance_link_count(loaded, &mut n);
        assert_eq!(n, 6);

        sinr_string_free(text);
        sinr_string_free(again);
        for p in [inst, back, loaded] {
            sinr_instance_free(p);
        }
        sinr_instance_free(ptr::null_mut());
        sinr_string_free(ptr::null_mut());
    }
}

#[test]
fn simulate_and_inspect_trace() {
    unsafe {
        let inst = gadget(8);
        let mut cfg = sinr_sim_config_default();
        cfg.seed = 1;
        cfg.explicit_ack = true;
        let mut tr = ptr::null_mut();
        assert_eq!(sinr_simulate(inst, &cfg, &mut tr), SinrStatus::Ok);
        let (mut done, mut truncated, mut run) = (0u64, true, 0u64);
        sinr_trace_completion_slot(tr, &mut done);
        sinr_trace_truncated(tr, &mut truncated);
        sinr_trace_slots_run(tr, &mut run);
        assert!(!truncated && done == run && done > 0);
        let mut latest = 0;
        for l in 0..16 {
            let mut c = 0;
            assert_eq!(sinr_trace_link_completion(tr, l, &mut c), SinrStatus::Ok);
            assert_eq!(c % 2, 0);
            latest = latest.max(c);
        }
        assert_eq!(latest, done);
        let mut c = 0;
        assert_eq!(sinr_trace_link_completion(tr, 16, &mut c), SinrStatus::UnknownLink);
        let mut json = ptr::null_mut();
        assert_eq!(sinr_trace_to_json(tr, &mut json), SinrStatus::Ok);
        assert!(CStr::from_ptr(json).to_str().unwrap().contains("\"ack\""));
        sinr_string_free(json);
        sinr_trace_free(tr);

        cfg.c3 = -1.0;
        let mut none = ptr::null_mut();
        assert_eq!(sinr_simulate(inst, &cfg, &mut none), SinrStatus::InvalidArgument);
        sinr_instance_free(inst);
    }
}

#[test]
fn generators_and_dual() {
    unsafe {
        let mut ab = ptr::null_mut();
        assert_eq!(sinr_gen_hub_tree(5, 2.0, 0.0, 0.0, &mut ab), SinrStatus::Ok);
        let mut t = 0;
        assert_eq!(sinr_scheduling_number_exact(ab, &mut t), SinrStatus::Ok);
        assert_eq!(t, 2);
        sinr_instance_free(ab);

        let mut r = ptr::null_mut();
        assert_eq!(sinr_gen_random(10, 3.0, 1.0, 0.0, 4, &mut r), SinrStatus::Ok);
        let mut d = ptr::null_mut();
        assert_eq!(sinr_dual_instance(r, &mut d), SinrStatus::Ok);
        let mut n = 0;
        sinr_instance_link_count(d, &mut n);
        assert_eq!(n, 10);
        sinr_instance_free(r);
        sinr_instance_free(d);
    }
}
