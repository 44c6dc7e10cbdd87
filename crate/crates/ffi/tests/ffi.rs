use std::ffi::{CStr, CString};
use std::ptr;

use spinchain_ffi::*;

fn last_error() -> String {
    let p = sc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

struct Fig2 {
    chain: *mut ScChain,
    layout: *mut ScLayout,
}

impl Fig2 {
    fn new() -> Self {
        let mut chain = ptr::null_mut();
        let mut layout = ptr::null_mut();
        unsafe {
            assert_eq!(sc_chain_new(10, 1.0, 0.05, 0.5, &mut chain), ScStatus::Ok);
            assert_eq!(sc_layout_pair_encoded(2, 2, &mut layout), ScStatus::Ok);
        }
        Fig2 { chain, layout }
    }
}

impl Drop for Fig2 {
    fn drop(&mut self) {
        unsafe {
            sc_chain_free(self.chain);
            sc_layout_free(self.layout);
        }
    }
}

#[test]
fn cphase_round_trip() {
    let f = Fig2::new();
    unsafe {
        assert_eq!(sc_layout_n_spins(f.layout), 10);
        let mut sched = ptr::null_mut();
        assert_eq!(
            sc_compile_cphase(f.chain, f.layout, 0.2, false, &mut sched),
            ScStatus::Ok
        );
        assert!(sc_schedule_len(sched) >= 5);
        assert!(sc_schedule_duration(sched) > 0.2);

        let mut report = std::mem::zeroed::<ScGateReport>();
        assert_eq!(
            sc_simulate_gate(f.chain, f.layout, sched, &mut report),
            ScStatus::Ok
        );
        assert!(report.fidelity >= 1.0 - 1e-9);
        assert!(report.leakage <= 1e-10);
        assert!((report.phase_phi + 0.8).abs() < 1e-8);
        assert!((report.matrix_re[0] - 1.0).abs() < 1e-9);
        assert!((report.matrix_re[5] - report.phase_phi.cos()).abs() < 1e-9);
        assert!((report.matrix_im[5] - report.phase_phi.sin()).abs() < 1e-9);

        // JSON out and back in gives the same gate.
        let mut json = ptr::null_mut();
        assert_eq!(sc_schedule_to_json(sched, &mut json), ScStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(sc_schedule_from_json(json, &mut again), ScStatus::Ok);
        let mut second = std::mem::zeroed::<ScGateReport>();
        assert_eq!(
            sc_simulate_gate(f.chain, f.layout, again, &mut second),
            ScStatus::Ok
        );
        assert_eq!(report, second);
        sc_string_free(json);
        sc_schedule_free(again);
        sc_schedule_free(sched);
    }
}

#[test]
fn naive_compilation_loses_fidelity() {
    let f = Fig2::new();
    unsafe {
        let mut sched = ptr::null_mut();
        assert_eq!(
            sc_compile_cphase(f.chain, f.layout, 0.2, true, &mut sched),
            ScStatus::Ok
        );
        let mut report = std::mem::zeroed::<ScGateReport>();
        assert_eq!(
            sc_simulate_gate(f.chain, f.layout, sched, &mut report),
            ScStatus::Ok
        );
        assert!(1.0 - report.fidelity > 1e-3);
        sc_schedule_free(sched);
    }
}

#[test]
fn single_qubit_gates() {
    let f = Fig2::new();
    unsafe {
        let mut sched = ptr::null_mut();
        assert_eq!(
            sc_logical_sigma_z(f.chain, f.layout, 0, 0.7, false, &mut sched),
            ScStatus::Ok
        );
        let mut r = std::mem::zeroed::<ScGateReport>();
        assert_eq!(
            sc_simulate_gate(f.chain, f.layout, sched, &mut r),
            ScStatus::Ok
        );
        // Diagonal phases (0, 0, -2 phi, -2 phi) after fixing element (0, 0).
        assert!((r.matrix_re[10] - (-1.4f64).cos()).abs() < 1e-8);
        assert!((r.matrix_im[15] - (-1.4f64).sin()).abs() < 1e-8);
        sc_schedule_free(sched);

        let mut flip = ptr::null_mut();
        assert_eq!(
            sc_logical_sigma_x(f.chain, f.layout, 1, std::f64::consts::PI, &mut flip),
            ScStatus::Ok
        );
        assert_eq!(sc_schedule_len(flip), 1);
        sc_schedule_free(flip);

        let mut with_phase = ptr::null_mut();
        assert_eq!(
            sc_compile_cphase_with_phase(f.chain, f.layout, 1.0, false, &mut with_phase),
            ScStatus::Ok
        );
        assert_eq!(
            sc_simulate_gate(f.chain, f.layout, with_phase, &mut r),
            ScStatus::Ok
        );
        assert!((r.phase_phi - 1.0).abs() < 1e-8);
        sc_schedule_free(with_phase);
    }
}

#[test]
fn evolve_fills_caller_buffers() {
    unsafe {
        let mut chain = ptr::null_mut();
        assert_eq!(sc_chain_new(2, 1.0, 0.0, 1.0, &mut chain), ScStatus::Ok);
        let json = CString::new(
            r#"{"segments": [{"duration": 0.3, "bx": [0.2, 0.0], "bz": [0.0, 0.1], "jxy": [0.4]}]}"#,
        )
        .unwrap();
        let mut sched = ptr::null_mut();
        assert_eq!(
            sc_schedule_from_json(json.as_ptr(), &mut sched),
            ScStatus::Ok
        );

        let mut need = 0usize;
        let mut small = [0.0; 4];
        let mut small_im = [0.0; 4];
        assert_eq!(
            sc_evolve(
                chain,
                sched,
                true,
                small.as_mut_ptr(),
                small_im.as_mut_ptr(),
                4,
                &mut need
            ),
            ScStatus::BufferTooSmall
        );
        assert_eq!(need, 16);
        assert!(last_error().contains("16"));

        let (mut re, mut im) = ([0.0; 16], [0.0; 16]);
        assert_eq!(
            sc_evolve(
                chain,
                sched,
                true,
                re.as_mut_ptr(),
                im.as_mut_ptr(),
                16,
                ptr::null_mut()
            ),
            ScStatus::Ok
        );
        assert!(sc_last_error().is_null());
        // Columns of a unitary are normalized.
        for k in 0..4 {
            let norm: f64 = (0..4)
                .map(|r| re[4 * r + k].powi(2) + im[4 * r + k].powi(2))
                .sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        sc_schedule_free(sched);
        sc_chain_free(chain);
    }
}

#[test]
fn deviation_entry_points_agree() {
    unsafe {
        let mut reduced = ScDeviation::default();
        let mut full = ScDeviation::default();
        let code = ScScenario::SigmaX as i32;
        assert_eq!(
            sc_scenario_deviation(code, 4, 0.02, 1.0, &mut reduced),
            ScStatus::Ok
        );
        assert_eq!(
            sc_full_chain_deviation(code, 4, 1.0, 0.02, 1.0, 0.3, 2, &mut full),
            ScStatus::Ok
        );
        assert!(reduced.exact_phase_opt >= reduced.lower_bound - 1e-9);
        assert!((reduced.exact_phase_opt - full.exact_phase_opt).abs() < 1e-9);
        assert!(full.lower_bound.is_nan());

        assert_eq!(
            sc_scenario_deviation(9, 4, 0.02, 1.0, &mut reduced),
            ScStatus::InvalidArgument
        );
        assert!(last_error().contains("scenario"));
    }
}

#[test]
fn josephson_report_accessors() {
    unsafe {
        let mut rep = ptr::null_mut();
        assert_eq!(
            sc_josephson_report(8, 0.5, 0.5, 0.01, 0.0, &mut rep),
            ScStatus::Ok
        );
        assert!((sc_josephson_epsilon(rep) - 0.01).abs() < 1e-15);
        let (mut j01, mut j10, mut cinv) = (0.0, 0.0, 0.0);
        assert_eq!(sc_josephson_coupling(rep, 3, 4, &mut j01), ScStatus::Ok);
        assert_eq!(sc_josephson_coupling(rep, 4, 3, &mut j10), ScStatus::Ok);
        assert_eq!(j01, j10);
        assert_eq!(sc_josephson_c_inverse(rep, 3, 4, &mut cinv), ScStatus::Ok);
        assert!((j01 - cinv / 4.0).abs() < 1e-15);
        assert_eq!(
            sc_josephson_coupling(rep, 2, 2, &mut j01),
            ScStatus::InvalidArgument
        );
        assert_eq!(
            sc_josephson_coupling(rep, 2, 8, &mut j01),
            ScStatus::InvalidArgument
        );

        let mut h = 1.0;
        assert_eq!(sc_josephson_linear_field(rep, 0, &mut h), ScStatus::Ok);
        assert_eq!(h, 0.0);

        let mut status = ScDecayStatus::NotChecked;
        assert_eq!(sc_josephson_decay_status(rep, &mut status), ScStatus::Ok);
        assert_eq!(status, ScDecayStatus::Pass);

        let mut chain = ptr::null_mut();
        assert_eq!(sc_josephson_effective_chain(rep, &mut chain), ScStatus::Ok);
        let (mut n, mut j1, mut j2) = (0usize, 0.0, 0.0);
        assert_eq!(
            sc_chain_params(chain, &mut n, &mut j1, &mut j2, ptr::null_mut()),
            ScStatus::Ok
        );
        assert_eq!(n, 8);
        assert!((j2 / j1 - 0.01).abs() < 0.01 * 0.05);
        sc_chain_free(chain);
        sc_josephson_free(rep);

        let mut short = ptr::null_mut();
        assert_eq!(
            sc_josephson_report(2, 0.5, 0.5, 0.1, 0.0, &mut short),
            ScStatus::Ok
        );
        assert_eq!(sc_josephson_decay_status(short, &mut status), ScStatus::Ok);
        assert_eq!(status, ScDecayStatus::NotChecked);
        sc_josephson_free(short);
    }
}

#[test]
fn blockade_residuals() {
    unsafe {
        let mut layout = ptr::null_mut();
        assert_eq!(sc_layout_pair_encoded(2, 2, &mut layout), ScStatus::Ok);
        let mut r = 1.0;
        let c = [1.0, 0.05];
        assert_eq!(
            sc_blockade_residual(layout, c.as_ptr(), 2, &mut r),
            ScStatus::Ok
        );
        assert!(r < 1e-14);
        let c3 = [1.0, 0.05, 0.01];
        assert_eq!(
            sc_blockade_residual(layout, c3.as_ptr(), 3, &mut r),
            ScStatus::Ok
        );
        assert!(r > 0.0);
        assert_eq!(
            sc_blockade_residual(layout, ptr::null(), 2, &mut r),
            ScStatus::NullPointer
        );
        sc_layout_free(layout);
    }
}

#[test]
fn invalid_input_reports_errors() {
    unsafe {
        let mut chain = ptr::null_mut();
        assert_eq!(
            sc_chain_new(0, 1.0, 0.0, 1.0, &mut chain),
            ScStatus::InvalidArgument
        );
        assert!(chain.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(
            sc_chain_new(3, 1.0, 0.0, 1.0, ptr::null_mut()),
            ScStatus::NullPointer
        );
        assert!(last_error().contains("out"));

        let bad = CString::new("{\"segments\": [{\"duration\": -1}]}").unwrap();
        let mut sched = ptr::null_mut();
        assert_ne!(
            sc_schedule_from_json(bad.as_ptr(), &mut sched),
            ScStatus::Ok
        );
        assert!(sched.is_null());

        let mut report = std::mem::zeroed::<ScGateReport>();
        assert_eq!(
            sc_simulate_gate(ptr::null(), ptr::null(), ptr::null(), &mut report),
            ScStatus::NullPointer
        );

        // Freeing NULL is a no-op.
        sc_chain_free(ptr::null_mut());
        sc_schedule_free(ptr::null_mut());
        sc_string_free(ptr::null_mut());
        assert!(!sc_version().is_null());
    }
}
