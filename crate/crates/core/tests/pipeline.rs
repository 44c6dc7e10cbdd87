//! From a Cooper-pair-box array to a simulated CPHASE on its effective chain.

use spinchain::encoded::gates::cphase_rate;
use spinchain::encoded::{compile_cphase, simulate_gate, LogicalLayout, TiltMode};
use spinchain::josephson::{coupling_report, JosephsonArraySpec};
use spinchain::linalg::wrap_angle;

#[test]
fn array_couplings_drive_an_exact_cphase() {
    let mut array = JosephsonArraySpec::with_epsilon(10, 0.05).unwrap();
    let first = coupling_report(&array).unwrap();
    let j1 = first.effective_chain.j1;
    assert!(j1 > 0.0);
    array.x1_max = 20.0 * j1;
    let report = coupling_report(&array).unwrap();
    let chain = report.effective_chain;
    assert!((chain.j2 / chain.j1 - 0.05).abs() < 0.05 * 0.05 * 5.0);
    assert_eq!(report.decay.as_ref().unwrap().status(), "pass");

    let layout = LogicalLayout::pair_encoded(2, 2).unwrap();
    let tau = 0.3 / j1;
    let sched = compile_cphase(&chain, &layout, tau, TiltMode::Compensated).unwrap();
    let gate = simulate_gate(&chain, &layout, &sched).unwrap();
    assert!(gate.fidelity >= 1.0 - 1e-9, "{}", gate.fidelity);
    assert!(gate.leakage <= 1e-10);
    let expected = cphase_rate(&chain) * tau;
    assert!(wrap_angle(gate.phase_phi - expected).abs() < 1e-8);

    let naive = compile_cphase(&chain, &layout, tau, TiltMode::Naive).unwrap();
    let naive = simulate_gate(&chain, &layout, &naive).unwrap();
    assert!(1.0 - naive.fidelity > 1e-6);
}
