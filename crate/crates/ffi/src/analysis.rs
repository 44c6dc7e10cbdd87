use spinchain::deviation::{full_chain_deviation, scenario_deviation, Scenario};
use spinchain::encoded::layout::blockade_residual_terms;
use spinchain::josephson::{coupling_report, CouplingReport, JosephsonArraySpec};

use crate::error::{guard, Failure, ScStatus};
use crate::handles::{ScChain, ScLayout};
use crate::{borrow, emit, out_slot};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScScenario {
    Idle = 0,
    SigmaZ = 1,
    SigmaX = 2,
    InterQubit = 3,
}

/// Scenarios arrive as plain integers so an out-of-range value is an error
/// rather than an invalid enum.
fn scenario(code: i32) -> Result<Scenario, Failure> {
    match code {
        c if c == ScScenario::Idle as i32 => Ok(Scenario::Idle),
        c if c == ScScenario::SigmaZ as i32 => Ok(Scenario::SigmaZ),
        c if c == ScScenario::SigmaX as i32 => Ok(Scenario::SigmaX),
        c if c == ScScenario::InterQubit as i32 => Ok(Scenario::InterQubit),
        _ => Err(Failure::invalid(format!("unknown scenario code {code}"))),
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ScDeviation {
    pub exact_raw: f64,
    pub exact_phase_opt: f64,
    /// Closed-form lower bound; NaN for full-chain results.
    pub lower_bound: f64,
    /// Population the ideal evolution moves out of the subspace; 0 for
    /// reduced-space results.
    pub leakage: f64,
}

/// Gate deviation from the reduced-space formulas; `scenario` is an
/// `ScScenario` value.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_scenario_deviation(
    scenario_code: i32,
    n_logical: usize,
    j2: f64,
    t: f64,
    out: *mut ScDeviation,
) -> ScStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let r = scenario_deviation(scenario(scenario_code)?, n_logical, j2, t)?;
        *out = ScDeviation {
            exact_raw: r.exact_raw,
            exact_phase_opt: r.exact_phase_opt,
            lower_bound: r.lower_bound,
            leakage: 0.0,
        };
        Ok(())
    })
}

/// Gate deviation measured on the simulated 2n+1 spin chain; `target` is
/// the driven logical qubit (1-based; first of the pair for inter_qubit).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_full_chain_deviation(
    scenario_code: i32,
    n_logical: usize,
    j1: f64,
    j2: f64,
    t: f64,
    field: f64,
    target: usize,
    out: *mut ScDeviation,
) -> ScStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let r = full_chain_deviation(
            scenario(scenario_code)?,
            n_logical,
            j1,
            j2,
            t,
            field,
            target,
        )?;
        *out = ScDeviation {
            exact_raw: r.exact_raw,
            exact_phase_opt: r.exact_phase_opt,
            lower_bound: f64::NAN,
            leakage: r.leakage,
        };
        Ok(())
    })
}

/// Largest residual logical field or coupling left after the frozen
/// blockades; `couplings[k]` is the Ising strength at distance k + 1.
///
/// # Safety
/// `layout` must be live; `couplings` must hold `n_couplings` doubles.
#[no_mangle]
pub unsafe extern "C" fn sc_blockade_residual(
    layout: *const ScLayout,
    couplings: *const f64,
    n_couplings: usize,
    out: *mut f64,
) -> ScStatus {
    guard(|| {
        let l = &borrow(layout, "layout")?.0;
        if couplings.is_null() && n_couplings > 0 {
            return Err(Failure::null("couplings"));
        }
        let c = if n_couplings == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(couplings, n_couplings)
        };
        let out = out_slot(out, "out")?;
        *out = blockade_residual_terms(l, c)?.max_abs();
        Ok(())
    })
}

/// Capacitance inverse and Ising couplings of a Cooper-pair-box array.
pub struct ScJosephsonReport(pub(crate) CouplingReport);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScDecayStatus {
    /// Arrays shorter than five boxes have no interior rows to check.
    NotChecked = 0,
    Pass = 1,
    Fail = 2,
    OutOfRegime = 3,
}

/// Builds the array (gate charges 1/2, reduced units) and extracts couplings.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_josephson_report(
    n_boxes: usize,
    c_g: f64,
    c_j: f64,
    c_c: f64,
    x1_max: f64,
    out: *mut *mut ScJosephsonReport,
) -> ScStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        let mut spec = JosephsonArraySpec::new(n_boxes, c_g, c_j, c_c)?;
        spec.x1_max = x1_max;
        spec.validate()?;
        emit(out, ScJosephsonReport(coupling_report(&spec)?));
        Ok(())
    })
}

/// # Safety
/// `report` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_josephson_free(report: *mut ScJosephsonReport) {
    crate::release(report)
}

/// Coupling ratio c_c / (c_g + c_j), or NaN for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_josephson_epsilon(report: *const ScJosephsonReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.epsilon)
}

fn entry(m: &[Vec<f64>], i: usize, j: usize) -> Result<f64, Failure> {
    m.get(i)
        .and_then(|row| row.get(j))
        .copied()
        .ok_or_else(|| Failure::invalid(format!("index ({i}, {j}) out of range")))
}

/// Coefficient of Z_i Z_j (0-based, symmetric in i and j, i != j).
///
/// # Safety
/// `report` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_josephson_coupling(
    report: *const ScJosephsonReport,
    i: usize,
    j: usize,
    out: *mut f64,
) -> ScStatus {
    guard(|| {
        let r = &borrow(report, "report")?.0;
        if i == j {
            return Err(Failure::invalid("a box does not couple to itself"));
        }
        let v = entry(&r.couplings, i.min(j), i.max(j))?;
        *out_slot(out, "out")? = v;
        Ok(())
    })
}

/// Entry (i, j) of the inverse capacitance matrix.
///
/// # Safety
/// `report` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_josephson_c_inverse(
    report: *const ScJosephsonReport,
    i: usize,
    j: usize,
    out: *mut f64,
) -> ScStatus {
    guard(|| {
        let r = &borrow(report, "report")?.0;
        let v = entry(&r.c_inverse, i, j)?;
        *out_slot(out, "out")? = v;
        Ok(())
    })
}

/// Coefficient of Z_i.
///
/// # Safety
/// `report` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_josephson_linear_field(
    report: *const ScJosephsonReport,
    i: usize,
    out: *mut f64,
) -> ScStatus {
    guard(|| {
        let r = &borrow(report, "report")?.0;
        let v = r
            .linear_fields
            .get(i)
            .copied()
            .ok_or_else(|| Failure::invalid(format!("box {i} out of range")))?;
        *out_slot(out, "out")? = v;
        Ok(())
    })
}

/// Verdict of the interior decay check.
///
/// # Safety
/// `report` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_josephson_decay_status(
    report: *const ScJosephsonReport,
    out: *mut ScDecayStatus,
) -> ScStatus {
    guard(|| {
        let r = &borrow(report, "report")?.0;
        let status = match r.decay.as_ref().map(|d| (d.in_regime, d.passed)) {
            None => ScDecayStatus::NotChecked,
            Some((false, _)) => ScDecayStatus::OutOfRegime,
            Some((true, true)) => ScDecayStatus::Pass,
            Some((true, false)) => ScDecayStatus::Fail,
        };
        *out_slot(out, "out")? = status;
        Ok(())
    })
}

/// Chain with the array's nearest and next-nearest couplings, one spin per box.
///
/// # Safety
/// `report` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_josephson_effective_chain(
    report: *const ScJosephsonReport,
    out: *mut *mut ScChain,
) -> ScStatus {
    guard(|| {
        let r = &borrow(report, "report")?.0;
        let out = out_slot(out, "out")?;
        emit(out, ScChain(r.effective_chain.clone()));
        Ok(())
    })
}
