use spinchain::chain::{evolve, ControlSchedule};
use spinchain::encoded::{
    compile_cphase, compile_cphase_with_phase, logical_sigma_x, logical_sigma_z, simulate_gate,
    TiltMode,
};

use crate::error::{guard, Failure, ScStatus};
use crate::handles::{ScChain, ScLayout, ScSchedule};
use crate::{borrow, emit, out_slot};

/// Two-qubit logical action of a simulated gate.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScGateReport {
    /// Average gate fidelity against diag(1, e^{i phase_phi}, 1, 1).
    pub fidelity: f64,
    pub leakage: f64,
    pub phase_phi: f64,
    /// 4x4 logical matrix, row-major, global phase fixed by element (0, 0).
    pub matrix_re: [f64; 16],
    pub matrix_im: [f64; 16],
}

fn mode(naive: bool) -> TiltMode {
    if naive {
        TiltMode::Naive
    } else {
        TiltMode::Compensated
    }
}

unsafe fn compile_with(
    chain: *const ScChain,
    layout: *const ScLayout,
    out: *mut *mut ScSchedule,
    build: impl FnOnce(
        &spinchain::chain::ChainSpec,
        &spinchain::encoded::LogicalLayout,
    ) -> spinchain::Result<ControlSchedule>,
) -> ScStatus {
    guard(|| {
        let c = &borrow(chain, "chain")?.0;
        let l = &borrow(layout, "layout")?.0;
        let out = out_slot(out, "out")?;
        emit(out, ScSchedule(build(c, l)?));
        Ok(())
    })
}

/// CPHASE between logical qubits 0 and 1 with idle time `tau`.
/// `naive` compiles the pulses as if J2 were zero.
///
/// # Safety
/// `chain` and `layout` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_compile_cphase(
    chain: *const ScChain,
    layout: *const ScLayout,
    tau: f64,
    naive: bool,
    out: *mut *mut ScSchedule,
) -> ScStatus {
    compile_with(chain, layout, out, |c, l| {
        compile_cphase(c, l, tau, mode(naive))
    })
}

/// CPHASE with a requested phase `phi` (mod 2 pi).
///
/// # Safety
/// As for `sc_compile_cphase`.
#[no_mangle]
pub unsafe extern "C" fn sc_compile_cphase_with_phase(
    chain: *const ScChain,
    layout: *const ScLayout,
    phi: f64,
    naive: bool,
    out: *mut *mut ScSchedule,
) -> ScStatus {
    compile_with(chain, layout, out, |c, l| {
        compile_cphase_with_phase(c, l, phi, mode(naive))
    })
}

/// exp(-i angle sigma^x / 2) on one logical qubit.
///
/// # Safety
/// As for `sc_compile_cphase`.
#[no_mangle]
pub unsafe extern "C" fn sc_logical_sigma_x(
    chain: *const ScChain,
    layout: *const ScLayout,
    qubit: usize,
    angle: f64,
    out: *mut *mut ScSchedule,
) -> ScStatus {
    compile_with(chain, layout, out, |c, l| {
        logical_sigma_x(c, l, qubit, angle)
    })
}

/// exp(i phi sigma^z) on logical qubit 0 or 1, built from CPHASE and flips.
///
/// # Safety
/// As for `sc_compile_cphase`.
#[no_mangle]
pub unsafe extern "C" fn sc_logical_sigma_z(
    chain: *const ScChain,
    layout: *const ScLayout,
    qubit: usize,
    phi: f64,
    naive: bool,
    out: *mut *mut ScSchedule,
) -> ScStatus {
    compile_with(chain, layout, out, |c, l| {
        logical_sigma_z(c, l, qubit, phi, mode(naive))
    })
}

/// Runs `schedule` on the full chain (J2 included) and reports its action
/// on a two-qubit layout.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_simulate_gate(
    chain: *const ScChain,
    layout: *const ScLayout,
    schedule: *const ScSchedule,
    out: *mut ScGateReport,
) -> ScStatus {
    guard(|| {
        let c = &borrow(chain, "chain")?.0;
        let l = &borrow(layout, "layout")?.0;
        let s = &borrow(schedule, "schedule")?.0;
        let out = out_slot(out, "out")?;
        let g = simulate_gate(c, l, s)?;
        let mut report = ScGateReport {
            fidelity: g.fidelity,
            leakage: g.leakage,
            phase_phi: g.phase_phi,
            matrix_re: [0.0; 16],
            matrix_im: [0.0; 16],
        };
        for r in 0..4 {
            for k in 0..4 {
                let z = g.logical_matrix[(r, k)];
                report.matrix_re[4 * r + k] = z.re;
                report.matrix_im[4 * r + k] = z.im;
            }
        }
        *out = report;
        Ok(())
    })
}

/// Full propagator of `schedule`, written row-major into `re` and `im`,
/// each holding at least `len` = 4^n_spins values. On `BufferTooSmall`
/// the needed length is stored in `required` (which may be NULL).
///
/// # Safety
/// Handles must be live; `re` and `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sc_evolve(
    chain: *const ScChain,
    schedule: *const ScSchedule,
    include_long_range: bool,
    re: *mut f64,
    im: *mut f64,
    len: usize,
    required: *mut usize,
) -> ScStatus {
    guard(|| {
        let c = &borrow(chain, "chain")?.0;
        let s = &borrow(schedule, "schedule")?.0;
        let dim = 1usize
            .checked_shl(c.n_spins as u32)
            .ok_or_else(|| Failure::invalid("register too large"))?;
        let need = dim * dim;
        if let Some(r) = required.as_mut() {
            *r = need;
        }
        if len < need {
            return Err(Failure::new(
                ScStatus::BufferTooSmall,
                format!("propagator needs {need} entries, buffer holds {len}"),
            ));
        }
        if re.is_null() || im.is_null() {
            return Err(Failure::null("output buffer"));
        }
        let u = evolve(c, s, include_long_range)?;
        let re = std::slice::from_raw_parts_mut(re, need);
        let im = std::slice::from_raw_parts_mut(im, need);
        for r in 0..dim {
            for k in 0..dim {
                let z = u.matrix()[(r, k)];
                re[r * dim + k] = z.re;
                im[r * dim + k] = z.im;
            }
        }
        Ok(())
    })
}
