use std::ffi::{c_char, CString};

use spinchain::chain::{ChainSpec, ControlSchedule};
use spinchain::encoded::LogicalLayout;

use crate::error::{guard, Failure, ScStatus};
use crate::{borrow, c_str, emit, out_slot, release};

/// Static chain parameters (spin count, J1, J2, X1).
pub struct ScChain(pub(crate) ChainSpec);

/// Logical-qubit layout on a chain.
pub struct ScLayout(pub(crate) LogicalLayout);

/// Piecewise-constant control schedule.
pub struct ScSchedule(pub(crate) ControlSchedule);

/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn sc_chain_new(
    n_spins: usize,
    j1: f64,
    j2: f64,
    x1_max: f64,
    out: *mut *mut ScChain,
) -> ScStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        emit(out, ScChain(ChainSpec::new(n_spins, j1, j2, x1_max)?));
        Ok(())
    })
}

/// # Safety
/// `chain` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_chain_free(chain: *mut ScChain) {
    release(chain)
}

/// Reads back the chain parameters; any output pointer may be NULL.
///
/// # Safety
/// `chain` must be a live handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_chain_params(
    chain: *const ScChain,
    n_spins: *mut usize,
    j1: *mut f64,
    j2: *mut f64,
    x1_max: *mut f64,
) -> ScStatus {
    guard(|| {
        let c = &borrow(chain, "chain")?.0;
        if let Some(p) = n_spins.as_mut() {
            *p = c.n_spins;
        }
        if let Some(p) = j1.as_mut() {
            *p = c.j1;
        }
        if let Some(p) = j2.as_mut() {
            *p = c.j2;
        }
        if let Some(p) = x1_max.as_mut() {
            *p = c.x1_max;
        }
        Ok(())
    })
}

/// Two spins per logical qubit, blocks of `m` blockade spins in |0>.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_layout_pair_encoded(
    n_logical: usize,
    m: usize,
    out: *mut *mut ScLayout,
) -> ScStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        emit(out, ScLayout(LogicalLayout::pair_encoded(n_logical, m)?));
        Ok(())
    })
}

/// One spin per logical qubit with alternating single blockades.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_layout_single_spin(
    n_logical: usize,
    out: *mut *mut ScLayout,
) -> ScStatus {
    guard(|| {
        let out = out_slot(out, "out")?;
        emit(out, ScLayout(LogicalLayout::single_spin(n_logical)?));
        Ok(())
    })
}

/// Physical spins the layout occupies, or 0 for NULL.
///
/// # Safety
/// `layout` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_layout_n_spins(layout: *const ScLayout) -> usize {
    layout.as_ref().map_or(0, |l| l.0.n_spins)
}

/// # Safety
/// `layout` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_layout_free(layout: *mut ScLayout) {
    release(layout)
}

/// Parses the JSON interchange form `{"segments": [{duration, bx, bz, jxy}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_schedule_from_json(
    json: *const c_char,
    out: *mut *mut ScSchedule,
) -> ScStatus {
    guard(|| {
        let text = c_str(json, "json")?;
        let out = out_slot(out, "out")?;
        emit(out, ScSchedule(ControlSchedule::from_json(text)?));
        Ok(())
    })
}

/// Serializes a schedule; release the string with `sc_string_free`.
///
/// # Safety
/// `schedule` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_schedule_to_json(
    schedule: *const ScSchedule,
    out: *mut *mut c_char,
) -> ScStatus {
    guard(|| {
        let s = &borrow(schedule, "schedule")?.0;
        let out = out_slot(out, "out")?;
        let text = CString::new(s.to_json())
            .map_err(|_| Failure::invalid("schedule JSON contains NUL"))?;
        *out = text.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of segments, or 0 for NULL.
///
/// # Safety
/// `schedule` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_schedule_len(schedule: *const ScSchedule) -> usize {
    schedule.as_ref().map_or(0, |s| s.0.segments.len())
}

/// Total duration, or NaN for NULL.
///
/// # Safety
/// `schedule` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_schedule_duration(schedule: *const ScSchedule) -> f64 {
    schedule.as_ref().map_or(f64::NAN, |s| s.0.total_duration())
}

/// # Safety
/// `schedule` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_schedule_free(schedule: *mut ScSchedule) {
    release(schedule)
}
