use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A numerical invariant failed (eigensolver, unitarity, vanished amplitude).
    Numerical = 3,
    /// Caller buffer is too small; the required length is reported.
    BufferTooSmall = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

pub(crate) struct Failure {
    pub status: ScStatus,
    pub message: String,
}

impl Failure {
    pub fn new(status: ScStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }

    pub fn null(what: &str) -> Self {
        Failure::new(ScStatus::NullPointer, format!("{what} is null"))
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Failure::new(ScStatus::InvalidArgument, message)
    }
}

impl From<spinchain::Error> for Failure {
    fn from(e: spinchain::Error) -> Self {
        let status = if e.is_numerical() {
            ScStatus::Numerical
        } else {
            ScStatus::InvalidArgument
        };
        Failure::new(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure for `sc_last_error`, and maps it to a status.
pub(crate) fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ScStatus {
    // Handles are never left half-updated: outputs are written last.
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            ScStatus::Ok
        }
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            ScStatus::Panic
        }
    }
}

/// Message of the last failed call on this thread, or NULL after a success.
///
/// The pointer stays valid until the next call into the library on the same
/// thread.
#[no_mangle]
pub extern "C" fn sc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}
