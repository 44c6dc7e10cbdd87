//! C ABI over `spinchain`.
//!
//! Every object crosses the boundary as an opaque handle created by an
//! `sc_*_new`-style constructor and released by the matching `sc_*_free`.
//! Fallible calls return [`ScStatus`]; on failure `sc_last_error` holds a
//! message for the calling thread. Outputs are written only on success.
//!
//! Matrices are row-major, real and imaginary parts in separate buffers.

mod analysis;
mod error;
mod gates;
mod handles;

use std::ffi::{c_char, CStr};

pub use analysis::*;
pub use error::{sc_last_error, ScStatus};
pub use gates::*;
pub use handles::*;

use error::Failure;

pub(crate) unsafe fn borrow<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| Failure::null(what))
}

pub(crate) unsafe fn out_slot<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| Failure::null(what))
}

pub(crate) unsafe fn c_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure::invalid(format!("{what} is not UTF-8")))
}

/// Moves `value` to the heap and stores the handle in `out`.
pub(crate) fn emit<T>(out: &mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Drops a handle made by `emit`; NULL is ignored.
pub(crate) unsafe fn release<T>(ptr: *mut T) {
    if !ptr.is_null() {
        drop(Box::from_raw(ptr));
    }
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
