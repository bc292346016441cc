//! C ABI for the graphshare toolkit.

pub mod capi;

pub use capi::*;
