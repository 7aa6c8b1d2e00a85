#![cfg_attr(not(feature = "std"), no_std)]
// with std linked the float methods resolve inherently and the
// `num_traits::Float` imports needed for no_std builds go unused
#![cfg_attr(any(test, feature = "std"), allow(unused_imports))]
extern crate alloc;

pub mod analytic;
pub mod dynamics;
pub mod field;
mod error;
pub mod oracle;
pub mod special;
pub mod su11;

pub use error::{Error, Result};
