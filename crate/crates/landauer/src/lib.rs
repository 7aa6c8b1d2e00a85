//! Command-line front end, file formats and parallel drivers for
//! [`landauer_core`].

pub mod cli;
pub mod format;
pub mod pump_config;
pub mod report;
pub mod scan;
pub mod spectrum;

pub use landauer_core as core;
