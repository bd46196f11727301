//! Command-line front end for `qso3-core`: tables, CG lookups and the
//! verification report.

pub mod cache;
pub mod cli;
pub mod error;
pub mod format;
pub mod grid;
pub mod report;
pub mod tables;
pub mod verify;
