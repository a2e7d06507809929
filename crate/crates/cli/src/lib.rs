//! Command-line front end for `rbf-fock`: verification suites with JSON
//! reports, kernel and Gram evaluation, transforms of signal files, basis
//! tables and Mercer truncation studies.

pub mod commands;
pub mod config;
pub mod io;
pub mod report;
pub mod suites;
