//! Workbench layer over qset-core: document formats, deterministic reports,
//! instance sweeps, verification suites, and the counterexample search.

pub mod cli;
pub mod formats;
pub mod report;
pub mod search;
pub mod sweep;
pub mod verify;
