//! Library backing the `qtetra` binary: bundled example data, JSON
//! schemas, the verification suites, and the compute operations.
//!
//! Everything here is deterministic: bundled data and external data files
//! are held in ordered maps, random suites use fixed seeds, and all JSON
//! documents print with stable field and term order, so identical inputs
//! produce byte-identical outputs.

pub mod compute;
pub mod data;
pub mod json;
pub mod suites;
