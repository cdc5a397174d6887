//! Library side of the `khl` command: reference data, input parsing and the
//! reproduction runs.

pub mod golden;
pub mod input;
pub mod repro;
