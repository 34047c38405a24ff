//! Construction and certification of resilient Boolean functions built by
//! concatenating disjoint-spectra, partially linear components.
//!
//! * [`bf`]: truth tables, Walsh spectra, ANF and exhaustive profiles.
//! * [`families`]: component functions and the families they are drawn from.
//! * [`constructor`]: feasibility, assignment, materialization and structural
//!   certificates for the three constructions.
//! * [`cli`]: the `dsconcat` command-line front end.

pub mod bf;
pub mod cli;
pub mod constructor;
pub mod error;
pub mod families;

pub use error::{Error, Result};
