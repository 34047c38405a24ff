//! Feasibility, assignment, materialization and certification for the
//! three constructions.

pub mod counting;
pub mod feasibility;
pub mod plan;
pub mod build;
pub mod certify;
pub mod planfile;
pub mod construct;
pub mod tables;
