//! Truth tables, spectra, algebraic normal form and exhaustive profiles.

pub mod anf;
pub mod concat;
pub mod hexfmt;
pub mod profile;
pub mod truth_table;
pub mod walsh;

pub use anf::{anf, anf_to_table, degree, table_degree, AnfForm};
pub use concat::concatenate;
pub use profile::{is_almost_optimal, profile, FunctionProfile};
pub use truth_table::{max_vars, set_max_vars, TruthTable, ABSOLUTE_MAX_VARS};
pub use walsh::{
    fast_walsh, naive_walsh, nonlinearity, parseval_check, resiliency_order, restricted_walsh,
    spectrum_summary, walsh_at, SpectrumSummary, WalshSpectrum,
};
