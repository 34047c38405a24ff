//! Component functions and the disjoint-spectra families they form.

pub mod bent;
pub mod component;
pub mod disjoint;
pub mod family;
pub mod seeds;

pub use bent::{mm_bent, target_bent_degree};
pub use component::{component_spectrum, expand, make_component, Component, Tail, TailKind};
pub use disjoint::{verify_disjoint, verify_members, DisjointMode, DisjointOutcome};
pub use family::{
    coords_to_mask, default_bent_tail, degree_member, gamma0, gamma0_prime, gamma_k, gamma_k_with_tails,
    gamma_limit, omega0, omega_k, ComponentFamily, FamilyLabel, Regime,
};
pub use seeds::{load_seed_functions, parse_seeds, write_seeds, DeclaredProfile, SeedFunction};
