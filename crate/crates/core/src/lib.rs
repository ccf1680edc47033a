//! Asymptotic bounds for the Euler–Kronecker constant of global fields.
//!
//! Lower bounds on `liminf gamma_K / alpha_K` come from maximizing a linear
//! objective over the limit invariants of asymptotically exact families
//! ([`optimizer`]); upper bounds come from explicit class field towers
//! ([`towers`], [`search`]). [`report`] collects every reproduced number.

pub mod coefficients;
pub mod constants;
pub mod error;
pub mod optimizer;
pub mod phi;
pub mod primes;
pub mod report;
pub mod search;
pub mod seeds;
pub mod towers;

pub use coefficients::{
    coeff_b, prime_powers, CoefficientFamily, FamilyKind, Objective, ObjectiveKind, PrimePower,
};
pub use error::{Error, Result};
pub use optimizer::{
    ff_closed_form, greedy_bound, lp_bound, sweep_unconditional, BoundResult, Carrier, SweepMode,
};
pub use phi::{PhiVector, ValidationReport};
pub use search::{search_quadratic, SearchHit, SearchReport, SearchSpec};
pub use towers::{
    discriminant_alpha, evaluate_seed, split_ok, tower_feasible, tower_phi, FeasibilityConfig, QuadraticSeed,
    Sign, TowerSeed,
};
