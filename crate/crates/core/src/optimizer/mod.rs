//! Maximization of `sum phi_q b(q) + phi_R b_R + phi_C b_C` over the
//! feasible set cut out by nonnegativity, the per-prime budget and the
//! basic inequality.
//!
//! Two independent routes: [`greedy_bound`] builds the structured optimum
//! prime by prime, [`lp_bound`] solves a truncated LP with a dense simplex.

mod greedy;
mod lp;
pub mod simplex;
mod sweep;

use serde::{Deserialize, Serialize};

use crate::coefficients::{CoefficientFamily, Objective};
use crate::phi::PhiVector;

pub use greedy::greedy_bound;
pub use lp::{ff_closed_form, lp_bound, FfBound, LpProblem, LpVariable};
pub use sweep::{sweep_unconditional, SweepMode, SweepPoint};

/// Default prime cutoff for the GRH problems.
pub const DEFAULT_PRIME_CUTOFF: u64 = 100;
/// Default cutoff for unconditional sweeps.
pub const DEFAULT_SWEEP_CUTOFF: u64 = 1_000_000;
pub const DEFAULT_M_MAX: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Carrier {
    /// `phi_R` carries the per-prime budget.
    R,
    /// `phi_C` carries the per-prime budget.
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolverKind {
    Greedy,
    Lp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RejectedPrime {
    pub p: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    /// The maximum; the liminf bound is `-value`.
    pub value: f64,
    pub phi: PhiVector,
    pub carrier: Option<Carrier>,
    pub included_primes: Vec<u64>,
    pub first_rejected: Option<RejectedPrime>,
    pub solver: SolverKind,
    pub family: CoefficientFamily,
    pub objective: Objective,
    pub prime_cutoff: u64,
    pub m_max: u32,
    /// Simplex pivot count (LP only).
    pub pivots: Option<usize>,
}

impl BoundResult {
    /// The lower bound on `liminf gamma_K/alpha_K` this maximum gives.
    pub fn liminf_bound(&self) -> f64 {
        -self.value
    }
}
