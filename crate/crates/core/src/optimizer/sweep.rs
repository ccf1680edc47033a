use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::{CoefficientFamily, Objective};
use crate::error::{Error, Result};
use crate::primes::shared_primes;

use super::greedy_bound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepMode {
    /// Full series `2 log q sum_m 1/(q^m + 1)`.
    Full,
    /// Series replaced by its first term `2 log q/(q + 1)`.
    FirstTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub cutoff: u64,
    pub value: f64,
    /// Last prime the greedy included.
    pub last_included: Option<u64>,
    /// First prime the ratio test rejected, if the scan stopped early.
    pub stop_prime: Option<u64>,
}

/// Greedy bound for the unconditional family at each cutoff. Points run in
/// parallel; the output keeps the input order.
pub fn sweep_unconditional(
    objective: Objective,
    cutoffs: &[u64],
    mode: SweepMode,
    arch_override: Option<f64>,
) -> Result<Vec<SweepPoint>> {
    if cutoffs.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("sweep cutoffs must be ascending".into()));
    }
    let Some(&largest) = cutoffs.last() else {
        return Ok(Vec::new());
    };
    // one sieve for every point
    shared_primes(largest)?;

    let mut family = match mode {
        SweepMode::Full => CoefficientFamily::nf_uncond_full(),
        SweepMode::FirstTerm => CoefficientFamily::nf_uncond_first_term(),
    };
    family.arch_override = arch_override;

    cutoffs
        .par_iter()
        .map(|&cutoff| {
            let r = greedy_bound(&family, objective, cutoff)?;
            Ok(SweepPoint {
                cutoff,
                value: r.value,
                last_included: r.included_primes.last().copied(),
                stop_prime: r.first_rejected.map(|x| x.p),
            })
        })
        .collect()
}
