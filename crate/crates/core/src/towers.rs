//! Class field towers with prescribed splitting.
//!
//! Along an unramified tower both the place counts and `alpha` scale by the
//! degree, so the limiting data of the tower is the base field's counts
//! divided by the base field's `alpha`. Quadratic base fields are described
//! by their odd squarefree radicand; other base fields enter as external
//! seeds with `alpha` given directly.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coefficients::{Objective, PrimePower};
use crate::error::{Error, Result};
use crate::phi::PhiVector;
use crate::primes::{is_prime, pow_mod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_int(s: i64) -> Result<Self> {
        match s {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            other => Err(Error::InvalidSeed(format!("sign must be +1 or -1, got {other}"))),
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// `Q(sqrt(d))` with `d = sign * prod(ramified_primes)`, odd and squarefree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticSeed {
    pub sign: Sign,
    pub ramified_primes: Vec<u64>,
    pub split_primes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discriminant {
    pub description: String,
    /// Signed radicand, when it fits in an `i128`.
    pub radicand: Option<i128>,
    pub alpha: f64,
}

impl QuadraticSeed {
    pub fn new(sign: Sign, ramified_primes: Vec<u64>, split_primes: Vec<u64>) -> Self {
        QuadraticSeed {
            sign,
            ramified_primes,
            split_primes,
        }
    }

    /// Structural checks: ascending distinct odd primes, disjoint lists.
    pub fn check_structure(&self) -> Result<()> {
        if self.ramified_primes.is_empty() {
            return Err(Error::InvalidSeed("no ramified primes".into()));
        }
        if self.ramified_primes.contains(&2) {
            return Err(Error::UnsupportedSeed(
                "2 in the radicand gives an even discriminant; only odd radicands are supported".into(),
            ));
        }
        for (name, list) in [("ramified", &self.ramified_primes), ("split", &self.split_primes)] {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidSeed(format!(
                    "{name} primes must be strictly ascending"
                )));
            }
            if let Some(&p) = list.iter().find(|&&p| !is_prime(p)) {
                return Err(Error::InvalidSeed(format!("{name} entry {p} is not prime")));
            }
        }
        if let Some(p) = self
            .split_primes
            .iter()
            .find(|p| self.ramified_primes.binary_search(p).is_ok())
        {
            return Err(Error::InvalidSeed(format!("{p} is both ramified and split")));
        }
        Ok(())
    }

    /// Signed radicand reduced into `[0, n)`.
    pub fn radicand_mod(&self, n: u64) -> u64 {
        let n128 = n as u128;
        let r = self
            .ramified_primes
            .iter()
            .fold(1u128 % n128, |acc, &p| acc * (p as u128 % n128) % n128) as u64;
        match self.sign {
            Sign::Positive => r,
            Sign::Negative => (n - r) % n,
        }
    }

    pub fn radicand(&self) -> Option<i128> {
        let mut acc: i128 = 1;
        for &p in &self.ramified_primes {
            acc = acc.checked_mul(p as i128)?;
        }
        Some(self.sign.as_int() as i128 * acc)
    }

    pub fn radicand_log(&self) -> f64 {
        self.ramified_primes.iter().map(|&p| (p as f64).ln()).sum()
    }

    pub fn describe(&self) -> String {
        let body = self
            .ramified_primes
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join("·");
        match self.sign {
            Sign::Positive => body,
            Sign::Negative => format!("-{body}"),
        }
    }
}

impl fmt::Display for QuadraticSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.describe())
    }
}

/// `alpha = log sqrt|d|` for radicands `d ≡ 1 (mod 4)`, where `d` is the
/// discriminant. Radicands `≡ 3 (mod 4)` are rejected.
pub fn discriminant_alpha(seed: &QuadraticSeed) -> Result<Discriminant> {
    seed.check_structure()?;
    if seed.radicand_mod(4) != 1 {
        if seed.split_primes.contains(&2) {
            return Err(Error::Congruence(format!(
                "radicand {} is 3 mod 4, so 2 ramifies and cannot split",
                seed.describe()
            )));
        }
        return Err(Error::UnsupportedSeed(format!(
            "radicand {} is 3 mod 4; the discriminant would be 4d, which is not supported",
            seed.describe()
        )));
    }
    Ok(Discriminant {
        description: format!("d = {}", seed.describe()),
        radicand: seed.radicand(),
        alpha: 0.5 * seed.radicand_log(),
    })
}

/// Whether the prime `p` splits in `Q(sqrt(d))`: for `p = 2` iff
/// `d ≡ 1 (mod 8)`, for odd `p` iff `d` is a nonzero square mod `p`
/// (Euler's criterion).
pub fn split_ok(seed: &QuadraticSeed, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if seed.ramified_primes.contains(&p) {
        return Err(Error::Domain(format!("{p} is ramified in {seed}")));
    }
    if p == 2 {
        return Ok(seed.radicand_mod(8) == 1);
    }
    let d = seed.radicand_mod(p);
    if d == 0 {
        return Err(Error::Domain(format!("{p} divides the radicand of {seed}")));
    }
    Ok(pow_mod(d, (p - 1) / 2, p) == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    QuadraticDerived,
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlace {
    /// Norm of the place.
    pub q: u64,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerSeed {
    pub label: String,
    pub alpha: f64,
    pub r1: u32,
    pub r2: u32,
    pub split_places: Vec<SplitPlace>,
    pub provenance: Provenance,
    pub source: String,
}

impl TowerSeed {
    /// Base data of the tower over a quadratic field in which every listed
    /// split prime really splits.
    pub fn from_quadratic(label: &str, seed: &QuadraticSeed, source: &str) -> Result<Self> {
        let disc = discriminant_alpha(seed)?;
        for &p in &seed.split_primes {
            if !split_ok(seed, p)? {
                return Err(Error::Congruence(format!("{p} does not split in {seed}")));
            }
        }
        let (r1, r2) = match seed.sign {
            Sign::Positive => (2, 0),
            Sign::Negative => (0, 1),
        };
        Ok(TowerSeed {
            label: label.to_string(),
            alpha: disc.alpha,
            r1,
            r2,
            split_places: seed
                .split_primes
                .iter()
                .map(|&p| SplitPlace { q: p, count: 2 })
                .collect(),
            provenance: Provenance::QuadraticDerived,
            source: source.to_string(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidSeed(format!(
                "{}: alpha must be positive, got {}",
                self.label, self.alpha
            )));
        }
        let mut seen = Vec::new();
        for place in &self.split_places {
            PrimePower::from_q(place.q).map_err(|e| {
                Error::InvalidSeed(format!("{}: split place norm {}: {e}", self.label, place.q))
            })?;
            if place.count == 0 {
                return Err(Error::InvalidSeed(format!(
                    "{}: split place {} has zero count",
                    self.label, place.q
                )));
            }
            if seen.contains(&place.q) {
                return Err(Error::InvalidSeed(format!(
                    "{}: split place {} listed twice",
                    self.label, place.q
                )));
            }
            seen.push(place.q);
        }
        if self.provenance == Provenance::QuadraticDerived {
            if self.r1 + 2 * self.r2 != 2 {
                return Err(Error::InvalidSeed(format!(
                    "{}: quadratic seed needs r1 + 2 r2 = 2",
                    self.label
                )));
            }
            if self.split_places.iter().any(|s| s.count != 2) {
                return Err(Error::InvalidSeed(format!(
                    "{}: a split prime of a quadratic field has exactly two places",
                    self.label
                )));
            }
        }
        Ok(())
    }
}

/// Limiting data of the tower: every count divided by the base `alpha`.
pub fn tower_phi(seed: &TowerSeed) -> Result<PhiVector> {
    let mut phi = PhiVector {
        phi_r: seed.r1 as f64 / seed.alpha,
        phi_c: seed.r2 as f64 / seed.alpha,
        ..PhiVector::new()
    };
    for place in &seed.split_places {
        let q = PrimePower::from_q(place.q)?;
        phi.set(q, phi.get(&q) + place.count as f64 / seed.alpha);
    }
    Ok(phi)
}

/// Limit of `gamma_K/alpha_K` (or the completed ratio) along the tower,
/// counting only the prescribed split places. Unlisted places can only
/// lower the true limit, so this is an upper bound for the liminf.
pub fn evaluate_seed(seed: &TowerSeed, objective: Objective) -> Result<f64> {
    seed.validate()?;
    Ok(tower_phi(seed)?.limit_value(objective))
}

type Threshold = dyn Fn(usize, usize) -> bool + Send + Sync;

/// Sufficient condition for an infinite 2-class field tower over a
/// quadratic field with `t` ramified primes and `s` primes required split.
#[derive(Clone, Default)]
pub struct FeasibilityConfig {
    custom: Option<Arc<Threshold>>,
}

impl FeasibilityConfig {
    pub fn custom(f: impl Fn(usize, usize) -> bool + Send + Sync + 'static) -> Self {
        FeasibilityConfig {
            custom: Some(Arc::new(f)),
        }
    }

    pub fn is_default(&self) -> bool {
        self.custom.is_none()
    }
}

impl fmt::Debug for FeasibilityConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.custom {
            None => f.write_str("FeasibilityConfig(default)"),
            Some(_) => f.write_str("FeasibilityConfig(custom)"),
        }
    }
}

/// Default: `t - 1 - s >= 2 + 2 sqrt(s + 2)`. The 2-rank of the class group
/// is `t - 1`; each prescribed split prime costs one relation in a
/// Golod–Shafarevich-type count.
pub fn tower_feasible(t: usize, s: usize, config: &FeasibilityConfig) -> bool {
    match &config.custom {
        Some(f) => f(t, s),
        None => {
            let rank = t as f64 - 1.0 - s as f64;
            rank >= 2.0 + 2.0 * (s as f64 + 2.0).sqrt()
        }
    }
}
