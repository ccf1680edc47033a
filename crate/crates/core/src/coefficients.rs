//! Coefficient tables for the explicit-formula constraints and objectives.
//!
//! A family fixes the constraint row `a(q)`, `a_R`, `a_C`; an objective fixes
//! `b(q)`, `b_R`, `b_C`. The finite coefficient `b(q) = log q / (q - 1)` is
//! shared by both objectives.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::primes::{is_prime, sieve};

/// Largest prime power index accepted anywhere (`2^62`).
pub const MAX_Q: u64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub m: u32,
    pub q: u64,
}

impl PrimePower {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("prime power exponent must be >= 1".into()));
        }
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_Q)
            .ok_or_else(|| Error::Capacity(format!("{p}^{m} exceeds 2^62")))?;
        Ok(PrimePower { p, m, q })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// Decompose `q` as `p^m`; fails when `q` is not a prime power.
    pub fn from_q(q: u64) -> Result<Self> {
        if q > MAX_Q {
            return Err(Error::Capacity(format!("{q} exceeds 2^62")));
        }
        if q < 2 {
            return Err(Error::Domain(format!("{q} is not a prime power")));
        }
        for m in (1..=62u32).rev() {
            let r = integer_root(q, m);
            if r >= 2 && r.checked_pow(m) == Some(q) && is_prime(r) {
                return Ok(PrimePower { p: r, m, q });
            }
        }
        Err(Error::Domain(format!("{q} is not a prime power")))
    }

    pub fn log(&self) -> f64 {
        (self.q as f64).ln()
    }
}

fn integer_root(n: u64, k: u32) -> u64 {
    if k == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    // nudge the float estimate onto the exact floor root
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

impl Ord for PrimePower {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.q.cmp(&other.q)
    }
}

impl PartialOrd for PrimePower {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.m)
        }
    }
}

/// All prime powers `p^m <= limit_q` with `m <= m_max`, ascending by `q`.
pub fn prime_powers(limit_q: u64, m_max: u32) -> Result<Vec<PrimePower>> {
    if limit_q > MAX_Q {
        return Err(Error::Capacity(format!("limit {limit_q} exceeds 2^62")));
    }
    if limit_q < 2 || m_max == 0 {
        return Err(Error::Domain("need limit_q >= 2 and m_max >= 1".into()));
    }
    let mut out = Vec::new();
    for p in sieve(limit_q)? {
        let mut q = p;
        let mut m = 1;
        while m <= m_max && q <= limit_q {
            out.push(PrimePower { p, m, q });
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
            m += 1;
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyKind {
    /// Number fields, GRH explicit formula.
    NfGrh,
    /// Number fields, unconditional, full series `sum 1/(q^m + 1)`.
    NfUncondFull,
    /// Number fields, unconditional, series truncated to `1/(q + 1)`.
    NfUncondFirstTerm,
    /// Function fields over the constant field with `q0` elements.
    FunctionField(PrimePower),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFamily {
    pub kind: FamilyKind,
    /// Replaces `a_C` when set.
    pub arch_override: Option<f64>,
}

impl CoefficientFamily {
    pub fn new(kind: FamilyKind) -> Self {
        CoefficientFamily {
            kind,
            arch_override: None,
        }
    }

    pub fn nf_grh() -> Self {
        Self::new(FamilyKind::NfGrh)
    }

    pub fn nf_uncond_full() -> Self {
        Self::new(FamilyKind::NfUncondFull)
    }

    pub fn nf_uncond_first_term() -> Self {
        Self::new(FamilyKind::NfUncondFirstTerm)
    }

    pub fn function_field(q0: u64) -> Result<Self> {
        Ok(Self::new(FamilyKind::FunctionField(PrimePower::from_q(q0)?)))
    }

    pub fn with_arch_override(mut self, a_c: f64) -> Self {
        self.arch_override = Some(a_c);
        self
    }

    pub fn is_number_field(&self) -> bool {
        !matches!(self.kind, FamilyKind::FunctionField(_))
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::NfGrh => "nf-grh",
            FamilyKind::NfUncondFull => "nf-uncond-full",
            FamilyKind::NfUncondFirstTerm => "nf-uncond-first-term",
            FamilyKind::FunctionField(_) => "ff",
        }
    }

    /// Constraint coefficient `a(q)` of the basic inequality.
    pub fn coeff_a(&self, q: PrimePower) -> Result<f64> {
        let log_q = q.log();
        match self.kind {
            FamilyKind::NfGrh => Ok(log_q / ((q.q as f64).sqrt() - 1.0)),
            FamilyKind::NfUncondFull => Ok(2.0 * log_q * geometric_tail(q.q)),
            FamilyKind::NfUncondFirstTerm => Ok(2.0 * log_q / (q.q as f64 + 1.0)),
            FamilyKind::FunctionField(q0) => {
                let m = ff_degree(q0, q)?;
                let q0f = q0.q as f64;
                Ok(m as f64 * q0f.ln() / (q0f.powf(m as f64 / 2.0) - 1.0))
            }
        }
    }

    /// `(a_R, a_C)`; `a_C` is replaced by the override when one is set.
    pub fn arch_coeffs(&self) -> Result<(f64, f64)> {
        let c = Constants::get();
        let g = c.euler_gamma;
        let (a_r, a_c) = match self.kind {
            FamilyKind::NfGrh => (0.5 * c.log_8pi + c.pi / 4.0 + g / 2.0, c.log_8pi + g),
            FamilyKind::NfUncondFull | FamilyKind::NfUncondFirstTerm => {
                (g / 2.0 + 0.5 + (2.0 * c.pi.sqrt()).ln(), g + c.log_4pi)
            }
            FamilyKind::FunctionField(_) => {
                return Err(Error::Domain("function fields have no archimedean places".into()))
            }
        };
        Ok((a_r, self.arch_override.unwrap_or(a_c)))
    }
}

/// Degree `m` with `q = q0^m`.
pub fn ff_degree(q0: PrimePower, q: PrimePower) -> Result<u32> {
    if q.p != q0.p || !q.m.is_multiple_of(q0.m) {
        return Err(Error::Domain(format!("{} is not a power of {}", q.q, q0.q)));
    }
    Ok(q.m / q0.m)
}

/// `sum_{m>=1} 1/(q^m + 1)`, stopped once `q^m > 1e18` or the next term
/// drops below `1e-18` of the partial sum.
pub fn geometric_tail(q: u64) -> f64 {
    let qf = q as f64;
    let mut sum = 0.0;
    let mut power = qf;
    loop {
        if power > 1e18 {
            break;
        }
        let term = 1.0 / (power + 1.0);
        if sum > 0.0 && term < 1e-18 * sum {
            break;
        }
        sum += term;
        power *= qf;
    }
    sum
}

/// Objective coefficient `b(q) = log q / (q - 1)`.
pub fn coeff_b(q: PrimePower) -> f64 {
    q.log() / (q.q as f64 - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObjectiveKind {
    Gamma,
    GammaTilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    pub kind: ObjectiveKind,
}

impl Objective {
    pub const GAMMA: Objective = Objective {
        kind: ObjectiveKind::Gamma,
    };
    pub const GAMMA_TILDE: Objective = Objective {
        kind: ObjectiveKind::GammaTilde,
    };

    pub fn b_real(&self) -> f64 {
        match self.kind {
            ObjectiveKind::Gamma => 0.0,
            ObjectiveKind::GammaTilde => {
                let c = Constants::get();
                (c.euler_gamma + c.log_4pi) / 2.0
            }
        }
    }

    pub fn b_complex(&self) -> f64 {
        match self.kind {
            ObjectiveKind::Gamma => 0.0,
            ObjectiveKind::GammaTilde => {
                let c = Constants::get();
                c.euler_gamma + c.log_2pi
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ObjectiveKind::Gamma => "gamma",
            ObjectiveKind::GammaTilde => "gamma-tilde",
        }
    }
}
