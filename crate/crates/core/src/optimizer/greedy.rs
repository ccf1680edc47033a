use crate::coefficients::{coeff_b, CoefficientFamily, Objective, PrimePower};
use crate::error::{Error, Result};
use crate::phi::PhiVector;
use crate::primes::shared_primes;

use super::{BoundResult, Carrier, RejectedPrime, SolverKind};

/// Ratio ties within this distance include the prime.
const TIE_TOL: f64 = 1e-14;

struct Scan {
    value: f64,
    included: Vec<(PrimePower, f64)>,
    first_rejected: Option<RejectedPrime>,
    carrier_mass: f64,
}

/// Structured optimum over exponent-one variables with a single carrier.
///
/// With carrier weight `w` (2 for `phi_C`, 1 for `phi_R`) every included prime
/// gets `phi_p = w * phi_carrier`, and the value of a prime set `S` is
/// `V(S) = (w sum_S b + b_car) / (w sum_S a + a_car)`. Primes are scanned in
/// ascending order, where `b/a` decreases, and added while `b/a > V(S)`.
pub fn greedy_bound(
    family: &CoefficientFamily,
    objective: Objective,
    prime_cutoff: u64,
) -> Result<BoundResult> {
    if !family.is_number_field() {
        return Err(Error::Domain(
            "greedy solver needs a number-field family; use lp_bound or ff_closed_form".into(),
        ));
    }
    if prime_cutoff < 2 {
        return Err(Error::Domain("prime cutoff must be >= 2".into()));
    }
    let (a_r, a_c) = family.arch_coeffs()?;
    let table = shared_primes(prime_cutoff)?;
    let primes = &table[..table.partition_point(|&p| p <= prime_cutoff)];

    let via_c = scan(family, primes, 2.0, a_c, objective.b_complex())?;
    let via_r = scan(family, primes, 1.0, a_r, objective.b_real())?;

    // pure carriers suffice by linearity; prefer C on ties when it is the
    // cheaper carrier per unit of budget
    let prefer_c = a_c / 2.0 <= a_r;
    let pick_c = if (via_c.value - via_r.value).abs() <= TIE_TOL {
        prefer_c
    } else {
        via_c.value > via_r.value
    };
    let (carrier, best) = if pick_c {
        (Carrier::C, via_c)
    } else {
        (Carrier::R, via_r)
    };

    let mut phi = PhiVector::new();
    match carrier {
        Carrier::C => phi.phi_c = best.carrier_mass,
        Carrier::R => phi.phi_r = best.carrier_mass,
    }
    for &(q, mass) in &best.included {
        phi.set(q, mass);
    }

    Ok(BoundResult {
        value: best.value,
        phi,
        carrier: Some(carrier),
        included_primes: best.included.iter().map(|(q, _)| q.p).collect(),
        first_rejected: best.first_rejected,
        solver: SolverKind::Greedy,
        family: *family,
        objective,
        prime_cutoff,
        m_max: 1,
        pivots: None,
    })
}

fn scan(
    family: &CoefficientFamily,
    primes: &[u64],
    weight: f64,
    a_carrier: f64,
    b_carrier: f64,
) -> Result<Scan> {
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    let mut chosen = Vec::new();
    let mut first_rejected = None;
    for &p in primes {
        let q = PrimePower::prime(p)?;
        let a = family.coeff_a(q)?;
        let b = coeff_b(q);
        let value = (weight * sum_b + b_carrier) / (weight * sum_a + a_carrier);
        let ratio = b / a;
        if ratio > value - TIE_TOL {
            sum_a += a;
            sum_b += b;
            chosen.push(q);
        } else {
            first_rejected = Some(RejectedPrime { p, ratio });
            break;
        }
    }
    let denom = weight * sum_a + a_carrier;
    let carrier_mass = 1.0 / denom;
    Ok(Scan {
        value: (weight * sum_b + b_carrier) / denom,
        included: chosen.into_iter().map(|q| (q, weight * carrier_mass)).collect(),
        first_rejected,
        carrier_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::Constants;

    #[test]
    fn grh_gamma() {
        let r = greedy_bound(&CoefficientFamily::nf_grh(), Objective::GAMMA, 100).unwrap();
        assert!((r.value - 0.260_491_97).abs() < 1e-8);
        assert_eq!(r.included_primes, vec![2, 3, 5, 7]);
        assert_eq!(r.carrier, Some(Carrier::C));
        assert_eq!(r.phi.phi_r, 0.0);
        let rej = r.first_rejected.unwrap();
        assert_eq!(rej.p, 11);
        assert!((rej.ratio - 0.231_662_5).abs() < 1e-7);
        assert!((r.phi.phi_c - 0.066_143_88).abs() < 1e-8);
    }

    #[test]
    fn grh_gamma_tilde_all_on_complex() {
        let r = greedy_bound(&CoefficientFamily::nf_grh(), Objective::GAMMA_TILDE, 100).unwrap();
        assert!((r.value - 0.635_318_6).abs() < 1e-6);
        assert!(r.included_primes.is_empty());
        assert_eq!(r.carrier, Some(Carrier::C));
        assert!(r.phi.finite.is_empty());
    }

    #[test]
    fn unconditional_gamma_tilde() {
        let r = greedy_bound(&CoefficientFamily::nf_uncond_full(), Objective::GAMMA_TILDE, 100).unwrap();
        assert!((r.value - 0.776_996_5).abs() < 1e-6);
        assert!(r.included_primes.is_empty());
    }

    #[test]
    fn first_term_with_override() {
        let k = Constants::get();
        let fam = CoefficientFamily::nf_uncond_first_term().with_arch_override(k.euler_gamma + k.log_8pi);
        let r = greedy_bound(&fam, Objective::GAMMA, 100).unwrap();
        assert!((r.value - 0.522_746_2).abs() < 1e-5);
        assert_eq!(*r.included_primes.last().unwrap(), 43);
        assert_eq!(r.included_primes.len(), 14);
        assert_eq!(r.first_rejected.unwrap().p, 47);
    }

    #[test]
    fn cutoff_truncates_scan() {
        let r = greedy_bound(&CoefficientFamily::nf_grh(), Objective::GAMMA, 5).unwrap();
        assert_eq!(r.included_primes, vec![2, 3, 5]);
        assert!(r.first_rejected.is_none());
    }

    #[test]
    fn function_field_rejected() {
        let fam = CoefficientFamily::function_field(4).unwrap();
        assert!(matches!(
            greedy_bound(&fam, Objective::GAMMA, 100),
            Err(Error::Domain(_))
        ));
    }
}
