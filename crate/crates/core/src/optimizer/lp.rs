use serde::{Deserialize, Serialize};

use crate::coefficients::{coeff_b, CoefficientFamily, FamilyKind, Objective, PrimePower};
use crate::error::{Error, Result};
use crate::phi::PhiVector;
use crate::primes::shared_primes;

use super::simplex::Simplex;
use super::{BoundResult, Carrier, SolverKind};

const SIMPLEX_TOL: f64 = 1e-12;
pub const MAX_LP_VARIABLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpVariable {
    Finite(PrimePower),
    Real,
    Complex,
}

/// Truncated LP: one basic-inequality row, then one budget row per prime
/// (number fields only).
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub variables: Vec<LpVariable>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub objective: Vec<f64>,
}

impl LpProblem {
    /// Variables are `p^m` for primes `p <= p_max` and `m <= m_max`, plus
    /// `phi_R`, `phi_C`. For a function-field family over `F_q0` they are
    /// `q0^m`, `m <= m_max`, and `p_max` is ignored.
    pub fn build(family: &CoefficientFamily, objective: Objective, p_max: u64, m_max: u32) -> Result<Self> {
        if m_max == 0 {
            return Err(Error::Domain("m_max must be >= 1".into()));
        }
        match family.kind {
            FamilyKind::FunctionField(q0) => Self::build_ff(family, q0, m_max),
            _ => Self::build_nf(family, objective, p_max, m_max),
        }
    }

    fn build_nf(family: &CoefficientFamily, objective: Objective, p_max: u64, m_max: u32) -> Result<Self> {
        if p_max < 2 {
            return Err(Error::Domain("P_max must be >= 2".into()));
        }
        let table = shared_primes(p_max)?;
        let primes = &table[..table.partition_point(|&p| p <= p_max)];

        let mut powers = Vec::new();
        for &p in primes {
            for m in 1..=m_max {
                match PrimePower::new(p, m) {
                    Ok(q) => powers.push(q),
                    Err(Error::Capacity(_)) => break,
                    Err(e) => return Err(e),
                }
            }
        }
        let n = powers.len() + 2;
        if n > MAX_LP_VARIABLES {
            return Err(Error::Capacity(format!(
                "{n} LP variables exceed the limit of {MAX_LP_VARIABLES}"
            )));
        }
        let (a_r, a_c) = family.arch_coeffs()?;

        let mut variables: Vec<LpVariable> = powers.iter().map(|&q| LpVariable::Finite(q)).collect();
        variables.push(LpVariable::Real);
        variables.push(LpVariable::Complex);

        let mut basic = Vec::with_capacity(n);
        for &q in &powers {
            basic.push(family.coeff_a(q)?);
        }
        basic.push(a_r);
        basic.push(a_c);

        let mut rows = vec![basic];
        let mut rhs = vec![1.0];
        for &p in primes {
            let mut row = vec![0.0; n];
            for (j, q) in powers.iter().enumerate() {
                if q.p == p {
                    row[j] = q.m as f64;
                }
            }
            row[n - 2] = -1.0;
            row[n - 1] = -2.0;
            rows.push(row);
            rhs.push(0.0);
        }

        let mut cost: Vec<f64> = powers.iter().map(|&q| coeff_b(q)).collect();
        cost.push(objective.b_real());
        cost.push(objective.b_complex());

        Ok(LpProblem {
            variables,
            rows,
            rhs,
            objective: cost,
        })
    }

    fn build_ff(family: &CoefficientFamily, q0: PrimePower, m_max: u32) -> Result<Self> {
        let mut variables = Vec::new();
        let mut basic = Vec::new();
        let mut cost = Vec::new();
        for m in 1..=m_max {
            let q = match PrimePower::new(q0.p, q0.m * m) {
                Ok(q) => q,
                Err(Error::Capacity(_)) => break,
                Err(e) => return Err(e),
            };
            variables.push(LpVariable::Finite(q));
            basic.push(family.coeff_a(q)?);
            cost.push(coeff_b(q));
        }
        Ok(LpProblem {
            variables,
            rows: vec![basic],
            rhs: vec![1.0],
            objective: cost,
        })
    }
}

/// Solve the truncated LP with the dense simplex.
pub fn lp_bound(
    family: &CoefficientFamily,
    objective: Objective,
    p_max: u64,
    m_max: u32,
) -> Result<BoundResult> {
    let problem = LpProblem::build(family, objective, p_max, m_max)?;
    let n = problem.variables.len();
    let max_pivots = 50 * (n + problem.rows.len());
    let solution = Simplex::new(&problem.rows, &problem.rhs, &problem.objective, SIMPLEX_TOL)?
        .solve(max_pivots)
        .map_err(|e| match e {
            Error::Solver(msg) if msg.contains("unbounded") => Error::Solver(format!(
                "internal error, positive basic row cannot be unbounded: {msg}"
            )),
            other => other,
        })?;

    let mut phi = PhiVector::new();
    for (var, &x) in problem.variables.iter().zip(&solution.x) {
        let x = if x < 0.0 { 0.0 } else { x };
        match var {
            LpVariable::Finite(q) => phi.set(*q, x),
            LpVariable::Real => phi.phi_r = x,
            LpVariable::Complex => phi.phi_c = x,
        }
    }
    let carrier = if phi.phi_c > 0.0 {
        Some(Carrier::C)
    } else if phi.phi_r > 0.0 {
        Some(Carrier::R)
    } else {
        None
    };
    let mut included: Vec<u64> = phi
        .finite
        .iter()
        .filter(|(_, &v)| v > 0.0)
        .map(|(q, _)| q.p)
        .collect();
    included.sort_unstable();
    included.dedup();

    Ok(BoundResult {
        value: solution.objective,
        phi,
        carrier,
        included_primes: included,
        first_rejected: None,
        solver: SolverKind::Lp,
        family: *family,
        objective,
        prime_cutoff: p_max,
        m_max,
        pivots: Some(solution.pivots),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FfBound {
    /// `1/(sqrt(q0) + 1)`; the liminf bound is its negative.
    pub value: f64,
    /// Optimal-family data: `phi_{q0} = (sqrt(q0) - 1)/log q0`.
    pub witness: PhiVector,
}

pub fn ff_closed_form(q0: u64) -> Result<FfBound> {
    let q = PrimePower::from_q(q0)?;
    let root = (q0 as f64).sqrt();
    Ok(FfBound {
        value: 1.0 / (root + 1.0),
        witness: PhiVector::new().with_mass(q, (root - 1.0) / q.log()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::greedy_bound;

    #[test]
    fn grh_gamma_matches_greedy_and_ignores_powers() {
        let fam = CoefficientFamily::nf_grh();
        let lp = lp_bound(&fam, Objective::GAMMA, 100, 3).unwrap();
        let g = greedy_bound(&fam, Objective::GAMMA, 100).unwrap();
        assert!((lp.value - g.value).abs() < 1e-9);
        assert!(lp.phi.finite.iter().all(|(q, &v)| q.m == 1 || v == 0.0));
        assert_eq!(lp.included_primes, vec![2, 3, 5, 7]);
        assert_eq!(lp.carrier, Some(Carrier::C));
        let n = LpProblem::build(&fam, Objective::GAMMA, 100, 3)
            .unwrap()
            .variables
            .len();
        assert!(lp.pivots.unwrap() < 10 * n);
    }

    #[test]
    fn grh_gamma_tilde() {
        let lp = lp_bound(&CoefficientFamily::nf_grh(), Objective::GAMMA_TILDE, 50, 2).unwrap();
        assert!((lp.value - 0.635_318_6).abs() < 1e-6);
    }

    #[test]
    fn function_field_q4() {
        let fam = CoefficientFamily::function_field(4).unwrap();
        let lp = lp_bound(&fam, Objective::GAMMA, 0, 8).unwrap();
        assert!((lp.value - 1.0 / 3.0).abs() < 1e-9);
        assert_eq!(lp.carrier, None);
    }

    #[test]
    fn budget_row_pattern() {
        let p = LpProblem::build(&CoefficientFamily::nf_grh(), Objective::GAMMA, 3, 2).unwrap();
        // variables 2, 4, 3, 9, R, C
        assert_eq!(p.rows.len(), 3);
        assert_eq!(p.rows[1], vec![1.0, 2.0, 0.0, 0.0, -1.0, -2.0]);
        assert_eq!(p.rows[2], vec![0.0, 0.0, 1.0, 2.0, -1.0, -2.0]);
        assert!(p.rows[0].iter().all(|&a| a.is_finite() && a > 0.0));
    }

    #[test]
    fn closed_form_values() {
        assert!((ff_closed_form(4).unwrap().value - 1.0 / 3.0).abs() < 1e-15);
        assert!((ff_closed_form(9).unwrap().value - 0.25).abs() < 1e-15);
        assert!((ff_closed_form(2).unwrap().value - 0.414_213_6).abs() < 1e-7);
        assert!(ff_closed_form(6).is_err());
    }

    #[test]
    fn variable_limit() {
        let r = LpProblem::build(&CoefficientFamily::nf_grh(), Objective::GAMMA, 200_000, 1);
        assert!(matches!(r, Err(Error::Capacity(_))));
    }
}
