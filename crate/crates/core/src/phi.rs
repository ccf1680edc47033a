//! Limit invariants of an asymptotically exact family and the limit of
//! `gamma_K / alpha_K` they determine.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coefficients::{coeff_b, CoefficientFamily, Objective, PrimePower};

/// Absolute tolerance on constraint rows.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Finitely supported nonnegative masses `phi_q`, plus `phi_R` and `phi_C`.
///
/// The map is keyed by prime power and ordered by `q`, so every sum below
/// runs in ascending `q` and then over the archimedean terms.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PhiVector {
    #[serde(with = "mass_list")]
    pub finite: BTreeMap<PrimePower, f64>,
    pub phi_r: f64,
    pub phi_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// `(p, excess)` for each prime whose budget row is exceeded.
    pub budget_violations: Vec<(u64, f64)>,
    pub basic_inequality_lhs: f64,
    pub basic_inequality_slack: f64,
    /// Negative entries, as `(label, value)`.
    pub negative_mass_violations: Vec<(String, f64)>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.is_feasible_within(FEASIBILITY_TOL)
    }

    pub fn is_feasible_within(&self, tol: f64) -> bool {
        self.budget_violations.iter().all(|&(_, e)| e <= tol)
            && self.negative_mass_violations.is_empty()
            && self.basic_inequality_slack >= -tol
    }
}

impl PhiVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_mass(mut self, q: PrimePower, mass: f64) -> Self {
        self.set(q, mass);
        self
    }

    pub fn set(&mut self, q: PrimePower, mass: f64) {
        if mass == 0.0 {
            self.finite.remove(&q);
        } else {
            self.finite.insert(q, mass);
        }
    }

    pub fn get(&self, q: &PrimePower) -> f64 {
        self.finite.get(q).copied().unwrap_or(0.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        PhiVector {
            finite: self.finite.iter().map(|(&q, &v)| (q, v * s)).collect(),
            phi_r: self.phi_r * s,
            phi_c: self.phi_c * s,
        }
    }

    /// Objective sum `sum phi_q b(q) + phi_R b_R + phi_C b_C`.
    pub fn objective_sum(&self, objective: Objective) -> f64 {
        let finite: f64 = self.finite.iter().map(|(&q, &v)| v * coeff_b(q)).sum();
        finite + self.phi_r * objective.b_real() + self.phi_c * objective.b_complex()
    }

    /// Limit of `gamma_K/alpha_K` (or the completed variant) for this data.
    pub fn limit_value(&self, objective: Objective) -> f64 {
        // 0.0 - x keeps the empty sum at +0
        0.0 - self.objective_sum(objective)
    }

    /// Check nonnegativity, the per-prime budget and the basic inequality.
    /// Function-field families only get the basic-inequality row.
    pub fn validate(&self, family: &CoefficientFamily) -> ValidationReport {
        let mut negative = Vec::new();
        for (q, &v) in &self.finite {
            if v < 0.0 {
                negative.push((format!("phi_{}", q.q), v));
            }
        }

        let mut lhs = 0.0;
        for (&q, &v) in &self.finite {
            // a(q) is only undefined for foreign q in the FF case; that mass
            // cannot belong to the family, so treat it as infinitely costly.
            lhs += match family.coeff_a(q) {
                Ok(a) => v * a,
                Err(_) if v == 0.0 => 0.0,
                Err(_) => f64::INFINITY,
            };
        }

        let mut budget_violations = Vec::new();
        if family.is_number_field() {
            if self.phi_r < 0.0 {
                negative.push(("phi_R".into(), self.phi_r));
            }
            if self.phi_c < 0.0 {
                negative.push(("phi_C".into(), self.phi_c));
            }
            let (a_r, a_c) = family.arch_coeffs().expect("number field family");
            lhs += self.phi_r * a_r + self.phi_c * a_c;

            let cap = self.phi_r + 2.0 * self.phi_c;
            let mut per_prime: BTreeMap<u64, f64> = BTreeMap::new();
            for (q, &v) in &self.finite {
                *per_prime.entry(q.p).or_default() += q.m as f64 * v;
            }
            for (p, used) in per_prime {
                let excess = used - cap;
                if excess > FEASIBILITY_TOL {
                    budget_violations.push((p, excess));
                }
            }
        }

        ValidationReport {
            budget_violations,
            basic_inequality_lhs: lhs,
            basic_inequality_slack: 1.0 - lhs,
            negative_mass_violations: negative,
        }
    }
}

/// JSON form of the finite masses: a list of `{p, m, q, mass}` in ascending `q`.
mod mass_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::coefficients::PrimePower;

    #[derive(Serialize, Deserialize)]
    struct Entry {
        p: u64,
        m: u32,
        q: u64,
        mass: f64,
    }

    pub fn serialize<S: Serializer>(map: &BTreeMap<PrimePower, f64>, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<Entry> = map
            .iter()
            .map(|(q, &mass)| Entry {
                p: q.p,
                m: q.m,
                q: q.q,
                mass,
            })
            .collect();
        entries.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<PrimePower, f64>, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        let mut map = BTreeMap::new();
        for e in entries {
            let q = PrimePower::new(e.p, e.m).map_err(serde::de::Error::custom)?;
            if q.q != e.q {
                return Err(serde::de::Error::custom(format!("{}^{} != {}", e.p, e.m, e.q)));
            }
            map.insert(q, e.mass);
        }
        Ok(map)
    }
}
