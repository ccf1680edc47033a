//! JSON seed files.
//!
//! A seed file is an array of records:
//!
//! ```json
//! { "label": "zykin", "kind": "quadratic", "sign": -1,
//!   "ramified_primes": [5, 7, 11], "split_primes": [2, 3], "source": "..." }
//! { "label": "martinet", "kind": "external", "alpha": 45.2578,
//!   "r1": 0, "r2": 10, "split_places": [{"q": 4, "count": 1}], "source": "..." }
//! ```
//!
//! Integers are exact; only `alpha` is a decimal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::towers::{discriminant_alpha, Provenance, QuadraticSeed, Sign, SplitPlace, TowerSeed};

pub const TOWER_EXAMPLES_JSON: &str = include_str!("../data/tower_examples.json");

/// Accepted gap between a quadratic record's stated `alpha` and the computed one.
const ALPHA_AGREEMENT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedKind {
    Quadratic,
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedRecord {
    pub label: String,
    pub kind: SeedKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ramified_primes: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub split_primes: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_places: Option<Vec<SplitPlace>>,
    /// Tower known to be infinite from the literature, independent of any
    /// feasibility predicate.
    #[serde(default)]
    pub known_feasible: bool,
    pub source: String,
}

impl SeedRecord {
    pub fn quadratic_seed(&self) -> Result<QuadraticSeed> {
        if self.kind != SeedKind::Quadratic {
            return Err(Error::InvalidSeed(format!(
                "{}: not a quadratic record",
                self.label
            )));
        }
        let sign = self
            .sign
            .ok_or_else(|| Error::InvalidSeed(format!("{}: quadratic record needs a sign", self.label)))?;
        Ok(QuadraticSeed::new(
            Sign::from_int(sign)?,
            self.ramified_primes.clone(),
            self.split_primes.clone(),
        ))
    }

    pub fn to_tower_seed(&self) -> Result<TowerSeed> {
        let tag = |e: Error| relabel(&self.label, e);
        match self.kind {
            SeedKind::Quadratic => {
                if self.split_places.is_some() || self.r1.is_some() || self.r2.is_some() {
                    return Err(Error::InvalidSeed(format!(
                        "{}: quadratic records derive r1, r2 and split places",
                        self.label
                    )));
                }
                let q = self.quadratic_seed()?;
                let seed = TowerSeed::from_quadratic(&self.label, &q, &self.source).map_err(tag)?;
                if let Some(stated) = self.alpha {
                    let computed = discriminant_alpha(&q).map_err(tag)?.alpha;
                    if (stated - computed).abs() > ALPHA_AGREEMENT {
                        return Err(Error::InvalidSeed(format!(
                            "{}: stated alpha {stated} disagrees with computed {computed}",
                            self.label
                        )));
                    }
                }
                Ok(seed)
            }
            SeedKind::External => {
                if self.sign.is_some() || !self.ramified_primes.is_empty() || !self.split_primes.is_empty() {
                    return Err(Error::InvalidSeed(format!(
                        "{}: external records give alpha and places directly",
                        self.label
                    )));
                }
                let alpha = self.alpha.ok_or_else(|| {
                    Error::InvalidSeed(format!("{}: external record needs alpha", self.label))
                })?;
                let seed = TowerSeed {
                    label: self.label.clone(),
                    alpha,
                    r1: self.r1.unwrap_or(0),
                    r2: self.r2.unwrap_or(0),
                    split_places: self.split_places.clone().unwrap_or_default(),
                    provenance: Provenance::External,
                    source: self.source.clone(),
                };
                seed.validate()?;
                Ok(seed)
            }
        }
    }
}

fn relabel(label: &str, e: Error) -> Error {
    match e {
        Error::Congruence(m) => Error::Congruence(format!("{label}: {m}")),
        Error::UnsupportedSeed(m) => Error::UnsupportedSeed(format!("{label}: {m}")),
        Error::InvalidSeed(m) => Error::InvalidSeed(format!("{label}: {m}")),
        Error::Domain(m) => Error::InvalidSeed(format!("{label}: {m}")),
        other => other,
    }
}

/// Parse a seed file. Syntax errors carry line and column; record shape
/// errors carry the record index and label.
pub fn parse_seed_file(text: &str) -> Result<Vec<SeedRecord>> {
    let values: Vec<serde_json::Value> = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let label = v
                .get("label")
                .and_then(|l| l.as_str())
                .unwrap_or("<unlabelled>")
                .to_string();
            serde_json::from_value(v).map_err(|e| Error::Parse(format!("record {i} ({label}): {e}")))
        })
        .collect()
}

pub fn bundled_seeds() -> Vec<SeedRecord> {
    parse_seed_file(TOWER_EXAMPLES_JSON).expect("bundled seed file is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Objective;
    use crate::towers::evaluate_seed;

    #[test]
    fn bundled_file_loads() {
        let records = bundled_seeds();
        assert_eq!(records.len(), 7);
        for r in &records {
            let seed = r.to_tower_seed().unwrap();
            assert!(r.known_feasible);
            assert!(evaluate_seed(&seed, Objective::GAMMA).unwrap() <= 0.0);
        }
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_seed_file("[\n  {\"label\": 1,,}\n]").unwrap_err();
        let Error::Parse(msg) = err else { panic!() };
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn record_error_has_index() {
        let text = r#"[{"label":"a","kind":"quadratic","sign":-1,"ramified_primes":[7],"source":""},
                      {"label":"b","kind":"weird","source":""}]"#;
        let Error::Parse(msg) = parse_seed_file(text).unwrap_err() else {
            panic!()
        };
        assert!(msg.contains("record 1 (b)"), "{msg}");
    }

    #[test]
    fn empty_file() {
        assert!(parse_seed_file("[]").unwrap().is_empty());
    }

    #[test]
    fn congruence_violation_is_record_level() {
        let text = r#"[{"label":"bad","kind":"quadratic","sign":1,"ramified_primes":[5],"split_primes":[2],"source":""}]"#;
        let recs = parse_seed_file(text).unwrap();
        assert!(matches!(recs[0].to_tower_seed(), Err(Error::Congruence(m)) if m.starts_with("bad:")));
    }

    #[test]
    fn stated_alpha_must_agree() {
        let text =
            r#"[{"label":"z","kind":"quadratic","sign":-1,"ramified_primes":[7],"alpha":5.0,"source":""}]"#;
        let recs = parse_seed_file(text).unwrap();
        assert!(matches!(recs[0].to_tower_seed(), Err(Error::InvalidSeed(_))));
    }

    #[test]
    fn external_needs_alpha() {
        let text = r#"[{"label":"x","kind":"external","r2":1,"source":""}]"#;
        let recs = parse_seed_file(text).unwrap();
        assert!(recs[0].to_tower_seed().is_err());
    }
}
