//! Machine-readable verdicts with evidence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::to_json_pretty;
use crate::linalg::{PsdCheck, Tolerances};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Boundary,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Boundary => "boundary",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// True and boundary verdicts count as membership in a closed region.
    pub fn is_member(self) -> bool {
        matches!(self, Verdict::True | Verdict::Boundary)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_eig: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Evidence {
    pub fn min_eig(x: f64) -> Self {
        Evidence {
            min_eig: Some(x),
            ..Default::default()
        }
    }

    pub fn constraint(label: &str, slack: f64) -> Self {
        Evidence {
            constraint: Some(label.to_string()),
            slack: Some(slack),
            ..Default::default()
        }
    }

    pub fn note(s: impl Into<String>) -> Self {
        Evidence {
            note: Some(s.into()),
            ..Default::default()
        }
    }

    pub fn with_min_eig(mut self, x: f64) -> Self {
        self.min_eig = Some(x);
        self
    }

    pub fn with_note(mut self, s: impl Into<String>) -> Self {
        self.note = Some(s.into());
        self
    }

    pub fn is_empty(&self) -> bool {
        self.min_eig.is_none() && self.constraint.is_none() && self.note.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub verdict: Verdict,
    #[serde(default)]
    pub evidence: Evidence,
}

impl Check {
    pub fn new(verdict: Verdict, evidence: Evidence) -> Self {
        Check { verdict, evidence }
    }

    pub fn from_psd(p: PsdCheck) -> Self {
        Check::new(Verdict::from_bool(p.psd), Evidence::min_eig(p.min_eig))
    }
}

/// Outcome of applying one witness map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub id: String,
    pub params: Vec<f64>,
    pub min_eig: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub family: String,
    pub d: usize,
    pub input: Vec<f64>,
    pub checks: BTreeMap<String, Check>,
    pub verdict: String,
    pub witness_evidence: Vec<WitnessRecord>,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub version: String,
}

impl Certificate {
    pub fn new(family: &str, d: usize, input: Vec<f64>, tol: &Tolerances, seed: u64) -> Self {
        Certificate {
            family: family.into(),
            d,
            input,
            checks: BTreeMap::new(),
            verdict: String::new(),
            witness_evidence: Vec::new(),
            tolerances: *tol,
            seed,
            version: VERSION.into(),
        }
    }

    pub fn insert(&mut self, key: &str, check: Check) {
        self.checks.insert(key.into(), check);
    }

    pub fn get(&self, key: &str) -> Option<&Check> {
        self.checks.get(key)
    }

    pub fn verdict_of(&self, key: &str) -> Option<Verdict> {
        self.checks.get(key).map(|c| c.verdict)
    }

    /// Checks that every false or boundary verdict carries evidence.
    pub fn validate(&self) -> Result<()> {
        for (k, c) in &self.checks {
            match c.verdict {
                Verdict::False if c.evidence.is_empty() => {
                    return Err(Error::Contract(format!("false verdict for {k} without evidence")))
                }
                Verdict::Boundary if c.evidence.constraint.is_none() && c.evidence.min_eig.is_none() => {
                    return Err(Error::Contract(format!(
                        "boundary verdict for {k} without the near-tight quantity"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn to_json_string(&self) -> String {
        to_json_pretty(self).expect("certificates serialize")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let c: Certificate =
            serde_json::from_str(s).map_err(|e| Error::Format(format!("certificate JSON: {e}")))?;
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(x: f64, y: f64) -> Certificate {
        let mut c = Certificate::new("hh", 3, vec![x, y, 0.1], &Tolerances::default(), 7);
        c.insert("cp", Check::new(Verdict::True, Evidence::default()));
        c.insert(
            "ppt",
            Check::new(Verdict::False, Evidence::constraint("c <= a/d", y)),
        );
        c.witness_evidence.push(WitnessRecord {
            id: "Psi1".into(),
            params: vec![x],
            min_eig: y,
            passed: false,
        });
        c.verdict = "NOT-EB".into();
        c
    }

    #[test]
    fn false_verdict_needs_evidence() {
        let mut c = sample(1.0, -0.5);
        assert!(c.validate().is_ok());
        c.insert("eb", Check::new(Verdict::False, Evidence::default()));
        assert!(c.validate().is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip_is_lossless(x in -1e6f64..1e6, y in -1.0f64..1.0) {
            let c = sample(x, y);
            let s = c.to_json_string();
            let back = Certificate::from_json_str(&s).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(back.to_json_string(), s);
        }
    }
}
