//! Named residuals with tolerances and verdicts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// How a residual is compared against its tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Passes when `residual <= tolerance`.
    AtMost,
    /// Passes when `residual > tolerance` (e.g. a symmetry that must visibly break).
    Exceeds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub criterion: Criterion,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub context: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub title: String,
    pub entries: Vec<CheckEntry>,
    pub overall_pass: bool,
}

impl CheckReport {
    pub fn new(title: impl Into<String>) -> Self {
        CheckReport {
            title: title.into(),
            entries: Vec::new(),
            overall_pass: true,
        }
    }

    fn push_entry(&mut self, entry: CheckEntry) -> &mut CheckEntry {
        self.overall_pass &= entry.pass;
        self.entries.push(entry);
        self.entries.last_mut().expect("just pushed")
    }

    /// Records `residual <= tolerance`.
    pub fn at_most(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) -> &mut CheckEntry {
        self.push_entry(CheckEntry {
            name: name.into(),
            residual,
            tolerance,
            criterion: Criterion::AtMost,
            pass: residual <= tolerance,
            context: BTreeMap::new(),
        })
    }

    /// Records `residual > tolerance`.
    pub fn exceeds(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) -> &mut CheckEntry {
        self.push_entry(CheckEntry {
            name: name.into(),
            residual,
            tolerance,
            criterion: Criterion::Exceeds,
            pass: residual > tolerance,
            context: BTreeMap::new(),
        })
    }

    /// Records a boolean fact as a 0/1 residual against tolerance 0.
    pub fn holds(&mut self, name: impl Into<String>, ok: bool) -> &mut CheckEntry {
        self.at_most(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    /// Appends every entry of `other`, prefixing names with its title.
    pub fn absorb(&mut self, other: CheckReport) {
        for mut entry in other.entries {
            entry.name = format!("{}.{}", other.title, entry.name);
            self.push_entry(entry);
        }
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.criterion == Criterion::AtMost)
            .map(|e| e.residual)
            .fold(0.0, f64::max)
    }

    /// Recomputes `overall_pass` from the entries (used after deserialization).
    pub fn is_consistent(&self) -> bool {
        let recomputed = self.entries.iter().all(|e| {
            e.pass
                == match e.criterion {
                    Criterion::AtMost => e.residual <= e.tolerance,
                    Criterion::Exceeds => e.residual > e.tolerance,
                }
        });
        recomputed && self.overall_pass == self.entries.iter().all(|e| e.pass)
    }
}

impl CheckEntry {
    pub fn with(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.context.insert(key.into(), value);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn overall_pass_is_conjunction() {
        let mut r = CheckReport::new("t");
        r.at_most("a", 1e-12, 1e-10);
        assert!(r.overall_pass);
        r.exceeds("b", 1e-12, 1e-6);
        assert!(!r.overall_pass);
        assert!(r.is_consistent());
    }

    proptest! {
        #[test]
        fn json_round_trip_is_lossless(
            residuals in proptest::collection::vec((0.0f64..1e3, 1e-16f64..1.0, any::<bool>()), 0..8),
            ctx in -1e300f64..1e300,
        ) {
            let mut r = CheckReport::new("roundtrip");
            for (k, (res, tol, exceeds)) in residuals.iter().enumerate() {
                let e = if *exceeds {
                    r.exceeds(format!("e{k}"), *res, *tol)
                } else {
                    r.at_most(format!("e{k}"), *res, *tol)
                };
                e.with("ctx", ctx);
            }
            let text = serde_json::to_string(&r).unwrap();
            let back: CheckReport = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert!(back.is_consistent());
        }
    }
}
