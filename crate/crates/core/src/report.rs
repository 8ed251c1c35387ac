//! Pass/fail reports shared by the verifiers and the CLI.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde_json::{json, Map, Value};

use crate::chain::{homology, ChainComplex, Homology};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub check: String,
    pub n: Option<usize>,
    pub instances: usize,
    pub failures: Vec<String>,
    pub seed: Option<u64>,
    pub details: Map<String, Value>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Report {
        Report {
            check: check.into(),
            n: None,
            instances: 0,
            failures: Vec::new(),
            seed: None,
            details: Map::new(),
        }
    }

    pub fn with_n(mut self, n: usize) -> Report {
        self.n = Some(n);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Report {
        self.seed = Some(seed);
        self
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    /// Records one instance and its failures, labeled.
    pub fn record(&mut self, label: &str, failures: Vec<String>) {
        self.instances += 1;
        self.failures.extend(failures.into_iter().map(|f| format!("{label}: {f}")));
    }

    pub fn detail(&mut self, key: &str, value: Value) {
        self.details.insert(key.to_string(), value);
    }

    /// Folds another report's instances and failures into this one.
    pub fn absorb(&mut self, other: Report) {
        self.instances += other.instances;
        let tag = other.check;
        self.failures.extend(other.failures.into_iter().map(|f| format!("{tag}: {f}")));
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("check".into(), json!(self.check));
        m.insert("n".into(), json!(self.n));
        m.insert("instances".into(), json!(self.instances));
        m.insert("failures".into(), json!(self.failures));
        m.insert("seed".into(), json!(self.seed));
        for (k, v) in &self.details {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }

    /// One summary line, `PASS check (instances)` or `FAIL ...`.
    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let n = self.n.map(|n| format!(" n={n}")).unwrap_or_default();
        format!(
            "{status} {}{n}: {} instance(s), {} failure(s)",
            self.check,
            self.instances,
            self.failures.len()
        )
    }
}

/// `H_k` for `k` in the window, including zero groups.
pub fn homology_in(c: &ChainComplex, window: RangeInclusive<i64>) -> Result<BTreeMap<i64, Homology>> {
    window.map(|k| Ok((k, homology(c, k)?))).collect()
}

/// Nonzero groups of a table, as JSON keyed by degree.
pub fn homology_json(table: &BTreeMap<i64, Homology>) -> Value {
    let mut m = Map::new();
    for (k, h) in table.iter().filter(|(_, h)| !h.is_zero()) {
        m.insert(k.to_string(), h.to_json());
    }
    Value::Object(m)
}

/// The nonzero entries of a table, for failure messages.
pub fn describe(table: &BTreeMap<i64, Homology>) -> String {
    let parts: Vec<String> = table
        .iter()
        .filter(|(_, h)| !h.is_zero())
        .map(|(k, h)| format!("H_{k} = {h}"))
        .collect();
    if parts.is_empty() {
        "acyclic".into()
    } else {
        parts.join(", ")
    }
}
