//! Check outcomes and the run report.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    PreconditionFailed,
    OutOfWindow,
}

/// Result of one check before it is placed in a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub witness: Option<String>,
    /// Extra facts echoed into the entry's params (degrees checked, values found).
    pub info: Value,
}

impl Outcome {
    pub fn pass(info: Value) -> Self {
        Outcome { status: Status::Pass, witness: None, info }
    }

    pub fn fail(witness: impl Into<String>, info: Value) -> Self {
        Outcome { status: Status::Fail, witness: Some(witness.into()), info }
    }

    pub fn precondition(witness: impl Into<String>) -> Self {
        Outcome { status: Status::PreconditionFailed, witness: Some(witness.into()), info: Value::Null }
    }

    pub fn out_of_window(witness: impl Into<String>) -> Self {
        Outcome { status: Status::OutOfWindow, witness: Some(witness.into()), info: Value::Null }
    }

    /// Pass when `ok`, otherwise fail with the witness.
    pub fn check(ok: bool, witness: impl Into<String>, info: Value) -> Self {
        if ok {
            Outcome::pass(info)
        } else {
            Outcome::fail(witness, info)
        }
    }

    /// Map an engine error onto a status.
    pub fn from_error(e: &crate::Error) -> Self {
        match e {
            crate::Error::Window(_) | crate::Error::Precision(_) => Outcome::out_of_window(e.to_string()),
            _ => Outcome::fail(format!("engine error: {}", e), Value::Null),
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub suite: String,
    pub check: String,
    pub anchor: String,
    pub params: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub config: Value,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(config: Value, mut entries: Vec<Entry>) -> Self {
        entries.sort_by(|a, b| (&a.suite, &a.check).cmp(&(&b.suite, &b.check)));
        Report { tool_version: env!("CARGO_PKG_VERSION").to_string(), config, entries }
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status == Status::Pass)
    }

    pub fn count(&self, s: Status) -> usize {
        self.entries.iter().filter(|e| e.status == s).count()
    }

    /// The report with runtimes removed: the part that must be reproducible.
    pub fn body_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(es) = v["entries"].as_array_mut() {
            for e in es {
                if let Some(o) = e.as_object_mut() {
                    o.remove("runtime_ms");
                }
            }
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn body_sha256(&self) -> String {
        hex::encode(Sha256::digest(self.body_json().as_bytes()))
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["body_sha256"] = Value::String(self.body_sha256());
        let total: u64 = self.entries.iter().map(|e| e.runtime_ms).sum();
        v["total_runtime_ms"] = Value::from(total);
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# dyq report (v{})\n\n", self.tool_version));
        s.push_str(&format!(
            "{} entries: {} pass, {} fail, {} precondition-failed, {} out-of-window\n\n",
            self.entries.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::PreconditionFailed),
            self.count(Status::OutOfWindow)
        ));
        s.push_str("| suite | check | status | anchor | witness |\n|---|---|---|---|---|\n");
        for e in &self.entries {
            let st = serde_json::to_value(e.status).unwrap();
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                e.suite,
                e.check,
                st.as_str().unwrap_or(""),
                e.anchor.replace('|', "\\|"),
                e.witness.clone().unwrap_or_default().replace('|', "\\|")
            ));
        }
        s
    }
}

/// A named outcome produced inside a suite, before timing and placement.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub params: Value,
    pub outcome: Outcome,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, params: Value, outcome: Outcome) -> Self {
        Check { name: name.into(), anchor: anchor.into(), params, outcome }
    }

    pub fn into_entry(self, suite: &str, runtime_ms: u64) -> Entry {
        let mut params = self.params;
        if let (Some(p), Some(i)) = (params.as_object_mut(), self.outcome.info.as_object()) {
            for (k, v) in i {
                p.insert(k.clone(), v.clone());
            }
        }
        Entry {
            suite: suite.to_string(),
            check: self.name,
            anchor: self.anchor,
            params,
            status: self.outcome.status,
            witness: self.outcome.witness,
            runtime_ms,
        }
    }
}
