//! Machine-readable reports shared by all subcommands.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1";

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Paper,
    Derived,
    Trivial,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub provenance: Provenance,
    pub computed: Value,
    pub pass: bool,
    /// Informational checks are reported but never change the exit status.
    pub informational: bool,
}

impl Check {
    /// Passes when `computed` serializes to the same JSON as `expected`.
    pub fn equal(
        name: impl Into<String>,
        provenance: Provenance,
        expected: impl Serialize,
        computed: impl Serialize,
    ) -> Self {
        let expected = json!(expected);
        let computed = json!(computed);
        let pass = expected == computed;
        Check {
            name: name.into(),
            expected,
            provenance,
            computed,
            pass,
            informational: false,
        }
    }

    /// A check whose expectation is a relation, described by `expected`.
    pub fn relation(
        name: impl Into<String>,
        provenance: Provenance,
        expected: impl Into<String>,
        computed: impl Serialize,
        pass: bool,
    ) -> Self {
        Check {
            name: name.into(),
            expected: Value::String(expected.into()),
            provenance,
            computed: json!(computed),
            pass,
            informational: false,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub informational_mismatches: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub checks: Vec<Check>,
    pub results: Value,
    pub notes: Vec<String>,
    pub summary: Summary,
    pub status: &'static str,
    pub metadata: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Value>,
}

impl Report {
    pub fn new(command: &'static str, config: Value) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            command,
            config,
            checks: Vec::new(),
            results: json!({}),
            notes: Vec::new(),
            summary: Summary::default(),
            status: "pass",
            metadata: json!({ "charp_version": charp_version() }),
            timings: None,
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn set_result(&mut self, key: &str, v: impl Serialize) {
        self.results[key] = json!(v);
    }

    pub fn set_metadata(&mut self, key: &str, v: impl Serialize) {
        self.metadata[key] = json!(v);
    }

    /// Exit status of the report: all binding checks pass.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.informational || c.pass)
    }

    /// Fills in the summary and status; call once all checks are in.
    pub fn finish(&mut self, timer: Option<&Timer>) {
        let binding = self.checks.iter().filter(|c| !c.informational);
        self.summary = Summary {
            checks: binding.clone().count(),
            passed: binding.clone().filter(|c| c.pass).count(),
            failed: binding.filter(|c| !c.pass).count(),
            informational_mismatches: self
                .checks
                .iter()
                .filter(|c| c.informational && !c.pass)
                .count(),
        };
        self.status = if self.passed() { "pass" } else { "fail" };
        self.timings = timer.map(Timer::to_json);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write_text(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{} ({})", self.command, self.status)?;
        for c in &self.checks {
            let tag = match (c.pass, c.informational) {
                (true, _) => "PASS",
                (false, false) => "FAIL",
                (false, true) => "INFO",
            };
            writeln!(
                out,
                "  {tag} {}: computed {} expected {} [{}]",
                c.name,
                c.computed,
                c.expected,
                json!(c.provenance).as_str().unwrap_or_default()
            )?;
        }
        for n in &self.notes {
            writeln!(out, "  note: {n}")?;
        }
        writeln!(
            out,
            "  {} of {} checks passed, {} informational mismatches",
            self.summary.passed, self.summary.checks, self.summary.informational_mismatches
        )
    }
}

fn charp_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Wall-clock timings per labelled phase, kept out of the deterministic part of a report.
pub struct Timer {
    phases: Vec<(String, f64)>,
}

impl Timer {
    pub fn new() -> Self {
        Timer { phases: Vec::new() }
    }

    pub fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let v = f();
        self.phases
            .push((label.to_string(), start.elapsed().as_secs_f64() * 1e3));
        v
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.phases
                .iter()
                .map(|(l, ms)| json!({ "phase": l, "ms": ms }))
                .collect(),
        )
    }
}
