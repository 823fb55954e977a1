//! Report assembly and emission. The JSON format is stable-key-ordered and
//! carries no timing, so identical (scene, opts) runs produce byte-identical
//! bytes; the text format is the human summary and includes per-task wall
//! time.

use std::time::Duration;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use softlin::{SoftReal, SoftVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Violation,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptsEcho {
    pub tol: f64,
    pub samples: u32,
    pub seed: u64,
    pub window_n: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaskReport {
    pub id: String,
    pub kind: String,
    pub verdict: Verdict,
    pub values: IndexMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip, default)]
    pub elapsed: Duration,
}

impl TaskReport {
    pub fn new(id: String, kind: &str) -> Self {
        TaskReport {
            id,
            kind: kind.to_string(),
            verdict: Verdict::Pass,
            values: IndexMap::new(),
            witness: None,
            detail: None,
            elapsed: Duration::ZERO,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub opts: OptsEcho,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.tasks.iter().all(|t| t.verdict == Verdict::Pass)
    }

    pub fn any_error(&self) -> bool {
        self.tasks.iter().any(|t| t.verdict == Verdict::Error)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut out =
                serde_json::to_string_pretty(report).expect("report serialization");
            out.push('\n');
            out
        }
        Format::Text => emit_text(report),
    }
}

fn emit_text(report: &Report) -> String {
    let mut out = String::new();
    let n = report.tasks.len();
    out.push_str(&format!(
        "softlin {} — {} task{} (seed {}, tol {:e}, samples {}, window N {})\n",
        report.command,
        n,
        if n == 1 { "" } else { "s" },
        report.opts.seed,
        report.opts.tol,
        report.opts.samples,
        report.opts.window_n,
    ));
    let mut passed = 0;
    let mut violations = 0;
    let mut errors = 0;
    for t in &report.tasks {
        let tag = match t.verdict {
            Verdict::Pass => {
                passed += 1;
                "pass"
            }
            Verdict::Violation => {
                violations += 1;
                "VIOLATION"
            }
            Verdict::Error => {
                errors += 1;
                "ERROR"
            }
        };
        out.push_str(&format!(
            "[{tag}] {} {} ({:.1} ms)",
            t.id,
            t.kind,
            t.elapsed.as_secs_f64() * 1e3
        ));
        if let Some(detail) = &t.detail {
            out.push_str(&format!(": {detail}"));
        }
        for (k, v) in &t.values {
            out.push_str(&format!("\n    {k} = {v}"));
        }
        if let Some(w) = &t.witness {
            out.push_str(&format!("\n    witness = {w}"));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "{passed} passed, {violations} violation{}, {errors} error{}\n",
        if violations == 1 { "" } else { "s" },
        if errors == 1 { "" } else { "s" },
    ));
    out
}

/// `{label: value}` in parameter order.
pub fn soft_real_value(r: &SoftReal) -> Value {
    let mut map = serde_json::Map::new();
    for (label, &v) in r.params().labels().zip(r.values()) {
        map.insert(label.to_string(), Value::from(v));
    }
    Value::Object(map)
}

/// `{label: [coords]}` in parameter order.
pub fn soft_vector_value(x: &SoftVector) -> Value {
    let mut map = serde_json::Map::new();
    for (i, label) in x.params().labels().enumerate() {
        map.insert(
            label.to_string(),
            Value::from(x.at(i).to_vec()),
        );
    }
    Value::Object(map)
}
