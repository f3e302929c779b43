use std::fmt::Write as _;

use mvglue_core::report::Check;
use serde::Serialize;
use serde_json::Value;

/// Where the scene came from and a digest of its bytes.
#[derive(Clone, Debug, Serialize)]
pub struct SceneInfo {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source: String,
    pub bundled: bool,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub scene: SceneInfo,
    pub degree: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str, scene: SceneInfo, degree: i64) -> Self {
        Report {
            command: command.into(),
            scene,
            degree,
            seed: None,
            samples: None,
            passed: true,
            checks: Vec::new(),
            result: Value::Null,
            elapsed_ms: None,
        }
    }

    /// Stores checks sorted by name and updates the overall verdict.
    pub fn set_checks(&mut self, mut checks: Vec<Check>) {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.passed = checks.iter().all(|c| c.passed);
        self.checks = checks;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let scene = self.scene.name.as_deref().unwrap_or(&self.scene.source);
        let _ =
            write!(out, "{} scene={} sha256={} degree={}", self.command, scene, &self.scene.sha256[..12], self.degree);
        if let Some(s) = self.seed {
            let _ = write!(out, " seed={s}");
        }
        if let Some(n) = self.samples {
            let _ = write!(out, " samples={n}");
        }
        out.push('\n');
        if let Value::Object(map) = &self.result {
            for (k, v) in map {
                let v = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(out, "  {k}: {v}");
            }
        }
        for c in &self.checks {
            let _ = write!(out, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            if let Some(s) = c.sign {
                let _ = write!(out, " [sign {s:+}]");
            }
            if let Some(d) = &c.detail {
                let _ = write!(out, ": {d}");
            }
            out.push('\n');
        }
        if !self.checks.is_empty() {
            let ok = self.checks.iter().filter(|c| c.passed).count();
            let _ = writeln!(out, "{ok}/{} checks passed", self.checks.len());
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "elapsed: {ms:.1} ms");
        }
        out
    }
}
