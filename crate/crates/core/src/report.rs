//! Check records and the report document emitted by the CLI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One pass/fail verification with its numeric residual, if it has one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    /// A residual compared against a tolerance: passes iff `residual < tolerance`.
    pub fn residual(
        name: impl Into<String>,
        residual: f64,
        tolerance: f64,
        detail: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            passed: residual < tolerance,
            residual: Some(residual),
            tolerance: Some(tolerance),
            detail: detail.into(),
        }
    }

    /// An exact (symbolic or combinatorial) check.
    pub fn exact(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            residual: None,
            tolerance: None,
            detail: detail.into(),
        }
    }
}

/// What a report describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    Scenario,
    Sweep,
    Configuration,
    KsSearch,
    GhzCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub version: String,
    pub kind: ReportKind,
    pub id: String,
    pub inputs: serde_json::Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub derivation: Vec<String>,
    /// The module-specific result, serialized as is.
    pub body: serde_json::Value,
}

impl ReportDocument {
    pub fn new(
        kind: ReportKind,
        id: impl Into<String>,
        inputs: serde_json::Value,
        checks: Vec<Check>,
        derivation: Vec<String>,
        body: serde_json::Value,
    ) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        ReportDocument {
            version: crate::VERSION.to_string(),
            kind,
            id: id.into(),
            inputs,
            checks,
            passed,
            derivation,
            body,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("report: {e}")))
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let status = if self.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "# {} `{}`: {status}\n\n",
            kind_title(self.kind),
            self.id
        ));
        out.push_str(&format!("contextlab {}\n\n", self.version));
        if !self.inputs.is_null() {
            out.push_str("## Inputs\n\n```json\n");
            out.push_str(&serde_json::to_string_pretty(&self.inputs).expect("json value"));
            out.push_str("\n```\n\n");
        }
        out.push_str("## Checks\n\n| check | result | residual | tolerance | detail |\n|---|---|---|---|---|\n");
        for c in &self.checks {
            let fmt = |v: Option<f64>| {
                v.map(|x| format!("{x:.3e}"))
                    .unwrap_or_else(|| "exact".into())
            };
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                fmt(c.residual),
                c.tolerance
                    .map(|t| format!("{t:.0e}"))
                    .unwrap_or_else(|| "-".into()),
                c.detail.replace('|', "\\|")
            ));
        }
        if !self.derivation.is_empty() {
            out.push_str("\n## Derivation\n\n");
            for line in &self.derivation {
                out.push_str(&format!("- {line}\n"));
            }
        }
        out
    }
}

fn kind_title(kind: ReportKind) -> &'static str {
    match kind {
        ReportKind::Scenario => "Scenario",
        ReportKind::Sweep => "Sweep",
        ReportKind::Configuration => "Configuration",
        ReportKind::KsSearch => "KS search",
        ReportKind::GhzCheck => "GHZ check",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_verdict_is_conjunction() {
        let ok = Check::residual("a", 1e-12, 1e-10, "");
        let bad = Check::exact("b", false, "nope");
        let doc = ReportDocument::new(
            ReportKind::Scenario,
            "x",
            serde_json::Value::Null,
            vec![ok.clone()],
            vec![],
            serde_json::Value::Null,
        );
        assert!(doc.passed);
        let doc = ReportDocument::new(
            ReportKind::Scenario,
            "x",
            serde_json::Value::Null,
            vec![ok, bad],
            vec![],
            serde_json::Value::Null,
        );
        assert!(!doc.passed);
        assert!(doc.to_markdown().contains("FAIL"));
    }
}
