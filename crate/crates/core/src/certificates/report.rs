//! Versioned JSON envelopes and markdown renderings of certificates and
//! tables.

use std::fmt::Write as _;

use serde::Serialize;

use super::detect::Certificate;
use super::tables::{DhTable, StableQuotient};

pub const SCHEMA_VERSION: u32 = 1;

/// Top-level report: a kind tag, the scenario hash for provenance, an overall
/// status and the payload.
#[derive(Clone, Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: u32,
    pub kind: String,
    pub scenario: String,
    pub scenario_hash: String,
    pub ok: bool,
    pub body: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(kind: &str, scenario: &str, scenario_hash: &str, ok: bool, body: T) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            kind: kind.to_string(),
            scenario: scenario.to_string(),
            scenario_hash: scenario_hash.to_string(),
            ok,
            body,
        }
    }

    /// Pretty JSON with a trailing newline; field order is fixed by the
    /// struct definitions.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub trait Markdown {
    fn to_markdown(&self) -> String;
}

fn code(s: &str) -> String {
    format!("`{}`", s.replace('`', "'"))
}

fn indices(i: &[u32]) -> String {
    let parts: Vec<String> = i.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

impl Markdown for Certificate {
    fn to_markdown(&self) -> String {
        let mut s = format!("### Certificate for {} in {}\n\n", code(&self.element), self.scenario);
        let _ = writeln!(s, "- degree: {}", self.degree);
        let _ = writeln!(s, "- I = {}", indices(&self.indices));
        let _ = writeln!(
            s,
            "- Q_I(α) = {} (degree {})",
            self.value.as_deref().map(code).unwrap_or_else(|| "not computed".into()),
            self.value_degree
        );
        let _ = writeln!(s, "- verdict: **{}**", self.verdict.as_str());
        let _ = writeln!(s, "- reason: {}", self.reason);
        if !self.trail.is_empty() {
            s.push_str("\n| step | degree | value |\n|---|---|---|\n");
            for t in &self.trail {
                let _ = writeln!(s, "| {} | {} | {} |", t.op, t.degree, code(&t.value));
            }
        }
        if !self.assumptions.is_empty() {
            s.push_str("\nAssumptions:\n");
            for a in &self.assumptions {
                let _ = writeln!(s, "- {a}");
            }
        }
        s
    }
}

impl Markdown for DhTable {
    fn to_markdown(&self) -> String {
        let rel = if self.equality { "≅" } else { "⊃" };
        let mut s = format!("## DH table for {} ({})\n\n", self.group, self.scenario);
        let certified: Vec<String> = self.certified().map(|r| code(&r.label)).collect();
        let _ = writeln!(s, "DH^*(X)/p {rel} Z/p{{{}}}\n", certified.join(", "));
        s.push_str("| class | degree | I | Q_I(α) leading term | verdict |\n|---|---|---|---|---|\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} |",
                code(&r.label),
                r.degree,
                r.witness.as_deref().map(indices).unwrap_or_else(|| "-".into()),
                r.certificate
                    .leading_monomial
                    .as_deref()
                    .filter(|_| r.witness.is_some())
                    .map(code)
                    .unwrap_or_else(|| "-".into()),
                r.certificate.verdict.as_str()
            );
        }
        if !self.excluded.is_empty() {
            s.push_str("\nExcluded:\n");
            for x in &self.excluded {
                let _ = writeln!(s, "- {}: {}", code(&x.label), x.reason);
            }
        }
        if !self.assumptions.is_empty() {
            s.push_str("\nAssumptions:\n");
            for a in &self.assumptions {
                let _ = writeln!(s, "- {a}");
            }
        }
        s
    }
}

impl Markdown for StableQuotient {
    fn to_markdown(&self) -> String {
        let mut s = format!("## Stable quotient of {}\n\n", self.scenario);
        let n1: Vec<String> = self.declared_n1.iter().map(|e| code(e)).collect();
        let _ = writeln!(s, "Modulo ({}), total dimension {}.\n", n1.join(", "), self.total_dimension());
        s.push_str("| degree | basis |\n|---|---|\n");
        for d in &self.degrees {
            let b: Vec<String> = d.basis.iter().map(|e| code(e)).collect();
            let _ = writeln!(s, "| {} | {} |", d.degree, b.join(", "));
        }
        s
    }
}
