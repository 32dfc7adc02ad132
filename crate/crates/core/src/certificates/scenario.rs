use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fp_algebra::{AlgebraMorphism, Element, GradedPresentation};
use crate::milnor::{QAction, QValidation};

/// A class proposed for `DH^*`, with a human-readable label.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub label: String,
    pub element: Element,
    /// Term expected to appear in the witnessing value, if any.
    pub predicted_term: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Excluded {
    pub label: String,
    pub reason: String,
}

/// Restriction to a subgroup scenario, as a ring map between presentations.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub target: String,
    pub morphism: AlgebraMorphism,
    pub target_action: QAction,
}

/// A presented cohomology ring with its Milnor action and the data the
/// detection rule consumes.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub group: String,
    pub action: QAction,
    /// Chern classes, hence `Ñ^1` seeds.
    pub chern_flags: Vec<Element>,
    /// Generators of `N^1` in the stable quotient, when known.
    pub declared_n1: Option<Vec<Element>>,
    pub candidates: Vec<Candidate>,
    pub excluded: Vec<Excluded>,
    /// Statements taken as data rather than computed.
    pub assumptions: Vec<String>,
    /// Whether the candidate rows are known to span `DH^*` exactly.
    pub dh_equality: bool,
    pub restrictions: Vec<Restriction>,
    pub metadata: BTreeMap<String, String>,
}

impl Scenario {
    /// A scenario with no flags, candidates or metadata yet.
    pub fn new(name: impl Into<String>, group: impl Into<String>, action: QAction) -> Self {
        let pres = action.presentation();
        let mut metadata = BTreeMap::new();
        metadata.insert("prime".to_string(), pres.prime().to_string());
        metadata.insert("cap".to_string(), pres.degree_cap().to_string());
        Scenario {
            name: name.into(),
            group: group.into(),
            action,
            chern_flags: Vec::new(),
            declared_n1: None,
            candidates: Vec::new(),
            excluded: Vec::new(),
            assumptions: Vec::new(),
            dh_equality: false,
            restrictions: Vec::new(),
            metadata,
        }
    }

    pub fn presentation(&self) -> &GradedPresentation {
        self.action.presentation()
    }

    pub fn cap(&self) -> u32 {
        self.presentation().degree_cap()
    }

    pub fn parse(&self, text: &str) -> Result<Element> {
        let hook = |i: u32, e: &Element| self.action.apply(i, e);
        self.presentation().parse_element_with(text, Some(&hook))
    }

    pub fn chern(mut self, exprs: &[&str]) -> Result<Self> {
        for e in exprs {
            let el = self.parse(e)?;
            self.chern_flags.push(el);
        }
        Ok(self)
    }

    pub fn candidate(mut self, label: impl Into<String>, expr: &str) -> Result<Self> {
        let element = self.parse(expr)?;
        self.candidates.push(Candidate {
            label: label.into(),
            element,
            predicted_term: None,
        });
        Ok(self)
    }

    pub fn exclude(mut self, label: impl Into<String>, reason: impl Into<String>) -> Self {
        self.excluded.push(Excluded {
            label: label.into(),
            reason: reason.into(),
        });
        self
    }

    pub fn assume(mut self, line: impl Into<String>) -> Self {
        self.assumptions.push(line.into());
        self
    }

    pub fn meta(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn n1(mut self, exprs: &[&str]) -> Result<Self> {
        let mut out = Vec::new();
        for e in exprs {
            out.push(self.parse(e)?);
        }
        self.declared_n1 = Some(out);
        Ok(self)
    }

    /// Checks the Q-axioms and that every restriction commutes with the
    /// operations on generators.
    pub fn validate(&self) -> QValidation {
        let mut v = self.action.validate();
        if !v.valid {
            return v;
        }
        for r in &self.restrictions {
            let src = self.presentation();
            for g in 0..src.ngens() {
                for i in 0..=self.action.max_index().min(r.target_action.max_index()) {
                    if src.generators()[g].degree + src.prime().q_degree(i)
                        > src.degree_cap().min(r.target_action.presentation().degree_cap())
                    {
                        v.skipped += 1;
                        continue;
                    }
                    v.checks += 1;
                    let ok = (|| -> Result<bool> {
                        let x = src.generator_element(g);
                        let lhs = r.morphism.apply(&self.action.apply(i, &x)?)?;
                        let rhs = r.target_action.apply(i, &r.morphism.apply(&x)?)?;
                        lhs.equals(&rhs)
                    })();
                    if !matches!(ok, Ok(true)) {
                        v.valid = false;
                        v.counterexample = Some(format!(
                            "restriction to {} does not commute with Q{i} on {}",
                            r.target,
                            src.generator_name(g)
                        ));
                        return v;
                    }
                }
            }
        }
        v
    }

    /// Text from which [`Self::content_hash`] is computed.
    pub fn canonical_text(&self) -> String {
        let mut s = format!("scenario {}\ngroup {}\n", self.name, self.group);
        s.push_str(&self.presentation().canonical_text());
        let _ = writeln!(s, "max_index {}", self.action.max_index());
        s.push_str(&self.action.canonical_text());
        for c in &self.chern_flags {
            let _ = writeln!(s, "chern {c}");
        }
        if let Some(n1) = &self.declared_n1 {
            for e in n1 {
                let _ = writeln!(s, "n1 {e}");
            }
        }
        for c in &self.candidates {
            let _ = writeln!(s, "candidate {} = {}", c.label, c.element);
        }
        for x in &self.excluded {
            let _ = writeln!(s, "exclude {} : {}", x.label, x.reason);
        }
        for a in &self.assumptions {
            let _ = writeln!(s, "assume {a}");
        }
        for r in &self.restrictions {
            let _ = writeln!(s, "restrict {}", r.target);
        }
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "meta {k} = {v}");
        }
        s
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn candidate_by_label(&self, label: &str) -> Result<&Candidate> {
        self.candidates
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }
}
