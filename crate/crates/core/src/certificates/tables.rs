use serde::Serialize;

use super::detect::{find_witness, Certificate, Verdict};
use super::scenario::{Excluded, Scenario};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DhRow {
    pub label: String,
    pub element: String,
    pub degree: u32,
    pub witness: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_term: Option<String>,
    /// Whether the predicted term occurs in `Q_I(α)` with nonzero
    /// coefficient.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_present: Option<bool>,
    pub certificate: Certificate,
}

/// Lower bound (or, where known, a basis) for `DH^*`, one row per candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DhTable {
    pub scenario: String,
    pub scenario_hash: String,
    pub group: String,
    pub cap: u32,
    /// `true` when the rows are claimed to span `DH^*`, not just to lie in it.
    pub equality: bool,
    pub rows: Vec<DhRow>,
    pub excluded: Vec<Excluded>,
    pub assumptions: Vec<String>,
}

impl DhTable {
    pub fn certified(&self) -> impl Iterator<Item = &DhRow> {
        self.rows.iter().filter(|r| r.certificate.is_certified())
    }

    pub fn certified_count(&self) -> usize {
        self.certified().count()
    }

    /// Every predicted term present, and every row certified when the table
    /// is an equality.
    pub fn consistent(&self) -> bool {
        let predictions = self.rows.iter().all(|r| r.predicted_present != Some(false));
        let complete = !self.equality || self.certified_count() == self.rows.len();
        predictions && complete
    }
}

pub fn dh_table(s: &Scenario) -> Result<DhTable> {
    let mut rows = Vec::with_capacity(s.candidates.len());
    for c in &s.candidates {
        let cert = find_witness(s, &c.element)?;
        let predicted_present = match (&c.predicted_term, &cert.value, cert.verdict) {
            (Some(term), Some(_), Verdict::NotInStrongConiveau) => {
                let value = s.action.apply_sequence(&cert.indices, &c.element)?.value().clone();
                let m = s.parse(term)?;
                let lead = m
                    .leading_monomial()
                    .ok_or_else(|| Error::OutOfRange(format!("predicted term {term} is zero")))?;
                Some(value.coefficient(lead) != 0)
            }
            _ => None,
        };
        rows.push(DhRow {
            label: c.label.clone(),
            element: c.element.to_string(),
            degree: cert.degree,
            witness: cert.is_certified().then(|| cert.indices.clone()),
            predicted_term: c.predicted_term.clone(),
            predicted_present,
            certificate: cert,
        });
    }
    Ok(DhTable {
        scenario: s.name.clone(),
        scenario_hash: s.content_hash(),
        group: s.group.clone(),
        cap: s.cap(),
        equality: s.dh_equality,
        rows,
        excluded: s.excluded.clone(),
        assumptions: s.assumptions.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableQuotientDegree {
    pub degree: u32,
    pub basis: Vec<String>,
}

/// `H^*/ideal(N^1)` degree by degree up to the cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableQuotient {
    pub scenario: String,
    pub scenario_hash: String,
    pub declared_n1: Vec<String>,
    pub cap: u32,
    pub degrees: Vec<StableQuotientDegree>,
}

impl StableQuotient {
    pub fn total_dimension(&self) -> usize {
        self.degrees.iter().map(|d| d.basis.len()).sum()
    }

    pub fn basis(&self) -> Vec<String> {
        self.degrees.iter().flat_map(|d| d.basis.iter().cloned()).collect()
    }
}

pub fn stable_quotient(s: &Scenario) -> Result<StableQuotient> {
    let n1 = s
        .declared_n1
        .as_ref()
        .ok_or_else(|| Error::MissingDeclaration(s.name.clone()))?;
    let pres = s.presentation();
    let quotient = pres.quotient(n1, pres.degree_cap())?;
    let mut degrees = Vec::new();
    for d in 0..=pres.degree_cap() {
        let basis: Vec<String> = quotient
            .graded_basis(d)?
            .iter()
            .map(|e| e.to_string())
            .collect();
        if !basis.is_empty() {
            degrees.push(StableQuotientDegree { degree: d, basis });
        }
    }
    Ok(StableQuotient {
        scenario: s.name.clone(),
        scenario_hash: s.content_hash(),
        declared_n1: n1.iter().map(|e| e.to_string()).collect(),
        cap: pres.degree_cap(),
        degrees,
    })
}
