//! `PGL_p`: the summand `SD ⊗ Λ(Q_0, Q_1){u_2}` as a free module over
//! `SD = F_p[x_{2p+2}, x_{2p^2-2p}]` on four labels.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::detect::{Certificate, TrailStep, Verdict};
use crate::error::{Error, Result};
use crate::fp_algebra::{GradedPresentation, Prime};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Label {
    pub name: String,
    pub degree: u32,
}

/// Label-level `Q` action: `q[i][l]` is `Some((target, sign))` or zero.
#[derive(Clone, Debug)]
pub struct QModuleScenario {
    pub name: String,
    pub p: Prime,
    pub base: GradedPresentation,
    pub labels: Vec<Label>,
    q: Vec<Vec<Option<(usize, i64)>>>,
    /// `(label, sign, base generator)`: `sign · label` is that generator.
    pub identification: (usize, i64, String),
    pub assumptions: Vec<String>,
}

/// Element of the module: coefficient per label (the `SD` part is not
/// needed beyond constants for the certificate).
pub type LabelVector = BTreeMap<usize, u32>;

const U2: usize = 0;
const Q0U2: usize = 1;
const Q1U2: usize = 2;
const Q0Q1U2: usize = 3;

impl QModuleScenario {
    pub fn pgl(p: u32) -> Result<Self> {
        let prime = Prime::new(p)?;
        if prime.is_two() {
            return Err(Error::Unsupported("pgl needs an odd prime".into()));
        }
        let x_low = 2 * p + 2;
        let x_high = 2 * p * p - 2 * p;
        let base = GradedPresentation::builder(prime, x_high.max(x_low) * 2)
            .generator(format!("x{x_low}"), x_low)
            .generator(format!("x{x_high}"), x_high)
            .build()?;
        let q1 = prime.q_degree(1);
        let labels = vec![
            Label { name: "u2".into(), degree: 2 },
            Label { name: "Q0u2".into(), degree: 3 },
            Label { name: "Q1u2".into(), degree: 2 + q1 },
            Label { name: "Q0Q1u2".into(), degree: 3 + q1 },
        ];
        let mut q = vec![vec![None; 4]; 2];
        q[0][U2] = Some((Q0U2, 1));
        q[0][Q1U2] = Some((Q0Q1U2, 1));
        q[1][U2] = Some((Q1U2, 1));
        q[1][Q0U2] = Some((Q0Q1U2, -1));
        Ok(QModuleScenario {
            name: format!("pgl(p={p})"),
            p: prime,
            base,
            labels,
            q,
            identification: (Q0Q1U2, -1, format!("x{x_low}")),
            assumptions: vec![
                "Q0u2 lies in N^1 as a torsion class (accepted as data, not computed)".into(),
                format!("x{x_low} = Q1Q0u2 = -Q0Q1u2 is the Chow class of the summand (cited)"),
            ],
        })
    }

    pub fn label(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn unit(&self, label: usize) -> LabelVector {
        BTreeMap::from([(label, 1)])
    }

    /// `Q_i` on a label vector; the base ring is `Q`-trivial.
    pub fn apply(&self, i: u32, v: &LabelVector) -> Result<LabelVector> {
        let row = self
            .q
            .get(i as usize)
            .ok_or(Error::QIndex { index: i, max: self.q.len() as u32 - 1 })?;
        let mut out = LabelVector::new();
        for (&l, &c) in v {
            if let Some((t, sign)) = row[l] {
                let add = self.p.mul(c, self.p.reduce(sign));
                let slot = out.entry(t).or_insert(0);
                *slot = self.p.add(*slot, add);
            }
        }
        out.retain(|_, c| *c != 0);
        Ok(out)
    }

    pub fn format(&self, v: &LabelVector) -> String {
        if v.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (&l, &c)) in v.iter().enumerate() {
            let signed = self.p.signed(c);
            let name = &self.labels[l].name;
            match (k, signed) {
                (0, 1) => s.push_str(name),
                (0, -1) => {
                    let _ = write!(s, "-{name}");
                }
                (0, c) => {
                    let _ = write!(s, "{c}*{name}");
                }
                (_, c) if c < 0 => {
                    let _ = write!(s, " - {}", if c == -1 { name.clone() } else { format!("{}*{name}", -c) });
                }
                (_, c) => {
                    let _ = write!(s, " + {}", if c == 1 { name.clone() } else { format!("{c}*{name}") });
                }
            }
        }
        s
    }

    /// The value rewritten through the identification with the base ring,
    /// when it is a multiple of the identified label.
    pub fn identify(&self, v: &LabelVector) -> Option<String> {
        let (label, sign, name) = &self.identification;
        if v.len() != 1 {
            return None;
        }
        let c = *v.get(label)?;
        let coeff = self.p.mul(c, self.p.reduce(*sign));
        Some(if coeff == 1 { name.clone() } else { format!("{coeff}*{name}") })
    }

    pub fn canonical_text(&self) -> String {
        let mut s = format!("module {}\n", self.name);
        s.push_str(&self.base.canonical_text());
        for l in &self.labels {
            let _ = writeln!(s, "label {} {}", l.name, l.degree);
        }
        for (i, row) in self.q.iter().enumerate() {
            for (l, e) in row.iter().enumerate() {
                if let Some((t, sign)) = e {
                    let _ = writeln!(s, "Q {i} {} = {sign}*{}", self.labels[l].name, self.labels[*t].name);
                }
            }
        }
        s
    }

    pub fn content_hash(&self) -> String {
        Sha256::digest(self.canonical_text().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// `Q_0^2 = Q_1^2 = 0` and `Q_0Q_1 + Q_1Q_0 = 0` on every label.
    pub fn validate(&self) -> bool {
        (0..self.labels.len()).all(|l| {
            let u = self.unit(l);
            let ok = |i, j| -> bool {
                let ij = self.apply(i, &self.apply(j, &u).unwrap()).unwrap();
                let ji = self.apply(j, &self.apply(i, &u).unwrap()).unwrap();
                if i == j {
                    ij.is_empty()
                } else {
                    let mut sum = ij;
                    for (k, c) in ji {
                        let slot = sum.entry(k).or_insert(0);
                        *slot = self.p.add(*slot, c);
                    }
                    sum.retain(|_, c| *c != 0);
                    sum.is_empty()
                }
            };
            ok(0, 0) && ok(1, 1) && ok(0, 1)
        })
    }
}

/// Applies `Q_1` to `Q_0u_2`, landing on `x_{2p+2}`.
pub fn pgl_detect(m: &QModuleScenario) -> Result<Certificate> {
    let alpha = m.unit(Q0U2);
    let value = m.apply(1, &alpha)?;
    let witness = m.identify(&value);
    let nonzero = !value.is_empty();
    let degree = m.labels[Q0U2].degree;
    Ok(Certificate {
        scenario: m.name.clone(),
        scenario_hash: m.content_hash(),
        element: m.format(&alpha),
        degree,
        indices: vec![1],
        value: Some(witness.clone().unwrap_or_else(|| m.format(&value))),
        value_degree: degree + m.p.q_degree(1),
        leading_monomial: witness,
        verdict: if nonzero { Verdict::NotInStrongConiveau } else { Verdict::Inconclusive },
        reason: if nonzero {
            "Q1(Q0u2) is the nonzero class x_{2p+2}".into()
        } else {
            "Q1(Q0u2) vanishes".into()
        },
        trail: vec![TrailStep {
            op: "Q1".into(),
            degree: degree + m.p.q_degree(1),
            value: m.format(&value),
        }],
        assumptions: m.assumptions.clone(),
    })
}
