use serde::Serialize;

use super::scenario::Scenario;
use crate::error::{Error, Result};
use crate::fp_algebra::linalg::{kernel, SparseEchelon};
use crate::fp_algebra::Element;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NotInStrongConiveau,
    Inconclusive,
    RejectedChern,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NotInStrongConiveau => "not-in-strong-coniveau",
            Verdict::Inconclusive => "inconclusive",
            Verdict::RejectedChern => "rejected-chern",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrailStep {
    pub op: String,
    pub degree: u32,
    pub value: String,
}

/// Outcome of the detection rule on one class and one sequence `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub scenario: String,
    pub scenario_hash: String,
    pub element: String,
    pub degree: u32,
    pub indices: Vec<u32>,
    /// `Q_I(α)` in normal form; absent when it could not be computed.
    pub value: Option<String>,
    pub value_degree: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leading_monomial: Option<String>,
    pub verdict: Verdict,
    pub reason: String,
    pub trail: Vec<TrailStep>,
    pub assumptions: Vec<String>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::NotInStrongConiveau
    }

    /// Recomputes every step of the trail from the recorded element and
    /// checks that the final value is nonzero when certified.
    pub fn replay(&self, s: &Scenario) -> Result<bool> {
        if self.scenario_hash != s.content_hash() {
            return Ok(false);
        }
        let mut cur = s.parse(&self.element)?;
        if self.value.is_none() {
            return Ok(!self.is_certified());
        }
        for (step, &i) in self.trail.iter().zip(self.indices.iter().rev()) {
            cur = s.action.apply(i, &cur)?;
            if cur.to_string() != step.value || step.op != format!("Q{i}") {
                return Ok(false);
            }
        }
        if self.trail.len() != self.indices.len() {
            return Ok(false);
        }
        if Some(cur.to_string()) != self.value {
            return Ok(false);
        }
        Ok(!self.is_certified() || !cur.is_zero()?)
    }
}

/// `Q_0`-kernel in degree `d`, as elements.
fn q0_kernel(s: &Scenario, d: u32) -> Result<Vec<Element>> {
    let pres = s.presentation();
    let basis = pres.graded_basis(d)?;
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let target = d + pres.prime().q_degree(0);
    let mut images = Vec::with_capacity(basis.len());
    for b in &basis {
        let q = s.action.apply(0, b)?;
        images.push(if q.is_zero_raw() {
            Vec::new()
        } else {
            pres.coordinates(&q)?.1
        });
    }
    debug_assert!(target <= pres.degree_cap());
    Ok(kernel(pres.prime(), &images)
        .into_iter()
        .map(|v| {
            v.iter()
                .fold(pres.zero(), |acc, &(k, c)| acc.add(&basis[k].scale(c as i64)).unwrap())
        })
        .collect())
}

/// Whether `α` lies in the span of `c·k` with `c` a Chern flag and `k` a
/// mod-`p` reduction of an integral class (`Q_0 k = 0`) in the complementary
/// degree. This is the part of the Chern ideal that meets integral classes.
pub fn in_integral_chern_ideal(s: &Scenario, alpha: &Element) -> Result<bool> {
    let pres = s.presentation();
    let Some(d) = alpha.require_homogeneous()? else {
        return Ok(true);
    };
    let mut span = SparseEchelon::new(pres.prime());
    for c in &s.chern_flags {
        let Some(dc) = c.degree() else { continue };
        if dc > d {
            continue;
        }
        let rest = d - dc;
        let ks = if rest == 0 {
            vec![pres.one()]
        } else if rest + pres.prime().q_degree(0) > pres.degree_cap() {
            // Q_0 cannot be evaluated there; fall back to all classes.
            pres.graded_basis(rest)?
        } else {
            q0_kernel(s, rest)?
        };
        for k in ks {
            let prod = c.mul(&k)?;
            if !prod.is_zero_raw() {
                span.insert(pres.coordinates(&prod)?.1);
            }
        }
    }
    let nf = alpha.normal_form()?;
    if nf.is_zero_raw() {
        return Ok(true);
    }
    Ok(span.contains(pres.coordinates(&nf)?.1))
}

/// Plain membership in the ideal generated by the Chern flags: such classes
/// lie in `Ñ^1` by reciprocity.
pub fn reciprocity_flags(s: &Scenario, e: &Element) -> Result<bool> {
    if s.chern_flags.is_empty() {
        return Err(Error::MissingDeclaration(format!("{} (Chern flags)", s.name)));
    }
    let pres = s.presentation();
    let Some(d) = e.require_homogeneous()? else {
        return Ok(true);
    };
    let nf = e.normal_form()?;
    if nf.is_zero_raw() {
        return Ok(true);
    }
    let mut span = SparseEchelon::new(pres.prime());
    for c in &s.chern_flags {
        let Some(dc) = c.degree() else { continue };
        if dc > d {
            continue;
        }
        for b in pres.graded_basis(d - dc)? {
            let prod = c.mul(&b)?;
            if !prod.is_zero_raw() {
                span.insert(pres.coordinates(&prod)?.1);
            }
        }
    }
    Ok(span.contains(pres.coordinates(&nf)?.1))
}

/// Applies the detection rule to `α` and the sequence `I`
/// (`Q_{i_1}...Q_{i_k}`, rightmost first).
pub fn detect(s: &Scenario, alpha: &Element, indices: &[u32]) -> Result<Certificate> {
    s.presentation().check_same(alpha.presentation())?;
    let alpha = alpha.normal_form()?;
    let degree = alpha.require_homogeneous()?.unwrap_or(0);
    let p = s.presentation().prime();
    let value_degree = degree + indices.iter().map(|&i| p.q_degree(i)).sum::<u32>();
    let mut cert = Certificate {
        scenario: s.name.clone(),
        scenario_hash: s.content_hash(),
        element: alpha.to_string(),
        degree,
        indices: indices.to_vec(),
        value: None,
        value_degree,
        leading_monomial: None,
        verdict: Verdict::Inconclusive,
        reason: String::new(),
        trail: Vec::new(),
        assumptions: s.assumptions.clone(),
    };
    if let Some(&bad) = indices.iter().find(|&&i| i > s.action.max_index()) {
        cert.reason = format!("Q{bad} is beyond the tabulated range (max {})", s.action.max_index());
        return Ok(cert);
    }
    if value_degree > s.cap() {
        cert.reason = format!("Q_I(α) has degree {value_degree}, above the cap {}", s.cap());
        return Ok(cert);
    }
    if alpha.is_zero_raw() {
        cert.reason = "α is zero".into();
        return Ok(cert);
    }
    let seq = match s.action.apply_sequence(indices, &alpha) {
        Ok(seq) => seq,
        Err(e @ (Error::DegreeCap { .. } | Error::QUntabulated { .. })) => {
            cert.reason = e.to_string();
            return Ok(cert);
        }
        Err(e) => return Err(e),
    };
    cert.trail = seq
        .steps
        .iter()
        .map(|(i, v)| TrailStep {
            op: format!("Q{i}"),
            degree: v.degree().unwrap_or(0),
            value: v.to_string(),
        })
        .collect();
    let value = seq.value().clone();
    cert.value = Some(value.to_string());
    cert.leading_monomial = value
        .leading_monomial()
        .map(|m| s.presentation().format_monomial(m));

    if in_integral_chern_ideal(s, &alpha)? {
        cert.verdict = Verdict::RejectedChern;
        cert.reason = "α lies in the Chern ideal, hence in strong coniveau".into();
        return Ok(cert);
    }
    if degree + p.q_degree(0) <= s.cap() && !s.action.apply(0, &alpha)?.is_zero()? {
        cert.reason = "Q0(α) is nonzero, so α is not the reduction of an integral class".into();
        return Ok(cert);
    }
    if indices.is_empty() {
        cert.reason = "the sequence I is empty".into();
        return Ok(cert);
    }
    if value.is_zero()? {
        cert.reason = "Q_I(α) vanishes".into();
        return Ok(cert);
    }
    cert.verdict = Verdict::NotInStrongConiveau;
    cert.reason = "Q_I(α) is nonzero while Q_I vanishes on the image of the transfer".into();
    Ok(cert)
}

/// Number of operations the detection rule needs for a class of degree `d`:
/// one in degrees 3 and 4, and `d - 3` above.
pub fn witness_length(d: u32) -> usize {
    d.saturating_sub(3).max(1) as usize
}

/// Strictly increasing index tuples of the given length drawn from
/// `1..=max`, in lexicographic order, whose total degree shift keeps
/// `degree + shift ≤ cap`.
pub fn witness_sequences(s: &Scenario, degree: u32, length: usize) -> Vec<Vec<u32>> {
    let p = s.presentation().prime();
    let max = s.action.max_index();
    let cap = s.cap();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        start: u32,
        max: u32,
        left: usize,
        budget: i64,
        p: crate::fp_algebra::Prime,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=max {
            let cost = p.q_degree(i) as i64;
            if cost > budget {
                break;
            }
            cur.push(i);
            go(i + 1, max, left - 1, budget - cost, p, cur, out);
            cur.pop();
        }
    }
    go(1, max, length, cap as i64 - degree as i64, p, &mut cur, &mut out);
    out
}

/// Tries every admissible sequence in order and returns the first
/// certificate, or the most informative failure.
pub fn find_witness(s: &Scenario, alpha: &Element) -> Result<Certificate> {
    let degree = alpha.require_homogeneous()?.unwrap_or(0);
    let seqs = witness_sequences(s, degree, witness_length(degree));
    let mut last = None;
    for seq in &seqs {
        let c = detect(s, alpha, seq)?;
        if c.verdict != Verdict::Inconclusive {
            return Ok(c);
        }
        last = Some(c);
    }
    match last {
        Some(c) => Ok(c),
        None => {
            let mut c = detect(s, alpha, &[])?;
            if c.verdict != Verdict::RejectedChern {
                c.verdict = Verdict::Inconclusive;
                c.reason = format!(
                    "no strictly increasing sequence of {} operations fits under the cap {}",
                    witness_length(degree),
                    s.cap()
                );
            }
            Ok(c)
        }
    }
}
