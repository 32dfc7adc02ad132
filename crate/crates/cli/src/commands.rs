//! One function per subcommand, each returning a serializable body, its
//! markdown rendering and whether every check passed.

use std::fmt::Write as _;

use coniveau::certificates::{
    builtin_scenarios, detect, dh_table, find_witness, pgl_detect, Certificate, DhTable, Markdown,
    QModuleScenario, Scenario, StableQuotient,
};
use coniveau::fp_algebra::hilbert_series;
use coniveau::motivic::{
    decomposition_ranks, dh_quadric_check, n1_membership, quadric_etale_ring, rost_etale_ring,
    unramified_quotient_quadric, N1Verdict, QuadricDhCertificate, QuadricVerdict, RankRecord,
    RostBasis, UnramifiedQuotient,
};
use coniveau::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::scenarios::{Target, UserScenarios};

/// A finished command: what to print and how to exit.
pub struct Outcome {
    pub kind: &'static str,
    pub scenario: String,
    pub scenario_hash: String,
    pub ok: bool,
    pub body: serde_json::Value,
    pub markdown: String,
}

impl Outcome {
    fn new<T: Serialize>(kind: &'static str, scenario: &str, hash: String, ok: bool, body: &T, markdown: String) -> Self {
        Outcome {
            kind,
            scenario: scenario.to_string(),
            scenario_hash: hash,
            ok,
            body: serde_json::to_value(body).expect("bodies serialize"),
            markdown,
        }
    }
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn ring(target: Target, command: &str) -> Result<Scenario> {
    match target {
        Target::Ring(s) => Ok(s),
        Target::Module(m) => Err(Error::Unsupported(format!(
            "{} is a Q-module scenario; `{command}` needs a presented ring (try `verify`)",
            m.name
        ))),
    }
}

#[derive(Serialize)]
struct ListEntry {
    name: String,
    kind: &'static str,
    group: String,
    prime: u32,
    cap: u32,
    candidates: usize,
    scenario_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<String>,
}

#[derive(Serialize)]
struct ListBody {
    families: Vec<FamilyEntry>,
    scenarios: Vec<ListEntry>,
}

#[derive(Serialize)]
struct FamilyEntry {
    family: &'static str,
    aliases: Vec<&'static str>,
}

pub fn list(user: &UserScenarios) -> Result<Outcome> {
    let reg = builtin_scenarios()?;
    let mut scenarios: Vec<ListEntry> = reg
        .scenarios()
        .map(|s| ListEntry {
            name: s.name.clone(),
            kind: "ring",
            group: s.group.clone(),
            prime: s.presentation().prime().value(),
            cap: s.cap(),
            candidates: s.candidates.len(),
            scenario_hash: s.content_hash(),
            source: None,
        })
        .chain(reg.modules().map(|m| ListEntry {
            name: m.name.clone(),
            kind: "module",
            group: format!("PGL_{}", m.p.value()),
            prime: m.p.value(),
            cap: m.base.degree_cap(),
            candidates: 1,
            scenario_hash: m.content_hash(),
            source: None,
        }))
        .collect();
    for (path, s) in &user.scenarios {
        scenarios.push(ListEntry {
            name: s.name.clone(),
            kind: "ring",
            group: s.group.clone(),
            prime: s.presentation().prime().value(),
            cap: s.cap(),
            candidates: s.candidates.len(),
            scenario_hash: s.content_hash(),
            source: Some(path.display().to_string()),
        });
    }
    scenarios.sort_by(|a, b| a.name.cmp(&b.name));
    let families = coniveau::certificates::registry::FAMILIES
        .iter()
        .map(|(f, a)| FamilyEntry { family: f, aliases: a.to_vec() })
        .collect();
    let mut md = String::from("## Scenarios\n\n| name | kind | group | p | cap | candidates |\n|---|---|---|---|---|---|\n");
    for e in &scenarios {
        let _ = writeln!(md, "| {} | {} | {} | {} | {} | {} |", e.name, e.kind, e.group, e.prime, e.cap, e.candidates);
    }
    let body = ListBody { families, scenarios };
    let hash = sha256_hex(&serde_json::to_string(&body).expect("serializes"));
    Ok(Outcome::new("list", "all", hash, true, &body, md))
}

fn verify_module(m: &QModuleScenario, indices: Option<&[u32]>, element: Option<&str>) -> Result<Certificate> {
    if element.is_some_and(|e| e != "Q0u2") {
        return Err(Error::Unsupported(format!("{} certifies only Q0u2", m.name)));
    }
    if indices.is_some_and(|i| i != [1]) {
        return Err(Error::Unsupported(format!("{} uses the sequence I = (1)", m.name)));
    }
    pgl_detect(m)
}

/// Certificate for one class; the first candidate when no element is given.
pub fn verify(target: Target, indices: Option<&[u32]>, element: Option<&str>) -> Result<Outcome> {
    let (cert, replayed) = match &target {
        Target::Module(m) => (verify_module(m, indices, element)?, true),
        Target::Ring(s) => {
            let alpha = match element {
                Some(e) => s.parse(e)?,
                None => s
                    .candidates
                    .first()
                    .ok_or_else(|| Error::Unsupported(format!("{} has no candidates; pass --element", s.name)))?
                    .element
                    .clone(),
            };
            let cert = match indices {
                Some(i) => detect(s, &alpha, i)?,
                None => find_witness(s, &alpha)?,
            };
            let replayed = cert.replay(s)?;
            (cert, replayed)
        }
    };
    let ok = cert.is_certified() && replayed;
    let md = cert.to_markdown();
    Ok(Outcome::new("certificate", target.name(), target.content_hash(), ok, &cert, md))
}

fn table_ok(s: &Scenario, t: &DhTable) -> Result<bool> {
    let mut ok = t.consistent();
    for r in t.certified() {
        ok &= r.certificate.replay(s)?;
    }
    Ok(ok)
}

pub fn dh(target: Target) -> Result<Outcome> {
    let s = ring(target, "dh-table")?;
    let t = dh_table(&s)?;
    let ok = table_ok(&s, &t)?;
    Ok(Outcome::new("dh-table", &s.name, s.content_hash(), ok, &t, t.to_markdown()))
}

pub fn stable(target: Target) -> Result<Outcome> {
    let s = ring(target, "stable-quotient")?;
    let q = coniveau::certificates::stable_quotient(&s)?;
    Ok(Outcome::new("stable-quotient", &s.name, s.content_hash(), true, &q, q.to_markdown()))
}

#[derive(Serialize)]
struct HilbertRow {
    degree: u32,
    dimension: usize,
}

#[derive(Serialize)]
struct HilbertBody {
    cap: u32,
    series: Vec<HilbertRow>,
}

pub fn hilbert(target: Target) -> Result<Outcome> {
    let (pres, name, hash) = match &target {
        Target::Ring(s) => (s.presentation().clone(), s.name.clone(), s.content_hash()),
        Target::Module(m) => (m.base.clone(), m.name.clone(), m.content_hash()),
    };
    let cap = pres.degree_cap();
    let series = hilbert_series(&pres, cap)?;
    let mut md = format!("## Hilbert series of {name}\n\n| degree | dimension |\n|---|---|\n");
    for (d, k) in series.iter().enumerate() {
        let _ = writeln!(md, "| {d} | {k} |");
    }
    let body = HilbertBody {
        cap,
        series: series.into_iter().enumerate().map(|(d, k)| HilbertRow { degree: d as u32, dimension: k }).collect(),
    };
    Ok(Outcome::new("hilbert", &name, hash, true, &body, md))
}

#[derive(Serialize)]
struct QopStep {
    op: String,
    degree: u32,
    value: String,
}

#[derive(Serialize)]
struct QopBody {
    element: String,
    indices: Vec<u32>,
    steps: Vec<QopStep>,
    value: String,
}

pub fn qop(target: Target, indices: &[u32], element: &str) -> Result<Outcome> {
    let s = ring(target, "qop")?;
    let alpha = s.parse(element)?;
    let seq = s.action.apply_sequence(indices, &alpha)?;
    let steps: Vec<QopStep> = seq
        .steps
        .iter()
        .map(|(i, v)| QopStep { op: format!("Q{i}"), degree: v.degree().unwrap_or(0), value: v.to_string() })
        .collect();
    let mut md = format!("## Q-sequence on `{alpha}` in {}\n\n| step | degree | value |\n|---|---|---|\n", s.name);
    for st in &steps {
        let _ = writeln!(md, "| {} | {} | `{}` |", st.op, st.degree, st.value);
    }
    let body = QopBody {
        element: alpha.to_string(),
        indices: indices.to_vec(),
        value: seq.value().to_string(),
        steps,
    };
    Ok(Outcome::new("qop", &s.name, s.content_hash(), true, &body, md))
}

#[derive(Serialize)]
pub struct RostBody {
    n: u32,
    rost_ranks: Vec<RankRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadric_ranks: Option<Vec<RankRecord>>,
    decomposition_agrees: bool,
    n1: Vec<N1Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dh: Option<QuadricDhCertificate>,
    unramified: UnramifiedQuotient,
}

fn rost_body(n: u32) -> Result<(RostBody, bool)> {
    let rost = rost_etale_ring(n)?;
    let basis = RostBasis::new(n)?;
    let top = (1u32 << (n + 1)) - 2;
    let n1 = (1..=top).map(|s| n1_membership(s, &basis)).collect::<Result<Vec<_>>>()?;
    let (quadric_ranks, decomposition_agrees, dh) = if n >= 2 {
        let q = quadric_etale_ring(n)?;
        let mut agrees = true;
        for r in q.rank_table() {
            agrees &= decomposition_ranks(n, r.degree)? == (r.free_rank, r.torsion_dim);
        }
        (Some(q.rank_table()), agrees, Some(dh_quadric_check(n, &[])?))
    } else {
        (None, true, None)
    };
    let ok = decomposition_agrees && dh.as_ref().is_none_or(|c| c.verdict == QuadricVerdict::DhZero);
    Ok((
        RostBody {
            n,
            rost_ranks: rost.rank_table(),
            quadric_ranks,
            decomposition_agrees,
            n1,
            dh,
            unramified: unramified_quotient_quadric(n)?,
        },
        ok,
    ))
}

fn rost_markdown(b: &RostBody) -> String {
    let mut md = format!("## Rost motive and quadric, n = {}\n\n", b.n);
    let table = |md: &mut String, title: &str, rows: &[RankRecord]| {
        let _ = writeln!(md, "{title}\n\n| degree | free rank | torsion | flags |\n|---|---|---|---|");
        for r in rows {
            let _ = writeln!(md, "| {} | {} | {} | {} |", r.degree, r.free_rank, r.torsion_dim, r.flags.join(", "));
        }
        md.push('\n');
    };
    table(&mut md, "Rost motive:", &b.rost_ranks);
    if let Some(q) = &b.quadric_ranks {
        table(&mut md, "Quadric:", q);
        let _ = writeln!(md, "Decomposition ranks agree: {}\n", b.decomposition_agrees);
    }
    md.push_str("| s | in N^1 | candidate | obstruction |\n|---|---|---|---|\n");
    for v in &b.n1 {
        let obstruction = match &v.obstruction {
            Some(coniveau::motivic::N1Obstruction::NoPreimage { reason, .. }) => reason.clone(),
            Some(coniveau::motivic::N1Obstruction::NonIntegral { q0_value, .. }) => format!("Q0 = `{q0_value}`"),
            None => "-".into(),
        };
        let _ = writeln!(md, "| {} | {} | {} | {} |", v.s, v.in_n1, v.candidate.as_deref().unwrap_or("-"), obstruction);
    }
    if let Some(dh) = &b.dh {
        let verdict = match dh.verdict {
            QuadricVerdict::DhZero => "DH = 0",
            QuadricVerdict::CannotConclude => "cannot conclude",
        };
        let _ = writeln!(md, "\nVerdict: **{verdict}**");
        for r in &dh.reasons {
            let _ = writeln!(md, "- {r}");
        }
    }
    md
}

pub fn rost(n: u32) -> Result<Outcome> {
    let (body, ok) = rost_body(n)?;
    let name = format!("rost(n={n})");
    let hash = sha256_hex(&serde_json::to_string(&body).expect("serializes"));
    let md = rost_markdown(&body);
    Ok(Outcome::new("rost", &name, hash, ok, &body, md))
}

#[derive(Serialize)]
struct ReportEntry {
    name: String,
    scenario_hash: String,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    dh_table: Option<DhTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stable_quotient: Option<StableQuotient>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rost: Option<RostBody>,
}

enum Job {
    Ring(Scenario),
    Module(QModuleScenario),
    Rost(u32),
}

impl Job {
    fn name(&self) -> String {
        match self {
            Job::Ring(s) => s.name.clone(),
            Job::Module(m) => m.name.clone(),
            Job::Rost(n) => format!("rost(n={n})"),
        }
    }

    fn run(&self) -> Result<(ReportEntry, String)> {
        let mut e = ReportEntry {
            name: self.name(),
            scenario_hash: String::new(),
            ok: true,
            dh_table: None,
            stable_quotient: None,
            certificate: None,
            rost: None,
        };
        let md = match self {
            Job::Ring(s) => {
                let t = dh_table(s)?;
                e.scenario_hash = s.content_hash();
                e.ok = table_ok(s, &t)?;
                let mut md = t.to_markdown();
                if s.declared_n1.is_some() {
                    let q = coniveau::certificates::stable_quotient(s)?;
                    md.push('\n');
                    md.push_str(&q.to_markdown());
                    e.stable_quotient = Some(q);
                }
                e.dh_table = Some(t);
                md
            }
            Job::Module(m) => {
                let c = pgl_detect(m)?;
                e.scenario_hash = m.content_hash();
                e.ok = c.is_certified();
                let md = c.to_markdown();
                e.certificate = Some(c);
                md
            }
            Job::Rost(n) => {
                let (body, ok) = rost_body(*n)?;
                e.scenario_hash = sha256_hex(&serde_json::to_string(&body).expect("serializes"));
                e.ok = ok;
                let md = rost_markdown(&body);
                e.rost = Some(body);
                md
            }
        };
        Ok((e, md))
    }
}

#[derive(Serialize)]
struct ReportBody {
    entries: Vec<ReportEntry>,
}

/// Every built-in scenario, user scenario and Rost case, run in parallel and
/// assembled in name order.
pub fn report_all(user: &UserScenarios) -> Result<Outcome> {
    let reg = builtin_scenarios()?;
    let mut jobs: Vec<Job> = reg
        .scenarios()
        .cloned()
        .map(Job::Ring)
        .chain(reg.modules().cloned().map(Job::Module))
        .chain(user.scenarios.iter().map(|(_, s)| Job::Ring(s.clone())))
        .chain([2, 3, 4].map(Job::Rost))
        .collect();
    jobs.sort_by_key(Job::name);
    let results = jobs.par_iter().map(Job::run).collect::<Result<Vec<_>>>()?;
    let ok = results.iter().all(|(e, _)| e.ok);
    let mut md = String::from("# Full reproduction report\n\n| scenario | ok |\n|---|---|\n");
    for (e, _) in &results {
        let _ = writeln!(md, "| {} | {} |", e.name, e.ok);
    }
    for (_, m) in &results {
        md.push('\n');
        md.push_str(m);
    }
    let hashes: String = results.iter().map(|(e, _)| format!("{}\n", e.scenario_hash)).collect();
    let body = ReportBody { entries: results.into_iter().map(|(e, _)| e).collect() };
    Ok(Outcome::new("report", "all", sha256_hex(&hashes), ok, &body, md))
}

/// A single scenario's section of the full report.
pub fn report_one(target: Target) -> Result<Outcome> {
    let job = match target {
        Target::Ring(s) => Job::Ring(s),
        Target::Module(m) => Job::Module(m),
    };
    let (e, md) = job.run()?;
    Ok(Outcome::new("report", &e.name.clone(), e.scenario_hash.clone(), e.ok, &ReportBody { entries: vec![e] }, md))
}
