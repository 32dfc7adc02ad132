//! Text format for user scenarios.
//!
//! ```text
//! # comment
//! scenario my_ring
//! group (Z/3)^2
//! prime 3
//! cap 12
//! gen x1 1 odd
//! gen y1 2
//! alias c = y1^2
//! rel x1*y1^3
//! max_index 1
//! Q 0 x1 = y1
//! Q 1 x1 = y1^3
//! chern y1
//! n1 y1
//! candidate a = Q0(x1*x2)
//! exclude Q0(x1) : a Chern class
//! assume classes of degree 3 lie in N^1
//! equality
//! meta source = hand-written
//! ```
//!
//! `split RANK [so]` replaces `gen`/`Q` lines by the Stiefel–Whitney ring of
//! `BO_RANK` (or `BSO_RANK`) with the action from the splitting principle.
//! Presentation lines (`prime`, `cap`, `gen`, `alias`, `rel`, `split`) may
//! appear anywhere; they are read before the rest.

use crate::char_classes::SplitRing;
use crate::error::{Error, Result};
use crate::fp_algebra::parse::{is_identifier, relocate};
use crate::fp_algebra::{Generator, GradedPresentation, Parity, Prime};
use crate::milnor::QAction;

use super::scenario::{Candidate, Scenario};

struct Line<'a> {
    no: usize,
    text: &'a str,
    keyword: &'a str,
    /// Byte offset of the rest of the line after the keyword.
    rest_at: usize,
    rest: &'a str,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let start = body.len() - trimmed.len();
        let kw_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let keyword = &trimmed[..kw_len];
        let after = &trimmed[kw_len..];
        let rest = after.trim_start();
        let rest_at = start + kw_len + (after.len() - rest.len());
        out.push(Line {
            no: i + 1,
            text: raw,
            keyword,
            rest_at,
            rest: rest.trim_end(),
        });
    }
    out
}

/// Splits `lhs = rhs`, returning the right side and its byte offset.
fn split_eq<'a>(l: &Line<'a>) -> Result<(&'a str, &'a str, usize)> {
    let eq = l
        .rest
        .find('=')
        .ok_or_else(|| err(l.no, l.rest_at + 1, "expected `=`"))?;
    let lhs = l.rest[..eq].trim();
    let rhs_raw = &l.rest[eq + 1..];
    let rhs = rhs_raw.trim_start();
    let at = l.rest_at + eq + 1 + (rhs_raw.len() - rhs.len());
    Ok((lhs, rhs.trim_end(), at))
}

fn number<T: std::str::FromStr>(l: &Line<'_>, word: &str, at: usize) -> Result<T> {
    word.parse()
        .map_err(|_| err(l.no, at + 1, format!("expected a number, found `{word}`")))
}

fn words<'a>(l: &Line<'a>) -> Vec<(&'a str, usize)> {
    let mut out = Vec::new();
    let mut pos = 0;
    for w in l.rest.split_whitespace() {
        let off = l.rest[pos..].find(w).unwrap() + pos;
        out.push((w, l.rest_at + off));
        pos = off + w.len();
    }
    out
}

fn presentation_from(ls: &[Line<'_>]) -> Result<(GradedPresentation, Option<SplitRing>)> {
    let mut prime = None;
    let mut cap = None;
    let mut split = None;
    for l in ls {
        match l.keyword {
            "prime" => prime = Some((number::<u32>(l, l.rest, l.rest_at)?, l)),
            "cap" => cap = Some(number::<u32>(l, l.rest, l.rest_at)?),
            "split" => split = Some(l),
            _ => {}
        }
    }
    let cap = cap.ok_or_else(|| err(1, 1, "missing `cap` line"))?;
    if let Some(l) = split {
        let w = words(l);
        let (rank_text, at) = *w.first().ok_or_else(|| err(l.no, l.rest_at + 1, "expected a rank"))?;
        let rank: usize = number(l, rank_text, at)?;
        let so = match w.get(1) {
            None => false,
            Some(("so", _)) => true,
            Some((other, at)) => return Err(err(l.no, at + 1, format!("expected `so`, found `{other}`"))),
        };
        if let Some((p, pl)) = prime {
            if p != 2 {
                return Err(err(pl.no, pl.rest_at + 1, "split scenarios live over F_2"));
            }
        }
        let ring = SplitRing::new(rank, so, cap).map_err(|e| relocate(e, l.no, l.rest_at))?;
        return Ok((ring.w_ring().clone(), Some(ring)));
    }
    let (p, pl) = prime.ok_or_else(|| err(1, 1, "missing `prime` line"))?;
    let prime = Prime::new(p).map_err(|e| relocate(e, pl.no, pl.rest_at))?;
    let mut b = GradedPresentation::builder(prime, cap);
    for l in ls {
        match l.keyword {
            "gen" => {
                let w = words(l);
                let Some(&(name, name_at)) = w.first() else {
                    return Err(err(l.no, l.rest_at + 1, "expected a generator name"));
                };
                if !is_identifier(name) {
                    return Err(err(l.no, name_at + 1, format!("invalid generator name `{name}`")));
                }
                let (deg_text, deg_at) = *w
                    .get(1)
                    .ok_or_else(|| err(l.no, l.text.len() + 1, "expected a degree"))?;
                let degree: u32 = number(l, deg_text, deg_at)?;
                let mut parity = if !prime.is_two() && degree % 2 == 1 { Parity::Odd } else { Parity::Even };
                let mut weight = None;
                let mut k = 2;
                while k < w.len() {
                    match w[k].0 {
                        "even" | "poly" => parity = Parity::Even,
                        "odd" | "ext" => parity = Parity::Odd,
                        "weight" => {
                            let (t, at) = *w
                                .get(k + 1)
                                .ok_or_else(|| err(l.no, l.text.len() + 1, "expected a weight"))?;
                            weight = Some(number::<i32>(l, t, at)?);
                            k += 1;
                        }
                        other => {
                            return Err(err(l.no, w[k].1 + 1, format!("unexpected `{other}`")));
                        }
                    }
                    k += 1;
                }
                let mut g = Generator::new(name, degree, parity);
                if let Some(wt) = weight {
                    g = g.with_weight(wt);
                }
                b = b.push_generator(g);
            }
            "alias" => {
                let (lhs, rhs, _) = split_eq(l)?;
                b = b.alias(lhs, rhs);
            }
            "rel" => b = b.relation(l.rest),
            _ => {}
        }
    }
    // Relation and alias errors are located by rebuilding them one by one.
    match b.build() {
        Ok(p) => Ok((p, None)),
        Err(e) => Err(locate_build_error(ls, e, prime, cap)),
    }
}

fn locate_build_error(ls: &[Line<'_>], e: Error, prime: Prime, cap: u32) -> Error {
    let mut b = GradedPresentation::builder(prime, cap);
    for l in ls {
        match l.keyword {
            "gen" => {
                let w = words(l);
                let degree = w.get(1).and_then(|(t, _)| t.parse().ok()).unwrap_or(0);
                let parity = if w.iter().any(|(t, _)| *t == "odd" || *t == "ext")
                    || (!prime.is_two() && degree % 2 == 1 && !w.iter().any(|(t, _)| *t == "even" || *t == "poly"))
                {
                    Parity::Odd
                } else {
                    Parity::Even
                };
                b = b.push_generator(Generator::new(w[0].0, degree, parity));
            }
            "alias" | "rel" => {
                let trial = if l.keyword == "alias" {
                    match split_eq(l) {
                        Ok((lhs, rhs, _)) => b.clone().alias(lhs, rhs),
                        Err(e) => return e,
                    }
                } else {
                    b.clone().relation(l.rest)
                };
                if let Err(e) = trial.clone().build() {
                    let at = if l.keyword == "alias" {
                        split_eq(l).map(|(_, _, at)| at).unwrap_or(l.rest_at)
                    } else {
                        l.rest_at
                    };
                    return relocate(e, l.no, at);
                }
                b = trial;
            }
            _ => {}
        }
    }
    e
}

/// Parses a scenario file into a validated scenario.
pub fn parse_scenario_file(text: &str) -> Result<Scenario> {
    let ls = lines(text);
    const KNOWN: &[&str] = &[
        "scenario", "group", "prime", "cap", "gen", "alias", "rel", "split", "max_index", "Q",
        "chern", "n1", "candidate", "exclude", "assume", "equality", "meta",
    ];
    for l in &ls {
        if !KNOWN.contains(&l.keyword) {
            let col = l.text.len() - l.text.trim_start().len() + 1;
            return Err(err(l.no, col, format!("unknown keyword `{}`", l.keyword)));
        }
    }
    let (pres, split) = presentation_from(&ls)?;

    let mut max_index = None;
    let mut entries = Vec::new();
    for l in &ls {
        match l.keyword {
            "max_index" => max_index = Some(number::<u32>(l, l.rest, l.rest_at)?),
            "Q" => {
                let (lhs, rhs, at) = split_eq(l)?;
                let mut it = lhs.split_whitespace();
                let (Some(i), Some(g), None) = (it.next(), it.next(), it.next()) else {
                    return Err(err(l.no, l.rest_at + 1, "expected `Q <index> <generator> = <expression>`"));
                };
                let i: u32 = number(l, i, l.rest_at)?;
                let gi = pres
                    .generator_index(g)
                    .ok_or_else(|| err(l.no, l.rest_at + lhs.find(g).unwrap() + 1, format!("unknown generator `{g}`")))?;
                let value = pres.parse_element(rhs).map_err(|e| relocate(e, l.no, at))?;
                entries.push((i, gi, value, l.no));
            }
            _ => {}
        }
    }
    let action = match split {
        Some(ring) => {
            if !entries.is_empty() {
                return Err(err(entries[0].3, 1, "`Q` lines are not allowed with `split`"));
            }
            let mut k = max_index.unwrap_or(0);
            if max_index.is_none() {
                while 2 + pres.prime().q_degree(k + 1) <= pres.degree_cap() {
                    k += 1;
                }
            }
            ring.q_action(k)?
        }
        None => {
            let k = max_index.unwrap_or_else(|| entries.iter().map(|e| e.0).max().unwrap_or(0));
            let line_of = entries.first().map(|e| e.3).unwrap_or(1);
            QAction::new(
                pres.clone(),
                k,
                entries.into_iter().map(|(i, g, v, _)| (i, g, v)).collect(),
            )
            .map_err(|e| relocate(e, line_of, 0))?
        }
    };

    let name = ls
        .iter()
        .find(|l| l.keyword == "scenario")
        .map(|l| l.rest.to_string())
        .unwrap_or_else(|| "unnamed".into());
    let group = ls
        .iter()
        .find(|l| l.keyword == "group")
        .map(|l| l.rest.to_string())
        .unwrap_or_else(|| name.clone());
    let mut s = Scenario::new(name, group, action);
    let parse_at = |s: &Scenario, l: &Line<'_>, text: &str, at: usize| {
        s.parse(text).map_err(|e| relocate(e, l.no, at))
    };
    let mut n1 = Vec::new();
    for l in &ls {
        match l.keyword {
            "chern" => {
                let e = parse_at(&s, l, l.rest, l.rest_at)?;
                s.chern_flags.push(e);
            }
            "n1" => n1.push(parse_at(&s, l, l.rest, l.rest_at)?),
            "candidate" => {
                let (label, rhs, at) = split_eq(l)?;
                let element = parse_at(&s, l, rhs, at)?;
                s.candidates.push(Candidate {
                    label: label.to_string(),
                    element,
                    predicted_term: None,
                });
            }
            "exclude" => {
                let (label, reason) = l
                    .rest
                    .split_once(':')
                    .ok_or_else(|| err(l.no, l.rest_at + 1, "expected `<label> : <reason>`"))?;
                s = s.exclude(label.trim(), reason.trim());
            }
            "assume" => s.assumptions.push(l.rest.to_string()),
            "equality" => s.dh_equality = true,
            "meta" => {
                let (k, v, _) = split_eq(l)?;
                s.metadata.insert(k.to_string(), v.to_string());
            }
            _ => {}
        }
    }
    if !n1.is_empty() {
        s.declared_n1 = Some(n1);
    }
    let v = s.validate();
    if !v.valid {
        return Err(Error::InvalidQAction(v.counterexample.unwrap_or_default()));
    }
    Ok(s)
}
