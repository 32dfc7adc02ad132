//! Built-in scenarios: the cohomology rings, Milnor actions, Chern classes and
//! candidate families for each group treated.

use std::collections::BTreeMap;

use super::scenario::{Candidate, Restriction, Scenario};
use crate::char_classes::SplitRing;
use crate::error::{Error, Result};
use crate::fp_algebra::{AlgebraMorphism, Element, Generator, GradedPresentation, Parity, Prime};
use crate::milnor::{elementary_abelian_action, QAction};

const TORSION_N1: &str =
    "torsion classes of the integral cohomology lie in N^1 (accepted as data, not computed)";

/// `H^*(B(Z/p)^n)`: `x_1..x_n` in degree 1 and `y_i = Q_0 x_i`, an alias for
/// `x_i^2` when `p = 2`.
pub fn elementary_presentation(p: u32, n: usize, cap: u32) -> Result<GradedPresentation> {
    let prime = Prime::new(p)?;
    let mut b = GradedPresentation::builder(prime, cap);
    for j in 1..=n {
        b = b.generator(format!("x{j}"), 1);
    }
    for j in 1..=n {
        b = if prime.is_two() {
            b.alias(format!("y{j}"), format!("x{j}^2"))
        } else {
            b.generator(format!("y{j}"), 2)
        };
    }
    b.build()
}

/// Smallest cap holding every witness of the elementary abelian table.
pub fn elementary_default_cap(p: u32, n: usize) -> u32 {
    let prime = Prime::new(p).expect("caller checked the prime");
    let ops = n.saturating_sub(2).max(1) as u32;
    n as u32 + 1 + (1..=ops).map(|i| prime.q_degree(i)).sum::<u32>()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

fn product_text(prefix: &str, idx: &[usize]) -> String {
    idx.iter()
        .map(|i| format!("{prefix}{i}"))
        .collect::<Vec<_>>()
        .join("*")
}

/// The monomial the nonvanishing argument exhibits in `Q_I Q_0(x_S)` for
/// `I = (1, ..., s-2)` (or `I = (1)` when `s = 2`).
fn predicted_term(p: u32, set: &[usize]) -> String {
    let s = set.len();
    if s == 2 {
        return format!("y{}^{p}*y{}", set[0], set[1]);
    }
    let mut parts = Vec::new();
    for (k, &a) in set[..s - 2].iter().enumerate() {
        parts.push(format!("y{a}^{}", p.pow(k as u32 + 1)));
    }
    parts.push(format!("y{}", set[s - 2]));
    parts.push(format!("x{}", set[s - 1]));
    parts.join("*")
}

pub fn elementary_abelian(p: u32, n: usize, cap: Option<u32>) -> Result<Scenario> {
    if n == 0 {
        return Err(Error::OutOfRange("rank must be positive".into()));
    }
    let cap = cap.unwrap_or_else(|| elementary_default_cap(p, n));
    let pres = elementary_presentation(p, n, cap)?;
    let max_index = n.saturating_sub(2).max(1) as u32;
    let action = elementary_abelian_action(&pres, n, max_index)?;
    let ys: Vec<String> = (1..=n).map(|j| format!("y{j}")).collect();
    let y_refs: Vec<&str> = ys.iter().map(String::as_str).collect();
    let mut s = Scenario::new(
        format!("elementary_abelian(p={p},n={n})"),
        format!("(Z/{p})^{n}"),
        action,
    )
    .chern(&y_refs)?
    .n1(&y_refs)?
    .assume(TORSION_N1);
    s.dh_equality = true;
    for j in 1..=n {
        s = s.exclude(
            format!("Q0(x{j})"),
            format!("Q0(x{j}) = y{j} is a Chern class, so it vanishes in DH"),
        );
    }
    for size in 2..=n {
        for set in subsets(n, size) {
            let label = format!("Q0({})", product_text("x", &set));
            let element = s.parse(&label)?;
            s.candidates.push(Candidate {
                label,
                element,
                predicted_term: Some(predicted_term(p, &set)),
            });
        }
    }
    Ok(s)
}

/// `Q_j` on the generators of `target`, computed in `split` and pushed along
/// `to_target` (a map from the split ring's `w`-ring).
fn projected_action(
    split: &SplitRing,
    to_target: &AlgebraMorphism,
    target: &GradedPresentation,
    source_names: &[&str],
    max_index: u32,
) -> Result<QAction> {
    let p = target.prime();
    let mut entries = Vec::new();
    for (g, name) in source_names.iter().enumerate() {
        let w = split.w_ring().gen(name)?;
        for j in 0..=max_index {
            if target.generators()[g].degree + p.q_degree(j) > target.degree_cap() {
                continue;
            }
            entries.push((j, g, to_target.apply(&split.q_on_w(j, &w)?)?));
        }
    }
    QAction::new(target.clone(), max_index, entries)
}

/// Projection of a `w`-ring onto a ring generated by some of the `w_i` (or
/// renamed images), other generators going to zero.
fn w_projection(
    from: &GradedPresentation,
    to: &GradedPresentation,
    pairs: &[(&str, &str)],
) -> Result<AlgebraMorphism> {
    AlgebraMorphism::from_assignments(from.clone(), to.clone(), pairs)
}

pub fn so_odd(m: usize, cap: Option<u32>) -> Result<Scenario> {
    if m == 0 || m > 3 {
        return Err(Error::OutOfRange(format!("so_odd needs 1 <= m <= 3, got {m}")));
    }
    let cap = cap.unwrap_or(64);
    let rank = 2 * m + 1;
    let split = SplitRing::new(rank, true, cap)?;
    let action = split.q_action(3)?;
    let ws: Vec<String> = (2..=rank).map(|i| format!("w{i}^2")).collect();
    let chern: Vec<&str> = ws.iter().map(String::as_str).collect();
    let mut n1: Vec<String> = (1..=m).map(|j| format!("w{}", 2 * j + 1)).collect();
    for i in 1..=m {
        for j in i..=m {
            n1.push(format!("w{}*w{}", 2 * i, 2 * j));
        }
    }
    let n1_refs: Vec<&str> = n1.iter().map(String::as_str).collect();
    let mut s = Scenario::new(format!("so_odd(m={m})"), format!("SO({rank})"), action)
        .chern(&chern)?
        .n1(&n1_refs)?
        .assume(TORSION_N1)
        .assume("N^1 is generated by the odd classes and the products w_{2i}w_{2j} (from the known stable cohomology)")
        .meta("splitting_rank", rank.to_string());
    for j in 1..=m {
        let w = format!("w{}", 2 * j + 1);
        s = s.candidate(w.clone(), &w)?;
    }
    if m >= 2 {
        s = s.candidate("Q0(w2*w4)", "Q0(w2*w4)")?;
    }
    s.dh_equality = m == 1;
    Ok(s)
}

fn free_w_ring(cap: u32, degrees: &[u32]) -> Result<GradedPresentation> {
    let mut b = GradedPresentation::builder(Prime::new(2)?, cap);
    for &d in degrees {
        b = b.generator(format!("w{d}"), d);
    }
    b.build()
}

const G2_CAP: u32 = 24;

/// `F_2[w_4, w_6, w_7]` with the action pulled back from `BSO_7` along the
/// seven-dimensional representation.
pub fn g2(cap: Option<u32>) -> Result<Scenario> {
    let cap = cap.unwrap_or(G2_CAP);
    let pres = free_w_ring(cap, &[4, 6, 7])?;
    let split = SplitRing::new(7, true, 16)?;
    let proj = w_projection(split.w_ring(), &pres, &[("w4", "w4"), ("w6", "w6"), ("w7", "w7")])?;
    let action = projected_action(&split, &proj, &pres, &["w4", "w6", "w7"], 2)?;
    let mut s = Scenario::new("g2", "G2", action)
        .chern(&["w4^2", "w6^2", "w7^2"])?
        .assume("w4 lies in N^1H^4 (cited, not computed)")
        .candidate("w4", "w4")?
        .candidate("w7", "w7")?
        .candidate("w4*w7", "w4*w7")?;
    s.metadata.insert("representation".into(), "G2 -> SO(7)".into());
    Ok(s)
}

/// `Spin_7`: `F_2[w_4, w_6, w_7, w_8]`, the `w_i` being Stiefel–Whitney
/// classes of the spin representation, whose nonzero classes sit in degrees
/// 4, 6, 7, 8.
fn spin7(cap: Option<u32>) -> Result<Scenario> {
    let cap = cap.unwrap_or(G2_CAP);
    let pres = free_w_ring(cap, &[4, 6, 7, 8])?;
    let split = SplitRing::new(8, false, 16)?;
    let proj = w_projection(
        split.w_ring(),
        &pres,
        &[("w4", "w4"), ("w6", "w6"), ("w7", "w7"), ("w8", "w8")],
    )?;
    let action = projected_action(&split, &proj, &pres, &["w4", "w6", "w7", "w8"], 2)?;
    let g = g2(Some(cap))?;
    let res = AlgebraMorphism::from_assignments(
        pres.clone(),
        g.presentation().clone(),
        &[("w4", "w4"), ("w6", "w6"), ("w7", "w7")],
    )?;
    let mut s = Scenario::new("simply_connected(p=2)", "Spin(7)", action)
        .chern(&["w4^2", "w6^2", "w7^2", "w8^2"])?
        .assume("w4 lies in N^1H^4: twice it is a Chern class and it is 2-torsion on an open set (cited)")
        .assume("j: G2 -> Spin(7) identifies H^4 (cited)")
        .candidate("w4", "w4")?
        .meta("representation", "spin, dimension 8");
    s.restrictions.push(Restriction {
        target: g.name.clone(),
        morphism: res,
        target_action: g.action.clone(),
    });
    Ok(s)
}

/// `F_p[w] ⊗ Λ(v)` with `v = Q_1 w`, and the restriction
/// `w ↦ Q_0(x_1x_2x_3)` to `(Z/p)^3`.
fn exceptional_odd(p: u32) -> Result<Scenario> {
    let prime = Prime::new(p)?;
    let vdeg = 4 + prime.q_degree(1);
    let cap = vdeg;
    let pres = GradedPresentation::builder(prime, cap)
        .generator("w", 4)
        .push_generator(Generator::new("v", vdeg, Parity::Odd))
        .build()?;
    let action = QAction::from_assignments(pres.clone(), 1, &[(1, "w", "v")])?;
    let target = elementary_abelian(p, 3, Some(cap))?;
    let w_img = target.parse("Q0(x1*x2*x3)")?;
    let v_img = target.parse("Q1(Q0(x1*x2*x3))")?;
    let res = AlgebraMorphism::new(pres.clone(), target.presentation().clone(), vec![w_img, v_img])?;
    let group = if p == 3 { "F4" } else { "E8" };
    let mut s = Scenario::new(format!("simply_connected(p={p})"), group, action)
        .assume("w lies in N^1H^4: p times it is a Chern class (cited)")
        .assume("j: (Z/p)^3 -> G with j*(w) = Q0(x1x2x3) (cited)")
        .candidate("w", "w")?;
    s.restrictions.push(Restriction {
        target: target.name.clone(),
        morphism: res,
        target_action: target.action.clone(),
    });
    Ok(s)
}

pub fn simply_connected(p: u32, cap: Option<u32>) -> Result<Scenario> {
    match p {
        2 => spin7(cap),
        3 | 5 => exceptional_odd(p),
        _ => Err(Error::Unsupported(format!(
            "simply_connected is modeled for p in {{2, 3, 5}}, not {p}"
        ))),
    }
}

fn symplectic_form(n: usize) -> String {
    (1..=n)
        .map(|i| format!("x{}*x{}", 2 * i - 1, 2 * i))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// All nonzero `Q_I(seed)` within the cap.
fn q_closure(action: &QAction, seed: &Element) -> Result<Vec<Element>> {
    let pres = action.presentation();
    let p = pres.prime();
    let mut out: Vec<Element> = vec![seed.clone()];
    let mut frontier = vec![seed.clone()];
    while let Some(e) = frontier.pop() {
        let d = e.degree().unwrap_or(0);
        for i in 0..=action.max_index() {
            if d + p.q_degree(i) > pres.degree_cap() {
                continue;
            }
            let q = action.apply(i, &e)?;
            if q.is_zero()? || out.iter().any(|o| o == &q || *o == q.neg()) {
                continue;
            }
            out.push(q.clone());
            frontier.push(q);
        }
    }
    Ok(out)
}

fn pair_candidates(mut s: Scenario, n: usize) -> Result<Scenario> {
    for i in 1..=2 * n {
        for j in i + 1..=2 * n {
            let label = format!("Q0(x{i}*x{j})");
            if (i, j) == (1, 2) {
                s = s.exclude(
                    label,
                    "Q0(x1*x2) is minus the sum of the other Q0(x_{2i-1}x_{2i}) modulo Q0(f)",
                );
            } else {
                s = s.candidate(label.clone(), &label)?;
            }
        }
    }
    Ok(s)
}

/// `E(n) = p^{1+2n}_+` for odd `p`, modeled as
/// `F_p[y] ⊗ Λ(x)` modulo the smallest `Q`-stable ideal containing `f`.
pub fn extraspecial_e(n: usize, p: u32, cap: Option<u32>) -> Result<Scenario> {
    let prime = Prime::new(p)?;
    if prime.is_two() {
        return Err(Error::Unsupported("extraspecial_e needs an odd prime; use extraspecial_d".into()));
    }
    if n < 2 {
        return Err(Error::OutOfRange("extraspecial_e needs n >= 2".into()));
    }
    let cap = cap.unwrap_or(3 + prime.q_degree(1));
    let free = elementary_presentation(p, 2 * n, cap)?;
    let free_action = elementary_abelian_action(&free, 2 * n, 1)?;
    let f = free.parse_element(&symplectic_form(n))?;
    let ideal = q_closure(&free_action, &f)?;
    let pres = free.quotient(&ideal, cap)?;
    let action = free_action.transport(&pres)?;
    let ys: Vec<String> = (1..=2 * n).map(|j| format!("y{j}")).collect();
    let y_refs: Vec<&str> = ys.iter().map(String::as_str).collect();
    let s = Scenario::new(
        format!("extraspecial_e(n={n},p={p})"),
        format!("{p}^(1+{})_+", 2 * n),
        action,
    )
    .chern(&y_refs)?
    .n1(&y_refs)?
    .assume(TORSION_N1)
    .assume("the ring is the Q-stable quotient of F_p[y] ⊗ Λ(x) by f; classes nonzero there are nonzero in the group cohomology")
    .meta("f", symplectic_form(n))
    .meta("relations", ideal.len().to_string());
    pair_candidates(s, n)
}

/// The Stiefel–Whitney degrees `2^n` and `2^n - 2^i` (`0 ≤ i < n`) of the
/// spin representation of `D(n)`, largest first.
pub fn spin_sw_degrees(n: u32) -> Vec<u32> {
    let top = 1u32 << n;
    let mut out = vec![top];
    out.extend((0..n).map(|i| top - (1 << i)));
    out
}

/// `F_2[x_1..x_{2n}]/(f, Q_0 f, ..., Q_{n-2} f)` with its action.
fn d_ring(n: usize, cap: u32) -> Result<(GradedPresentation, QAction, Vec<Element>)> {
    let free = elementary_presentation(2, 2 * n, cap)?;
    let mut max_index = 0;
    while 1 + free.prime().q_degree(max_index + 1) <= cap {
        max_index += 1;
    }
    let free_action = elementary_abelian_action(&free, 2 * n, max_index)?;
    let f = free.parse_element(&symplectic_form(n))?;
    let mut rels = vec![f.clone()];
    for i in 0..n.saturating_sub(1) as u32 {
        if f.degree().unwrap() + free.prime().q_degree(i) <= cap {
            rels.push(free_action.apply(i, &f)?);
        }
    }
    let pres = free.quotient(&rels, cap)?;
    let action = free_action.transport(&pres)?;
    Ok((pres, action, rels))
}

pub fn extraspecial_d(n: usize, cap: Option<u32>) -> Result<Scenario> {
    if n < 2 {
        return Err(Error::OutOfRange("extraspecial_d needs n >= 2".into()));
    }
    let cap = cap.unwrap_or(8);
    let (_, action, _) = d_ring(n, cap)?;
    let ys: Vec<String> = (1..=2 * n).map(|j| format!("x{j}^2")).collect();
    let y_refs: Vec<&str> = ys.iter().map(String::as_str).collect();
    let degrees = spin_sw_degrees(n as u32)
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let s = Scenario::new(format!("extraspecial_d(n={n})"), format!("2^(1+{})_+", 2 * n), action)
        .chern(&y_refs)?
        .n1(&y_refs)?
        .assume(TORSION_N1)
        .assume(format!("w_{}(Δ) lies in N^1 and is omitted from the ring (cited)", 1 << n))
        .meta("f", symplectic_form(n))
        .meta("spin_sw_degrees", degrees);
    pair_candidates(s, n)
}

/// Quillen's ring for `D(n)` together with the spin representation's
/// Stiefel–Whitney degrees.
#[derive(Clone, Debug)]
pub struct QuillenRing {
    pub presentation: GradedPresentation,
    pub sw_degrees: Vec<u32>,
    pub metadata: BTreeMap<String, String>,
}

/// `F_2[x_1..x_{2n}]/(f, Q_0 f, ..., Q_{n-2} f) ⊗ F_2[w_{2^n}]`.
pub fn quillen_d_ring(n: usize, cap: u32) -> Result<QuillenRing> {
    if n == 0 {
        return Err(Error::OutOfRange("quillen_d_ring needs n >= 1".into()));
    }
    let (base, _, rels) = d_ring(n, cap)?;
    let top = 1u32 << n;
    let mut b = GradedPresentation::builder(base.prime(), cap);
    for g in base.generators() {
        b = b.push_generator(g.clone());
    }
    b = b.generator(format!("w{top}"), top);
    for r in &rels {
        b = b.relation(r.to_string());
    }
    let presentation = b.build()?;
    let sw_degrees = spin_sw_degrees(n as u32);
    let mut metadata = BTreeMap::new();
    metadata.insert(
        "spin_sw_degrees".into(),
        sw_degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
    );
    metadata.insert("f".into(), symplectic_form(n));
    Ok(QuillenRing {
        presentation,
        sw_degrees,
        metadata,
    })
}

/// `E_4^{0,*}` of the central-extension spectral sequence for `E(n)`, with
/// the differentials that produce it.
#[derive(Clone, Debug)]
pub struct E4Page {
    pub presentation: GradedPresentation,
    pub f: Element,
    pub q0_f: Element,
    /// `(source, value)` pairs: `d_2(z) = f`, `d_3(u) = Q_0 f`.
    pub differentials: Vec<(String, String)>,
}

pub fn extraspecial_e4(n: usize, p: u32, cap: u32) -> Result<E4Page> {
    let prime = Prime::new(p)?;
    if prime.is_two() {
        return Err(Error::Unsupported("extraspecial_e4 needs an odd prime".into()));
    }
    if n == 0 {
        return Err(Error::OutOfRange("extraspecial_e4 needs n >= 1".into()));
    }
    let free = elementary_presentation(p, 2 * n, cap)?;
    let action = elementary_abelian_action(&free, 2 * n, 0)?;
    let f = free.parse_element(&symplectic_form(n))?;
    let q0_f = action.apply(0, &f)?;
    let presentation = free.quotient(&[f.clone(), q0_f.clone()], cap)?;
    Ok(E4Page {
        differentials: vec![("d2(z)".into(), f.to_string()), ("d3(u)".into(), q0_f.to_string())],
        presentation,
        f,
        q0_f,
    })
}
