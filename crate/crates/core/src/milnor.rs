//! Milnor operations `Q_i` as graded derivations given by action tables on
//! generators.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp_algebra::presentation::add_term;
use crate::fp_algebra::{Element, GradedPresentation, Monomial, Poly};

/// Values of `Q_0, ..., Q_max` on the generators of a presentation.
///
/// Entries whose degree would exceed the cap are absent; applying an
/// operation that needs one reports [`Error::QUntabulated`].
#[derive(Clone, Debug)]
pub struct QAction {
    pres: GradedPresentation,
    max_index: u32,
    table: Vec<Vec<Option<Element>>>,
}

/// `Q_I(e)` together with every intermediate value, innermost first.
#[derive(Clone, Debug)]
pub struct QSequence {
    pub indices: Vec<u32>,
    pub input: Element,
    /// `(i, value)` after each application, in the order applied.
    pub steps: Vec<(u32, Element)>,
}

impl QSequence {
    pub fn value(&self) -> &Element {
        self.steps.last().map(|(_, e)| e).unwrap_or(&self.input)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QValidation {
    pub valid: bool,
    pub checks: usize,
    /// Checks not run because they would leave the degree cap.
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl QAction {
    /// Builds a table from explicit entries; generators without an entry for
    /// some `Q_i` are sent to zero when that degree is within the cap.
    pub fn new(
        pres: GradedPresentation,
        max_index: u32,
        entries: Vec<(u32, usize, Element)>,
    ) -> Result<Self> {
        let p = pres.prime();
        let cap = pres.degree_cap();
        let mut table: Vec<Vec<Option<Element>>> = (0..=max_index)
            .map(|i| {
                pres.generators()
                    .iter()
                    .map(|g| (g.degree as u64 + p.q_degree(i) as u64 <= cap as u64).then(|| pres.zero()))
                    .collect()
            })
            .collect();
        for (i, g, value) in entries {
            if i > max_index {
                return Err(Error::QIndex { index: i, max: max_index });
            }
            let gen = pres.generators().get(g).ok_or_else(|| {
                Error::InvalidQAction(format!("generator index {g} out of range"))
            })?;
            pres.check_same(value.presentation())?;
            let value = value.normal_form()?;
            let want = gen.degree + p.q_degree(i);
            if let Some(d) = value.degree() {
                if d != want {
                    return Err(Error::InvalidQAction(format!(
                        "Q{i}({}) has degree {d}, expected {want}",
                        gen.name
                    )));
                }
            } else if !value.is_zero_raw() {
                return Err(Error::InvalidQAction(format!(
                    "Q{i}({}) is not homogeneous",
                    gen.name
                )));
            }
            match &mut table[i as usize][g] {
                Some(slot) => *slot = value,
                None if value.is_zero_raw() => {}
                None => {
                    return Err(Error::DegreeCap { degree: want, cap });
                }
            }
        }
        Ok(QAction {
            pres,
            max_index,
            table,
        })
    }

    /// Builds a table from `(i, generator name, expression)` triples.
    pub fn from_assignments(
        pres: GradedPresentation,
        max_index: u32,
        assignments: &[(u32, &str, &str)],
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(assignments.len());
        for &(i, name, expr) in assignments {
            let g = pres
                .generator_index(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            entries.push((i, g, pres.parse_element(expr)?));
        }
        Self::new(pres, max_index, entries)
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.pres
    }

    pub fn max_index(&self) -> u32 {
        self.max_index
    }

    pub fn entry(&self, i: u32, g: usize) -> Option<&Element> {
        self.table.get(i as usize)?.get(g)?.as_ref()
    }

    /// `Q_i(e)` via the graded Leibniz rule `Q(ab) = Q(a)b + (-1)^{|a|} a Q(b)`.
    pub fn apply(&self, i: u32, e: &Element) -> Result<Element> {
        if i > self.max_index {
            return Err(Error::QIndex {
                index: i,
                max: self.max_index,
            });
        }
        self.pres.check_same(e.presentation())?;
        let p = self.pres.prime();
        let q = p.q_degree(i);
        if let Some(top) = e.terms().keys().map(|m| m.degree()).max() {
            self.pres.check_cap(top + q)?;
        }
        let degrees: Vec<u32> = self.pres.generators().iter().map(|g| g.degree).collect();
        let mut out = Poly::new();
        for (m, &c) in e.terms() {
            for g in 0..m.exponents().len() {
                let k = m.exponent(g);
                if k == 0 || (k as u64 % p.value() as u64) == 0 {
                    continue;
                }
                let value = self.table[i as usize][g].as_ref().ok_or_else(|| Error::QUntabulated {
                    index: i,
                    generator: self.pres.generator_name(g).to_string(),
                })?;
                if value.is_zero_raw() {
                    continue;
                }
                // m = pre * g^k * post with pre, post in generator order.
                let mut pre = vec![0; degrees.len()];
                pre[..g].copy_from_slice(&m.exponents()[..g]);
                let pre = Monomial::from_exponents(pre, &degrees);
                let mut rest = m.exponents().to_vec();
                rest[..g].iter_mut().for_each(|e| *e = 0);
                rest[g] = k - 1;
                let rest = Monomial::from_exponents(rest, &degrees);
                let mut coeff = p.mul(c, k % p.value());
                if pre.degree() % 2 == 1 && !p.is_two() {
                    coeff = p.neg(coeff);
                }
                // pre * Q(g) * g^{k-1} * post; for p odd only even g can have
                // k > 1 and Q(g) then commutes past g^{k-1} unchanged.
                let mut left = Poly::new();
                left.insert(pre, coeff);
                let lq = self.pres.mul_free(&left, value.terms());
                let mut right = Poly::new();
                right.insert(rest, 1);
                for (mm, cc) in self.pres.mul_free(&lq, &right) {
                    add_term(p, &mut out, mm, cc);
                }
            }
        }
        Element::from_terms_unreduced(self.pres.clone(), out).normal_form()
    }

    /// `Q_{i_1} ... Q_{i_k}(e)`: the rightmost index is applied first.
    pub fn apply_sequence(&self, indices: &[u32], e: &Element) -> Result<QSequence> {
        let mut steps = Vec::with_capacity(indices.len());
        let mut cur = e.normal_form()?;
        for &i in indices.iter().rev() {
            cur = self.apply(i, &cur)?;
            steps.push((i, cur.clone()));
        }
        Ok(QSequence {
            indices: indices.to_vec(),
            input: e.clone(),
            steps,
        })
    }

    /// Checks `Q_i^2 = 0`, `Q_iQ_j + Q_jQ_i = 0` on generators, `Q_i(r) = 0`
    /// for every relation `r`, and `Q_i(x) = (Q_0 x)^{p^i}` for degree-one
    /// generators, within the cap. Stops at the first failure.
    pub fn validate(&self) -> QValidation {
        let mut checks = 0;
        let mut skipped = 0;
        let fail = |checks, skipped, msg: String| QValidation {
            valid: false,
            checks,
            skipped,
            counterexample: Some(msg),
        };
        let p = self.pres.prime();
        let cap = self.pres.degree_cap() as u64;
        for g in 0..self.pres.ngens() {
            let name = self.pres.generator_name(g).to_string();
            let x = self.pres.generator_element(g);
            let deg = self.pres.generators()[g].degree as u64;
            for i in 0..=self.max_index {
                for j in i..=self.max_index {
                    if deg + p.q_degree(i) as u64 + p.q_degree(j) as u64 > cap {
                        skipped += 1;
                        continue;
                    }
                    checks += 1;
                    let ok = (|| -> Result<bool> {
                        let ij = self.apply(i, &self.apply(j, &x)?)?;
                        if i == j {
                            return ij.is_zero();
                        }
                        let ji = self.apply(j, &self.apply(i, &x)?)?;
                        ij.add(&ji)?.is_zero()
                    })();
                    match ok {
                        Ok(true) => {}
                        Ok(false) if i == j => {
                            return fail(checks, skipped, format!("Q{i}Q{i}({name}) != 0"));
                        }
                        Ok(false) => {
                            return fail(
                                checks,
                                skipped,
                                format!("Q{i}Q{j}({name}) + Q{j}Q{i}({name}) != 0"),
                            );
                        }
                        Err(e) => return fail(checks, skipped, format!("on {name}: {e}")),
                    }
                }
            }
            if deg == 1 {
                for i in 1..=self.max_index {
                    if deg + p.q_degree(i) as u64 > cap {
                        skipped += 1;
                        continue;
                    }
                    checks += 1;
                    let ok = (|| -> Result<bool> {
                        let lhs = self.apply(i, &x)?;
                        let rhs = self.apply(0, &x)?.pow(p.value().pow(i))?;
                        lhs.equals(&rhs)
                    })();
                    match ok {
                        Ok(true) => {}
                        Ok(false) => {
                            return fail(
                                checks,
                                skipped,
                                format!("Q{i}({name}) != (Q0({name}))^{}", p.value().pow(i)),
                            );
                        }
                        Err(e) => return fail(checks, skipped, format!("on {name}: {e}")),
                    }
                }
            }
        }
        for r in self.pres.relations() {
            let d = r.degree().unwrap_or(0) as u64;
            for i in 0..=self.max_index {
                if d + p.q_degree(i) as u64 > cap {
                    skipped += 1;
                    continue;
                }
                checks += 1;
                let raw = self.apply_unreduced_relation(i, &r);
                match raw {
                    Ok(true) => {}
                    Ok(false) => {
                        return fail(checks, skipped, format!("Q{i}({r}) is not in the relation ideal"))
                    }
                    Err(e) => return fail(checks, skipped, format!("on relation {r}: {e}")),
                }
            }
        }
        QValidation {
            valid: true,
            checks,
            skipped,
            counterexample: None,
        }
    }

    /// Applies `Q_i` to a relation written in the free algebra and tests the
    /// result against the relation ideal.
    fn apply_unreduced_relation(&self, i: u32, r: &Element) -> Result<bool> {
        self.apply(i, r)?.is_zero()
    }

    /// Table as `Q i gen = expr` lines, nonzero entries only.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        for (i, row) in self.table.iter().enumerate() {
            for (g, v) in row.iter().enumerate() {
                if let Some(v) = v {
                    if !v.is_zero_raw() {
                        let _ = writeln!(s, "Q {i} {} = {v}", self.pres.generator_name(g));
                    }
                }
            }
        }
        s
    }

    /// The same operations on a quotient of the presentation: entries are
    /// reduced in `target`, which must share the generator list.
    pub fn transport(&self, target: &GradedPresentation) -> Result<QAction> {
        if target.generators() != self.pres.generators() {
            return Err(Error::PresentationMismatch);
        }
        let mut entries = Vec::new();
        for i in 0..=self.max_index {
            for g in 0..self.pres.ngens() {
                let Some(v) = self.entry(i, g) else { continue };
                let d = self.pres.generators()[g].degree + self.pres.prime().q_degree(i);
                if d > target.degree_cap() {
                    continue;
                }
                let moved = Element::from_terms_unreduced(target.clone(), v.terms().clone());
                entries.push((i, g, moved));
            }
        }
        QAction::new(target.clone(), self.max_index, entries)
    }
}

/// `Q_i(e)`.
pub fn apply_q(action: &QAction, i: u32, e: &Element) -> Result<Element> {
    action.apply(i, e)
}

/// `Q_I(e)` with its audit trail.
pub fn apply_q_sequence(action: &QAction, indices: &[u32], e: &Element) -> Result<QSequence> {
    action.apply_sequence(indices, e)
}

pub fn validate_q_axioms(action: &QAction) -> QValidation {
    action.validate()
}

/// The standard action on `H^*(B(Z/p)^n)`: `Q_i(x_j) = y_j^{p^i}`, with
/// `y_j = x_j^2` when `p = 2`.
pub fn elementary_abelian_action(pres: &GradedPresentation, n: usize, max_index: u32) -> Result<QAction> {
    let p = pres.prime().value();
    let mut assignments = Vec::new();
    for j in 1..=n {
        for i in 0..=max_index {
            let power = p.pow(i);
            let expr = if p == 2 {
                format!("x{j}^{}", 2 * power)
            } else {
                format!("y{j}^{power}")
            };
            assignments.push((i, format!("x{j}"), expr));
        }
    }
    let cap = pres.degree_cap();
    let triples: Vec<(u32, &str, &str)> = assignments
        .iter()
        .filter(|(i, _, _)| 1 + pres.prime().q_degree(*i) <= cap)
        .map(|(i, g, e)| (*i, g.as_str(), e.as_str()))
        .collect();
    QAction::from_assignments(pres.clone(), max_index, &triples)
}
