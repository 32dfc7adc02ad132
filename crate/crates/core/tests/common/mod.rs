//! Randomized ring and Milnor-axiom checks over every built-in scenario,
//! shared by the property suite and the acceptance run.

#![allow(dead_code)]

use std::sync::OnceLock;

use coniveau::certificates::{builtin_scenarios, QModuleScenario, Scenario};
use coniveau::fp_algebra::{Element, Poly};
use proptest::prelude::*;

/// Degrees above this are not sampled; keeps the wide-cap SO scenarios fast.
const SAMPLE_CAP: u32 = 40;

pub struct Ring {
    pub scenario: Scenario,
    /// Normal-form basis per degree `0..=min(cap, SAMPLE_CAP)`.
    bases: Vec<Vec<Element>>,
}

pub struct Pool {
    pub rings: Vec<Ring>,
    pub modules: Vec<QModuleScenario>,
}

pub fn pool() -> &'static Pool {
    static POOL: OnceLock<Pool> = OnceLock::new();
    POOL.get_or_init(|| {
        let reg = builtin_scenarios().expect("built-in scenarios validate");
        let rings = reg
            .scenarios()
            .map(|s| {
                let top = s.cap().min(SAMPLE_CAP);
                let bases = (0..=top)
                    .map(|d| s.presentation().graded_basis(d).expect("basis within cap"))
                    .collect();
                Ring { scenario: s.clone(), bases }
            })
            .collect();
        Pool { rings, modules: reg.modules().cloned().collect() }
    })
}

#[derive(Clone, Debug)]
pub struct Case {
    pub target: usize,
    pub i: u32,
    pub j: u32,
    pub da: u32,
    pub db: u32,
    pub picks: [u32; 6],
}

pub fn case() -> impl Strategy<Value = Case> {
    (any::<usize>(), any::<u32>(), any::<u32>(), any::<u32>(), any::<u32>(), any::<[u32; 6]>())
        .prop_map(|(target, i, j, da, db, picks)| Case { target, i, j, da, db, picks })
}

impl Ring {
    fn cap(&self) -> u32 {
        self.bases.len() as u32 - 1
    }

    fn q_degree(&self, i: u32) -> u32 {
        self.scenario.presentation().prime().q_degree(i)
    }

    /// Nonempty degrees in `0..=limit`.
    fn live_degrees(&self, limit: u32) -> Vec<u32> {
        (0..=limit.min(self.cap())).filter(|&d| !self.bases[d as usize].is_empty()).collect()
    }

    fn degree(&self, limit: u32, seed: u32) -> u32 {
        let live = self.live_degrees(limit);
        live[seed as usize % live.len()]
    }

    /// A combination of up to three basis elements with nonzero coefficients.
    fn element(&self, d: u32, picks: &[u32]) -> Element {
        let basis = &self.bases[d as usize];
        let p = self.scenario.presentation().prime().value();
        let mut e = self.scenario.presentation().zero();
        for (k, &seed) in picks.iter().take(3).enumerate() {
            if k > 0 && seed % 2 == 0 {
                continue;
            }
            let b = &basis[(seed as usize / 2) % basis.len()];
            let c = 1 + (seed / 7) % (p - 1);
            e = e.add(&b.scale(c as i64)).unwrap();
        }
        e
    }

    fn index(&self, seed: u32, room: u32) -> Option<u32> {
        let fits: Vec<u32> = (0..=self.scenario.action.max_index()).filter(|&i| self.q_degree(i) <= room).collect();
        (!fits.is_empty()).then(|| fits[seed as usize % fits.len()])
    }
}

fn ring(c: &Case) -> &'static Ring {
    let rings = &pool().rings;
    &rings[c.target % rings.len()]
}

fn sign(p: u32, odd: bool) -> i64 {
    if odd && p != 2 { -1 } else { 1 }
}

fn same(a: &Element, b: &Element, what: &str) -> Result<(), String> {
    if a.equals(b).map_err(|e| e.to_string())? {
        Ok(())
    } else {
        Err(format!("{what}: {a} != {b}"))
    }
}

/// `Q_i(ab) = Q_i(a)b + (-1)^{|a|} a Q_i(b)`.
pub fn leibniz(c: &Case) -> Result<(), String> {
    let r = ring(c);
    let i = r.index(c.i, r.cap()).ok_or("no operation fits")?;
    let room = r.cap() - r.q_degree(i);
    let da = r.degree(room, c.da);
    let db = r.degree(room - da, c.db);
    let a = r.element(da, &c.picks[..3]);
    let b = r.element(db, &c.picks[3..]);
    let q = |e: &Element| r.scenario.action.apply(i, e).map_err(|e| e.to_string());
    let lhs = q(&a.mul(&b).unwrap())?;
    let s = sign(r.scenario.presentation().prime().value(), da % 2 == 1);
    let rhs = q(&a)?.mul(&b).unwrap().add(&a.mul(&q(&b)?).unwrap().scale(s)).unwrap();
    same(&lhs, &rhs, &format!("{} Leibniz Q{i} on ({a})({b})", r.scenario.name))
}

fn module(c: &Case) -> Option<&'static QModuleScenario> {
    let p = pool();
    let total = p.rings.len() + p.modules.len();
    let k = c.target % total;
    k.checked_sub(p.rings.len()).map(|m| &p.modules[m])
}

fn module_vector(m: &QModuleScenario, picks: &[u32]) -> coniveau::certificates::pgl::LabelVector {
    let p = m.p.value();
    picks
        .iter()
        .take(m.labels.len())
        .enumerate()
        .filter_map(|(l, &s)| (s % p != 0).then_some((l, s % p)))
        .collect()
}

/// `Q_iQ_j + Q_jQ_i = 0` for `i ≠ j`.
pub fn anticommutation(c: &Case) -> Result<(), String> {
    if let Some(m) = module(c) {
        let v = module_vector(m, &c.picks);
        let ij = m.apply(0, &m.apply(1, &v).unwrap()).unwrap();
        let ji = m.apply(1, &m.apply(0, &v).unwrap()).unwrap();
        let mut sum = ij.clone();
        for (k, x) in ji {
            let e = sum.entry(k).or_insert(0);
            *e = m.p.add(*e, x);
        }
        sum.retain(|_, x| *x != 0);
        return if sum.is_empty() { Ok(()) } else { Err(format!("{} anticommutation", m.name)) };
    }
    let r = ring(c);
    let max = r.scenario.action.max_index();
    if max == 0 {
        return Err(format!("{} has a single operation", r.scenario.name));
    }
    let i = c.i % (max + 1);
    let mut j = c.j % max;
    if j >= i {
        j += 1;
    }
    let need = r.q_degree(i) + r.q_degree(j);
    let (i, j) = if need <= r.cap() { (i, j) } else { (0, 1) };
    let room = r.cap() - r.q_degree(i) - r.q_degree(j);
    let e = r.element(r.degree(room, c.da), &c.picks);
    let q = |k: u32, x: &Element| r.scenario.action.apply(k, x).unwrap();
    let sum = q(i, &q(j, &e)).add(&q(j, &q(i, &e))).unwrap();
    same(&sum, &r.scenario.presentation().zero(), &format!("{} Q{i}Q{j} on {e}", r.scenario.name))
}

/// `Q_i^2 = 0`.
pub fn nilpotence(c: &Case) -> Result<(), String> {
    if let Some(m) = module(c) {
        let v = module_vector(m, &c.picks);
        let i = c.i % 2;
        let vv = m.apply(i, &m.apply(i, &v).unwrap()).unwrap();
        return if vv.is_empty() { Ok(()) } else { Err(format!("{} Q{i}^2", m.name)) };
    }
    let r = ring(c);
    let i = r.index(c.i, r.cap() / 2).ok_or("no operation fits twice")?;
    let room = r.cap() - 2 * r.q_degree(i);
    let e = r.element(r.degree(room, c.da), &c.picks);
    let qq = r.scenario.action.apply(i, &r.scenario.action.apply(i, &e).unwrap()).unwrap();
    same(&qq, &r.scenario.presentation().zero(), &format!("{} Q{i}^2 on {e}", r.scenario.name))
}

/// Normal form is idempotent, linear, and detects zero.
pub fn normal_form(c: &Case) -> Result<(), String> {
    let r = ring(c);
    let pres = r.scenario.presentation();
    let d = r.degree(r.cap(), c.da);
    let free = pres.monomials_of_degree(d);
    if free.is_empty() {
        return Err(format!("{} has no monomials in degree {d}", r.scenario.name));
    }
    let raw = |seeds: &[u32]| {
        let mut t = Poly::new();
        for &s in seeds {
            let m = free[s as usize % free.len()].clone();
            *t.entry(m).or_insert(0) += 1 + s % 5;
        }
        Element::from_terms_unreduced(pres.clone(), t)
    };
    let x = raw(&c.picks[..3]);
    let y = raw(&c.picks[3..]);
    let nx = x.normal_form().unwrap();
    same(&nx.normal_form().unwrap(), &nx, "idempotence")?;
    let lhs = Element::from_terms_unreduced(pres.clone(), {
        let mut t = x.terms().clone();
        for (m, &v) in y.terms() {
            *t.entry(m.clone()).or_insert(0) += v;
        }
        t
    })
    .normal_form()
    .unwrap();
    same(&lhs, &nx.add(&y.normal_form().unwrap()).unwrap(), "linearity")?;
    if x.is_zero().unwrap() != nx.terms().is_empty() {
        return Err(format!("is_zero disagrees with the normal form of {x}"));
    }
    Ok(())
}

/// `ab = (-1)^{|a||b|} ba`.
pub fn graded_commutativity(c: &Case) -> Result<(), String> {
    let r = ring(c);
    let da = r.degree(r.cap(), c.da);
    let db = r.degree(r.cap() - da, c.db);
    let a = r.element(da, &c.picks[..3]);
    let b = r.element(db, &c.picks[3..]);
    let s = sign(r.scenario.presentation().prime().value(), da % 2 == 1 && db % 2 == 1);
    same(&a.mul(&b).unwrap(), &b.mul(&a).unwrap().scale(s), &format!("{} commutativity", r.scenario.name))
}

pub const PROPERTIES: &[(&str, fn(&Case) -> Result<(), String>)] = &[
    ("leibniz", leibniz),
    ("anticommutation", anticommutation),
    ("nilpotence", nilpotence),
    ("normal-form", normal_form),
    ("graded-commutativity", graded_commutativity),
];
