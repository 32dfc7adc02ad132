use std::collections::BTreeMap;

use super::groups::{
    elementary_abelian, extraspecial_d, extraspecial_e, g2, simply_connected, so_odd,
};
use super::pgl::QModuleScenario;
use super::scenario::Scenario;
use crate::error::{Error, Result};

/// Parameters selecting a member of a scenario family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScenarioParams {
    pub p: Option<u32>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub cap: Option<u32>,
}

/// Family names accepted by [`build_scenario`], with their aliases.
pub const FAMILIES: &[(&str, &[&str])] = &[
    ("elementary_abelian", &["elementary"]),
    ("so_odd", &["so"]),
    ("g2", &[]),
    ("simply_connected", &["spin7"]),
    ("extraspecial_e", &["extraspecial"]),
    ("extraspecial_d", &[]),
    ("pgl", &[]),
];

pub fn canonical_family(name: &str) -> Option<&'static str> {
    FAMILIES
        .iter()
        .find(|(f, aliases)| *f == name || aliases.contains(&name))
        .map(|(f, _)| *f)
}

/// Which of `p`, `n`, `m` a family takes.
fn accepted(family: &str) -> (bool, bool, bool) {
    match family {
        "elementary_abelian" | "extraspecial_e" => (true, true, false),
        "so_odd" => (false, false, true),
        "simply_connected" | "pgl" => (true, false, false),
        "extraspecial_d" => (false, true, false),
        _ => (false, false, false),
    }
}

fn reject_unused(family: &str, params: ScenarioParams) -> Result<()> {
    let (p, n, m) = accepted(family);
    for (given, ok, flag) in [(params.p.is_some(), p, "p"), (params.n.is_some(), n, "n"), (params.m.is_some(), m, "m")] {
        if given && !ok {
            return Err(Error::OutOfRange(format!("{family} takes no parameter `{flag}`")));
        }
    }
    Ok(())
}

fn build_raw(family: &str, params: ScenarioParams, cap: Option<u32>) -> Result<Scenario> {
    match family {
        "elementary_abelian" => elementary_abelian(params.p.unwrap_or(2), params.n.unwrap_or(3), cap),
        "so_odd" => so_odd(params.m.unwrap_or(1), cap),
        "g2" => g2(cap),
        "simply_connected" => simply_connected(params.p.unwrap_or(2), cap),
        "extraspecial_e" => extraspecial_e(params.n.unwrap_or(2), params.p.unwrap_or(3), cap),
        "extraspecial_d" => extraspecial_d(params.n.unwrap_or(2), cap),
        "pgl" => Err(Error::Unsupported("pgl is a Q-module scenario; use build_module".into())),
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

/// Builds and validates one scenario. A cap override may only lower the
/// family's default cap.
pub fn build_scenario(name: &str, params: ScenarioParams) -> Result<Scenario> {
    let family = canonical_family(name).ok_or_else(|| Error::UnknownScenario(name.to_string()))?;
    reject_unused(family, params)?;
    let default = build_raw(family, params, None)?;
    let s = match params.cap {
        Some(c) if c > default.cap() => {
            return Err(Error::OutOfRange(format!(
                "cap {c} exceeds the maximum {} for {}",
                default.cap(),
                default.name
            )))
        }
        Some(c) if c != default.cap() => build_raw(family, params, Some(c))?,
        _ => default,
    };
    check(&s)?;
    Ok(s)
}

pub fn build_module(name: &str, params: ScenarioParams) -> Result<QModuleScenario> {
    if canonical_family(name) != Some("pgl") {
        return Err(Error::UnknownScenario(name.to_string()));
    }
    reject_unused("pgl", params)?;
    if params.cap.is_some() {
        return Err(Error::OutOfRange("pgl has no degree cap to override".into()));
    }
    let m = QModuleScenario::pgl(params.p.unwrap_or(3))?;
    if !m.validate() {
        return Err(Error::InvalidQAction(format!("{} violates the label axioms", m.name)));
    }
    Ok(m)
}

fn check(s: &Scenario) -> Result<()> {
    let v = s.validate();
    if v.valid {
        Ok(())
    } else {
        Err(Error::InvalidQAction(format!(
            "{}: {}",
            s.name,
            v.counterexample.unwrap_or_default()
        )))
    }
}

/// Immutable collection of validated scenarios, keyed by name.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    scenarios: BTreeMap<String, Scenario>,
    modules: BTreeMap<String, QModuleScenario>,
}

impl Registry {
    /// Registers a scenario after validation.
    pub fn insert(&mut self, s: Scenario) -> Result<()> {
        check(&s)?;
        self.scenarios.insert(s.name.clone(), s);
        Ok(())
    }

    pub fn insert_module(&mut self, m: QModuleScenario) {
        self.modules.insert(m.name.clone(), m);
    }

    pub fn get(&self, name: &str) -> Option<&Scenario> {
        self.scenarios.get(name)
    }

    pub fn module(&self, name: &str) -> Option<&QModuleScenario> {
        self.modules.get(name)
    }

    pub fn scenarios(&self) -> impl Iterator<Item = &Scenario> {
        self.scenarios.values()
    }

    pub fn modules(&self) -> impl Iterator<Item = &QModuleScenario> {
        self.modules.values()
    }

    pub fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.scenarios.keys().chain(self.modules.keys()).cloned().collect();
        names.sort();
        names
    }
}

/// Every built-in scenario at its default parameters.
pub fn builtin_scenarios() -> Result<Registry> {
    let mut r = Registry::default();
    for (p, n) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)] {
        r.insert(elementary_abelian(p, n, None)?)?;
    }
    for m in [1, 2] {
        r.insert(so_odd(m, None)?)?;
    }
    r.insert(g2(None)?)?;
    for p in [2, 3, 5] {
        r.insert(simply_connected(p, None)?)?;
    }
    for n in [2, 3] {
        r.insert(extraspecial_e(n, 3, None)?)?;
        r.insert(extraspecial_d(n, None)?)?;
    }
    for p in [3, 5] {
        r.insert_module(QModuleScenario::pgl(p)?);
    }
    Ok(r)
}
