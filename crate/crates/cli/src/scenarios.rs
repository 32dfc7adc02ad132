//! Scenario lookup: user scenario files first, then the built-in families.

use std::fs;
use std::path::{Path, PathBuf};

use coniveau::certificates::{
    build_module, build_scenario, builtin_scenarios, parse_scenario_file, registry, QModuleScenario,
    Scenario, ScenarioParams,
};
use coniveau::{Error, Result};

pub const SCENARIO_EXTENSION: &str = "scenario";

pub enum Target {
    Ring(Scenario),
    Module(QModuleScenario),
}

impl Target {
    pub fn name(&self) -> &str {
        match self {
            Target::Ring(s) => &s.name,
            Target::Module(m) => &m.name,
        }
    }

    pub fn content_hash(&self) -> String {
        match self {
            Target::Ring(s) => s.content_hash(),
            Target::Module(m) => m.content_hash(),
        }
    }
}

/// Scenarios parsed from explicit files and from every `*.scenario` file in
/// the search path.
#[derive(Default)]
pub struct UserScenarios {
    pub scenarios: Vec<(PathBuf, Scenario)>,
}

fn load_file(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|e| {
        Error::InvalidPresentation(format!("cannot read {}: {e}", path.display()))
    })?;
    parse_scenario_file(&text)
}

impl UserScenarios {
    pub fn load(files: &[PathBuf], search_path: Option<&str>) -> Result<Self> {
        let mut out = UserScenarios::default();
        for f in files {
            out.scenarios.push((f.clone(), load_file(f)?));
        }
        if let Some(sp) = search_path {
            for dir in std::env::split_paths(sp) {
                let Ok(entries) = fs::read_dir(&dir) else { continue };
                let mut paths: Vec<PathBuf> = entries
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().is_some_and(|x| x == SCENARIO_EXTENSION))
                    .collect();
                paths.sort();
                for p in paths {
                    out.scenarios.push((p.clone(), load_file(&p)?));
                }
            }
        }
        Ok(out)
    }

    fn find(&self, name: &str) -> Option<&Scenario> {
        self.scenarios.iter().map(|(_, s)| s).find(|s| s.name == name)
    }
}

/// Resolves a scenario name: a user scenario, a registered built-in name
/// such as `g2` or `so_odd(m=2)`, or a family name with parameters.
pub fn resolve(name: &str, params: ScenarioParams, user: &UserScenarios) -> Result<Target> {
    if let Some(s) = user.find(name) {
        if params.cap.is_some_and(|c| c > s.cap()) {
            return Err(Error::OutOfRange(format!(
                "cap {} exceeds the maximum {} for {name}",
                params.cap.unwrap(),
                s.cap()
            )));
        }
        return Ok(Target::Ring(s.clone()));
    }
    if name.contains('(') {
        let reg = builtin_scenarios()?;
        if let Some(s) = reg.get(name) {
            return Ok(Target::Ring(s.clone()));
        }
        if let Some(m) = reg.module(name) {
            return Ok(Target::Module(m.clone()));
        }
        return Err(Error::UnknownScenario(name.to_string()));
    }
    match registry::canonical_family(name) {
        Some("pgl") => Ok(Target::Module(build_module("pgl", params)?)),
        Some(family) => Ok(Target::Ring(build_scenario(family, params)?)),
        None => Err(Error::UnknownScenario(name.to_string())),
    }
}
