//! Scenario registry and the detection procedures built on the Milnor
//! operations: `Q_I`-nonvanishing certificates, DH tables, stable quotients
//! and reciprocity flags.

pub mod detect;
pub mod groups;
pub mod pgl;
pub mod registry;
pub mod report;
pub mod scenario;
pub mod scenario_file;
pub mod tables;

pub use detect::{
    detect, find_witness, in_integral_chern_ideal, reciprocity_flags, witness_length,
    witness_sequences, Certificate, TrailStep, Verdict,
};
pub use groups::{
    elementary_abelian, elementary_presentation, extraspecial_d, extraspecial_e, extraspecial_e4,
    g2, quillen_d_ring, simply_connected, so_odd, spin_sw_degrees, E4Page, QuillenRing,
};
pub use pgl::{pgl_detect, QModuleScenario};
pub use registry::{
    build_module, build_scenario, builtin_scenarios, canonical_family, Registry, ScenarioParams,
};
pub use report::{Markdown, Report, SCHEMA_VERSION};
pub use scenario::{Candidate, Excluded, Restriction, Scenario};
pub use scenario_file::parse_scenario_file;
pub use tables::{dh_table, stable_quotient, DhRow, DhTable, StableQuotient};
