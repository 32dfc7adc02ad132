//! Exact Milnor-operation computations on presented mod-`p` cohomology rings
//! and on motivic rings of real quadrics, producing machine-checkable
//! coniveau certificates.

pub mod certificates;
pub mod char_classes;
pub mod error;
pub mod fp_algebra;
pub mod milnor;
pub mod motivic;

pub use error::{Error, Result};
