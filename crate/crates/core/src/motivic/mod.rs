//! Motivic cohomology of real quadrics: the Laurent ring of the Rost motive,
//! `N^1` obstructions, integral étale rings and `τ`-quotients.

pub mod bigraded;
pub mod etale;
pub mod laurent;

pub use bigraded::{bigraded_scenario, tau_quotient_kernel, BigradedRing, TauQuotient};
pub use etale::{
    decomposition_ranks, dh_quadric_check, quadric_etale_ring, rost_etale_ring, RankRecord,
    unramified_quotient_quadric, EtaleClass, EtaleRing, QuadricDhCertificate, QuadricVerdict,
    UnramifiedQuotient,
};
pub use laurent::{
    laurent_mul, laurent_q0, n1_membership, rost_membership, LaurentElement, N1Obstruction,
    N1Verdict, RostBasis,
};
