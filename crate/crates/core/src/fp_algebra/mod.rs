//! Finitely presented graded-commutative algebras over `F_p`.

pub mod element;
pub mod hilbert;
pub mod linalg;
pub mod monomial;
pub mod morphism;
pub mod parse;
pub mod presentation;
pub mod prime;

pub use element::{Element, Poly};
pub use hilbert::{convolution, hilbert_series, regular_sequence_check, RegularityVerdict};
pub use monomial::Monomial;
pub use morphism::{apply_morphism, AlgebraMorphism};
pub use presentation::{GradedPresentation, Generator, Parity, PresentationBuilder};
pub use prime::Prime;
