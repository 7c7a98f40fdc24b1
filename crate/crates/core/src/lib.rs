//! Exact computation in diagram groups over semigroup presentations.
//!
//! The crate models plane diagrams over a semigroup presentation as
//! derivations in canonical form and builds on that a toolkit for the groups
//! they form: dipole reduction, sum decomposition, Thompson's group `F` in
//! its normal-form and piecewise-linear guises, an abelianization map whose
//! kernel picks out derived subgroups, Squier complexes with fundamental
//! group presentations, and constructions of wreath-product and distorted
//! subgroups inside these groups.

pub mod abelian;
pub mod diagram;
pub mod dyadic;
pub mod pl;
pub mod presentation;
pub mod sampling;
pub mod squier;
pub mod subgroup;
pub mod thompson;
pub mod wreath;

pub use diagram::{Diagram, DiagramError, LabelMorphism, SumDecomposition};
pub use presentation::{
    words_equal_bounded, Derivation, EqualityVerdict, Letter, Presentation, PresentationError,
    SearchLimits, Step, Word,
};
pub use abelian::{AbelianError, AbelianVector, MikhailovaInput, MonoidOracle};
pub use dyadic::{Dyadic, DyadicParseError};
pub use pl::{DyadicPL, HalflinePL, PlError, WitnessOutcome};
pub use squier::{BuilderKind, GroupPresentationOut, SquierComplex, SquierError};
pub use subgroup::{DistortionTable, GroupOps, Side, SubgroupError, ZwrZReport, ZwrZWitness};
pub use thompson::{NormalForm, ThompsonError};
pub use wreath::{WreathElement, WreathError};
