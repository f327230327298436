//! Finite-truncation construction and verification of minimal isometric
//! Nica-covariant dilations of contractive representations of
//! `S = ⊕ S_i ⊂ ⊕ ℝ₊`, and of covariant pairs over semigroup dynamical
//! systems on matrix algebras.

pub mod dilation;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod representation;
pub mod scenario;
pub mod schur;
pub mod semicrossed;
pub mod tolerance;

pub use error::{Error, Result};
pub use lattice::{FactorKind, FactorSpec, GridSet, GroupElement, Lattice};
pub use representation::NicaRep;
pub use tolerance::Tolerances;
