//! Semigroup dynamical systems over matrix algebras and their covariant
//! pairs, dilations, induced pairs and polynomial norms.

mod covariant;
mod induced;
mod polynomial;
mod sampler;
mod system;

pub use covariant::{dilate_covariant_pair, dilate_covariant_pair_capped, CovariantDefects, CovariantDilation};
pub use induced::{induced_representation, InducedPair, InducedReport};
pub use polynomial::{eval_dilated, eval_polynomial, gauge_check, gauge_transform, Character, DilatedValue, GaugeCheck, Polynomial};
pub use sampler::{estimate_norms, random_tensor_legs, sample_pair, NormEstimate, SampleValue, SamplerConfig};
pub use system::{Algebra, CovarianceReport, CovariantPair, DynSystem, StarRep, SystemReport};
