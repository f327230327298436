use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dilation::SupportSet;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, DEFAULT_GRID_CAP};
use crate::linalg::{self, CMatrix, C64};
use crate::representation::NicaRep;
use crate::tolerance::Tolerances;

use super::covariant::dilate_covariant_pair;
use super::polynomial::{eval_dilated, eval_polynomial, Polynomial};
use super::system::{CovariantPair, DynSystem, StarRep};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub seed: u64,
    pub samples: usize,
    /// Largest tensor-leg dimension per factor.
    pub max_leg_dim: usize,
    /// Grid depth of the dilation support used for each sample.
    pub support_depth: u32,
    /// Rejected draws allowed per sample before giving up.
    pub max_attempts: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            samples: 100,
            max_leg_dim: 2,
            support_depth: 2,
            max_attempts: 20,
        }
    }
}

/// Random contractive tensor legs: one Haar eigenbasis per factor, each
/// generator a scaled unitary diagonal in it (so a factor's generators
/// commute). Single-generator factors get a plain scaled Haar unitary.
pub fn random_tensor_legs<R: Rng + ?Sized>(lattice: &Lattice, leg_dims: &[usize], rng: &mut R) -> Vec<Vec<CMatrix>> {
    lattice
        .shape()
        .iter()
        .zip(leg_dims)
        .map(|(&m, &n)| {
            if m == 1 {
                let r: f64 = rng.random_range(0.0..=1.0);
                return vec![linalg::scaled_unitary(rng, n, r)];
            }
            let w = linalg::haar_unitary(rng, n);
            (0..m)
                .map(|_| {
                    let r: f64 = rng.random_range(0.0..=1.0);
                    let d = CMatrix::from_fn(n, n, |i, j| {
                        if i == j {
                            C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
                        } else {
                            linalg::ZERO
                        }
                    });
                    &w * d * w.adjoint()
                })
                .collect()
        })
        .collect()
}

/// A covariant pair on `ℂ^d ⊗ ℂ^m` with `σ(A) = A ⊗ I` and
/// `T_gen = u_gen* ⊗ Y_gen` for random contractive legs `Y`.
pub fn sample_pair<R: Rng + ?Sized>(system: &DynSystem, max_leg_dim: usize, rng: &mut R) -> Result<CovariantPair> {
    let lattice = system.lattice();
    let leg_dims: Vec<usize> = (0..lattice.num_factors())
        .map(|_| rng.random_range(1..=max_leg_dim.max(1)))
        .collect();
    let legs = random_tensor_legs(lattice, &leg_dims, rng);
    let inner = NicaRep::tensor(lattice, legs, system.tol())?;
    let m = inner.dim();
    let generators = system
        .unitaries()
        .iter()
        .enumerate()
        .map(|(i, group)| {
            group
                .iter()
                .enumerate()
                .map(|(j, u)| linalg::kron(&u.adjoint(), &inner.generator_matrix(i, j)))
                .collect()
        })
        .collect();
    let rep = NicaRep::direct(lattice, generators, system.tol())?;
    CovariantPair::new(system.clone(), StarRep::amplified(system.algebra(), m), rep)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleValue {
    /// `‖(σ × T)(p)‖`.
    pub contractive: f64,
    /// `‖(π × V)(p)‖` on the truncated dilation.
    pub isometric: f64,
    pub compression_defect: f64,
    pub attempts: usize,
}

/// Running sups are lower bounds on the universal norms, not the norms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub seed: u64,
    pub samples: usize,
    pub attempts: usize,
    pub contractive_sup: f64,
    pub isometric_sup: f64,
    /// `min (‖(π × V)(p)‖ − ‖(σ × T)(p)‖)` over samples.
    pub dilation_gap: f64,
    pub max_compression_defect: f64,
    pub per_sample: Vec<SampleValue>,
}

impl NormEstimate {
    /// Every sample satisfies `‖(σ × T)(p)‖ ≤ ‖(π × V)(p)‖ + tol`.
    pub fn inequality_holds(&self, tol: f64) -> bool {
        self.dilation_gap >= -tol
    }

    /// `|isometric_sup − contractive_sup| / isometric_sup`.
    pub fn relative_gap(&self) -> f64 {
        if self.isometric_sup == 0.0 {
            0.0
        } else {
            (self.isometric_sup - self.contractive_sup).abs() / self.isometric_sup
        }
    }
}

fn sample_stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn one_sample(
    system: &DynSystem,
    p: &Polynomial,
    config: &SamplerConfig,
    support: &SupportSet,
    tolerances: &Tolerances,
    index: usize,
) -> Result<SampleValue> {
    let mut rng = sample_stream(config.seed, index);
    for attempt in 1..=config.max_attempts.max(1) {
        let pair = match sample_pair(system, config.max_leg_dim, &mut rng) {
            Ok(pair) => pair,
            Err(Error::NonCommuting(_)) | Err(Error::NormExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        if !pair.validate()?.passed {
            continue;
        }
        let contractive = linalg::op_norm(&eval_polynomial(&pair, p)?);
        let cd = dilate_covariant_pair(&pair, support, tolerances)?;
        let dilated = eval_dilated(&cd, p)?;
        return Ok(SampleValue {
            contractive,
            isometric: dilated.norm,
            compression_defect: dilated.compression_defect,
            attempts: attempt,
        });
    }
    Err(Error::SamplerExhausted {
        attempts: config.max_attempts,
        accepted: index,
    })
}

/// Samples covariant pairs, evaluates `p` on each and on its dilation.
/// Samples are independent streams of one seed, so the result does not
/// depend on scheduling.
pub fn estimate_norms(
    system: &DynSystem,
    p: &Polynomial,
    config: &SamplerConfig,
    tolerances: &Tolerances,
) -> Result<NormEstimate> {
    let lattice = system.lattice();
    let support = SupportSet::new(
        lattice,
        lattice.enumerate_grid(config.support_depth, DEFAULT_GRID_CAP)?.into_elements(),
    )?;
    let per_sample = (0..config.samples)
        .into_par_iter()
        .map(|k| one_sample(system, p, config, &support, tolerances, k))
        .collect::<Result<Vec<_>>>()?;
    let contractive_sup = per_sample.iter().map(|s| s.contractive).fold(0.0, f64::max);
    let isometric_sup = per_sample.iter().map(|s| s.isometric).fold(0.0, f64::max);
    let dilation_gap = per_sample
        .iter()
        .map(|s| s.isometric - s.contractive)
        .fold(f64::INFINITY, f64::min);
    Ok(NormEstimate {
        seed: config.seed,
        samples: per_sample.len(),
        attempts: per_sample.iter().map(|s| s.attempts).sum(),
        contractive_sup,
        isometric_sup,
        dilation_gap: if per_sample.is_empty() { 0.0 } else { dilation_gap },
        max_compression_defect: per_sample.iter().map(|s| s.compression_defect).fold(0.0, f64::max),
        per_sample,
    })
}
