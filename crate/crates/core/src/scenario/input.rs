//! Scenario file format.

use serde::{Deserialize, Serialize};

use crate::dilation::DEFAULT_GRAM_CAP;
use crate::error::{Error, Result};
use crate::lattice::{FactorKind, FactorSpec, GroupElement, Lattice, DEFAULT_GRID_CAP, DEFAULT_PRECISION_BITS};
use crate::linalg::{self, CMatrix};
use crate::schur::DEFAULT_SCHUR_CAP;
use crate::tolerance::Tolerances;

/// A matrix entry: a real number or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

/// Row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixSpec(pub Vec<Vec<Entry>>);

impl MatrixSpec {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let rows = self.0.len();
        let cols = self.0.first().map(Vec::len).unwrap_or(0);
        if rows == 0 || cols == 0 || self.0.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("matrix rows must be nonempty and of equal length".into()));
        }
        Ok(CMatrix::from_fn(rows, cols, |i, j| match self.0[i][j] {
            Entry::Real(x) => linalg::c(x, 0.0),
            Entry::Complex([re, im]) => linalg::c(re, im),
        }))
    }
}

/// Group element coefficients, either per factor (`[[1], [0, 2]]`) or flat
/// in factor order (`[1, 0, 2]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeffs {
    Nested(Vec<Vec<i64>>),
    Flat(Vec<i64>),
}

impl Coeffs {
    pub fn resolve(&self, lattice: &Lattice) -> Result<GroupElement> {
        match self {
            Coeffs::Nested(c) => lattice.element(c.clone()),
            Coeffs::Flat(c) => lattice.element_from_flat(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorInput {
    pub kind: FactorKind,
    #[serde(default)]
    pub label: Option<String>,
    /// Exact strings (`"3"`, `"1/2"`) or decimals; defaults to `["1"]`.
    #[serde(default)]
    pub generators: Option<Vec<String>>,
}

impl FactorInput {
    pub fn resolve(&self, index: usize) -> Result<FactorSpec> {
        let label = self.label.clone().unwrap_or_else(|| format!("f{index}"));
        let gens: Vec<&str> = match &self.generators {
            Some(g) => g.iter().map(String::as_str).collect(),
            None => vec!["1"],
        };
        FactorSpec::new(self.kind, label, &gens)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum RepresentationInput {
    /// `legs[i][j]` acts on tensor leg `i`.
    Tensor { legs: Vec<Vec<MatrixSpec>> },
    /// `generators[i][j]` acts on the whole space.
    Direct { generators: Vec<Vec<MatrixSpec>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SigmaInput {
    Identity,
    Amplify { multiplicity: usize },
    Explicit { images: Vec<MatrixSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemInput {
    pub d: usize,
    /// Algebra basis; the full matrix algebra when absent.
    #[serde(default)]
    pub basis: Option<Vec<MatrixSpec>>,
    /// `action[i][j]` implements generator `j` of factor `i`; identity when
    /// absent.
    #[serde(default)]
    pub action: Option<Vec<Vec<MatrixSpec>>>,
    /// Representation of the algebra on the representation's space.
    #[serde(default)]
    pub sigma: Option<SigmaInput>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub gram: usize,
    pub grid: usize,
    pub schur: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            gram: DEFAULT_GRAM_CAP,
            grid: DEFAULT_GRID_CAP,
            schur: DEFAULT_SCHUR_CAP,
        }
    }
}

/// Either explicit points or a coefficient grid of the given depth.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SupportInput {
    pub points: Option<Vec<Coeffs>>,
    pub depth: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermInput {
    pub s: Coeffs,
    pub a: MatrixSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyCheck {
    Isometry,
    Regularity,
    Nica,
    Uniqueness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NicaQuad {
    pub s: Coeffs,
    pub t: Coeffs,
    pub mu: Coeffs,
    pub nu: Coeffs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskInput {
    /// Contractivity, commutation and double commutation of the generators,
    /// plus system and covariance checks when a system is declared.
    Validate {
        #[serde(default)]
        name: Option<String>,
    },
    KernelCheck {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        support: SupportInput,
        #[serde(default)]
        factorization: bool,
    },
    Dilate {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        support: SupportInput,
    },
    Verify {
        #[serde(default)]
        name: Option<String>,
        check: VerifyCheck,
        #[serde(default)]
        support: SupportInput,
        /// Shifts for `isometry`, group elements for `regularity`.
        #[serde(default)]
        elements: Option<Vec<Coeffs>>,
        #[serde(default)]
        quads: Option<Vec<NicaQuad>>,
        /// Depth of the second support for `uniqueness`.
        #[serde(default)]
        second_depth: Option<u32>,
    },
    SchurCheck {
        #[serde(default)]
        name: Option<String>,
        #[serde(default = "default_cases")]
        cases: usize,
        #[serde(default = "default_m")]
        m: usize,
        #[serde(default = "default_leg")]
        left_dim: usize,
        #[serde(default = "default_leg")]
        right_dim: usize,
        #[serde(default)]
        psd: bool,
    },
    Induced {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        support: SupportInput,
        #[serde(default)]
        sigma0: Option<SigmaInput>,
    },
    CovariantDilate {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        support: SupportInput,
    },
    NormEstimate {
        #[serde(default)]
        name: Option<String>,
        polynomial: Vec<TermInput>,
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default = "default_leg")]
        max_leg_dim: usize,
        #[serde(default)]
        support_depth: Option<u32>,
        #[serde(default = "default_attempts")]
        max_attempts: usize,
        /// Pass threshold on `|iso_sup − contractive_sup| / iso_sup`.
        #[serde(default)]
        max_relative_gap: Option<f64>,
    },
    Gauge {
        #[serde(default)]
        name: Option<String>,
        polynomial: Vec<TermInput>,
        #[serde(default)]
        characters: Option<Vec<Vec<Vec<f64>>>>,
        #[serde(default)]
        random_characters: usize,
        /// Sampled pairs checked besides the declared one.
        #[serde(default)]
        samples: usize,
        #[serde(default = "default_leg")]
        max_leg_dim: usize,
        #[serde(default = "default_gauge_tol")]
        tolerance: f64,
    },
}

fn default_cases() -> usize {
    10
}
fn default_m() -> usize {
    3
}
fn default_leg() -> usize {
    2
}
fn default_samples() -> usize {
    50
}
fn default_attempts() -> usize {
    20
}
fn default_gauge_tol() -> f64 {
    1e-10
}

impl TaskInput {
    pub fn kind(&self) -> &'static str {
        match self {
            TaskInput::Validate { .. } => "validate",
            TaskInput::KernelCheck { .. } => "kernel_check",
            TaskInput::Dilate { .. } => "dilate",
            TaskInput::Verify { .. } => "verify",
            TaskInput::SchurCheck { .. } => "schur_check",
            TaskInput::Induced { .. } => "induced",
            TaskInput::CovariantDilate { .. } => "covariant_dilate",
            TaskInput::NormEstimate { .. } => "norm_estimate",
            TaskInput::Gauge { .. } => "gauge",
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            TaskInput::Validate { name }
            | TaskInput::KernelCheck { name, .. }
            | TaskInput::Dilate { name, .. }
            | TaskInput::Verify { name, .. }
            | TaskInput::SchurCheck { name, .. }
            | TaskInput::Induced { name, .. }
            | TaskInput::CovariantDilate { name, .. }
            | TaskInput::NormEstimate { name, .. }
            | TaskInput::Gauge { name, .. } => name.as_deref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    pub factors: Vec<FactorInput>,
    #[serde(default)]
    pub representation: Option<RepresentationInput>,
    #[serde(default)]
    pub system: Option<SystemInput>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Default grid depth for tasks without their own support.
    #[serde(default = "default_depth")]
    pub depth: u32,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_precision")]
    pub precision_bits: u32,
    #[serde(default)]
    pub tasks: Vec<TaskInput>,
}

fn default_depth() -> u32 {
    2
}
fn default_precision() -> u32 {
    DEFAULT_PRECISION_BITS
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn lattice(&self) -> Result<Lattice> {
        let factors = self
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| f.resolve(i))
            .collect::<Result<Vec<_>>>()?;
        Lattice::with_precision(factors, self.precision_bits)
    }
}
