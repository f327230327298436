use std::f64::consts::TAU;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{GroupElement, Lattice};
use crate::linalg::{self, CMatrix, C64};

use super::covariant::CovariantDilation;
use super::system::{CovariantPair, DynSystem};

/// `Σ 𝒱_{s_i} A_{s_i}` with distinct monoid elements `s_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    terms: Vec<(GroupElement, CMatrix)>,
}

impl Polynomial {
    pub fn new(system: &DynSystem, terms: Vec<(GroupElement, CMatrix)>) -> Result<Self> {
        let shape = system.lattice().shape();
        for (k, (s, a)) in terms.iter().enumerate() {
            if s.shape() != shape {
                return Err(Error::ShapeMismatch(format!("term {s} does not match the factor shape")));
            }
            if !s.in_monoid() {
                return Err(Error::NotInMonoid(format!("polynomial term {s}")));
            }
            if terms[..k].iter().any(|(t, _)| t == s) {
                return Err(Error::InvalidArgument(format!("polynomial term {s} appears twice")));
            }
            system.algebra().coords(a)?;
        }
        Ok(Polynomial { terms })
    }

    pub fn terms(&self) -> &[(GroupElement, CMatrix)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `(σ × T)(p) = Σ T_{s_i} σ(A_{s_i})`.
pub fn eval_polynomial(pair: &CovariantPair, p: &Polynomial) -> Result<CMatrix> {
    let n = pair.rep().dim();
    let algebra = pair.system().algebra();
    let mut out = linalg::zeros(n, n);
    for (s, a) in p.terms() {
        out += pair.rep().evaluate_monoid(s)? * pair.sigma().apply(algebra, a)?;
    }
    Ok(out)
}

/// `(π × V)(p)` from `K_F` into `K_Ω`, `Ω = F ∪ ⋃ (s_i + F)`.
#[derive(Debug, Clone)]
pub struct DilatedValue {
    pub matrix: CMatrix,
    pub norm: f64,
    /// `‖E_Ω* X E_F − (σ × T)(p)‖`.
    pub compression_defect: f64,
}

pub fn eval_dilated(cd: &CovariantDilation, p: &Polynomial) -> Result<DilatedValue> {
    let dil = cd.dilation();
    let lattice = dil.rep().lattice();
    let mut extra = Vec::new();
    for (s, _) in p.terms() {
        extra.extend(dil.support().translated(s));
    }
    let big = dil.extended_model(&extra)?;
    let pinv = &dil.model().factor_pinv;
    let mut x = linalg::zeros(big.rank(), dil.rank());
    for (s, a) in p.terms() {
        let v = big.columns(&dil.support().translated(s))? * pinv;
        x += v * cd.pi(a)?;
    }
    let zero = lattice.zero();
    let compressed = big.embedding(&zero)?.adjoint() * &x * dil.embedding();
    let direct = eval_polynomial(cd.pair(), p)?;
    Ok(DilatedValue {
        norm: linalg::op_norm(&x),
        compression_defect: linalg::op_norm(&(compressed - direct)),
        matrix: x,
    })
}

/// `γ(s) = exp(i⟨θ, coeffs(s)⟩)`; `theta[i][j]` belongs to generator `j`
/// of factor `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Character {
    pub theta: Vec<Vec<f64>>,
}

impl Character {
    pub fn new(lattice: &Lattice, theta: Vec<Vec<f64>>) -> Result<Self> {
        if theta.iter().map(Vec::len).collect::<Vec<_>>() != lattice.shape() {
            return Err(Error::ShapeMismatch("character phases do not match the factor shape".into()));
        }
        Ok(Character { theta })
    }

    pub fn trivial(lattice: &Lattice) -> Self {
        Character {
            theta: lattice.shape().iter().map(|&m| vec![0.0; m]).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(lattice: &Lattice, rng: &mut R) -> Self {
        Character {
            theta: lattice
                .shape()
                .iter()
                .map(|&m| (0..m).map(|_| rng.random_range(0.0..TAU)).collect())
                .collect(),
        }
    }

    pub fn value(&self, s: &GroupElement) -> C64 {
        let phase: f64 = self
            .theta
            .iter()
            .zip(s.coeffs())
            .flat_map(|(t, c)| t.iter().zip(c).map(|(&a, &b)| a * b as f64))
            .sum();
        C64::from_polar(1.0, phase)
    }
}

/// `τ_γ(p) = Σ γ(s_i) 𝒱_{s_i} A_{s_i}`.
pub fn gauge_transform(p: &Polynomial, gamma: &Character) -> Result<Polynomial> {
    let mut terms = Vec::with_capacity(p.len());
    for (s, a) in p.terms() {
        let g = gamma.value(s);
        if (g.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("character value at {s} has modulus {}", g.norm())));
        }
        terms.push((s.clone(), a * g));
    }
    Ok(Polynomial { terms })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaugeCheck {
    /// `‖(σ × T)(τ_γ p)‖`.
    pub transformed: f64,
    /// `‖(σ × γ·T)(p)‖`.
    pub rotated: f64,
    pub defect: f64,
}

pub fn gauge_check(pair: &CovariantPair, p: &Polynomial, gamma: &Character) -> Result<GaugeCheck> {
    let transformed = linalg::op_norm(&eval_polynomial(pair, &gauge_transform(p, gamma)?)?);
    let rotated_pair = pair.with_rep(pair.rep().with_phases(&gamma.theta)?)?;
    let rotated = linalg::op_norm(&eval_polynomial(&rotated_pair, p)?);
    Ok(GaugeCheck {
        transformed,
        rotated,
        defect: (transformed - rotated).abs(),
    })
}
