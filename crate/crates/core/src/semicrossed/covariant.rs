use serde::Serialize;

use crate::dilation::{build_dilation_capped, DilationSpace, Model, SupportSet, DEFAULT_GRAM_CAP};
use crate::error::Result;
use crate::lattice::GroupElement;
use crate::linalg::{self, CMatrix, C64};
use crate::representation::Defect;
use crate::tolerance::Tolerances;

use super::system::CovariantPair;

/// `π` on a truncated dilation space, given by the images of the algebra basis.
#[derive(Debug, Clone)]
pub struct CovariantDilation {
    pair: CovariantPair,
    dilation: DilationSpace,
    pi: Vec<CMatrix>,
    defects: CovariantDefects,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovariantDefects {
    /// `max ‖π(B)E − Eσ(B)‖` for the embedding `E` of `H`.
    pub restriction: f64,
    /// `max ‖π(B)V_s − V_sπ(α_s(B))‖` over basis and generators.
    pub covariance: Defect,
    pub multiplicative: f64,
    pub adjoint: f64,
    pub unital: f64,
    /// `max ‖T_{t−s}σ(α_t(B)) − σ(α_s(B))T_{t−s}‖` over support pairs.
    pub intertwining: f64,
    /// `max ‖π(B)Q − QD_B‖`: whether `D_B` respects the Gram null space.
    pub well_defined: f64,
    pub tol: f64,
    pub passed: bool,
}

impl CovariantDilation {
    pub fn pair(&self) -> &CovariantPair {
        &self.pair
    }

    pub fn dilation(&self) -> &DilationSpace {
        &self.dilation
    }

    /// `π(B_k)` in quotient coordinates of `K_F`.
    pub fn pi_basis(&self) -> &[CMatrix] {
        &self.pi
    }

    pub fn defects(&self) -> &CovariantDefects {
        &self.defects
    }

    /// `π(A)` for an algebra element.
    pub fn pi(&self, a: &CMatrix) -> Result<CMatrix> {
        let coords = self.pair.system().algebra().coords(a)?;
        Ok(combine(&self.pi, &coords, self.dilation.rank()))
    }
}

fn combine(images: &[CMatrix], coords: &[C64], n: usize) -> CMatrix {
    images
        .iter()
        .zip(coords)
        .fold(linalg::zeros(n, n), |acc, (m, &z)| acc + m * z)
}

/// `blockdiag_t σ(α_t(B))` over the model support.
fn diagonal(pair: &CovariantPair, model: &Model, b: &CMatrix) -> Result<CMatrix> {
    let n = model.dim;
    let pts = model.support.elements();
    let mut d = linalg::zeros(pts.len() * n, pts.len() * n);
    for (k, t) in pts.iter().enumerate() {
        d.view_mut((k * n, k * n), (n, n)).copy_from(&pair.sigma_alpha(t, b)?);
    }
    Ok(d)
}

/// `π(B) = Q D_B Q⁺` for each basis element, plus `max ‖π(B)Q − QD_B‖`.
fn pi_on(pair: &CovariantPair, model: &Model) -> Result<(Vec<CMatrix>, f64)> {
    let mut out = Vec::new();
    let mut worst = 0.0f64;
    for b in pair.system().algebra().basis() {
        let qd = &model.factor * diagonal(pair, model, b)?;
        let pi = &qd * &model.factor_pinv;
        worst = worst.max(linalg::op_norm(&(&pi * &model.factor - qd)));
        out.push(pi);
    }
    Ok((out, worst))
}

pub fn dilate_covariant_pair(
    pair: &CovariantPair,
    support: &SupportSet,
    tolerances: &Tolerances,
) -> Result<CovariantDilation> {
    dilate_covariant_pair_capped(pair, support, tolerances, DEFAULT_GRAM_CAP)
}

pub fn dilate_covariant_pair_capped(
    pair: &CovariantPair,
    support: &SupportSet,
    tolerances: &Tolerances,
    gram_cap: usize,
) -> Result<CovariantDilation> {
    let dilation = build_dilation_capped(pair.rep(), support, tolerances, gram_cap)?;
    let model = dilation.model();
    let (pi, well_defined) = pi_on(pair, model)?;
    let algebra = pair.system().algebra();
    let rank = dilation.rank();
    let e = dilation.embedding();

    let mut restriction = 0.0f64;
    for (p, s) in pi.iter().zip(pair.sigma().images()) {
        restriction = restriction.max(linalg::op_norm(&(p * e - e * s)));
    }

    let mut multiplicative = 0.0f64;
    let mut adjoint = 0.0f64;
    for (bi, pi_i) in algebra.basis().iter().zip(&pi) {
        for (bj, pi_j) in algebra.basis().iter().zip(&pi) {
            let prod = combine(&pi, &algebra.coords(&(bi * bj))?, rank);
            multiplicative = multiplicative.max(linalg::op_norm(&(prod - pi_i * pi_j)));
        }
        let star = combine(&pi, &algebra.coords(&bi.adjoint())?, rank);
        adjoint = adjoint.max(linalg::op_norm(&(star - pi_i.adjoint())));
    }
    let unit = combine(&pi, &algebra.coords(&linalg::identity(algebra.d()))?, rank);
    let unital = linalg::op_norm(&(unit - linalg::identity(rank)));

    let mut intertwining = 0.0f64;
    let pts = support.elements();
    for s in pts {
        for t in pts {
            let tg = pair.rep().evaluate_at(&t.sub(s))?;
            for b in algebra.basis() {
                let lhs = &tg * pair.sigma_alpha(t, b)?;
                let rhs = pair.sigma_alpha(s, b)? * &tg;
                intertwining = intertwining.max(linalg::op_norm(&(lhs - rhs)));
            }
        }
    }

    let lattice = pair.rep().lattice();
    let mut covariance = Defect::default();
    for (i, factor) in lattice.factors().iter().enumerate() {
        for j in 0..factor.rank() {
            let s = lattice.generator(i, j);
            let d = covariance_defect(pair, &dilation, &pi, &s)?;
            covariance.record(d, &format!("{}.{j}", factor.label()), "basis");
        }
    }

    let tol = tolerances.tol;
    let passed = [restriction, covariance.defect, multiplicative, adjoint, unital, intertwining, well_defined]
        .iter()
        .all(|&d| d <= tol);
    let defects = CovariantDefects {
        restriction,
        covariance,
        multiplicative,
        adjoint,
        unital,
        intertwining,
        well_defined,
        tol,
        passed,
    };
    Ok(CovariantDilation {
        pair: pair.clone(),
        dilation,
        pi,
        defects,
    })
}

/// `max_B ‖π_Ω(B)V_s − V_sπ_F(α_s(B))‖` with `Ω = F ∪ (s + F)`.
fn covariance_defect(pair: &CovariantPair, dil: &DilationSpace, pi: &[CMatrix], s: &GroupElement) -> Result<f64> {
    let translated = dil.support().translated(s);
    let big = dil.extended_model(&translated)?;
    let v = big.columns(&translated)? * &dil.model().factor_pinv;
    let (pi_big, _) = pi_on(pair, &big)?;
    let algebra = pair.system().algebra();
    let mut worst = 0.0f64;
    for (b, p_big) in algebra.basis().iter().zip(&pi_big) {
        let moved = combine(pi, &algebra.coords(&pair.system().alpha(s, b)?)?, dil.rank());
        worst = worst.max(linalg::op_norm(&(p_big * &v - &v * moved)));
    }
    Ok(worst)
}
