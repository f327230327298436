use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{GroupElement, Lattice};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::representation::{Defect, NicaRep, ValidationReport};

/// A unital *-subalgebra of `M_d` given by a linear basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Algebra {
    d: usize,
    basis: Vec<CMatrix>,
    full: bool,
    /// Pseudo-inverse of the `d² × m` matrix of vectorized basis elements.
    solver: CMatrix,
    tol: f64,
}

fn vectorize(a: &CMatrix) -> CVector {
    CVector::from_iterator(a.len(), a.iter().cloned())
}

impl Algebra {
    /// `M_d` with the matrix-unit basis `E_ij`, row-major.
    pub fn full(d: usize) -> Self {
        let basis: Vec<CMatrix> = (0..d * d)
            .map(|k| {
                let mut e = linalg::zeros(d, d);
                e[(k / d, k % d)] = linalg::ONE;
                e
            })
            .collect();
        let solver = Self::solver_for(d, &basis);
        Algebra {
            d,
            basis,
            full: true,
            solver,
            tol: 1e-9,
        }
    }

    pub fn from_basis(d: usize, basis: Vec<CMatrix>, tol: f64) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::InvalidArgument("algebra basis is empty".into()));
        }
        for b in &basis {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::ShapeMismatch(format!(
                    "basis element is {}x{}, expected {d}x{d}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        let stacked = CMatrix::from_columns(&basis.iter().map(vectorize).collect::<Vec<_>>());
        let rank = stacked.clone().svd(false, false).rank(1e-10);
        if rank != basis.len() {
            return Err(Error::InvalidArgument(format!(
                "algebra basis of {} elements has rank {rank}",
                basis.len()
            )));
        }
        let solver = Self::solver_for(d, &basis);
        let algebra = Algebra {
            d,
            basis,
            full: false,
            solver,
            tol,
        };
        algebra.coords(&linalg::identity(d))?;
        Ok(algebra)
    }

    fn solver_for(d: usize, basis: &[CMatrix]) -> CMatrix {
        let _ = d;
        let stacked = CMatrix::from_columns(&basis.iter().map(vectorize).collect::<Vec<_>>());
        linalg::pinv(&stacked, 1e-12)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    /// Basis coordinates of `a`, or `NotInAlgebra` when `a` is outside the span.
    pub fn coords(&self, a: &CMatrix) -> Result<Vec<C64>> {
        if a.nrows() != self.d || a.ncols() != self.d {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix in an algebra of {}x{} matrices",
                a.nrows(),
                a.ncols(),
                self.d,
                self.d
            )));
        }
        if self.full {
            return Ok((0..self.d * self.d).map(|k| a[(k / self.d, k % self.d)]).collect());
        }
        let v = vectorize(a);
        let c = &self.solver * &v;
        let back = CMatrix::from_columns(&self.basis.iter().map(vectorize).collect::<Vec<_>>()) * &c;
        let residual = (back - v).norm();
        if residual > self.tol * (1.0 + a.norm()) {
            return Err(Error::NotInAlgebra { residual });
        }
        Ok(c.iter().cloned().collect())
    }

    pub fn from_coords(&self, coords: &[C64]) -> CMatrix {
        self.basis
            .iter()
            .zip(coords)
            .fold(linalg::zeros(self.d, self.d), |acc, (b, &z)| acc + b * z)
    }
}

/// A *-representation of an [`Algebra`], given by the images of its basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StarRep {
    images: Vec<CMatrix>,
    dim: usize,
}

impl StarRep {
    pub fn identity(algebra: &Algebra) -> Self {
        StarRep {
            images: algebra.basis().to_vec(),
            dim: algebra.d(),
        }
    }

    /// `A ↦ A ⊗ I_m`.
    pub fn amplified(algebra: &Algebra, multiplicity: usize) -> Self {
        let id = linalg::identity(multiplicity);
        StarRep {
            images: algebra.basis().iter().map(|b| linalg::kron(b, &id)).collect(),
            dim: algebra.d() * multiplicity,
        }
    }

    pub fn explicit(algebra: &Algebra, images: Vec<CMatrix>) -> Result<Self> {
        if images.len() != algebra.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for a basis of {}",
                images.len(),
                algebra.len()
            )));
        }
        let dim = images.first().map(|m| m.nrows()).unwrap_or(0);
        if dim == 0 || images.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::ShapeMismatch("sigma images must share one square shape".into()));
        }
        Ok(StarRep { images, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn apply_coords(&self, coords: &[C64]) -> CMatrix {
        self.images
            .iter()
            .zip(coords)
            .fold(linalg::zeros(self.dim, self.dim), |acc, (m, &z)| acc + m * z)
    }

    pub fn apply(&self, algebra: &Algebra, a: &CMatrix) -> Result<CMatrix> {
        Ok(self.apply_coords(&algebra.coords(a)?))
    }

    /// `max ‖σ(B_iB_j) − σ(B_i)σ(B_j)‖`, `max ‖σ(B_i*) − σ(B_i)*‖` and
    /// `‖σ(I) − I‖`.
    pub fn star_defects(&self, algebra: &Algebra) -> Result<(f64, f64, f64)> {
        let mut mult = 0.0f64;
        let mut adj = 0.0f64;
        for (bi, si) in algebra.basis().iter().zip(&self.images) {
            for (bj, sj) in algebra.basis().iter().zip(&self.images) {
                let lhs = self.apply(algebra, &(bi * bj))?;
                mult = mult.max(linalg::op_norm(&(lhs - si * sj)));
            }
            let star = self.apply(algebra, &bi.adjoint())?;
            adj = adj.max(linalg::op_norm(&(star - si.adjoint())));
        }
        let unit = self.apply(algebra, &linalg::identity(algebra.d()))?;
        let unital = linalg::op_norm(&(unit - linalg::identity(self.dim)));
        Ok((mult, adj, unital))
    }
}

/// `(𝒜, S, α)` with `α_gen = Ad(u_gen)`.
#[derive(Debug, Clone)]
pub struct DynSystem {
    algebra: Algebra,
    lattice: Lattice,
    /// `unitaries[i][j]` implements generator `j` of factor `i`.
    unitaries: Vec<Vec<CMatrix>>,
    tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemReport {
    /// `max ‖u*u − I‖`.
    pub unitarity: Defect,
    /// `max ‖α_a(α_b(B)) − α_b(α_a(B))‖` over generator pairs and basis.
    pub conjugation_commutation: Defect,
    /// `max ‖α_gen(I) − I‖`.
    pub unitality: f64,
    /// Largest residual of `α_gen(B)` outside the algebra (0 for `M_d`).
    pub invariance_residual: f64,
    pub tol: f64,
    pub passed: bool,
}

impl DynSystem {
    pub fn new(algebra: Algebra, lattice: &Lattice, unitaries: Vec<Vec<CMatrix>>, tol: f64) -> Result<Self> {
        if unitaries.iter().map(Vec::len).collect::<Vec<_>>() != lattice.shape() {
            return Err(Error::ShapeMismatch(
                "action needs one unitary per generator of every factor".into(),
            ));
        }
        for u in unitaries.iter().flatten() {
            if u.nrows() != algebra.d() || u.ncols() != algebra.d() {
                return Err(Error::ShapeMismatch(format!(
                    "action unitary is {}x{}, algebra acts on {}",
                    u.nrows(),
                    u.ncols(),
                    algebra.d()
                )));
            }
        }
        Ok(DynSystem {
            algebra,
            lattice: lattice.clone(),
            unitaries,
            tol,
        })
    }

    /// Trivial action on `M_d`.
    pub fn trivial(lattice: &Lattice, d: usize, tol: f64) -> Self {
        let unitaries = lattice
            .shape()
            .iter()
            .map(|&m| vec![linalg::identity(d); m])
            .collect();
        DynSystem {
            algebra: Algebra::full(d),
            lattice: lattice.clone(),
            unitaries,
            tol,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn unitaries(&self) -> &[Vec<CMatrix>] {
        &self.unitaries
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `u_s = Π u_gen^{c}` for monoid `s`.
    pub fn unitary_at(&self, s: &GroupElement) -> Result<CMatrix> {
        if !s.in_monoid() {
            return Err(Error::NotInMonoid(format!("action at {s}")));
        }
        let d = self.algebra.d();
        let mut u = linalg::identity(d);
        for (i, group) in self.unitaries.iter().enumerate() {
            for (j, g) in group.iter().enumerate() {
                let c = s.factor(i)[j];
                if c > 0 {
                    u *= linalg::matrix_power(g, c as u64);
                }
            }
        }
        Ok(u)
    }

    /// `α_s(A) = u_s A u_s*`.
    pub fn alpha(&self, s: &GroupElement, a: &CMatrix) -> Result<CMatrix> {
        let u = self.unitary_at(s)?;
        Ok(&u * a * u.adjoint())
    }

    pub fn validate(&self) -> SystemReport {
        let d = self.algebra.d();
        let mut labels = Vec::new();
        let mut gens = Vec::new();
        for (i, group) in self.unitaries.iter().enumerate() {
            for (j, u) in group.iter().enumerate() {
                labels.push(format!("{}.{}", self.lattice.factors()[i].label(), j));
                gens.push(u.clone());
            }
        }
        let mut unitarity = Defect::default();
        let mut unitality = 0.0f64;
        let mut invariance_residual = 0.0f64;
        for (label, u) in labels.iter().zip(&gens) {
            let dev = linalg::op_norm(&(u.adjoint() * u - linalg::identity(d)));
            if unitarity.witness.is_none() || dev > unitarity.defect {
                unitarity = Defect {
                    defect: dev,
                    witness: Some((label.clone(), label.clone())),
                };
            }
            unitality = unitality.max(linalg::op_norm(&(u * u.adjoint() - linalg::identity(d))));
            if !self.algebra.is_full() {
                for b in self.algebra.basis() {
                    let image = u * b * u.adjoint();
                    if let Err(Error::NotInAlgebra { residual }) = self.algebra.coords(&image) {
                        invariance_residual = invariance_residual.max(residual);
                    }
                }
            }
        }
        let mut commutation = Defect::default();
        for a in 0..gens.len() {
            for b in a + 1..gens.len() {
                let mut worst = 0.0f64;
                for x in self.algebra.basis() {
                    let ab = &gens[a] * (&gens[b] * x * gens[b].adjoint()) * gens[a].adjoint();
                    let ba = &gens[b] * (&gens[a] * x * gens[a].adjoint()) * gens[b].adjoint();
                    worst = worst.max(linalg::op_norm(&(ab - ba)));
                }
                if commutation.witness.is_none() || worst > commutation.defect {
                    commutation = Defect {
                        defect: worst,
                        witness: Some((labels[a].clone(), labels[b].clone())),
                    };
                }
            }
        }
        let passed = unitarity.defect <= self.tol
            && commutation.defect <= self.tol
            && unitality <= self.tol
            && invariance_residual <= self.tol;
        SystemReport {
            unitarity,
            conjugation_commutation: commutation,
            unitality,
            invariance_residual,
            tol: self.tol,
            passed,
        }
    }
}

/// `(σ, T)` on one Hilbert space.
#[derive(Debug, Clone)]
pub struct CovariantPair {
    system: DynSystem,
    sigma: StarRep,
    rep: NicaRep,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceReport {
    /// `max ‖σ(B)T_gen − T_gen σ(α_gen(B))‖` with (basis index, generator).
    pub covariance: Defect,
    pub sigma_multiplicative: f64,
    pub sigma_adjoint: f64,
    pub sigma_unital: f64,
    pub nica: ValidationReport,
    pub tol: f64,
    pub passed: bool,
}

impl CovariantPair {
    pub fn new(system: DynSystem, sigma: StarRep, rep: NicaRep) -> Result<Self> {
        if sigma.dim() != rep.dim() {
            return Err(Error::ShapeMismatch(format!(
                "sigma acts on dimension {} but the representation on {}",
                sigma.dim(),
                rep.dim()
            )));
        }
        if system.lattice() != rep.lattice() {
            return Err(Error::InvalidArgument(
                "system and representation use different factor declarations".into(),
            ));
        }
        Ok(CovariantPair { system, sigma, rep })
    }

    pub fn system(&self) -> &DynSystem {
        &self.system
    }

    pub fn sigma(&self) -> &StarRep {
        &self.sigma
    }

    pub fn rep(&self) -> &NicaRep {
        &self.rep
    }

    pub fn with_rep(&self, rep: NicaRep) -> Result<Self> {
        Self::new(self.system.clone(), self.sigma.clone(), rep)
    }

    /// `σ(α_s(A))`.
    pub fn sigma_alpha(&self, s: &GroupElement, a: &CMatrix) -> Result<CMatrix> {
        self.sigma.apply(self.system.algebra(), &self.system.alpha(s, a)?)
    }

    /// `max_B ‖σ(B)T_s − T_s σ(α_s(B))‖` at one monoid element.
    pub fn covariance_at(&self, s: &GroupElement) -> Result<f64> {
        let t = self.rep.evaluate_monoid(s)?;
        let mut worst = 0.0f64;
        for (b, sb) in self.system.algebra().basis().iter().zip(self.sigma.images()) {
            let rhs = &t * self.sigma_alpha(s, b)?;
            worst = worst.max(linalg::op_norm(&(sb * &t - rhs)));
        }
        Ok(worst)
    }

    pub fn validate(&self) -> Result<CovarianceReport> {
        let lattice = self.rep.lattice();
        let mut covariance = Defect::default();
        for (i, factor) in lattice.factors().iter().enumerate() {
            for j in 0..factor.rank() {
                let s = lattice.generator(i, j);
                let t = self.rep.generator_matrix(i, j);
                for (k, (b, sb)) in self
                    .system
                    .algebra()
                    .basis()
                    .iter()
                    .zip(self.sigma.images())
                    .enumerate()
                {
                    let d = linalg::op_norm(&(sb * &t - &t * self.sigma_alpha(&s, b)?));
                    if covariance.witness.is_none() || d > covariance.defect {
                        covariance = Defect {
                            defect: d,
                            witness: Some((format!("basis[{k}]"), format!("{}.{j}", factor.label()))),
                        };
                    }
                }
            }
        }
        let (sigma_multiplicative, sigma_adjoint, sigma_unital) = self.sigma.star_defects(self.system.algebra())?;
        let nica = self.rep.validate();
        let tol = self.system.tol();
        let passed = covariance.defect <= tol
            && sigma_multiplicative <= tol
            && sigma_adjoint <= tol
            && sigma_unital <= tol
            && nica.passed;
        Ok(CovarianceReport {
            covariance,
            sigma_multiplicative,
            sigma_adjoint,
            sigma_unital,
            nica,
            tol,
            passed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_real_rows};

    fn diag_unitary(phases: &[f64]) -> CMatrix {
        CMatrix::from_fn(phases.len(), phases.len(), |i, j| {
            if i == j {
                C64::from_polar(1.0, phases[i])
            } else {
                linalg::ZERO
            }
        })
    }

    #[test]
    fn identity_action_has_zero_defects() {
        let l = Lattice::integer_grid(2);
        let sys = DynSystem::trivial(&l, 2, 1e-12);
        let r = sys.validate();
        assert!(r.passed);
        assert_eq!(r.unitarity.defect, 0.0);
        assert_eq!(r.conjugation_commutation.defect, 0.0);
        assert_eq!(r.unitality, 0.0);
    }

    #[test]
    fn diagonal_unitaries_pass() {
        let l = Lattice::integer_grid(2);
        let sys = DynSystem::new(
            Algebra::full(2),
            &l,
            vec![vec![diag_unitary(&[0.3, -1.2])], vec![diag_unitary(&[2.0, 0.5])]],
            1e-9,
        )
        .unwrap();
        assert!(sys.validate().passed);
    }

    #[test]
    fn non_unitary_fails() {
        let l = Lattice::integer_grid(1);
        let sys = DynSystem::new(Algebra::full(2), &l, vec![vec![from_real_rows(2, 2, &[1.0, 0.5, 0.0, 1.0])]], 1e-9).unwrap();
        assert!(!sys.validate().passed);
    }

    #[test]
    fn algebra_coordinates() {
        let alg = Algebra::full(2);
        let a = CMatrix::from_fn(2, 2, |i, j| c(i as f64, j as f64));
        assert_eq!(alg.from_coords(&alg.coords(&a).unwrap()), a);

        let diag = Algebra::from_basis(
            2,
            vec![from_real_rows(2, 2, &[1.0, 0.0, 0.0, 0.0]), from_real_rows(2, 2, &[0.0, 0.0, 0.0, 1.0])],
            1e-9,
        )
        .unwrap();
        assert!(matches!(
            diag.coords(&from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0])),
            Err(Error::NotInAlgebra { .. })
        ));
    }

    #[test]
    fn covariance_with_adjoint_unitary() {
        let l = Lattice::integer_grid(1);
        let u = diag_unitary(&[0.4, 1.7]);
        let sys = DynSystem::new(Algebra::full(2), &l, vec![vec![u.clone()]], 1e-9).unwrap();
        let rep = NicaRep::direct(&l, vec![vec![u.adjoint() * c(0.5, 0.0)]], 1e-9).unwrap();
        let pair = CovariantPair::new(sys.clone(), StarRep::identity(sys.algebra()), rep).unwrap();
        let r = pair.validate().unwrap();
        assert!(r.covariance.defect <= 1e-12, "{}", r.covariance.defect);
        assert!(r.passed);
    }

    #[test]
    fn commutant_case() {
        let l = Lattice::integer_grid(1);
        let sys = DynSystem::trivial(&l, 2, 1e-9);
        let sigma = StarRep::amplified(sys.algebra(), 2);
        let y = from_real_rows(2, 2, &[0.2, 0.6, -0.1, 0.3]);
        let t = linalg::kron(&linalg::identity(2), &y);
        let rep = NicaRep::direct(&l, vec![vec![t]], 1e-9).unwrap();
        let pair = CovariantPair::new(sys, sigma, rep).unwrap();
        assert!(pair.validate().unwrap().passed);
    }

    #[test]
    fn mismatch_reports_witness() {
        let l = Lattice::integer_grid(1);
        let sys = DynSystem::new(Algebra::full(2), &l, vec![vec![diag_unitary(&[0.0, 1.0])]], 1e-9).unwrap();
        let rep = NicaRep::direct(&l, vec![vec![from_real_rows(2, 2, &[0.1, 0.5, 0.3, 0.2])]], 1e-9).unwrap();
        let pair = CovariantPair::new(sys.clone(), StarRep::identity(sys.algebra()), rep).unwrap();
        let r = pair.validate().unwrap();
        assert!(!r.passed);
        assert!(r.covariance.defect > 1e-3);
        assert!(r.covariance.witness.is_some());
    }

    #[test]
    fn amplified_sigma_is_star_rep() {
        let alg = Algebra::full(2);
        let s = StarRep::amplified(&alg, 3);
        let (m, a, u) = s.star_defects(&alg).unwrap();
        assert!(m < 1e-14 && a < 1e-14 && u < 1e-14);
    }
}
