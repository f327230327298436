//! Contractive Nica-covariant representations on `ℂ^n`, their extension to
//! the group `G` and the regular-dilation kernel `[T_{s_j − s_i}]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{GroupElement, Lattice};
use crate::linalg::{self, CMatrix, HermitianEigen};
use crate::schur::{self, BlockMatrix};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RepMode {
    /// `T_s = ⊗_i T^{(i)}_{s_i}`, one leg per factor.
    Tensor,
    /// One full-space matrix per generator.
    Direct,
}

/// A representation given on monoid generators.
///
/// `generators[i][j]` is the matrix of the `j`-th generator of factor `i`:
/// a leg matrix in tensor mode, a full `dim × dim` matrix in direct mode.
#[derive(Debug, Clone)]
pub struct NicaRep {
    lattice: Lattice,
    mode: RepMode,
    dim: usize,
    leg_dims: Vec<usize>,
    generators: Vec<Vec<CMatrix>>,
    tol: f64,
}

fn check_square(m: &CMatrix, n: usize, what: &str) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::ShapeMismatch(format!(
            "{what} is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn check_generators(lattice: &Lattice, generators: &[Vec<CMatrix>], tol: f64, dims: &[usize]) -> Result<()> {
    if generators.len() != lattice.num_factors() {
        return Err(Error::ShapeMismatch(format!(
            "{} generator groups for {} factors",
            generators.len(),
            lattice.num_factors()
        )));
    }
    for (i, (group, factor)) in generators.iter().zip(lattice.factors()).enumerate() {
        if group.len() != factor.rank() {
            return Err(Error::ShapeMismatch(format!(
                "factor {i} has {} generators but {} matrices were given",
                factor.rank(),
                group.len()
            )));
        }
        for (j, x) in group.iter().enumerate() {
            check_square(x, dims[i], &format!("generator {i}.{j}"))?;
            let norm = linalg::op_norm(x);
            if norm > 1.0 + tol {
                return Err(Error::NormExceeded {
                    what: format!("generator {i}.{j}"),
                    norm,
                    tol,
                });
            }
        }
        for j in 0..group.len() {
            for l in j + 1..group.len() {
                let d = linalg::op_norm(&linalg::commutator(&group[j], &group[l]));
                if d > tol {
                    return Err(Error::NonCommuting(format!(
                        "generators {i}.{j} and {i}.{l} of the same factor (defect {d:e})"
                    )));
                }
            }
        }
    }
    Ok(())
}

impl NicaRep {
    /// Tensor-product representation; Nica-covariant by construction.
    pub fn tensor(lattice: &Lattice, legs: Vec<Vec<CMatrix>>, tol: f64) -> Result<Self> {
        let leg_dims: Vec<usize> = legs
            .iter()
            .map(|g| g.first().map(|m| m.nrows()).unwrap_or(0))
            .collect();
        if leg_dims.iter().any(|&d| d == 0) {
            return Err(Error::ShapeMismatch("every tensor leg needs a nonzero dimension".into()));
        }
        check_generators(lattice, &legs, tol, &leg_dims)?;
        Ok(NicaRep {
            lattice: lattice.clone(),
            mode: RepMode::Tensor,
            dim: leg_dims.iter().product(),
            leg_dims,
            generators: legs,
            tol,
        })
    }

    /// Representation from full-space generator matrices. Cross-factor
    /// double commutation is not enforced here; see [`NicaRep::validate`].
    pub fn direct(lattice: &Lattice, generators: Vec<Vec<CMatrix>>, tol: f64) -> Result<Self> {
        let dim = generators
            .iter()
            .flatten()
            .next()
            .map(|m| m.nrows())
            .ok_or_else(|| Error::ShapeMismatch("no generator matrices".into()))?;
        if dim == 0 {
            return Err(Error::ShapeMismatch("zero-dimensional Hilbert space".into()));
        }
        let dims = vec![dim; lattice.num_factors()];
        check_generators(lattice, &generators, tol, &dims)?;
        Ok(NicaRep {
            lattice: lattice.clone(),
            mode: RepMode::Direct,
            dim,
            leg_dims: Vec::new(),
            generators,
            tol,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn mode(&self) -> RepMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn leg_dims(&self) -> &[usize] {
        &self.leg_dims
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn raw_generators(&self) -> &[Vec<CMatrix>] {
        &self.generators
    }

    /// Full-space matrix of generator `j` of factor `i`.
    pub fn generator_matrix(&self, i: usize, j: usize) -> CMatrix {
        match self.mode {
            RepMode::Direct => self.generators[i][j].clone(),
            RepMode::Tensor => {
                let before: usize = self.leg_dims[..i].iter().product();
                let after: usize = self.leg_dims[i + 1..].iter().product();
                linalg::kron_all([
                    &linalg::identity(before),
                    &self.generators[i][j],
                    &linalg::identity(after),
                ])
            }
        }
    }

    fn leg_power(&self, i: usize, coeffs: &[i64]) -> CMatrix {
        let n = self.generators[i][0].nrows();
        coeffs
            .iter()
            .zip(&self.generators[i])
            .fold(linalg::identity(n), |acc, (&c, x)| {
                if c == 0 {
                    acc
                } else {
                    acc * linalg::matrix_power(x, c as u64)
                }
            })
    }

    /// `T_s` for `s` in the monoid generated by the declared generators.
    pub fn evaluate_monoid(&self, s: &GroupElement) -> Result<CMatrix> {
        if s.shape() != self.lattice.shape() {
            return Err(Error::ShapeMismatch(format!(
                "element {s} does not match factor shape {:?}",
                self.lattice.shape()
            )));
        }
        if !s.in_monoid() {
            return Err(Error::NotInMonoid(format!("{s}")));
        }
        Ok(match self.mode {
            RepMode::Tensor => {
                let legs: Vec<CMatrix> = (0..self.lattice.num_factors())
                    .map(|i| self.leg_power(i, s.factor(i)))
                    .collect();
                linalg::kron_all(&legs)
            }
            RepMode::Direct => (0..self.lattice.num_factors())
                .fold(linalg::identity(self.dim), |acc, i| acc * self.leg_power(i, s.factor(i))),
        })
    }

    /// `T_g = T_{g₋}* T_{g₊}`.
    pub fn evaluate_at(&self, g: &GroupElement) -> Result<CMatrix> {
        let parts = self.lattice.decompose(g)?;
        if !parts.plus.in_monoid() || !parts.minus.in_monoid() {
            return Err(Error::NotInMonoid(format!(
                "{g} = {} − {} has a part outside the generated monoid",
                parts.plus, parts.minus
            )));
        }
        match self.mode {
            RepMode::Tensor => {
                let legs: Vec<CMatrix> = (0..self.lattice.num_factors())
                    .map(|i| {
                        if parts.minus.factor_is_zero(i) {
                            self.leg_power(i, parts.plus.factor(i))
                        } else {
                            self.leg_power(i, parts.minus.factor(i)).adjoint()
                        }
                    })
                    .collect();
                Ok(linalg::kron_all(&legs))
            }
            RepMode::Direct => {
                let plus = self.evaluate_monoid(&parts.plus)?;
                if parts.minus.is_zero() {
                    return Ok(plus);
                }
                let minus = self.evaluate_monoid(&parts.minus)?;
                Ok(minus.adjoint() * plus)
            }
        }
    }

    /// `T^{(i)}_{g_i}`: the value at the `i`-th component of `g` alone.
    pub fn evaluate_factor(&self, g: &GroupElement, i: usize) -> Result<CMatrix> {
        let only = GroupElement::from_coeffs(
            (0..self.lattice.num_factors())
                .map(|l| {
                    if l == i {
                        g.factor(i).to_vec()
                    } else {
                        vec![0; g.factor(l).len()]
                    }
                })
                .collect(),
        );
        self.evaluate_at(&only)
    }

    /// The representation `s ↦ γ(s) T_s` for the character
    /// `γ(s) = exp(i ⟨θ, coeffs(s)⟩)`; `theta[i][j]` is the phase of
    /// generator `j` of factor `i`.
    pub fn with_phases(&self, theta: &[Vec<f64>]) -> Result<Self> {
        if theta.iter().map(Vec::len).collect::<Vec<_>>() != self.lattice.shape() {
            return Err(Error::ShapeMismatch("phase vector does not match factor shape".into()));
        }
        let generators = self
            .generators
            .iter()
            .zip(theta)
            .map(|(group, phases)| {
                group
                    .iter()
                    .zip(phases)
                    .map(|(x, &t)| x * linalg::C64::from_polar(1.0, t))
                    .collect()
            })
            .collect();
        Ok(NicaRep {
            generators,
            ..self.clone()
        })
    }

    /// Checks contractivity, within-factor commutation and cross-factor
    /// double commutation on the full-space generator matrices.
    pub fn validate(&self) -> ValidationReport {
        let mut labels = Vec::new();
        let mut mats = Vec::new();
        for (i, group) in self.generators.iter().enumerate() {
            for j in 0..group.len() {
                labels.push((i, format!("{}.{}", self.lattice.factors()[i].label(), j)));
                mats.push(self.generator_matrix(i, j));
            }
        }
        let mut norm_excess = Defect::default();
        for ((_, label), x) in labels.iter().zip(&mats) {
            norm_excess.record(linalg::op_norm(x) - 1.0, label, label);
        }
        norm_excess.defect = norm_excess.defect.max(0.0);
        let mut within = Defect::default();
        let mut cross = Defect::default();
        for a in 0..mats.len() {
            for b in a + 1..mats.len() {
                let (fa, la) = &labels[a];
                let (fb, lb) = &labels[b];
                let comm = linalg::op_norm(&linalg::commutator(&mats[a], &mats[b]));
                if fa == fb {
                    within.record(comm, la, lb);
                } else {
                    let star = linalg::op_norm(
                        &(mats[a].adjoint() * &mats[b] - &mats[b] * mats[a].adjoint()),
                    );
                    cross.record(star.max(comm), la, lb);
                }
            }
        }
        let passed = norm_excess.defect <= self.tol && within.defect <= self.tol && cross.defect <= self.tol;
        ValidationReport {
            norm_excess,
            within_factor_commutator: within,
            cross_factor_defect: cross,
            tol: self.tol,
            passed,
        }
    }

    /// True when `‖T_s h‖ = ‖h‖` for every `s` in `points`, i.e. `T_s*T_s = I`.
    pub fn is_isometric_on(&self, points: &[GroupElement]) -> Result<bool> {
        for s in points {
            let t = self.evaluate_monoid(s)?;
            let d = linalg::op_norm(&(t.adjoint() * &t - linalg::identity(self.dim)));
            if d > self.tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Largest defect seen, with the generator pair that produced it.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Defect {
    pub defect: f64,
    pub witness: Option<(String, String)>,
}

impl Defect {
    pub(crate) fn record(&mut self, value: f64, a: &str, b: &str) {
        if self.witness.is_none() || value > self.defect {
            self.defect = value;
            self.witness = Some((a.to_string(), b.to_string()));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    /// `max(‖X‖ − 1, 0)` over generators.
    pub norm_excess: Defect,
    /// `max ‖XY − YX‖` over generators of one factor.
    pub within_factor_commutator: Defect,
    /// `max(‖X*Y − YX*‖, ‖XY − YX‖)` over generators of different factors.
    pub cross_factor_defect: Defect,
    pub tol: f64,
    pub passed: bool,
}

/// The operator matrix `[T_{s_j − s_i}]` on a list of cone points.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    pub points: Vec<GroupElement>,
    pub blocks: BlockMatrix,
    /// Hermitian part of the assembled matrix.
    pub assembled: CMatrix,
    /// `‖M − M*‖ / 2` before symmetrization.
    pub asymmetry: f64,
}

fn check_points(lattice: &Lattice, points: &[GroupElement]) -> Result<()> {
    for (a, p) in points.iter().enumerate() {
        if !lattice.in_cone(p)? {
            return Err(Error::InvalidArgument(format!("point {p} is not in the cone")));
        }
        if points[..a].contains(p) {
            return Err(Error::InvalidArgument(format!("point {p} appears twice")));
        }
    }
    Ok(())
}

pub fn regular_kernel(rep: &NicaRep, points: &[GroupElement]) -> Result<KernelMatrix> {
    check_points(rep.lattice(), points)?;
    let n = points.len();
    let mut raw = Vec::with_capacity(n * n);
    for si in points {
        for sj in points {
            raw.push(rep.evaluate_at(&sj.sub(si))?);
        }
    }
    let blocks = BlockMatrix::new(n, rep.dim(), raw)?;
    let (assembled, asymmetry) = linalg::hermitian_part(&blocks.assembled());
    Ok(KernelMatrix {
        points: points.to_vec(),
        blocks,
        assembled,
        asymmetry,
    })
}

/// Per-factor Schur factorization of the kernel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationCheck {
    /// Minimum eigenvalue of each `[T^{(l)}_{s_j^{(l)} − s_i^{(l)}}]`.
    pub factor_min_eigenvalues: Vec<f64>,
    /// `‖□_l K_l − K‖`.
    pub product_defect: f64,
    /// Lift-and-compress defect of each successive product, when within the
    /// size cap.
    pub lift_defects: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelPositivity {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub asymmetry: f64,
    pub floor: f64,
    pub positive: bool,
    pub factorization: Option<FactorizationCheck>,
}

pub fn kernel_positivity(
    rep: &NicaRep,
    points: &[GroupElement],
    tolerances: &Tolerances,
    factorization: bool,
) -> Result<KernelPositivity> {
    let kernel = regular_kernel(rep, points)?;
    let eig = HermitianEigen::new(&kernel.assembled);
    let floor = tolerances.psd_floor(kernel.assembled.nrows());
    let factorization = if factorization {
        Some(factorize_kernel(rep, &kernel, tolerances)?)
    } else {
        None
    };
    Ok(KernelPositivity {
        min_eigenvalue: eig.min(),
        max_eigenvalue: eig.max(),
        asymmetry: kernel.asymmetry,
        floor,
        positive: eig.min() >= -floor,
        factorization,
    })
}

fn factorize_kernel(rep: &NicaRep, kernel: &KernelMatrix, tolerances: &Tolerances) -> Result<FactorizationCheck> {
    let n = kernel.points.len();
    let mut factor_kernels = Vec::new();
    for l in 0..rep.lattice().num_factors() {
        let mut raw = Vec::with_capacity(n * n);
        for si in &kernel.points {
            for sj in &kernel.points {
                raw.push(rep.evaluate_factor(&sj.sub(si), l)?);
            }
        }
        factor_kernels.push(BlockMatrix::new(n, rep.dim(), raw)?);
    }
    let factor_min_eigenvalues = factor_kernels
        .iter()
        .map(|k| HermitianEigen::new(&k.assembled()).min())
        .collect();
    let mut product = factor_kernels[0].clone();
    let mut lift_defects = Vec::new();
    for next in &factor_kernels[1..] {
        let lift = if n <= schur::DEFAULT_SCHUR_CAP {
            match schur::lift_compress_check(&product, next, tolerances.tol.max(1e-9), schur::DEFAULT_SCHUR_CAP) {
                Ok(lc) => Some(lc.defect),
                Err(Error::NonCommutingEntries { .. }) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        lift_defects.push(lift);
        product = schur::schur_product(&product, next)?;
    }
    let product_defect = linalg::op_norm(&(product.assembled() - kernel.blocks.assembled()));
    Ok(FactorizationCheck {
        factor_min_eigenvalues,
        product_defect,
        lift_defects,
    })
}
