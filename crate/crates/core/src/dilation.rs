//! Finite truncations of the minimal isometric Nica-covariant dilation.
//!
//! `K₀` is the space of finitely supported functions `S → H`, with the form
//! `⟨f, g⟩ = Σ_{s,t} ⟨T_{t−s} f(t), g(s)⟩`. Restricted to functions supported
//! on a finite set `F`, the form is the Gram matrix of `{δ_t ⊗ e_p}` whose
//! block `(s, t)` is `T_{t−s}`. Dividing out its null space gives `K_F`, a
//! subspace of the completed dilation space `K`; the factor `Q` with
//! `Q*Q = Gram` maps raw coefficients to orthonormal coordinates on `K_F`.
//!
//! The shift `V_s: δ_t ⊗ h ↦ δ_{t+s} ⊗ h` leaves the form invariant, so every
//! identity is checked on a support extended far enough that all the vectors
//! involved live in one truncated model.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{GroupElement, Lattice};
use crate::linalg::{self, CMatrix, HermitianEigen, C64};
use crate::representation::NicaRep;
use crate::tolerance::Tolerances;

/// Default cap on the side of any Gram matrix.
pub const DEFAULT_GRAM_CAP: usize = 2000;

/// A finite, ordered set of distinct cone elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    elements: Vec<GroupElement>,
}

impl SupportSet {
    pub fn new(lattice: &Lattice, elements: Vec<GroupElement>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidArgument("support set is empty".into()));
        }
        for (a, g) in elements.iter().enumerate() {
            if !lattice.in_cone(g)? {
                return Err(Error::InvalidArgument(format!("support point {g} is not in the cone")));
            }
            if elements[..a].contains(g) {
                return Err(Error::InvalidArgument(format!("support point {g} appears twice")));
            }
        }
        Ok(SupportSet { elements })
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.contains(g)
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.elements.iter().position(|x| x == g)
    }

    /// This support followed by the new points of `extra`, in order.
    pub fn extended<'a>(&self, extra: impl IntoIterator<Item = &'a GroupElement>) -> SupportSet {
        let mut elements = self.elements.clone();
        for g in extra {
            if !elements.contains(g) {
                elements.push(g.clone());
            }
        }
        SupportSet { elements }
    }

    /// `{s + t : t ∈ self}` in the same order.
    pub fn translated(&self, s: &GroupElement) -> Vec<GroupElement> {
        self.elements.iter().map(|t| t.add(s)).collect()
    }
}

/// Gram matrix of `{δ_t ⊗ e_p}` with its pre-symmetrization asymmetry.
#[derive(Debug, Clone)]
pub struct GramForm {
    pub matrix: CMatrix,
    pub asymmetry: f64,
}

/// Block `(a, b)` is `T_{t_b − t_a}`, so `⟨f, g⟩ = d* G c` for coefficient
/// vectors `c` of `f` and `d` of `g`.
pub fn gram_form(rep: &NicaRep, support: &SupportSet) -> Result<GramForm> {
    let n = rep.dim();
    let pts = support.elements();
    let mut cache: HashMap<GroupElement, CMatrix> = HashMap::new();
    let mut g = linalg::zeros(pts.len() * n, pts.len() * n);
    for (a, s) in pts.iter().enumerate() {
        for (b, t) in pts.iter().enumerate() {
            let diff = t.sub(s);
            let block = match cache.get(&diff) {
                Some(m) => m.clone(),
                None => {
                    let m = rep.evaluate_at(&diff)?;
                    cache.insert(diff, m.clone());
                    m
                }
            };
            g.view_mut((a * n, b * n), (n, n)).copy_from(&block);
        }
    }
    let (matrix, asymmetry) = linalg::hermitian_part(&g);
    Ok(GramForm { matrix, asymmetry })
}

/// Quotient model of `K_F` for one support.
#[derive(Debug, Clone)]
pub(crate) struct Model {
    pub support: SupportSet,
    pub dim: usize,
    pub gram: GramForm,
    pub eigenvalues: Vec<f64>,
    /// `Q` (rank × N) with `Q*Q ≈ Gram`.
    pub factor: CMatrix,
    /// `Q⁺` (N × rank), the pseudo-inverse built from the same eigenpairs.
    pub factor_pinv: CMatrix,
    /// Singular-value cutoff used for pseudo-inverses of column subsets.
    pub cutoff: f64,
}

impl Model {
    pub fn build(rep: &NicaRep, support: SupportSet, tolerances: &Tolerances, gram_cap: usize) -> Result<Self> {
        let size = support.len() * rep.dim();
        if size > gram_cap {
            return Err(Error::CapExceeded {
                what: "gram matrix side".into(),
                size,
                cap: gram_cap,
            });
        }
        let gram = gram_form(rep, &support)?;
        let eig = HermitianEigen::new(&gram.matrix);
        let floor = tolerances.psd_floor(size);
        if eig.min() < -floor {
            return Err(Error::GramNotPsd {
                min_eigenvalue: eig.min(),
                tol: floor,
            });
        }
        let threshold = tolerances.rank_tol * eig.max().max(0.0);
        let rank = eig.values.iter().filter(|&&v| v > threshold).count();
        let mut factor = linalg::zeros(rank, size);
        let mut factor_pinv = linalg::zeros(size, rank);
        for k in 0..rank {
            let root = eig.values[k].sqrt();
            let u = eig.vectors.column(k);
            factor.row_mut(k).copy_from(&(u.adjoint() * C64::new(root, 0.0)));
            factor_pinv.column_mut(k).copy_from(&(u * C64::new(1.0 / root, 0.0)));
        }
        Ok(Model {
            support,
            dim: rep.dim(),
            cutoff: threshold.sqrt(),
            gram,
            eigenvalues: eig.values,
            factor,
            factor_pinv,
        })
    }

    pub fn rank(&self) -> usize {
        self.factor.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().cloned().unwrap_or(0.0)
    }

    fn index(&self, g: &GroupElement) -> Result<usize> {
        self.support
            .position(g)
            .ok_or_else(|| Error::InvalidArgument(format!("{g} is outside the working support")))
    }

    /// Columns of `Q` for the listed points: the images of `δ_t ⊗ e_p`.
    pub fn columns(&self, pts: &[GroupElement]) -> Result<CMatrix> {
        let n = self.dim;
        let mut out = linalg::zeros(self.rank(), pts.len() * n);
        for (k, g) in pts.iter().enumerate() {
            let a = self.index(g)?;
            out.view_mut((0, k * n), (self.rank(), n))
                .copy_from(&self.factor.view((0, a * n), (self.rank(), n)));
        }
        Ok(out)
    }

    /// Coordinates of `ĥ` for the standard basis of `H` (rank × dim).
    pub fn embedding(&self, zero: &GroupElement) -> Result<CMatrix> {
        self.columns(std::slice::from_ref(zero))
    }

    /// `V_s P_W` as a rank × rank matrix; needs `s + W` inside the support.
    pub fn shift_on(&self, s: &GroupElement, w: &[GroupElement]) -> Result<CMatrix> {
        let src = self.columns(w)?;
        let shifted: Vec<GroupElement> = w.iter().map(|t| t.add(s)).collect();
        let dst = self.columns(&shifted)?;
        Ok(dst * pinv_abs(&src, self.cutoff))
    }

    /// `P_W V_s*`, the adjoint of [`Model::shift_on`].
    pub fn shift_adjoint_on(&self, s: &GroupElement, w: &[GroupElement]) -> Result<CMatrix> {
        Ok(self.shift_on(s, w)?.adjoint())
    }
}

fn pinv_abs(m: &CMatrix, cutoff: f64) -> CMatrix {
    let smax = linalg::op_norm(m);
    if smax <= cutoff {
        return linalg::zeros(m.ncols(), m.nrows());
    }
    linalg::pinv(m, cutoff / smax)
}

/// A truncated minimal isometric dilation.
#[derive(Debug, Clone)]
pub struct DilationSpace {
    rep: NicaRep,
    model: Model,
    tolerances: Tolerances,
    gram_cap: usize,
    embedding: CMatrix,
}

/// Summary numbers of a built dilation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilationSummary {
    pub support_size: usize,
    pub raw_dimension: usize,
    pub rank: usize,
    pub hilbert_dim: usize,
    pub gram_min_eigenvalue: f64,
    pub gram_max_eigenvalue: f64,
    pub gram_asymmetry: f64,
    /// `‖E*E − I‖` for the embedding `E: h ↦ ĥ`.
    pub embedding_defect: f64,
}

pub fn build_dilation(rep: &NicaRep, support: &SupportSet, tolerances: &Tolerances) -> Result<DilationSpace> {
    build_dilation_capped(rep, support, tolerances, DEFAULT_GRAM_CAP)
}

pub fn build_dilation_capped(
    rep: &NicaRep,
    support: &SupportSet,
    tolerances: &Tolerances,
    gram_cap: usize,
) -> Result<DilationSpace> {
    let zero = rep.lattice().zero();
    if !support.contains(&zero) {
        return Err(Error::InvalidArgument(
            "support must contain 0 to embed the Hilbert space".into(),
        ));
    }
    let model = Model::build(rep, support.clone(), tolerances, gram_cap)?;
    let embedding = model.embedding(&zero)?;
    Ok(DilationSpace {
        rep: rep.clone(),
        model,
        tolerances: *tolerances,
        gram_cap,
        embedding,
    })
}

/// `V_s` from `K_F` into `K_{F ∪ (s+F)}` in quotient coordinates.
#[derive(Debug, Clone)]
pub struct CompressedShift {
    pub matrix: CMatrix,
    /// The isometric inclusion `K_F ⊂ K_{F ∪ (s+F)}` in the same coordinates.
    pub inclusion: CMatrix,
    pub source: SupportSet,
    pub target: SupportSet,
}

/// The two sides of the Nica identity and, when applicable, of its
/// restriction to `H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NicaDefects {
    /// `|⟨V_s*V_tV_μ ĥ, V_ν k̂⟩ − ⟨V_tV_s*V_μ ĥ, V_ν k̂⟩|` as an operator norm
    /// over `h, k ∈ H`.
    pub full: f64,
    /// `V_s*V_μ|_H = V_μV_s*|_H` tested against `V_ν k̂`, when `s ∧ μ = 0`.
    pub restricted: Option<f64>,
}

impl DilationSpace {
    pub fn rep(&self) -> &NicaRep {
        &self.rep
    }

    pub fn support(&self) -> &SupportSet {
        &self.model.support
    }

    pub fn gram(&self) -> &CMatrix {
        &self.model.gram.matrix
    }

    pub fn rank(&self) -> usize {
        self.model.rank()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.model.eigenvalues
    }

    /// `Q` with `Q*Q = Gram` on the retained spectrum.
    pub fn factor(&self) -> &CMatrix {
        &self.model.factor
    }

    /// Coordinates of `ĥ = δ₀ ⊗ h` for the standard basis of `H`.
    pub fn embedding(&self) -> &CMatrix {
        &self.embedding
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    pub(crate) fn model(&self) -> &Model {
        &self.model
    }

    pub fn summary(&self) -> DilationSummary {
        let n = self.rep.dim();
        DilationSummary {
            support_size: self.model.support.len(),
            raw_dimension: self.model.support.len() * n,
            rank: self.rank(),
            hilbert_dim: n,
            gram_min_eigenvalue: self.model.min_eigenvalue(),
            gram_max_eigenvalue: self.model.eigenvalues.first().cloned().unwrap_or(0.0),
            gram_asymmetry: self.model.gram.asymmetry,
            embedding_defect: linalg::op_norm(&(self.embedding.adjoint() * &self.embedding - linalg::identity(n))),
        }
    }

    /// Model on this support followed by `extra`.
    pub(crate) fn extended_model<'a>(&self, extra: impl IntoIterator<Item = &'a GroupElement>) -> Result<Model> {
        let support = self.model.support.extended(extra);
        Model::build(&self.rep, support, &self.tolerances, self.gram_cap)
    }

    fn require_cone(&self, g: &GroupElement, what: &str) -> Result<()> {
        if !self.rep.lattice().in_cone(g)? {
            return Err(Error::InvalidArgument(format!("{what} = {g} is not in the cone")));
        }
        Ok(())
    }

    pub fn compressed_shift(&self, s: &GroupElement) -> Result<CompressedShift> {
        self.require_cone(s, "s")?;
        let translated = self.model.support.translated(s);
        let big = self.extended_model(&translated)?;
        let matrix = big.columns(&translated)? * &self.model.factor_pinv;
        let inclusion = big.columns(self.model.support.elements())? * &self.model.factor_pinv;
        Ok(CompressedShift {
            matrix,
            inclusion,
            source: self.model.support.clone(),
            target: big.support,
        })
    }

    /// `‖V_s*V_s − I‖` on `K_F`.
    pub fn verify_isometry(&self, s: &GroupElement) -> Result<f64> {
        let v = self.compressed_shift(s)?.matrix;
        Ok(linalg::op_norm(&(v.adjoint() * &v - linalg::identity(self.rank()))))
    }

    /// `‖P_H V_{g₋}* V_{g₊}|_H − T_g‖`.
    pub fn verify_regularity(&self, g: &GroupElement) -> Result<f64> {
        let lattice = self.rep.lattice();
        let parts = lattice.decompose(g)?;
        let zero = lattice.zero();
        let model = self.extended_model([&zero, &parts.plus, &parts.minus])?;
        let e = model.embedding(&zero)?;
        let origin = std::slice::from_ref(&zero);
        let up = model.shift_on(&parts.plus, origin)? * &e;
        let down = model.shift_on(&parts.minus, origin)? * &e;
        let compressed = down.adjoint() * up;
        let t = self.rep.evaluate_at(g)?;
        Ok(linalg::op_norm(&(compressed - t)))
    }

    fn single_factor_or_zero(&self, g: &GroupElement, what: &str) -> Result<Option<usize>> {
        self.require_cone(g, what)?;
        if g.is_zero() {
            return Ok(None);
        }
        self.rep
            .lattice()
            .single_factor(g)
            .map(Some)
            .ok_or_else(|| Error::InvalidArgument(format!("{what} = {g} must lie in a single factor")))
    }

    /// Checks `⟨V_s*V_tV_μ ĥ, V_ν k̂⟩ = ⟨V_tV_s*V_μ ĥ, V_ν k̂⟩` for all basis
    /// vectors `h, k`, with `s ∈ S_i`, `t ∈ S_j`, `i ≠ j`.
    pub fn verify_nica_dilation(
        &self,
        s: &GroupElement,
        t: &GroupElement,
        mu: &GroupElement,
        nu: &GroupElement,
    ) -> Result<NicaDefects> {
        let lattice = self.rep.lattice();
        let fs = self.single_factor_or_zero(s, "s")?;
        let ft = self.single_factor_or_zero(t, "t")?;
        if let (Some(i), Some(j)) = (fs, ft) {
            if i == j {
                return Err(Error::InvalidArgument(format!(
                    "s = {s} and t = {t} lie in the same factor"
                )));
            }
        }
        self.require_cone(mu, "mu")?;
        self.require_cone(nu, "nu")?;
        let full = if fs.is_none() || ft.is_none() {
            0.0
        } else {
            self.nica_full(s, t, mu, nu)?
        };
        let restricted = if lattice.meet(s, mu)?.is_zero() {
            Some(self.nica_restricted(s, mu, nu)?)
        } else {
            None
        };
        Ok(NicaDefects { full, restricted })
    }

    fn nica_full(&self, s: &GroupElement, t: &GroupElement, mu: &GroupElement, nu: &GroupElement) -> Result<f64> {
        let lattice = self.rep.lattice();
        let zero = lattice.zero();
        let a_point = lattice.decompose(&mu.sub(s))?.plus;
        let b_point = lattice.decompose(&nu.sub(t))?.plus;
        let w = self.model.support.extended([&zero, &a_point, &b_point]);
        let mut extra: Vec<GroupElement> = w.elements().to_vec();
        extra.extend(w.translated(s));
        extra.extend(w.translated(t));
        extra.extend([mu.clone(), nu.clone(), t.add(mu), s.add(nu)]);
        let model = self.extended_model(&extra)?;
        let e = model.embedding(&zero)?;
        let origin = std::slice::from_ref(&zero);
        let v_mu = model.shift_on(mu, origin)? * &e;
        let v_nu = model.shift_on(nu, origin)? * &e;
        // ⟨V_s*V_tV_μ ĥ, V_ν k̂⟩ = ⟨V_tV_μ ĥ, V_sV_ν k̂⟩
        let lhs_left = model.shift_on(t, std::slice::from_ref(mu))? * &v_mu;
        let lhs_right = model.shift_on(s, std::slice::from_ref(nu))? * &v_nu;
        let lhs = lhs_right.adjoint() * lhs_left;
        // ⟨V_tV_s*V_μ ĥ, V_ν k̂⟩ = ⟨V_s*V_μ ĥ, V_t*V_ν k̂⟩
        let a = model.shift_adjoint_on(s, w.elements())? * &v_mu;
        let b = model.shift_adjoint_on(t, w.elements())? * &v_nu;
        let rhs = b.adjoint() * a;
        Ok(linalg::op_norm(&(lhs - rhs)))
    }

    fn nica_restricted(&self, s: &GroupElement, mu: &GroupElement, nu: &GroupElement) -> Result<f64> {
        let lattice = self.rep.lattice();
        let zero = lattice.zero();
        let b_point = lattice.decompose(&nu.sub(mu))?.plus;
        let w = self.model.support.extended([&zero, &b_point]);
        let mut extra: Vec<GroupElement> = w.elements().to_vec();
        extra.extend(w.translated(s));
        extra.extend(w.translated(mu));
        extra.extend([mu.clone(), nu.clone(), s.add(nu)]);
        let model = self.extended_model(&extra)?;
        let e = model.embedding(&zero)?;
        let origin = std::slice::from_ref(&zero);
        let v_mu = model.shift_on(mu, origin)? * &e;
        let v_nu = model.shift_on(nu, origin)? * &e;
        // ⟨V_s*V_μ ĥ, V_ν k̂⟩ = ⟨V_μ ĥ, V_sV_ν k̂⟩
        let right = model.shift_on(s, std::slice::from_ref(nu))? * &v_nu;
        let lhs = right.adjoint() * &v_mu;
        // ⟨V_μV_s* ĥ, V_ν k̂⟩ = ⟨V_s* ĥ, V_μ*V_ν k̂⟩
        let a = model.shift_adjoint_on(s, w.elements())? * &e;
        let b = model.shift_adjoint_on(mu, w.elements())? * &v_nu;
        let rhs = b.adjoint() * a;
        Ok(linalg::op_norm(&(lhs - rhs)))
    }

    /// `max |⟨V_μ ĥ, V_ν k̂⟩ − ⟨T_{μ−ν} h, k⟩|` over support points `μ, ν` and
    /// basis vectors `h, k`.
    pub fn gram_criterion_defect(&self) -> Result<f64> {
        let pts = self.model.support.elements();
        let mut worst = 0.0f64;
        for mu in pts {
            let a = self.model.columns(std::slice::from_ref(mu))?;
            for nu in pts {
                let b = self.model.columns(std::slice::from_ref(nu))?;
                let pairing = b.adjoint() * &a;
                let t = self.rep.evaluate_at(&mu.sub(nu))?;
                worst = worst.max(linalg::max_abs(&(pairing - t)));
            }
        }
        Ok(worst)
    }
}

/// Uniqueness criterion at truncation: both dilations reproduce
/// `⟨V_μ ĥ, V_ν k̂⟩ = ⟨T_{μ−ν} h, k⟩`, and they agree with each other on the
/// points they share.
pub fn compare_minimal_dilations(a: &DilationSpace, b: &DilationSpace) -> Result<f64> {
    if a.rep.dim() != b.rep.dim() || a.rep.lattice() != b.rep.lattice() {
        return Err(Error::InvalidArgument("dilations of different representations".into()));
    }
    let mut worst = a.gram_criterion_defect()?.max(b.gram_criterion_defect()?);
    let common: Vec<GroupElement> = a
        .support()
        .elements()
        .iter()
        .filter(|g| b.support().contains(g))
        .cloned()
        .collect();
    for mu in &common {
        let xa = a.model.columns(std::slice::from_ref(mu))?;
        let xb = b.model.columns(std::slice::from_ref(mu))?;
        for nu in &common {
            let ya = a.model.columns(std::slice::from_ref(nu))?;
            let yb = b.model.columns(std::slice::from_ref(nu))?;
            let d = ya.adjoint() * &xa - yb.adjoint() * &xb;
            worst = worst.max(linalg::max_abs(&d));
        }
    }
    Ok(worst)
}
