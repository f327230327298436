//! Dense complex matrix helpers shared by every module.
//!
//! Everything here works on `nalgebra::DMatrix<Complex<f64>>`. Operator norms
//! are spectral norms (largest singular value); Hermitian spectra come from a
//! symmetrized copy of the input so that tiny rounding asymmetries never
//! produce complex eigenvalues.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen, SVD};
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Builds a matrix from real row-major data.
pub fn from_real_rows(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    CMatrix::from_fn(rows, cols, |i, j| c(data[i * cols + j], 0.0))
}

/// Spectral norm. Zero for empty matrices.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let svd = SVD::new(m.clone(), false, false);
    svd.singular_values.iter().cloned().fold(0.0, f64::max)
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Returns `(M + M*)/2` together with `‖M - M*‖ / 2`.
pub fn hermitian_part(m: &CMatrix) -> (CMatrix, f64) {
    let adj = m.adjoint();
    let skew = (m - &adj) * c(0.5, 0.0);
    let herm = (m + &adj) * c(0.5, 0.0);
    (herm, op_norm(&skew))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of matrices, first factor outermost.
pub fn kron_all<'a, I: IntoIterator<Item = &'a CMatrix>>(factors: I) -> CMatrix {
    factors
        .into_iter()
        .fold(identity(1), |acc, m| kron(&acc, m))
}

pub fn matrix_power(m: &CMatrix, exp: u64) -> CMatrix {
    let mut result = identity(m.nrows());
    let mut base = m.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order. Each eigenvector is rotated so
/// that its first entry of (numerically) maximal modulus is real and positive;
/// eigenvectors belonging to a cluster of equal eigenvalues are ordered by
/// that pivot position. This makes the basis reproducible and, for diagonal
/// inputs, equal to the standard basis.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
    pub asymmetry: f64,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Self {
        let n = m.nrows();
        let (herm, asymmetry) = hermitian_part(m);
        if n == 0 {
            return HermitianEigen {
                values: Vec::new(),
                vectors: zeros(0, 0),
                asymmetry,
            };
        }
        let eig = SymmetricEigen::new(herm);
        let mut vectors = eig.eigenvectors;
        let mut pivots = Vec::with_capacity(n);
        for j in 0..n {
            let mut col = vectors.column_mut(j);
            let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let pivot = col
                .iter()
                .position(|z| z.norm() >= max - 1e-12)
                .unwrap_or(0);
            let z = col[pivot];
            if z.norm() > 0.0 {
                let phase = z.conj() / z.norm();
                col *= phase;
            }
            pivots.push(pivot);
        }
        let values: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        let scale = values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && (values[order[start]] - values[order[end]]).abs() <= 1e-12 * scale {
                end += 1;
            }
            order[start..end].sort_by_key(|&i| pivots[i]);
            start = end;
        }
        let sorted_values = order.iter().map(|&i| values[i]).collect();
        let sorted_vectors = CMatrix::from_fn(n, n, |r, k| vectors[(r, order[k])]);
        HermitianEigen {
            values: sorted_values,
            vectors: sorted_vectors,
            asymmetry,
        }
    }

    pub fn min(&self) -> f64 {
        self.values.last().cloned().unwrap_or(f64::INFINITY)
    }

    pub fn max(&self) -> f64 {
        self.values.first().cloned().unwrap_or(f64::NEG_INFINITY)
    }
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    HermitianEigen::new(m).min()
}

/// Moore-Penrose pseudo-inverse; singular values at or below
/// `rel_tol * σ_max` are treated as zero.
pub fn pinv(m: &CMatrix, rel_tol: f64) -> CMatrix {
    if m.nrows() == 0 || m.ncols() == 0 {
        return zeros(m.ncols(), m.nrows());
    }
    let svd = SVD::new(m.clone(), true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = rel_tol * smax;
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let mut out = zeros(m.ncols(), m.nrows());
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            let v = vt.row(k).adjoint();
            let uk = u.column(k).adjoint();
            out += (v * uk) * c(1.0 / s, 0.0);
        }
    }
    out
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// usual phase correction on the diagonal of R.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let z = CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            let mut col = q.column_mut(j);
            col *= phase;
        }
    }
    q
}

/// Random matrix with i.i.d. complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

/// Random positive semidefinite matrix `G G*` normalised to unit norm.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> CMatrix {
    let g = ginibre(rng, n, rank.max(1));
    let p = &g * g.adjoint();
    let norm = op_norm(&p).max(f64::MIN_POSITIVE);
    p / c(norm, 0.0)
}

/// Random contraction: a Haar unitary scaled by `r`.
pub fn scaled_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize, r: f64) -> CMatrix {
    haar_unitary(rng, n) * c(r, 0.0)
}

/// Random strict contraction with a generic (non-normal) structure.
pub fn random_contraction<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: f64) -> CMatrix {
    let g = ginibre(rng, n, n);
    let norm = op_norm(&g).max(f64::MIN_POSITIVE);
    g * c(bound / norm, 0.0)
}
