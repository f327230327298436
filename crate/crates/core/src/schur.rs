//! Operator-valued Schur products and the lift-and-compress identity
//! `R*(ÃB̃)R = A □ B` that proves positivity of `A □ B`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianEigen};

/// Default largest block count for which the `O(m⁴)` commutation check and
/// the explicit lift are attempted.
pub const DEFAULT_SCHUR_CAP: usize = 12;

/// An `m × m` array of `block_dim × block_dim` complex matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    m: usize,
    block_dim: usize,
    blocks: Vec<CMatrix>,
}

impl BlockMatrix {
    /// `blocks` is row-major: entry `(i, j)` is `blocks[i * m + j]`.
    pub fn new(m: usize, block_dim: usize, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != m * m {
            return Err(Error::ShapeMismatch(format!(
                "expected {} blocks, got {}",
                m * m,
                blocks.len()
            )));
        }
        if let Some(b) = blocks
            .iter()
            .find(|b| b.nrows() != block_dim || b.ncols() != block_dim)
        {
            return Err(Error::ShapeMismatch(format!(
                "block of shape {}x{} in a block matrix with block_dim {block_dim}",
                b.nrows(),
                b.ncols()
            )));
        }
        Ok(BlockMatrix { m, block_dim, blocks })
    }

    pub fn from_fn(m: usize, block_dim: usize, mut f: impl FnMut(usize, usize) -> CMatrix) -> Result<Self> {
        let mut blocks = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                blocks.push(f(i, j));
            }
        }
        Self::new(m, block_dim, blocks)
    }

    /// Splits a square matrix into `block_dim`-sized blocks.
    pub fn from_assembled(full: &CMatrix, block_dim: usize) -> Result<Self> {
        if block_dim == 0 || full.nrows() != full.ncols() || full.nrows() % block_dim != 0 {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix cannot be split into {block_dim}x{block_dim} blocks",
                full.nrows(),
                full.ncols()
            )));
        }
        let m = full.nrows() / block_dim;
        Self::from_fn(m, block_dim, |i, j| {
            full.view((i * block_dim, j * block_dim), (block_dim, block_dim))
                .into_owned()
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn block(&self, i: usize, j: usize) -> &CMatrix {
        &self.blocks[i * self.m + j]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn assembled(&self) -> CMatrix {
        let b = self.block_dim;
        let mut out = linalg::zeros(self.m * b, self.m * b);
        for i in 0..self.m {
            for j in 0..self.m {
                out.view_mut((i * b, j * b), (b, b)).copy_from(self.block(i, j));
            }
        }
        out
    }

    /// `max ‖B(j,i) − B(i,j)*‖`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.m {
            for j in i..self.m {
                let d = self.block(j, i) - self.block(i, j).adjoint();
                worst = worst.max(linalg::op_norm(&d));
            }
        }
        worst
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.block_dim != other.block_dim {
            return Err(Error::ShapeMismatch(format!(
                "block matrices {}x{} (block {}) and {}x{} (block {})",
                self.m, self.m, self.block_dim, other.m, other.m, other.block_dim
            )));
        }
        Ok(())
    }
}

/// `A □ B = [A_ij B_ij]`.
pub fn schur_product(a: &BlockMatrix, b: &BlockMatrix) -> Result<BlockMatrix> {
    a.check_same_shape(b)?;
    let blocks = a
        .blocks
        .iter()
        .zip(&b.blocks)
        .map(|(x, y)| x * y)
        .collect();
    BlockMatrix::new(a.m, a.block_dim, blocks)
}

/// `max ‖[A_ij, B_kl]‖` over all pairs of entries.
pub fn max_entry_commutator(a: &BlockMatrix, b: &BlockMatrix, cap: usize) -> Result<f64> {
    a.check_same_shape(b)?;
    if a.m > cap {
        return Err(Error::CapExceeded {
            what: "pairwise entry commutation check".into(),
            size: a.m,
            cap,
        });
    }
    let mut worst = 0.0f64;
    for x in &a.blocks {
        for y in &b.blocks {
            worst = worst.max(linalg::op_norm(&linalg::commutator(x, y)));
        }
    }
    Ok(worst)
}

/// `I_m ⊗ A`: `m` diagonal copies of the assembled `A`.
pub fn lift_left(a: &BlockMatrix) -> CMatrix {
    linalg::kron(&linalg::identity(a.m), &a.assembled())
}

/// `[B_ij ⊗ I_m]`: block `(i, j)` holds `m` diagonal copies of `B_ij`.
pub fn lift_right(b: &BlockMatrix) -> CMatrix {
    let m = b.m;
    let d = b.block_dim;
    let mut out = linalg::zeros(m * m * d, m * m * d);
    for i in 0..m {
        for j in 0..m {
            let lifted = linalg::kron(&linalg::identity(m), b.block(i, j));
            out.view_mut((i * m * d, j * m * d), (m * d, m * d))
                .copy_from(&lifted);
        }
    }
    out
}

/// The isometry `R: H^(m) → H^(m²)` placing `h_k` in copy `(k−1)m + k`
/// (1-based), i.e. with `m` zero copies between consecutive entries.
pub fn compression_isometry(m: usize, block_dim: usize) -> CMatrix {
    let mut r = linalg::zeros(m * m * block_dim, m * block_dim);
    for k in 0..m {
        for p in 0..block_dim {
            r[((k * m + k) * block_dim + p, k * block_dim + p)] = linalg::ONE;
        }
    }
    r
}

#[derive(Debug, Clone)]
pub struct LiftCompress {
    /// `R*(ÃB̃)R`.
    pub lhs: CMatrix,
    /// `A □ B`, assembled.
    pub rhs: CMatrix,
    /// `‖lhs − rhs‖`.
    pub defect: f64,
    /// `max ‖[A_ij, B_kl]‖`.
    pub entry_commutator: f64,
    /// `‖ÃB̃ − B̃Ã‖`.
    pub lift_commutator: f64,
    /// `‖R*R − I‖`.
    pub isometry_defect: f64,
}

/// Materializes `Ã`, `B̃` and `R` and checks `R*(ÃB̃)R = A □ B`.
pub fn lift_compress_check(a: &BlockMatrix, b: &BlockMatrix, tol: f64, cap: usize) -> Result<LiftCompress> {
    let entry_commutator = max_entry_commutator(a, b, cap)?;
    if entry_commutator > tol {
        return Err(Error::NonCommutingEntries {
            defect: entry_commutator,
        });
    }
    let a_lift = lift_left(a);
    let b_lift = lift_right(b);
    let r = compression_isometry(a.m, a.block_dim);
    let ab = &a_lift * &b_lift;
    let lift_commutator = linalg::op_norm(&(&ab - &b_lift * &a_lift));
    let lhs = r.adjoint() * &ab * &r;
    let rhs = schur_product(a, b)?.assembled();
    let defect = linalg::op_norm(&(&lhs - &rhs));
    let isometry_defect = linalg::op_norm(&(r.adjoint() * &r - linalg::identity(r.ncols())));
    Ok(LiftCompress {
        lhs,
        rhs,
        defect,
        entry_commutator,
        lift_commutator,
        isometry_defect,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Positivity {
    pub min_eigenvalue: f64,
    pub positive: bool,
}

/// Eigenvalue floor of a Hermitian block matrix, judged at `-tol_psd`.
pub fn check_positive(m: &BlockMatrix, tol_hermitian: f64, tol_psd: f64) -> Result<Positivity> {
    let defect = m.hermitian_defect();
    if defect > tol_hermitian {
        return Err(Error::NotHermitian { defect });
    }
    let min_eigenvalue = HermitianEigen::new(&m.assembled()).min();
    Ok(Positivity {
        min_eigenvalue,
        positive: min_eigenvalue >= -tol_psd,
    })
}

/// A pair with tensor-structured entries `A_ij = X_ij ⊗ I` and
/// `B_ij = I ⊗ Y_ij`, so every entry of `A` commutes with every entry of `B`.
/// With `psd`, `[X_ij]` and `[Y_ij]` are random PSD block matrices.
pub fn random_commuting_pair<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    left_dim: usize,
    right_dim: usize,
    psd: bool,
) -> (BlockMatrix, BlockMatrix) {
    let draw = |rng: &mut R, d: usize| {
        if psd {
            let rank = rng.random_range(1..=m * d);
            linalg::random_psd(rng, m * d, rank)
        } else {
            linalg::ginibre(rng, m * d, m * d)
        }
    };
    let x = BlockMatrix::from_assembled(&draw(rng, left_dim), left_dim).expect("square by construction");
    let y = BlockMatrix::from_assembled(&draw(rng, right_dim), right_dim).expect("square by construction");
    let (il, ir) = (linalg::identity(left_dim), linalg::identity(right_dim));
    let a = BlockMatrix::from_fn(m, left_dim * right_dim, |i, j| linalg::kron(x.block(i, j), &ir)).expect("uniform blocks");
    let b = BlockMatrix::from_fn(m, left_dim * right_dim, |i, j| linalg::kron(&il, y.block(i, j))).expect("uniform blocks");
    (a, b)
}
