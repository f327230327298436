use serde::{Deserialize, Serialize};

/// Numeric thresholds shared by validation and verification routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Algebraic identity checks (commutators, covariance, dilation identities).
    pub tol: f64,
    /// Eigenvalue floor for positivity verdicts, before dimension scaling.
    pub tol_psd: f64,
    /// Relative eigenvalue threshold below which Gram directions are null.
    pub rank_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol: 1e-9,
            tol_psd: 1e-8,
            rank_tol: 1e-10,
        }
    }
}

impl Tolerances {
    /// Positivity floor for an `n × n` matrix: `tol_psd · √n`.
    pub fn psd_floor(&self, n: usize) -> f64 {
        self.tol_psd * (n.max(1) as f64).sqrt()
    }
}
