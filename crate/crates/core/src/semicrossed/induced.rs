use serde::Serialize;

use crate::dilation::SupportSet;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::representation::NicaRep;

use super::system::{CovariantPair, CovarianceReport, DynSystem, StarRep};

/// The induced pair on `H₀ ⊗ ℓ²(F)` together with its truncation report.
#[derive(Debug, Clone)]
pub struct InducedPair {
    pub pair: CovariantPair,
    pub report: InducedReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InducedReport {
    /// `max ‖W*W − I‖` restricted to columns `δ_t ⊗ h` with `t + gen ∈ F`.
    pub interior_isometry_defect: f64,
    /// Number of (generator, column) pairs where `t + gen` leaves `F`; on
    /// these the truncated shift is zero rather than isometric.
    pub boundary_columns: usize,
    pub covariance: CovarianceReport,
    pub passed: bool,
}

/// `σ̃(A) = ⊕_t σ₀(α_t(A))` and `W_gen δ_t = δ_{t+gen}` truncated to `F`.
/// Coordinates are support-major: index `pos(t)·n₀ + p`.
pub fn induced_representation(system: &DynSystem, sigma0: &StarRep, support: &SupportSet) -> Result<InducedPair> {
    let algebra = system.algebra();
    let lattice = system.lattice();
    let n0 = sigma0.dim();
    let pts = support.elements();
    let n = n0 * pts.len();
    for t in pts {
        if !t.in_monoid() {
            return Err(Error::NotInMonoid(format!("support point {t} of an induced representation")));
        }
    }

    let mut images = Vec::with_capacity(algebra.len());
    for b in algebra.basis() {
        let mut m = linalg::zeros(n, n);
        for (k, t) in pts.iter().enumerate() {
            let block = sigma0.apply(algebra, &system.alpha(t, b)?)?;
            m.view_mut((k * n0, k * n0), (n0, n0)).copy_from(&block);
        }
        images.push(m);
    }
    let sigma = StarRep::explicit(algebra, images)?;

    let id = linalg::identity(n0);
    let mut boundary_columns = 0;
    let mut interior_isometry_defect = 0.0f64;
    let mut generators = Vec::new();
    for (i, factor) in lattice.factors().iter().enumerate() {
        let mut group = Vec::new();
        for j in 0..factor.rank() {
            let g = lattice.generator(i, j);
            let mut w = linalg::zeros(n, n);
            let mut interior = Vec::new();
            for (k, t) in pts.iter().enumerate() {
                match support.position(&t.add(&g)) {
                    Some(target) => {
                        w.view_mut((target * n0, k * n0), (n0, n0)).copy_from(&id);
                        interior.push(k);
                    }
                    None => boundary_columns += 1,
                }
            }
            if !interior.is_empty() {
                let cols = CMatrix::from_columns(
                    &interior
                        .iter()
                        .flat_map(|&k| (0..n0).map(move |p| k * n0 + p))
                        .map(|c| w.column(c).into_owned())
                        .collect::<Vec<_>>(),
                );
                let gram = cols.adjoint() * &cols;
                let dev = linalg::op_norm(&(gram - linalg::identity(interior.len() * n0)));
                interior_isometry_defect = interior_isometry_defect.max(dev);
            }
            group.push(w);
        }
        generators.push(group);
    }
    let rep = NicaRep::direct(lattice, generators, system.tol())?;
    let pair = CovariantPair::new(system.clone(), sigma, rep)?;
    let covariance = pair.validate()?;
    let passed = covariance.passed && interior_isometry_defect <= system.tol();
    Ok(InducedPair {
        pair,
        report: InducedReport {
            interior_isometry_defect,
            boundary_columns,
            covariance,
            passed,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::linalg::C64;
    use crate::semicrossed::system::Algebra;

    fn grid(l: &Lattice, depth: u32) -> SupportSet {
        SupportSet::new(l, l.enumerate_grid(depth, 1000).unwrap().into_elements()).unwrap()
    }

    #[test]
    fn unilateral_shift_block() {
        let l = Lattice::integer_grid(1);
        let sys = DynSystem::trivial(&l, 1, 1e-9);
        let ind = induced_representation(&sys, &StarRep::identity(sys.algebra()), &grid(&l, 3)).unwrap();
        let w = ind.pair.rep().generator_matrix(0, 0);
        let shift = CMatrix::from_fn(4, 4, |i, j| if i == j + 1 { linalg::ONE } else { linalg::ZERO });
        assert_eq!(w, shift);
        assert_eq!(ind.report.boundary_columns, 1);
        assert!(ind.report.passed);
    }

    #[test]
    fn trivial_action_amplifies() {
        let l = Lattice::integer_grid(1);
        let sys = DynSystem::trivial(&l, 2, 1e-9);
        let ind = induced_representation(&sys, &StarRep::identity(sys.algebra()), &grid(&l, 2)).unwrap();
        for (img, b) in ind.pair.sigma().images().iter().zip(sys.algebra().basis()) {
            assert_eq!(img, &linalg::kron(&linalg::identity(3), b));
        }
    }

    #[test]
    fn inner_action_two_factors() {
        let l = Lattice::integer_grid(2);
        let u1 = CMatrix::from_fn(2, 2, |i, j| if i == j { C64::from_polar(1.0, 0.4 + i as f64) } else { linalg::ZERO });
        let u2 = CMatrix::from_fn(2, 2, |i, j| if i == j { C64::from_polar(1.0, -1.1 * i as f64) } else { linalg::ZERO });
        let sys = DynSystem::new(Algebra::full(2), &l, vec![vec![u1], vec![u2]], 1e-9).unwrap();
        let ind = induced_representation(&sys, &StarRep::identity(sys.algebra()), &grid(&l, 2)).unwrap();
        assert!(ind.report.covariance.covariance.defect <= 1e-10);
        assert!(ind.report.covariance.nica.passed);
        assert_eq!(ind.report.interior_isometry_defect, 0.0);
        assert!(ind.report.passed);
    }
}
