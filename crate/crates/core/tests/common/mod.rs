//! Random inputs and independent reference computations shared by the
//! integration tests. Nothing here calls the library's own evaluators.
#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use nicadil::lattice::{GroupElement, Lattice};

pub type Complex64 = Complex<f64>;
pub type M = DMatrix<Complex64>;

pub fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn eye(n: usize) -> M {
    M::identity(n, n)
}

pub fn gaussian<R: Rng>(rng: &mut R, r: usize, c: usize) -> M {
    M::from_fn(r, c, |_, _| cz(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub fn spectral_norm(m: &M) -> f64 {
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Unitary from the polar part of a Gaussian matrix.
pub fn unitary<R: Rng>(rng: &mut R, n: usize) -> M {
    let svd = gaussian(rng, n, n).svd(true, true);
    svd.u.unwrap() * svd.v_t.unwrap()
}

/// Contraction of norm exactly `r`, generically non-normal.
pub fn contraction<R: Rng>(rng: &mut R, n: usize, r: f64) -> M {
    let g = gaussian(rng, n, n);
    let s = spectral_norm(&g);
    g * cz(r / s, 0.0)
}

pub fn power(m: &M, k: u64) -> M {
    let mut out = eye(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

pub fn kron(a: &M, b: &M) -> M {
    a.kronecker(b)
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eig(m: &M) -> f64 {
    let h = (m + m.adjoint()) * cz(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Commuting contractions for one factor with `m` generators, built as
/// scaled polynomials in one random contraction.
pub fn factor_legs<R: Rng>(rng: &mut R, n: usize, m: usize, isometric: bool) -> Vec<M> {
    if isometric {
        let u = unitary(rng, n);
        return (1..=m).map(|k| power(&u, k as u64)).collect();
    }
    let r0 = rng.random_range(0.1..1.0);
    let x = contraction(rng, n, r0);
    (0..m)
        .map(|k| {
            let a: f64 = rng.random_range(-1.0..1.0);
            let p = &x * cz(a, 0.0) + power(&x, k as u64 + 2) * cz(1.0 - a.abs(), 0.0);
            let s = spectral_norm(&p).max(1e-300);
            let r: f64 = rng.random_range(0.1..1.0);
            if s > r {
                p * cz(r / s, 0.0)
            } else {
                p
            }
        })
        .collect()
}

/// Leg evaluation of one factor at integer coefficients `c`:
/// `(Π L_j^{c_j⁻})* (Π L_j^{c_j⁺})` is only valid for sign-pure `c`, which
/// is what cyclic and monoid-supported differences produce.
pub fn leg_at(legs: &[M], c: &[i64]) -> M {
    let n = legs[0].nrows();
    let mut plus = eye(n);
    let mut minus = eye(n);
    for (l, &k) in legs.iter().zip(c) {
        if k >= 0 {
            plus = &plus * power(l, k as u64);
        } else {
            minus = &minus * power(l, (-k) as u64);
        }
    }
    minus.adjoint() * plus
}

/// `T_g` of a tensor representation over integer cyclic factors:
/// `⊗_i leg_i(g_i)`.
pub fn tensor_at(legs: &[Vec<M>], g: &GroupElement) -> M {
    let mut out = eye(1);
    for (i, l) in legs.iter().enumerate() {
        out = kron(&out, &leg_at(l, g.factor(i)));
    }
    out
}

/// The operator matrix `[T_{s_j − s_i}]`.
pub fn kernel_oracle(legs: &[Vec<M>], points: &[GroupElement]) -> M {
    let n = legs.iter().map(|l| l[0].nrows()).product::<usize>();
    let p = points.len();
    let mut k = M::zeros(p * n, p * n);
    for (i, si) in points.iter().enumerate() {
        for (j, sj) in points.iter().enumerate() {
            k.view_mut((i * n, j * n), (n, n)).copy_from(&tensor_at(legs, &sj.sub(si)));
        }
    }
    k
}

/// Random monoid points with coefficients in `0..=max`, distinct, 0 first.
pub fn random_points<R: Rng>(rng: &mut R, lattice: &Lattice, count: usize, max: i64) -> Vec<GroupElement> {
    let mut out = vec![lattice.zero()];
    let total = lattice.total_generators();
    let mut guard = 0;
    while out.len() < count && guard < 1000 {
        guard += 1;
        let flat: Vec<i64> = (0..total).map(|_| rng.random_range(0..=max)).collect();
        let g = lattice.element_from_flat(&flat).unwrap();
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

pub fn max_abs(m: &M) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
