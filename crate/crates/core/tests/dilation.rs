mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use nicadil::dilation::{build_dilation, compare_minimal_dilations, gram_form, SupportSet};
use nicadil::error::Error;
use nicadil::lattice::{GroupElement, Lattice};
use nicadil::representation::{kernel_positivity, regular_kernel, NicaRep};
use nicadil::schur::{compression_isometry, lift_compress_check, schur_product, BlockMatrix};
use nicadil::tolerance::Tolerances;

fn tensor_rep(seed: u64, k: usize, n: usize) -> (Lattice, NicaRep, Vec<Vec<M>>) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let lattice = Lattice::integer_grid(k);
    let legs: Vec<Vec<M>> = (0..k)
        .map(|_| {
            let isometric = r.random_bool(0.2);
            factor_legs(&mut r, n, 1, isometric)
        })
        .collect();
    let rep = NicaRep::tensor(&lattice, legs.clone(), 1e-9).unwrap();
    (lattice, rep, legs)
}

fn grid_support(l: &Lattice, depth: u32) -> SupportSet {
    SupportSet::new(l, l.enumerate_grid(depth, 1000).unwrap().into_elements()).unwrap()
}

fn pt(l: &Lattice, flat: &[i64]) -> GroupElement {
    l.element_from_flat(flat).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn evaluation_laws(seed in any::<u64>(), k in 1usize..=2, a in prop::collection::vec(-3i64..=3, 2), b in prop::collection::vec(0i64..=3, 2)) {
        let (l, rep, legs) = tensor_rep(seed, k, 2);
        prop_assert!(rep.validate().passed);
        let s = pt(&l, &b[..k]);
        let t = pt(&l, &b.iter().rev().cloned().collect::<Vec<_>>()[..k]);
        let st = rep.evaluate_at(&s.add(&t)).unwrap();
        prop_assert!(spectral_norm(&(st - rep.evaluate_at(&s).unwrap() * rep.evaluate_at(&t).unwrap())) < 1e-12);
        let g = pt(&l, &a[..k]);
        let tg = rep.evaluate_at(&g).unwrap();
        prop_assert!(spectral_norm(&(rep.evaluate_at(&g.neg()).unwrap() - tg.adjoint())) < 1e-12);
        prop_assert!(spectral_norm(&tg) <= 1.0 + 1e-12);
        prop_assert!(max_abs(&(tg - tensor_at(&legs, &g))) < 1e-12);
    }

    #[test]
    fn kernel_is_positive(seed in any::<u64>(), k in 1usize..=3, n in 1usize..=6) {
        let (l, rep, legs) = tensor_rep(seed, k, 2);
        let mut r = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let pts = random_points(&mut r, &l, n, 3);
        let kp = kernel_positivity(&rep, &pts, &Tolerances::default(), true).unwrap();
        prop_assert!(kp.positive);
        prop_assert!((kp.min_eigenvalue - min_eig(&kernel_oracle(&legs, &pts))).abs() < 1e-10);
        let f = kp.factorization.unwrap();
        prop_assert!(f.product_defect < 1e-12);
        prop_assert!(f.factor_min_eigenvalues.iter().all(|&e| e >= -1e-10));
    }

    #[test]
    fn dilation_identities(seed in any::<u64>(), k in 1usize..=2) {
        let (l, rep, _) = tensor_rep(seed, k, 2);
        let depth = if k == 1 { 4 } else { 2 };
        let dil = build_dilation(&rep, &grid_support(&l, depth), &Tolerances::default()).unwrap();
        let summary = dil.summary();
        prop_assert!(summary.embedding_defect < 1e-12);
        prop_assert!(summary.gram_min_eigenvalue >= -Tolerances::default().psd_floor(summary.raw_dimension));
        prop_assert!(dil.rank() >= rep.dim());
        let gens: Vec<GroupElement> = (0..k).map(|i| l.generator(i, 0)).collect();
        for g in &gens {
            prop_assert!(dil.verify_isometry(g).unwrap() < 1e-9);
            prop_assert!(dil.verify_regularity(&g.neg()).unwrap() < 1e-9);
        }
        if k == 2 {
            let d = dil.verify_nica_dilation(&gens[0], &gens[1], &gens[1], &gens[0]).unwrap();
            prop_assert!(d.full < 1e-9);
            prop_assert!(d.restricted.unwrap() < 1e-9);
            let mixed = gens[0].sub(&gens[1]);
            prop_assert!(dil.verify_regularity(&mixed).unwrap() < 1e-9);
        }
        prop_assert!(dil.gram_criterion_defect().unwrap() < 1e-10);
    }

    #[test]
    fn support_order_is_irrelevant(seed in any::<u64>()) {
        let (l, rep, _) = tensor_rep(seed, 2, 2);
        let a = build_dilation(&rep, &grid_support(&l, 2), &Tolerances::default()).unwrap();
        let mut pts = l.enumerate_grid(2, 100).unwrap().into_elements();
        pts[1..].reverse();
        let b = build_dilation(&rep, &SupportSet::new(&l, pts).unwrap(), &Tolerances::default()).unwrap();
        prop_assert!(compare_minimal_dilations(&a, &b).unwrap() <= 1e-10);
        prop_assert_eq!(a.rank(), b.rank());
    }

    #[test]
    fn schur_identity(seed in any::<u64>(), m in 1usize..=4) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = nicadil::schur::random_commuting_pair(&mut r, m, 2, 2, true);
        let lc = lift_compress_check(&a, &b, 1e-10, 12).unwrap();
        prop_assert!(lc.defect <= 1e-10);
        prop_assert!(lc.isometry_defect <= 1e-12);
        prop_assert!(lc.lift_commutator <= 1e-10);
        prop_assert!(min_eig(&lc.rhs) >= -1e-10);
        let rr = compression_isometry(m, 4);
        let h = gaussian(&mut r, m * 4, 1);
        prop_assert!(((&rr * &h).norm() - h.norm()).abs() < 1e-12);
    }

    #[test]
    fn scalar_schur_products_stay_positive(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let g = gaussian(&mut r, n, 2);
        let h = gaussian(&mut r, n, 3);
        let (x, y) = (&g * g.adjoint(), &h * h.adjoint());
        let blocks = |m: &M| BlockMatrix::from_fn(n, 1, |i, j| M::from_element(1, 1, m[(i, j)])).unwrap();
        let p = schur_product(&blocks(&x), &blocks(&y)).unwrap().assembled();
        prop_assert!(max_abs(&(&p - x.component_mul(&y))) < 1e-12);
        prop_assert!(min_eig(&p) >= -1e-10);
    }
}

#[test]
fn scalar_kernel() {
    let l = Lattice::integer_grid(1);
    let rep = NicaRep::direct(&l, vec![vec![M::from_element(1, 1, cz(0.5, 0.0))]], 1e-9).unwrap();
    let k = regular_kernel(&rep, &[pt(&l, &[0]), pt(&l, &[1])]).unwrap();
    assert_eq!(k.assembled[(0, 1)], cz(0.5, 0.0));
    assert_eq!(k.asymmetry, 0.0);
    let g = gram_form(&rep, &SupportSet::new(&l, vec![pt(&l, &[0]), pt(&l, &[1])]).unwrap()).unwrap();
    assert!((min_eig(&g.matrix) - 0.5).abs() < 1e-12);
}

/// `T₁ = T₂ = S` for the nilpotent shift `S`: commuting, but `T₁*T₂ ≠ T₂T₁*`.
fn nilpotent_pair() -> (Lattice, NicaRep) {
    let l = Lattice::integer_grid(2);
    let s = M::from_fn(2, 2, |i, j| cz(if i == 0 && j == 1 { 1.0 } else { 0.0 }, 0.0));
    let rep = NicaRep::direct(&l, vec![vec![s.clone()], vec![s]], 1e-9).unwrap();
    (l, rep)
}

#[test]
fn non_nica_family_is_detected() {
    let (l, rep) = nilpotent_pair();
    assert!(!rep.validate().passed);
    // I − T₁*T₁ − T₂*T₂ + (T₁T₂)*T₁T₂ = diag(1, −1) shows up on the unit square
    let pts = [pt(&l, &[0, 0]), pt(&l, &[1, 0]), pt(&l, &[0, 1]), pt(&l, &[1, 1])];
    let kp = kernel_positivity(&rep, &pts, &Tolerances::default(), false).unwrap();
    assert!(kp.min_eigenvalue < -1e-6, "min eig {}", kp.min_eigenvalue);
    assert!(!kp.positive);
    let support = SupportSet::new(&l, pts.to_vec()).unwrap();
    assert!(matches!(
        build_dilation(&rep, &support, &Tolerances::default()),
        Err(Error::GramNotPsd { .. })
    ));
}

#[test]
fn rejected_inputs() {
    let l = Lattice::integer_grid(1);
    let big = vec![vec![M::from_element(1, 1, cz(1.2, 0.0))]];
    assert!(matches!(NicaRep::direct(&l, big, 1e-9), Err(Error::NormExceeded { .. })));
    let two = Lattice::new(vec![nicadil::lattice::FactorSpec::real("r", &["1", "2/3"]).unwrap()]).unwrap();
    let x = M::from_fn(2, 2, |i, j| cz(if i == 0 && j == 1 { 0.5 } else { 0.0 }, 0.0));
    let y = x.adjoint();
    assert!(matches!(
        NicaRep::direct(&two, vec![vec![x, y]], 1e-9),
        Err(Error::NonCommuting(_))
    ));
    let a = BlockMatrix::from_fn(1, 2, |_, _| x_of(0.5)).unwrap();
    let b = BlockMatrix::from_fn(1, 2, |_, _| x_of(0.5).adjoint()).unwrap();
    assert!(matches!(
        lift_compress_check(&a, &b, 1e-10, 12),
        Err(Error::NonCommutingEntries { .. })
    ));
}

fn x_of(v: f64) -> M {
    M::from_fn(2, 2, |i, j| cz(if i == 0 && j == 1 { v } else { 0.0 }, 0.0))
}

#[test]
fn mixed_real_points_are_not_in_monoid() {
    let l = Lattice::new(vec![nicadil::lattice::FactorSpec::real("r", &["1", "1.41421356237309504880"]).unwrap()]).unwrap();
    let rep = NicaRep::direct(&l, vec![vec![x_of(0.3), x_of(0.2)]], 1e-9).unwrap();
    let g = l.element(vec![vec![-1, 1]]).unwrap();
    assert!(matches!(rep.evaluate_at(&g), Err(Error::NotInMonoid(_))));
    assert!(rep.evaluate_at(&l.element(vec![vec![2, 1]]).unwrap()).is_ok());
}

#[test]
fn isometric_collapse() {
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let l = Lattice::integer_grid(2);
    let legs = vec![vec![unitary(&mut r, 2)], vec![unitary(&mut r, 3)]];
    let rep = NicaRep::tensor(&l, legs, 1e-9).unwrap();
    let dil = build_dilation(&rep, &grid_support(&l, 2), &Tolerances::default()).unwrap();
    assert_eq!(dil.rank(), 6);
}
