use std::cmp::Ordering;

use proptest::prelude::*;

use nicadil::error::Error;
use nicadil::lattice::{FactorSpec, GroupElement, Lattice};

fn mixed() -> Lattice {
    Lattice::new(vec![
        FactorSpec::cyclic("a", "3/2").unwrap(),
        FactorSpec::real("b", &["1", "1.41421356237309504880"]).unwrap(),
    ])
    .unwrap()
}

fn element(l: &Lattice) -> impl Strategy<Value = GroupElement> {
    let n = l.total_generators();
    let l = l.clone();
    prop::collection::vec(-40i64..=40, n).prop_map(move |flat| l.element_from_flat(&flat).unwrap())
}

fn value(l: &Lattice, g: &GroupElement, i: usize) -> f64 {
    l.approx_value(g, i)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn meet_join_laws(g in element(&mixed()), h in element(&mixed()), k in element(&mixed())) {
        let l = mixed();
        let meet = l.meet(&g, &h).unwrap();
        let join = l.join(&g, &h).unwrap();
        prop_assert_eq!(&meet, &l.meet(&h, &g).unwrap());
        prop_assert_eq!(&join, &l.join(&h, &g).unwrap());
        prop_assert_eq!(l.meet(&g, &g).unwrap(), g.clone());
        prop_assert_eq!(l.join(&g, &l.meet(&g, &h).unwrap()).unwrap(), g.clone());
        prop_assert_eq!(l.meet(&g, &l.join(&g, &h).unwrap()).unwrap(), g.clone());
        prop_assert_eq!(meet.add(&join), g.add(&h));
        prop_assert_eq!(
            l.join(&l.join(&g, &h).unwrap(), &k).unwrap(),
            l.join(&g, &l.join(&h, &k).unwrap()).unwrap()
        );
    }

    #[test]
    fn meet_is_factorwise_min(g in element(&mixed()), h in element(&mixed())) {
        let l = mixed();
        let meet = l.meet(&g, &h).unwrap();
        for i in 0..2 {
            let lo = value(&l, &g, i).min(value(&l, &h, i));
            prop_assert!((value(&l, &meet, i) - lo).abs() < 1e-9);
        }
    }

    #[test]
    fn decompose_reconstructs(g in element(&mixed())) {
        let l = mixed();
        let parts = l.decompose(&g).unwrap();
        prop_assert_eq!(parts.plus.sub(&parts.minus), g.clone());
        prop_assert!(l.meet(&parts.plus, &parts.minus).unwrap().is_zero());
        prop_assert!(l.in_cone(&parts.plus).unwrap());
        prop_assert!(l.in_cone(&parts.minus).unwrap());
    }

    #[test]
    fn order_matches_cone(g in element(&mixed()), h in element(&mixed())) {
        let l = mixed();
        let by_value = (0..2).all(|i| l.compare_factor(&g, &h, i).unwrap() != Ordering::Greater);
        prop_assert_eq!(l.leq(&g, &h).unwrap(), by_value);
        prop_assert_eq!(l.in_cone(&h.sub(&g)).unwrap(), by_value);
    }

    #[test]
    fn evaluation_within_bound(flat in prop::collection::vec(-1000i64..=1000, 3)) {
        let l = mixed();
        let ev = l.parse_element(vec![vec![flat[0]], vec![flat[1], flat[2]]]).unwrap();
        let exact = flat[1] as f64 + flat[2] as f64 * std::f64::consts::SQRT_2;
        prop_assert!((ev.values[1].value - exact).abs() <= ev.values[1].error_bound + 1e-9);
        prop_assert_eq!(ev.values[0].value, 1.5 * flat[0] as f64);
        prop_assert_eq!(ev.in_cone, ev.values.iter().all(|v| v.sign != Ordering::Less));
    }

    #[test]
    fn grids_are_nested(k in 1usize..=3, depth in 0u32..=3) {
        let l = Lattice::integer_grid(k);
        let small = l.enumerate_grid(depth, 1000).unwrap();
        let big = l.enumerate_grid(depth + 1, 1000).unwrap();
        prop_assert_eq!(small.len(), (depth as usize + 1).pow(k as u32));
        prop_assert!(small.contains(&l.zero()));
        prop_assert!(small.elements().iter().all(|g| big.contains(g) && g.in_monoid()));
    }
}

#[test]
fn real_grid_depth_one() {
    let l = Lattice::new(vec![FactorSpec::real("r", &["1", "1.41421356237309504880"]).unwrap()]).unwrap();
    let grid = l.enumerate_grid(1, 100).unwrap();
    let values: Vec<f64> = grid.elements().iter().map(|g| l.approx_value(g, 0)).collect();
    assert_eq!(grid.len(), 4);
    let expected = [0.0, 1.0, std::f64::consts::SQRT_2, 1.0 + std::f64::consts::SQRT_2];
    for (v, e) in values.iter().zip(expected) {
        assert!((v - e).abs() < 1e-15);
    }
}

#[test]
fn non_monoid_cone_point() {
    let l = mixed();
    let g = l.element(vec![vec![0], vec![-1, 1]]).unwrap();
    assert!(l.in_cone(&g).unwrap());
    assert!(!g.in_monoid());
}

#[test]
fn coarse_precision_is_indeterminate() {
    let l = Lattice::with_precision(
        vec![FactorSpec::real("r", &["1", "1.41421356237309504880"]).unwrap()],
        8,
    )
    .unwrap();
    // 1393 − 985√2 ≈ −3.6e-4, inside the interval radius at 8 bits
    let g = l.element(vec![vec![1393, -985]]).unwrap();
    assert!(matches!(l.in_cone(&g), Err(Error::IndeterminateSign(_))));
    assert!(!mixed().in_cone(&mixed().element(vec![vec![0], vec![1393, -985]]).unwrap()).unwrap());
}

#[test]
fn invalid_factors() {
    assert!(matches!(FactorSpec::cyclic("a", "-1"), Err(Error::InvalidFactor(_))));
    assert!(matches!(FactorSpec::real("a", &[]), Err(Error::InvalidFactor(_))));
    assert!(matches!(FactorSpec::cyclic("a", "x"), Err(Error::Parse(_))));
    let l = Lattice::integer_grid(2);
    assert!(matches!(l.element(vec![vec![1]]), Err(Error::ShapeMismatch(_))));
}
