use diskfn::matching::{bottleneck_match_points, distance_matrix, perfect_matching_exists};
use diskfn::Exec;
use num_complex::Complex64;
use proptest::prelude::*;

fn pt() -> impl Strategy<Value = Complex64> {
    (0.0f64..0.9, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn lists() -> impl Strategy<Value = (Vec<Complex64>, Vec<Complex64>)> {
    (1usize..9).prop_flat_map(|n| {
        (
            prop::collection::vec(pt(), n),
            prop::collection::vec(pt(), n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cost_is_mobius_invariant((z, w) in lists(), a in pt(), rot in 0.0f64..6.28) {
        let m = |p: Complex64| Complex64::from_polar(1.0, rot) * (a - p) / (1.0 - a.conj() * p);
        let zm: Vec<_> = z.iter().map(|&p| m(p)).collect();
        let wm: Vec<_> = w.iter().map(|&p| m(p)).collect();
        let c0 = bottleneck_match_points(&z, &w).unwrap().cost;
        let c1 = bottleneck_match_points(&zm, &wm).unwrap().cost;
        prop_assert!((c0 - c1).abs() < 1e-9);
    }

    #[test]
    fn cost_is_symmetric((z, w) in lists()) {
        let a = bottleneck_match_points(&z, &w).unwrap();
        let b = bottleneck_match_points(&w, &z).unwrap();
        prop_assert!((a.cost - b.cost).abs() < 1e-12);
    }

    #[test]
    fn pairing_is_bijection_attaining_cost((z, w) in lists()) {
        let p = bottleneck_match_points(&z, &w).unwrap();
        let mut seen = p.perm.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..z.len()).collect::<Vec<_>>());
        prop_assert!((p.recompute_cost(&z, &w) - p.cost).abs() < 1e-12);
        let d = distance_matrix(&z, &w, Exec::Sequential);
        prop_assert!(perfect_matching_exists(&d, p.cost));
        prop_assert!(p.cost == 0.0 || !perfect_matching_exists(&d, p.cost * (1.0 - 1e-9)));
    }
}
