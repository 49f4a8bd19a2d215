use diskfn::blaschke::ZeroList;
use diskfn::carleson::separation_split;
use diskfn::fixtures::{geometric_sequence, random_point, rng};
use diskfn::geometry::beta;
use num_complex::Complex64;

/// Chromatic number of the conflict graph `β(z_i, z_j) < s` by backtracking.
fn min_classes(pts: &[Complex64], s: f64) -> usize {
    fn fits(k: usize, i: usize, colors: &mut Vec<usize>, conflict: &[Vec<bool>]) -> bool {
        if i == conflict.len() {
            return true;
        }
        for c in 0..k {
            if (0..i).all(|j| !(conflict[i][j] && colors[j] == c)) {
                colors[i] = c;
                if fits(k, i + 1, colors, conflict) {
                    return true;
                }
            }
        }
        false
    }
    let n = pts.len();
    let conflict: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && beta(pts[i], pts[j]) < s).collect())
        .collect();
    (1..=n)
        .find(|&k| fits(k, 0, &mut vec![0; n], &conflict))
        .unwrap_or(0)
}

fn assert_valid(zeros: &ZeroList, classes: &[ZeroList], s: f64) {
    let mut all: Vec<Complex64> = classes.iter().flat_map(|c| c.expanded_points()).collect();
    let mut orig = zeros.expanded_points();
    let key = |a: &Complex64, b: &Complex64| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
    all.sort_by(key);
    orig.sort_by(key);
    assert_eq!(all, orig);
    for c in classes {
        let p = c.expanded_points();
        for i in 0..p.len() {
            for j in 0..i {
                assert!(beta(p[i], p[j]) >= s);
            }
        }
    }
}

#[test]
fn geometric_sequence_split_is_minimal() {
    for n in 2..=10 {
        let zeros = geometric_sequence(n).unwrap();
        let classes = separation_split(&zeros, 1.0).unwrap();
        assert_valid(&zeros, &classes, 1.0);
        assert!(classes.len() >= 2);
        assert_eq!(
            classes.len(),
            min_classes(&zeros.expanded_points(), 1.0),
            "n = {n}"
        );
    }
}

#[test]
fn random_splits_against_brute_force() {
    let mut r = rng(19);
    let mut optimal = 0;
    for trial in 0..60 {
        let n = 2 + trial % 9;
        let pts: Vec<Complex64> = (0..n).map(|_| random_point(&mut r, 0.9)).collect();
        let zeros = ZeroList::from_points(&pts).unwrap();
        let s = 0.5 + (trial % 5) as f64 * 0.5;
        let classes = separation_split(&zeros, s).unwrap();
        assert_valid(&zeros, &classes, s);
        let best = min_classes(&pts, s);
        assert!(classes.len() >= best);
        optimal += (classes.len() == best) as usize;
    }
    println!("first-fit optimal on {optimal} of 60 instances");
}

#[test]
fn duplicated_point_needs_two_classes() {
    let p = Complex64::new(0.3, 0.2);
    let zeros = ZeroList::from_points(&[p, p]).unwrap();
    assert_eq!(separation_split(&zeros, 1.0).unwrap().len(), 2);
    assert_eq!(min_classes(&[p, p], 1.0), 2);
}
