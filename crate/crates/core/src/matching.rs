//! Bottleneck matching of two zero lists under the hyperbolic metric.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::ZeroList;
use crate::cauchy::PathMeasure;
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::geometry::beta;

/// Largest instance the exact matcher accepts.
pub const MAX_POINTS: usize = 2000;

/// Bijection `i -> perm[i]` with cost `max_i β(z_i, z*_{perm[i]})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    pub perm: Vec<usize>,
    pub cost: f64,
}

impl Pairing {
    /// Cost recomputed from the points.
    pub fn recompute_cost(&self, z: &[Complex64], zs: &[Complex64]) -> f64 {
        self.perm
            .iter()
            .enumerate()
            .map(|(i, &j)| beta(z[i], zs[j]))
            .fold(0.0, f64::max)
    }

    pub fn pairs(&self, z: &[Complex64], zs: &[Complex64]) -> Vec<(Complex64, Complex64)> {
        self.perm
            .iter()
            .enumerate()
            .map(|(i, &j)| (z[i], zs[j]))
            .collect()
    }
}

/// `β(z_i, z*_j)` for all `i, j`, row-major.
pub fn distance_matrix(z: &[Complex64], zs: &[Complex64], exec: Exec) -> Vec<Vec<f64>> {
    map_range(exec, z.len(), |i| {
        zs.iter().map(|&w| beta(z[i], w)).collect()
    })
}

/// Bipartite matching restricted to entries `<= threshold`.
struct Matcher<'a> {
    dist: &'a [Vec<f64>],
    threshold: f64,
    row_of: Vec<Option<usize>>,
    col_of: Vec<Option<usize>>,
    /// Columns that may not be used (owned by fixed rows).
    blocked: Vec<bool>,
    stamp: Vec<usize>,
    epoch: usize,
}

impl<'a> Matcher<'a> {
    fn new(dist: &'a [Vec<f64>], threshold: f64) -> Self {
        let n = dist.len();
        Self {
            dist,
            threshold,
            row_of: vec![None; n],
            col_of: vec![None; n],
            blocked: vec![false; n],
            stamp: vec![0; n],
            epoch: 0,
        }
    }

    fn allowed(&self, i: usize, j: usize) -> bool {
        !self.blocked[j] && self.dist[i][j] <= self.threshold
    }

    /// Kuhn augmenting search from row `i`; rows below `frozen` keep their columns.
    fn augment(&mut self, i: usize, frozen: usize) -> bool {
        let n = self.dist.len();
        for j in 0..n {
            if !self.allowed(i, j) || self.stamp[j] == self.epoch {
                continue;
            }
            self.stamp[j] = self.epoch;
            let free = match self.row_of[j] {
                None => true,
                Some(k) => k >= frozen && self.augment(k, frozen),
            };
            if free {
                self.row_of[j] = Some(i);
                self.col_of[i] = Some(j);
                return true;
            }
        }
        false
    }

    fn try_augment(&mut self, i: usize, frozen: usize) -> bool {
        self.epoch += 1;
        self.augment(i, frozen)
    }

    fn perfect(&mut self) -> bool {
        (0..self.dist.len()).all(|i| self.col_of[i].is_some() || self.try_augment(i, 0))
    }
}

/// True when a perfect matching uses only pairs with `β <= threshold`.
pub fn perfect_matching_exists(dist: &[Vec<f64>], threshold: f64) -> bool {
    Matcher::new(dist, threshold).perfect()
}

/// Optimal bottleneck pairing of two point lists (multiplicities expanded).
///
/// The smallest threshold admitting a perfect matching is found by binary
/// search over the sorted distances; among optimal matchings the
/// lexicographically smallest permutation is returned.
pub fn bottleneck_match_points(z: &[Complex64], zs: &[Complex64]) -> Result<Pairing> {
    if z.len() != zs.len() {
        return Err(Error::Cardinality {
            left: z.len(),
            right: zs.len(),
        });
    }
    let n = z.len();
    if n > MAX_POINTS {
        return Err(Error::Domain(format!(
            "{n} points exceed the matcher cap of {MAX_POINTS}"
        )));
    }
    if n == 0 {
        return Ok(Pairing {
            perm: Vec::new(),
            cost: 0.0,
        });
    }
    let dist = distance_matrix(z, zs, Exec::default());
    let mut values: Vec<f64> = dist.iter().flatten().copied().collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let (mut lo, mut hi) = (0, values.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching_exists(&dist, values[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let threshold = values[lo];
    let perm = lexicographic_matching(&dist, threshold);
    let cost = perm
        .iter()
        .enumerate()
        .map(|(i, &j)| dist[i][j])
        .fold(0.0, f64::max);
    Ok(Pairing { perm, cost })
}

fn lexicographic_matching(dist: &[Vec<f64>], threshold: f64) -> Vec<usize> {
    let n = dist.len();
    let mut m = Matcher::new(dist, threshold);
    assert!(m.perfect(), "threshold admits a perfect matching");
    for i in 0..n {
        for j in 0..n {
            if m.blocked[j] || dist[i][j] > threshold {
                continue;
            }
            let current = m.col_of[i].expect("perfect");
            if current == j {
                break;
            }
            // move i onto j and re-seat j's owner among the unfixed rows
            let saved = (m.row_of.clone(), m.col_of.clone());
            let owner = m.row_of[j].expect("perfect");
            m.row_of[current] = None;
            m.row_of[j] = Some(i);
            m.col_of[i] = Some(j);
            m.col_of[owner] = None;
            m.blocked[j] = true;
            let ok = m.try_augment(owner, i + 1);
            m.blocked[j] = false;
            if ok {
                break;
            }
            m.row_of = saved.0;
            m.col_of = saved.1;
        }
        let j = m.col_of[i].expect("perfect");
        m.blocked[j] = true;
    }
    m.col_of.iter().map(|c| c.expect("perfect")).collect()
}

pub fn bottleneck_match(z: &ZeroList, zs: &ZeroList) -> Result<Pairing> {
    bottleneck_match_points(&z.expanded_points(), &zs.expanded_points())
}

/// Displacement summary of a pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingDiagnostics {
    pub displacements: Vec<f64>,
    pub sup: f64,
    /// `(lower edge, upper edge, count)` per bin.
    pub histogram: Vec<(f64, f64, usize)>,
    pub path: PathMeasure,
}

pub fn pairing_diagnostics(
    p: &Pairing,
    z: &ZeroList,
    zs: &ZeroList,
    bins: usize,
) -> Result<PairingDiagnostics> {
    let (a, b) = (z.expanded_points(), zs.expanded_points());
    if a.len() != b.len() || p.perm.len() != a.len() {
        return Err(Error::Cardinality {
            left: a.len(),
            right: b.len(),
        });
    }
    let pairs = p.pairs(&a, &b);
    let displacements: Vec<f64> = pairs.iter().map(|&(x, y)| beta(x, y)).collect();
    let sup = displacements.iter().copied().fold(0.0, f64::max);
    let bins = bins.max(1);
    let width = if sup > 0.0 { sup / bins as f64 } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for &d in &displacements {
        counts[((d / width) as usize).min(bins - 1)] += 1;
    }
    let histogram = counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(k, c)| (k as f64 * width, (k + 1) as f64 * width, c))
        .collect();
    Ok(PairingDiagnostics {
        displacements,
        sup,
        histogram,
        path: PathMeasure::from_pairs(&pairs)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identical_lists_cost_zero() {
        let z = ZeroList::from_points(&[c(0.1, 0.2), c(-0.5, 0.3), c(0.7, -0.1)]).unwrap();
        let p = bottleneck_match(&z, &z).unwrap();
        assert_eq!(p.cost, 0.0);
        assert_eq!(p.perm, vec![0, 1, 2]);
        let d = pairing_diagnostics(&p, &z, &z, 4).unwrap();
        assert!(d.displacements.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn two_point_example() {
        let z = [c(0.1, 0.0), c(0.9, 0.0)];
        let zs = [c(0.15, 0.0), c(0.85, 0.0)];
        let p = bottleneck_match_points(&z, &zs).unwrap();
        assert_eq!(p.perm, vec![0, 1]);
        let expect = beta(z[0], zs[0]).max(beta(z[1], zs[1]));
        assert!((p.cost - expect).abs() < 1e-15);
        let d = pairing_diagnostics(
            &p,
            &ZeroList::from_points(&z[..1]).unwrap(),
            &ZeroList::from_points(&zs[..1]).unwrap(),
            3,
        );
        assert!(d.is_err());
    }

    #[test]
    fn single_pair_histogram() {
        let z = ZeroList::from_points(&[c(0.3, 0.0)]).unwrap();
        let zs = ZeroList::from_points(&[c(0.4, 0.0)]).unwrap();
        let p = bottleneck_match(&z, &zs).unwrap();
        let d = pairing_diagnostics(&p, &z, &zs, 5).unwrap();
        assert_eq!(d.histogram.len(), 1);
        assert_eq!(d.path.segments().len(), 1);
    }

    #[test]
    fn size_mismatch() {
        assert!(matches!(
            bottleneck_match_points(&[c(0.1, 0.0)], &[]),
            Err(Error::Cardinality { .. })
        ));
    }

    #[test]
    fn feasibility_monotone_in_threshold() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.gen_range(1..9);
            let mut pt = || Complex64::from_polar(0.9 * rng.gen::<f64>(), TAU * rng.gen::<f64>());
            let z: Vec<_> = (0..n).map(|_| pt()).collect();
            let zs: Vec<_> = (0..n).map(|_| pt()).collect();
            let dist = distance_matrix(&z, &zs, Exec::Sequential);
            let mut vals: Vec<f64> = dist.iter().flatten().copied().collect();
            vals.sort_by(f64::total_cmp);
            let feas: Vec<bool> = vals
                .iter()
                .map(|&t| perfect_matching_exists(&dist, t))
                .collect();
            assert!(feas.windows(2).all(|w| !w[0] || w[1]));
            assert!(*feas.last().unwrap());
        }
    }
}
