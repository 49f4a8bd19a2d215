use std::collections::HashMap;

use num_complex::Complex64;

use super::JordanCurveApprox;
use crate::blaschke::{circle_min_modulus, ZeroList, CIRCLE_SAMPLES};
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::path::rouche_zero_count;

/// Saddle cells whose center value is this close to the level (relative to
/// the corner values) cannot be resolved.
const SADDLE_MARGIN: f64 = 0.05;
const EDGE_BISECTIONS: usize = 48;

/// Edge of the node lattice: `(i, j, horizontal)` joins node `(i, j)` to
/// `(i + 1, j)` or `(i, j + 1)`.
type EdgeKey = (usize, usize, bool);

/// Closed curves approximating `∂{|b| < δ}` by marching squares on a
/// `resolution × resolution` lattice over `[-1, 1]^2`.
///
/// Crossings are refined by bisection on the lattice edges, so every vertex
/// satisfies `|b| = δ` to rounding. Saddle cells are resolved with the cell
/// center; when the center is too close to the level the topology is
/// reported as ambiguous. Each curve's zeros are found by inclusion and
/// confirmed by the argument principle.
pub fn level_set_components(
    b: &ZeroList,
    delta: f64,
    resolution: usize,
) -> Result<Vec<JordanCurveApprox>> {
    if resolution < 8 {
        return Err(Error::Domain("resolution must be at least 8".into()));
    }
    let points = b.expanded_points();
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let h = 2.0 / (resolution - 1) as f64;
    let outer = 1.0 - 2.0 * h;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta = {delta} not in (0, 1)")));
    }
    let rim = circle_min_modulus(&points, outer, CIRCLE_SAMPLES);
    if delta >= rim {
        return Err(Error::Domain(format!(
            "delta = {delta} reaches the outer lattice circle (min modulus {rim:.6} at r = {outer:.6})"
        )));
    }
    if let Some(z) = points.iter().find(|z| z.norm() >= outer) {
        return Err(Error::Domain(format!(
            "zero {z} outside the lattice circle r = {outer:.6}"
        )));
    }
    let node = |i: usize, j: usize| Complex64::new(-1.0 + i as f64 * h, -1.0 + j as f64 * h);
    let level = |z: Complex64| {
        if z.norm() >= outer {
            1.0 - delta
        } else {
            b.modulus(z) - delta
        }
    };
    let values: Vec<f64> = map_range(Exec::default(), resolution * resolution, |k| {
        level(node(k % resolution, k / resolution))
    });
    let f = |i: usize, j: usize| values[j * resolution + i];

    let mut crossings: HashMap<EdgeKey, Complex64> = HashMap::new();
    let mut crossing = |key: EdgeKey| -> Complex64 {
        *crossings.entry(key).or_insert_with(|| {
            let (i, j, horiz) = key;
            let (a, bnd) = if horiz {
                (node(i, j), node(i + 1, j))
            } else {
                (node(i, j), node(i, j + 1))
            };
            let (mut lo, mut hi) = (a, bnd);
            if level(lo) >= 0.0 {
                std::mem::swap(&mut lo, &mut hi);
            }
            for _ in 0..EDGE_BISECTIONS {
                let mid = (lo + hi) * 0.5;
                if level(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (lo + hi) * 0.5
        })
    };

    // segment map: entry edge -> exit edge, region {|b| < δ} on the left
    let mut next: HashMap<EdgeKey, EdgeKey> = HashMap::new();
    for j in 0..resolution - 1 {
        for i in 0..resolution - 1 {
            let corners = [f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1)];
            let inside = corners.map(|v| v < 0.0);
            let edges: [EdgeKey; 4] = [
                (i, j, true),
                (i + 1, j, false),
                (i, j + 1, true),
                (i, j, false),
            ];
            // walking the cell counter-clockwise, edge k runs from corner k to corner k+1
            let mut exits = Vec::new();
            let mut entries = Vec::new();
            for k in 0..4 {
                let (a, c) = (inside[k], inside[(k + 1) % 4]);
                if a && !c {
                    exits.push(k);
                } else if !a && c {
                    entries.push(k);
                }
            }
            match exits.len() {
                0 => {}
                1 => {
                    next.insert(edges[exits[0]], edges[entries[0]]);
                }
                _ => {
                    let center = level(node(i, j) + Complex64::new(0.5 * h, 0.5 * h));
                    let scale = corners.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    if center.abs() < SADDLE_MARGIN * scale {
                        return Err(Error::AmbiguousTopology(format!(
                            "saddle cell at {} is within resolution of the level",
                            node(i, j)
                        )));
                    }
                    for &e in &exits {
                        let partner = if center < 0.0 {
                            (e + 1) % 4
                        } else {
                            (e + 3) % 4
                        };
                        next.insert(edges[e], edges[partner]);
                    }
                }
            }
        }
    }

    let mut keys: Vec<EdgeKey> = next.keys().copied().collect();
    keys.sort();
    let mut used: HashMap<EdgeKey, bool> = HashMap::new();
    let mut curves = Vec::new();
    for start in keys {
        if used.contains_key(&start) {
            continue;
        }
        let mut pts = Vec::new();
        let mut e = start;
        loop {
            used.insert(e, true);
            pts.push(crossing(e));
            e = *next
                .get(&e)
                .ok_or_else(|| Error::AmbiguousTopology("open level-set chain".into()))?;
            if e == start {
                break;
            }
        }
        let id = curves.len();
        curves.push(JordanCurveApprox::new(pts, id, Vec::new())?);
    }

    let mut assigned = vec![0usize; b.zeros().len()];
    let mut origin_assigned = 0usize;
    for curve in &mut curves {
        if b.origin_order() > 0 && curve.contains(Complex64::new(0.0, 0.0)) {
            curve
                .enclosed_zeros
                .push((Complex64::new(0.0, 0.0), b.origin_order()));
            origin_assigned += 1;
        }
        for (k, &(p, m)) in b.zeros().iter().enumerate() {
            if curve.contains(p.value()) {
                curve.enclosed_zeros.push((p.value(), m));
                assigned[k] += 1;
            }
        }
        let f = |z: Complex64| b.eval(z);
        let count = rouche_zero_count(&f, &[closed(curve)], 1)?;
        if count != curve.zero_count() as i64 {
            return Err(Error::AmbiguousTopology(format!(
                "curve {} winds {count} times but encloses {} listed zeros",
                curve.component_id,
                curve.zero_count()
            )));
        }
    }
    if assigned.iter().any(|&a| a != 1) || (b.origin_order() > 0 && origin_assigned != 1) {
        return Err(Error::AmbiguousTopology(
            "a zero is not enclosed by exactly one curve".into(),
        ));
    }
    Ok(curves)
}

pub(crate) fn closed(curve: &JordanCurveApprox) -> Vec<Complex64> {
    let mut pts = curve.points().to_vec();
    pts.push(pts[0]);
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_level_set_is_circle() {
        let curves = level_set_components(&ZeroList::power(1), 0.5, 257).unwrap();
        assert_eq!(curves.len(), 1);
        assert!((curves[0].length() - PI).abs() < 0.02 * PI);
        assert!(curves[0]
            .points()
            .iter()
            .all(|p| (p.norm() - 0.5).abs() < 1e-12));
        assert_eq!(curves[0].zero_count(), 1);
    }

    #[test]
    fn square_level_set() {
        let curves = level_set_components(&ZeroList::power(2), 0.25, 257).unwrap();
        assert_eq!(curves.len(), 1);
        assert_eq!(curves[0].zero_count(), 2);
        assert!(curves[0]
            .points()
            .iter()
            .all(|p| (p.norm() - 0.5).abs() < 1e-9));
    }

    #[test]
    fn separated_zeros_give_separate_curves() {
        let b = ZeroList::from_points(&[c(0.5, 0.0), c(-0.5, 0.1)]).unwrap();
        let curves = level_set_components(&b, 0.1, 257).unwrap();
        assert_eq!(curves.len(), 2);
        for cv in &curves {
            assert_eq!(cv.zero_count(), 1);
            assert!(cv.signed_area() > 0.0);
            for p in cv.points() {
                assert!((b.modulus(*p) - 0.1).abs() < 0.01);
            }
        }
    }

    #[test]
    fn delta_too_large_is_rejected() {
        let b = ZeroList::from_points(&[c(0.5, 0.0)]).unwrap();
        assert!(matches!(
            level_set_components(&b, 0.999, 65),
            Err(Error::Domain(_))
        ));
    }
}
