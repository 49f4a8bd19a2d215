use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_interior, CurveWire, JordanCurveApprox};
use crate::blaschke::ZeroList;
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};

/// Walks stop once they are this close to the curve.
pub const ABSORPTION: f64 = 1e-4;
pub const DEFAULT_WALKS: usize = 10_000;
const MAX_STEPS: usize = 100_000;
const TOTAL_TOLERANCE: f64 = 1e-3;

/// How arc masses of harmonic measure are obtained.
///
/// `moments > 0` reweights sampled masses with [`moment_matched`] up to that degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HarmonicMethod {
    /// Closed form for curves flagged as round disks, walks otherwise.
    Auto {
        walks: usize,
        seed: u64,
        moments: usize,
    },
    /// Walk-on-spheres sampling, even for disks.
    MonteCarlo {
        walks: usize,
        seed: u64,
        moments: usize,
    },
}

impl Default for HarmonicMethod {
    fn default() -> Self {
        HarmonicMethod::Auto {
            walks: DEFAULT_WALKS,
            seed: 0,
            moments: 0,
        }
    }
}

/// `∫_0^1 ((a + s(b - a) - c)/r)^k ds` for `k = 0..=degree`.
fn edge_moments(a: Complex64, b: Complex64, c: Complex64, r: f64, degree: usize) -> Vec<Complex64> {
    let (p, q) = ((a - c) / r, (b - c) / r);
    let d = q - p;
    // pk, qk hold p^{k+1}, q^{k+1}
    let (mut pk, mut qk) = (p, q);
    let mut out = Vec::with_capacity(degree + 1);
    for k in 0..=degree {
        out.push(if d.norm() < 1e-9 {
            ((p + q) * 0.5).powu(k as u32)
        } else {
            (qk - pk) / (d * (k + 1) as f64)
        });
        pk *= p;
        qk *= q;
    }
    out
}

/// Sampled edge masses of `ω(z, ·)` adjusted so that the mean-value identities
/// `∫ h dω = h(z)` hold exactly for `h = 1, Re w^k, Im w^k` (`k <= degree`),
/// `w = (ξ - c)/r` centred on the curve. The adjustment is the weighted
/// least-squares correction `q = p + diag(p) Aᵀλ`, so edges no walk reached
/// keep zero mass.
pub fn moment_matched(
    curve: &JordanCurveApprox,
    z: Complex64,
    masses: &[f64],
    degree: usize,
) -> Result<Vec<f64>> {
    let n = curve.len();
    if masses.len() != n {
        return Err(Error::Domain("mass vector does not match the curve".into()));
    }
    let c = curve.points().iter().sum::<Complex64>() / n as f64;
    let r = curve
        .points()
        .iter()
        .map(|p| (p - c).norm())
        .fold(0.0, f64::max);
    let rows = 2 * degree + 1;
    let mut a = nalgebra::DMatrix::<f64>::zeros(rows, n);
    for i in 0..n {
        let (x, y) = curve.edge(i);
        let m = edge_moments(x, y, c, r, degree);
        a[(0, i)] = 1.0;
        for k in 1..=degree {
            a[(2 * k - 1, i)] = m[k].re;
            a[(2 * k, i)] = m[k].im;
        }
    }
    let w = (z - c) / r;
    let mut target = nalgebra::DVector::<f64>::zeros(rows);
    target[0] = 1.0;
    for k in 1..=degree {
        let v = w.powu(k as u32);
        target[2 * k - 1] = v.re;
        target[2 * k] = v.im;
    }
    let p = nalgebra::DVector::from_column_slice(masses);
    let weighted = a.clone() * nalgebra::DMatrix::from_diagonal(&p);
    let gram = &weighted * a.transpose();
    let rhs = target - &a * &p;
    let lambda = gram
        .svd(true, true)
        .solve(&rhs, 1e-13)
        .map_err(|e| Error::AtlasInconsistent(format!("moment system: {e}")))?;
    let q = p + weighted.transpose() * lambda;
    Ok(q.iter().copied().collect())
}

/// Uniform bucket grid over the curve's bounding box for nearest-edge queries.
pub struct EdgeIndex<'a> {
    curve: &'a JordanCurveApprox,
    origin: Complex64,
    cell: f64,
    size: usize,
    buckets: Vec<Vec<usize>>,
}

impl<'a> EdgeIndex<'a> {
    pub fn new(curve: &'a JordanCurveApprox) -> Self {
        let pts = curve.points();
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in pts {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let size = ((curve.len() as f64).sqrt() * 2.0).ceil().max(1.0) as usize;
        let cell = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12) / size as f64;
        let mut buckets = vec![Vec::new(); size * size];
        let clamp = |v: f64| (v.floor().max(0.0) as usize).min(size - 1);
        for i in 0..curve.len() {
            let (a, b) = curve.edge(i);
            let (x0, x1) = (
                clamp((a.re.min(b.re) - lo.re) / cell),
                clamp((a.re.max(b.re) - lo.re) / cell),
            );
            let (y0, y1) = (
                clamp((a.im.min(b.im) - lo.im) / cell),
                clamp((a.im.max(b.im) - lo.im) / cell),
            );
            for y in y0..=y1 {
                for x in x0..=x1 {
                    buckets[y * size + x].push(i);
                }
            }
        }
        Self {
            curve,
            origin: lo,
            cell,
            size,
            buckets,
        }
    }

    fn edge_distance(&self, i: usize, z: Complex64) -> f64 {
        let (a, b) = self.curve.edge(i);
        let d = b - a;
        let t = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
        (a + d * t - z).norm()
    }

    /// Same result as [`JordanCurveApprox::distance`] for points in the bounding box.
    pub fn distance(&self, z: Complex64) -> (f64, usize) {
        let rel = (z - self.origin) / self.cell;
        if rel.re < 0.0 || rel.im < 0.0 || rel.re >= self.size as f64 || rel.im >= self.size as f64
        {
            return self.curve.distance(z);
        }
        let (cx, cy) = (rel.re as i64, rel.im as i64);
        let n = self.size as i64;
        let mut best = (f64::INFINITY, 0);
        for r in 0..n {
            for y in (cy - r).max(0)..=(cy + r).min(n - 1) {
                let ring_row = y == cy - r || y == cy + r;
                let step = if ring_row { 1 } else { (2 * r).max(1) };
                let mut x = cx - r;
                while x <= cx + r {
                    if (0..n).contains(&x) {
                        for &i in &self.buckets[(y * n + x) as usize] {
                            let d = self.edge_distance(i, z);
                            if d < best.0 || (d == best.0 && i < best.1) {
                                best = (d, i);
                            }
                        }
                    }
                    x += step;
                }
            }
            if best.0 <= r as f64 * self.cell {
                break;
            }
        }
        best
    }
}

/// Edge reached by a walk on circles of half the distance to the curve, or
/// `None` if it does not settle within the step cap.
pub fn walk_exit_edge(index: &EdgeIndex, start: Complex64, rng: &mut ChaCha8Rng) -> Option<usize> {
    let mut x = start;
    for _ in 0..MAX_STEPS {
        let (d, edge) = index.distance(x);
        if d < ABSORPTION {
            return Some(edge);
        }
        x += Complex64::from_polar(0.5 * d, TAU * rng.gen::<f64>());
    }
    None
}

fn exact_disk_masses(
    curve: &JordanCurveApprox,
    (center, radius): (Complex64, f64),
    z: Complex64,
) -> Vec<f64> {
    // ω(z, arc) = |T(arc)|/2π with T the automorphism of the disk taking z to 0
    let p = (z - center) / radius;
    let t = |w: Complex64| {
        let w = (w - center) / radius;
        ((w - p) / (Complex64::new(1.0, 0.0) - p.conj() * w)).arg()
    };
    (0..curve.len())
        .map(|i| {
            let (a, b) = curve.edge(i);
            (t(b) - t(a)).rem_euclid(TAU) / TAU
        })
        .collect()
}

/// Harmonic measure of each edge of the curve seen from `z` inside it.
///
/// Round disks use the exact Poisson masses; otherwise `walks` walk-on-spheres
/// paths are run, walk `k` drawing from ChaCha8 stream `k` of `seed`, so the
/// same seed gives the same masses and different sources share their random
/// numbers.
pub fn harmonic_measure(
    z: Complex64,
    curve: &JordanCurveApprox,
    method: HarmonicMethod,
) -> Result<Vec<f64>> {
    check_interior(z)?;
    if curve.distance(z).0 < ABSORPTION || !curve.contains(z) {
        return Err(Error::Domain(format!(
            "source {z} is not strictly inside the curve"
        )));
    }
    let (walks, seed, moments) = match method {
        HarmonicMethod::Auto {
            walks,
            seed,
            moments,
        } => {
            if let Some(disk) = curve.disk {
                return Ok(exact_disk_masses(curve, disk, z));
            }
            (walks, seed, moments)
        }
        HarmonicMethod::MonteCarlo {
            walks,
            seed,
            moments,
        } => (walks, seed, moments),
    };
    if walks == 0 {
        return Err(Error::Domain("at least one walk is required".into()));
    }
    let index = EdgeIndex::new(curve);
    let exits = map_range(Exec::default(), walks, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        walk_exit_edge(&index, z, &mut rng)
    });
    let mut counts = vec![0usize; curve.len()];
    let mut done = 0usize;
    for e in exits.into_iter().flatten() {
        counts[e] += 1;
        done += 1;
    }
    if done == 0 {
        return Err(Error::AtlasInconsistent("no walk reached the curve".into()));
    }
    let sampled: Vec<f64> = counts.into_iter().map(|c| c as f64 / done as f64).collect();
    if moments == 0 {
        return Ok(sampled);
    }
    moment_matched(curve, z, &sampled, moments)
}

/// Edge masses of `ν_u` and `ν_b` on one curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcMasses {
    pub nu_u: Vec<f64>,
    pub nu_b: Vec<f64>,
    pub u_count: usize,
    pub b_count: usize,
    /// Vertex where cumulative arc masses start.
    pub start: usize,
}

impl ArcMasses {
    /// `ν = ν_u - ν_b` per edge.
    pub fn difference(&self) -> Vec<f64> {
        self.nu_u
            .iter()
            .zip(&self.nu_b)
            .map(|(a, b)| a - b)
            .collect()
    }

    /// `ν(γ(ξ_j, ξ_i))` at every vertex `i`, following the curve from `start`.
    pub fn cumulative(&self) -> Vec<f64> {
        let nu = self.difference();
        let n = nu.len();
        let mut f = vec![0.0; n];
        let mut acc = 0.0;
        for k in 0..n {
            let i = (self.start + k) % n;
            f[i] = acc;
            acc += nu[i];
        }
        f
    }

    /// `sup |ν(γ)|` over arcs `γ` between vertices.
    pub fn max_arc_mass(&self) -> f64 {
        let f = self.cumulative();
        let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

/// Harmonic measures `ν_u`, `ν_b` of the zeros of `u` and `b` on each curve.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMeasureAtlas {
    pub curves: Vec<JordanCurveApprox>,
    pub masses: Vec<ArcMasses>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasWire {
    pub curves: Vec<CurveWire>,
    pub masses: Vec<ArcMasses>,
}

fn zeros_inside(points: &[Complex64], curve: &JordanCurveApprox) -> Vec<Complex64> {
    points
        .iter()
        .copied()
        .filter(|&p| curve.contains(p))
        .collect()
}

fn summed_masses(
    points: &[Complex64],
    curve: &JordanCurveApprox,
    method: HarmonicMethod,
) -> Result<Vec<f64>> {
    let mut total = vec![0.0; curve.len()];
    for &p in points {
        for (t, m) in total.iter_mut().zip(harmonic_measure(p, curve, method)?) {
            *t += m;
        }
    }
    Ok(total)
}

impl HarmonicMeasureAtlas {
    /// Masses of the zeros of `u` (and of `b`, if given) lying inside each curve.
    pub fn build(
        u: &ZeroList,
        b: Option<&ZeroList>,
        curves: &[JordanCurveApprox],
        method: HarmonicMethod,
    ) -> Result<Self> {
        let (up, bp) = (
            u.expanded_points(),
            b.map(ZeroList::expanded_points).unwrap_or_default(),
        );
        let mut masses = Vec::with_capacity(curves.len());
        for curve in curves {
            let (ui, bi) = (zeros_inside(&up, curve), zeros_inside(&bp, curve));
            let m = ArcMasses {
                nu_u: summed_masses(&ui, curve, method)?,
                nu_b: summed_masses(&bi, curve, method)?,
                u_count: ui.len(),
                b_count: bi.len(),
                start: curve.start_index(),
            };
            for (nu, count) in [(&m.nu_u, m.u_count), (&m.nu_b, m.b_count)] {
                let total: f64 = nu.iter().sum();
                if (total - count as f64).abs() > TOTAL_TOLERANCE {
                    return Err(Error::AtlasInconsistent(format!(
                        "curve {} carries mass {total} for {count} zeros",
                        curve.component_id
                    )));
                }
            }
            masses.push(m);
        }
        Ok(Self {
            curves: curves.to_vec(),
            masses,
        })
    }

    /// Moves the start vertex of curve `k`.
    pub fn with_start(mut self, k: usize, start: usize) -> Result<Self> {
        let n = self
            .curves
            .get(k)
            .ok_or_else(|| Error::Domain(format!("no curve {k}")))?
            .len();
        self.masses[k].start = start % n;
        Ok(self)
    }

    /// `sup |ν(γ)|` over sampled arcs of all curves.
    pub fn max_arc_mass(&self) -> f64 {
        self.masses
            .iter()
            .map(ArcMasses::max_arc_mass)
            .fold(0.0, f64::max)
    }

    pub fn to_wire(&self) -> AtlasWire {
        AtlasWire {
            curves: self.curves.iter().map(JordanCurveApprox::to_wire).collect(),
            masses: self.masses.clone(),
        }
    }

    pub fn from_wire(w: &AtlasWire) -> Result<Self> {
        if w.curves.len() != w.masses.len() {
            return Err(Error::AtlasInconsistent(
                "curve and mass tables differ in length".into(),
            ));
        }
        let curves = w
            .curves
            .iter()
            .map(JordanCurveApprox::from_wire)
            .collect::<Result<Vec<_>>>()?;
        for (c, m) in curves.iter().zip(&w.masses) {
            if m.nu_u.len() != c.len() || m.nu_b.len() != c.len() || m.start >= c.len() {
                return Err(Error::AtlasInconsistent(
                    "mass table does not match its curve".into(),
                ));
            }
        }
        Ok(Self {
            curves,
            masses: w.masses.clone(),
        })
    }
}

/// `(u_1, u_2)`: `u_1` takes the zeros inside some curve at hyperbolic
/// distance more than 1 from it, `u_2` the rest.
pub fn split_zeros_by_contour(
    u: &ZeroList,
    curves: &[JordanCurveApprox],
) -> Result<(ZeroList, ZeroList)> {
    let (mut deep, mut rest) = (Vec::new(), Vec::new());
    for p in u.expanded_points() {
        if curves
            .iter()
            .any(|c| c.contains(p) && c.hyperbolic_distance(p) > 1.0)
        {
            deep.push(p);
        } else {
            rest.push(p);
        }
    }
    Ok((ZeroList::from_points(&deep)?, ZeroList::from_points(&rest)?))
}

/// One point per unit of `ν_u` mass on each curve.
///
/// Starting at the curve's start vertex, the curve is cut into consecutive
/// arcs of unit mass and each arc is represented by its mass median.
pub fn place_representatives(atlas: &HarmonicMeasureAtlas) -> Result<ZeroList> {
    let mut reps = Vec::new();
    for (curve, m) in atlas.curves.iter().zip(&atlas.masses) {
        let total: f64 = m.nu_u.iter().sum();
        let units = total.round();
        if (total - units).abs() > TOTAL_TOLERANCE {
            return Err(Error::AtlasInconsistent(format!(
                "curve {} has non-integer mass {total}",
                curve.component_id
            )));
        }
        let n = curve.len();
        let mut targets = (0..units as usize)
            .map(|i| (i as f64 + 0.5) * total / units)
            .peekable();
        let mut acc = 0.0;
        for k in 0..n {
            let i = (m.start + k) % n;
            let w = m.nu_u[i];
            while let Some(&t) = targets.peek() {
                if t > acc + w && k + 1 < n {
                    break;
                }
                let s = if w > 0.0 {
                    ((t - acc) / w).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let (a, b) = curve.edge(i);
                reps.push(a + (b - a) * s);
                targets.next();
            }
            acc += w;
        }
    }
    ZeroList::from_points(&reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn centered_disk_is_uniform() {
        let curve = JordanCurveApprox::circle(c(0.1, 0.1), 0.3, 64, Vec::new()).unwrap();
        let m = harmonic_measure(c(0.1, 0.1), &curve, HarmonicMethod::default()).unwrap();
        assert!(m.iter().all(|&x| (x - 1.0 / 64.0).abs() < 1e-14));
    }

    #[test]
    fn walks_agree_with_poisson_masses() {
        let curve = JordanCurveApprox::circle(c(0.0, 0.0), 0.5, 128, Vec::new()).unwrap();
        let z = c(0.2, 0.15);
        let exact = harmonic_measure(z, &curve, HarmonicMethod::default()).unwrap();
        let walks = 4000;
        let mc = harmonic_measure(
            z,
            &curve,
            HarmonicMethod::MonteCarlo {
                walks,
                seed: 5,
                moments: 0,
            },
        )
        .unwrap();
        assert!((mc.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for arc in 0..8 {
            let p: f64 = exact[arc * 16..(arc + 1) * 16].iter().sum();
            let q: f64 = mc[arc * 16..(arc + 1) * 16].iter().sum();
            let se = (p * (1.0 - p) / walks as f64).sqrt();
            assert!((p - q).abs() < 3.0 * se + 2e-3, "arc {arc}: {p} vs {q}");
        }
        let again = harmonic_measure(
            z,
            &curve,
            HarmonicMethod::MonteCarlo {
                walks,
                seed: 5,
                moments: 0,
            },
        )
        .unwrap();
        assert_eq!(mc, again);
    }

    #[test]
    fn edge_index_matches_brute_force() {
        let pts: Vec<_> = (0..300)
            .map(|k| {
                let t = TAU * k as f64 / 300.0;
                Complex64::from_polar(0.3 + 0.1 * (3.0 * t).cos(), t) + 0.1
            })
            .collect();
        let curve = JordanCurveApprox::new(pts, 0, Vec::new()).unwrap();
        let index = EdgeIndex::new(&curve);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let z = Complex64::new(rng.gen_range(-0.4..0.6), rng.gen_range(-0.5..0.5));
            let (a, b) = (index.distance(z), curve.distance(z));
            assert!((a.0 - b.0).abs() < 1e-15);
        }
    }

    #[test]
    fn source_outside_is_rejected() {
        let curve = JordanCurveApprox::circle(c(0.0, 0.0), 0.5, 64, Vec::new()).unwrap();
        assert!(harmonic_measure(c(0.7, 0.0), &curve, HarmonicMethod::default()).is_err());
    }

    #[test]
    fn representative_examples() {
        let u = ZeroList::power(2);
        let curve =
            JordanCurveApprox::circle(c(0.0, 0.0), 0.4, 256, vec![(c(0.0, 0.0), 2)]).unwrap();
        let atlas =
            HarmonicMeasureAtlas::build(&u, None, &[curve.clone()], HarmonicMethod::default())
                .unwrap();
        let reps = place_representatives(&atlas).unwrap().expanded_points();
        assert_eq!(reps.len(), 2);
        assert!((reps[0] + reps[1]).norm() < 1e-9);
        let single = HarmonicMeasureAtlas::build(
            &ZeroList::power(1),
            None,
            &[curve],
            HarmonicMethod::default(),
        )
        .unwrap();
        assert_eq!(place_representatives(&single).unwrap().degree(), 1);
    }

    #[test]
    fn split_examples() {
        let curve = JordanCurveApprox::circle(c(0.0, 0.0), 0.9, 256, Vec::new()).unwrap();
        let u = ZeroList::from_points(&[c(0.1, 0.0), c(0.0, -0.2)]).unwrap();
        let (u1, u2) = split_zeros_by_contour(&u, &[curve.clone()]).unwrap();
        assert_eq!((u1.degree(), u2.degree()), (2, 0));
        let near = ZeroList::from_points(&[c(0.85, 0.0), c(0.0, 0.95)]).unwrap();
        let (u1, u2) = split_zeros_by_contour(&near, &[curve]).unwrap();
        assert_eq!((u1.degree(), u2.degree()), (0, 2));
    }
}
