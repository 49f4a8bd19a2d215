//! Polygonal paths between a Blaschke product and an invertible multiple of
//! another one with displaced zeros, and their certification by zero control.
//!
//! The zeros move along chords `z_k(t) = z_k + t(z*_k - z_k)`. A partition
//! `0 = t_0 < … < t_n = 1` is chosen so that no zero moves more than `alpha` in
//! the hyperbolic metric per step; each step gets an outer correction
//! `g_{j+1}` with `b_{t_j} ≈ b_{t_{j+1}} g_{j+1}`, and the path is the chain of
//! segments `b_{t_j} + s (b_{t_{j+1}} g_{j+1} - b_{t_j})` (times the invertible
//! factor `g_1 … g_j`).

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::{ZeroList, ZeroListWire};
use crate::cauchy::{
    cauchy_on_circle, harmonic_conjugate, outer_correction, outer_factor_at, OuterReport,
    PathMeasure,
};
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::geometry::{beta, hyperbolic_circle};
use crate::grid::{BoundaryGridFunction, GridWire};
use crate::matching::bottleneck_match;

/// Hyperbolic radius of the disks around the zeros that define `Ω`.
pub const OMEGA_RADIUS: f64 = 1.0;
/// Points per hyperbolic circle when `∂Ω` is polygonised.
pub const CIRCLE_POINTS: usize = 256;
/// Maximum number of halvings of `alpha` in [`build_path`].
pub const MAX_REFINEMENTS: usize = 12;
/// Starting step size when none is given.
pub const DEFAULT_ALPHA: f64 = 1.0;
/// Grid used to screen a partition before the full-grid step norms.
const SCREEN_GRID: usize = 1024;

/// `z_k + t (z*_k - z_k)` for each pair.
pub fn interpolate_points(pairs: &[(Complex64, Complex64)], t: f64) -> Vec<Complex64> {
    pairs.iter().map(|&(a, b)| a + (b - a) * t).collect()
}

pub fn interpolate_zeros(pairs: &[(Complex64, Complex64)], t: f64) -> Result<ZeroList> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} not in [0, 1]")));
    }
    ZeroList::from_points(&interpolate_points(pairs, t))
}

/// Hyperbolic length (`ds = 2|dz|/(1 - |z|^2)`) of the chord from `a + s0 d`
/// to `a + s1 d`, `d = b - a`. Bounds `β` between the two points.
pub fn chord_length(a: Complex64, b: Complex64, s0: f64, s1: f64) -> f64 {
    let d = b - a;
    let dd = d.norm_sqr();
    if dd == 0.0 || s1 <= s0 {
        return 0.0;
    }
    // 1 - |a + s d|^2 = dd (s_plus - s)(s - s_minus)
    let p = (a.conj() * d).re / dd;
    let q = (1.0 - a.norm_sqr()) / dd;
    let root = (p * p + q).sqrt();
    let (sm, sp) = (-p - root, -p + root);
    let prim = |s: f64| ((s - sm) / (sp - s)).ln();
    2.0 / (dd.sqrt() * (sp - sm)) * (prim(s1) - prim(s0))
}

/// Greedy partition of `[0, 1]` such that every chord piece has hyperbolic
/// length below `alpha` (hence `β(z_k(t), z_k(t')) < alpha` inside each piece).
pub fn choose_partition(pairs: &[(Complex64, Complex64)], alpha: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0) {
        return Err(Error::Domain("alpha must be positive".into()));
    }
    let worst = |t0: f64, t1: f64| {
        pairs
            .iter()
            .map(|&(a, b)| chord_length(a, b, t0, t1))
            .fold(0.0, f64::max)
    };
    let mut ts = vec![0.0];
    let mut t = 0.0;
    while t < 1.0 {
        if worst(t, 1.0) < alpha {
            ts.push(1.0);
            break;
        }
        let (mut lo, mut hi) = (t, 1.0);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if worst(t, mid) < alpha * (1.0 - 1e-9) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo <= t {
            return Err(Error::Domain("partition does not advance".into()));
        }
        ts.push(lo);
        t = lo;
    }
    Ok(ts)
}

/// One connected piece of a union of hyperbolic disks.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    /// Indices (into the unique centers) of the disks in this piece.
    pub members: Vec<usize>,
    /// Number of zeros, with multiplicity, at the centers.
    pub zero_count: usize,
    /// Exposed boundary arcs as polylines, oriented with the region on the left.
    pub pieces: Vec<Vec<Complex64>>,
}

impl Component {
    pub fn boundary_points(&self) -> impl Iterator<Item = &Complex64> {
        self.pieces.iter().flatten()
    }
}

/// Union of the hyperbolic disks `β(·, c) <= radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskUnion {
    pub centers: Vec<Complex64>,
    pub components: Vec<Component>,
}

impl DiskUnion {
    pub fn boundary_points(&self) -> impl Iterator<Item = &Complex64> {
        self.components.iter().flat_map(Component::boundary_points)
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Components of the union of hyperbolic disks of the given radius around
/// `points` (repeated points count as multiplicity). Disks are merged when
/// their centers are within `2·radius`; each component's boundary is the set
/// of arcs not covered by another disk, cut at the exact circle intersections
/// and subdivided into `per_circle` pieces per full turn.
pub fn hyperbolic_disk_union(points: &[Complex64], radius: f64, per_circle: usize) -> DiskUnion {
    let mut centers: Vec<Complex64> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    for &p in points {
        match centers.iter().position(|&c| (c - p).norm() < 1e-12) {
            Some(k) => mult[k] += 1,
            None => {
                centers.push(p);
                mult.push(1);
            }
        }
    }
    let n = centers.len();
    let circles: Vec<(Complex64, f64)> = centers
        .iter()
        .map(|&c| hyperbolic_circle(c, radius))
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if beta(centers[i], centers[j]) <= 2.0 * radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut components: Vec<Component> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let k = match roots.iter().position(|&x| x == r) {
            Some(k) => k,
            None => {
                roots.push(r);
                components.push(Component {
                    members: Vec::new(),
                    zero_count: 0,
                    pieces: Vec::new(),
                });
                roots.len() - 1
            }
        };
        components[k].members.push(i);
        components[k].zero_count += mult[i];
    }
    for comp in &mut components {
        for &i in &comp.members {
            let (ci, ri) = circles[i];
            let mut cuts: Vec<f64> = (0..per_circle)
                .map(|k| TAU * k as f64 / per_circle as f64)
                .collect();
            for &j in &comp.members {
                if j != i {
                    cuts.extend(intersection_angles(circles[i], circles[j]));
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
            let m = cuts.len();
            let covered = |t: f64| {
                let p = ci + Complex64::from_polar(ri, t);
                comp.members
                    .iter()
                    .any(|&j| j != i && (p - circles[j].0).norm() < circles[j].1)
            };
            let mut run: Vec<Complex64> = Vec::new();
            for k in 0..m {
                let (a, b) = (
                    cuts[k],
                    if k + 1 < m {
                        cuts[k + 1]
                    } else {
                        cuts[0] + TAU
                    },
                );
                if covered(0.5 * (a + b)) {
                    if run.len() > 1 {
                        comp.pieces.push(std::mem::take(&mut run));
                    }
                    run.clear();
                    continue;
                }
                if run.is_empty() {
                    run.push(ci + Complex64::from_polar(ri, a));
                }
                run.push(ci + Complex64::from_polar(ri, b));
            }
            if run.len() > 1 {
                comp.pieces.push(run);
            }
        }
    }
    DiskUnion {
        centers,
        components,
    }
}

fn intersection_angles((c1, r1): (Complex64, f64), (c2, r2): (Complex64, f64)) -> Vec<f64> {
    let dv = c2 - c1;
    let d = dv.norm();
    if d == 0.0 || d >= r1 + r2 || d <= (r1 - r2).abs() {
        return Vec::new();
    }
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let u = dv / d;
    let base = c1 + u * a;
    let off = u * Complex64::new(0.0, h);
    [base + off, base - off]
        .iter()
        .map(|p| (p - c1).arg().rem_euclid(TAU))
        .collect()
}

/// Closed polyline of `n` points on a Euclidean circle, counter-clockwise.
pub fn circle_contour(center: Complex64, radius: f64, n: usize) -> Vec<Complex64> {
    (0..=n)
        .map(|k| center + Complex64::from_polar(radius, TAU * (k % n) as f64 / n as f64))
        .collect()
}

const ROUCHE_FLOOR: f64 = 1e-12;
const ROUCHE_DEPTH: u32 = 30;

fn arg_increment<F>(
    f: &F,
    a: Complex64,
    fa: Complex64,
    b: Complex64,
    fb: Complex64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    let small = fa.norm().min(fb.norm());
    if small < ROUCHE_FLOOR {
        let p = if fa.norm() <= fb.norm() { a } else { b };
        return Err(Error::ContourThroughZero {
            modulus: small,
            re: p.re,
            im: p.im,
        });
    }
    if (fb - fa).norm() <= 0.1 * small {
        return Ok((fb / fa).arg());
    }
    if depth == 0 {
        return Err(Error::ContourThroughZero {
            modulus: small,
            re: a.re,
            im: a.im,
        });
    }
    let m = 0.5 * (a + b);
    let fm = f(m);
    Ok(arg_increment(f, a, fa, m, fm, depth - 1)? + arg_increment(f, m, fm, b, fb, depth - 1)?)
}

/// Winding number of `f` along a closed contour given as polylines (their
/// concatenation must be closed). Each edge is split into `samples` pieces
/// and refined until `|Δf| <= |f|/10` on every piece.
pub fn rouche_zero_count<F>(f: &F, pieces: &[Vec<Complex64>], samples: usize) -> Result<i64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let samples = samples.max(1);
    let mut total = 0.0;
    for piece in pieces {
        let pts: Vec<Complex64> = piece
            .windows(2)
            .flat_map(|w| {
                (0..samples).map(move |k| w[0] + (w[1] - w[0]) * (k as f64 / samples as f64))
            })
            .chain(piece.last().copied())
            .collect();
        let vals = map_range(Exec::default(), pts.len(), |k| f(pts[k]));
        for k in 0..pts.len().saturating_sub(1) {
            total += arg_increment(f, pts[k], vals[k], pts[k + 1], vals[k + 1], ROUCHE_DEPTH)?;
        }
    }
    Ok((total / TAU).round() as i64)
}

/// `min |b|` over the sampled `∂Ω` of its zeros (1 when `b` has no zeros).
pub fn omega_margin(b: &ZeroList) -> f64 {
    let u = hyperbolic_disk_union(&b.expanded_points(), OMEGA_RADIUS, CIRCLE_POINTS);
    u.boundary_points()
        .map(|&w| b.modulus(w))
        .fold(1.0, f64::min)
}

/// A vertex `b_{t} · exp(outer_log)` of the path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathVertex {
    pub t: f64,
    pub zeros: ZeroList,
    /// `log(g_1 ⋯ g_j)` on the grid.
    pub outer_log: BoundaryGridFunction,
}

/// Per-step diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub index: usize,
    pub t0: f64,
    pub t1: f64,
    /// `‖b_{t_j} - b_{t_{j+1}} g_{j+1}‖` on the grid.
    pub step_norm: f64,
    pub outer: OuterReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalPath {
    pub vertices: Vec<PathVertex>,
    /// Matched pairs `(z_k, z*_k)` the path interpolates.
    pub pairs: Vec<(Complex64, Complex64)>,
    pub steps: Vec<StepReport>,
    pub alpha: f64,
    pub refinements: usize,
    /// `min_j min_{∂Ω_j} |b_{t_j}|`.
    pub epsilon: f64,
    /// `‖Σ_j functional_j - functional_total‖`.
    pub telescoping_residual: f64,
    /// `‖2 Im C(σ) - (log|g|)~‖` for the whole path.
    pub functional_sup: f64,
    /// `‖b_{t_n} exp(outer_log_n) - b* g‖` with `g` in closed form.
    pub endpoint_residual: f64,
    pub grid: usize,
}

impl PolygonalPath {
    pub fn ts(&self) -> Vec<f64> {
        self.vertices.iter().map(|v| v.t).collect()
    }

    /// Pairs `(z_k(t_j), z_k(t_{j+1}))` of step `j`.
    pub fn step_pairs(&self, j: usize) -> Vec<(Complex64, Complex64)> {
        let (a, b) = (self.vertices[j].t, self.vertices[j + 1].t);
        interpolate_points(&self.pairs, a)
            .into_iter()
            .zip(interpolate_points(&self.pairs, b))
            .collect()
    }

    pub fn worst_step_norm(&self) -> f64 {
        self.steps.iter().map(|s| s.step_norm).fold(0.0, f64::max)
    }

    pub fn to_wire(&self) -> PolygonalPathWire {
        PolygonalPathWire {
            alpha: self.alpha,
            epsilon: self.epsilon,
            grid: self.grid,
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexWire {
                    t: v.t,
                    zeros: v.zeros.to_wire(),
                    outer_log: v.outer_log.to_wire(),
                })
                .collect(),
            steps: self.steps.clone(),
            functional_sup: self.functional_sup,
            telescoping_residual: self.telescoping_residual,
            endpoint_residual: self.endpoint_residual,
        }
    }

    /// `step,s,theta,modulus` rows of `|V_j + s (V_{j+1} - V_j)|` on `angles`
    /// equispaced boundary points.
    pub fn modulus_csv(&self, s_samples: usize, angles: usize) -> String {
        let mut out = String::from("step,s,theta,modulus\n");
        let stride = (self.grid / angles.max(1)).max(1);
        for j in 0..self.vertices.len().saturating_sub(1) {
            let (v0, v1) = (self.vertex_trace(j), self.vertex_trace(j + 1));
            for k in 0..=s_samples {
                let s = k as f64 / s_samples.max(1) as f64;
                for i in (0..self.grid).step_by(stride) {
                    let val = v0[i] + (v1[i] - v0[i]) * s;
                    let _ = writeln!(
                        out,
                        "{j},{s:.6},{:.12e},{:.12e}",
                        TAU * i as f64 / self.grid as f64,
                        val.norm()
                    );
                }
            }
        }
        out
    }

    /// Boundary trace of vertex `j`.
    pub fn vertex_trace(&self, j: usize) -> Vec<Complex64> {
        let v = &self.vertices[j];
        v.outer_log
            .samples()
            .iter()
            .enumerate()
            .map(|(i, l)| {
                v.zeros.eval(Complex64::from_polar(
                    1.0,
                    TAU * i as f64 / self.grid as f64,
                )) * l.exp()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexWire {
    pub t: f64,
    pub zeros: ZeroListWire,
    pub outer_log: GridWire,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonalPathWire {
    pub alpha: f64,
    pub epsilon: f64,
    pub grid: usize,
    pub vertices: Vec<VertexWire>,
    pub steps: Vec<StepReport>,
    pub functional_sup: f64,
    pub telescoping_residual: f64,
    pub endpoint_residual: f64,
}

fn screen_step_norm(pairs: &[(Complex64, Complex64)]) -> Result<f64> {
    // on the circle b_{t_j} - b_{t_{j+1}} h = b_{t_j}(1 - e^{v})
    let c = cauchy_on_circle(&PathMeasure::from_pairs(pairs)?, SCREEN_GRID)?;
    Ok(c.samples()
        .iter()
        .map(|w| (1.0 - (-2.0 * w.re).exp()).abs())
        .fold(0.0, f64::max))
}

/// Builds the polygonal path from `b` (zeros `z`) to `b* g` (zeros `zs`).
///
/// With `alpha = None` the step size starts at [`DEFAULT_ALPHA`] and is halved
/// (at most [`MAX_REFINEMENTS`] times) until every step norm is below half the
/// observed margin `ε`. With `Some(alpha)` that single partition is used as is.
/// Both inputs are normalised (`λ = 1`) first. When `z` and `zs` coincide the
/// path is the single vertex `b`.
pub fn build_path(
    z: &ZeroList,
    zs: &ZeroList,
    alpha: Option<f64>,
    grid: usize,
) -> Result<PolygonalPath> {
    let pairing = bottleneck_match(z, zs)?;
    let pairs = pairing.pairs(&z.expanded_points(), &zs.expanded_points());
    let mut a = alpha.unwrap_or(DEFAULT_ALPHA);
    if pairs.iter().all(|(p, q)| p == q) {
        let zeros = interpolate_zeros(&pairs, 0.0)?;
        let epsilon = omega_margin(&zeros);
        return assemble(&pairs, &[0.0], vec![zeros], &[], a, 0, epsilon, grid);
    }
    let mut refinements = 0;
    loop {
        let ts = choose_partition(&pairs, a)?;
        let vertex_zeros = ts
            .iter()
            .map(|&t| interpolate_zeros(&pairs, t))
            .collect::<Result<Vec<_>>>()?;
        let epsilon = vertex_zeros.iter().map(omega_margin).fold(1.0, f64::min);
        let step_pairs: Vec<Vec<(Complex64, Complex64)>> = ts
            .windows(2)
            .map(|w| {
                interpolate_points(&pairs, w[0])
                    .into_iter()
                    .zip(interpolate_points(&pairs, w[1]))
                    .collect()
            })
            .collect();
        let screened = if alpha.is_none() {
            step_pairs
                .iter()
                .map(|p| screen_step_norm(p))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max)
        } else {
            0.0
        };
        if alpha.is_none() && screened >= 0.5 * epsilon {
            if refinements == MAX_REFINEMENTS {
                return Err(Error::RefinementExhausted {
                    rounds: refinements,
                    worst: screened,
                    target: 0.5 * epsilon,
                });
            }
            a *= 0.5;
            refinements += 1;
            continue;
        }
        let path = assemble(
            &pairs,
            &ts,
            vertex_zeros,
            &step_pairs,
            a,
            refinements,
            epsilon,
            grid,
        )?;
        if alpha.is_some() || path.worst_step_norm() < 0.5 * epsilon {
            return Ok(path);
        }
        if refinements == MAX_REFINEMENTS {
            return Err(Error::RefinementExhausted {
                rounds: refinements,
                worst: path.worst_step_norm(),
                target: 0.5 * epsilon,
            });
        }
        a *= 0.5;
        refinements += 1;
    }
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    pairs: &[(Complex64, Complex64)],
    ts: &[f64],
    vertex_zeros: Vec<ZeroList>,
    step_pairs: &[Vec<(Complex64, Complex64)>],
    alpha: f64,
    refinements: usize,
    epsilon: f64,
    grid: usize,
) -> Result<PolygonalPath> {
    let mut outer_log = BoundaryGridFunction::zeros(grid)?;
    let mut vertices = Vec::with_capacity(ts.len());
    let mut steps = Vec::with_capacity(step_pairs.len());
    let mut functional_sum = BoundaryGridFunction::new_real(vec![0.0; grid])?;
    let mut v_total = BoundaryGridFunction::new_real(vec![0.0; grid])?;
    vertices.push(PathVertex {
        t: ts[0],
        zeros: vertex_zeros[0].clone(),
        outer_log: outer_log.clone(),
    });
    for (j, sp) in step_pairs.iter().enumerate() {
        let oc = outer_correction(sp, grid)?;
        let two_im = cauchy_on_circle(&PathMeasure::from_pairs(sp)?, grid)?
            .imag_part()
            .scale(2.0);
        let f_j = two_im.zip_with(&harmonic_conjugate(&oc.v)?, |a, b| a - b);
        functional_sum = functional_sum.zip_with(&f_j, |a, b| a + b);
        v_total = v_total.zip_with(&oc.v, |a, b| a + b);
        outer_log = outer_log.zip_with(&oc.log_h(), |a, b| a + b);
        steps.push(StepReport {
            index: j,
            t0: ts[j],
            t1: ts[j + 1],
            step_norm: oc.report.mismatch,
            outer: oc.report,
        });
        vertices.push(PathVertex {
            t: ts[j + 1],
            zeros: vertex_zeros[j + 1].clone(),
            outer_log: outer_log.clone(),
        });
    }
    let two_im_total = cauchy_on_circle(&PathMeasure::from_pairs(pairs)?, grid)?
        .imag_part()
        .scale(2.0);
    let total = two_im_total.zip_with(&harmonic_conjugate(&v_total.real_part())?, |a, b| a - b);
    let telescoping_residual = total.sup_distance(&functional_sum);
    let functional_sup = total.sup_norm();
    let last = vertices.last().expect("at least one vertex");
    let bs = ZeroList::from_points(&pairs.iter().map(|p| p.1).collect::<Vec<_>>())?;
    let endpoint_residual = map_range(Exec::default(), grid, |i| {
        let e = Complex64::from_polar(1.0, TAU * i as f64 / grid as f64);
        let lhs = last.zeros.eval(e) * last.outer_log.samples()[i].exp();
        (lhs - bs.eval(e) * outer_factor_at(pairs, e)).norm()
    })
    .into_iter()
    .fold(0.0, f64::max);
    Ok(PolygonalPath {
        vertices,
        pairs: pairs.to_vec(),
        steps,
        alpha,
        refinements,
        epsilon,
        telescoping_residual,
        functional_sup,
        endpoint_residual,
        grid,
    })
}

/// One failed certification test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationFailure {
    pub step: usize,
    pub s: f64,
    /// Component index, when the failure is a zero-count change.
    pub component: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentCertificate {
    pub step: usize,
    /// `min_j |b_{t_j}|` on `∂Ω_j`.
    pub vertex_margin: f64,
    /// Worst `min |F_s|` on `∂Ω_j` over the sampled `s`.
    pub worst_margin: f64,
    /// Worst `min |F_s|` on the unit-circle grid.
    pub circle_min_modulus: f64,
    pub counts_preserved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub certified: bool,
    /// Global worst margin on the sampled `∂Ω_j`.
    pub epsilon_observed: f64,
    pub eta: f64,
    pub segments: Vec<SegmentCertificate>,
    pub failures: Vec<CertificationFailure>,
}

/// Checks every segment `F_s = b_{t_j} + s (b_{t_{j+1}} g_{j+1} - b_{t_j})` at
/// `s = k/samples_per_segment`:
/// (a) `min |F_s|` on the sampled `∂Ω_j = {β(z, Z(b_{t_j})) = 1}` is at least
/// `eta` times the vertex margin `min |b_{t_j}|` there, and
/// (b) the winding of `F_s` around each component of `∂Ω_j` equals the number
/// of zeros of `b_{t_j}` in that component.
/// `g_{j+1}` is evaluated through its closed-form analytic extension.
pub fn certify_path(
    path: &PolygonalPath,
    eta: f64,
    samples_per_segment: usize,
) -> Result<CertificationReport> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Domain("eta must lie in (0, 1)".into()));
    }
    let samples = samples_per_segment.max(1);
    let mut segments = Vec::new();
    let mut failures = Vec::new();
    let mut eps_obs = f64::INFINITY;
    for j in 0..path.vertices.len().saturating_sub(1) {
        let b0 = &path.vertices[j].zeros;
        let b1 = &path.vertices[j + 1].zeros;
        let sp = path.step_pairs(j);
        let union = hyperbolic_disk_union(&b0.expanded_points(), OMEGA_RADIUS, CIRCLE_POINTS);
        let bpts: Vec<Complex64> = union.boundary_points().copied().collect();
        let vertex_margin = bpts.iter().map(|&w| b0.modulus(w)).fold(1.0, f64::min);
        let mut cert = SegmentCertificate {
            step: j,
            vertex_margin,
            worst_margin: f64::INFINITY,
            circle_min_modulus: f64::INFINITY,
            counts_preserved: true,
        };
        for k in 0..=samples {
            let s = k as f64 / samples as f64;
            let f = |w: Complex64| {
                let a = b0.eval(w);
                a + (b1.eval(w) * outer_factor_at(&sp, w) - a) * s
            };
            let margin = map_range(Exec::default(), bpts.len(), |i| f(bpts[i]).norm())
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            let margin = if bpts.is_empty() { 1.0 } else { margin };
            cert.worst_margin = cert.worst_margin.min(margin);
            let circle = map_range(Exec::default(), path.grid, |i| {
                f(Complex64::from_polar(
                    1.0,
                    TAU * i as f64 / path.grid as f64,
                ))
                .norm()
            })
            .into_iter()
            .fold(f64::INFINITY, f64::min);
            cert.circle_min_modulus = cert.circle_min_modulus.min(circle);
            if !(margin > 0.0 && margin >= eta * vertex_margin) {
                failures.push(CertificationFailure {
                    step: j,
                    s,
                    component: None,
                    reason: format!("margin {margin:e} below {:e}", eta * vertex_margin),
                });
            }
            if circle <= 0.0 {
                failures.push(CertificationFailure {
                    step: j,
                    s,
                    component: None,
                    reason: "segment vanishes on the unit circle".into(),
                });
            }
            for (ci, comp) in union.components.iter().enumerate() {
                match rouche_zero_count(&f, &comp.pieces, 1) {
                    Ok(n) if n == comp.zero_count as i64 => {}
                    Ok(n) => {
                        cert.counts_preserved = false;
                        failures.push(CertificationFailure {
                            step: j,
                            s,
                            component: Some(ci),
                            reason: format!("zero count {n}, expected {}", comp.zero_count),
                        });
                    }
                    Err(e) => {
                        cert.counts_preserved = false;
                        failures.push(CertificationFailure {
                            step: j,
                            s,
                            component: Some(ci),
                            reason: e.to_string(),
                        });
                    }
                }
            }
        }
        eps_obs = eps_obs.min(cert.worst_margin);
        segments.push(cert);
    }
    Ok(CertificationReport {
        certified: failures.is_empty(),
        epsilon_observed: if eps_obs.is_finite() {
            eps_obs
        } else {
            path.epsilon
        },
        eta,
        segments,
        failures,
    })
}

/// `g_t = u_0 exp(t L)` on the grid, where `L` is a logarithm of `u_1 h / u_0`.
///
/// When `target` (the trace of `u_1 h`) is supplied, `exp(L)` must reproduce
/// `target/u_0` to 1e-6; the modulus identity `|g_t| = |u_0|^{1-t}|u_1 h|^t`
/// is checked to 1e-8.
pub fn homotopy_family_eval(
    u0: &ZeroList,
    log_ratio: &BoundaryGridFunction,
    target: Option<&BoundaryGridFunction>,
    t: f64,
) -> Result<BoundaryGridFunction> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} not in [0, 1]")));
    }
    let n = log_ratio.len();
    let base = u0.eval_boundary(n)?;
    let end = base.zip_with(log_ratio, |u, l| u * l.exp());
    if let Some(target) = target {
        if target.len() != n {
            return Err(Error::Domain(
                "target grid differs from the logarithm grid".into(),
            ));
        }
        let residual = base
            .samples()
            .iter()
            .zip(target.samples())
            .zip(log_ratio.samples())
            .map(|((u, v), l)| (l.exp() - v / u).norm())
            .fold(0.0, f64::max);
        if residual > 1e-6 {
            return Err(Error::Branch { residual });
        }
    }
    let g = base.zip_with(log_ratio, |u, l| u * (l * t).exp());
    let worst = g
        .samples()
        .iter()
        .zip(base.samples())
        .zip(end.samples())
        .map(|((g, u), e)| (g.norm() - u.norm().powf(1.0 - t) * e.norm().powf(t)).abs())
        .fold(0.0, f64::max);
    if worst > 1e-8 * end.sup_norm().max(1.0) {
        return Err(Error::Branch { residual: worst });
    }
    Ok(g)
}

/// `(1 - s) a + s b` pointwise, exposed for the CLI.
pub fn blend(a: &BoundaryGridFunction, b: &BoundaryGridFunction, s: f64) -> BoundaryGridFunction {
    a.zip_with(b, |x, y| x * (1.0 - s) + y * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn interpolation_examples() {
        let pairs = [(c(0.0, 0.0), c(0.5, 0.0)), (c(0.2, 0.1), c(-0.3, 0.4))];
        let z0 = interpolate_points(&pairs, 0.0);
        assert_eq!(z0, vec![pairs[0].0, pairs[1].0]);
        let z1 = interpolate_points(&pairs, 1.0);
        assert_eq!(z1, vec![pairs[0].1, pairs[1].1]);
        assert!((interpolate_points(&pairs, 0.5)[0] - 0.25).norm() < 1e-15);
    }

    #[test]
    fn chord_length_on_radius_is_beta() {
        let (a, b) = (c(0.0, 0.0), c(0.5, 0.0));
        assert!((chord_length(a, b, 0.0, 1.0) - 3f64.ln()).abs() < 1e-13);
        let (p, q) = (c(0.3, -0.2), c(-0.1, 0.6));
        assert!(chord_length(p, q, 0.0, 1.0) >= beta(p, q) - 1e-12);
        let split = chord_length(p, q, 0.0, 0.4) + chord_length(p, q, 0.4, 1.0);
        assert!((split - chord_length(p, q, 0.0, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn partition_examples() {
        let still = [(c(0.3, 0.1), c(0.3, 0.1))];
        assert_eq!(choose_partition(&still, 0.1).unwrap(), vec![0.0, 1.0]);
        let one = [(c(0.0, 0.0), c(0.5, 0.0))];
        let b = 3f64.ln();
        assert_eq!(choose_partition(&one, b + 0.1).unwrap().len(), 2);
        let ts = choose_partition(&one, 0.25).unwrap();
        assert_eq!(ts.len() - 1, (b / 0.25).ceil() as usize);
        for w in ts.windows(2) {
            let (x, y) = (one[0].1 * w[0], one[0].1 * w[1]);
            assert!(beta(x, y) < 0.25);
        }
        assert!(choose_partition(&one, 0.0).is_err());
    }

    #[test]
    fn rouche_examples() {
        let sq = |z: Complex64| z * z;
        assert_eq!(
            rouche_zero_count(&sq, &[circle_contour(c(0.0, 0.0), 0.5, 64)], 2).unwrap(),
            2
        );
        let free = |z: Complex64| z + 3.0;
        assert_eq!(
            rouche_zero_count(&free, &[circle_contour(c(0.1, 0.0), 0.5, 64)], 2).unwrap(),
            0
        );
        let b = ZeroList::from_points(&[
            c(0.3, 0.2),
            c(-0.5, 0.1),
            c(0.1, -0.7),
            c(0.9, 0.0),
            c(-0.2, -0.2),
        ])
        .unwrap();
        let f = |z: Complex64| b.eval(z);
        assert_eq!(
            rouche_zero_count(&f, &[circle_contour(c(0.0, 0.0), 0.99, 256)], 1).unwrap(),
            5
        );
        let through = rouche_zero_count(&sq, &[vec![c(-0.5, 0.0), c(0.0, 0.0), c(0.5, 0.0)]], 1);
        assert!(matches!(through, Err(Error::ContourThroughZero { .. })));
    }

    #[test]
    fn disk_union_components() {
        let far = hyperbolic_disk_union(&[c(0.6, 0.0), c(-0.6, 0.0)], 1.0, 64);
        assert_eq!(far.components.len(), 2);
        let near = hyperbolic_disk_union(&[c(0.1, 0.0), c(-0.1, 0.0), c(-0.1, 0.0)], 1.0, 64);
        assert_eq!(near.components.len(), 1);
        assert_eq!(near.components[0].zero_count, 3);
        // every exposed point sits at distance >= 1 from all centers
        for p in near.boundary_points() {
            assert!(near.centers.iter().all(|&q| beta(*p, q) >= 1.0 - 1e-9));
        }
        // the exposed boundary of two overlapping disks winds once around each center
        let id = |z: Complex64| z - 0.1;
        assert_eq!(
            rouche_zero_count(&id, &near.components[0].pieces, 1).unwrap(),
            1
        );
    }

    #[test]
    fn constant_path_is_trivially_certified() {
        let z = ZeroList::from_points(&[c(0.3, 0.1), c(-0.4, 0.2)]).unwrap();
        let p = build_path(&z, &z, None, 512).unwrap();
        assert_eq!(p.vertices.len(), 1);
        assert!(p.steps.is_empty());
        assert!(p.vertices[0].outer_log.sup_norm() == 0.0);
        assert!(p.endpoint_residual < 1e-15);
        let r = certify_path(&p, 0.25, 2).unwrap();
        assert!(r.certified);
    }

    #[test]
    fn single_pair_path() {
        let z = ZeroList::from_points(&[c(0.3, 0.0)]).unwrap();
        let zs = ZeroList::from_points(&[c(0.4, 0.0)]).unwrap();
        let p = build_path(&z, &zs, None, 1024).unwrap();
        assert!(p.endpoint_residual < 1e-8);
        assert!(p.functional_sup < 1e-6);
        // |b* g| = e^{v_total} on the circle
        let last = p.vertices.last().unwrap();
        for (i, l) in last.outer_log.samples().iter().enumerate().step_by(31) {
            let e = Complex64::from_polar(1.0, TAU * i as f64 / 1024.0);
            assert!(((zs.eval(e) * l.exp()).norm() - l.re.exp()).abs() < 1e-12);
        }
        let r = certify_path(&p, 0.25, 4).unwrap();
        assert!(r.certified, "{:?}", r.failures);
        assert!(r.epsilon_observed > 0.0);
    }

    #[test]
    fn giant_step_fails_certification() {
        let a = (0.75f64).tanh();
        let z = ZeroList::from_points(&[c(-a, 0.0)]).unwrap();
        let zs = ZeroList::from_points(&[c(a, 0.0)]).unwrap();
        let p = build_path(&z, &zs, Some(3.001), 1024).unwrap();
        assert_eq!(p.vertices.len(), 2);
        let r = certify_path(&p, 0.25, 4).unwrap();
        assert!(!r.certified);
        assert!(r.failures.iter().any(|f| f.component.is_some()));
    }

    #[test]
    fn homotopy_endpoints() {
        let u0 = ZeroList::from_points(&[c(0.3, 0.0)]).unwrap();
        let oc = outer_correction(&[(c(0.3, 0.0), c(0.4, 0.0))], 512).unwrap();
        // u0 = u1 h e^{-v}: take L = log h + log(u1/u0) via the identity, L = -v
        let l = oc.v.map(|v| -v);
        let g0 = homotopy_family_eval(&u0, &l, None, 0.0).unwrap();
        assert!(g0.sup_distance(&u0.eval_boundary(512).unwrap()) < 1e-15);
        let g1 = homotopy_family_eval(&u0, &l, None, 1.0).unwrap();
        let target = u0
            .eval_boundary(512)
            .unwrap()
            .zip_with(&l, |u, x| u * x.exp());
        assert!(g1.sup_distance(&target) < 1e-14);
        let gh = homotopy_family_eval(&u0, &l, Some(&target), 0.5).unwrap();
        for (g, (u, e)) in gh.samples().iter().zip(
            u0.eval_boundary(512)
                .unwrap()
                .samples()
                .iter()
                .zip(target.samples()),
        ) {
            assert!((g.norm() - (u.norm() * e.norm()).sqrt()).abs() < 1e-12);
        }
        let wrong = l.map(|x| x + Complex64::new(0.0, 0.5));
        assert!(matches!(
            homotopy_family_eval(&u0, &wrong, Some(&target), 0.5),
            Err(Error::Branch { .. })
        ));
    }
}
