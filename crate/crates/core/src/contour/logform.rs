use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_interior, HarmonicMeasureAtlas, JordanCurveApprox};
use crate::blaschke::ZeroList;
use crate::error::{Error, Result};
use crate::geometry::rho;

/// Arcs with less `ν_Γ` mass than this are skipped by [`trossos_check`].
pub const VACUOUS_MASS: f64 = 1e-3;
/// Exterior points must keep this distance from every curve.
const EXTERIOR_CLEARANCE: f64 = 1e-3;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `∫_0^1 (f + ν s) d ds / (a + s d - p)` for the straight edge from `a` to
/// `a + d` and a pole `p` off the edge.
fn edge_integral(a: Complex64, d: Complex64, p: Complex64, f: f64, nu: f64) -> Complex64 {
    let x = d / (a - p);
    let (log, tail) = if x.norm() < 1e-3 {
        // Log(1 + x) and 1 - Log(1 + x)/x by their series
        let (x2, x3, x4) = (x * x, x * x * x, x * x * x * x);
        (
            x - x2 / 2.0 + x3 / 3.0 - x4 / 4.0 + x4 * x / 5.0,
            x / 2.0 - x2 / 3.0 + x3 / 4.0 - x4 / 5.0 + x4 * x / 6.0,
        )
    } else {
        let l = (ONE + x).ln();
        (l, ONE - l / x)
    };
    log * f + tail * nu
}

/// `∫_Γ F dξ/(ξ - z)` and `∫_Γ F dξ̄/((1 - ξ̄z)ξ̄)` with `F` the cumulative
/// `ν` mass, linear along each edge.
fn contour_terms(
    curve: &JordanCurveApprox,
    cumulative: &[f64],
    nu: &[f64],
    z: Complex64,
) -> (Complex64, Complex64) {
    let mut first = Complex64::new(0.0, 0.0);
    let mut second = Complex64::new(0.0, 0.0);
    for i in 0..curve.len() {
        let (a, b) = curve.edge(i);
        let d = b - a;
        first += edge_integral(a, d, z, cumulative[i], nu[i]);
        // with η = ξ̄: dη/((1 - zη)η) = dη/η - dη/(η - 1/z)
        let (ac, dc) = (a.conj(), d.conj());
        second += edge_integral(ac, dc, Complex64::new(0.0, 0.0), cumulative[i], nu[i]);
        if z.norm() > 0.0 {
            second -= edge_integral(ac, dc, ONE / z, cumulative[i], nu[i]);
        }
    }
    (first, second)
}

/// The contour formula for a logarithm of `u/b` outside the curves,
/// `L(z) = C_1 - Σ_j ∫ ν(γ(ξ_j, ξ)) dξ/(ξ - z) - Σ_j ∫ ν(γ(ξ_j, ξ)) dξ̄/((1 - ξ̄z)ξ̄)`,
/// with `C_1` fixed at a reference point.
#[derive(Debug, Clone)]
pub struct ContourLog {
    atlas: HarmonicMeasureAtlas,
    cumulative: Vec<Vec<f64>>,
    nu: Vec<Vec<f64>>,
    pub reference: Complex64,
    pub c1: Complex64,
}

impl ContourLog {
    /// Checks the hypotheses (every zero of `u` and `b` inside a curve, equal
    /// counts per curve) and calibrates `C_1 = Log(u/b)(z_ref) - terms(z_ref)`.
    pub fn new(
        u: &ZeroList,
        b: &ZeroList,
        atlas: &HarmonicMeasureAtlas,
        reference: Complex64,
    ) -> Result<Self> {
        for p in u.expanded_points().into_iter().chain(b.expanded_points()) {
            if !atlas.curves.iter().any(|c| c.contains(p)) {
                return Err(Error::Hypothesis(format!(
                    "zero {p} lies outside every curve"
                )));
            }
        }
        for (c, m) in atlas.curves.iter().zip(&atlas.masses) {
            if m.u_count != m.b_count {
                return Err(Error::Hypothesis(format!(
                    "curve {} encloses {} zeros of u but {} of b",
                    c.component_id, m.u_count, m.b_count
                )));
            }
        }
        let mut log = Self {
            atlas: atlas.clone(),
            cumulative: atlas.masses.iter().map(|m| m.cumulative()).collect(),
            nu: atlas.masses.iter().map(|m| m.difference()).collect(),
            reference,
            c1: Complex64::new(0.0, 0.0),
        };
        let q = u.eval(reference) / b.eval(reference);
        log.c1 = q.ln() - log.terms(reference)?;
        Ok(log)
    }

    fn terms(&self, z: Complex64) -> Result<Complex64> {
        check_interior(z)?;
        let mut total = Complex64::new(0.0, 0.0);
        for (k, curve) in self.atlas.curves.iter().enumerate() {
            if curve.contains(z) || curve.distance(z).0 < EXTERIOR_CLEARANCE {
                return Err(Error::Domain(format!(
                    "{z} is not outside curve {}",
                    curve.component_id
                )));
            }
            let (a, b) = contour_terms(curve, &self.cumulative[k], &self.nu[k], z);
            total += a + b;
        }
        Ok(-total)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.c1 + self.terms(z)?)
    }
}

/// `L(z)` calibrated at `reference`; see [`ContourLog`].
pub fn log_quotient_via_contour(
    u: &ZeroList,
    b: &ZeroList,
    atlas: &HarmonicMeasureAtlas,
    reference: Complex64,
    z: Complex64,
) -> Result<Complex64> {
    ContourLog::new(u, b, atlas, reference)?.eval(z)
}

/// Diameter inequality data for one arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcReport {
    pub start: usize,
    pub edges: usize,
    pub diameter: f64,
    pub inf_modulus: f64,
    pub mass: f64,
    /// `diameter - inf_modulus^(1/mass)`; `None` when the arc is skipped.
    pub slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrossosReport {
    pub arcs: Vec<ArcReport>,
    pub worst_slack: f64,
    pub skipped: usize,
}

impl TrossosReport {
    pub fn holds(&self, tolerance: f64) -> bool {
        self.worst_slack >= -tolerance
    }
}

/// For each arc (`edges` consecutive edges from vertex `start`) compares
/// `diam_ρ L` with `(inf_L |u|)^{1/ν_Γ(L)}`, where `ν_Γ` is the harmonic
/// measure from the zeros of `u` inside the curve (the atlas' `ν_u` masses of
/// curve `k`). Arcs with `ν_Γ(L) < VACUOUS_MASS` are skipped.
pub fn trossos_check(
    u: &ZeroList,
    atlas: &HarmonicMeasureAtlas,
    k: usize,
    arcs: &[(usize, usize)],
) -> Result<TrossosReport> {
    let curve = atlas
        .curves
        .get(k)
        .ok_or_else(|| Error::Domain(format!("no curve {k}")))?;
    let masses = &atlas.masses[k].nu_u;
    let n = curve.len();
    let mut reports = Vec::with_capacity(arcs.len());
    let mut worst = f64::INFINITY;
    let mut skipped = 0;
    for &(start, edges) in arcs {
        if start >= n || edges == 0 || edges > n {
            return Err(Error::Domain(format!(
                "arc ({start}, {edges}) does not fit a curve of {n} vertices"
            )));
        }
        let count = edges + 1;
        let pts: Vec<Complex64> = (0..count)
            .map(|i| curve.points()[(start + i) % n])
            .collect();
        let mass: f64 = (0..count - 1).map(|i| masses[(start + i) % n]).sum();
        let mut diameter: f64 = 0.0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                diameter = diameter.max(rho(pts[i], pts[j]));
            }
        }
        let inf_modulus = pts
            .iter()
            .map(|&p| u.modulus(p))
            .fold(f64::INFINITY, f64::min);
        let slack = (mass >= VACUOUS_MASS).then(|| diameter - inf_modulus.powf(1.0 / mass));
        match slack {
            Some(s) => worst = worst.min(s),
            None => skipped += 1,
        }
        reports.push(ArcReport {
            start,
            edges,
            diameter,
            inf_modulus,
            mass,
            slack,
        });
    }
    Ok(TrossosReport {
        arcs: reports,
        worst_slack: if worst.is_finite() { worst } else { 0.0 },
        skipped,
    })
}
