//! Level-set contours `∂{|b| < δ}` of finite Blaschke products and the
//! computations carried on them: harmonic measures of their interiors,
//! zero splitting and representative placement, the contour formula for
//! `log(u/b)` and the diameter inequality for arcs.

mod harmonic;
mod levelset;
mod logform;

pub use harmonic::{
    harmonic_measure, moment_matched, place_representatives, split_zeros_by_contour,
    walk_exit_edge, ArcMasses, EdgeIndex, HarmonicMeasureAtlas, HarmonicMethod, ABSORPTION,
    DEFAULT_WALKS,
};
pub use levelset::level_set_components;
pub use logform::{
    log_quotient_via_contour, trossos_check, ArcReport, ContourLog, TrossosReport, VACUOUS_MASS,
};

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::ComplexWire;
use crate::carleson::{box_carleson_norm, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::geometry::{rho, DiskPoint};

/// Curves may not pass this close to the origin.
pub const ORIGIN_CLEARANCE: f64 = 1e-6;

/// Closed, positively oriented polyline. Edge `i` joins `points[i]` to
/// `points[(i + 1) % n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanCurveApprox {
    points: Vec<Complex64>,
    pub component_id: usize,
    pub enclosed_zeros: Vec<(Complex64, u32)>,
    /// Set when the curve samples a Euclidean circle `(center, radius)`.
    pub disk: Option<(Complex64, f64)>,
}

impl JordanCurveApprox {
    /// Validates the polyline and orients it counter-clockwise.
    pub fn new(
        mut points: Vec<Complex64>,
        component_id: usize,
        enclosed_zeros: Vec<(Complex64, u32)>,
    ) -> Result<Self> {
        if points.len() > 1 && (points[0] - points[points.len() - 1]).norm() < 1e-15 {
            points.pop();
        }
        if points.len() < 3 {
            return Err(Error::Degenerate(
                "a closed curve needs at least 3 points".into(),
            ));
        }
        if let Some(p) = points.iter().find(|p| p.norm() >= 1.0) {
            return Err(Error::OutsideDisk { re: p.re, im: p.im });
        }
        let c = Self {
            points,
            component_id,
            enclosed_zeros,
            disk: None,
        };
        if c.distance(Complex64::new(0.0, 0.0)).0 < ORIGIN_CLEARANCE {
            return Err(Error::Hypothesis(
                "curve passes within 1e-6 of the origin".into(),
            ));
        }
        let mut c = c;
        if c.signed_area() < 0.0 {
            c.points.reverse();
        }
        Ok(c)
    }

    /// `n` points on the Euclidean circle, flagged as a round disk.
    pub fn circle(
        center: Complex64,
        radius: f64,
        n: usize,
        enclosed_zeros: Vec<(Complex64, u32)>,
    ) -> Result<Self> {
        let pts = (0..n)
            .map(|k| center + Complex64::from_polar(radius, TAU * k as f64 / n as f64))
            .collect();
        let mut c = Self::new(pts, 0, enclosed_zeros)?;
        c.disk = Some((center, radius));
        Ok(c)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn edge(&self, i: usize) -> (Complex64, Complex64) {
        (self.points[i], self.points[(i + 1) % self.points.len()])
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                (b - a).norm()
            })
            .collect()
    }

    pub fn length(&self) -> f64 {
        self.edge_lengths().iter().sum()
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * (0..self.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                a.re * b.im - a.im * b.re
            })
            .sum::<f64>()
    }

    /// Distance from `z` to the polyline and the index of the nearest edge.
    pub fn distance(&self, z: Complex64) -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            let d = b - a;
            let t = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
            let dist = (a + d * t - z).norm();
            if dist < best.0 {
                best = (dist, i);
            }
        }
        best
    }

    /// Winding number of the polyline around `z` (1 inside, 0 outside).
    pub fn winding(&self, z: Complex64) -> i64 {
        let total: f64 = (0..self.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                ((b - z) / (a - z)).arg()
            })
            .sum();
        (total / TAU).round() as i64
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.winding(z) != 0
    }

    /// Index of the vertex with the smallest principal argument.
    pub fn start_index(&self) -> usize {
        (0..self.len())
            .min_by(|&i, &j| self.points[i].arg().total_cmp(&self.points[j].arg()))
            .unwrap_or(0)
    }

    /// `min_ξ β(z, ξ)` over the vertices.
    pub fn hyperbolic_distance(&self, z: Complex64) -> f64 {
        let r = self.points.iter().map(|&p| rho(z, p)).fold(1.0, f64::min);
        crate::geometry::rho_to_beta(r)
    }

    pub fn zero_count(&self) -> u32 {
        self.enclosed_zeros.iter().map(|z| z.1).sum()
    }

    pub fn to_wire(&self) -> CurveWire {
        CurveWire {
            component_id: self.component_id,
            points: self.points.iter().map(|&p| p.into()).collect(),
            enclosed_zeros: self
                .enclosed_zeros
                .iter()
                .map(|&(z, m)| crate::blaschke::ZeroWire {
                    re: z.re,
                    im: z.im,
                    mult: m,
                })
                .collect(),
            disk: self.disk.map(|(c, r)| DiskWire {
                center: c.into(),
                radius: r,
            }),
        }
    }

    pub fn from_wire(w: &CurveWire) -> Result<Self> {
        let mut c = Self::new(
            w.points.iter().map(|&p| p.into()).collect(),
            w.component_id,
            w.enclosed_zeros
                .iter()
                .map(|z| (Complex64::new(z.re, z.im), z.mult))
                .collect(),
        )?;
        c.disk = w.disk.as_ref().map(|d| (d.center.into(), d.radius));
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskWire {
    pub center: ComplexWire,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveWire {
    pub component_id: usize,
    pub points: Vec<ComplexWire>,
    pub enclosed_zeros: Vec<crate::blaschke::ZeroWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk: Option<DiskWire>,
}

/// Arclength of the curves as atoms at edge midpoints.
pub fn arclength_measure(curves: &[JordanCurveApprox]) -> Result<DiscreteMeasure> {
    let mut atoms = Vec::new();
    for c in curves {
        for i in 0..c.len() {
            let (a, b) = c.edge(i);
            atoms.push(((a + b) * 0.5, (b - a).norm()));
        }
    }
    DiscreteMeasure::from_real(&atoms)
}

/// Box Carleson norm of the arclength measure on the curves.
pub fn arclength_carleson_norm(curves: &[JordanCurveApprox], max_depth: u32) -> Result<f64> {
    Ok(box_carleson_norm(&arclength_measure(curves)?, max_depth))
}

/// `component,index,re,im` rows.
pub fn curves_csv(curves: &[JordanCurveApprox]) -> String {
    let mut out = String::from("component,index,re,im\n");
    for c in curves {
        for (i, p) in c.points().iter().enumerate() {
            let _ = writeln!(out, "{},{i},{:.15e},{:.15e}", c.component_id, p.re, p.im);
        }
    }
    out
}

pub(crate) fn check_interior(z: Complex64) -> Result<()> {
    DiskPoint::new(z).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carleson::CarlesonBox;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn orientation_and_winding() {
        let mut pts: Vec<_> = (0..64)
            .map(|k| Complex64::from_polar(0.3, -TAU * k as f64 / 64.0))
            .collect();
        pts.iter_mut().for_each(|p| *p += 0.2);
        let curve = JordanCurveApprox::new(pts, 0, Vec::new()).unwrap();
        assert!(curve.signed_area() > 0.0);
        assert_eq!(curve.winding(c(0.2, 0.0)), 1);
        assert_eq!(curve.winding(c(-0.5, 0.0)), 0);
        assert!((curve.distance(c(0.2, 0.0)).0 - 0.3).abs() < 1e-3);
    }

    #[test]
    fn rejects_curves_through_origin() {
        assert!(matches!(
            JordanCurveApprox::circle(c(0.3, 0.0), 0.3, 64, Vec::new()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn arclength_norm_examples() {
        assert_eq!(arclength_carleson_norm(&[], 8).unwrap(), 0.0);
        let curve = JordanCurveApprox::circle(c(0.0, 0.0), 0.5, 256, Vec::new()).unwrap();
        let norm = arclength_carleson_norm(&[curve.clone()], 6).unwrap();
        // the whole circle lies in the depth-0 box: mass = length
        let full = CarlesonBox::new(0.0, TAU).unwrap();
        let mu = arclength_measure(&[curve.clone()]).unwrap();
        assert!((full.mass(&mu) - curve.length()).abs() < 1e-12);
        assert!(norm >= curve.length() - 1e-12);
        let doubled = arclength_measure(&[curve]).unwrap().scale(2.0);
        assert!((box_carleson_norm(&doubled, 6) - 2.0 * norm).abs() < 1e-12);
    }
}
