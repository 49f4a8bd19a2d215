//! Discrete measures on the disk, dyadic Carleson boxes, interpolation
//! constants, separated splitting and the `α_b(r)` functional.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::ZeroList;
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::geometry::{beta, beta_to_rho, rho, DiskPoint};

/// Finitely many weighted atoms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscreteMeasure {
    atoms: Vec<(DiskPoint, Complex64)>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<(DiskPoint, Complex64)>) -> Self {
        Self { atoms }
    }

    /// Atoms with real weights.
    pub fn from_real(atoms: &[(Complex64, f64)]) -> Result<Self> {
        atoms
            .iter()
            .map(|&(z, w)| Ok((DiskPoint::new(z)?, Complex64::new(w, 0.0))))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn atoms(&self) -> &[(DiskPoint, Complex64)] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `Σ |w|`.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w.norm()).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            atoms: self.atoms.iter().map(|&(p, w)| (p, w * c)).collect(),
        }
    }

    /// Atoms with `|z| <= r`.
    pub fn restrict(&self, r: f64) -> Self {
        Self {
            atoms: self
                .atoms
                .iter()
                .copied()
                .filter(|(p, _)| p.value().norm() <= r)
                .collect(),
        }
    }

    pub fn push(&mut self, p: DiskPoint, w: Complex64) {
        self.atoms.push((p, w));
    }

    pub fn to_wire(&self) -> MeasureWire {
        MeasureWire {
            atoms: self
                .atoms
                .iter()
                .map(|&(p, w)| AtomWire {
                    re: p.value().re,
                    im: p.value().im,
                    w_re: w.re,
                    w_im: w.im,
                })
                .collect(),
        }
    }

    pub fn from_wire(w: &MeasureWire) -> Result<Self> {
        w.atoms
            .iter()
            .map(|a| {
                Ok((
                    DiskPoint::from_parts(a.re, a.im)?,
                    Complex64::new(a.w_re, a.w_im),
                ))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

/// `{"atoms":[{"re","im","w_re","w_im"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MeasureWire {
    pub atoms: Vec<AtomWire>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct AtomWire {
    pub re: f64,
    pub im: f64,
    pub w_re: f64,
    pub w_im: f64,
}

/// Box over the arc `|θ - arc_center| <= arc_length/2`, reaching in to radius
/// `1 - arc_length/2π` (side proportional to the normalised arc length).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlesonBox {
    pub arc_center: f64,
    pub arc_length: f64,
}

impl CarlesonBox {
    pub fn new(arc_center: f64, arc_length: f64) -> Result<Self> {
        if !(arc_length > 0.0 && arc_length <= TAU) {
            return Err(Error::Domain(format!(
                "arc length {arc_length} not in (0, 2π]"
            )));
        }
        Ok(Self {
            arc_center: arc_center.rem_euclid(TAU),
            arc_length,
        })
    }

    /// Side of the box as a fraction of the circle.
    pub fn side(&self) -> f64 {
        self.arc_length / TAU
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if z.norm() < 1.0 - self.side() {
            return false;
        }
        let d = (z.arg() - self.arc_center).rem_euclid(TAU);
        d.min(TAU - d) <= 0.5 * self.arc_length
    }

    /// `|μ|(Q)`.
    pub fn mass(&self, mu: &DiscreteMeasure) -> f64 {
        mu.atoms()
            .iter()
            .filter(|(p, _)| self.contains(p.value()))
            .map(|(_, w)| w.norm())
            .sum()
    }
}

/// `(1 - |a|) δ_a` per zero, multiplicity included; the origin carries weight `m`.
pub fn mu_b(zeros: &ZeroList) -> DiscreteMeasure {
    let mut mu = DiscreteMeasure::default();
    if zeros.origin_order() > 0 {
        mu.push(
            DiskPoint::from_parts(0.0, 0.0).expect("origin"),
            Complex64::new(zeros.origin_order() as f64, 0.0),
        );
    }
    for &(p, k) in zeros.zeros() {
        mu.push(p, Complex64::new(k as f64 * (1.0 - p.value().norm()), 0.0));
    }
    mu
}

/// `max |μ|(Q)/ℓ(Q)` over the dyadic boxes of depth `0..=max_depth`.
///
/// At depth `d` the circle is cut into `2^d` arcs `[2πk/2^d, 2π(k+1)/2^d)`; the
/// box over an arc has side `ℓ = 2^{-d}` (arc length over `2π`) and contains the
/// atoms with `|z| >= 1 - ℓ`.
pub fn box_carleson_norm(mu: &DiscreteMeasure, max_depth: u32) -> f64 {
    let mut best: f64 = 0.0;
    for d in 0..=max_depth.min(52) {
        let cells = 1u64 << d;
        let side = 1.0 / cells as f64;
        let mut mass: std::collections::BTreeMap<u64, f64> = Default::default();
        for (p, w) in mu.atoms() {
            let z = p.value();
            if z.norm() < 1.0 - side {
                continue;
            }
            let t = z.arg().rem_euclid(TAU) / TAU;
            let k = ((t * cells as f64) as u64).min(cells - 1);
            *mass.entry(k).or_default() += w.norm();
        }
        best = mass.values().fold(best, |acc, &m| acc.max(m / side));
    }
    best
}

/// Both routes to `min_n (1 - |z_n|^2)|b'(z_n)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationConstant {
    /// Derivative route.
    pub value: f64,
    /// `min_n ∏_{k≠n} ρ(z_n, z_k)`.
    pub product_route: f64,
    /// True when a repeated zero makes the constant vanish.
    pub degenerate: bool,
}

impl InterpolationConstant {
    pub fn discrepancy(&self) -> f64 {
        (self.value - self.product_route).abs()
    }
}

pub fn interpolation_constant(zeros: &ZeroList) -> InterpolationConstant {
    let pts = zeros.expanded_points();
    let repeated = pts
        .iter()
        .enumerate()
        .any(|(i, a)| pts[..i].iter().any(|b| (a - b).norm() < 1e-14));
    if repeated {
        return InterpolationConstant {
            value: 0.0,
            product_route: 0.0,
            degenerate: true,
        };
    }
    let mut value = f64::INFINITY;
    let mut product_route = f64::INFINITY;
    for (i, &a) in pts.iter().enumerate() {
        value = value.min((1.0 - a.norm_sqr()) * zeros.derivative(a).norm());
        let prod: f64 = pts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &b)| rho(a, b))
            .product();
        product_route = product_route.min(prod);
    }
    if pts.is_empty() {
        value = 1.0;
        product_route = 1.0;
    }
    InterpolationConstant {
        value,
        product_route,
        degenerate: false,
    }
}

/// First-fit split (zeros visited by decreasing modulus) into classes whose
/// members are pairwise at hyperbolic distance `>= s`.
pub fn separation_split(zeros: &ZeroList, s: f64) -> Result<Vec<ZeroList>> {
    if !(s > 0.0) {
        return Err(Error::Domain("separation must be positive".into()));
    }
    let mut pts = zeros.expanded_points();
    pts.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let mut classes: Vec<Vec<Complex64>> = Vec::new();
    for z in pts {
        match classes
            .iter_mut()
            .find(|c| c.iter().all(|&w| beta(z, w) >= s))
        {
            Some(c) => c.push(z),
            None => classes.push(vec![z]),
        }
    }
    classes.iter().map(|c| ZeroList::from_points(c)).collect()
}

/// Sampling parameters for [`alpha_b`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Hyperbolic spacing of the lattice (ring gap and along-ring gap).
    pub cell: f64,
    /// Lattice points satisfy `|z| <= 1 - margin`.
    pub margin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            cell: 0.1,
            margin: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaB {
    pub value: f64,
    /// Hyperbolic lattice spacing used.
    pub resolution: f64,
    /// Number of lattice points inside the region.
    pub samples: usize,
    pub argmin: Complex64,
}

/// Rings `β(z, 0) = iδ` carrying `ceil(2π sinh(iδ)/δ)` equally spaced points.
pub fn hyperbolic_lattice(spec: GridSpec) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    let mut i = 1;
    loop {
        let b = i as f64 * spec.cell;
        let r = beta_to_rho(b);
        if r > 1.0 - spec.margin {
            break;
        }
        let k = (TAU * b.sinh() / spec.cell).ceil().max(1.0) as usize;
        // stagger alternate rings
        let off = if i % 2 == 1 { 0.5 } else { 0.0 };
        out.extend((0..k).map(|j| Complex64::from_polar(r, TAU * (j as f64 + off) / k as f64)));
        i += 1;
    }
    out
}

/// Sampled `inf { |b(z)| : β(z, Z(b)) > r }` over the hyperbolic lattice.
pub fn alpha_b(zeros: &ZeroList, r: f64, spec: GridSpec) -> Result<AlphaB> {
    if !(r > 0.0) {
        return Err(Error::Domain("r must be positive".into()));
    }
    if !(spec.cell > 0.0 && spec.cell <= 0.1) {
        return Err(Error::Domain("lattice cell must lie in (0, 0.1]".into()));
    }
    let lattice = hyperbolic_lattice(spec);
    let pts = zeros.expanded_points();
    let vals = map_range(Exec::default(), lattice.len(), |i| {
        let z = lattice[i];
        if pts.iter().all(|&a| beta(z, a) > r) {
            Some(zeros.modulus(z))
        } else {
            None
        }
    });
    let mut best: Option<(f64, Complex64)> = None;
    let mut samples = 0;
    for (v, &z) in vals.iter().zip(&lattice) {
        if let Some(v) = *v {
            samples += 1;
            if best.map_or(true, |(b, _)| v < b) {
                best = Some((v, z));
            }
        }
    }
    let (value, argmin) = best.ok_or(Error::RegionEmpty)?;
    Ok(AlphaB {
        value,
        resolution: spec.cell,
        samples,
        argmin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mu_b_examples() {
        let m = mu_b(&ZeroList::from_points(&[c(0.5, 0.0)]).unwrap());
        assert_eq!(m.atoms().len(), 1);
        assert!((m.atoms()[0].1.re - 0.5).abs() < 1e-15);
        assert!(mu_b(&ZeroList::empty()).is_empty());
        let m = mu_b(&ZeroList::from_points(&[c(0.5, 0.0), c(0.0, 0.5)]).unwrap());
        assert!((m.total_variation() - 1.0).abs() < 1e-15);
        let m = mu_b(&ZeroList::power(2));
        assert_eq!(m.total_variation(), 2.0);
    }

    #[test]
    fn box_norm_examples() {
        let mu = mu_b(&ZeroList::from_points(&[c(0.5, 0.0)]).unwrap());
        let v = box_carleson_norm(&mu, 10);
        assert!((0.25..=1.0).contains(&v));
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(box_carleson_norm(&DiscreteMeasure::default(), 5), 0.0);
    }

    #[test]
    fn box_norm_matches_box_enumeration() {
        // independent enumeration through CarlesonBox::mass
        let pts = [
            c(0.9, 0.1),
            c(-0.3, 0.85),
            c(0.1, -0.99),
            c(0.5, 0.5),
            c(-0.97, -0.1),
        ];
        let mu = mu_b(&ZeroList::from_points(&pts).unwrap());
        let mut best: f64 = 0.0;
        for d in 0..=8u32 {
            let n = 1usize << d;
            let len = TAU / n as f64;
            for k in 0..n {
                let q = CarlesonBox::new((k as f64 + 0.5) * len, len).unwrap();
                let m: f64 = mu
                    .atoms()
                    .iter()
                    .filter(|(p, _)| {
                        let t = p.value().arg().rem_euclid(TAU);
                        q.contains(p.value()) && t >= k as f64 * len && t < (k + 1) as f64 * len
                    })
                    .map(|(_, w)| w.norm())
                    .sum();
                best = best.max(m / q.side());
            }
        }
        assert!((best - box_carleson_norm(&mu, 8)).abs() < 1e-12);
    }

    #[test]
    fn interpolation_constant_examples() {
        let ic =
            interpolation_constant(&ZeroList::from_points(&[c(0.0, 0.0), c(0.5, 0.0)]).unwrap());
        assert!((ic.value - 0.5).abs() < 1e-14);
        assert!(ic.discrepancy() < 1e-14);
        let one = interpolation_constant(&ZeroList::from_points(&[c(0.3, 0.2)]).unwrap());
        assert!((one.value - 1.0).abs() < 1e-14);
        let dup =
            interpolation_constant(&ZeroList::from_points(&[c(0.5, 0.0), c(0.5, 0.0)]).unwrap());
        assert!(dup.degenerate && dup.value == 0.0);
    }

    #[test]
    fn separation_split_examples() {
        let far = ZeroList::from_points(&[c(0.9, 0.0), c(-0.9, 0.0), c(0.0, 0.9)]).unwrap();
        assert_eq!(separation_split(&far, 1.0).unwrap().len(), 1);
        let dup = ZeroList::from_points(&[c(0.4, 0.1), c(0.4, 0.1)]).unwrap();
        assert!(separation_split(&dup, 1.0).unwrap().len() >= 2);
    }

    #[test]
    fn alpha_b_for_identity() {
        let b = ZeroList::power(1);
        let a = alpha_b(&b, 1.0, GridSpec::default()).unwrap();
        assert!(a.value >= (0.5f64).tanh());
        assert!(a.value - (0.5f64).tanh() < 0.05);
        let fine = alpha_b(
            &b,
            1.0,
            GridSpec {
                cell: 0.01,
                margin: 1e-2,
            },
        )
        .unwrap();
        assert!(fine.value - (0.5f64).tanh() < a.value - (0.5f64).tanh() + 1e-15);
    }

    #[test]
    fn alpha_b_monotone_and_limits() {
        let b = ZeroList::from_points(&[c(0.3, 0.2), c(-0.5, 0.1), c(0.1, -0.7)]).unwrap();
        let rs = [0.05, 0.5, 1.0, 2.0, 4.0];
        let vals: Vec<f64> = rs
            .iter()
            .map(|&r| alpha_b(&b, r, GridSpec::default()).unwrap().value)
            .collect();
        assert!(vals.windows(2).all(|w| w[1] >= w[0]));
        assert!(vals[0] < 0.05);
        assert!(alpha_b(&b, 8.0, GridSpec::default()).unwrap().value > 0.95);
        assert!(matches!(
            alpha_b(&b, 50.0, GridSpec::default()),
            Err(Error::RegionEmpty)
        ));
    }

    fn measure() -> impl Strategy<Value = Vec<(Complex64, f64)>> {
        prop::collection::vec(
            (
                (0.0f64..0.999, 0.0f64..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t)),
                0.01f64..2.0,
            ),
            0..12,
        )
    }

    proptest! {
        #[test]
        fn box_norm_homogeneous(atoms in measure(), s in 0.1f64..10.0) {
            let mu = DiscreteMeasure::from_real(&atoms).unwrap();
            let a = box_carleson_norm(&mu.scale(s), 12);
            let b = s * box_carleson_norm(&mu, 12);
            prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0));
        }

        #[test]
        fn box_norm_monotone(atoms in measure(), extra in (0.0f64..0.99, 0.0f64..TAU, 0.01f64..1.0)) {
            let mu = DiscreteMeasure::from_real(&atoms).unwrap();
            let mut more = mu.clone();
            more.push(DiskPoint::new(Complex64::from_polar(extra.0, extra.1)).unwrap(), Complex64::new(extra.2, 0.0));
            prop_assert!(box_carleson_norm(&more, 10) >= box_carleson_norm(&mu, 10));
            prop_assert!(box_carleson_norm(&mu, 11) >= box_carleson_norm(&mu, 10));
        }

        #[test]
        fn interpolation_routes_agree(pts in prop::collection::vec((0.0f64..0.95, 0.0f64..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t)), 1..10)) {
            let ic = interpolation_constant(&ZeroList::from_points(&pts).unwrap());
            prop_assert!(ic.discrepancy() < 1e-10);
        }

        #[test]
        fn split_classes_are_separated(pts in prop::collection::vec((0.0f64..0.95, 0.0f64..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t)), 1..15), s in 0.2f64..3.0) {
            let z = ZeroList::from_points(&pts).unwrap();
            let classes = separation_split(&z, s).unwrap();
            let total: usize = classes.iter().map(ZeroList::degree).sum();
            prop_assert_eq!(total, pts.len());
            for cl in &classes {
                let p = cl.expanded_points();
                for i in 0..p.len() {
                    for j in 0..i {
                        prop_assert!(beta(p[i], p[j]) >= s);
                    }
                }
            }
        }
    }
}
