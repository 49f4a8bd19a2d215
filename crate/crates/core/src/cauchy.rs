//! Cauchy transforms of discrete and path measures on the unit circle,
//! harmonic conjugation, BMO/L² functionals and the outer correction that
//! turns one Blaschke product into another up to an invertible factor.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::blaschke::{ComplexWire, ZeroList};
use crate::carleson::DiscreteMeasure;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{unit_prefactor, DiskPoint};
use crate::grid::BoundaryGridFunction;

/// Endpoints closer than this to the circle make the boundary trace unreliable.
pub const SEGMENT_GUARD: f64 = 1e-8;
/// Largest tolerated `‖2 Im C(σ) - ṽ‖_∞` in [`outer_correction`].
pub const CONJUGATION_LIMIT: f64 = 1e-6;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Sum of straight segments `[z0, z1]` carrying `dz`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathMeasure {
    segments: Vec<(DiskPoint, DiskPoint)>,
}

impl PathMeasure {
    pub fn new(segments: Vec<(DiskPoint, DiskPoint)>) -> Self {
        Self { segments }
    }

    pub fn from_pairs(pairs: &[(Complex64, Complex64)]) -> Result<Self> {
        pairs
            .iter()
            .map(|&(a, b)| Ok((DiskPoint::new(a)?, DiskPoint::new(b)?)))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn segments(&self) -> &[(DiskPoint, DiskPoint)] {
        &self.segments
    }

    pub fn pairs(&self) -> Vec<(Complex64, Complex64)> {
        self.segments
            .iter()
            .map(|&(a, b)| (a.value(), b.value()))
            .collect()
    }

    pub fn reversed(&self) -> Self {
        Self {
            segments: self.segments.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    /// Each segment clipped to `|z| <= r` (dropped when it misses the disk).
    pub fn restrict(&self, r: f64) -> Self {
        let mut out = Vec::new();
        for &(a, b) in &self.segments {
            let (z0, z1) = (a.value(), b.value());
            let d = z1 - z0;
            // |z0 + t d|^2 = r^2
            let qa = d.norm_sqr();
            let qb = 2.0 * (z0.conj() * d).re;
            let qc = z0.norm_sqr() - r * r;
            let (lo, hi) = if qa == 0.0 {
                if qc <= 0.0 {
                    (0.0, 1.0)
                } else {
                    continue;
                }
            } else {
                let disc = qb * qb - 4.0 * qa * qc;
                if disc < 0.0 {
                    continue;
                }
                let s = disc.sqrt();
                (
                    ((-qb - s) / (2.0 * qa)).max(0.0),
                    ((-qb + s) / (2.0 * qa)).min(1.0),
                )
            };
            if lo >= hi && qa != 0.0 {
                continue;
            }
            let p = |t: f64| DiskPoint::new(z0 + d * t).expect("chord point inside");
            out.push((p(lo), p(hi)));
        }
        Self { segments: out }
    }

    pub fn to_wire(&self) -> PathMeasureWire {
        PathMeasureWire {
            segments: self
                .segments
                .iter()
                .map(|&(a, b)| SegmentWire {
                    z0: a.value().into(),
                    z1: b.value().into(),
                })
                .collect(),
        }
    }

    pub fn from_wire(w: &PathMeasureWire) -> Result<Self> {
        w.segments
            .iter()
            .map(|s| Ok((DiskPoint::new(s.z0.into())?, DiskPoint::new(s.z1.into())?)))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

/// `{"segments":[{"z0":{"re","im"},"z1":{"re","im"}}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PathMeasureWire {
    pub segments: Vec<SegmentWire>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct SegmentWire {
    pub z0: ComplexWire,
    pub z1: ComplexWire,
}

/// `Σ w/(e^{iθ} - z)` over atoms with `|z - e^{iθ}| > eps`.
pub fn truncated_cauchy(mu: &DiscreteMeasure, theta: f64, eps: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, theta);
    mu.atoms()
        .iter()
        .filter(|(p, _)| (p.value() - e).norm() > eps)
        .map(|&(p, w)| w / (e - p.value()))
        .sum()
}

/// `max_ε |C_ε(μ)(e^{iθ})|` over the supplied truncation radii.
pub fn maximal_cauchy(mu: &DiscreteMeasure, theta: f64, eps_grid: &[f64]) -> Result<f64> {
    if eps_grid.is_empty() || eps_grid.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Domain(
            "truncation radii must be positive and nonempty".into(),
        ));
    }
    Ok(eps_grid
        .iter()
        .map(|&e| truncated_cauchy(mu, theta, e).norm())
        .fold(0.0, f64::max))
}

/// `∫_{z0}^{z1} dz/(e^{iθ} - z) = Log(1 - z0 e^{-iθ}) - Log(1 - z1 e^{-iθ})`.
#[inline]
pub fn cauchy_segment_closed_form(z0: Complex64, z1: Complex64, theta: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, -theta);
    (ONE - z0 * e).ln() - (ONE - z1 * e).ln()
}

/// `C(σ)` on the grid `e^{2πij/N}`.
pub fn cauchy_on_circle(sigma: &PathMeasure, n: usize) -> Result<BoundaryGridFunction> {
    cauchy_on_circle_with(sigma, n, Exec::default())
}

pub fn cauchy_on_circle_with(
    sigma: &PathMeasure,
    n: usize,
    exec: Exec,
) -> Result<BoundaryGridFunction> {
    let pairs = sigma.pairs();
    for &(a, b) in &pairs {
        let d = (1.0 - a.norm()).min(1.0 - b.norm());
        if d < SEGMENT_GUARD {
            return Err(Error::IllConditionedBoundary { distance: d });
        }
    }
    BoundaryGridFunction::from_fn(n, exec, |t| {
        pairs
            .iter()
            .map(|&(a, b)| cauchy_segment_closed_form(a, b, t))
            .sum()
    })
}

/// `C(μ)(e^{iθ}) = Σ w/(e^{iθ} - z)` on the grid.
pub fn discrete_cauchy_on_circle(mu: &DiscreteMeasure, n: usize) -> Result<BoundaryGridFunction> {
    BoundaryGridFunction::from_fn(n, Exec::default(), |t| truncated_cauchy(mu, t, 0.0))
}

/// `e^{iγ} = ∏ (z/|z|)(|z*|/z*)`, with the unit factor of `0` taken as `-1`.
pub fn gamma_constant(pairs: &[(Complex64, Complex64)]) -> Complex64 {
    // unit_prefactor(a) = conj(a)/|a| = |a|/a, so z/|z| = conj(unit_prefactor(z))
    pairs
        .iter()
        .map(|&(z, zs)| unit_prefactor(z).conj() * unit_prefactor(zs))
        .product()
}

/// Pairs `(z_i, z*_{perm[i]})` from two equal-degree products.
pub fn paired_points(
    b: &ZeroList,
    b_star: &ZeroList,
    perm: &[usize],
) -> Result<Vec<(Complex64, Complex64)>> {
    let (z, zs) = (b.expanded_points(), b_star.expanded_points());
    if z.len() != zs.len() {
        return Err(Error::Cardinality {
            left: z.len(),
            right: zs.len(),
        });
    }
    if perm.len() != z.len() {
        return Err(Error::Cardinality {
            left: z.len(),
            right: perm.len(),
        });
    }
    let mut seen = vec![false; z.len()];
    for &j in perm {
        if j >= z.len() || std::mem::replace(&mut seen[j], true) {
            return Err(Error::Domain("pairing is not a permutation".into()));
        }
    }
    Ok(z.iter().zip(perm).map(|(&a, &j)| (a, zs[j])).collect())
}

/// `max_j |exp(2i Im C(σ)) - e^{iγ} b conj(b*)|` on the grid, where `σ` joins
/// the paired zeros of two normalised products.
pub fn verify_intwin(b: &ZeroList, b_star: &ZeroList, perm: &[usize], n: usize) -> Result<f64> {
    let pairs = paired_points(b, b_star, perm)?;
    let (b, b_star) = (b.normalized(), b_star.normalized());
    let c = cauchy_on_circle(&PathMeasure::from_pairs(&pairs)?, n)?;
    let g = gamma_constant(&pairs);
    let lhs = c.map(|w| Complex64::new(0.0, 2.0 * w.im).exp());
    let rhs = BoundaryGridFunction::from_fn(n, Exec::default(), |t| {
        let e = Complex64::from_polar(1.0, t);
        g * b.eval(e) * b_star.eval(e).conj()
    })?;
    Ok(lhs.sup_distance(&rhs))
}

/// Fourier multiplier `-i sgn(k)` (the Nyquist coefficient is dropped).
pub fn harmonic_conjugate(f: &BoundaryGridFunction) -> Result<BoundaryGridFunction> {
    let n = f.len();
    let scale = f.sup_norm().max(1.0);
    if !f.is_real() && f.samples().iter().any(|z| z.im.abs() > 1e-12 * scale) {
        return Err(Error::Domain(
            "harmonic conjugate needs a real-valued function".into(),
        ));
    }
    let mut buf: Vec<Complex64> = f
        .samples()
        .iter()
        .map(|z| Complex64::new(z.re, 0.0))
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    for (k, c) in buf.iter_mut().enumerate() {
        *c *= if k == 0 || (n % 2 == 0 && k == half) {
            Complex64::new(0.0, 0.0)
        } else if k < n - k {
            Complex64::new(0.0, -1.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    BoundaryGridFunction::new_real(buf.iter().map(|c| c.re / n as f64).collect())
}

/// `max_I (1/|I|) Σ_{I} |f - f_I|` over dyadic arcs of at least four cells and
/// their half-shifted copies.
pub fn bmo_norm_estimate(f: &BoundaryGridFunction) -> f64 {
    let n = f.len();
    let s = f.samples();
    let mut best: f64 = 0.0;
    let mut len = n;
    while len >= 4 {
        let mut start = 0;
        while start < n {
            for offset in [0, len / 2] {
                let idx = |i: usize| (start + offset + i) % n;
                let mean: Complex64 = (0..len).map(|i| s[idx(i)]).sum::<Complex64>() / len as f64;
                let osc = (0..len).map(|i| (s[idx(i)] - mean).norm()).sum::<f64>() / len as f64;
                best = best.max(osc);
            }
            start += len;
        }
        len /= 2;
    }
    best
}

/// `(1/N Σ |f_j|^2)^{1/2}`.
pub fn l2_norm(f: &BoundaryGridFunction) -> f64 {
    (f.samples().iter().map(|z| z.norm_sqr()).sum::<f64>() / f.len() as f64).sqrt()
}

/// Diagnostics of an outer correction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterReport {
    /// `‖v‖_∞`.
    pub v_sup: f64,
    /// `‖2 Im C(σ) - ṽ‖_∞` with `ṽ` from the discrete conjugation.
    pub conjugation_residual: f64,
    /// `‖b e^{v} - b* h‖_∞`.
    pub identity_residual: f64,
    /// `‖b - b* h‖_∞`.
    pub mismatch: f64,
    /// `‖2 Im C(σ) - (log|h|)~‖_∞`.
    pub functional_sup: f64,
}

/// `h = e^{-iγ} e^{v + iṽ}` for `v = -2 Re C(σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterCorrection {
    pub h: BoundaryGridFunction,
    pub v: BoundaryGridFunction,
    pub v_tilde: BoundaryGridFunction,
    pub gamma: Complex64,
    pub report: OuterReport,
}

impl OuterCorrection {
    /// `log h = -iγ + v + iṽ` on the grid, `γ` taken as the principal argument.
    pub fn log_h(&self) -> BoundaryGridFunction {
        let ig = Complex64::new(0.0, self.gamma.arg());
        self.v
            .zip_with(&self.v_tilde, |v, vt| Complex64::new(v.re, vt.re) - ig)
    }
}

/// Invertible factor carrying `b*` onto `b`: `b e^{v} = b* h` on the circle.
///
/// `pairs` are `(z_k, z*_k)`; `b` is the normalised product over the `z_k` and
/// `b*` over the `z*_k`.
pub fn outer_correction(pairs: &[(Complex64, Complex64)], n: usize) -> Result<OuterCorrection> {
    let sigma = PathMeasure::from_pairs(pairs)?;
    let c = cauchy_on_circle(&sigma, n)?;
    let gamma = gamma_constant(pairs);
    let v = BoundaryGridFunction::new_real(c.samples().iter().map(|w| -2.0 * w.re).collect())?;
    let v_tilde = harmonic_conjugate(&v)?;
    let two_im = c.imag_part().scale(2.0);
    let conjugation_residual = two_im.sup_distance(&v_tilde);
    if conjugation_residual > CONJUGATION_LIMIT {
        return Err(Error::GridTooCoarse {
            residual: conjugation_residual,
            limit: CONJUGATION_LIMIT,
        });
    }
    let rot = gamma.conj();
    let h = v.zip_with(&v_tilde, |a, b| rot * Complex64::new(a.re, b.re).exp());
    let log_abs_h =
        BoundaryGridFunction::new_real(h.samples().iter().map(|z| z.norm().ln()).collect())?;
    let functional_sup = two_im.sup_distance(&harmonic_conjugate(&log_abs_h)?);

    let b = ZeroList::from_points(&pairs.iter().map(|p| p.0).collect::<Vec<_>>())?;
    let bs = ZeroList::from_points(&pairs.iter().map(|p| p.1).collect::<Vec<_>>())?;
    let mut identity_residual: f64 = 0.0;
    let mut mismatch: f64 = 0.0;
    for j in 0..n {
        let e = Complex64::from_polar(1.0, TAU * j as f64 / n as f64);
        let (bv, rhs) = (b.eval(e), bs.eval(e) * h.samples()[j]);
        identity_residual = identity_residual.max((bv * v.samples()[j].re.exp() - rhs).norm());
        mismatch = mismatch.max((bv - rhs).norm());
    }
    Ok(OuterCorrection {
        report: OuterReport {
            v_sup: v.sup_norm(),
            conjugation_residual,
            identity_residual,
            mismatch,
            functional_sup,
        },
        h,
        v,
        v_tilde,
        gamma,
    })
}

/// Analytic extension of `h` into the closed disk:
/// `e^{-iγ} ∏ ((1 - conj(z*) ζ)/(1 - conj(z) ζ))^2`.
pub fn outer_factor_at(pairs: &[(Complex64, Complex64)], zeta: Complex64) -> Complex64 {
    let q: Complex64 = pairs
        .iter()
        .map(|&(z, zs)| (ONE - zs.conj() * zeta) / (ONE - z.conj() * zeta))
        .product();
    gamma_constant(pairs).conj() * q * q
}

/// Measure accepted by [`l2_truncation_convergence`].
#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    Discrete(DiscreteMeasure),
    Path(PathMeasure),
}

impl Measure {
    fn restrict(&self, r: f64) -> Self {
        match self {
            Measure::Discrete(m) => Measure::Discrete(m.restrict(r)),
            Measure::Path(p) => Measure::Path(p.restrict(r)),
        }
    }

    /// Boundary trace of the Cauchy transform on the grid.
    pub fn cauchy_on_circle(&self, n: usize) -> Result<BoundaryGridFunction> {
        match self {
            Measure::Discrete(m) => discrete_cauchy_on_circle(m, n),
            Measure::Path(p) => cauchy_on_circle(p, n),
        }
    }
}

/// `‖C(μ_r) - C(μ)‖_2` on the grid for each radius, `μ_r` being the
/// restriction of `μ` to `|z| <= r`.
pub fn l2_truncation_convergence(mu: &Measure, radii: &[f64], n: usize) -> Result<Vec<f64>> {
    if radii.windows(2).any(|w| w[1] <= w[0]) || radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::Domain("radii must increase inside (0, 1)".into()));
    }
    let full = mu.cauchy_on_circle(n)?;
    radii
        .iter()
        .map(|&r| {
            let part = mu.restrict(r).cauchy_on_circle(n)?;
            Ok(l2_norm(&part.zip_with(&full, |a, b| a - b)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_atom(z: Complex64) -> DiscreteMeasure {
        DiscreteMeasure::from_real(&[(z, 1.0)]).unwrap()
    }

    #[test]
    fn truncated_examples() {
        let mu = unit_atom(c(0.0, 0.0));
        let v = truncated_cauchy(&mu, 0.7, 0.5);
        assert!((v - Complex64::from_polar(1.0, -0.7)).norm() < 1e-15);
        assert_eq!(truncated_cauchy(&mu, 0.7, 3.0), c(0.0, 0.0));
        let a = 0.4;
        let sym = DiscreteMeasure::from_real(&[(c(a, 0.0), 1.0), (c(-a, 0.0), 1.0)]).unwrap();
        let direct = 1.0 / (c(0.0, 1.0) - a) + 1.0 / (c(0.0, 1.0) + a);
        assert!(
            (truncated_cauchy(&sym, std::f64::consts::FRAC_PI_2, 1e-3) - direct).norm() < 1e-15
        );
    }

    #[test]
    fn maximal_examples() {
        let mu = unit_atom(c(0.5, 0.0));
        // distance from e^{i0} is 0.5
        let m = maximal_cauchy(&mu, 0.0, &[0.1, 0.4, 0.6]).unwrap();
        assert!((m - 2.0).abs() < 1e-14);
        assert_eq!(
            maximal_cauchy(&DiscreteMeasure::default(), 0.0, &[0.1]).unwrap(),
            0.0
        );
        assert!(maximal_cauchy(&mu, 0.0, &[]).is_err());
    }

    #[test]
    fn segment_examples() {
        assert_eq!(
            cauchy_segment_closed_form(c(0.3, 0.1), c(0.3, 0.1), 1.0),
            c(0.0, 0.0)
        );
        let v = cauchy_segment_closed_form(c(0.0, 0.0), c(0.5, 0.0), 0.0);
        assert!((v - 2f64.ln()).norm() < 1e-15);
    }

    #[test]
    fn circle_trace_examples() {
        assert!(
            cauchy_on_circle(&PathMeasure::default(), 16)
                .unwrap()
                .sup_norm()
                == 0.0
        );
        let s = PathMeasure::from_pairs(&[(c(0.0, 0.0), c(0.5, 0.0))]).unwrap();
        let g = cauchy_on_circle(&s, 8).unwrap();
        for (j, v) in g.samples().iter().enumerate() {
            let t = TAU * j as f64 / 8.0;
            let e = -(ONE - 0.5 * Complex64::from_polar(1.0, -t)).ln();
            assert!((v - e).norm() < 1e-15);
        }
        let r = cauchy_on_circle(&s.reversed(), 8).unwrap();
        assert!(g.zip_with(&r, |a, b| a + b).sup_norm() < 1e-15);
    }

    #[test]
    fn gamma_examples() {
        assert!((gamma_constant(&[(c(0.3, 0.2), c(0.3, 0.2))]) - 1.0).norm() < 1e-15);
        assert!((gamma_constant(&[(c(0.5, 0.0), c(0.0, 0.5))]) - c(0.0, -1.0)).norm() < 1e-15);
        assert!((gamma_constant(&[(c(0.0, 0.0), c(0.3, 0.0))]) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn intwin_examples() {
        let b = ZeroList::from_points(&[c(0.3, 0.1), c(-0.2, 0.5)]).unwrap();
        assert!(verify_intwin(&b, &b, &[0, 1], 256).unwrap() < 1e-12);
        let b = ZeroList::from_points(&[c(0.3, 0.0)]).unwrap();
        let bs = ZeroList::from_points(&[c(0.4, 0.0)]).unwrap();
        assert!(verify_intwin(&b, &bs, &[0], 1024).unwrap() < 1e-8);
        assert!(matches!(
            verify_intwin(&b, &ZeroList::empty(), &[0], 64),
            Err(Error::Cardinality { .. })
        ));
    }

    #[test]
    fn conjugate_examples() {
        let n = 64;
        let cos = BoundaryGridFunction::from_real_fn(n, Exec::Sequential, f64::cos).unwrap();
        let sin = BoundaryGridFunction::from_real_fn(n, Exec::Sequential, f64::sin).unwrap();
        assert!(harmonic_conjugate(&cos).unwrap().sup_distance(&sin) < 1e-14);
        let k = BoundaryGridFunction::new_real(vec![3.0; n]).unwrap();
        assert!(harmonic_conjugate(&k).unwrap().sup_norm() < 1e-14);
        let hs = harmonic_conjugate(&sin).unwrap();
        assert!(hs.zip_with(&cos, |a, b| a + b).sup_norm() < 1e-14);
    }

    #[test]
    fn bmo_examples() {
        let n = 64;
        let k = BoundaryGridFunction::new_real(vec![2.0; n]).unwrap();
        assert!(bmo_norm_estimate(&k) < 1e-15);
        let step = BoundaryGridFunction::new_real(
            (0..n).map(|j| if j < n / 2 { 1.0 } else { -1.0 }).collect(),
        )
        .unwrap();
        let v = bmo_norm_estimate(&step);
        assert!((0.5..=1.0).contains(&v));
        let f =
            BoundaryGridFunction::from_real_fn(n, Exec::Sequential, |t| (3.0 * t).sin() + t.cos())
                .unwrap();
        let shifted = f.map(|z| z + 5.0);
        assert!((bmo_norm_estimate(&f) - bmo_norm_estimate(&shifted)).abs() < 1e-12);
    }

    #[test]
    fn l2_examples() {
        let k = BoundaryGridFunction::new(vec![c(3.0, 4.0); 16]).unwrap();
        assert!((l2_norm(&k) - 5.0).abs() < 1e-14);
        let e =
            BoundaryGridFunction::from_fn(16, Exec::Sequential, |t| Complex64::from_polar(1.0, t))
                .unwrap();
        assert!((l2_norm(&e) - 1.0).abs() < 1e-14);
        let cos = BoundaryGridFunction::from_real_fn(16, Exec::Sequential, f64::cos).unwrap();
        assert!((l2_norm(&cos) - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn outer_examples() {
        let same = outer_correction(&[(c(0.2, 0.3), c(0.2, 0.3))], 256).unwrap();
        assert!(same.v.sup_norm() < 1e-15);
        assert!(same.h.samples().iter().all(|z| (z - 1.0).norm() < 1e-14));
        assert!(same.report.mismatch < 1e-14);

        let oc = outer_correction(&[(c(0.3, 0.0), c(0.4, 0.0))], 4096).unwrap();
        assert!(oc.report.identity_residual < 1e-8);
        assert!(oc.report.functional_sup < 1e-8);
        // analytic extension agrees with the grid values
        for j in (0..4096).step_by(97) {
            let e = Complex64::from_polar(1.0, TAU * j as f64 / 4096.0);
            let ext = outer_factor_at(&[(c(0.3, 0.0), c(0.4, 0.0))], e);
            assert!((ext - oc.h.samples()[j]).norm() < 1e-9);
        }
        assert!(oc
            .log_h()
            .samples()
            .iter()
            .zip(oc.h.samples())
            .all(|(l, h)| (l.exp() - h).norm() < 1e-12));
    }

    #[test]
    fn path_restriction_clips_chords() {
        let p = PathMeasure::from_pairs(&[(c(0.1, 0.0), c(0.9, 0.0)), (c(0.7, 0.7), c(0.7, -0.7))])
            .unwrap();
        let r = p.restrict(0.5);
        assert_eq!(r.segments().len(), 1);
        assert!((r.segments()[0].1.value() - 0.5).norm() < 1e-15);
        assert_eq!(p.restrict(0.999).segments().len(), 2);
    }

    #[test]
    fn truncation_examples() {
        let mu = Measure::Discrete(
            DiscreteMeasure::from_real(&[
                (c(0.2, 0.0), 1.0),
                (c(0.0, 0.5), 0.5),
                (c(-0.8, 0.0), 0.2),
            ])
            .unwrap(),
        );
        let v = l2_truncation_convergence(&mu, &[0.1, 0.3, 0.6, 0.9], 1024).unwrap();
        let full = l2_norm(&mu.cauchy_on_circle(1024).unwrap());
        assert!((v[0] - full).abs() < 1e-14);
        assert_eq!(v[3], 0.0);
        assert!(v.windows(2).all(|w| w[1] <= w[0]));
    }

    fn pt() -> impl Strategy<Value = Complex64> {
        (0.0f64..0.9, 0.0f64..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn segment_matches_quadrature(a in pt(), b in pt(), t in 0.0f64..TAU) {
            // composite Gauss-Legendre on the chord
            let e = Complex64::from_polar(1.0, t);
            let nodes = [-0.906_179_845_938_664, -0.538_469_310_105_683, 0.0, 0.538_469_310_105_683, 0.906_179_845_938_664];
            let weights = [0.236_926_885_056_189, 0.478_628_670_499_366, 0.568_888_888_888_889, 0.478_628_670_499_366, 0.236_926_885_056_189];
            let pieces = 400;
            let mut q = Complex64::new(0.0, 0.0);
            for k in 0..pieces {
                let (s0, s1) = (k as f64 / pieces as f64, (k + 1) as f64 / pieces as f64);
                for (x, w) in nodes.iter().zip(weights) {
                    let s = 0.5 * (s0 + s1) + 0.5 * (s1 - s0) * x;
                    let z = a + (b - a) * s;
                    q += (b - a) * 0.5 * (s1 - s0) * w / (e - z);
                }
            }
            prop_assert!((q - cauchy_segment_closed_form(a, b, t)).norm() < 1e-10);
        }

        #[test]
        fn transforms_are_linear(a in pt(), b in pt(), d in pt(), e in pt(), t in 0.0f64..TAU) {
            let s1 = cauchy_segment_closed_form(a, b, t);
            let s2 = cauchy_segment_closed_form(d, e, t);
            let p = PathMeasure::from_pairs(&[(a, b), (d, e)]).unwrap();
            let g = cauchy_on_circle(&p, 8).unwrap();
            let g1 = cauchy_on_circle(&PathMeasure::from_pairs(&[(a, b)]).unwrap(), 8).unwrap();
            let g2 = cauchy_on_circle(&PathMeasure::from_pairs(&[(d, e)]).unwrap(), 8).unwrap();
            prop_assert!(g.sup_distance(&g1.zip_with(&g2, |x, y| x + y)) < 1e-13);
            prop_assert!((cauchy_segment_closed_form(b, a, t) + s1).norm() < 1e-14);
            prop_assert!(s2.is_finite());
        }
    }
}
