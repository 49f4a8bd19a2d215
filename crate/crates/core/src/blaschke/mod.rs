//! Finite Blaschke products.
//!
//! A [`ZeroList`] represents
//! `b(z) = λ z^m ∏ (conj(a)/|a|) (a - z)/(1 - conj(a) z)` over its listed zeros
//! `a` (with multiplicity). Infinite products only enter the crate through
//! truncated generators, see [`crate::fixtures`].

mod floating;
mod jensen;
mod shift;

pub use floating::{floating_factorization, CircleCheck, FloatingFactorization};
pub use jensen::{jensen_zero_count, JensenCount};
pub use shift::{singular_inner, singular_shift_zeros, SingularShiftSpec};

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{max_range, Exec};
use crate::geometry::{alpha_factor, unit_prefactor, DiskPoint};
use crate::grid::BoundaryGridFunction;

/// Default number of points used when a circle `|z| = r` is sampled.
pub const CIRCLE_SAMPLES: usize = 4096;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Zeros (with multiplicity), unimodular constant `λ` and the order `m` of the
/// zero at the origin. The origin never appears in `zeros`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroList {
    zeros: Vec<(DiskPoint, u32)>,
    lambda: Complex64,
    m: u32,
}

impl Default for ZeroList {
    fn default() -> Self {
        Self::empty()
    }
}

impl ZeroList {
    /// Builds a product; zeros at the origin are folded into `m`.
    pub fn new(zeros: Vec<(DiskPoint, u32)>, lambda: Complex64, m: u32) -> Result<Self> {
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "|lambda| = {} is not 1",
                lambda.norm()
            )));
        }
        let mut m = m;
        let mut kept = Vec::with_capacity(zeros.len());
        for (p, mult) in zeros {
            if mult == 0 {
                return Err(Error::Domain("multiplicity must be positive".into()));
            }
            if p.is_boundary() {
                return Err(Error::OutsideDisk {
                    re: p.value().re,
                    im: p.value().im,
                });
            }
            if p.value().norm() == 0.0 {
                m += mult;
            } else {
                kept.push((p, mult));
            }
        }
        Ok(Self {
            zeros: kept,
            lambda,
            m,
        })
    }

    pub fn empty() -> Self {
        Self {
            zeros: Vec::new(),
            lambda: ONE,
            m: 0,
        }
    }

    /// `z^m`.
    pub fn power(m: u32) -> Self {
        Self {
            zeros: Vec::new(),
            lambda: ONE,
            m,
        }
    }

    /// Normalised product with one simple zero per listed point.
    pub fn from_points(points: &[Complex64]) -> Result<Self> {
        let zeros = points
            .iter()
            .map(|&z| DiskPoint::new(z).map(|p| (p, 1)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(zeros, ONE, 0)
    }

    pub fn zeros(&self) -> &[(DiskPoint, u32)] {
        &self.zeros
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn origin_order(&self) -> u32 {
        self.m
    }

    /// Same zeros with `λ = 1`.
    pub fn normalized(&self) -> Self {
        Self {
            lambda: ONE,
            ..self.clone()
        }
    }

    pub fn is_normalized(&self) -> bool {
        (self.lambda - ONE).norm() <= 1e-12
    }

    /// Total number of zeros counting multiplicity (the degree).
    pub fn degree(&self) -> usize {
        self.m as usize + self.zeros.iter().map(|&(_, k)| k as usize).sum::<usize>()
    }

    /// Zeros expanded by multiplicity; the `m` origin zeros come first.
    pub fn expanded_points(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.m as usize];
        for &(p, k) in &self.zeros {
            out.extend(std::iter::repeat(p.value()).take(k as usize));
        }
        out
    }

    /// Smallest `1 - |a|` over the zeros (1 for an empty list).
    pub fn boundary_clearance(&self) -> f64 {
        self.zeros
            .iter()
            .map(|(p, _)| 1.0 - p.value().norm())
            .fold(1.0, f64::min)
    }

    /// `b(z)`. Returns exactly 0 when `z` is within 1e-14 of a zero.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = self.lambda * z.powu(self.m);
        for &(p, k) in &self.zeros {
            let a = p.value();
            if (a - z).norm() < 1e-14 {
                return Complex64::new(0.0, 0.0);
            }
            acc *= alpha_factor(a, z).powu(k);
        }
        acc
    }

    /// `|b(z)|`.
    pub fn modulus(&self, z: Complex64) -> f64 {
        self.eval(z).norm()
    }

    /// Exact derivative of the finite product, by the product rule over
    /// prefix/suffix partial products (so it stays valid at the zeros).
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        // (value, derivative) of each grouped factor f^k
        let mut factors: Vec<(Complex64, Complex64)> = Vec::with_capacity(self.zeros.len() + 1);
        if self.m > 0 {
            let k = self.m;
            factors.push((z.powu(k), z.powu(k - 1) * k as f64));
        }
        for &(p, k) in &self.zeros {
            let a = p.value();
            let f = alpha_factor(a, z);
            let den = ONE - a.conj() * z;
            let df = unit_prefactor(a) * (a.norm_sqr() - 1.0) / (den * den);
            factors.push((f.powu(k), f.powu(k - 1) * df * k as f64));
        }
        let n = factors.len();
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut suffix = vec![ONE; n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1] * factors[i].0;
        }
        let mut prefix = ONE;
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..n {
            sum += prefix * factors[i].1 * suffix[i + 1];
            prefix *= factors[i].0;
        }
        self.lambda * sum
    }

    /// Boundary trace on the grid `e^{2πij/N}`.
    pub fn eval_boundary(&self, grid_size: usize) -> Result<BoundaryGridFunction> {
        self.eval_boundary_with(grid_size, Exec::default())
    }

    pub fn eval_boundary_with(&self, grid_size: usize, exec: Exec) -> Result<BoundaryGridFunction> {
        let clearance = self.boundary_clearance();
        if clearance < 1e-10 {
            return Err(Error::IllConditionedBoundary {
                distance: clearance,
            });
        }
        BoundaryGridFunction::from_fn(grid_size, exec, |t| {
            self.eval(Complex64::from_polar(1.0, t))
        })
    }

    /// `Σ mult (1 - |a|)`, the origin contributing `m`.
    pub fn blaschke_condition_sum(&self) -> f64 {
        blaschke_condition_sum(&self.expanded_points())
    }

    /// Number of zeros in `r·D` via Jensen's formula on circles around `r`.
    pub fn jensen_zero_count(&self, r: f64) -> Result<JensenCount> {
        jensen_zero_count(&|z| self.eval(z), r)
    }

    /// `max_{|z| = r} (1 - |z|^2) |b'(z)|` over [`CIRCLE_SAMPLES`] points.
    pub fn little_bloch_seminorm(&self, r: f64) -> f64 {
        let w = 1.0 - r * r;
        max_range(Exec::default(), CIRCLE_SAMPLES, |j| {
            let z = Complex64::from_polar(r, TAU * j as f64 / CIRCLE_SAMPLES as f64);
            w * self.derivative(z).norm()
        })
    }

    /// Minimum of `|b|` over the circle `|z| = r`, sampled at `samples` equispaced
    /// angles plus the arguments of the zeros (where the dips are).
    pub fn circle_min_modulus(&self, r: f64, samples: usize) -> f64 {
        circle_min_modulus(&self.expanded_points(), r, samples)
    }

    pub fn to_wire(&self) -> ZeroListWire {
        ZeroListWire {
            zeros: self
                .zeros
                .iter()
                .map(|&(p, k)| ZeroWire {
                    re: p.value().re,
                    im: p.value().im,
                    mult: k,
                })
                .collect(),
            lambda: ComplexWire {
                re: self.lambda.re,
                im: self.lambda.im,
            },
            m: self.m,
        }
    }

    pub fn from_wire(w: &ZeroListWire) -> Result<Self> {
        let zeros = w
            .zeros
            .iter()
            .map(|z| DiskPoint::from_parts(z.re, z.im).map(|p| (p, z.mult)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(zeros, Complex64::new(w.lambda.re, w.lambda.im), w.m)
    }
}

/// `Σ (1 - |a|)` over a list of points (repeats count as multiplicity).
pub fn blaschke_condition_sum(points: &[Complex64]) -> f64 {
    points.iter().map(|a| 1.0 - a.norm()).sum()
}

/// `|∏ α_a(z)|` for a list of points, without building a [`ZeroList`].
#[inline]
pub fn product_modulus(points: &[Complex64], z: Complex64) -> f64 {
    points.iter().map(|&a| alpha_factor(a, z).norm()).product()
}

/// Sampled minimum of `|∏ α_a|` on `|z| = r`: `samples` equispaced angles plus
/// the argument of every listed point.
pub fn circle_min_modulus(points: &[Complex64], r: f64, samples: usize) -> f64 {
    if points.is_empty() {
        return 1.0;
    }
    let uniform = max_range(Exec::default(), samples, |j| {
        let z = Complex64::from_polar(r, TAU * j as f64 / samples as f64);
        -product_modulus(points, z)
    });
    let at_zeros = points
        .iter()
        .map(|a| -product_modulus(points, Complex64::from_polar(r, a.arg())))
        .fold(f64::NEG_INFINITY, f64::max);
    -uniform.max(at_zeros)
}

/// `max_{|w| = r} |u(w)| (1 - |b(w)|)`, the quantity whose vanishing as
/// `r → 1` characterises `u` being small near the zeros of `b`.
pub fn bloch_cnbp_tension(u: &ZeroList, b: &ZeroList, r: f64) -> f64 {
    max_range(Exec::default(), CIRCLE_SAMPLES, |j| {
        let w = Complex64::from_polar(r, TAU * j as f64 / CIRCLE_SAMPLES as f64);
        u.modulus(w) * (1.0 - b.modulus(w))
    })
}

/// JSON wire form: `{"zeros":[{"re","im","mult"}], "lambda":{"re","im"}, "m"}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ZeroListWire {
    pub zeros: Vec<ZeroWire>,
    pub lambda: ComplexWire,
    pub m: u32,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ZeroWire {
    pub re: f64,
    pub im: f64,
    pub mult: u32,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ComplexWire {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexWire {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexWire> for Complex64 {
    fn from(w: ComplexWire) -> Self {
        Complex64::new(w.re, w.im)
    }
}
