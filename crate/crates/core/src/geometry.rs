//! Hyperbolic geometry of the unit disk.
//!
//! The two maps used throughout the crate are the involution
//! `φ_z(w) = (z - w) / (1 - conj(w) z)` and its rotated variant
//! `α_z(w) = (conj(z)/|z|) φ_z(w)`, which is normalised so that `α_z(0) = |z|`.
//! Distances are the pseudohyperbolic `ρ(z, w) = |φ_z(w)|` and the hyperbolic
//! `β = log((1 + ρ) / (1 - ρ))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points closer than this to the unit circle are rejected as interior points.
pub const INTERIOR_GUARD: f64 = 1e-12;

/// Smallest admissible modulus of a Möbius denominator.
pub const DENOMINATOR_GUARD: f64 = 1e-14;

/// A point of the closed unit disk.
///
/// Interior points satisfy `|z| < 1 - 1e-12`; boundary points must be built with
/// [`DiskPoint::boundary`] and carry a flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    value: Complex64,
    boundary: bool,
}

impl DiskPoint {
    pub fn new(value: Complex64) -> Result<Self> {
        if !(value.norm() < 1.0 - INTERIOR_GUARD) {
            return Err(Error::OutsideDisk {
                re: value.re,
                im: value.im,
            });
        }
        Ok(Self {
            value,
            boundary: false,
        })
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    /// A point of the closed disk, allowed to sit on the unit circle.
    pub fn boundary(value: Complex64) -> Result<Self> {
        if !(value.norm() <= 1.0 + INTERIOR_GUARD) {
            return Err(Error::OutsideDisk {
                re: value.re,
                im: value.im,
            });
        }
        Ok(Self {
            value,
            boundary: true,
        })
    }

    pub fn value(self) -> Complex64 {
        self.value
    }

    pub fn is_boundary(self) -> bool {
        self.boundary
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.value
    }
}

/// Unchecked `φ_z(w)`.
#[inline]
pub fn phi(z: Complex64, w: Complex64) -> Complex64 {
    (z - w) / (Complex64::new(1.0, 0.0) - w.conj() * z)
}

/// `φ_z(w) = (z - w) / (1 - conj(w) z)`.
pub fn mobius(z: DiskPoint, w: DiskPoint) -> Result<Complex64> {
    let (z, w) = (z.value, w.value);
    let den = Complex64::new(1.0, 0.0) - w.conj() * z;
    if den.norm() < DENOMINATOR_GUARD {
        return Err(Error::Degenerate(format!(
            "Möbius denominator {:e} below guard",
            den.norm()
        )));
    }
    Ok((z - w) / den)
}

/// Unit factor `conj(a)/|a|` with the convention that it equals `-1` at `a = 0`.
#[inline]
pub fn unit_prefactor(a: Complex64) -> Complex64 {
    let r = a.norm();
    if r == 0.0 {
        Complex64::new(-1.0, 0.0)
    } else {
        a.conj() / r
    }
}

/// Unchecked `α_a(w)`; at `a = 0` this is `w` (the convention `a/|a| = -1`).
#[inline]
pub fn alpha_factor(a: Complex64, w: Complex64) -> Complex64 {
    unit_prefactor(a) * (a - w) / (Complex64::new(1.0, 0.0) - a.conj() * w)
}

/// `α_z(w) = (conj(z)/|z|) (z - w) / (1 - conj(z) w)`, so that `α_z(0) = |z|`.
///
/// At `z = 0` the rotation is undefined; callers must use [`mobius`] with the
/// convention `z/|z| = -1` instead, and this function reports a degenerate input.
pub fn normalized_mobius(z: DiskPoint, w: DiskPoint) -> Result<Complex64> {
    if z.value.norm() == 0.0 {
        return Err(Error::Degenerate(
            "normalized Möbius map needs z != 0; use mobius with z/|z| = -1".into(),
        ));
    }
    let (z, w) = (z.value, w.value);
    let den = Complex64::new(1.0, 0.0) - z.conj() * w;
    if den.norm() < DENOMINATOR_GUARD {
        return Err(Error::Degenerate(format!(
            "Möbius denominator {:e} below guard",
            den.norm()
        )));
    }
    Ok(unit_prefactor(z) * (z - w) / den)
}

/// `ρ(z, w) = |φ_z(w)|`.
#[inline]
pub fn rho(z: Complex64, w: Complex64) -> f64 {
    let den = (Complex64::new(1.0, 0.0) - w.conj() * z).norm();
    if den == 0.0 {
        return 1.0;
    }
    ((z - w).norm() / den).min(1.0)
}

/// `1 - ρ(z, w)^2`, computed from `(1-|z|^2)(1-|w|^2)/|1 - conj(w) z|^2` to keep
/// digits when ρ is close to 1.
#[inline]
pub fn one_minus_rho_sq(z: Complex64, w: Complex64) -> f64 {
    let den = (Complex64::new(1.0, 0.0) - w.conj() * z).norm_sqr();
    let (az, aw) = (z.norm(), w.norm());
    ((1.0 - az) * (1.0 + az) * (1.0 - aw) * (1.0 + aw) / den).max(0.0)
}

/// `β(z, w) = log((1 + ρ)/(1 - ρ))`.
#[inline]
pub fn beta(z: Complex64, w: Complex64) -> f64 {
    let r = rho(z, w);
    if r < 0.5 {
        rho_to_beta(r)
    } else {
        // (1+ρ)/(1-ρ) = (1+ρ)^2 / (1-ρ^2)
        2.0 * r.ln_1p() - one_minus_rho_sq(z, w).ln()
    }
}

pub fn pseudo_distance(z: DiskPoint, w: DiskPoint) -> f64 {
    rho(z.value, w.value)
}

pub fn hyper_distance(z: DiskPoint, w: DiskPoint) -> f64 {
    beta(z.value, w.value)
}

/// `log((1+ρ)/(1-ρ))`; infinite at ρ = 1.
#[inline]
pub fn rho_to_beta(r: f64) -> f64 {
    r.ln_1p() - (-r).ln_1p()
}

/// Inverse of [`rho_to_beta`]: `ρ = tanh(β/2)`.
#[inline]
pub fn beta_to_rho(b: f64) -> f64 {
    (0.5 * b).tanh()
}

/// Euclidean center and radius of the hyperbolic circle `{w : β(w, center) = radius}`.
pub fn hyperbolic_circle(center: Complex64, radius: f64) -> (Complex64, f64) {
    let r = beta_to_rho(radius);
    let c2 = center.norm_sqr();
    let den = 1.0 - r * r * c2;
    (center * ((1.0 - r * r) / den), r * (1.0 - c2) / den)
}
