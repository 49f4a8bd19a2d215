use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ZeroList;
use crate::error::{Error, Result};
use crate::geometry::DiskPoint;

/// Parameters of the Frostman shift `s_α = (α - s)/(1 - conj(α) s)` of the
/// singular inner function `s(z) = exp((z + 1)/(z - 1))`, truncated to the
/// zero indices `k_min..=k_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularShiftSpec {
    pub alpha: Complex64,
    pub k_min: i64,
    pub k_max: i64,
}

impl SingularShiftSpec {
    /// Symmetric index range `|k| <= k`.
    pub fn symmetric(alpha: Complex64, k: i64) -> Self {
        Self {
            alpha,
            k_min: -k,
            k_max: k,
        }
    }
}

/// `s(z) = exp((z + 1)/(z - 1))`.
pub fn singular_inner(z: Complex64) -> Complex64 {
    ((z + 1.0) / (z - 1.0)).exp()
}

/// Zeros of `s_α` with index in the requested range: `z_k = (w_k + 1)/(w_k - 1)`
/// with `w_k = Log α + 2πik`. Each point is checked against `s(z_k) = α`.
pub fn singular_shift_zeros(spec: &SingularShiftSpec) -> Result<ZeroList> {
    let a = spec.alpha;
    if a.norm() == 0.0 {
        return Err(Error::Domain("shift parameter must be nonzero".into()));
    }
    if a.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "|alpha| = {} is not below 1",
            a.norm()
        )));
    }
    if spec.k_min > spec.k_max {
        return Err(Error::Domain("empty index range".into()));
    }
    let log_a = a.ln();
    let mut zeros = Vec::new();
    for k in spec.k_min..=spec.k_max {
        let w = log_a + Complex64::new(0.0, TAU * k as f64);
        let mut z = (w + 1.0) / (w - 1.0);
        if z.norm() < 1e-14 {
            z = Complex64::new(0.0, 0.0);
        }
        let miss = (singular_inner(z) - a).norm();
        if miss >= 1e-10 {
            return Err(Error::Domain(format!(
                "zero k = {k} misses s(z) = alpha by {miss:e}"
            )));
        }
        zeros.push((DiskPoint::new(z)?, 1));
    }
    ZeroList::new(zeros, Complex64::new(1.0, 0.0), 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centre_index_hits_origin() {
        let e1 = (-1.0f64).exp();
        let spec = SingularShiftSpec {
            alpha: Complex64::new(e1, 0.0),
            k_min: 0,
            k_max: 0,
        };
        let z = singular_shift_zeros(&spec).unwrap();
        assert_eq!(z.origin_order(), 1);
        assert!(z.zeros().is_empty());
    }

    #[test]
    fn all_zeros_solve_the_equation() {
        let a = Complex64::new((-1.0f64).exp(), 0.0);
        let z = singular_shift_zeros(&SingularShiftSpec::symmetric(a, 50)).unwrap();
        assert_eq!(z.degree(), 101);
        for p in z.expanded_points() {
            assert!(p.norm() < 1.0);
            assert!((singular_inner(p) - a).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(
            singular_shift_zeros(&SingularShiftSpec::symmetric(Complex64::new(0.0, 0.0), 1))
                .is_err()
        );
        assert!(
            singular_shift_zeros(&SingularShiftSpec::symmetric(Complex64::new(1.0, 0.0), 1))
                .is_err()
        );
    }
}
