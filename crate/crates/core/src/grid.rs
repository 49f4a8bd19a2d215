//! Samples of a function on the uniform grid `e^{2πij/N}` of the unit circle.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};

/// Smallest grid the toolkit accepts.
pub const MIN_GRID: usize = 8;

/// Complex (or real-flagged) samples at `θ_j = 2πj/N`, `j = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGridFunction {
    samples: Vec<Complex64>,
    real: bool,
}

impl BoundaryGridFunction {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        check_len(samples.len())?;
        Ok(Self {
            samples,
            real: false,
        })
    }

    pub fn new_real(values: Vec<f64>) -> Result<Self> {
        check_len(values.len())?;
        Ok(Self {
            samples: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            real: true,
        })
    }

    /// Samples `f(θ_j)` in parallel.
    pub fn from_fn<F>(n: usize, exec: Exec, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Sync + Send,
    {
        check_len(n)?;
        let samples = map_range(exec, n, |j| f(theta(j, n)));
        Ok(Self {
            samples,
            real: false,
        })
    }

    pub fn from_real_fn<F>(n: usize, exec: Exec, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        check_len(n)?;
        Self::new_real(map_range(exec, n, |j| f(theta(j, n))))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn theta(&self, j: usize) -> f64 {
        theta(j, self.len())
    }

    pub fn re(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.im).collect()
    }

    pub fn mean(&self) -> Complex64 {
        self.samples.iter().sum::<Complex64>() / self.len() as f64
    }

    /// `max_j |f_j|`.
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max_j |f_j - g_j|`; the grids must match.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "grid sizes differ");
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            samples: self.samples.iter().map(|&z| f(z)).collect(),
            real: false,
        }
    }

    pub fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(&self, other: &Self, f: F) -> Self {
        assert_eq!(self.len(), other.len(), "grid sizes differ");
        Self {
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            real: false,
        }
    }

    /// Real part as a real-flagged function.
    pub fn real_part(&self) -> Self {
        Self {
            samples: self
                .samples
                .iter()
                .map(|z| Complex64::new(z.re, 0.0))
                .collect(),
            real: true,
        }
    }

    /// Imaginary part as a real-flagged function.
    pub fn imag_part(&self) -> Self {
        Self {
            samples: self
                .samples
                .iter()
                .map(|z| Complex64::new(z.im, 0.0))
                .collect(),
            real: true,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|z| z * c).collect(),
            real: self.real,
        }
    }

    /// Winding number of the sampled closed curve around 0 (sum of principal
    /// argument increments over 2π). Meaningful only when the grid resolves the curve.
    pub fn winding_number(&self) -> f64 {
        let n = self.len();
        let total: f64 = (0..n)
            .map(|j| (self.samples[(j + 1) % n] / self.samples[j]).arg())
            .sum();
        total / TAU
    }

    /// CSV with header `theta,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re,im\n");
        for (j, z) in self.samples.iter().enumerate() {
            let _ = writeln!(out, "{:.17e},{:.17e},{:.17e}", self.theta(j), z.re, z.im);
        }
        out
    }

    pub fn to_wire(&self) -> GridWire {
        GridWire {
            n: self.len(),
            real: self.real,
            re: self.re(),
            im: self.im(),
        }
    }

    pub fn from_wire(w: &GridWire) -> Result<Self> {
        if w.re.len() != w.n || w.im.len() != w.n {
            return Err(Error::Domain(
                "grid JSON: re/im length differs from n".into(),
            ));
        }
        check_len(w.n)?;
        Ok(Self {
            samples: w
                .re
                .iter()
                .zip(&w.im)
                .map(|(&a, &b)| Complex64::new(a, b))
                .collect(),
            real: w.real,
        })
    }
}

/// JSON form of a grid function: `{"n":…, "real":…, "re":[…], "im":[…]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridWire {
    pub n: usize,
    pub real: bool,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[inline]
pub fn theta(j: usize, n: usize) -> f64 {
    TAU * j as f64 / n as f64
}

fn check_len(n: usize) -> Result<()> {
    if n < MIN_GRID {
        return Err(Error::Domain(format!(
            "grid size {n} below minimum {MIN_GRID}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basics() {
        assert!(BoundaryGridFunction::zeros(4).is_err());
        let f = BoundaryGridFunction::from_fn(16, Exec::Parallel, |t| {
            Complex64::from_polar(1.0, 2.0 * t)
        })
        .unwrap();
        assert!((f.winding_number() - 2.0).abs() < 1e-12);
        assert!(f.mean().norm() < 1e-14);
        let csv = f.to_csv();
        assert!(csv.starts_with("theta,re,im\n"));
        assert_eq!(csv.lines().count(), 17);
        let back = BoundaryGridFunction::from_wire(&f.to_wire()).unwrap();
        assert_eq!(back, f);
    }
}
