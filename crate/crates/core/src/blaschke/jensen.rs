use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};

const START_GRID: usize = 256;
const MAX_GRID: usize = 1 << 20;
const INTEGER_TOL: f64 = 0.25;
/// Relative half-widths of the annulus around `r`, tried in order.
const WIDTHS: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

/// Result of a Jensen-formula zero count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenCount {
    pub count: usize,
    /// Raw (non-rounded) slope estimate the count was read from.
    pub estimate: f64,
    /// Grid size at which the count stabilised.
    pub grid: usize,
}

/// Trapezoidal mean of `log|f|` on `|z| = r`.
fn mean_log_modulus<F>(f: &F, r: f64, n: usize) -> f64
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let vals = map_range(Exec::default(), n, |j| {
        f(Complex64::from_polar(r, TAU * j as f64 / n as f64))
            .norm()
            .ln()
    });
    vals.iter().sum::<f64>() / n as f64
}

fn nearest(x: f64) -> Option<i64> {
    let k = x.round();
    ((x - k).abs() < INTEGER_TOL && k >= 0.0 && x.is_finite()).then_some(k as i64)
}

/// Number of zeros of `f` in `|z| < r`, counted with multiplicity.
///
/// Jensen's formula says `J(s) = mean log|f(s e^{iθ})|` is piecewise linear in
/// `log s` with slope equal to the number of zeros in `|z| < s`. The slope is
/// measured on both sides of `r` with trapezoidal quadrature; the count is
/// accepted once both one-sided slopes round to the same integer and agree with
/// the previous grid. No condition on `f(0)` is needed.
pub fn jensen_zero_count<F>(f: &F, r: f64) -> Result<JensenCount>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("radius {r} not in (0, 1)")));
    }
    let mut last = f64::NAN;
    let mut last_grid = START_GRID;
    for &w in &WIDTHS {
        let h = w * r.min(1.0 - r);
        let (r1, r2) = (r - h, r + h);
        let (l1, l2) = ((r / r1).ln(), (r2 / r).ln());
        let mut prev: Option<i64> = None;
        let mut prev_slopes = (f64::NAN, f64::NAN);
        let mut n = START_GRID;
        while n <= MAX_GRID {
            let j0 = mean_log_modulus(f, r, n);
            let j1 = mean_log_modulus(f, r1, n);
            let j2 = mean_log_modulus(f, r2, n);
            let left = (j0 - j1) / l1;
            let right = (j2 - j0) / l2;
            last = 0.5 * (left + right);
            last_grid = n;
            let converged =
                (left - prev_slopes.0).abs() < 1e-3 && (right - prev_slopes.1).abs() < 1e-3;
            match (nearest(left), nearest(right)) {
                (Some(a), Some(b)) if a == b => {
                    if prev == Some(a) {
                        return Ok(JensenCount {
                            count: a as usize,
                            estimate: left,
                            grid: n,
                        });
                    }
                    prev = Some(a);
                }
                _ => {
                    prev = None;
                    // settled on inconsistent slopes: a zero sits inside the annulus
                    if converged {
                        break;
                    }
                }
            }
            prev_slopes = (left, right);
            n *= 2;
        }
    }
    Err(Error::Resolution {
        estimate: last,
        grid: last_grid,
    })
}
