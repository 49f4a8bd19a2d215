//! Shipped fixtures and seeded random instance generators.
//!
//! Infinite objects enter only through truncated generators: the geometric
//! sequence `1 - 2^{-k}` and the zeros of Frostman shifts of the singular
//! inner function.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blaschke::{singular_shift_zeros, SingularShiftSpec, ZeroList};
use crate::carleson::DiscreteMeasure;
use crate::contour::{level_set_components, HarmonicMethod, JordanCurveApprox, DEFAULT_WALKS};
use crate::error::Result;
use crate::geometry::beta;

/// Levels `1 - 2^{-k}`, `k = 1..=6`, used with [`geometric_sequence`].
pub const GEOMETRIC_LEVELS: [f64; 6] = [0.5, 0.75, 0.875, 0.9375, 0.96875, 0.984375];
/// Step size that forces the adversarial pair into a single step.
pub const ADVERSARIAL_ALPHA: f64 = 3.001;
/// Moment constraints used for the Monte Carlo contour fixtures.
pub const FIXTURE_MOMENTS: usize = 12;
pub const FIXTURE_SEED: u64 = 7;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Zeros `1 - 2^{-k}`, `k = 1..=n`.
pub fn geometric_sequence(n: usize) -> Result<ZeroList> {
    let pts: Vec<Complex64> = (1..=n)
        .map(|k| Complex64::new(1.0 - 0.5f64.powi(k as i32), 0.0))
        .collect();
    ZeroList::from_points(&pts)
}

/// Zeros of `s_{e^{-2}}` and `s_{e^{-1}}` with `|k| <= k_max`.
pub fn singular_shift_pair(k_max: i64) -> Result<(ZeroList, ZeroList)> {
    let b = (-1.0f64).exp();
    let a = singular_shift_zeros(&SingularShiftSpec::symmetric(
        Complex64::new(b * b, 0.0),
        k_max,
    ))?;
    let a_star =
        singular_shift_zeros(&SingularShiftSpec::symmetric(Complex64::new(b, 0.0), k_max))?;
    Ok((a, a_star))
}

/// One zero moved across the origin by `β = 3`: `∓tanh(3/4)`.
pub fn adversarial_pair() -> Result<(ZeroList, ZeroList)> {
    let a = 0.75f64.tanh();
    Ok((
        ZeroList::from_points(&[Complex64::new(-a, 0.0)])?,
        ZeroList::from_points(&[Complex64::new(a, 0.0)])?,
    ))
}

/// Unit atoms at `|z| = 0.2, 0.5, 0.8`.
pub fn staged_measure() -> Result<DiscreteMeasure> {
    DiscreteMeasure::from_real(&[
        (Complex64::new(0.2, 0.0), 1.0),
        (Complex64::from_polar(0.5, 2.0), 1.0),
        (Complex64::from_polar(0.8, -1.0), 1.0),
    ])
}

/// Data for the contour logarithm and the diameter inequality: `u`, `b`,
/// the curves enclosing their zeros, how harmonic measure is computed, the
/// calibration point, and the annulus `r_min <= |z| <= r_max` where the
/// quotient is compared.
#[derive(Debug, Clone)]
pub struct ContourFixture {
    pub name: &'static str,
    pub u: ZeroList,
    pub b: ZeroList,
    pub curves: Vec<JordanCurveApprox>,
    pub method: HarmonicMethod,
    pub reference: Complex64,
    pub annulus: (f64, f64),
}

impl ContourFixture {
    /// `count` exterior test points spiralling through the annulus.
    pub fn sample_points(&self, count: usize) -> Vec<Complex64> {
        let (lo, hi) = self.annulus;
        (0..count)
            .map(|k| {
                let s = k as f64 / count as f64;
                Complex64::from_polar(lo + (hi - lo) * s, TAU * s + 0.1)
            })
            .collect()
    }
}

/// `u(z) = z`, `b` with its zero at 0.1, circle of radius 0.4 with exact
/// Poisson masses.
pub fn disk_fixture() -> Result<ContourFixture> {
    Ok(ContourFixture {
        name: "disk-exact",
        u: ZeroList::power(1),
        b: ZeroList::from_points(&[Complex64::new(0.1, 0.0)])?,
        curves: vec![JordanCurveApprox::circle(
            Complex64::new(0.0, 0.0),
            0.4,
            16384,
            Vec::new(),
        )?],
        method: HarmonicMethod::default(),
        reference: Complex64::new(0.0, 0.7),
        annulus: (0.5, 0.95),
    })
}

/// The disk fixture on a 512-gon with harmonic measure sampled by walks.
pub fn monte_carlo_disk_fixture(seed: u64) -> Result<ContourFixture> {
    let pts = (0..512)
        .map(|k| Complex64::from_polar(0.4, TAU * k as f64 / 512.0))
        .collect();
    Ok(ContourFixture {
        name: "disk-walks",
        u: ZeroList::power(1),
        b: ZeroList::from_points(&[Complex64::new(0.1, 0.0)])?,
        curves: vec![JordanCurveApprox::new(pts, 0, Vec::new())?],
        method: HarmonicMethod::MonteCarlo {
            walks: DEFAULT_WALKS,
            seed,
            moments: FIXTURE_MOMENTS,
        },
        reference: Complex64::new(0.0, 0.7),
        annulus: (0.5, 0.95),
    })
}

/// Three zeros of `u`, the level set `|u| = 0.15` and a `b` with one zero
/// moved by 0.02.
pub fn level_set_fixture(seed: u64) -> Result<ContourFixture> {
    let zs = [
        Complex64::new(0.35, 0.1),
        Complex64::new(0.45, 0.25),
        Complex64::new(-0.4, -0.3),
    ];
    let u = ZeroList::from_points(&zs)?;
    let curves = level_set_components(&u, 0.15, 257)?;
    Ok(ContourFixture {
        name: "level-set-walks",
        b: ZeroList::from_points(&[zs[0] + 0.02, zs[1], zs[2]])?,
        u,
        curves,
        method: HarmonicMethod::Auto {
            walks: DEFAULT_WALKS,
            seed,
            moments: FIXTURE_MOMENTS,
        },
        reference: Complex64::new(0.0, 0.9),
        annulus: (0.75, 0.95),
    })
}

/// Uniform point of the disk `|z| <= r_max`.
pub fn random_point<R: Rng>(rng: &mut R, r_max: f64) -> Complex64 {
    Complex64::from_polar(r_max * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>())
}

/// Point `w` with `β(z, w) <= max_beta` and `|w| <= r_max`.
pub fn random_neighbour<R: Rng>(rng: &mut R, z: Complex64, max_beta: f64, r_max: f64) -> Complex64 {
    let r = (max_beta / 2.0).tanh();
    loop {
        // the automorphism u -> (z + u)/(1 + conj(z) u) sends 0 to z
        let u = random_point(rng, r);
        let w = (z + u) / (1.0 + z.conj() * u);
        if w.norm() <= r_max && beta(z, w) <= max_beta {
            return w;
        }
    }
}

/// `n` zeros in `|z| <= r_max` and a second list with each zero displaced
/// by at most `max_beta`.
pub fn random_displaced<R: Rng>(
    rng: &mut R,
    n: usize,
    r_max: f64,
    max_beta: f64,
) -> Result<(ZeroList, ZeroList)> {
    let z: Vec<Complex64> = (0..n).map(|_| random_point(rng, r_max)).collect();
    let zs: Vec<Complex64> = z
        .iter()
        .map(|&p| random_neighbour(rng, p, max_beta, r_max))
        .collect();
    Ok((ZeroList::from_points(&z)?, ZeroList::from_points(&zs)?))
}

/// Product of degree `1..=max_degree`: random zeros, occasionally repeated
/// or placed at the origin.
pub fn random_product<R: Rng>(rng: &mut R, max_degree: usize) -> Result<ZeroList> {
    let degree = rng.gen_range(1..=max_degree);
    let mut pts = Vec::with_capacity(degree);
    while pts.len() < degree {
        let roll: f64 = rng.gen();
        if roll < 0.1 {
            pts.push(Complex64::new(0.0, 0.0));
        } else if roll < 0.2 && !pts.is_empty() {
            let k = rng.gen_range(0..pts.len());
            pts.push(pts[k]);
        } else {
            pts.push(random_point(rng, 0.95));
        }
    }
    ZeroList::from_points(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        let g = geometric_sequence(30).unwrap();
        assert_eq!(g.degree(), 30);
        assert!(g.expanded_points().iter().all(|z| z.norm() < 1.0));
        let (a, b) = singular_shift_pair(50).unwrap();
        assert_eq!(a.degree(), 101);
        assert_eq!(b.degree(), 101);
        let mut r = rng(3);
        let (z, zs) = random_displaced(&mut r, 20, 0.9, 0.5).unwrap();
        for (p, q) in z.expanded_points().iter().zip(zs.expanded_points()) {
            assert!(beta(*p, q) <= 0.5 + 1e-12 && q.norm() <= 0.9);
        }
        assert!(random_product(&mut r, 12).unwrap().degree() <= 12);
    }

    #[test]
    fn same_seed_same_instance() {
        let a = random_displaced(&mut rng(11), 5, 0.9, 1.0).unwrap();
        let b = random_displaced(&mut rng(11), 5, 0.9, 1.0).unwrap();
        assert_eq!(a, b);
    }
}
