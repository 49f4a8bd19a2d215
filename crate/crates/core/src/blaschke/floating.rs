use num_complex::Complex64;

use super::{circle_min_modulus, ZeroList, CIRCLE_SAMPLES};
use crate::error::{Error, Result};

/// Radii are never placed beyond `1 - RADIUS_GAP`.
pub const RADIUS_GAP: f64 = 1e-10;
/// Candidate radii satisfy `1 - r_{i+1} = q (1 - r_i)` with this ratio.
const SCAN_RATIO: f64 = 0.957_603_280_698_573_7; // 2^{-1/16}

/// Sampled minimum of one factor on one checkpoint circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleCheck {
    /// 1-based index `k` of the radius `r_k`.
    pub index: usize,
    pub radius: f64,
    /// 1 for the first factor, 2 for the second.
    pub factor: u8,
    pub target: f64,
    pub sampled_min: f64,
}

impl CircleCheck {
    pub fn passed(&self) -> bool {
        self.sampled_min >= self.target
    }
}

/// `b = b_1 b_2` with the radii `r_1 < r_2 < …` used to split the zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatingFactorization {
    pub first: ZeroList,
    pub second: ZeroList,
    pub radii: Vec<f64>,
    pub checks: Vec<CircleCheck>,
}

impl FloatingFactorization {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(CircleCheck::passed)
    }
}

fn candidates_after(r: f64) -> impl Iterator<Item = f64> {
    let mut s = 1.0 - r;
    std::iter::from_fn(move || {
        s *= SCAN_RATIO;
        (s >= RADIUS_GAP).then_some(1.0 - s)
    })
}

fn exhausted(placed: usize, k: usize) -> Error {
    Error::ConstructionExhausted {
        placed,
        reason: format!("no admissible radius for level {k} below 1 - {RADIUS_GAP:e}"),
    }
}

fn select(points: &[Complex64], keep: impl Fn(f64) -> bool) -> Vec<Complex64> {
    points.iter().copied().filter(|z| keep(z.norm())).collect()
}

/// Splits a finite product into two factors whose moduli stay above the
/// prescribed levels on a common increasing family of circles.
///
/// Radii `r_1 < … < r_K` (`K = beta_seq.len()`) are placed so that the product
/// `B_k` of the zeros with `|z| <= r_{k-1}` or `|z| >= r_{k+1}` satisfies
/// `min_{|z| = r_k} |B_k| >= β_k` (with `r_j = 1` for `j > K`). The first
/// factor takes the zeros in `|z| <= r_1` and in the shells
/// `r_{4j+3} <= |z| <= r_{4j+5}`, the second those in `r_{4j+1} < |z| < r_{4j+3}`;
/// then `b_1` dominates `B_{4j+2}` on `r_{4j+2}` and `b_2` dominates `B_{4j}` on
/// `r_{4j}`, and those circles are re-sampled and returned as checks.
///
/// When the whole product already clears every level on circles outside its
/// zeros, the split is `(b, 1)` with those circles as radii.
pub fn floating_factorization(zeros: &ZeroList, beta_seq: &[f64]) -> Result<FloatingFactorization> {
    if beta_seq.iter().any(|&b| !(b > 0.0 && b < 1.0)) {
        return Err(Error::Domain("levels must lie in (0, 1)".into()));
    }
    if beta_seq.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("levels must be strictly increasing".into()));
    }
    let points = zeros.expanded_points();
    if points.is_empty() {
        return Ok(FloatingFactorization {
            first: ZeroList::empty(),
            second: ZeroList::empty(),
            radii: Vec::new(),
            checks: Vec::new(),
        });
    }
    if beta_seq.is_empty() {
        return Err(Error::Domain("no levels given".into()));
    }
    if let Some(f) = whole_product_floats(zeros, &points, beta_seq) {
        return Ok(f);
    }

    let k_max = beta_seq.len();
    let mut radii: Vec<f64> = vec![1.0 - SCAN_RATIO];
    for k in 1..k_max {
        let r_k = radii[k - 1];
        let inner_cut = if k >= 2 { radii[k - 2] } else { -1.0 };
        let inner = select(&points, |m| m <= inner_cut);
        let up_to_k = select(&points, |m| m <= r_k);
        let mut found = None;
        for cand in candidates_after(r_k) {
            let mut b_k = inner.clone();
            b_k.extend(select(&points, |m| m >= cand));
            if circle_min_modulus(&b_k, r_k, CIRCLE_SAMPLES) < beta_seq[k - 1] {
                continue;
            }
            if circle_min_modulus(&up_to_k, cand, CIRCLE_SAMPLES) >= beta_seq[k] {
                found = Some(cand);
                break;
            }
        }
        radii.push(found.ok_or_else(|| exhausted(radii.len(), k))?);
    }

    let r = |j: usize| if j <= k_max { radii[j - 1] } else { 1.0 };
    let in_first = |m: f64| {
        if m <= r(1) {
            return true;
        }
        let mut j = 0;
        loop {
            if r(4 * j + 1) < m && m < r(4 * j + 3) {
                return false;
            }
            if r(4 * j + 3) <= m && m <= r(4 * j + 5) {
                return true;
            }
            j += 1;
        }
    };
    let (first, second) = split(zeros, in_first)?;

    let mut checks = Vec::new();
    for (idx, factor) in (1..=k_max).filter_map(|i| match i % 4 {
        2 if i >= 6 => Some((i, 1u8)),
        0 => Some((i, 2u8)),
        _ => None,
    }) {
        let part = if factor == 1 { &first } else { &second };
        checks.push(CircleCheck {
            index: idx,
            radius: radii[idx - 1],
            factor,
            target: beta_seq[idx - 1],
            sampled_min: part.circle_min_modulus(radii[idx - 1], CIRCLE_SAMPLES),
        });
    }
    Ok(FloatingFactorization {
        first,
        second,
        radii,
        checks,
    })
}

fn whole_product_floats(
    zeros: &ZeroList,
    points: &[Complex64],
    beta_seq: &[f64],
) -> Option<FloatingFactorization> {
    let outer = points.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut radii = Vec::with_capacity(beta_seq.len());
    let mut checks = Vec::with_capacity(beta_seq.len());
    let mut last = outer;
    for (i, &level) in beta_seq.iter().enumerate() {
        let (r, min) = candidates_after(last)
            .map(|r| (r, circle_min_modulus(points, r, CIRCLE_SAMPLES)))
            .find(|&(_, min)| min >= level)?;
        radii.push(r);
        checks.push(CircleCheck {
            index: i + 1,
            radius: r,
            factor: 1,
            target: level,
            sampled_min: min,
        });
        last = r;
    }
    Some(FloatingFactorization {
        first: zeros.normalized(),
        second: ZeroList::empty(),
        radii,
        checks,
    })
}

fn split(zeros: &ZeroList, in_first: impl Fn(f64) -> bool) -> Result<(ZeroList, ZeroList)> {
    let one = Complex64::new(1.0, 0.0);
    let (a, b): (Vec<_>, Vec<_>) = zeros
        .zeros()
        .iter()
        .copied()
        .partition(|(p, _)| in_first(p.value().norm()));
    Ok((
        ZeroList::new(a, one, zeros.origin_order())?,
        ZeroList::new(b, one, 0)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn finite_product_floats_whole() {
        let z = ZeroList::from_points(&[c(0.5, 0.0), c(-0.2, 0.6), c(0.0, -0.7)]).unwrap();
        let f = floating_factorization(&z, &[0.9]).unwrap();
        assert_eq!(f.first.degree(), 3);
        assert!(f.second.expanded_points().is_empty());
        assert_eq!(f.radii.len(), 1);
        assert!(f.radii[0] > 0.7);
        assert!(f.all_checks_pass());
    }

    #[test]
    fn empty_input() {
        let f = floating_factorization(&ZeroList::empty(), &[0.5]).unwrap();
        assert!(f.radii.is_empty());
        assert_eq!(f.first.degree() + f.second.degree(), 0);
    }

    #[test]
    fn rejects_bad_levels() {
        let z = ZeroList::from_points(&[c(0.5, 0.0)]).unwrap();
        assert!(floating_factorization(&z, &[0.5, 0.4]).is_err());
        assert!(floating_factorization(&z, &[1.0]).is_err());
    }
}
