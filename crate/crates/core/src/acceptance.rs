//! The acceptance suite: ten criteria, each a list of `{check_name, status,
//! value, threshold}` rows. Reference values come from oracles written here
//! independently of the code under test (permutation enumeration, direct
//! products and sums).

use std::f64::consts::{LN_2, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blaschke::{floating_factorization, ZeroList};
use crate::carleson::DiscreteMeasure;
use crate::cauchy::{
    harmonic_conjugate, l2_truncation_convergence, outer_correction, verify_intwin, Measure,
};
use crate::contour::{trossos_check, ContourLog, HarmonicMeasureAtlas};
use crate::error::Result;
use crate::fixtures::{self, ContourFixture};
use crate::geometry::{alpha_factor, beta};
use crate::grid::BoundaryGridFunction;
use crate::matching::{bottleneck_match, bottleneck_match_points};
use crate::path::{build_path, certify_path};
use crate::Exec;

pub const IDENTITY_TOL: f64 = 1e-8;
pub const MATCH_TOL: f64 = 1e-12;
pub const ENDPOINT_TOL: f64 = 1e-8;
pub const DISK_LOG_TOL: f64 = 1e-6;
pub const WALK_LOG_TOL: f64 = 1e-3;
pub const TROSSOS_TOL: f64 = 1e-3;
pub const CONJUGATE_EXACT_TOL: f64 = 1e-13;
pub const DOUBLE_CONJUGATE_TOL: f64 = 1e-10;
pub const CERTIFY_ETA: f64 = 0.25;
pub const CERTIFY_SAMPLES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One report row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check_name: String,
    pub status: Status,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    pub fn below(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, value, threshold, value < threshold)
    }

    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, value, threshold, value <= threshold)
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, value, threshold, value >= threshold)
    }

    pub fn new(name: &str, value: f64, threshold: f64, ok: bool) -> Self {
        Self {
            check_name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            value,
            threshold,
        }
    }

    pub fn error(name: &str, err: &crate::Error) -> Self {
        Self {
            check_name: format!("{name}: {err}"),
            status: Status::Fail,
            value: f64::NAN,
            threshold: f64::NAN,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Wall-clock budget of a criterion. Kept apart from the checks so that
/// reports stay byte-identical between runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
    pub limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: usize,
    pub name: String,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub timing: Option<Timing>,
}

impl Criterion {
    fn new(id: usize, name: &str) -> Self {
        Self {
            id,
            name: name.into(),
            checks: Vec::new(),
            timing: None,
        }
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn within(&mut self, start: Instant, limit: f64) {
        self.timing = Some(Timing {
            seconds: start.elapsed().as_secs_f64(),
            limit,
        });
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty()
            && self.checks.iter().all(Check::passed)
            && self.timing.map_or(true, |t| t.seconds < t.limit)
    }

    /// `[PASS]  3 name: check = value (threshold t); …, elapsed`.
    pub fn summary(&self) -> String {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        let rows: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                format!(
                    "{} = {:.3e} (threshold {:.3e})",
                    c.check_name, c.value, c.threshold
                )
            })
            .collect();
        let mut line = format!("[{tag}] {:>2} {}: {}", self.id, self.name, rows.join("; "));
        if let Some(t) = self.timing {
            line += &format!("; {:.1}s of {:.0}s", t.seconds, t.limit);
        }
        line
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceConfig {
    pub grid: usize,
    pub seed: u64,
    pub walks: usize,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        Self {
            grid: 4096,
            seed: fixtures::FIXTURE_SEED,
            walks: crate::contour::DEFAULT_WALKS,
        }
    }
}

fn sub_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k)
}

/// Instances shared by the identity and outer-correction criteria.
fn identity_instances(cfg: &AcceptanceConfig) -> Result<Vec<(ZeroList, ZeroList)>> {
    let mut rng = fixtures::rng(sub_seed(cfg.seed, 1));
    (0..100)
        .map(|_| {
            let n = rng.gen_range(1..=50);
            fixtures::random_displaced(&mut rng, n, 0.95, 1.0)
        })
        .collect()
}

/// Criteria 1 and 2.
pub fn identity_and_outer(cfg: &AcceptanceConfig) -> (Criterion, Criterion) {
    let mut c1 = Criterion::new(1, "cauchy-argument-identity");
    let mut c2 = Criterion::new(2, "outer-correction-exactness");
    let start = Instant::now();
    let instances = match identity_instances(cfg) {
        Ok(v) => v,
        Err(e) => {
            c1.push(Check::error("instances", &e));
            c2.push(Check::error("instances", &e));
            return (c1, c2);
        }
    };
    let mut worst_cost: f64 = 0.0;
    let mut worst_identity: f64 = 0.0;
    let mut pairings = Vec::with_capacity(instances.len());
    for (z, zs) in &instances {
        let result = bottleneck_match(z, zs).and_then(|p| {
            let err = verify_intwin(z, zs, &p.perm, cfg.grid)?;
            Ok((p, err))
        });
        match result {
            Ok((p, err)) => {
                worst_cost = worst_cost.max(p.cost);
                worst_identity = worst_identity.max(err);
                pairings.push(p);
            }
            Err(e) => {
                c1.push(Check::error("verify_intwin", &e));
                return (c1, c2);
            }
        }
    }
    c1.push(Check::below("max grid error", worst_identity, IDENTITY_TOL));
    c1.push(Check::at_most("max matched beta", worst_cost, 1.0));
    c1.within(start, 60.0);

    let mut worst_residual: f64 = 0.0;
    let mut worst_functional: f64 = 0.0;
    for ((z, zs), p) in instances.iter().zip(&pairings) {
        let pairs = p.pairs(&z.expanded_points(), &zs.expanded_points());
        match outer_correction(&pairs, cfg.grid) {
            Ok(oc) => {
                // b e^{v} - b* h recomputed from the returned grids
                let mut r: f64 = 0.0;
                for j in 0..cfg.grid {
                    let e = Complex64::from_polar(1.0, TAU * j as f64 / cfg.grid as f64);
                    let lhs = z.eval(e) * oc.v.samples()[j].re.exp();
                    r = r.max((lhs - zs.eval(e) * oc.h.samples()[j]).norm());
                }
                worst_residual = worst_residual.max(r);
                worst_functional = worst_functional.max(oc.report.functional_sup);
            }
            Err(e) => {
                c2.push(Check::error("outer_correction", &e));
                return (c1, c2);
            }
        }
    }
    c2.push(Check::below(
        "max |b e^v - b* h|",
        worst_residual,
        IDENTITY_TOL,
    ));
    c2.push(Check::below(
        "max functional sup-norm",
        worst_functional,
        IDENTITY_TOL,
    ));
    (c1, c2)
}

/// `min over permutations of max_i β(z_i, w_{π(i)})` by Heap's algorithm.
fn enumerate_bottleneck(z: &[Complex64], w: &[Complex64]) -> f64 {
    let n = z.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let cost = |p: &[usize]| {
        p.iter()
            .enumerate()
            .map(|(i, &j)| beta(z[i], w[j]))
            .fold(0.0, f64::max)
    };
    let mut best = cost(&perm);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(cost(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Criterion 3.
pub fn matching_optimality(cfg: &AcceptanceConfig) -> Criterion {
    let mut c = Criterion::new(3, "bottleneck-matching-optimality");
    let start = Instant::now();
    let mut rng = fixtures::rng(sub_seed(cfg.seed, 3));
    let mut worst: f64 = 0.0;
    let mut stored: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=7);
        let z: Vec<Complex64> = (0..n)
            .map(|_| fixtures::random_point(&mut rng, 0.95))
            .collect();
        let w: Vec<Complex64> = (0..n)
            .map(|_| fixtures::random_point(&mut rng, 0.95))
            .collect();
        match bottleneck_match_points(&z, &w) {
            Ok(p) => {
                worst = worst.max((p.cost - enumerate_bottleneck(&z, &w)).abs());
                stored = stored.max((p.cost - p.recompute_cost(&z, &w)).abs());
            }
            Err(e) => {
                c.push(Check::error("bottleneck_match", &e));
                return c;
            }
        }
    }
    c.push(Check::at_most("max |cost - n! oracle|", worst, MATCH_TOL));
    c.push(Check::at_most("max |cost - recomputed|", stored, MATCH_TOL));
    c.within(start, 10.0);
    c
}

/// Criterion 4.
pub fn jensen_counts(cfg: &AcceptanceConfig) -> Criterion {
    let mut c = Criterion::new(4, "jensen-zero-count");
    let mut rng = fixtures::rng(sub_seed(cfg.seed, 4));
    let mut mismatches = 0usize;
    let mut trials = 0usize;
    for _ in 0..100 {
        let b = match fixtures::random_product(&mut rng, 12) {
            Ok(b) => b,
            Err(e) => {
                c.push(Check::error("random_product", &e));
                return c;
            }
        };
        let moduli: Vec<f64> = b.expanded_points().iter().map(|z| z.norm()).collect();
        for _ in 0..3 {
            let r = loop {
                let r = rng.gen_range(0.05..0.98);
                if moduli.iter().all(|m| (m - r).abs() > 1e-3) {
                    break r;
                }
            };
            let expected = moduli.iter().filter(|&&m| m < r).count();
            trials += 1;
            match b.jensen_zero_count(r) {
                Ok(j) if j.count == expected => {}
                _ => mismatches += 1,
            }
        }
    }
    c.push(Check::at_most("count mismatches", mismatches as f64, 0.0));
    c.push(Check::at_least("products x radii", trials as f64, 300.0));
    c
}

/// Criterion 5.
pub fn path_certification(cfg: &AcceptanceConfig) -> Criterion {
    let mut c = Criterion::new(5, "path-certification");
    let start = Instant::now();
    let mut rng = fixtures::rng(sub_seed(cfg.seed, 5));
    let mut certified = 0usize;
    let mut min_margin = f64::INFINITY;
    let mut counts_changed = 0usize;
    let mut worst_endpoint: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.gen_range(1..=10);
        let run = fixtures::random_displaced(&mut rng, n, 0.9, 0.5).and_then(|(z, zs)| {
            let p = build_path(&z, &zs, None, cfg.grid)?;
            let r = certify_path(&p, CERTIFY_ETA, CERTIFY_SAMPLES)?;
            Ok((p, r))
        });
        match run {
            Ok((p, r)) => {
                certified += r.certified as usize;
                min_margin = min_margin.min(r.epsilon_observed);
                counts_changed += r.segments.iter().filter(|s| !s.counts_preserved).count();
                worst_endpoint = worst_endpoint.max(p.endpoint_residual);
            }
            Err(e) => {
                c.push(Check::error("build/certify", &e));
                return c;
            }
        }
    }
    c.push(Check::at_least("certified paths", certified as f64, 20.0));
    c.push(Check::new("min margin", min_margin, 0.0, min_margin > 0.0));
    c.push(Check::at_most(
        "segments with changed zero counts",
        counts_changed as f64,
        0.0,
    ));
    c.push(Check::below(
        "max endpoint residual",
        worst_endpoint,
        ENDPOINT_TOL,
    ));
    let adversarial = fixtures::adversarial_pair().and_then(|(z, zs)| {
        let p = build_path(&z, &zs, Some(fixtures::ADVERSARIAL_ALPHA), cfg.grid)?;
        certify_path(&p, CERTIFY_ETA, CERTIFY_SAMPLES)
    });
    match adversarial {
        Ok(r) => c.push(Check::at_least(
            "adversarial fixture rejected",
            (!r.certified) as u8 as f64,
            1.0,
        )),
        Err(e) => c.push(Check::error("adversarial fixture", &e)),
    }
    c.within(start, 300.0);
    c
}

/// Criterion 6.
pub fn singular_shift_displacement(_cfg: &AcceptanceConfig) -> Criterion {
    let mut c = Criterion::new(6, "singular-shift-displacement");
    match fixtures::singular_shift_pair(50).and_then(|(a, b)| bottleneck_match(&a, &b)) {
        Ok(p) => c.push(Check::at_least(
            "sup matched displacement",
            p.cost,
            LN_2 - 0.05,
        )),
        Err(e) => c.push(Check::error("singular shift", &e)),
    }
    c
}

struct ContourRun {
    fixture: ContourFixture,
    atlas: HarmonicMeasureAtlas,
    log: ContourLog,
}

fn contour_run(f: ContourFixture) -> Result<ContourRun> {
    let atlas = HarmonicMeasureAtlas::build(&f.u, Some(&f.b), &f.curves, f.method)?;
    let log = ContourLog::new(&f.u, &f.b, &atlas, f.reference)?;
    Ok(ContourRun {
        fixture: f,
        atlas,
        log,
    })
}

/// Criteria 7 and 8 on the shipped contour fixtures.
pub fn contour_criteria(cfg: &AcceptanceConfig) -> (Criterion, Criterion) {
    let mut c7 = Criterion::new(7, "contour-logarithm");
    let mut c8 = Criterion::new(8, "arc-diameter-inequality");
    let with_walks = |f: ContourFixture| ContourFixture {
        method: match f.method {
            crate::contour::HarmonicMethod::Auto { moments, .. } => {
                crate::contour::HarmonicMethod::Auto {
                    walks: cfg.walks,
                    seed: cfg.seed,
                    moments,
                }
            }
            crate::contour::HarmonicMethod::MonteCarlo { moments, .. } => {
                crate::contour::HarmonicMethod::MonteCarlo {
                    walks: cfg.walks,
                    seed: cfg.seed,
                    moments,
                }
            }
        },
        ..f
    };
    let builders: [(fn(u64) -> Result<ContourFixture>, f64); 3] = [
        (|_| fixtures::disk_fixture(), DISK_LOG_TOL),
        (fixtures::monte_carlo_disk_fixture, WALK_LOG_TOL),
        (fixtures::level_set_fixture, WALK_LOG_TOL),
    ];
    let mut rng = fixtures::rng(sub_seed(cfg.seed, 8));
    for (k, (build, tol)) in builders.into_iter().enumerate() {
        let fixture = match build(cfg.seed) {
            Ok(f) if k == 0 => f,
            Ok(f) => with_walks(f),
            Err(e) => {
                c7.push(Check::error("fixture", &e));
                c8.push(Check::error("fixture", &e));
                continue;
            }
        };
        let name = fixture.name;
        let run = match contour_run(fixture) {
            Ok(r) => r,
            Err(e) => {
                c7.push(Check::error(name, &e));
                c8.push(Check::error(name, &e));
                continue;
            }
        };
        let (u, b) = (&run.fixture.u, &run.fixture.b);
        let mut worst: f64 = 0.0;
        for z in run.fixture.sample_points(50) {
            match run.log.eval(z) {
                Ok(l) => worst = worst.max((l.exp() - u.eval(z) / b.eval(z)).norm()),
                Err(_) => worst = f64::INFINITY,
            }
        }
        c7.push(Check::below(
            &format!("{name}: max |exp L - u/b| at 50 points"),
            worst,
            tol,
        ));

        let mut slack = f64::INFINITY;
        for (idx, curve) in run.atlas.curves.iter().enumerate() {
            let n = curve.len();
            let mut arcs = vec![(0, n)];
            arcs.extend((0..64).map(|_| (rng.gen_range(0..n), rng.gen_range(1..=n))));
            match trossos_check(u, &run.atlas, idx, &arcs) {
                Ok(r) => slack = slack.min(r.worst_slack),
                Err(e) => c8.push(Check::error(name, &e)),
            }
        }
        c8.push(Check::at_least(
            &format!("{name}: worst slack over 65 arcs per curve"),
            slack,
            -TROSSOS_TOL,
        ));
    }
    (c7, c8)
}

/// Sampled `min |∏ α_a|` on `|z| = r`: equispaced angles plus the zero arguments.
fn sampled_min(points: &[Complex64], r: f64, samples: usize) -> f64 {
    let angles = (0..samples)
        .map(|j| TAU * j as f64 / samples as f64)
        .chain(points.iter().map(|z| z.arg()));
    angles
        .map(|t| {
            let z = Complex64::from_polar(r, t);
            points
                .iter()
                .map(|&a| alpha_factor(a, z).norm())
                .product::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Criterion 9.
pub fn floating_checkpoints(_cfg: &AcceptanceConfig) -> Criterion {
    let mut c = Criterion::new(9, "floating-factorization");
    let zeros = match fixtures::geometric_sequence(30) {
        Ok(z) => z,
        Err(e) => {
            c.push(Check::error("fixture", &e));
            return c;
        }
    };
    let f = match floating_factorization(&zeros, &fixtures::GEOMETRIC_LEVELS) {
        Ok(f) => f,
        Err(e) => {
            c.push(Check::error("floating_factorization", &e));
            return c;
        }
    };
    let (p1, p2) = (f.first.expanded_points(), f.second.expanded_points());
    let mut split = [p1.clone(), p2.clone()].concat();
    let mut orig = zeros.expanded_points();
    let key = |a: &Complex64, b: &Complex64| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
    split.sort_by(key);
    orig.sort_by(key);
    c.push(Check::at_least(
        "factors partition the zeros",
        (split == orig) as u8 as f64,
        1.0,
    ));
    c.push(Check::at_least(
        "checkpoint circles",
        f.checks.len() as f64,
        2.0,
    ));
    let mut margin = f64::INFINITY;
    for chk in &f.checks {
        let pts = if chk.factor == 1 { &p1 } else { &p2 };
        let level = fixtures::GEOMETRIC_LEVELS[chk.index - 1];
        margin = margin.min(sampled_min(pts, chk.radius, 4096) - level);
    }
    c.push(Check::at_least("min (sampled |b_i| - beta_k)", margin, 0.0));
    c
}

/// Criterion 10.
pub fn kernel_sanity(cfg: &AcceptanceConfig) -> Criterion {
    let mut c = Criterion::new(10, "analysis-kernels");
    let n = cfg.grid;
    let run = || -> Result<Vec<Check>> {
        let cos = BoundaryGridFunction::from_real_fn(n, Exec::default(), f64::cos)?;
        let sin = BoundaryGridFunction::from_real_fn(n, Exec::default(), f64::sin)?;
        let e1 = harmonic_conjugate(&cos)?.sup_distance(&sin);

        let mut rng = fixtures::rng(sub_seed(cfg.seed, 10));
        let coeffs: Vec<(f64, f64)> = (0..=64)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f = BoundaryGridFunction::from_real_fn(n, Exec::default(), |t| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| a * (k as f64 * t).cos() + b * (k as f64 * t).sin())
                .sum()
        })?;
        let hh = harmonic_conjugate(&harmonic_conjugate(&f)?)?;
        let mean = f.mean();
        let e2 = hh.zip_with(&f, |x, y| x + y - mean).sup_norm();

        let staged = fixtures::staged_measure()?;
        let radii = [0.1, 0.15, 0.3, 0.4, 0.6, 0.7, 0.85, 0.95];
        let vals = l2_truncation_convergence(&Measure::Discrete(staged.clone()), &radii, n)?;
        let increases = vals.windows(2).filter(|w| w[1] > w[0]).count();
        let oracle = |r: f64| direct_tail_l2(&staged, r, n);
        let oracle_gap = radii
            .iter()
            .zip(&vals)
            .map(|(&r, &v)| (v - oracle(r)).abs())
            .fold(0.0, f64::max);
        Ok(vec![
            Check::at_most("|H(cos) - sin|", e1, CONJUGATE_EXACT_TOL),
            Check::below("|HH f + (f - mean)|", e2, DOUBLE_CONJUGATE_TOL),
            Check::at_most("truncation increases", increases as f64, 0.0),
            Check::at_most("truncation past last atom", vals[radii.len() - 1], 0.0),
            Check::at_most("|truncation - direct oracle|", oracle_gap, 1e-12),
        ])
    };
    match run() {
        Ok(checks) => c.checks = checks,
        Err(e) => c.push(Check::error("kernels", &e)),
    }
    c
}

/// `‖Σ_{|z| > r} w/(e - z)‖_2` on the grid, summed directly.
fn direct_tail_l2(mu: &DiscreteMeasure, r: f64, n: usize) -> f64 {
    let s: f64 = (0..n)
        .map(|j| {
            let e = Complex64::from_polar(1.0, TAU * j as f64 / n as f64);
            mu.atoms()
                .iter()
                .filter(|(p, _)| p.value().norm() > r)
                .map(|&(p, w)| w / (e - p.value()))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum();
    (s / n as f64).sqrt()
}

/// All ten criteria in order.
pub fn run_all(cfg: &AcceptanceConfig) -> Vec<Criterion> {
    let (c1, c2) = identity_and_outer(cfg);
    let (c7, c8) = contour_criteria(cfg);
    vec![
        c1,
        c2,
        matching_optimality(cfg),
        jensen_counts(cfg),
        path_certification(cfg),
        singular_shift_displacement(cfg),
        c7,
        c8,
        floating_checkpoints(cfg),
        kernel_sanity(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heap_enumeration_visits_every_permutation() {
        // cost = max displacement; with w a rotation of z only the matching
        // permutation reaches 0
        let z: Vec<Complex64> = (0..5)
            .map(|k| Complex64::from_polar(0.5, k as f64))
            .collect();
        let mut w = z.clone();
        w.rotate_left(2);
        assert!(enumerate_bottleneck(&z, &w) < 1e-15);
        assert!(enumerate_bottleneck(&z[..1], &w[..1]) > 0.0);
    }

    #[test]
    fn sampled_min_of_single_factor() {
        let a = [Complex64::new(0.5, 0.0)];
        // min on |z| = 0.5 is at z = 0.5 (value 0)
        assert!(sampled_min(&a, 0.5, 64) < 1e-15);
    }

    #[test]
    fn check_rows() {
        assert!(Check::below("x", 0.5, 1.0).passed());
        assert!(!Check::at_least("x", 0.5, 1.0).passed());
        let json = serde_json::to_string(&Check::at_most("x", 1.0, 1.0)).unwrap();
        assert!(json.contains("\"status\":\"pass\""));
    }
}
