use std::path::Path;

use diskfn::acceptance::{run_all, AcceptanceConfig, Check};
use diskfn::blaschke::{ComplexWire, ZeroList, ZeroListWire};
use diskfn::carleson::{
    alpha_b, box_carleson_norm, interpolation_constant, mu_b, separation_split, GridSpec,
};
use diskfn::cauchy::{
    cauchy_on_circle, discrete_cauchy_on_circle, l2_norm, outer_correction, verify_intwin,
    PathMeasure,
};
use diskfn::contour::{
    curves_csv, level_set_components, trossos_check, ContourLog, HarmonicMeasureAtlas,
    HarmonicMethod, TrossosReport,
};
use diskfn::fixtures::{self, ContourFixture};
use diskfn::geometry::{beta, mobius, rho, DiskPoint};
use diskfn::matching::{bottleneck_match, pairing_diagnostics};
use diskfn::path::{build_path, certify_path};
use diskfn::Error;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{config_hash, RunConfig};
use crate::output::{parse, print_report, read_input, Artifacts};
use crate::{CliError, Command};

/// A zero list, bare or inside the `result` of an artifact written by `fixtures`.
#[derive(Deserialize)]
#[serde(untagged)]
enum ZerosInput {
    Bare(ZeroListWire),
    Artifact { result: ZeroListWire },
}

fn load_zeros(path: &Path) -> Result<(ZeroList, Vec<u8>), CliError> {
    let bytes = read_input(path)?;
    let wire = match parse(path, &bytes)? {
        ZerosInput::Bare(w) | ZerosInput::Artifact { result: w } => w,
    };
    Ok((ZeroList::from_wire(&wire)?, bytes))
}

fn finish(
    art: &mut Artifacts,
    name: &str,
    command: &str,
    cfg: &RunConfig,
    report: &[Check],
    result: serde_json::Value,
) -> Result<bool, CliError> {
    art.json(name, command, cfg, Some(report), result)?;
    print_report(report);
    for p in &art.written {
        println!("wrote {}", p.display());
    }
    Ok(report.iter().all(Check::passed))
}

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<bool, CliError> {
    match cmd {
        Command::Eval { zeros } => {
            let (b, bytes) = load_zeros(zeros)?;
            let mut art = Artifacts::new(cfg, config_hash(cfg, "eval", cmd, &[bytes]))?;
            let trace = b.eval_boundary(cfg.grid_size)?;
            let dev = trace
                .samples()
                .iter()
                .map(|z| (z.norm() - 1.0).abs())
                .fold(0.0, f64::max);
            art.csv("trace.csv", &trace.to_csv())?;
            let report = [Check::at_most(
                "max ||b| - 1| on the grid",
                dev,
                cfg.tol("unimodular"),
            )];
            let result = json!({
                "degree": b.degree(),
                "blaschke_condition_sum": b.blaschke_condition_sum(),
                "winding_number": trace.winding_number(),
            });
            finish(&mut art, "eval.json", "eval", cfg, &report, result)
        }
        Command::Geom { input } => geom(cmd, input, cfg),
        Command::Carleson {
            zeros,
            depth,
            separation,
            radius,
        } => {
            let (b, bytes) = load_zeros(zeros)?;
            let mut art = Artifacts::new(cfg, config_hash(cfg, "carleson", cmd, &[bytes]))?;
            let mu = mu_b(&b);
            let norm = box_carleson_norm(&mu, *depth);
            let ic = interpolation_constant(&b);
            let classes = separation_split(&b, *separation)?;
            let alpha = match alpha_b(&b, *radius, GridSpec::default()) {
                Ok(a) => Some(
                    json!({"value": a.value, "resolution": a.resolution, "samples": a.samples}),
                ),
                Err(Error::RegionEmpty) => None,
                Err(e) => return Err(e.into()),
            };
            let min_sep = classes
                .iter()
                .flat_map(|c| {
                    let p = c.expanded_points();
                    (0..p.len())
                        .flat_map(move |i| (0..i).map(move |j| (i, j)))
                        .map(move |(i, j)| beta(p[i], p[j]))
                        .collect::<Vec<_>>()
                })
                .fold(f64::INFINITY, f64::min);
            let l2 = l2_norm(&discrete_cauchy_on_circle(&mu, cfg.grid_size)?);
            let bound = (cfg.slack_constant * norm * mu.total_variation()).sqrt();
            let mut report = vec![
                Check::at_least("min beta within split classes", min_sep, *separation),
                Check::at_most("||C(mu_b)||_2 against slack bound", l2, bound),
            ];
            if !ic.degenerate {
                report.push(Check::at_most(
                    "interpolation constant: derivative vs product route",
                    ic.discrepancy(),
                    cfg.tol("interpolation"),
                ));
            }
            let result = json!({
                "box_carleson_norm": norm,
                "depth": depth,
                "interpolation_constant": ic.value,
                "interpolation_product_route": ic.product_route,
                "degenerate": ic.degenerate,
                "classes": classes.iter().map(ZeroList::to_wire).collect::<Vec<_>>(),
                "alpha_b": alpha,
            });
            finish(&mut art, "carleson.json", "carleson", cfg, &report, result)
        }
        Command::Cauchy { zeros, zeros_star } => {
            let (b, b1) = load_zeros(zeros)?;
            let (bs, b2) = load_zeros(zeros_star)?;
            let mut art = Artifacts::new(cfg, config_hash(cfg, "cauchy", cmd, &[b1, b2]))?;
            let p = bottleneck_match(&b, &bs)?;
            let pairs = p.pairs(&b.expanded_points(), &bs.expanded_points());
            let err = verify_intwin(&b, &bs, &p.perm, cfg.grid_size)?;
            let oc = outer_correction(&pairs, cfg.grid_size)?;
            let c = cauchy_on_circle(&PathMeasure::from_pairs(&pairs)?, cfg.grid_size)?;
            art.csv("cauchy_trace.csv", &c.to_csv())?;
            art.csv("outer_h.csv", &oc.h.to_csv())?;
            let tol = cfg.tol("identity");
            let report = [
                Check::below("|exp(2i Im C) - e^{ig} b conj(b*)|", err, tol),
                Check::below("|b e^v - b* h|", oc.report.identity_residual, tol),
                Check::below("|2 Im C - (log|h|)~|", oc.report.functional_sup, tol),
            ];
            let result = json!({
                "pairing": p,
                "gamma": ComplexWire::from(oc.gamma),
                "outer": oc.report,
            });
            finish(&mut art, "cauchy.json", "cauchy", cfg, &report, result)
        }
        Command::Match {
            zeros,
            zeros_star,
            bins,
        } => {
            let (b, b1) = load_zeros(zeros)?;
            let (bs, b2) = load_zeros(zeros_star)?;
            let mut art = Artifacts::new(cfg, config_hash(cfg, "match", cmd, &[b1, b2]))?;
            let p = bottleneck_match(&b, &bs)?;
            let d = pairing_diagnostics(&p, &b, &bs, *bins)?;
            let recomputed = p.recompute_cost(&b.expanded_points(), &bs.expanded_points());
            let report = [Check::at_most(
                "|cost - recomputed cost|",
                (p.cost - recomputed).abs(),
                cfg.tol("match"),
            )];
            let result = json!({
                "perm": p.perm,
                "cost": p.cost,
                "displacements": d.displacements,
                "histogram": d.histogram,
                "path_measure": d.path.to_wire(),
            });
            finish(&mut art, "pairing.json", "match", cfg, &report, result)
        }
        Command::Path {
            zeros,
            zeros_star,
            fixture,
            alpha,
            eta,
            samples,
        } => {
            let (z, zs, inputs, alpha) = match (fixture.as_deref(), zeros, zeros_star) {
                (Some("adversarial"), _, _) => {
                    let (z, zs) = fixtures::adversarial_pair()?;
                    (z, zs, vec![], alpha.or(Some(fixtures::ADVERSARIAL_ALPHA)))
                }
                (Some(other), _, _) => {
                    return Err(CliError::Input(format!(
                        "unknown path fixture {other} (known: adversarial)"
                    )))
                }
                (None, Some(a), Some(b)) => {
                    let (z, b1) = load_zeros(a)?;
                    let (zs, b2) = load_zeros(b)?;
                    (z, zs, vec![b1, b2], *alpha)
                }
                _ => {
                    return Err(CliError::Input(
                        "--zeros and --zeros-star are required".into(),
                    ))
                }
            };
            if let Some(a) = alpha {
                if !(a > 0.0) {
                    return Err(CliError::Input(format!("--alpha {a}: must be positive")));
                }
            }
            let mut art = Artifacts::new(cfg, config_hash(cfg, "path", cmd, &inputs))?;
            let path = build_path(&z, &zs, alpha, cfg.grid_size)?;
            let cert = certify_path(&path, *eta, *samples)?;
            art.json("path.json", "path", cfg, None, path.to_wire())?;
            art.json("certification.json", "path", cfg, None, &cert)?;
            art.csv("modulus.csv", &path.modulus_csv(9, 256))?;
            let report = [
                Check::at_least("certified", cert.certified as u8 as f64, 1.0),
                Check::new(
                    "min margin on component boundaries",
                    cert.epsilon_observed,
                    0.0,
                    cert.epsilon_observed > 0.0,
                ),
                Check::below(
                    "endpoint residual",
                    path.endpoint_residual,
                    cfg.tol("endpoint"),
                ),
            ];
            let result = json!({
                "steps": path.steps.len(),
                "alpha": path.alpha,
                "refinements": path.refinements,
                "epsilon": path.epsilon,
                "worst_step_norm": path.worst_step_norm(),
                "failures": cert.failures,
            });
            finish(&mut art, "path_report.json", "path", cfg, &report, result)
        }
        Command::Contour {
            fixture,
            zeros,
            zeros_b,
            delta,
            resolution,
            reference,
            walks,
            moments,
        } => {
            let method = HarmonicMethod::Auto {
                walks: *walks,
                seed: cfg.seed,
                moments: *moments,
            };
            let (f, inputs) = match (fixture.as_deref(), zeros, zeros_b) {
                (Some("disk"), _, _) => (fixtures::disk_fixture()?, vec![]),
                (Some("disk-walks"), _, _) => {
                    let mut f = fixtures::monte_carlo_disk_fixture(cfg.seed)?;
                    f.method = HarmonicMethod::MonteCarlo {
                        walks: *walks,
                        seed: cfg.seed,
                        moments: *moments,
                    };
                    (f, vec![])
                }
                (Some("level-set"), _, _) => {
                    let mut f = fixtures::level_set_fixture(cfg.seed)?;
                    f.method = method;
                    (f, vec![])
                }
                (Some(other), _, _) => {
                    return Err(CliError::Input(format!(
                        "unknown contour fixture {other} (known: disk, disk-walks, level-set)"
                    )))
                }
                (None, Some(a), Some(b)) => {
                    let (u, b1) = load_zeros(a)?;
                    let (b, b2) = load_zeros(b)?;
                    let curves = level_set_components(&u, *delta, *resolution)?;
                    let reach = curves
                        .iter()
                        .flat_map(|c| c.points().iter().map(|p| p.norm()))
                        .fold(0.0, f64::max);
                    if reach + 0.02 >= 0.95 {
                        return Err(CliError::Input(
                            "level set reaches |z| = 0.93; no exterior annulus to test".into(),
                        ));
                    }
                    let f = ContourFixture {
                        name: "input",
                        u,
                        b,
                        curves,
                        method,
                        reference: parse_complex(reference)?,
                        annulus: (reach + 0.02, 0.95),
                    };
                    (f, vec![b1, b2])
                }
                _ => return Err(CliError::Input("--zeros and --zeros-b are required".into())),
            };
            let mut art = Artifacts::new(cfg, config_hash(cfg, "contour", cmd, &inputs))?;
            contour(&mut art, cfg, &f)
        }
        Command::Fixtures { name, k, n } => {
            let mut art = Artifacts::new(cfg, config_hash(cfg, "fixtures", cmd, &[]))?;
            let all = name == "all";
            let mut wrote = false;
            if all || name == "singular-shift" {
                let (a, b) = fixtures::singular_shift_pair(*k)?;
                art.json(
                    "singular_shift_e-2.json",
                    "fixtures",
                    cfg,
                    None,
                    a.to_wire(),
                )?;
                art.json(
                    "singular_shift_e-1.json",
                    "fixtures",
                    cfg,
                    None,
                    b.to_wire(),
                )?;
                wrote = true;
            }
            if all || name == "geometric" {
                let g = fixtures::geometric_sequence(*n)?;
                art.json("geometric.json", "fixtures", cfg, None, g.to_wire())?;
                wrote = true;
            }
            if all || name == "adversarial" {
                let (a, b) = fixtures::adversarial_pair()?;
                art.json("adversarial_z.json", "fixtures", cfg, None, a.to_wire())?;
                art.json(
                    "adversarial_z_star.json",
                    "fixtures",
                    cfg,
                    None,
                    b.to_wire(),
                )?;
                wrote = true;
            }
            if !wrote {
                return Err(CliError::Input(format!(
                    "unknown fixture {name} (known: singular-shift, geometric, adversarial, all)"
                )));
            }
            for p in &art.written {
                println!("wrote {}", p.display());
            }
            Ok(true)
        }
        Command::Acceptance { walks } => {
            let mut art = Artifacts::new(cfg, config_hash(cfg, "acceptance", cmd, &[]))?;
            let acfg = AcceptanceConfig {
                grid: cfg.grid_size,
                seed: cfg.seed,
                walks: *walks,
            };
            let criteria = run_all(&acfg);
            let mut rows = Vec::new();
            for c in &criteria {
                println!("{}", c.summary());
                rows.extend(c.checks.iter().map(|k| Check {
                    check_name: format!("{} {}: {}", c.id, c.name, k.check_name),
                    ..k.clone()
                }));
            }
            art.json("acceptance.json", "acceptance", cfg, Some(&rows), &criteria)?;
            for p in &art.written {
                println!("wrote {}", p.display());
            }
            Ok(criteria.iter().all(|c| c.passed()))
        }
    }
}

#[derive(Deserialize)]
struct GeomInput {
    pairs: Vec<GeomPair>,
}

#[derive(Deserialize, Serialize)]
struct GeomPair {
    z: ComplexWire,
    w: ComplexWire,
}

fn geom(cmd: &Command, input: &Path, cfg: &RunConfig) -> Result<bool, CliError> {
    let bytes = read_input(input)?;
    let data: GeomInput = parse(input, &bytes)?;
    let mut art = Artifacts::new(cfg, config_hash(cfg, "geom", cmd, &[bytes]))?;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for p in &data.pairs {
        let (z, w) = (DiskPoint::new(p.z.into())?, DiskPoint::new(p.w.into())?);
        let r = rho(z.value(), w.value());
        let b = beta(z.value(), w.value());
        worst = worst.max((b - ((1.0 + r) / (1.0 - r)).ln()).abs() / b.max(1.0));
        rows.push(json!({
            "z": p.z,
            "w": p.w,
            "rho": r,
            "beta": b,
            "phi_z_w": ComplexWire::from(mobius(z, w)?),
        }));
    }
    let report = [Check::at_most(
        "beta vs log((1+rho)/(1-rho)), relative",
        worst,
        1e-12,
    )];
    finish(
        &mut art,
        "geom.json",
        "geom",
        cfg,
        &report,
        json!({ "pairs": rows }),
    )
}

fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Input(format!("--reference {s}: expected re,im"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn contour(art: &mut Artifacts, cfg: &RunConfig, f: &ContourFixture) -> Result<bool, CliError> {
    let atlas = HarmonicMeasureAtlas::build(&f.u, Some(&f.b), &f.curves, f.method)?;
    let log = ContourLog::new(&f.u, &f.b, &atlas, f.reference)?;
    let mut worst: f64 = 0.0;
    for z in f.sample_points(50) {
        let l = log.eval(z)?;
        worst = worst.max((l.exp() - f.u.eval(z) / f.b.eval(z)).norm());
    }
    let exact = matches!(f.method, HarmonicMethod::Auto { .. })
        && f.curves.iter().all(|c| c.disk.is_some());
    let tol = cfg.tol(if exact { "log_exact" } else { "log_walks" });

    let mut rng = fixtures::rng(cfg.seed);
    let mut trossos: Vec<TrossosReport> = Vec::new();
    for (k, c) in atlas.curves.iter().enumerate() {
        let n = c.len();
        let mut arcs = vec![(0, n)];
        arcs.extend((0..64).map(|_| (rng.gen_range(0..n), rng.gen_range(1..=n))));
        trossos.push(trossos_check(&f.u, &atlas, k, &arcs)?);
    }
    let slack = trossos
        .iter()
        .map(|r| r.worst_slack)
        .fold(f64::INFINITY, f64::min);

    art.json(
        "curves.json",
        "contour",
        cfg,
        None,
        atlas.curves.iter().map(|c| c.to_wire()).collect::<Vec<_>>(),
    )?;
    art.json("atlas.json", "contour", cfg, None, atlas.to_wire())?;
    art.csv("curves.csv", &curves_csv(&atlas.curves))?;
    let report = [
        Check::below("max |exp L - u/b| at 50 exterior points", worst, tol),
        Check::at_least("worst arc slack", slack, -cfg.tol("trossos")),
    ];
    let result = json!({
        "fixture": f.name,
        "reference": ComplexWire::from(f.reference),
        "c1": ComplexWire::from(log.c1),
        "max_arc_mass": atlas.max_arc_mass(),
        "trossos": trossos,
    });
    finish(art, "contour.json", "contour", cfg, &report, result)
}
