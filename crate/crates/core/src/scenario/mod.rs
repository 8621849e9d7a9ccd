//! Config-driven scenario runner: parse a scenario, solve it, run the
//! requested verification checks, and write reports, metrics and images.

pub mod config;
pub mod expr;
pub mod report;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analysis::{check_strong_maximum_principle, harnack_sweep, MaxPrincipleVerdict};
use crate::geometry::{
    build_disk_domain, build_polygon_domain, BoundaryData, DiscreteDomain, DomainKind,
    GeometryError, Point,
};
use crate::nodal::{
    check_local_zero_connectivity, check_nodal_count_bound, check_unique_continuation,
    extract_nodal_decomposition, nodal_lines_touch_boundary, NodalDecomposition, NodalError,
    UniqueContinuationBranch,
};
use crate::operators::{catalog_spec, weak_residual_norm, OperatorError, OperatorSpec};
use crate::solver::{
    solve_p_laplace, solve_quasilinear, ScalarField, SolveOutcome, SolverError,
};
use config::ScenarioConfig;
use report::{CheckReport, RunReport, SummaryRow, Verdict};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "NODALAB_OUT";

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Nodal(#[from] NodalError),
    #[error("io error at {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("suite directory {0} contains no .toml scenario configs")]
    EmptySuite(PathBuf),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ScenarioError + '_ {
    move |source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// CLI-level overrides applied on top of the parsed config.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub h: Option<f64>,
    pub tau_factor: Option<f64>,
}

/// Everything a finished run exposes to callers (and to the artifact
/// writer): the report plus the field and middle-tau decomposition.
pub struct ScenarioRun {
    pub report: RunReport,
    pub field: Option<ScalarField>,
    pub decomposition: Option<NodalDecomposition>,
    pub harnack_csv: String,
}

/// Radii used by the Harnack sweep, as fractions of the domain diameter.
const SWEEP_RADII_FRACTIONS: [f64; 2] = [1.0 / 16.0, 1.0 / 8.0];
/// Zero-connectivity probe radii in lattice spacings.
const ZERO_PROBE_RADII_H: [f64; 2] = [4.0, 8.0];
const MAX_ZERO_PROBES: usize = 12;

/// Run one scenario from config text. Artifacts are written under
/// `out_dir/<name>/` unless `out_dir` is `None`.
pub fn run_scenario_text(
    text: &str,
    overrides: &Overrides,
    out_dir: Option<&Path>,
) -> Result<ScenarioRun, ScenarioError> {
    let mut config = ScenarioConfig::parse(text)?;
    if let Some(h) = overrides.h {
        config.domain.h = h;
    }
    if let Some(f) = overrides.tau_factor {
        config.tau.factors = Some(vec![f]);
    }

    let config_sha256 = hex_digest(text);
    let run = execute(&config, config_sha256)?;

    if let Some(root) = out_dir {
        write_artifacts(root, &run)?;
    }
    Ok(run)
}

pub fn run_scenario_file(
    path: &Path,
    overrides: &Overrides,
    out_dir: Option<&Path>,
) -> Result<ScenarioRun, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    run_scenario_text(&text, overrides, out_dir)
}

fn hex_digest(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{:02x}", b)).collect()
}

fn build_domain(config: &ScenarioConfig) -> Result<Arc<DiscreteDomain>, ScenarioError> {
    let h = config.domain.h;
    let dom = match config.domain.kind.as_str() {
        "disk" => build_disk_domain(config.domain.radius.unwrap(), h)?,
        "polygon" => {
            let verts: Vec<Point> = config
                .domain
                .vertices
                .as_ref()
                .unwrap()
                .iter()
                .map(|v| Point::new(v[0], v[1]))
                .collect();
            build_polygon_domain(&verts, h)?
        }
        _ => unreachable!("validated"),
    };
    Ok(Arc::new(dom))
}

/// Boundary parameters per boundary node: `theta` (angle from the centroid
/// for disks, `2 pi s` for polygons) and normalized arclength `s` along the
/// boundary cycle.
pub fn boundary_params(domain: &DiscreteDomain) -> Vec<(f64, f64)> {
    let cycle = match domain.boundary_cycle() {
        Ok(c) => c,
        Err(_) => domain.boundary_nodes(),
    };
    let n = cycle.len();
    let mut cumulative = vec![0.0; n];
    let mut total = 0.0;
    for k in 1..n {
        total += domain.coord(cycle[k]).dist(domain.coord(cycle[k - 1]));
        cumulative[k] = total;
    }
    total += domain.coord(cycle[0]).dist(domain.coord(cycle[n - 1]));
    let is_disk = matches!(domain.kind(), DomainKind::Disk { .. });
    cycle
        .iter()
        .enumerate()
        .map(|(k, &id)| {
            let s = cumulative[k] / total;
            let theta = if is_disk {
                let p = domain.coord(id);
                p.y.atan2(p.x)
            } else {
                std::f64::consts::TAU * s
            };
            (theta, s)
        })
        .collect()
}

fn build_boundary_data(
    config: &ScenarioConfig,
    domain: &Arc<DiscreteDomain>,
) -> Result<BoundaryData, ScenarioError> {
    let expr = expr::parse(&config.boundary.expr)
        .map_err(|e| ScenarioError::Config(format!("boundary expression: {}", e)))?;
    let params = boundary_params(domain);
    let values: Vec<f64> = params.iter().map(|&(th, s)| expr.eval(th, s)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ScenarioError::Config(
            "boundary expression produced a non-finite value".into(),
        ));
    }
    Ok(BoundaryData::from_cycle_values(domain, values)?)
}

fn execute(config: &ScenarioConfig, config_sha256: String) -> Result<ScenarioRun, ScenarioError> {
    let domain = build_domain(config)?;
    let g = build_boundary_data(config, &domain)?;
    let spec: OperatorSpec = catalog_spec(
        &config.operator.name,
        config.operator.p,
        config.operator.scale,
        config.operator.b1,
        config.operator.sign,
    )?;
    let mut opts = config.solve_options();
    let tau_factors = config.tau_factors();
    let checks = config.check_list();

    // route pure p-Laplace fluxes through the variational path (positive
    // scaling leaves the minimizer unchanged; tighten tol so the scaled
    // residual still meets the contract), sources through Picard
    let variational = matches!(
        config.operator.name.as_str(),
        "p-laplace" | "scaled-p-laplace"
    );
    let scale_factor = config.operator.scale.unwrap_or(1.0).max(1.0);
    let method = if variational { "newton" } else { "picard" };

    let solve_result: Result<SolveOutcome, SolverError> = if variational {
        let tight = crate::solver::SolveOptions {
            tol: opts.tol / scale_factor,
            ..opts.clone()
        };
        opts = tight.clone();
        solve_p_laplace(&domain, &g, config.operator.p, &tight)
    } else {
        solve_quasilinear(&spec, &domain, &g, &opts)
    };

    let (field, solver_summary, mock_note) = match solve_result {
        Ok(outcome) => {
            let mut field = outcome.field;
            let mut mock_note = None;
            if let Some(factor) = config.mock.interior_spike {
                let target = domain.interior_nodes()[domain.interior_nodes().len() / 2];
                field.values_mut()[target] += factor * (field.max_abs() + 1.0);
                mock_note = Some(format!("interior spike x{} planted post-solve", factor));
            }
            // report the residual of the scenario's own operator
            let residual = weak_residual_norm(&spec, &domain, &field)?;
            let summary = report::SolverSummary {
                method: method.to_string(),
                operator: spec.name().to_string(),
                p: config.operator.p,
                converged: true,
                iterations: outcome.iterations,
                residual,
                tol: opts.tol * (1.0 + g.max_abs()) * scale_factor,
                energy: outcome.energy,
            };
            (Some(field), summary, mock_note)
        }
        Err(SolverError::NonConvergence {
            iterations,
            residual,
            tol,
        }) => {
            let summary = report::SolverSummary {
                method: method.to_string(),
                operator: spec.name().to_string(),
                p: config.operator.p,
                converged: false,
                iterations,
                residual,
                tol,
                energy: f64::NAN,
            };
            (None, summary, None)
        }
        Err(e) => return Err(e.into()),
    };

    let (g_maxima, g_minima) = crate::geometry::count_relative_extrema(&g);
    let mut metrics = report::Metrics {
        max_abs_u: field.as_ref().map(|f| f.max_abs()).unwrap_or(f64::NAN),
        g_min: g.min(),
        g_max: g.max(),
        g_maxima,
        g_minima,
        empirical_harnack_constant: None,
        per_tau: Vec::new(),
    };

    let mut check_reports = Vec::new();
    let mut decomposition = None;
    let mut harnack_csv = String::from("center_x,center_y,r,sup,inf,ratio,admissible\n");

    if let Some(u) = &field {
        let max_abs = u.max_abs();
        let tau_levels: Vec<f64> = tau_factors.iter().map(|f| f * max_abs).collect();
        let mut decomps: Vec<NodalDecomposition> = Vec::new();
        for &tau in &tau_levels {
            let d = extract_nodal_decomposition(&domain, u, tau)?;
            metrics.per_tau.push(report::TauMetrics {
                tau,
                positive_components: d.counts().0,
                negative_components: d.counts().1,
                zero_nodes: d.zero_set().len(),
            });
            decomps.push(d);
        }

        for name in &checks {
            let report = match name.as_str() {
                "harnack" => {
                    let (rep, csv) = harnack_check(&domain, u, &spec, config, &mut metrics)?;
                    harnack_csv.push_str(&csv);
                    rep
                }
                "max-principle" => max_principle_check(&domain, u)?,
                "nodal-count" => tau_swept_check(name, &decomps, |d| {
                    let v = check_nodal_count_bound(d, &g);
                    let sig = format!(
                        "{}+/{}- vs {} maxima / {} minima",
                        v.positive_components, v.negative_components, v.maxima_above, v.minima_below
                    );
                    (sig.clone(), sig, v.pass)
                }),
                "boundary-contact" => {
                    let mut results = Vec::new();
                    for d in &decomps {
                        let flags_ok = d.components().all(|c| c.boundary_contact);
                        let lines = nodal_lines_touch_boundary(d, &domain)?;
                        let lines_ok = lines.iter().all(|v| v.pass);
                        let (pos, neg) = d.counts();
                        let sig = format!(
                            "{}+/{}- components contact={} lines={}",
                            pos, neg, flags_ok, lines_ok
                        );
                        results.push((sig.clone(), sig, flags_ok && lines_ok));
                    }
                    stability_verdict(name, &results)
                }
                "simply-connected" => tau_swept_check(name, &decomps, |d| {
                    let ok = d.components().all(|c| c.simply_connected);
                    let (pos, neg) = d.counts();
                    let sig = format!("{}+/{}- components simply-connected={}", pos, neg, ok);
                    (sig.clone(), sig, ok)
                }),
                "unique-continuation" => {
                    let mut results = Vec::new();
                    for (k, d) in decomps.iter().enumerate() {
                        let v = check_unique_continuation(&domain, u, &g, tau_levels[k])?;
                        let label = match v.branch {
                            UniqueContinuationBranch::EmptyVanishingSet => "empty-vanishing-set",
                            UniqueContinuationBranch::VanishesIdentically => "vanishes-identically",
                            UniqueContinuationBranch::Violation => "violation",
                        };
                        let _ = d;
                        results.push((
                            label.to_string(),
                            format!(
                                "{} ({} nodes, h={}, tau={:.3e})",
                                label, v.vanishing_nodes, v.h, v.tau
                            ),
                            v.passed(),
                        ));
                    }
                    stability_verdict(name, &results)
                }
                "zero-connectivity" => zero_connectivity_check(&domain, u)?,
                other => CheckReport {
                    name: other.to_string(),
                    verdict: Verdict::Skip,
                    detail: "unknown check".into(),
                    stable: None,
                },
            };
            check_reports.push(report);
        }

        // middle tau level feeds the exported artifacts
        let mid = decomps.len() / 2;
        decomposition = decomps.into_iter().nth(mid);
    } else {
        for name in &checks {
            check_reports.push(CheckReport {
                name: name.clone(),
                verdict: Verdict::Skip,
                detail: "solver did not converge; check skipped".into(),
                stable: None,
            });
        }
    }

    let all_passed = solver_summary.converged
        && check_reports.iter().all(|c| c.verdict != Verdict::Fail);

    let report = RunReport {
        name: config.name.clone(),
        provenance: report::Provenance {
            config_sha256,
            version: env!("CARGO_PKG_VERSION").to_string(),
            h: domain.h(),
            tau_factors,
            mock: mock_note,
        },
        domain: report::DomainSummary {
            kind: config.domain.kind.clone(),
            h: domain.h(),
            interior_nodes: domain.interior_nodes().len(),
            boundary_nodes: domain.boundary_nodes().len(),
            boundary_cycles: domain.boundary_cycles().len(),
            diameter: domain.diameter(),
        },
        solver: solver_summary,
        metrics,
        checks: check_reports,
        all_passed,
    };

    Ok(ScenarioRun {
        report,
        field,
        decomposition,
        harnack_csv,
    })
}

fn harnack_check(
    domain: &Arc<DiscreteDomain>,
    u: &ScalarField,
    spec: &OperatorSpec,
    config: &ScenarioConfig,
    metrics: &mut report::Metrics,
) -> Result<(CheckReport, String), ScenarioError> {
    let (lo, hi) = u.min_max();
    // a (numerically) constant field carries no Harnack information: the
    // positive shift below would amplify solver noise into huge ratios
    if hi - lo <= 1e-7 * (1.0 + hi.abs().max(lo.abs())) {
        metrics.empirical_harnack_constant = Some(1.0);
        return Ok((
            CheckReport {
                name: "harnack".into(),
                verdict: Verdict::Pass,
                detail: "field is constant within solver tolerance; every ratio is 1".into(),
                stable: None,
            },
            String::new(),
        ));
    }
    // shift the field positive; ratios of a positive solution must be finite
    // and, for harmonic fields, obey the planar Poisson-kernel bound
    let shift = -lo + 1e-6 * (hi - lo);
    let mut v = u.clone();
    for id in 0..domain.node_count() {
        v.values_mut()[id] += shift;
    }
    let radii: Vec<f64> = SWEEP_RADII_FRACTIONS
        .iter()
        .map(|f| f * domain.diameter())
        .collect();
    let sweep = harnack_sweep(domain, &v, &radii, 1e-12 * (1.0 + hi.abs()), crate::analysis::DEFAULT_ETA)
        .map_err(|e| ScenarioError::Config(format!("harnack sweep failed: {}", e)))?;

    let mut csv = String::new();
    for rep in &sweep.reports {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            rep.center.x,
            rep.center.y,
            rep.r,
            rep.sup,
            rep.inf,
            rep.ratio.map(|q| q.to_string()).unwrap_or_default(),
            rep.admissible
        ));
    }

    metrics.empirical_harnack_constant = sweep.max_ratio;

    if sweep.reports.is_empty() {
        return Ok((
            CheckReport {
                name: "harnack".into(),
                verdict: Verdict::Skip,
                detail: "no admissible balls at the sweep radii".into(),
                stable: None,
            },
            csv,
        ));
    }

    let hard_unbounded = sweep
        .reports
        .iter()
        .filter(|r| r.unbounded && r.sup > 0.0)
        .count();
    if hard_unbounded > 0 {
        return Ok((
            CheckReport {
                name: "harnack".into(),
                verdict: Verdict::Fail,
                detail: format!(
                    "{} admissible balls have near-zero infimum with positive supremum",
                    hard_unbounded
                ),
                stable: None,
            },
            csv,
        ));
    }

    // Poisson-kernel bound applies to harmonic fields only
    let harmonic = config.operator.p == 2.0
        && matches!(config.operator.name.as_str(), "p-laplace" | "scaled-p-laplace");
    if harmonic {
        let h = domain.h();
        for rep in &sweep.reports {
            let bound = 4.0 * (1.0 + 10.0 * h / rep.r);
            if let Some(q) = rep.ratio {
                if q > bound {
                    return Ok((
                        CheckReport {
                            name: "harnack".into(),
                            verdict: Verdict::Fail,
                            detail: format!(
                                "ratio {:.4} exceeds the harmonic bound {:.4} at r={} around ({}, {})",
                                q, bound, rep.r, rep.center.x, rep.center.y
                            ),
                            stable: None,
                        },
                        csv,
                    ));
                }
            }
        }
    }

    let detail = format!(
        "{} admissible balls, empirical constant {}{}",
        sweep.reports.len(),
        sweep
            .max_ratio
            .map(|q| format!("{:.4}", q))
            .unwrap_or_else(|| "n/a".into()),
        if harmonic {
            "; harmonic bound 4(1+10h/r) holds"
        } else {
            "; finiteness only (no analytic bound for this operator)"
        }
    );
    let _ = spec;
    Ok((
        CheckReport {
            name: "harnack".into(),
            verdict: Verdict::Pass,
            detail,
            stable: None,
        },
        csv,
    ))
}

fn max_principle_check(
    domain: &Arc<DiscreteDomain>,
    u: &ScalarField,
) -> Result<CheckReport, ScenarioError> {
    let verdict = check_strong_maximum_principle(domain, u, 1e-9)
        .map_err(|e| ScenarioError::Config(format!("max principle check failed: {}", e)))?;
    let report = match verdict {
        MaxPrincipleVerdict::Constant => CheckReport {
            name: "max-principle".into(),
            verdict: Verdict::Pass,
            detail: "field is constant; principle vacuous".into(),
            stable: None,
        },
        MaxPrincipleVerdict::Pass {
            margin_max,
            margin_min,
        } => CheckReport {
            name: "max-principle".into(),
            verdict: Verdict::Pass,
            detail: format!(
                "interior extrema strictly inside boundary range (margins {:.3e} / {:.3e})",
                margin_max, margin_min
            ),
            stable: None,
        },
        MaxPrincipleVerdict::Fail {
            witness,
            value,
            boundary_extreme,
            at_maximum,
        } => {
            let p = domain.coord(witness);
            CheckReport {
                name: "max-principle".into(),
                verdict: Verdict::Fail,
                detail: format!(
                    "interior {} {:.6} at ({}, {}) reaches past boundary extremum {:.6}",
                    if at_maximum { "maximum" } else { "minimum" },
                    value,
                    p.x,
                    p.y,
                    boundary_extreme
                ),
                stable: None,
            }
        }
    };
    Ok(report)
}

/// The continuum zero set is probed at lattice scale: a node is "near zero"
/// when |u| is below about one cell of typical variation; the sweep's tau
/// levels would make the discrete band either sub-lattice thin (spuriously
/// disconnected) or a fat blob.
fn zero_connectivity_check(
    domain: &Arc<DiscreteDomain>,
    u: &ScalarField,
) -> Result<CheckReport, ScenarioError> {
    let h = domain.h();
    let tau_zc = 2.0 * h * u.max_abs() / domain.diameter();
    let radii: Vec<f64> = ZERO_PROBE_RADII_H.iter().map(|k| k * h).collect();
    let max_r = radii[radii.len() - 1];
    // probes: near-zero interior nodes whose largest ball stays interior,
    // thinned to a deterministic sample
    let candidates: Vec<usize> = domain
        .interior_nodes()
        .iter()
        .copied()
        .filter(|&id| {
            u.values()[id].abs() <= tau_zc
                && domain
                    .nodes_in_ball(domain.coord(id), max_r)
                    .iter()
                    .all(|&n| domain.is_interior(n))
        })
        .collect();
    if candidates.is_empty() {
        return Ok(CheckReport {
            name: "zero-connectivity".into(),
            verdict: Verdict::Pass,
            detail: "no near-zero nodes with ball clearance; vacuous".into(),
            stable: None,
        });
    }
    let step = (candidates.len() / MAX_ZERO_PROBES).max(1);
    let mut probed = 0;
    let mut failures = 0;
    let mut witness = None;
    for &id in candidates.iter().step_by(step).take(MAX_ZERO_PROBES) {
        let v = check_local_zero_connectivity(domain, u, domain.coord(id), &radii, tau_zc)?;
        probed += 1;
        if !v.verdicts.iter().all(|&(_, ok)| ok) {
            failures += 1;
            let p = domain.coord(id);
            witness.get_or_insert((p.x, p.y));
        }
    }
    let detail = if let Some((x, y)) = witness {
        format!(
            "{} of {} probes disconnected at radii {:?}h (tau_zc={:.3e}), e.g. near ({}, {})",
            failures, probed, ZERO_PROBE_RADII_H, tau_zc, x, y
        )
    } else {
        format!(
            "{} probes at radii {:?}h (tau_zc={:.3e}): all connected",
            probed, ZERO_PROBE_RADII_H, tau_zc
        )
    };
    Ok(CheckReport {
        name: "zero-connectivity".into(),
        verdict: if failures == 0 { Verdict::Pass } else { Verdict::Fail },
        detail,
        stable: None,
    })
}

fn tau_swept_check(
    name: &str,
    decomps: &[NodalDecomposition],
    eval: impl Fn(&NodalDecomposition) -> (String, String, bool),
) -> CheckReport {
    let results: Vec<(String, String, bool)> = decomps.iter().map(&eval).collect();
    stability_verdict(name, &results)
}

/// Collapse per-tau results (signature, detail, pass): pass when two
/// consecutive levels agree on a passing signature and no two consecutive
/// levels agree on a failing one. Signatures carry the structure being
/// compared and deliberately exclude tau itself.
fn stability_verdict(name: &str, results: &[(String, String, bool)]) -> CheckReport {
    let detail = results
        .iter()
        .map(|(_, d, ok)| format!("[{} => {}]", d, if *ok { "ok" } else { "violated" }))
        .collect::<Vec<_>>()
        .join(" ");
    if results.is_empty() {
        return CheckReport {
            name: name.to_string(),
            verdict: Verdict::Skip,
            detail: "no tau levels evaluated".into(),
            stable: None,
        };
    }
    if results.len() == 1 {
        return CheckReport {
            name: name.to_string(),
            verdict: if results[0].2 {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            detail,
            stable: Some(true),
        };
    }
    let mut agreeing_pass = false;
    let mut agreeing_fail = false;
    for w in results.windows(2) {
        if w[0].0 == w[1].0 {
            if w[0].2 {
                agreeing_pass = true;
            } else {
                agreeing_fail = true;
            }
        }
    }
    let stable = agreeing_pass || agreeing_fail;
    let verdict = if agreeing_fail {
        Verdict::Fail
    } else if agreeing_pass {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let detail = if stable {
        detail
    } else {
        format!("no two consecutive tau levels agree: {}", detail)
    };
    CheckReport {
        name: name.to_string(),
        verdict,
        detail,
        stable: Some(stable),
    }
}

fn write_artifacts(root: &Path, run: &ScenarioRun) -> Result<(), ScenarioError> {
    let dir = root.join(&run.report.name);
    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let write = |name: &str, contents: &str| -> Result<(), ScenarioError> {
        let path = dir.join(name);
        std::fs::write(&path, contents).map_err(io_err(&path))
    };
    write("report.json", &run.report.to_json())?;
    if let Some(field) = &run.field {
        let domain = field.domain();
        write("solution.csv", &crate::render::field_csv(domain, field))?;
        write(
            "solution.grid.txt",
            &crate::render::field_grid_text(domain, field),
        )?;
        let (w, h, rgb) = crate::render::field_rgb(domain, field);
        crate::render::write_ppm(&dir.join("field.ppm"), w, h, &rgb)
            .map_err(io_err(&dir.join("field.ppm")))?;
    }
    if let Some(decomp) = &run.decomposition {
        write("labels.txt", &crate::render::labels_text(decomp))?;
        let (w, h, rgb) = crate::render::decomposition_rgb(decomp);
        crate::render::write_ppm(&dir.join("nodal.ppm"), w, h, &rgb)
            .map_err(io_err(&dir.join("nodal.ppm")))?;
    }
    write("harnack.csv", &run.harnack_csv)?;
    Ok(())
}

/// Result of a suite run.
pub struct SuiteOutcome {
    pub rows: Vec<SummaryRow>,
    pub all_passed: bool,
    pub summary_csv: String,
}

/// Run every `*.toml` scenario in `dir` (sorted by file name), write per-
/// scenario artifacts plus `summary.csv` under `out_root`, optionally using
/// `jobs` worker threads. Timing lands in a separate `timing.csv`.
pub fn run_suite(
    dir: &Path,
    out_root: &Path,
    overrides: &Overrides,
    jobs: usize,
) -> Result<SuiteOutcome, ScenarioError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().map(|x| x == "toml").unwrap_or(false))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(ScenarioError::EmptySuite(dir.to_path_buf()));
    }
    std::fs::create_dir_all(out_root).map_err(io_err(out_root))?;

    let n = paths.len();
    let jobs = jobs.max(1).min(n);
    let mut results: Vec<Option<(SummaryRow, f64)>> = Vec::new();
    results.resize_with(n, || None);

    if jobs == 1 {
        for (k, path) in paths.iter().enumerate() {
            results[k] = Some(run_one_for_suite(path, overrides, out_root));
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let results_mutex = std::sync::Mutex::new(&mut results);
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| loop {
                    let k = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if k >= n {
                        break;
                    }
                    let outcome = run_one_for_suite(&paths[k], overrides, out_root);
                    results_mutex.lock().unwrap()[k] = Some(outcome);
                });
            }
        });
    }

    let mut rows = Vec::with_capacity(n);
    let mut timing = String::from("scenario,wall_ms\n");
    for r in results.into_iter() {
        let (row, ms) = r.expect("every scenario ran");
        timing.push_str(&format!("{},{:.1}\n", row.name, ms));
        rows.push(row);
    }
    let all_passed = rows.iter().all(|r| r.all_passed);
    let summary = report::summary_csv(&rows);
    std::fs::write(out_root.join("summary.csv"), &summary)
        .map_err(io_err(&out_root.join("summary.csv")))?;
    std::fs::write(out_root.join("timing.csv"), &timing)
        .map_err(io_err(&out_root.join("timing.csv")))?;
    Ok(SuiteOutcome {
        rows,
        all_passed,
        summary_csv: summary,
    })
}

fn run_one_for_suite(path: &Path, overrides: &Overrides, out_root: &Path) -> (SummaryRow, f64) {
    let started = std::time::Instant::now();
    let fallback_name = path
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "unnamed".into());
    let row = match run_scenario_file(path, overrides, Some(out_root)) {
        Ok(run) => SummaryRow::from_report(&run.report),
        Err(e) => SummaryRow::from_error(&fallback_name, &e.to_string()),
    };
    (row, started.elapsed().as_secs_f64() * 1000.0)
}
