//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers. Oracles are independent of the implementation paths
//! they check (analytic solutions, brute-force scans, transitive closures).

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nodalab::analysis::{check_strong_maximum_principle, harnack_ratio, harnack_sweep, MaxPrincipleVerdict, DEFAULT_ETA};
use nodalab::geometry::{
    build_annulus_domain, build_disk_domain, BoundaryData, DiscreteDomain, Point,
};
use nodalab::nodal::{
    check_nodal_count_bound, check_unique_continuation, extract_nodal_decomposition,
    maximal_vanishing_set, nodal_lines_touch_boundary, UniqueContinuationBranch,
};
use nodalab::operators::{p_laplace_spec, weak_residual};
use nodalab::scenario::{run_suite, Overrides};
use nodalab::solver::{p_energy, solve_p_laplace, ScalarField, SolveOptions};
use nodalab::topology::{
    chain_corridor, eps_chain_between, is_eps_connected, path_in_region, region_is_connected,
    EpsChain,
};

fn disk(h: f64) -> Arc<DiscreteDomain> {
    Arc::new(build_disk_domain(1.0, h).unwrap())
}

fn sin_k_data(dom: &Arc<DiscreteDomain>, k: u32) -> BoundaryData {
    BoundaryData::from_fn(dom, |p| (k as f64 * p.y.atan2(p.x)).sin())
}

fn solve_disk_sin_k(h: f64, k: u32, p: f64) -> (Arc<DiscreteDomain>, BoundaryData, ScalarField) {
    let dom = disk(h);
    let g = sin_k_data(&dom, k);
    let out = solve_p_laplace(&dom, &g, p, &SolveOptions::default()).unwrap();
    (dom, g, out.field)
}

fn max_err_vs(dom: &DiscreteDomain, u: &ScalarField, exact: impl Fn(Point) -> f64) -> f64 {
    dom.interior_nodes()
        .iter()
        .fold(0.0f64, |m, &id| {
            m.max((u.values()[id] - exact(dom.coord(id))).abs())
        })
}

/// Criterion 1: harmonic disk oracle u = r^k sin(k theta), max error and
/// first-order mesh convergence between h = 1/32 and h = 1/64.
#[test]
fn criterion_1_harmonic_disk_oracle() {
    for k in [1u32, 2, 3] {
        let exact = move |p: Point| {
            let r = (p.x * p.x + p.y * p.y).sqrt();
            r.powi(k as i32) * (k as f64 * p.y.atan2(p.x)).sin()
        };
        let started = Instant::now();
        let (dom_c, _, u_c) = solve_disk_sin_k(1.0 / 32.0, k, 2.0);
        let err_c = max_err_vs(&dom_c, &u_c, exact);
        let (dom_f, _, u_f) = solve_disk_sin_k(1.0 / 64.0, k, 2.0);
        let err_f = max_err_vs(&dom_f, &u_f, exact);
        let elapsed = started.elapsed().as_secs_f64();
        let ratio = err_c / err_f;
        assert!(err_f <= 5e-2, "k={}: error {} at h=1/64", k, err_f);
        assert!(
            (1.7..=2.7).contains(&ratio),
            "k={}: convergence ratio {}",
            k,
            ratio
        );
        assert!(elapsed <= 60.0, "k={}: took {}s", k, elapsed);
        println!(
            "PASS criterion 1 (k={}): err(1/64)={:.3e} <= 5e-2, ratio={:.2} in [1.7,2.7], {:.2}s",
            k, err_f, ratio, elapsed
        );
    }
}

/// Criterion 2: radial p-harmonic annulus oracle, with the profile formula
/// itself verified by substitution into the radial flux conservation.
#[test]
fn criterion_2_annulus_radial_oracle() {
    for p in [1.5f64, 3.0] {
        let kappa = (p - 2.0) / (p - 1.0);
        let denom = 2f64.powf(kappa) - 1.0;
        let w = move |r: f64| (r.powf(kappa) - 1.0) / denom;
        // oracle verification: r |w'|^{p-2} w' must be constant in r
        let flux = |r: f64| {
            let dr = 1e-6;
            let wp = (w(r + dr) - w(r - dr)) / (2.0 * dr);
            r * wp.abs().powf(p - 2.0) * wp
        };
        let f0 = flux(1.5);
        for r in [1.1, 1.3, 1.7, 1.9] {
            assert!(
                (flux(r) - f0).abs() <= 1e-6 * f0.abs(),
                "p={}: radial flux not conserved at r={}",
                p,
                r
            );
        }

        let started = Instant::now();
        let dom = Arc::new(build_annulus_domain(1.0, 2.0, 1.0 / 64.0).unwrap());
        let g = BoundaryData::from_fn(&dom, |pt| {
            if (pt.x * pt.x + pt.y * pt.y).sqrt() < 1.5 {
                0.0
            } else {
                1.0
            }
        });
        let out = solve_p_laplace(&dom, &g, p, &SolveOptions::default()).unwrap();
        let err = max_err_vs(&dom, &out.field, |pt| {
            w((pt.x * pt.x + pt.y * pt.y).sqrt())
        });
        let elapsed = started.elapsed().as_secs_f64();
        assert!(err <= 5e-2, "p={}: error {}", p, err);
        println!(
            "PASS criterion 2 (p={}): err={:.3e} <= 5e-2 at h=1/64 ({:.2}s, {} iters)",
            p, err, elapsed, out.iterations
        );
    }
}

/// Criterion 3: energy directional derivatives match the weak-residual
/// pairing to 1e-5 relative, 100 random field/direction pairs over
/// p in {1.5, 2, 3, 4}.
#[test]
fn criterion_3_gradient_consistency() {
    let dom = disk(1.0 / 16.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut pairs = 0;
    for &p in &[1.5, 2.0, 3.0, 4.0] {
        let spec = p_laplace_spec(p).unwrap();
        for _ in 0..25 {
            let mut u = ScalarField::zeros(&dom);
            let mut v = ScalarField::zeros(&dom);
            for id in 0..dom.node_count() {
                if dom.class(id) != nodalab::geometry::NodeClass::Exterior {
                    u.values_mut()[id] = rng.gen_range(-1.0..1.0);
                    if dom.is_interior(id) {
                        v.values_mut()[id] = rng.gen_range(-1.0..1.0);
                    }
                }
            }
            let r = weak_residual(&spec, &dom, &u).unwrap();
            let scale = u.max_abs().max(1.0);
            let t = 1e-6 * scale;
            let mut up = u.clone();
            let mut um = u.clone();
            for &id in dom.interior_nodes() {
                up.values_mut()[id] += t * v.values()[id];
                um.values_mut()[id] -= t * v.values()[id];
            }
            let fd = (p_energy(&dom, &up, p, 0.0).unwrap()
                - p_energy(&dom, &um, p, 0.0).unwrap())
                / (2.0 * t);
            let pairing: f64 = dom
                .interior_nodes()
                .iter()
                .map(|&id| r.values()[id] * v.values()[id])
                .sum();
            let denom = fd.abs().max(pairing.abs()).max(1e-10);
            assert!(
                (fd - pairing).abs() / denom <= 1e-5,
                "p={}: fd={} pairing={}",
                p,
                fd,
                pairing
            );
            pairs += 1;
        }
    }
    assert_eq!(pairs, 100);
    println!("PASS criterion 3: 100 field/direction pairs, rel err <= 1e-5, p in {{1.5,2,3,4}}");
}

/// Criterion 4: the affine Harnack ratio is exactly 9/7, and every
/// admissible ball of every shifted-positive p=2 solved field obeys the
/// planar Poisson-kernel bound 4(1 + 10h/r).
#[test]
fn criterion_4_harnack() {
    let dom = disk(1.0 / 64.0);
    let affine = ScalarField::from_fn(&dom, |p| 2.0 + p.x);
    let rep = harnack_ratio(&dom, &affine, Point::new(0.0, 0.0), 0.25, 0.0, DEFAULT_ETA).unwrap();
    let ratio = rep.ratio.unwrap();
    assert!(
        (ratio - 9.0 / 7.0).abs() <= 1e-6,
        "affine ratio {} vs 9/7",
        ratio
    );

    let mut balls = 0usize;
    for k in [1u32, 2, 3] {
        for h in [1.0 / 32.0, 1.0 / 64.0] {
            let (dom, _, u) = solve_disk_sin_k(h, k, 2.0);
            let (lo, hi) = u.min_max();
            let mut v = u.clone();
            for id in 0..dom.node_count() {
                v.values_mut()[id] += -lo + 1e-6 * (hi - lo);
            }
            let radii = [0.125, 0.25];
            let sweep = harnack_sweep(&dom, &v, &radii, 0.0, DEFAULT_ETA).unwrap();
            assert!(!sweep.reports.is_empty());
            assert_eq!(sweep.unbounded_count, 0, "k={} h={}", k, h);
            for rep in &sweep.reports {
                let bound = 4.0 * (1.0 + 10.0 * h / rep.r);
                let q = rep.ratio.unwrap();
                assert!(
                    q <= bound,
                    "k={} h={}: ratio {} > bound {} at r={}",
                    k,
                    h,
                    q,
                    bound,
                    rep.r
                );
                balls += 1;
            }
        }
    }
    println!(
        "PASS criterion 4: affine ratio = 9/7 within 1e-6; {} admissible balls within 4(1+10h/r)",
        balls
    );
}

/// Criterion 5: strong maximum principle passes for u and -u on solved
/// fields with non-constant data, and the planted interior spike fails it.
#[test]
fn criterion_5_strong_maximum_principle() {
    let mut checked = 0;
    for p in [1.5, 2.0, 3.0] {
        for k in [1u32, 2] {
            let (dom, _, u) = solve_disk_sin_k(1.0 / 32.0, k, p);
            let verdict = check_strong_maximum_principle(&dom, &u, 1e-9).unwrap();
            assert!(
                matches!(verdict, MaxPrincipleVerdict::Pass { .. }),
                "p={} k={}: {:?}",
                p,
                k,
                verdict
            );
            // the check handles -u internally (min side); verify explicitly
            let mut neg = u.clone();
            for val in neg.values_mut() {
                *val = -*val;
            }
            let verdict = check_strong_maximum_principle(&dom, &neg, 1e-9).unwrap();
            assert!(matches!(verdict, MaxPrincipleVerdict::Pass { .. }));
            checked += 1;
        }
    }

    // detector validity: a planted interior spike must fail
    let (dom, _, mut u) = solve_disk_sin_k(1.0 / 32.0, 2, 2.0);
    let target = dom.interior_nodes()[dom.interior_nodes().len() / 3];
    u.values_mut()[target] = 2.0 * u.max_abs() + 1.0;
    let verdict = check_strong_maximum_principle(&dom, &u, 1e-9).unwrap();
    match verdict {
        MaxPrincipleVerdict::Fail { witness, .. } => assert_eq!(witness, target),
        other => panic!("spike not detected: {:?}", other),
    }
    println!(
        "PASS criterion 5: {} solved fields pass for u and -u; interior spike detected",
        checked
    );
}

/// Criterion 6: nodal structure for g = sin(k theta), k in {1,2,3},
/// p in {2,3}: exactly 2k nodal domains, lines meeting the boundary, simple
/// connectedness and the count bound, stable on two consecutive tau levels.
#[test]
fn criterion_6_nodal_structure() {
    for p in [2.0f64, 3.0] {
        for k in [1u32, 2, 3] {
            let (dom, g, u) = solve_disk_sin_k(1.0 / 32.0, k, p);
            let max_abs = u.max_abs();
            let mut level_ok = Vec::new();
            let mut level_counts = Vec::new();
            for factor in [1e-2, 1e-3, 1e-4] {
                let tau = factor * max_abs;
                let d = extract_nodal_decomposition(&dom, &u, tau).unwrap();
                let counts = d.counts();
                let lines_ok = nodal_lines_touch_boundary(&d, &dom)
                    .unwrap()
                    .iter()
                    .all(|v| v.pass);
                let simply = d.components().all(|c| c.simply_connected);
                let contact = d.components().all(|c| c.boundary_contact);
                let bound = check_nodal_count_bound(&d, &g).pass;
                level_counts.push(counts);
                level_ok.push(
                    counts == (k as usize, k as usize) && lines_ok && simply && contact && bound,
                );
            }
            // stability: some consecutive pair must agree and pass
            let stable_pass = level_ok
                .windows(2)
                .zip(level_counts.windows(2))
                .any(|(ok, counts)| ok[0] && ok[1] && counts[0] == counts[1]);
            assert!(
                stable_pass,
                "p={} k={}: per-level ok {:?} counts {:?}",
                p, k, level_ok, level_counts
            );
            // threshold monotonicity (levels ordered coarse -> fine, so
            // counts must be nondecreasing toward finer tau); degenerate
            // p > 2 centers can merge lobes below the coarse threshold, so
            // this is asserted where the saddle values are well separated
            if p == 2.0 {
                for w in level_counts.windows(2) {
                    assert!(
                        w[0].0 <= w[1].0 && w[0].1 <= w[1].1,
                        "p=2 k={}: counts {:?} not monotone in tau",
                        k,
                        w
                    );
                }
            }
        }
    }

    // odd symmetry: reflecting y -> -y maps the decomposition onto itself
    // with signs swapped; exact at p = 2, within a near-threshold fringe at
    // p = 3 (the cell-diagonal triangulation is not reflection-equivariant)
    for p in [2.0f64, 3.0] {
        for k in [1u32, 2, 3] {
            let (dom, _, u) = solve_disk_sin_k(1.0 / 32.0, k, p);
            let d = extract_nodal_decomposition(&dom, &u, 1e-3 * u.max_abs()).unwrap();
            let reflect = |id: usize| {
                let (i, _) = dom.ij(id);
                let y = dom.coord(id).y;
                (0..dom.ny())
                    .map(|jj| dom.id(i, jj))
                    .find(|&cand| dom.coord(cand).y == -y)
                    .unwrap()
            };
            for comp in d.positive() {
                let mut reflected: Vec<usize> = comp.nodes.iter().map(|&n| reflect(n)).collect();
                reflected.sort_unstable();
                let best_overlap = d
                    .negative()
                    .iter()
                    .map(|nc| {
                        let mut inter = 0;
                        let mut it = nc.nodes.iter().peekable();
                        for &r in &reflected {
                            while let Some(&&v) = it.peek() {
                                if v < r {
                                    it.next();
                                } else {
                                    break;
                                }
                            }
                            if it.peek() == Some(&&r) {
                                inter += 1;
                            }
                        }
                        (inter, nc.nodes.len())
                    })
                    .max_by_key(|&(inter, _)| inter)
                    .unwrap();
                let union = reflected.len() + best_overlap.1 - best_overlap.0;
                let jaccard = best_overlap.0 as f64 / union as f64;
                let needed = if p == 2.0 { 1.0 } else { 0.9 };
                assert!(
                    jaccard >= needed,
                    "p={} k={}: reflected overlap {:.3}",
                    p,
                    k,
                    jaccard
                );
            }
        }
    }
    println!(
        "PASS criterion 6: 2k nodal domains, boundary contact, simple connectedness, count bound; stable tau pair; odd symmetry"
    );
}

/// Criterion 7: unique continuation across the shipped scenario suite:
/// empty vanishing sets for non-trivial solutions, the whole interior for
/// g = 0, and the dead-core mock flagged as a violation.
#[test]
fn criterion_7_unique_continuation_suite() {
    let dir = suite_dir();
    let out = tempfile::tempdir().unwrap();
    let outcome = run_suite(&dir, out.path(), &Overrides::default(), 2).unwrap();
    assert!(outcome.rows.len() >= 12, "suite has {} scenarios", outcome.rows.len());
    assert!(
        outcome.all_passed,
        "suite failures:\n{}",
        outcome.summary_csv
    );

    let mut nontrivial = 0;
    let mut trivial = 0;
    for row in &outcome.rows {
        let report_path = out.path().join(&row.name).join("report.json");
        let report = nodalab::scenario::report::RunReport::from_json(
            &std::fs::read_to_string(&report_path).unwrap(),
        )
        .unwrap();
        let uc = report.check("unique-continuation").unwrap();
        assert_eq!(
            uc.verdict,
            nodalab::scenario::report::Verdict::Pass,
            "{}: {}",
            row.name,
            uc.detail
        );
        if report.metrics.max_abs_u <= 1e-12 {
            // trivial solution: the vanishing set is the whole interior
            assert!(
                uc.detail.contains("vanishes-identically"),
                "{}: {}",
                row.name,
                uc.detail
            );
            assert!(
                uc.detail
                    .contains(&format!("({} nodes", report.domain.interior_nodes)),
                "{}: {}",
                row.name,
                uc.detail
            );
            trivial += 1;
        } else {
            // the finest tau level must report an empty vanishing set
            let last = uc.detail.rsplit('[').next().unwrap();
            assert!(
                last.contains("empty-vanishing-set"),
                "{}: {}",
                row.name,
                uc.detail
            );
            nontrivial += 1;
        }
    }
    assert!(trivial >= 1 && nontrivial >= 11);

    // detector validity: the dead-core mock is flagged
    let verts = vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ];
    let dom = Arc::new(nodalab::geometry::build_polygon_domain(&verts, 1.0 / 32.0).unwrap());
    let mock = ScalarField::from_fn(&dom, |p| {
        let d = (p.x - 0.5).max(0.0);
        d * d
    });
    let tau = 1e-3 * mock.max_abs();
    let g = mock.boundary_trace();
    let verdict = check_unique_continuation(&dom, &mock, &g, tau).unwrap();
    assert_eq!(verdict.branch, UniqueContinuationBranch::Violation);
    println!(
        "PASS criterion 7: {} non-trivial scenarios with empty vanishing sets, {} trivial with full-interior set; dead-core mock flagged",
        nontrivial, trivial
    );
}

/// Criterion 8: ε-connectivity and chain search agree with the brute-force
/// transitive closure on 200 random point sets, and corridors built over
/// 100 random chains with eps >= 2h stay connected with end-to-end paths.
#[test]
fn criterion_8_topology_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for case in 0..200 {
        let n = rng.gen_range(2..=50);
        let set: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)))
            .collect();
        let eps: f64 = rng.gen_range(0.02..0.5);
        // oracle: reachability by repeated squaring of the eps-adjacency
        let mut reach = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                reach[i][j] = i == j || set[i].dist2(set[j]) <= eps * eps;
            }
        }
        for m in 0..n {
            for i in 0..n {
                if reach[i][m] {
                    for j in 0..n {
                        if reach[m][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        let oracle_connected = (0..n).all(|j| reach[0][j]) && {
            let mut all = true;
            for i in 0..n {
                for j in 0..n {
                    if !reach[i][j] {
                        all = false;
                    }
                }
            }
            all
        };
        assert_eq!(
            is_eps_connected(&set, eps).unwrap(),
            oracle_connected,
            "case {}",
            case
        );
        for _ in 0..3 {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let chain = eps_chain_between(&set, set[a], set[b], eps).unwrap();
            assert_eq!(chain.is_some(), reach[a][b], "case {}: {} -> {}", case, a, b);
            if let Some(c) = chain {
                assert_eq!(c.points()[0], set[a]);
                assert_eq!(*c.points().last().unwrap(), set[b]);
            }
        }
    }

    // corridor property on random chains
    let h = 1.0 / 32.0;
    let dom = disk(h);
    let mut built = 0;
    while built < 100 {
        let eps = rng.gen_range(2.0 * h..6.0 * h);
        let limit = 1.0 - 1.5 * eps - 2.0 * h;
        if limit <= 0.1 {
            continue;
        }
        let mut pts = Vec::new();
        let mut cur = loop {
            let c = Point::new(rng.gen_range(-limit..limit), rng.gen_range(-limit..limit));
            if c.dist2(Point::new(0.0, 0.0)) < limit * limit {
                break c;
            }
        };
        pts.push(cur);
        let steps = rng.gen_range(1..=15);
        for _ in 0..steps {
            let mut placed = false;
            for _ in 0..50 {
                let ang = rng.gen_range(0.0..std::f64::consts::TAU);
                let len = rng.gen_range(0.0..eps);
                let next = Point::new(cur.x + len * ang.cos(), cur.y + len * ang.sin());
                if next.dist2(Point::new(0.0, 0.0)) < limit * limit {
                    cur = next;
                    pts.push(next);
                    placed = true;
                    break;
                }
            }
            if !placed {
                break;
            }
        }
        if pts.len() < 2 {
            continue;
        }
        let chain = EpsChain::new(pts.clone(), eps).unwrap();
        let region = chain_corridor(&chain, &dom).unwrap();
        assert!(region_is_connected(&region, &dom), "corridor disconnected");
        let path = path_in_region(&region, &dom, pts[0], *pts.last().unwrap()).unwrap();
        assert!(path.is_some(), "no end-to-end path in corridor");
        built += 1;
    }
    println!(
        "PASS criterion 8: 200 point sets agree with the transitive-closure oracle; 100 corridors connected with paths"
    );
}

/// Criterion 9: plateau-collapsed extrema counting agrees with an
/// independent brute-force oracle on 1000 random cyclic sequences.
#[test]
fn criterion_9_extrema_oracle() {
    fn oracle(values: &[f64]) -> (usize, usize) {
        // explicit run list with cyclic neighbors
        let n = values.len();
        let mut runs: Vec<f64> = Vec::new();
        let mut k = 0;
        while k < n {
            let v = values[k];
            runs.push(v);
            while k < n && values[k] == v {
                k += 1;
            }
        }
        if runs.len() > 1 && runs.first() == runs.last() {
            runs.pop();
        }
        if runs.len() < 2 {
            return (0, 0);
        }
        let m = runs.len();
        let mut maxima = 0;
        let mut minima = 0;
        for i in 0..m {
            let prev = runs[(i + m - 1) % m];
            let next = runs[(i + 1) % m];
            if runs[i] > prev && runs[i] > next {
                maxima += 1;
            }
            if runs[i] < prev && runs[i] < next {
                minima += 1;
            }
        }
        (maxima, minima)
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    for _ in 0..1000 {
        let len = rng.gen_range(3..=64);
        // integer-valued samples force plateaus and exact ties
        let vals: Vec<f64> = (0..len).map(|_| rng.gen_range(-3..=3) as f64).collect();
        let got = nodalab::geometry::count_relative_extrema_cyclic(&vals);
        let want = oracle(&vals);
        assert_eq!(got, want, "sequence {:?}", vals);
    }
    println!("PASS criterion 9: 1000 random cyclic sequences agree with the plateau oracle");
}

/// Criterion 10: rerunning the suite produces byte-identical artifacts
/// (timing lives in its own file and is excluded).
#[test]
fn criterion_10_determinism() {
    let dir = suite_dir();
    let out_a = tempfile::tempdir().unwrap();
    let out_b = tempfile::tempdir().unwrap();
    run_suite(&dir, out_a.path(), &Overrides::default(), 2).unwrap();
    run_suite(&dir, out_b.path(), &Overrides::default(), 1).unwrap();

    let mut compared = 0;
    let mut walk = vec![std::path::PathBuf::new()];
    while let Some(rel) = walk.pop() {
        let abs_a = out_a.path().join(&rel);
        for entry in std::fs::read_dir(&abs_a).unwrap() {
            let entry = entry.unwrap();
            let name = entry.file_name();
            let rel_child = rel.join(&name);
            if entry.file_type().unwrap().is_dir() {
                walk.push(rel_child);
                continue;
            }
            if name == "timing.csv" {
                continue;
            }
            let a = std::fs::read(out_a.path().join(&rel_child)).unwrap();
            let b = std::fs::read(out_b.path().join(&rel_child)).unwrap();
            assert_eq!(a, b, "artifact {} differs between runs", rel_child.display());
            compared += 1;
        }
    }
    assert!(compared > 14 * 4, "only {} files compared", compared);
    println!(
        "PASS criterion 10: {} artifacts byte-identical across reruns (timing excluded)",
        compared
    );
}

fn suite_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs/acceptance")
        .canonicalize()
        .unwrap()
}
