//! Property tests for the module invariants: plateau extrema against the
//! oracle, ε-graph monotonicity, chain/connectivity equivalence,
//! decomposition completeness, and the structural bounds of the built-in
//! operators under heavy random sampling.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use nodalab::geometry::{
    build_disk_domain, count_relative_extrema_cyclic, BoundaryData, Point, Vec2,
};
use nodalab::nodal::{decomposition_is_complete, extract_nodal_decomposition};
use nodalab::operators::{p_laplace_spec, validate_structural, GradientSample};
use nodalab::solver::ScalarField;
use nodalab::topology::{eps_chain_between, eps_graph_components, is_eps_connected};

fn extrema_oracle(values: &[f64]) -> (usize, usize) {
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
    while runs.len() > 1 && runs.first() == runs.last() {
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

proptest! {
    #[test]
    fn extrema_match_plateau_oracle(values in prop::collection::vec(-8i32..=8, 3..64)) {
        let vals: Vec<f64> = values.iter().map(|&v| v as f64).collect();
        prop_assert_eq!(count_relative_extrema_cyclic(&vals), extrema_oracle(&vals));
    }

    #[test]
    fn trig_data_extrema_are_balanced_and_bounded(k in 1u32..=4, phase in 0.0f64..1.0) {
        // generic-phase trigonometric polynomial of degree k on a fine cycle
        let n = 512usize;
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let th = i as f64 * std::f64::consts::TAU / n as f64 + phase;
                (k as f64 * th).sin() + 0.3 * th.cos()
            })
            .collect();
        let (maxima, minima) = count_relative_extrema_cyclic(&vals);
        prop_assert_eq!(maxima, minima);
        prop_assert!(maxima <= k as usize);
    }

    #[test]
    fn eps_components_monotone_nonincreasing(
        pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..30),
        eps0 in 0.01f64..0.3,
    ) {
        let set: Vec<Point> = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let grid: Vec<f64> = (1..=8).map(|k| eps0 * k as f64).collect();
        let counts: Vec<usize> = grid.iter().map(|&e| eps_graph_components(&set, e)).collect();
        for w in counts.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn connectivity_iff_all_pairs_chain(
        pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..=12),
        eps in 0.05f64..0.8,
    ) {
        let set: Vec<Point> = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let connected = is_eps_connected(&set, eps).unwrap();
        let mut all_pairs = true;
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let found = eps_chain_between(&set, set[i], set[j], eps).unwrap().is_some();
                if !found {
                    all_pairs = false;
                }
            }
        }
        prop_assert_eq!(connected, all_pairs);
    }

    #[test]
    fn decomposition_always_complete(seed in 0u64..500, tau in 0.0f64..0.5) {
        let dom = Arc::new(build_disk_domain(1.0, 1.0 / 8.0).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut u = ScalarField::zeros(&dom);
        for id in 0..dom.node_count() {
            u.values_mut()[id] = rng.gen_range(-1.0..1.0);
        }
        let d = extract_nodal_decomposition(&dom, &u, tau).unwrap();
        prop_assert!(decomposition_is_complete(&d));
        // labels and component node lists agree
        for comp in d.components() {
            for &id in &comp.nodes {
                prop_assert_eq!(d.labels()[id], comp.label);
            }
        }
    }
}

#[test]
fn p_laplace_structure_holds_on_heavy_sampling() {
    // 10^4 random samples with |h| up to 1e6 per exponent
    let mut rng = ChaCha8Rng::seed_from_u64(0xabcdef);
    for p in [1.5, 2.0, 3.0, 4.0] {
        let spec = p_laplace_spec(p).unwrap();
        let samples: Vec<GradientSample> = (0..10_000)
            .map(|_| {
                let ang = rng.gen_range(0.0..std::f64::consts::TAU);
                let mag = 10f64.powf(rng.gen_range(-6.0..6.0));
                (
                    Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    Vec2::new(ang.cos(), ang.sin()).scale(mag),
                )
            })
            .collect();
        let report = validate_structural(&spec, &samples);
        assert!(
            report.passed(),
            "p = {}: {} violations",
            p,
            report.violations.len()
        );
    }
}

#[test]
fn solved_scalings_leave_harnack_ratios_invariant() {
    // ratios are scale-free: sweep(lambda u) equals sweep(u)
    let dom = Arc::new(build_disk_domain(1.0, 1.0 / 16.0).unwrap());
    let g = BoundaryData::from_fn(&dom, |p| 2.0 + p.y.atan2(p.x).sin());
    let out = nodalab::solver::solve_p_laplace(
        &dom,
        &g,
        2.0,
        &nodalab::solver::SolveOptions::default(),
    )
    .unwrap();
    let sweep1 = nodalab::analysis::harnack_sweep(
        &dom,
        &out.field,
        &[0.125, 0.25],
        0.0,
        nodalab::analysis::DEFAULT_ETA,
    )
    .unwrap();
    let mut scaled = out.field.clone();
    for v in scaled.values_mut() {
        *v *= 37.5;
    }
    let sweep2 =
        nodalab::analysis::harnack_sweep(&dom, &scaled, &[0.125, 0.25], 0.0, nodalab::analysis::DEFAULT_ETA)
            .unwrap();
    assert_eq!(sweep1.reports.len(), sweep2.reports.len());
    for (a, b) in sweep1.reports.iter().zip(&sweep2.reports) {
        let (qa, qb) = (a.ratio.unwrap(), b.ratio.unwrap());
        assert!((qa - qb).abs() <= 1e-12 * qa.max(1.0));
    }
}
