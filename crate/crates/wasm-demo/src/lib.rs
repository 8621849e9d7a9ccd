//! Interactive browser demo over the core solver: solve a Dirichlet problem
//! on a chosen domain, explore its nodal decomposition against the threshold
//! slider, sweep Harnack ratios, and probe the zero set's ε-connectivity
//! profile. All heavy lifting happens in Rust; the page just blits RGBA
//! buffers and plots small JSON series.

use std::sync::Arc;

use wasm_bindgen::prelude::*;

use nodalab::analysis::{check_strong_maximum_principle, harnack_sweep, MaxPrincipleVerdict, DEFAULT_ETA};
use nodalab::geometry::{
    build_disk_domain, build_polygon_domain, BoundaryData, DiscreteDomain, Point,
};
use nodalab::nodal::{
    check_nodal_count_bound, check_unique_continuation, extract_nodal_decomposition,
    UniqueContinuationBranch,
};
use nodalab::scenario::boundary_params;
use nodalab::solver::{solve_p_laplace, ScalarField, SolveOptions};
use nodalab::topology::connectivity_vs_eps_profile;

fn rgb_to_rgba(rgb: Vec<u8>) -> Vec<u8> {
    let mut rgba = Vec::with_capacity(rgb.len() / 3 * 4);
    for px in rgb.chunks_exact(3) {
        rgba.extend_from_slice(px);
        rgba.push(255);
    }
    rgba
}

/// One solved Dirichlet problem with everything the page renders.
#[wasm_bindgen]
pub struct Lab {
    domain: Arc<DiscreteDomain>,
    g: BoundaryData,
    field: ScalarField,
    p: f64,
    iterations: usize,
    residual: f64,
    energy: f64,
}

#[wasm_bindgen]
impl Lab {
    /// Solve the p-Laplace problem on `domain_kind` in {"disk", "square",
    /// "lshape"} with boundary data given as an expression in `theta` / `s`,
    /// at roughly `cells` lattice cells across.
    #[wasm_bindgen(constructor)]
    pub fn new(domain_kind: &str, p: f64, expr_src: &str, cells: u32) -> Result<Lab, JsError> {
        Lab::build(domain_kind, p, expr_src, cells).map_err(|e| JsError::new(&e))
    }

    fn build(domain_kind: &str, p: f64, expr_src: &str, cells: u32) -> Result<Lab, String> {
        let cells = cells.clamp(16, 192) as f64;
        let domain = match domain_kind {
            "disk" => build_disk_domain(1.0, 2.0 / cells),
            "square" => build_polygon_domain(
                &[
                    Point::new(0.0, 0.0),
                    Point::new(1.0, 0.0),
                    Point::new(1.0, 1.0),
                    Point::new(0.0, 1.0),
                ],
                1.0 / cells,
            ),
            "lshape" => build_polygon_domain(
                &[
                    Point::new(0.0, 0.0),
                    Point::new(1.0, 0.0),
                    Point::new(1.0, 0.5),
                    Point::new(0.5, 0.5),
                    Point::new(0.5, 1.0),
                    Point::new(0.0, 1.0),
                ],
                1.0 / cells,
            ),
            other => return Err(format!("unknown domain '{}'", other)),
        }
        .map_err(|e| e.to_string())?;
        let domain = Arc::new(domain);

        let expr = nodalab::scenario::expr::parse(expr_src).map_err(|e| e.to_string())?;
        let params = boundary_params(&domain);
        let values: Vec<f64> = params.iter().map(|&(th, s)| expr.eval(th, s)).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err("boundary expression produced a non-finite value".to_string());
        }
        let g = BoundaryData::from_cycle_values(&domain, values).map_err(|e| e.to_string())?;

        let opts = SolveOptions {
            tol: 1e-7,
            ..SolveOptions::default()
        };
        let out = solve_p_laplace(&domain, &g, p, &opts).map_err(|e| e.to_string())?;
        Ok(Lab {
            domain,
            g,
            field: out.field,
            p,
            iterations: out.iterations,
            residual: out.residual,
            energy: out.energy,
        })
    }

    pub fn width(&self) -> u32 {
        self.domain.nx() as u32
    }

    pub fn height(&self) -> u32 {
        self.domain.ny() as u32
    }

    /// RGBA raster of the solution (diverging blue-white-red).
    pub fn render_field(&self) -> Vec<u8> {
        let (_, _, rgb) = nodalab::render::field_rgb(&self.domain, &self.field);
        rgb_to_rgba(rgb)
    }

    /// RGBA raster of the nodal decomposition at `tau_factor * max|u|`.
    pub fn render_nodal(&self, tau_factor: f64) -> Vec<u8> {
        let tau = tau_factor.max(0.0) * self.field.max_abs();
        let d = extract_nodal_decomposition(&self.domain, &self.field, tau)
            .expect("field and domain match");
        let (_, _, rgb) = nodalab::render::decomposition_rgb(&d);
        rgb_to_rgba(rgb)
    }

    /// RGBA heatmap of per-center Harnack ratios of the shifted-positive
    /// field at ball radius `r_frac * diameter` (centers whose tripled ball
    /// leaves the domain stay dark).
    pub fn render_harnack(&self, r_frac: f64) -> Vec<u8> {
        let (lo, hi) = self.field.min_max();
        let mut v = self.field.clone();
        for val in v.values_mut() {
            *val += -lo + 1e-6 * (hi - lo).max(1e-300);
        }
        let r = r_frac.clamp(0.01, 0.3) * self.domain.diameter();
        let sweep = harnack_sweep(&self.domain, &v, &[r], 1e-9 * (1.0 + hi.abs()), DEFAULT_ETA);
        let (nx, ny) = (self.domain.nx(), self.domain.ny());
        let mut rgba = vec![0u8; nx * ny * 4];
        for px in rgba.chunks_exact_mut(4) {
            px.copy_from_slice(&[24, 24, 24, 255]);
        }
        if let Ok(sweep) = sweep {
            let qmax = sweep.max_ratio.unwrap_or(1.0).max(1.0 + 1e-12);
            for rep in &sweep.reports {
                if let Some(q) = rep.ratio {
                    let t = ((q - 1.0) / (qmax - 1.0)).clamp(0.0, 1.0);
                    let (id, _) = self.domain.nearest_node(rep.center);
                    let (i, j) = self.domain.ij(id);
                    let pix = ((ny - 1 - j) * nx + i) * 4;
                    rgba[pix] = (40.0 + 215.0 * t) as u8;
                    rgba[pix + 1] = (40.0 + 80.0 * (1.0 - t)) as u8;
                    rgba[pix + 2] = (160.0 * (1.0 - t)) as u8;
                    rgba[pix + 3] = 255;
                }
            }
        }
        rgba
    }

    /// Solver and verification metrics as JSON, evaluated at
    /// `tau_factor * max|u|`.
    pub fn metrics_json(&self, tau_factor: f64) -> String {
        let tau = tau_factor.max(0.0) * self.field.max_abs();
        let d = extract_nodal_decomposition(&self.domain, &self.field, tau)
            .expect("field and domain match");
        let bound = check_nodal_count_bound(&d, &self.g);
        let uc = check_unique_continuation(&self.domain, &self.field, &self.g, tau)
            .expect("field and domain match");
        let mp = check_strong_maximum_principle(&self.domain, &self.field, 1e-9)
            .expect("field and domain match");
        let (gmax, gmin) = (self.g.max(), self.g.min());
        let (pos, neg) = d.counts();
        serde_json::json!({
            "p": self.p,
            "interior_nodes": self.domain.interior_nodes().len(),
            "h": self.domain.h(),
            "iterations": self.iterations,
            "residual": self.residual,
            "energy": self.energy,
            "g_range": [gmin, gmax],
            "tau": tau,
            "positive_components": pos,
            "negative_components": neg,
            "zero_nodes": d.zero_set().len(),
            "boundary_maxima": bound.maxima_above,
            "boundary_minima": bound.minima_below,
            "count_bound_holds": bound.pass,
            "simply_connected": d.components().all(|c| c.simply_connected),
            "boundary_contact": d.components().all(|c| c.boundary_contact),
            "max_principle": match mp {
                MaxPrincipleVerdict::Constant => "constant",
                MaxPrincipleVerdict::Pass { .. } => "pass",
                MaxPrincipleVerdict::Fail { .. } => "fail",
            },
            "unique_continuation": match uc.branch {
                UniqueContinuationBranch::EmptyVanishingSet => "empty-vanishing-set",
                UniqueContinuationBranch::VanishesIdentically => "vanishes-identically",
                UniqueContinuationBranch::Violation => "violation",
            },
        })
        .to_string()
    }

    /// ε-connectivity profile of the lattice-scale zero set:
    /// `[[eps, components], ...]` over eps from 1.5h to 12h.
    pub fn zero_profile_json(&self) -> String {
        let h = self.domain.h();
        let tau = 2.0 * h * self.field.max_abs() / self.domain.diameter();
        let mut pts: Vec<Point> = self
            .domain
            .interior_nodes()
            .iter()
            .copied()
            .filter(|&id| self.field.values()[id].abs() <= tau)
            .map(|id| self.domain.coord(id))
            .collect();
        // O(n^2) graph build: thin deterministically to keep it interactive
        let cap = 700;
        if pts.len() > cap {
            let step = pts.len() / cap + 1;
            pts = pts.into_iter().step_by(step).collect();
        }
        let grid: Vec<f64> = (1..=8).map(|k| 1.5 * h * k as f64).collect();
        let profile = if pts.is_empty() {
            Vec::new()
        } else {
            connectivity_vs_eps_profile(&pts, &grid)
        };
        serde_json::json!({
            "points": pts.len(),
            "profile": profile.iter().map(|&(e, c)| (e, c)).collect::<Vec<_>>(),
        })
        .to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lab_solves_and_renders() {
        let lab = Lab::build("disk", 2.0, "sin(2*theta)", 48).unwrap();
        let rgba = lab.render_field();
        assert_eq!(
            rgba.len(),
            (lab.width() * lab.height() * 4) as usize
        );
        let nodal = lab.render_nodal(1e-3);
        assert_eq!(nodal.len(), rgba.len());
        let heat = lab.render_harnack(0.1);
        assert_eq!(heat.len(), rgba.len());
        let metrics: serde_json::Value = serde_json::from_str(&lab.metrics_json(1e-3)).unwrap();
        assert_eq!(metrics["positive_components"], 2);
        assert_eq!(metrics["negative_components"], 2);
        assert_eq!(metrics["max_principle"], "pass");
        let profile: serde_json::Value = serde_json::from_str(&lab.zero_profile_json()).unwrap();
        assert!(profile["points"].as_u64().unwrap() > 0);
    }

    #[test]
    fn bad_inputs_are_reported() {
        assert!(Lab::build("torus", 2.0, "sin(theta)", 48).is_err());
        assert!(Lab::build("disk", 2.0, "sin(", 48).is_err());
        assert!(Lab::build("disk", 0.5, "sin(theta)", 48).is_err());
    }
}
