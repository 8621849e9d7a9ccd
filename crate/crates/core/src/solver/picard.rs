//! Picard (frozen-coefficient) iteration for quasilinear operators.
//!
//! At iterate `u_k` the flux is linearized as `a(x) grad u` with
//! `a = |A(x, grad u_k)| / max(|grad u_k|, eps)` and the source is evaluated
//! at `grad u_k`. The linear elliptic system is solved in correction form
//! (`K delta = -linearized residual`, delta = 0 on the boundary) so the CG
//! error floor scales down with the residual, and the update is damped by
//! the configured factor.

use std::sync::Arc;

use crate::geometry::{BoundaryData, DiscreteDomain, Vec2};
use crate::operators::{residual_max_norm, weak_residual, OperatorSpec};
use crate::solver::sparse::{pcg, Csr};
use crate::solver::{
    apply_boundary, default_eps_floor, p_energy, ScalarField, SolveOptions, SolveOutcome,
    SolverError,
};

const CG_RTOL: f64 = 1e-10;

pub(crate) fn solve_picard(
    spec: &OperatorSpec,
    domain: &Arc<DiscreteDomain>,
    g: &BoundaryData,
    opts: &SolveOptions,
) -> Result<SolveOutcome, SolverError> {
    let n = domain.node_count();
    let interior = domain.interior_nodes();
    let m = interior.len();
    let mut rank = vec![u32::MAX; n];
    for (k, &id) in interior.iter().enumerate() {
        rank[id] = k as u32;
    }

    let gmax = g.max_abs();
    let tol_scaled = opts.tol * (1.0 + gmax);
    let eps = opts
        .eps_reg
        .unwrap_or_else(|| default_eps_floor(domain, g))
        .max(1e-300);
    let theta = if opts.damping > 0.0 && opts.damping <= 1.0 {
        opts.damping
    } else {
        1.0
    };

    // harmonic warm start keeps the first frozen coefficients meaningful
    let warm_opts = SolveOptions {
        tol: opts.tol.max(1e-10),
        max_iterations: 50,
        ..SolveOptions::default()
    };
    let mut u = match super::newton::minimize_p_energy(domain, g, 2.0, &warm_opts) {
        Ok(outcome) => outcome.field.values().to_vec(),
        Err(_) => vec![0.0; n],
    };
    apply_boundary(domain, g, &mut u);

    let h = domain.h();
    let area = domain.tri_area();
    let mut trips: Vec<(u32, u32, f64)> = Vec::new();
    let mut residual = f64::INFINITY;
    let mut prev_residual = f64::INFINITY;
    let mut theta_eff = theta;

    for iteration in 0..=opts.max_iterations {
        let field = ScalarField::from_values(domain.clone(), u.clone())?;
        residual = residual_max_norm(domain, weak_residual(spec, domain, &field)?.values());
        if residual <= tol_scaled {
            let energy = p_energy(domain, &field, spec.p(), 0.0)?;
            return Ok(SolveOutcome {
                field,
                iterations: iteration,
                residual,
                energy,
            });
        }
        if iteration == opts.max_iterations {
            break;
        }
        if std::env::var_os("NODALAB_TRACE").is_some() {
            eprintln!("picard iter={} res={:.3e} theta={}", iteration, residual, theta_eff);
        }
        // a residual increase means the fixed-point map overshot; damp harder
        if residual > prev_residual {
            theta_eff = (theta_eff * 0.5).max(0.05);
        }
        prev_residual = residual;

        // one pass assembles the frozen-coefficient matrix and the
        // linearized residual with identical coefficients
        trips.clear();
        let mut rhs = vec![0.0; m];
        for tri in domain.triangles() {
            let gr = tri.grad_u(h, &u);
            let x = domain.tri_centroid(tri);
            let a_coef = spec.flux(x, gr).norm() / gr.norm().max(eps);
            let b_val = spec.source(x, gr);
            let lin_flux: Vec2 = gr.scale(a_coef);
            let gphi = tri.grad_phi(h);
            for a_k in 0..3 {
                let ra = rank[tri.nodes[a_k] as usize];
                if ra == u32::MAX {
                    continue;
                }
                rhs[ra as usize] -= area * (lin_flux.dot(gphi[a_k]) + b_val / 3.0);
                for b_k in 0..3 {
                    let rb = rank[tri.nodes[b_k] as usize];
                    if rb != u32::MAX {
                        trips.push((ra, rb, area * a_coef * gphi[a_k].dot(gphi[b_k])));
                    }
                }
            }
        }
        let k_mat = Csr::from_triplets(m, &mut trips);
        let mut delta = vec![0.0; m];
        let cg = pcg(&k_mat, &rhs, &mut delta, CG_RTOL, 40 * m.max(100));
        if !delta.iter().all(|v| v.is_finite()) {
            return Err(SolverError::LinearBreakdown {
                iteration,
                detail: format!(
                    "CG produced a non-finite correction after {} iterations (relative residual {:.3e})",
                    cg.iterations, cg.rel_residual
                ),
            });
        }

        for (k, &id) in interior.iter().enumerate() {
            u[id] += theta_eff * delta[k];
        }
    }

    Err(SolverError::NonConvergence {
        iterations: opts.max_iterations,
        residual,
        tol: tol_scaled,
    })
}
