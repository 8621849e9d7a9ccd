//! Damped Newton minimization of the regularized p-Dirichlet energy with
//! eps-continuation.
//!
//! For p > 1 the per-triangle Hessian of `(|g|^2 + eps^2)^(p/2)/p` is
//! `c1 I + c2 g g^T` with eigenvalues `w^((p-2)/2)` and
//! `w^((p-4)/2) ((p-1)|g|^2 + eps^2)`, both positive, so the Newton system is
//! SPD whenever eps > 0. The preconditioned-gradient fallback only covers CG
//! breakdown on nearly singular stages.

use std::sync::Arc;

use crate::geometry::{BoundaryData, DiscreteDomain, Vec2};
use crate::operators::{assemble_residual, p_laplace_flux, residual_max_norm};
use crate::solver::sparse::{pcg, Csr};
use crate::solver::{apply_boundary, default_eps_floor, SolveOptions, SolveOutcome, SolverError};
use crate::solver::{p_energy, ScalarField};

const CG_RTOL: f64 = 1e-10;
const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

/// Regularized p-Laplace flux `(|g|^2 + eps^2)^((p-2)/2) g`.
fn flux_reg(p: f64, eps2: f64, g: Vec2) -> Vec2 {
    let w = g.norm2() + eps2;
    if w == 0.0 {
        return Vec2::zero();
    }
    g.scale(w.powf((p - 2.0) / 2.0))
}

pub(crate) fn minimize_p_energy(
    domain: &Arc<DiscreteDomain>,
    g: &BoundaryData,
    p: f64,
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
    let floor = opts.eps_reg.unwrap_or_else(|| default_eps_floor(domain, g));

    let mut u = vec![0.0; n];
    apply_boundary(domain, g, &mut u);

    // harmonic warm start: one linear solve puts every p in its Newton basin
    // and makes constant data exact for degenerate (p > 2) fluxes
    if p != 2.0 {
        let warm_opts = SolveOptions {
            tol: opts.tol.max(1e-10),
            max_iterations: 50,
            ..opts.clone()
        };
        if let Ok(warm) = minimize_p_energy(domain, g, 2.0, &warm_opts) {
            u = warm.field.values().to_vec();
            apply_boundary(domain, g, &mut u);
        }
    }

    // continuation stages: geometric descent onto the floor; a single stage
    // suffices at p = 2 where the flux does not depend on eps
    let stages: Vec<f64> = if p == 2.0 {
        vec![floor]
    } else {
        let (glo, ghi) = (g.min(), g.max());
        let grad_scale = ((ghi - glo) / domain.diameter()).max(floor);
        let mut stages = Vec::new();
        let mut e = 0.1 * grad_scale;
        for _ in 0..opts.continuation_steps.max(1) {
            if e <= floor * 1.0000001 {
                break;
            }
            stages.push(e);
            e /= 10.0;
        }
        stages.push(floor);
        stages
    };

    let h = domain.h();
    let area = domain.tri_area();
    let mut iterations = 0usize;
    let mut residual = f64::INFINITY;
    let mut trips: Vec<(u32, u32, f64)> = Vec::new();
    let mut converged = false;

    'stages: for &eps in &stages {
        let eps2 = eps * eps;
        let mut prev_gnorm = f64::INFINITY;
        let mut stagnant = 0usize;
        loop {
            // unregularized residual decides convergence
            let res = assemble_residual(
                domain,
                &u,
                |_x, gr| p_laplace_flux(p, gr),
                |_x, _gr| 0.0,
            );
            residual = residual_max_norm(domain, &res);
            if residual <= tol_scaled {
                converged = true;
                break 'stages;
            }
            if iterations >= opts.max_iterations {
                break 'stages;
            }

            // regularized gradient (exact gradient of the stage energy)
            let grad_full =
                assemble_residual(domain, &u, |_x, gr| flux_reg(p, eps2, gr), |_x, _gr| 0.0);
            let grad: Vec<f64> = interior.iter().map(|&id| grad_full[id]).collect();
            let gnorm = grad.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            if gnorm <= 0.05 * tol_scaled {
                // stage energy minimized to tolerance; tighten eps
                break;
            }
            // a stage that stops making progress (energy decrements at the
            // rounding floor) hands over to the next eps
            if gnorm > 0.9 * prev_gnorm {
                stagnant += 1;
                if stagnant >= 5 {
                    break;
                }
            } else {
                stagnant = 0;
            }
            prev_gnorm = gnorm;

            // Newton system on interior unknowns
            trips.clear();
            for tri in domain.triangles() {
                let gr = tri.grad_u(h, &u);
                let w = gr.norm2() + eps2;
                if w == 0.0 {
                    continue;
                }
                let c1 = w.powf((p - 2.0) / 2.0);
                let c2 = (p - 2.0) * w.powf((p - 4.0) / 2.0);
                let gphi = tri.grad_phi(h);
                for a_k in 0..3 {
                    let ra = rank[tri.nodes[a_k] as usize];
                    if ra == u32::MAX {
                        continue;
                    }
                    for b_k in 0..3 {
                        let rb = rank[tri.nodes[b_k] as usize];
                        if rb == u32::MAX {
                            continue;
                        }
                        let ga = gphi[a_k];
                        let gb = gphi[b_k];
                        let v = area * (c1 * ga.dot(gb) + c2 * ga.dot(gr) * gb.dot(gr));
                        trips.push((ra, rb, v));
                    }
                }
            }
            let hess = Csr::from_triplets(m, &mut trips);

            let rhs: Vec<f64> = grad.iter().map(|v| -v).collect();
            let mut step = vec![0.0; m];
            let cg = pcg(&hess, &rhs, &mut step, CG_RTOL, 40 * m.max(100));
            if std::env::var_os("NODALAB_TRACE").is_some() {
                eprintln!(
                    "newton p={} eps={:.2e} iter={} res={:.3e} gnorm={:.3e} cg_it={} cg_ok={}",
                    p, eps, iterations, residual, gnorm, cg.iterations, cg.converged
                );
            }
            let mut slope: f64 = grad.iter().zip(&step).map(|(a, b)| a * b).sum();
            if !cg.converged || !slope.is_finite() || slope >= 0.0 {
                // preconditioned steepest descent fallback
                let diag = hess.diag();
                for k in 0..m {
                    step[k] = -grad[k] / diag[k].max(1e-300);
                }
                slope = grad.iter().zip(&step).map(|(a, b)| a * b).sum();
                if slope >= 0.0 {
                    break 'stages;
                }
            }

            // Armijo backtracking on the stage energy, with an ulp-scale
            // slack so full Newton steps are not rejected once decrements
            // sink below the energy's rounding floor
            let field_of = |vals: Vec<f64>| ScalarField::from_values(domain.clone(), vals);
            let e0 = p_energy(domain, &field_of(u.clone())?, p, eps)?;
            let noise = 8.0 * f64::EPSILON * e0.abs().max(f64::MIN_POSITIVE);
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..MAX_BACKTRACKS {
                let mut trial = u.clone();
                for (k, &id) in interior.iter().enumerate() {
                    trial[id] = u[id] + t * step[k];
                }
                let e1 = p_energy(domain, &field_of(trial.clone())?, p, eps)?;
                if e1 <= e0 + ARMIJO_C1 * t * slope + noise {
                    u = trial;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            iterations += 1;
            if !accepted {
                // stagnation at this stage: move on rather than loop forever
                break;
            }
        }
    }

    let field = ScalarField::from_values(domain.clone(), u)?;
    let energy = p_energy(domain, &field, p, 0.0)?;
    if converged {
        Ok(SolveOutcome {
            field,
            iterations,
            residual,
            energy,
        })
    } else {
        // recompute in case the stage loop exited before the residual pass
        let res = assemble_residual(
            domain,
            field.values(),
            |_x, gr| p_laplace_flux(p, gr),
            |_x, _gr| 0.0,
        );
        let residual = residual_max_norm(domain, &res);
        if residual <= tol_scaled {
            Ok(SolveOutcome {
                field,
                iterations,
                residual,
                energy,
            })
        } else {
            Err(SolverError::NonConvergence {
                iterations,
                residual,
                tol: tol_scaled,
            })
        }
    }
}
