//! Harnack-inequality and maximum-principle checks on computed fields.
//!
//! `harnack_ratio` measures `sup u / inf u` over the lattice nodes of a ball
//! `B_r` whose tripled ball `B_3r` lies inside the domain; the sweep
//! aggregates every admissible lattice center into an empirical constant.
//! Ball membership is by closed node-center distance (`<= r`), so radii that
//! hit nodes exactly (r = 1/4 on a 1/64 lattice) include them.

use thiserror::Error;

use crate::geometry::{DiscreteDomain, Point};
use crate::solver::ScalarField;

/// Near-zero infimum guard: `inf <= eta * sup` flags the ratio unbounded.
pub const DEFAULT_ETA: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("field does not belong to this domain")]
    ShapeMismatch,
    #[error("B_3r around ({x}, {y}) is not contained in the domain")]
    BallNotContained { x: f64, y: f64 },
    #[error("ball around ({x}, {y}) contains no lattice nodes")]
    EmptyBall { x: f64, y: f64 },
    #[error("u is negative ({min}) on B_3r beyond the tolerance {tol}")]
    NegativeField { min: f64, tol: f64 },
}

/// Harnack measurement on one ball.
#[derive(Debug, Clone)]
pub struct HarnackReport {
    pub center: Point,
    pub r: f64,
    pub sup: f64,
    pub inf: f64,
    /// `sup/inf` when the infimum is safely positive.
    pub ratio: Option<f64>,
    /// Set when `inf <= eta * sup`: the theorem precludes this for positive
    /// solutions, so the flag is the interesting signal rather than an error.
    pub unbounded: bool,
    /// Whether `B_3r` was contained in the domain.
    pub admissible: bool,
}

/// Nodes of the closed lattice ball, requiring every node of `B_3r` to be
/// interior. `tol_neg` relaxes the nonnegativity precondition.
pub fn harnack_ratio(
    domain: &DiscreteDomain,
    u: &ScalarField,
    center: Point,
    r: f64,
    tol_neg: f64,
    eta: f64,
) -> Result<HarnackReport, AnalysisError> {
    if !u.compatible(domain) {
        return Err(AnalysisError::ShapeMismatch);
    }
    let big = domain.nodes_in_ball(center, 3.0 * r);
    if big.iter().any(|&id| !domain.is_interior(id)) {
        return Err(AnalysisError::BallNotContained {
            x: center.x,
            y: center.y,
        });
    }
    let mut min_big = f64::INFINITY;
    for &id in &big {
        min_big = min_big.min(u.values()[id]);
    }
    if min_big < -tol_neg {
        return Err(AnalysisError::NegativeField {
            min: min_big,
            tol: tol_neg,
        });
    }
    let small = domain.nodes_in_ball(center, r);
    if small.is_empty() {
        return Err(AnalysisError::EmptyBall {
            x: center.x,
            y: center.y,
        });
    }
    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    for &id in &small {
        sup = sup.max(u.values()[id]);
        inf = inf.min(u.values()[id]);
    }
    let unbounded = inf <= eta * sup && sup > 0.0;
    let ratio = if sup == inf {
        Some(1.0)
    } else if !unbounded && inf > 0.0 {
        Some(sup / inf)
    } else {
        None
    };
    Ok(HarnackReport {
        center,
        r,
        sup,
        inf,
        ratio,
        unbounded,
        admissible: true,
    })
}

/// Sweep result: every admissible ball plus the empirical constant.
#[derive(Debug)]
pub struct HarnackSweep {
    pub reports: Vec<HarnackReport>,
    /// Maximum finite ratio over all admissible balls.
    pub max_ratio: Option<f64>,
    /// Number of balls whose ratio was flagged unbounded.
    pub unbounded_count: usize,
}

/// Enumerate every lattice node as a center, for each requested radius, and
/// measure all admissible balls (`B_3r` inside the domain). Inadmissible
/// balls are skipped.
pub fn harnack_sweep(
    domain: &DiscreteDomain,
    u: &ScalarField,
    radii: &[f64],
    tol_neg: f64,
    eta: f64,
) -> Result<HarnackSweep, AnalysisError> {
    if !u.compatible(domain) {
        return Err(AnalysisError::ShapeMismatch);
    }
    let mut reports = Vec::new();
    let mut max_ratio: Option<f64> = None;
    let mut unbounded_count = 0;
    for &r in radii {
        for &center_id in domain.interior_nodes() {
            let center = domain.coord(center_id);
            match harnack_ratio(domain, u, center, r, tol_neg, eta) {
                Ok(report) => {
                    if let Some(q) = report.ratio {
                        max_ratio = Some(max_ratio.map_or(q, |m: f64| m.max(q)));
                    }
                    if report.unbounded {
                        unbounded_count += 1;
                    }
                    reports.push(report);
                }
                Err(AnalysisError::BallNotContained { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(HarnackSweep {
        reports,
        max_ratio,
        unbounded_count,
    })
}

/// Verdict of the strong-maximum-principle check.
#[derive(Debug, Clone, PartialEq)]
pub enum MaxPrincipleVerdict {
    /// `max - min <= margin_tol * scale`: the principle is vacuous.
    Constant,
    /// Interior extrema stay strictly inside the boundary range; margins are
    /// `boundary_max - interior_max` and `interior_min - boundary_min`.
    Pass { margin_max: f64, margin_min: f64 },
    /// An interior node attains or exceeds the boundary extremum.
    Fail {
        witness: usize,
        value: f64,
        boundary_extreme: f64,
        at_maximum: bool,
    },
}

impl MaxPrincipleVerdict {
    pub fn passed(&self) -> bool {
        !matches!(self, MaxPrincipleVerdict::Fail { .. })
    }
}

/// Check that a (non-constant) field attains neither its maximum nor its
/// minimum at an interior node. The minimum side is the same check applied
/// to `-u`.
pub fn check_strong_maximum_principle(
    domain: &DiscreteDomain,
    u: &ScalarField,
    margin_tol: f64,
) -> Result<MaxPrincipleVerdict, AnalysisError> {
    if !u.compatible(domain) {
        return Err(AnalysisError::ShapeMismatch);
    }
    let (lo, hi) = u.min_max();
    let scale = hi.abs().max(lo.abs()).max(1e-300);
    if hi - lo <= margin_tol * scale {
        return Ok(MaxPrincipleVerdict::Constant);
    }

    let mut bmax = f64::NEG_INFINITY;
    let mut bmin = f64::INFINITY;
    for &id in domain.boundary_nodes() {
        bmax = bmax.max(u.values()[id]);
        bmin = bmin.min(u.values()[id]);
    }
    let mut imax = f64::NEG_INFINITY;
    let mut imin = f64::INFINITY;
    let mut arg_max = 0;
    let mut arg_min = 0;
    for &id in domain.interior_nodes() {
        let v = u.values()[id];
        if v > imax {
            imax = v;
            arg_max = id;
        }
        if v < imin {
            imin = v;
            arg_min = id;
        }
    }

    if imax >= bmax {
        return Ok(MaxPrincipleVerdict::Fail {
            witness: arg_max,
            value: imax,
            boundary_extreme: bmax,
            at_maximum: true,
        });
    }
    if imin <= bmin {
        return Ok(MaxPrincipleVerdict::Fail {
            witness: arg_min,
            value: imin,
            boundary_extreme: bmin,
            at_maximum: false,
        });
    }
    Ok(MaxPrincipleVerdict::Pass {
        margin_max: bmax - imax,
        margin_min: imin - bmin,
    })
}
