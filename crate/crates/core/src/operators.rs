//! Quasilinear operator pairs `(A, B)` with their structural constants.
//!
//! A spec carries evaluation maps for the flux `A(x, h)` and the source
//! `B(x, h)` together with declared constants `p, a0, a1, b0, b1`. The
//! constants are checked against samples, never inferred: the structural
//! conditions are inequalities, not constructive definitions.

use thiserror::Error;

use crate::geometry::{DiscreteDomain, Point, Vec2};
use crate::solver::{ScalarField, SolverError};

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("exponent p must satisfy p > 1, got {0}")]
    InvalidExponent(f64),
    #[error("invalid structural constants: {0}")]
    InvalidConstants(String),
}

/// Which family of structural growth conditions the source obeys:
/// `|B| <= b1 |h|^(p-1)` (first kind, b0 = 0) or
/// `|B| <= b0 |h|^p + b1 |h|^(p-1)` (second kind).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    Structural,
    Structural2,
}

type FluxFn = dyn Fn(Point, Vec2) -> Vec2 + Send + Sync;
type SourceFn = dyn Fn(Point, Vec2) -> f64 + Send + Sync;

/// An operator pair with declared structural constants. Evaluation maps must
/// be pure; specs are immutable and safe to share across threads.
pub struct OperatorSpec {
    name: String,
    p: f64,
    a0: f64,
    a1: f64,
    b0: f64,
    b1: f64,
    kind: StructureKind,
    flux: Box<FluxFn>,
    source: Box<SourceFn>,
}

impl std::fmt::Debug for OperatorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OperatorSpec")
            .field("name", &self.name)
            .field("p", &self.p)
            .field("a0", &self.a0)
            .field("a1", &self.a1)
            .field("b0", &self.b0)
            .field("b1", &self.b1)
            .field("kind", &self.kind)
            .finish()
    }
}

impl OperatorSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        p: f64,
        a0: f64,
        a1: f64,
        b0: f64,
        b1: f64,
        kind: StructureKind,
        flux: Box<FluxFn>,
        source: Box<SourceFn>,
    ) -> Result<Self, OperatorError> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(OperatorError::InvalidExponent(p));
        }
        if !(0.0 < a0 && a0 <= a1) {
            return Err(OperatorError::InvalidConstants(format!(
                "need 0 < a0 <= a1, got a0 = {}, a1 = {}",
                a0, a1
            )));
        }
        if !(b1 > 0.0) {
            return Err(OperatorError::InvalidConstants(format!(
                "need b1 > 0, got {}",
                b1
            )));
        }
        if kind == StructureKind::Structural && b0 != 0.0 {
            return Err(OperatorError::InvalidConstants(
                "b0 must be 0 under the first structure".into(),
            ));
        }
        if b0 < 0.0 {
            return Err(OperatorError::InvalidConstants(format!(
                "need b0 >= 0, got {}",
                b0
            )));
        }
        Ok(OperatorSpec {
            name: name.into(),
            p,
            a0,
            a1,
            b0,
            b1,
            kind,
            flux,
            source,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn flux(&self, x: Point, h: Vec2) -> Vec2 {
        (self.flux)(x, h)
    }

    pub fn source(&self, x: Point, h: Vec2) -> f64 {
        (self.source)(x, h)
    }
}

/// p-Laplace flux `|h|^(p-2) h`, extended by 0 at the origin (the continuous
/// extension for every p > 1).
pub fn p_laplace_flux(p: f64, h: Vec2) -> Vec2 {
    let n = h.norm();
    if n == 0.0 {
        Vec2::zero()
    } else {
        h.scale(n.powf(p - 2.0))
    }
}

/// The p-Laplace operator: flux `|h|^(p-2) h`, zero source, `a0 = a1 = 1`.
pub fn p_laplace_spec(p: f64) -> Result<OperatorSpec, OperatorError> {
    OperatorSpec::new(
        format!("p-laplace(p={})", p),
        p,
        1.0,
        1.0,
        0.0,
        1.0,
        StructureKind::Structural,
        Box::new(move |_x, h| p_laplace_flux(p, h)),
        Box::new(|_x, _h| 0.0),
    )
}

/// Scaled p-Laplace flux `c |h|^(p-2) h` with `a0 = a1 = c`.
pub fn scaled_p_laplace_spec(p: f64, c: f64) -> Result<OperatorSpec, OperatorError> {
    if !(c > 0.0) {
        return Err(OperatorError::InvalidConstants(format!(
            "scale must be positive, got {}",
            c
        )));
    }
    OperatorSpec::new(
        format!("scaled-p-laplace(p={}, c={})", p, c),
        p,
        c,
        c,
        0.0,
        1.0,
        StructureKind::Structural,
        Box::new(move |_x, h| p_laplace_flux(p, h).scale(c)),
        Box::new(|_x, _h| 0.0),
    )
}

/// p-Laplace flux with source `sign * b1 |h|^(p-1)`.
pub fn p_laplace_with_source_spec(
    p: f64,
    b1: f64,
    sign: f64,
) -> Result<OperatorSpec, OperatorError> {
    if !(b1 > 0.0) {
        return Err(OperatorError::InvalidConstants(format!(
            "b1 must be positive, got {}",
            b1
        )));
    }
    let s = if sign < 0.0 { -1.0 } else { 1.0 };
    OperatorSpec::new(
        format!("p-laplace-with-source(p={}, b1={}, sign={})", p, b1, s),
        p,
        1.0,
        1.0,
        0.0,
        b1,
        StructureKind::Structural,
        Box::new(move |_x, h| p_laplace_flux(p, h)),
        Box::new(move |_x, h| s * b1 * h.norm().powf(p - 1.0)),
    )
}

/// Built-in operator catalog used by scenario configs.
pub fn catalog_spec(
    name: &str,
    p: f64,
    scale: Option<f64>,
    b1: Option<f64>,
    sign: Option<f64>,
) -> Result<OperatorSpec, OperatorError> {
    match name {
        "p-laplace" => p_laplace_spec(p),
        "scaled-p-laplace" => scaled_p_laplace_spec(p, scale.unwrap_or(1.0)),
        "p-laplace-with-source" => {
            p_laplace_with_source_spec(p, b1.unwrap_or(0.1), sign.unwrap_or(1.0))
        }
        other => Err(OperatorError::InvalidConstants(format!(
            "unknown operator '{}'",
            other
        ))),
    }
}

/// A position/gradient pair to test the structural conditions at.
pub type GradientSample = (Point, Vec2);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructuralBound {
    /// `A(x,h) . h >= a0 |h|^p`
    Coercivity,
    /// `|A(x,h)| <= a1 |h|^(p-1)`
    FluxGrowth,
    /// `|B(x,h)| <= b1 |h|^(p-1)` resp. `<= b0 |h|^p + b1 |h|^(p-1)`
    SourceGrowth,
}

#[derive(Debug, Clone)]
pub struct StructuralViolation {
    pub sample_index: usize,
    pub bound: StructuralBound,
    pub lhs: f64,
    pub rhs: f64,
    /// Negative margin means the bound failed; magnitude is the gap.
    pub margin: f64,
}

#[derive(Debug, Clone, Default)]
pub struct StructuralReport {
    pub samples_checked: usize,
    pub violations: Vec<StructuralViolation>,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

// relative slack so exact-equality operators (the p-Laplacian meets its own
// coercivity bound with equality) do not trip on rounding
const STRUCT_SLACK: f64 = 1e-12;

/// Check the structural inequalities at every sample. Violations are data,
/// not errors.
pub fn validate_structural(spec: &OperatorSpec, samples: &[GradientSample]) -> StructuralReport {
    let mut report = StructuralReport {
        samples_checked: samples.len(),
        ..Default::default()
    };
    let p = spec.p();
    for (idx, &(x, h)) in samples.iter().enumerate() {
        let hn = h.norm();
        let np = hn.powf(p);
        let np1 = hn.powf(p - 1.0);
        let a = spec.flux(x, h);
        let b = spec.source(x, h);

        let lhs = a.dot(h);
        let rhs = spec.a0() * np;
        if lhs < rhs - STRUCT_SLACK * rhs.abs().max(lhs.abs()) {
            report.violations.push(StructuralViolation {
                sample_index: idx,
                bound: StructuralBound::Coercivity,
                lhs,
                rhs,
                margin: lhs - rhs,
            });
        }

        let lhs = a.norm();
        let rhs = spec.a1() * np1;
        if lhs > rhs + STRUCT_SLACK * rhs.abs().max(lhs.abs()) {
            report.violations.push(StructuralViolation {
                sample_index: idx,
                bound: StructuralBound::FluxGrowth,
                lhs,
                rhs,
                margin: rhs - lhs,
            });
        }

        let lhs = b.abs();
        let rhs = match spec.kind() {
            StructureKind::Structural => spec.b1() * np1,
            StructureKind::Structural2 => spec.b0() * np + spec.b1() * np1,
        };
        if lhs > rhs + STRUCT_SLACK * rhs.abs().max(lhs.abs()) {
            report.violations.push(StructuralViolation {
                sample_index: idx,
                bound: StructuralBound::SourceGrowth,
                lhs,
                rhs,
                margin: rhs - lhs,
            });
        }
    }
    report
}

/// Deterministic default sample set: a few interior positions crossed with
/// gradients over 16 directions and magnitudes from 1e-6 to 1e6, plus the
/// zero gradient.
pub fn default_samples_for(domain: &DiscreteDomain) -> Vec<GradientSample> {
    let interior = domain.interior_nodes();
    let picks = [
        interior[0],
        interior[interior.len() / 4],
        interior[interior.len() / 2],
        interior[3 * interior.len() / 4],
        interior[interior.len() - 1],
    ];
    let mut samples = Vec::new();
    for &id in &picks {
        let x = domain.coord(id);
        samples.push((x, Vec2::zero()));
        for k in 0..16 {
            let ang = k as f64 * std::f64::consts::TAU / 16.0;
            let dir = Vec2::new(ang.cos(), ang.sin());
            for mag in [1e-6, 1e-3, 1.0, 1e3, 1e6] {
                samples.push((x, dir.scale(mag)));
            }
        }
    }
    samples
}

/// Discrete weak residual of `div A(x, grad u) = B(x, grad u)` against the
/// nodal hat functions of the triangulated lattice:
/// `r_i = sum_T area * (A(x_T, grad u|_T) . grad phi_i + B(x_T, grad u|_T)/3)`
/// for interior nodes i; a zero field means u is a discrete weak solution.
pub fn weak_residual(
    spec: &OperatorSpec,
    domain: &DiscreteDomain,
    u: &ScalarField,
) -> Result<ScalarField, SolverError> {
    if !u.compatible(domain) {
        return Err(SolverError::ShapeMismatch);
    }
    let values = assemble_residual(
        domain,
        u.values(),
        |x, g| spec.flux(x, g),
        |x, g| spec.source(x, g),
    );
    ScalarField::from_values(u.domain().clone(), values)
}

/// Residual assembly over an arbitrary flux/source pair (also used by the
/// solver for regularized gradients).
pub(crate) fn assemble_residual(
    domain: &DiscreteDomain,
    u: &[f64],
    flux: impl Fn(Point, Vec2) -> Vec2,
    source: impl Fn(Point, Vec2) -> f64,
) -> Vec<f64> {
    let h = domain.h();
    let area = domain.tri_area();
    let mut r = vec![0.0; domain.node_count()];
    for tri in domain.triangles() {
        let g = tri.grad_u(h, u);
        let x = domain.tri_centroid(tri);
        let a = flux(x, g);
        let b = source(x, g);
        for (v, gp) in tri.nodes.iter().zip(tri.grad_phi(h)) {
            let v = *v as usize;
            if domain.is_interior(v) {
                r[v] += area * (a.dot(gp) + b / 3.0);
            }
        }
    }
    r
}

/// Max-norm of a residual vector over interior nodes.
pub fn residual_max_norm(domain: &DiscreteDomain, residual: &[f64]) -> f64 {
    domain
        .interior_nodes()
        .iter()
        .fold(0.0f64, |m, &id| m.max(residual[id].abs()))
}

/// Weak residual max-norm of a field under a spec.
pub fn weak_residual_norm(
    spec: &OperatorSpec,
    domain: &DiscreteDomain,
    u: &ScalarField,
) -> Result<f64, SolverError> {
    let r = weak_residual(spec, domain, u)?;
    Ok(residual_max_norm(domain, r.values()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_polygon_domain;
    use std::sync::Arc;

    #[test]
    fn laplace_flux_is_identity() {
        let spec = p_laplace_spec(2.0).unwrap();
        let f = spec.flux(Point::new(0.0, 0.0), Vec2::new(3.0, 4.0));
        assert_eq!(f, Vec2::new(3.0, 4.0));
    }

    #[test]
    fn p4_flux_hand_check() {
        // |h| = 2, |h|^2 h = (0, 8)
        let spec = p_laplace_spec(4.0).unwrap();
        let f = spec.flux(Point::new(0.0, 0.0), Vec2::new(0.0, 2.0));
        assert!((f.x - 0.0).abs() < 1e-14 && (f.y - 8.0).abs() < 1e-12);
    }

    #[test]
    fn subquadratic_flux_vanishes_at_origin() {
        let spec = p_laplace_spec(1.5).unwrap();
        let f = spec.flux(Point::new(0.0, 0.0), Vec2::zero());
        assert_eq!(f, Vec2::zero());
    }

    #[test]
    fn invalid_exponent_rejected() {
        assert!(p_laplace_spec(1.0).is_err());
        assert!(p_laplace_spec(0.5).is_err());
    }

    fn sample_grid() -> Vec<GradientSample> {
        let mut s = vec![(Point::new(0.0, 0.0), Vec2::zero())];
        for k in 0..12 {
            let ang = k as f64 * 0.5;
            for mag in [1e-6, 0.1, 1.0, 10.0, 1e6] {
                s.push((
                    Point::new(0.3, -0.2),
                    Vec2::new(ang.cos(), ang.sin()).scale(mag),
                ));
            }
        }
        s
    }

    #[test]
    fn p_laplace_meets_structure_exactly() {
        for p in [1.5, 2.0, 3.0, 4.0] {
            let spec = p_laplace_spec(p).unwrap();
            let report = validate_structural(&spec, &sample_grid());
            assert!(report.passed(), "p = {}: {:?}", p, report.violations);
        }
    }

    #[test]
    fn overscaled_flux_violates_upper_bound() {
        // flux 2|h|^(p-2) h declared with a1 = 1 breaks the growth bound
        let p = 3.0;
        let spec = OperatorSpec::new(
            "bad",
            p,
            1.0,
            1.0,
            0.0,
            1.0,
            StructureKind::Structural,
            Box::new(move |_x, h| p_laplace_flux(p, h).scale(2.0)),
            Box::new(|_x, _h| 0.0),
        )
        .unwrap();
        let report = validate_structural(&spec, &sample_grid());
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .all(|v| v.bound == StructuralBound::FluxGrowth));
        // every nonzero-gradient sample violates
        assert_eq!(report.violations.len(), sample_grid().len() - 1);
    }

    #[test]
    fn half_bound_source_passes() {
        let p = 2.5;
        let b1 = 0.8;
        let spec = OperatorSpec::new(
            "half-source",
            p,
            1.0,
            1.0,
            0.0,
            b1,
            StructureKind::Structural,
            Box::new(move |_x, h| p_laplace_flux(p, h)),
            Box::new(move |_x, h| 0.5 * b1 * h.norm().powf(p - 1.0)),
        )
        .unwrap();
        let report = validate_structural(&spec, &sample_grid());
        assert!(report.passed());
    }

    fn unit_square(h: f64) -> Arc<DiscreteDomain> {
        let verts = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        Arc::new(build_polygon_domain(&verts, h).unwrap())
    }

    #[test]
    fn affine_fields_have_zero_residual() {
        let dom = unit_square(1.0 / 16.0);
        let u = ScalarField::from_fn(&dom, |p| p.x);
        for p in [2.0, 4.0] {
            let spec = p_laplace_spec(p).unwrap();
            let norm = weak_residual_norm(&spec, &dom, &u).unwrap();
            assert!(norm <= 1e-13, "p = {}: residual {}", p, norm);
        }
    }

    #[test]
    fn quadratic_field_residual_matches_mass() {
        // u = x^2 has Laplacian 2; with full interior stencils the residual
        // is exactly -2 h^2 at every interior node
        let h = 1.0 / 16.0;
        let dom = unit_square(h);
        let u = ScalarField::from_fn(&dom, |p| p.x * p.x);
        let spec = p_laplace_spec(2.0).unwrap();
        let r = weak_residual(&spec, &dom, &u).unwrap();
        let expected = -2.0 * h * h;
        for &id in dom.interior_nodes() {
            assert!(
                (r.values()[id] - expected).abs() <= 1e-10,
                "node {}: {} vs {}",
                id,
                r.values()[id],
                expected
            );
        }
    }

    #[test]
    fn flux_homogeneity_for_builtin_specs() {
        for p in [2.0, 3.0] {
            let spec = p_laplace_spec(p).unwrap();
            for k in 0..8 {
                let ang = 0.7 * k as f64;
                let hvec = Vec2::new(ang.cos(), ang.sin()).scale(0.37);
                for t in [0.5, 2.0, 7.0] {
                    let lhs = spec.flux(Point::new(0.0, 0.0), hvec.scale(t));
                    let rhs = spec.flux(Point::new(0.0, 0.0), hvec).scale(t.powf(p - 1.0));
                    assert!(
                        (lhs.x - rhs.x).abs() <= 1e-12 * rhs.norm().max(1.0)
                            && (lhs.y - rhs.y).abs() <= 1e-12 * rhs.norm().max(1.0)
                    );
                }
            }
        }
    }
}
