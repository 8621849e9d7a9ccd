//! Discrete weak solutions of the Dirichlet problem.
//!
//! The p-Laplace case is solved variationally: damped Newton with Armijo
//! backtracking on the regularized energy `sum (area/p) (|grad u|^2 + eps^2)^(p/2)`,
//! with continuation driving `eps` down to a floor. General quasilinear
//! operators go through Picard (frozen-coefficient) iteration. Convergence is
//! always judged against the unregularized weak residual of the target
//! operator: max-norm <= tol * (1 + max|g|).

mod newton;
mod picard;
pub(crate) mod sparse;

use std::sync::Arc;

use thiserror::Error;

use crate::geometry::{BoundaryData, DiscreteDomain, GeometryError, Point};
use crate::operators::OperatorSpec;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("field does not belong to this domain")]
    ShapeMismatch,
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("field length {got} does not match lattice size {expected}")]
    FieldLength { got: usize, expected: usize },
    #[error("exponent p must satisfy p > 1, got {0}")]
    InvalidExponent(f64),
    #[error("boundary data must be finite")]
    NonFiniteData,
    #[error(
        "no convergence after {iterations} iterations: residual {residual:.3e} > tol {tol:.3e}"
    )]
    NonConvergence {
        iterations: usize,
        residual: f64,
        tol: f64,
    },
    #[error("linear solve breakdown at outer iteration {iteration}: {detail}")]
    LinearBreakdown { iteration: usize, detail: String },
    #[error("operator violates its structural conditions on {count} of the default samples")]
    StructuralViolations { count: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Nodal values of a scalar function on a [`DiscreteDomain`]. Values are
/// stored for every lattice node; exterior entries are zero and ignored.
#[derive(Debug, Clone)]
pub struct ScalarField {
    domain: Arc<DiscreteDomain>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(domain: &Arc<DiscreteDomain>) -> Self {
        ScalarField {
            domain: domain.clone(),
            values: vec![0.0; domain.node_count()],
        }
    }

    /// Sample a function of position at every interior and boundary node.
    pub fn from_fn(domain: &Arc<DiscreteDomain>, f: impl Fn(Point) -> f64) -> Self {
        let mut field = Self::zeros(domain);
        for id in 0..domain.node_count() {
            if domain.class(id) != crate::geometry::NodeClass::Exterior {
                field.values[id] = f(domain.coord(id));
            }
        }
        field
    }

    pub fn from_values(
        domain: Arc<DiscreteDomain>,
        values: Vec<f64>,
    ) -> Result<Self, SolverError> {
        if values.len() != domain.node_count() {
            return Err(SolverError::FieldLength {
                got: values.len(),
                expected: domain.node_count(),
            });
        }
        Ok(ScalarField { domain, values })
    }

    pub fn domain(&self) -> &Arc<DiscreteDomain> {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Whether this field is defined on (structurally the same lattice as)
    /// `dom`.
    pub fn compatible(&self, dom: &DiscreteDomain) -> bool {
        std::ptr::eq(self.domain.as_ref(), dom)
            || (self.domain.nx() == dom.nx()
                && self.domain.ny() == dom.ny()
                && self.domain.h() == dom.h()
                && self.domain.interior_nodes().len() == dom.interior_nodes().len())
    }

    pub fn max_abs(&self) -> f64 {
        let d = &self.domain;
        (0..d.node_count())
            .filter(|&id| d.class(id) != crate::geometry::NodeClass::Exterior)
            .fold(0.0f64, |m, id| m.max(self.values[id].abs()))
    }

    pub fn min_max(&self) -> (f64, f64) {
        let d = &self.domain;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for id in 0..d.node_count() {
            if d.class(id) != crate::geometry::NodeClass::Exterior {
                lo = lo.min(self.values[id]);
                hi = hi.max(self.values[id]);
            }
        }
        (lo, hi)
    }

    pub fn is_finite_on_domain(&self) -> bool {
        let d = &self.domain;
        (0..d.node_count())
            .filter(|&id| d.class(id) != crate::geometry::NodeClass::Exterior)
            .all(|id| self.values[id].is_finite())
    }

    /// Boundary values of this field, in boundary-cycle order.
    pub fn boundary_trace(&self) -> BoundaryData {
        let vals = self
            .domain
            .boundary_nodes()
            .iter()
            .map(|&id| self.values[id])
            .collect();
        BoundaryData::from_cycle_values(&self.domain, vals).expect("lengths match")
    }
}

/// Options for the variational and Picard solvers.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Regularization floor for `(|grad u|^2 + eps^2)^(p/2)`. `None` selects
    /// `1e-8 * max|g| / diam`.
    pub eps_reg: Option<f64>,
    /// Residual tolerance: converged when the unregularized weak residual
    /// max-norm is `<= tol * (1 + max|g|)`.
    pub tol: f64,
    pub max_iterations: usize,
    /// Number of continuation stages driving eps down to the floor.
    pub continuation_steps: usize,
    /// Picard damping factor in (0, 1].
    pub damping: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            eps_reg: None,
            tol: 1e-8,
            max_iterations: 500,
            continuation_steps: 4,
            damping: 0.7,
        }
    }
}

impl SolveOptions {
    fn validate(&self) -> Result<(), SolverError> {
        if !(self.tol > 0.0) {
            return Err(SolverError::InvalidOptions(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iterations == 0 {
            return Err(SolverError::InvalidOptions(
                "max_iterations must be at least 1".into(),
            ));
        }
        if let Some(e) = self.eps_reg {
            if !(e >= 0.0) {
                return Err(SolverError::InvalidOptions(format!(
                    "eps_reg must be nonnegative, got {}",
                    e
                )));
            }
        }
        Ok(())
    }
}

/// A computed critical point with its diagnostics.
#[derive(Debug)]
pub struct SolveOutcome {
    pub field: ScalarField,
    pub iterations: usize,
    /// Unregularized weak residual max-norm at the returned field.
    pub residual: f64,
    /// Discrete p-Dirichlet energy (eps = 0) of the returned field.
    pub energy: f64,
}

/// Discrete regularized p-Dirichlet energy
/// `sum_T (area/p) (|grad u|_T^2 + eps^2)^(p/2)`.
pub fn p_energy(
    domain: &DiscreteDomain,
    u: &ScalarField,
    p: f64,
    eps_reg: f64,
) -> Result<f64, SolverError> {
    if !(p > 1.0) {
        return Err(SolverError::InvalidExponent(p));
    }
    if !u.compatible(domain) {
        return Err(SolverError::ShapeMismatch);
    }
    let h = domain.h();
    let area = domain.tri_area();
    let e2 = eps_reg * eps_reg;
    let mut e = 0.0;
    for tri in domain.triangles() {
        let g = tri.grad_u(h, u.values());
        e += (g.norm2() + e2).powf(p / 2.0);
    }
    Ok(e * area / p)
}

/// Variational solve of the p-Laplace Dirichlet problem. The returned field
/// carries `g` bit-exactly on the boundary nodes.
pub fn solve_p_laplace(
    domain: &Arc<DiscreteDomain>,
    g: &BoundaryData,
    p: f64,
    opts: &SolveOptions,
) -> Result<SolveOutcome, SolverError> {
    if !(p > 1.0) {
        return Err(SolverError::InvalidExponent(p));
    }
    if !g.is_finite() {
        return Err(SolverError::NonFiniteData);
    }
    opts.validate()?;
    newton::minimize_p_energy(domain, g, p, opts)
}

/// Picard (frozen-coefficient) iteration for a general quasilinear operator.
/// The operator must pass [`crate::operators::validate_structural`] on the
/// default sample set for this domain.
pub fn solve_quasilinear(
    spec: &OperatorSpec,
    domain: &Arc<DiscreteDomain>,
    g: &BoundaryData,
    opts: &SolveOptions,
) -> Result<SolveOutcome, SolverError> {
    if !g.is_finite() {
        return Err(SolverError::NonFiniteData);
    }
    opts.validate()?;
    let samples = crate::operators::default_samples_for(domain);
    let report = crate::operators::validate_structural(spec, &samples);
    if !report.passed() {
        return Err(SolverError::StructuralViolations {
            count: report.violations.len(),
        });
    }
    picard::solve_picard(spec, domain, g, opts)
}

/// Default regularization floor: `1e-8 * max|g| / diam`.
pub(crate) fn default_eps_floor(domain: &DiscreteDomain, g: &BoundaryData) -> f64 {
    1e-8 * g.max_abs() / domain.diameter()
}

/// Write `g` into the boundary entries of a raw value vector.
pub(crate) fn apply_boundary(domain: &DiscreteDomain, g: &BoundaryData, values: &mut [f64]) {
    for (&id, &v) in domain.boundary_nodes().iter().zip(g.values()) {
        values[id] = v;
    }
}
