//! Scenario configuration: a TOML document naming a domain, an operator
//! from the catalog, boundary data as an expression, solver options, the
//! tau policy and the set of checks to run.

use serde::Deserialize;

use crate::scenario::ScenarioError;

pub const ALL_CHECKS: [&str; 7] = [
    "harnack",
    "max-principle",
    "nodal-count",
    "boundary-contact",
    "simply-connected",
    "unique-continuation",
    "zero-connectivity",
];

pub const DEFAULT_TAU_FACTORS: [f64; 3] = [1e-2, 1e-3, 1e-4];

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub domain: DomainConfig,
    pub operator: OperatorConfig,
    pub boundary: BoundaryConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub tau: TauConfig,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default)]
    pub mock: MockConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub kind: String,
    pub h: f64,
    pub radius: Option<f64>,
    pub vertices: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorConfig {
    pub name: String,
    pub p: f64,
    pub scale: Option<f64>,
    pub b1: Option<f64>,
    pub sign: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    pub expr: String,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub tol: Option<f64>,
    pub max_iterations: Option<usize>,
    pub continuation_steps: Option<usize>,
    pub damping: Option<f64>,
    pub eps_reg: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct TauConfig {
    pub factors: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ChecksConfig {
    pub list: Option<Vec<String>>,
}

/// Detector-validation plumbing: plant an interior spike (amplitude factor
/// of max|u|) after the solve, so failing rows can be demonstrated.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MockConfig {
    pub interior_spike: Option<f64>,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let config: ScenarioConfig =
            toml::from_str(text).map_err(|e| ScenarioError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
        {
            return Err(ScenarioError::Config(format!(
                "scenario name '{}' must be nonempty and use [A-Za-z0-9_-]",
                self.name
            )));
        }
        match self.domain.kind.as_str() {
            "disk" => {
                if self.domain.radius.is_none() {
                    return Err(ScenarioError::Config(
                        "disk domain requires 'radius'".into(),
                    ));
                }
            }
            "polygon" => {
                if self.domain.vertices.as_ref().map_or(0, |v| v.len()) < 3 {
                    return Err(ScenarioError::Config(
                        "polygon domain requires at least 3 'vertices'".into(),
                    ));
                }
            }
            other => {
                return Err(ScenarioError::Config(format!(
                    "unknown domain kind '{}' (expected 'disk' or 'polygon')",
                    other
                )));
            }
        }
        crate::scenario::expr::parse(&self.boundary.expr)
            .map_err(|e| ScenarioError::Config(format!("boundary expression: {}", e)))?;
        if let Some(list) = &self.checks.list {
            for name in list {
                if !ALL_CHECKS.contains(&name.as_str()) {
                    return Err(ScenarioError::Config(format!(
                        "unknown check '{}'; available: {}",
                        name,
                        ALL_CHECKS.join(", ")
                    )));
                }
            }
        }
        if let Some(f) = &self.tau.factors {
            if f.is_empty() || f.iter().any(|&v| !(v > 0.0)) {
                return Err(ScenarioError::Config(
                    "tau factors must be positive and nonempty".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn tau_factors(&self) -> Vec<f64> {
        let mut f = self
            .tau
            .factors
            .clone()
            .unwrap_or_else(|| DEFAULT_TAU_FACTORS.to_vec());
        // descending: coarsest threshold first
        f.sort_by(|a, b| b.partial_cmp(a).unwrap());
        f
    }

    pub fn check_list(&self) -> Vec<String> {
        self.checks
            .list
            .clone()
            .unwrap_or_else(|| ALL_CHECKS.iter().map(|s| s.to_string()).collect())
    }

    pub fn solve_options(&self) -> crate::solver::SolveOptions {
        let d = crate::solver::SolveOptions::default();
        crate::solver::SolveOptions {
            tol: self.solver.tol.unwrap_or(d.tol),
            max_iterations: self.solver.max_iterations.unwrap_or(d.max_iterations),
            continuation_steps: self
                .solver
                .continuation_steps
                .unwrap_or(d.continuation_steps),
            damping: self.solver.damping.unwrap_or(d.damping),
            eps_reg: self.solver.eps_reg.or(d.eps_reg),
        }
    }
}
