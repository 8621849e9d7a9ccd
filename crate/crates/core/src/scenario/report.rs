//! Run reports: serializable verdicts, metrics and provenance for one
//! scenario, plus the suite summary table.
//!
//! Reports are deterministic for a given config: no wall-clock fields (the
//! timing file is separate), fixed field order, and metrics produced by
//! fixed-order iteration.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub provenance: Provenance,
    pub domain: DomainSummary,
    pub solver: SolverSummary,
    pub metrics: Metrics,
    pub checks: Vec<CheckReport>,
    pub all_passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub config_sha256: String,
    pub version: String,
    pub h: f64,
    pub tau_factors: Vec<f64>,
    /// Set when detector-validation mocks altered the solved field.
    pub mock: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainSummary {
    pub kind: String,
    pub h: f64,
    pub interior_nodes: usize,
    pub boundary_nodes: usize,
    pub boundary_cycles: usize,
    pub diameter: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverSummary {
    pub method: String,
    pub operator: String,
    pub p: f64,
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
    pub tol: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metrics {
    pub max_abs_u: f64,
    pub g_min: f64,
    pub g_max: f64,
    pub g_maxima: usize,
    pub g_minima: usize,
    pub empirical_harnack_constant: Option<f64>,
    pub per_tau: Vec<TauMetrics>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TauMetrics {
    pub tau: f64,
    pub positive_components: usize,
    pub negative_components: usize,
    pub zero_nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
            Verdict::Skip => write!(f, "skip"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
    /// For tau-swept checks: whether two consecutive tau levels agreed.
    pub stable: Option<bool>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Human-readable table for the `report` subcommand.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("scenario: {}\n", self.name));
        out.push_str(&format!(
            "domain:   {} (h = {}, {} interior / {} boundary nodes, {} cycle(s))\n",
            self.domain.kind,
            self.domain.h,
            self.domain.interior_nodes,
            self.domain.boundary_nodes,
            self.domain.boundary_cycles
        ));
        out.push_str(&format!(
            "solver:   {} on {} | converged: {} | iterations: {} | residual: {:.3e} (tol {:.3e}) | energy: {:.6}\n",
            self.solver.method,
            self.solver.operator,
            self.solver.converged,
            self.solver.iterations,
            self.solver.residual,
            self.solver.tol,
            self.solver.energy
        ));
        out.push_str(&format!(
            "data:     g in [{:.4}, {:.4}], {} maxima / {} minima | max|u| = {:.6}\n",
            self.metrics.g_min,
            self.metrics.g_max,
            self.metrics.g_maxima,
            self.metrics.g_minima,
            self.metrics.max_abs_u
        ));
        if let Some(c) = self.metrics.empirical_harnack_constant {
            out.push_str(&format!("harnack:  empirical constant {:.4}\n", c));
        }
        for tm in &self.metrics.per_tau {
            out.push_str(&format!(
                "tau {:.3e}: {}+ / {}- components, {} zero nodes\n",
                tm.tau, tm.positive_components, tm.negative_components, tm.zero_nodes
            ));
        }
        out.push_str("checks:\n");
        for c in &self.checks {
            let stability = match c.stable {
                Some(true) => " [stable]",
                Some(false) => " [UNSTABLE]",
                None => "",
            };
            out.push_str(&format!(
                "  {:<20} {}{}  {}\n",
                c.name, c.verdict, stability, c.detail
            ));
        }
        out.push_str(&format!(
            "result:   {}\n",
            if self.all_passed { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// One row of the suite summary.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub name: String,
    pub converged: bool,
    /// Verdict per check in `ALL_CHECKS` order; `-` when not requested.
    pub verdicts: Vec<String>,
    pub positive: usize,
    pub negative: usize,
    pub maxima: usize,
    pub minima: usize,
    pub harnack: Option<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub all_passed: bool,
    pub error: Option<String>,
}

impl SummaryRow {
    pub fn from_report(report: &RunReport) -> SummaryRow {
        let mid = report.metrics.per_tau.len() / 2;
        let (pos, neg) = report
            .metrics
            .per_tau
            .get(mid)
            .map(|t| (t.positive_components, t.negative_components))
            .unwrap_or((0, 0));
        SummaryRow {
            name: report.name.clone(),
            converged: report.solver.converged,
            verdicts: crate::scenario::config::ALL_CHECKS
                .iter()
                .map(|&name| {
                    report
                        .check(name)
                        .map(|c| c.verdict.to_string())
                        .unwrap_or_else(|| "-".to_string())
                })
                .collect(),
            positive: pos,
            negative: neg,
            maxima: report.metrics.g_maxima,
            minima: report.metrics.g_minima,
            harnack: report.metrics.empirical_harnack_constant,
            residual: report.solver.residual,
            iterations: report.solver.iterations,
            all_passed: report.all_passed,
            error: None,
        }
    }

    pub fn from_error(name: &str, error: &str) -> SummaryRow {
        SummaryRow {
            name: name.to_string(),
            converged: false,
            verdicts: crate::scenario::config::ALL_CHECKS
                .iter()
                .map(|_| "-".to_string())
                .collect(),
            positive: 0,
            negative: 0,
            maxima: 0,
            minima: 0,
            harnack: None,
            residual: f64::NAN,
            iterations: 0,
            all_passed: false,
            error: Some(error.replace([',', '\n'], ";")),
        }
    }
}

/// Deterministic CSV for a slice of rows (scenario order preserved).
pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("scenario,converged");
    for name in crate::scenario::config::ALL_CHECKS {
        out.push(',');
        out.push_str(name);
    }
    out.push_str(",positive,negative,maxima,minima,harnack_constant,residual,iterations,all_passed,error\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.name,
            r.converged,
            r.verdicts.join(","),
            r.positive,
            r.negative,
            r.maxima,
            r.minima,
            r.harnack.map(|v| v.to_string()).unwrap_or_default(),
            if r.residual.is_nan() {
                String::new()
            } else {
                r.residual.to_string()
            },
            r.iterations,
            r.all_passed,
            r.error.clone().unwrap_or_default()
        ));
    }
    out
}
