//! Nodal decompositions, maximal vanishing sets, and the unique-continuation
//! checks.
//!
//! Sign sets use 4-connectivity and the (closed) zero set 8-connectivity;
//! the dual convention avoids the checkerboard paradox where a set and its
//! complement are both connected or both disconnected. Thresholding by
//! `tau >= 0` stands in for exact zeros, which discrete solutions never hit
//! off symmetry lines.

use std::sync::Arc;

use thiserror::Error;

use crate::geometry::{BoundaryData, DiscreteDomain, NodeClass, Point};
use crate::solver::ScalarField;

#[derive(Debug, Error)]
pub enum NodalError {
    #[error("field does not belong to this domain")]
    ShapeMismatch,
    #[error("threshold tau must be nonnegative, got {0}")]
    NegativeTau(f64),
    #[error("ball of radius {r} around ({x}, {y}) is not contained in the domain")]
    BallNotContained { x: f64, y: f64, r: f64 },
}

/// One signed nodal component.
#[derive(Debug, Clone)]
pub struct ComponentInfo {
    /// `+k` for positive components, `-k` for negative ones (1-based).
    pub label: i32,
    pub size: usize,
    /// Sorted interior node ids.
    pub nodes: Vec<usize>,
    /// Whether the component is 8-adjacent to a domain boundary node.
    pub boundary_contact: bool,
    /// Whether the component's complement (within the padded lattice) is
    /// 8-connected, i.e. the component has no holes.
    pub simply_connected: bool,
}

/// Signed decomposition of a field: positive components (`u > tau`),
/// negative components (`u < -tau`) and the zero set (`|u| <= tau`).
#[derive(Debug)]
pub struct NodalDecomposition {
    domain: Arc<DiscreteDomain>,
    tau: f64,
    /// Per-node label: `+k`/`-k` component id, 0 for zero set and non-interior.
    labels: Vec<i32>,
    positive: Vec<ComponentInfo>,
    negative: Vec<ComponentInfo>,
    zero_set: Vec<usize>,
}

impl NodalDecomposition {
    pub fn domain(&self) -> &Arc<DiscreteDomain> {
        &self.domain
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    pub fn positive(&self) -> &[ComponentInfo] {
        &self.positive
    }

    pub fn negative(&self) -> &[ComponentInfo] {
        &self.negative
    }

    pub fn components(&self) -> impl Iterator<Item = &ComponentInfo> {
        self.positive.iter().chain(self.negative.iter())
    }

    pub fn zero_set(&self) -> &[usize] {
        &self.zero_set
    }

    pub fn counts(&self) -> (usize, usize) {
        (self.positive.len(), self.negative.len())
    }
}

/// Label the signed components of `u` at threshold `tau`.
pub fn extract_nodal_decomposition(
    domain: &Arc<DiscreteDomain>,
    u: &ScalarField,
    tau: f64,
) -> Result<NodalDecomposition, NodalError> {
    if !u.compatible(domain) {
        return Err(NodalError::ShapeMismatch);
    }
    if !(tau >= 0.0) {
        return Err(NodalError::NegativeTau(tau));
    }
    let n = domain.node_count();
    let mut labels = vec![0i32; n];
    let mut zero_set = Vec::new();
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    let mut visited = vec![false; n];

    // row-major scan keeps discovery order (and labels) deterministic
    for start in 0..n {
        if !domain.is_interior(start) || visited[start] {
            continue;
        }
        let v = u.values()[start];
        if v.abs() <= tau {
            visited[start] = true;
            zero_set.push(start);
            continue;
        }
        let positive_sign = v > tau;
        let label = if positive_sign {
            positive.len() as i32 + 1
        } else {
            -(negative.len() as i32 + 1)
        };
        let mut nodes = vec![start];
        visited[start] = true;
        labels[start] = label;
        let mut stack = vec![start];
        while let Some(id) = stack.pop() {
            for nid in domain.neighbors4(id) {
                if !domain.is_interior(nid) || visited[nid] {
                    continue;
                }
                let w = u.values()[nid];
                let same = if positive_sign { w > tau } else { w < -tau };
                if same {
                    visited[nid] = true;
                    labels[nid] = label;
                    nodes.push(nid);
                    stack.push(nid);
                }
            }
        }
        nodes.sort_unstable();
        let boundary_contact = nodes.iter().any(|&id| {
            domain
                .neighbors8(id)
                .any(|nid| domain.class(nid) == NodeClass::Boundary)
        });
        let simply_connected = complement_connected(domain, &nodes);
        let info = ComponentInfo {
            label,
            size: nodes.len(),
            nodes,
            boundary_contact,
            simply_connected,
        };
        if positive_sign {
            positive.push(info);
        } else {
            negative.push(info);
        }
    }

    Ok(NodalDecomposition {
        domain: domain.clone(),
        tau,
        labels,
        positive,
        negative,
        zero_set,
    })
}

/// Hole test: the complement of the component within the (margin-padded)
/// lattice is 8-connected iff the component encloses nothing.
fn complement_connected(domain: &DiscreteDomain, component: &[usize]) -> bool {
    let n = domain.node_count();
    let mut in_comp = vec![false; n];
    for &id in component {
        in_comp[id] = true;
    }
    // the lattice margin guarantees node 0 is outside every component
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut reached = 1usize;
    while let Some(id) = stack.pop() {
        for nid in domain.neighbors8(id) {
            if !seen[nid] && !in_comp[nid] {
                seen[nid] = true;
                reached += 1;
                stack.push(nid);
            }
        }
    }
    reached == n - component.len()
}

/// Verdict for one component's nodal line.
#[derive(Debug, Clone)]
pub struct NodalLineVerdict {
    pub label: i32,
    /// Number of 8-connected pieces of the component's interior nodal line.
    pub pieces: usize,
    pub pass: bool,
    /// A node of a line piece that fails to meet the boundary.
    pub witness: Option<usize>,
}

/// Check that each connected piece of each component's interior nodal line
/// meets the domain boundary (a consequence of the strong maximum principle
/// for true solutions; hand-built islands fail it).
pub fn nodal_lines_touch_boundary(
    decomp: &NodalDecomposition,
    domain: &DiscreteDomain,
) -> Result<Vec<NodalLineVerdict>, NodalError> {
    if !std::ptr::eq(decomp.domain().as_ref(), domain)
        && decomp.domain().node_count() != domain.node_count()
    {
        return Err(NodalError::ShapeMismatch);
    }
    let n = domain.node_count();
    let mut verdicts = Vec::new();
    for comp in decomp.components() {
        let mut in_comp = vec![false; n];
        for &id in &comp.nodes {
            in_comp[id] = true;
        }
        // interior nodes the component presses against: zero set or the
        // opposite sign, 4-adjacent to the component
        let mut line = vec![false; n];
        let mut line_nodes = Vec::new();
        for &id in &comp.nodes {
            for nid in domain.neighbors4(id) {
                if domain.is_interior(nid) && !in_comp[nid] && !line[nid] {
                    line[nid] = true;
                    line_nodes.push(nid);
                }
            }
        }
        line_nodes.sort_unstable();

        let mut seen = vec![false; n];
        let mut pieces = 0;
        let mut pass = true;
        let mut witness = None;
        for &start in &line_nodes {
            if seen[start] {
                continue;
            }
            pieces += 1;
            let mut stack = vec![start];
            seen[start] = true;
            let mut touches = false;
            let mut members = vec![start];
            while let Some(id) = stack.pop() {
                if domain
                    .neighbors8(id)
                    .any(|nid| domain.class(nid) == NodeClass::Boundary)
                {
                    touches = true;
                }
                for nid in domain.neighbors8(id) {
                    if line[nid] && !seen[nid] {
                        seen[nid] = true;
                        members.push(nid);
                        stack.push(nid);
                    }
                }
            }
            if !touches {
                pass = false;
                witness.get_or_insert(*members.iter().min().unwrap());
            }
        }
        verdicts.push(NodalLineVerdict {
            label: comp.label,
            pieces,
            pass,
            witness,
        });
    }
    Ok(verdicts)
}

/// Verdict of the nodal-count bound against the boundary data's relative
/// extrema.
#[derive(Debug, Clone)]
pub struct NodalCountVerdict {
    pub positive_components: usize,
    pub negative_components: usize,
    /// Relative maxima of g with plateau value above `tau`.
    pub maxima_above: usize,
    /// Relative minima of g with plateau value below `-tau`.
    pub minima_below: usize,
    pub pass: bool,
}

/// Count bound: positive components are at most the relative maxima of
/// g above the threshold, and symmetrically for negative ones. Constant
/// data above (below) the threshold counts as a single maximum (minimum).
pub fn check_nodal_count_bound(decomp: &NodalDecomposition, g: &BoundaryData) -> NodalCountVerdict {
    let tau = decomp.tau();
    let (maxima_above, minima_below) = thresholded_extrema(g, tau);
    let (pos, neg) = decomp.counts();
    NodalCountVerdict {
        positive_components: pos,
        negative_components: neg,
        maxima_above,
        minima_below,
        pass: pos <= maxima_above && neg <= minima_below,
    }
}

/// Relative extrema of cyclic data with plateau values filtered by `tau`;
/// constant cycles count as one extremum on their sign's side.
pub fn thresholded_extrema(g: &BoundaryData, tau: f64) -> (usize, usize) {
    let mut maxima = 0;
    let mut minima = 0;
    let mut start = 0;
    for &len in g.cycle_lengths() {
        let cycle = &g.values()[start..start + len];
        start += len;
        let plateaus = crate::geometry::collapse_plateaus(cycle);
        if plateaus.len() < 2 {
            let v = plateaus.first().copied().unwrap_or(0.0);
            if v > tau {
                maxima += 1;
            } else if v < -tau {
                minima += 1;
            }
            continue;
        }
        let n = plateaus.len();
        for k in 0..n {
            let prev = plateaus[(k + n - 1) % n];
            let next = plateaus[(k + 1) % n];
            let v = plateaus[k];
            if v > prev && v > next && v > tau {
                maxima += 1;
            } else if v < prev && v < next && v < -tau {
                minima += 1;
            }
        }
    }
    (maxima, minima)
}

/// The maximal set on which the field vanishes in the open sense: the union
/// of balls `B(x, r_x)` with `r_x >= 2h`, where `r_x` is the distance from a
/// below-threshold node to the nearest node that is non-interior or above
/// threshold.
#[derive(Debug)]
pub struct VanishingSet {
    /// Sorted interior node ids of the largest connected component of D.
    pub nodes: Vec<usize>,
    /// Per-node vanishing radius (distance to the nearest offender), parallel
    /// to `nodes`.
    pub radii: Vec<f64>,
    /// D contains a full lattice disk of radius >= 2h by construction.
    pub open: bool,
}

/// Compute the maximal vanishing set, or `None` when no node carries a full
/// `2h` lattice disk of below-threshold values (thin nodal lines do not).
pub fn maximal_vanishing_set(
    domain: &DiscreteDomain,
    u: &ScalarField,
    tau: f64,
) -> Result<Option<VanishingSet>, NodalError> {
    if !u.compatible(domain) {
        return Err(NodalError::ShapeMismatch);
    }
    if !(tau >= 0.0) {
        return Err(NodalError::NegativeTau(tau));
    }
    let n = domain.node_count();
    let nx = domain.nx();
    let ny = domain.ny();
    let h = domain.h();
    // squared lattice distance to the nearest offending node
    let offender =
        |id: usize| !domain.is_interior(id) || u.values()[id].abs() > tau;
    let d2 = squared_distance_transform(nx, ny, offender);

    let r_x = |id: usize| d2[id].sqrt() * h;
    let min_r = 2.0 * h;

    let mut in_d = vec![false; n];
    for id in 0..n {
        if !domain.is_interior(id) || u.values()[id].abs() > tau {
            continue;
        }
        let r = r_x(id);
        if r < min_r {
            continue;
        }
        // open ball fill around the qualifying node, in exact squared
        // lattice units so the offender node itself is never swept in
        let (ci, cj) = domain.ij(id);
        let r2 = d2[id];
        let reach = r2.sqrt().ceil() as i64;
        for dj in -reach..=reach {
            for di in -reach..=reach {
                let dist2 = (di * di + dj * dj) as f64;
                if dist2 >= r2 {
                    continue;
                }
                let i = ci as i64 + di;
                let j = cj as i64 + dj;
                if i < 0 || j < 0 || i as usize >= nx || j as usize >= ny {
                    continue;
                }
                in_d[j as usize * nx + i as usize] = true;
            }
        }
    }

    // largest 4-connected component of D
    let mut best: Vec<usize> = Vec::new();
    let mut seen = vec![false; n];
    for start in 0..n {
        if !in_d[start] || seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(id) = stack.pop() {
            for nid in domain.neighbors4(id) {
                if in_d[nid] && !seen[nid] {
                    seen[nid] = true;
                    comp.push(nid);
                    stack.push(nid);
                }
            }
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    if best.is_empty() {
        return Ok(None);
    }
    best.sort_unstable();
    let radii = best.iter().map(|&id| r_x(id)).collect();
    Ok(Some(VanishingSet {
        nodes: best,
        radii,
        open: true,
    }))
}

/// Exact squared Euclidean distance transform (in lattice units) to the
/// source set, by the two-pass lower-envelope method.
pub(crate) fn squared_distance_transform(
    nx: usize,
    ny: usize,
    is_source: impl Fn(usize) -> bool,
) -> Vec<f64> {
    const INF: f64 = 1e18;
    let mut grid = vec![INF; nx * ny];
    for (id, g) in grid.iter_mut().enumerate() {
        if is_source(id) {
            *g = 0.0;
        }
    }
    let mut tmp = vec![0.0; nx.max(ny)];
    // rows
    for j in 0..ny {
        let row = &mut grid[j * nx..(j + 1) * nx];
        dt_1d(row, &mut tmp[..nx]);
    }
    // columns
    let mut col = vec![0.0; ny];
    for i in 0..nx {
        for j in 0..ny {
            col[j] = grid[j * nx + i];
        }
        dt_1d(&mut col, &mut tmp[..ny]);
        for j in 0..ny {
            grid[j * nx + i] = col[j];
        }
    }
    grid
}

/// 1D squared distance transform via the parabola lower envelope.
fn dt_1d(f: &mut [f64], scratch: &mut [f64]) {
    let n = f.len();
    if n == 0 {
        return;
    }
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let mut s;
        loop {
            let p = v[k];
            s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64))
                / (2.0 * q as f64 - 2.0 * p as f64);
            if s <= z[k] {
                if k == 0 {
                    break;
                }
                k -= 1;
            } else {
                break;
            }
        }
        if s > z[k] {
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
        }
    }
    let mut k = 0usize;
    for (q, out) in scratch.iter_mut().enumerate().take(n) {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let d = q as f64 - v[k] as f64;
        *out = d * d + f[v[k]];
    }
    f.copy_from_slice(&scratch[..n]);
}

/// Outcome branch of the unique-continuation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniqueContinuationBranch {
    /// No open vanishing set exists.
    EmptyVanishingSet,
    /// The whole field is below `10 tau`: the solution vanishes identically.
    VanishesIdentically,
    /// An open vanishing set coexists with a non-vanishing field: a theorem
    /// violation for true solutions, or a discretization artifact.
    Violation,
}

#[derive(Debug, Clone)]
pub struct UniqueContinuationVerdict {
    pub branch: UniqueContinuationBranch,
    pub vanishing_nodes: usize,
    pub max_abs_u: f64,
    /// Whether the boundary data changes sign (a vanishing open set for a
    /// non-trivial solution forces this).
    pub g_changes_sign: bool,
    pub h: f64,
    pub tau: f64,
}

impl UniqueContinuationVerdict {
    pub fn passed(&self) -> bool {
        self.branch != UniqueContinuationBranch::Violation
    }
}

/// Pass iff the maximal vanishing set is empty or the solution vanishes
/// identically (`max |u| <= 10 tau`). Reports carry h and tau so refinement
/// studies can adjudicate artifacts.
pub fn check_unique_continuation(
    domain: &DiscreteDomain,
    u: &ScalarField,
    g: &BoundaryData,
    tau: f64,
) -> Result<UniqueContinuationVerdict, NodalError> {
    let vanishing = maximal_vanishing_set(domain, u, tau)?;
    let max_abs_u = domain
        .interior_nodes()
        .iter()
        .fold(0.0f64, |m, &id| m.max(u.values()[id].abs()));
    let g_changes_sign = g.min() < 0.0 && g.max() > 0.0;
    let (branch, vanishing_nodes) = match vanishing {
        None => (UniqueContinuationBranch::EmptyVanishingSet, 0),
        Some(set) => {
            if max_abs_u <= 10.0 * tau {
                (UniqueContinuationBranch::VanishesIdentically, set.nodes.len())
            } else {
                (UniqueContinuationBranch::Violation, set.nodes.len())
            }
        }
    };
    Ok(UniqueContinuationVerdict {
        branch,
        vanishing_nodes,
        max_abs_u,
        g_changes_sign,
        h: domain.h(),
        tau,
    })
}

/// Per-radius connectivity of the thresholded zero set within a ball.
#[derive(Debug, Clone)]
pub struct LocalZeroConnectivity {
    /// (radius, connected) per requested radius, in input order.
    pub verdicts: Vec<(f64, bool)>,
    /// Largest prefix radius up to which connectivity held (the empirical
    /// r_x of the theorem's hypothesis).
    pub empirical_r: Option<f64>,
}

/// For each radius, extract `{z in B_r(x): |u(z)| <= tau}` and test its
/// 8-connectivity. Empty sets count as connected (no zeros near x means the
/// hypothesis is vacuous there).
pub fn check_local_zero_connectivity(
    domain: &DiscreteDomain,
    u: &ScalarField,
    x: Point,
    radii: &[f64],
    tau: f64,
) -> Result<LocalZeroConnectivity, NodalError> {
    if !u.compatible(domain) {
        return Err(NodalError::ShapeMismatch);
    }
    let mut verdicts = Vec::new();
    for &r in radii {
        let ball = domain.nodes_in_ball(x, r);
        if ball.iter().any(|&id| !domain.is_interior(id)) {
            return Err(NodalError::BallNotContained { x: x.x, y: x.y, r });
        }
        let zero: Vec<usize> = ball
            .into_iter()
            .filter(|&id| u.values()[id].abs() <= tau)
            .collect();
        verdicts.push((r, set_is_8_connected(domain, &zero)));
    }
    let mut empirical_r = None;
    for &(r, ok) in &verdicts {
        if ok {
            empirical_r = Some(r);
        } else {
            break;
        }
    }
    Ok(LocalZeroConnectivity {
        verdicts,
        empirical_r,
    })
}

fn set_is_8_connected(domain: &DiscreteDomain, set: &[usize]) -> bool {
    if set.len() <= 1 {
        return true;
    }
    let mut members = std::collections::HashSet::with_capacity(set.len());
    for &id in set {
        members.insert(id);
    }
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![set[0]];
    seen.insert(set[0]);
    while let Some(id) = stack.pop() {
        for nid in domain.neighbors8(id) {
            if members.contains(&nid) && seen.insert(nid) {
                stack.push(nid);
            }
        }
    }
    seen.len() == set.len()
}

/// Decomposition completeness: zero set plus all components cover the
/// interior exactly.
pub fn decomposition_is_complete(decomp: &NodalDecomposition) -> bool {
    let total: usize = decomp.components().map(|c| c.size).sum();
    total + decomp.zero_set().len() == decomp.domain().interior_nodes().len()
}
