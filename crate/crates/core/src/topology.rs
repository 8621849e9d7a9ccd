//! Plane-topology toolkit: ε-chains, ε-connectivity, ball corridors and
//! lattice paths.
//!
//! The ε-graph on a finite point set joins pairs at distance `<= eps`
//! (closed condition, compared through squared distances so the graph is
//! reproducible). Corridors widen a chain into the union of balls of radius
//! `(3/2) eps` around its points; the 3/2 factor is what makes consecutive
//! balls overlap, which is why a path always exists inside.

use thiserror::Error;

use crate::geometry::{DiscreteDomain, Point};

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("point ({x}, {y}) is not a member of the set")]
    PointNotInSet { x: f64, y: f64 },
    #[error("eps must be positive, got {0}")]
    InvalidEps(f64),
    #[error("point set is empty")]
    EmptySet,
    #[error("chain gap {gap} between points {index} and {next} exceeds eps {eps}")]
    GapTooWide {
        index: usize,
        next: usize,
        gap: f64,
        eps: f64,
    },
    #[error("corridor ball {index} around ({x}, {y}) leaves the domain")]
    BallEscapesDomain { index: usize, x: f64, y: f64 },
    #[error("no region node within h/2 of ({x}, {y})")]
    SnapFailure { x: f64, y: f64 },
}

/// A finite point sequence with consecutive gaps `<= eps`.
#[derive(Debug, Clone)]
pub struct EpsChain {
    points: Vec<Point>,
    eps: f64,
}

impl EpsChain {
    /// Validates the gap invariant.
    pub fn new(points: Vec<Point>, eps: f64) -> Result<Self, TopologyError> {
        if !(eps > 0.0) {
            return Err(TopologyError::InvalidEps(eps));
        }
        for k in 0..points.len().saturating_sub(1) {
            let gap2 = points[k].dist2(points[k + 1]);
            if gap2 > eps * eps {
                return Err(TopologyError::GapTooWide {
                    index: k,
                    next: k + 1,
                    gap: gap2.sqrt(),
                    eps,
                });
            }
        }
        Ok(EpsChain { points, eps })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn find_point(set: &[Point], p: Point) -> Option<usize> {
    set.iter().position(|q| q.x == p.x && q.y == p.y)
}

/// Shortest-hop ε-chain between two members of `set`, or `None` when they
/// sit in different components of the ε-graph.
pub fn eps_chain_between(
    set: &[Point],
    x: Point,
    y: Point,
    eps: f64,
) -> Result<Option<EpsChain>, TopologyError> {
    if !(eps > 0.0) {
        return Err(TopologyError::InvalidEps(eps));
    }
    let start = find_point(set, x).ok_or(TopologyError::PointNotInSet { x: x.x, y: x.y })?;
    let goal = find_point(set, y).ok_or(TopologyError::PointNotInSet { x: y.x, y: y.y })?;
    let n = set.len();
    let eps2 = eps * eps;
    let mut prev = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    prev[start] = start;
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        if cur == goal {
            break;
        }
        for next in 0..n {
            if prev[next] == usize::MAX && set[cur].dist2(set[next]) <= eps2 {
                prev[next] = cur;
                queue.push_back(next);
            }
        }
    }
    if prev[goal] == usize::MAX {
        return Ok(None);
    }
    let mut idx = goal;
    let mut chain = vec![set[idx]];
    while idx != start {
        idx = prev[idx];
        chain.push(set[idx]);
    }
    chain.reverse();
    Ok(Some(EpsChain::new(chain, eps).expect("BFS edges satisfy the gap bound")))
}

/// Whether the ε-graph on `set` has a single component.
pub fn is_eps_connected(set: &[Point], eps: f64) -> Result<bool, TopologyError> {
    if !(eps > 0.0) {
        return Err(TopologyError::InvalidEps(eps));
    }
    if set.is_empty() {
        return Err(TopologyError::EmptySet);
    }
    Ok(eps_graph_components(set, eps) == 1)
}

/// Number of components of the ε-graph (union-find with canonical minimum
/// roots, so the result is independent of scan order).
pub fn eps_graph_components(set: &[Point], eps: f64) -> usize {
    let n = set.len();
    let eps2 = eps * eps;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if set[i].dist2(set[j]) <= eps2 {
                let ri = find(&mut parent, i);
                let rj = find(&mut parent, j);
                if ri != rj {
                    // canonical root: the smaller index
                    let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
                    parent[hi] = lo;
                }
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

/// Component count per eps over an ascending grid.
pub fn connectivity_vs_eps_profile(set: &[Point], eps_grid: &[f64]) -> Vec<(f64, usize)> {
    eps_grid
        .iter()
        .map(|&eps| (eps, eps_graph_components(set, eps)))
        .collect()
}

/// A set of interior lattice nodes (4-connectivity convention).
#[derive(Debug, Clone)]
pub struct Region {
    /// Sorted interior node ids.
    pub nodes: Vec<usize>,
}

impl Region {
    pub fn contains(&self, id: usize) -> bool {
        self.nodes.binary_search(&id).is_ok()
    }
}

/// Discretize the corridor `U = union of B_{(3/2) eps}(a_i)` over the chain
/// points: all interior nodes within open distance `(3/2) eps` of a chain
/// point. Errors when some ball pokes out of the domain.
pub fn chain_corridor(
    chain: &EpsChain,
    domain: &DiscreteDomain,
) -> Result<Region, TopologyError> {
    let radius = 1.5 * chain.eps();
    let r2 = radius * radius;
    let mut marked = vec![false; domain.node_count()];
    for (index, &a) in chain.points().iter().enumerate() {
        for id in domain.nodes_in_ball(a, radius) {
            if domain.coord(id).dist2(a) >= r2 {
                continue; // closed-ball helper, open corridor
            }
            if !domain.is_interior(id) {
                return Err(TopologyError::BallEscapesDomain {
                    index,
                    x: a.x,
                    y: a.y,
                });
            }
            marked[id] = true;
        }
    }
    let nodes: Vec<usize> = (0..domain.node_count()).filter(|&id| marked[id]).collect();
    Ok(Region { nodes })
}

/// Shortest 4-connected lattice path inside the region between the nodes
/// nearest to `x` and `y`, or `None` when they lie in different components.
/// Snapping accepts nodes within half a cell diagonal (h/sqrt(2)), the
/// farthest any point sits from its nearest lattice node, so points interior
/// to a region always snap.
pub fn path_in_region(
    region: &Region,
    domain: &DiscreteDomain,
    x: Point,
    y: Point,
) -> Result<Option<Vec<usize>>, TopologyError> {
    let tol = domain.h() * std::f64::consts::FRAC_1_SQRT_2 * (1.0 + 1e-9);
    let snap = |p: Point| -> Result<usize, TopologyError> {
        let (id, dist) = domain.nearest_node(p);
        if dist > tol || !region.contains(id) {
            // the nearest lattice node may be outside the region; scan for
            // the closest region node within the snap tolerance
            let mut best: Option<(usize, f64)> = None;
            for &rid in &region.nodes {
                let d = domain.coord(rid).dist(p);
                if d <= tol && best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((rid, d));
                }
            }
            return best
                .map(|(id, _)| id)
                .ok_or(TopologyError::SnapFailure { x: p.x, y: p.y });
        }
        Ok(id)
    };
    let start = snap(x)?;
    let goal = snap(y)?;
    let n = domain.node_count();
    let mut prev = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    prev[start] = start;
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        if cur == goal {
            break;
        }
        for nid in domain.neighbors4(cur) {
            if prev[nid] == usize::MAX && region.contains(nid) {
                prev[nid] = cur;
                queue.push_back(nid);
            }
        }
    }
    if prev[goal] == usize::MAX {
        return Ok(None);
    }
    let mut path = vec![goal];
    let mut idx = goal;
    while idx != start {
        idx = prev[idx];
        path.push(idx);
    }
    path.reverse();
    Ok(Some(path))
}

/// Read a point set from CSV text with `x,y` rows (an optional `x,y` header
/// line is skipped).
pub fn read_points_csv(text: &str) -> Result<Vec<Point>, String> {
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with('x')) {
            continue;
        }
        let mut parts = line.split(',');
        let x = parts
            .next()
            .and_then(|t| t.trim().parse::<f64>().ok())
            .ok_or_else(|| format!("line {}: bad x in '{}'", lineno + 1, line))?;
        let y = parts
            .next()
            .and_then(|t| t.trim().parse::<f64>().ok())
            .ok_or_else(|| format!("line {}: bad y in '{}'", lineno + 1, line))?;
        points.push(Point::new(x, y));
    }
    Ok(points)
}

/// Serialize a connectivity profile as CSV (`eps,components`).
pub fn profile_csv(profile: &[(f64, usize)]) -> String {
    let mut out = String::from("eps,components\n");
    for &(eps, components) in profile {
        out.push_str(&format!("{},{}\n", eps, components));
    }
    out
}

/// Whether a region is 4-connected (empty and singleton regions count).
pub fn region_is_connected(region: &Region, domain: &DiscreteDomain) -> bool {
    if region.nodes.len() <= 1 {
        return true;
    }
    let start = region.nodes[0];
    let mut seen = std::collections::HashSet::new();
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(id) = stack.pop() {
        for nid in domain.neighbors4(id) {
            if region.contains(nid) && seen.insert(nid) {
                stack.push(nid);
            }
        }
    }
    seen.len() == region.nodes.len()
}
