//! Grid discretizations of bounded planar Jordan domains.
//!
//! A [`DiscreteDomain`] is a square lattice with spacing `h` whose nodes are
//! classified interior / boundary / exterior. Interior nodes are the ones
//! strictly inside the continuous domain; boundary nodes are the ring of
//! non-interior nodes 4-adjacent to an interior node, ordered into closed
//! cycles by marching along the 8-connected ring. The lattice is triangulated
//! (every cell split along the same diagonal) for the piecewise-linear
//! discretization used by the solver modules.

use thiserror::Error;

/// A position in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist2(&self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: Point) -> f64 {
        self.dist2(other).sqrt()
    }
}

/// A planar vector (gradients, fluxes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn zero() -> Self {
        Vec2 { x: 0.0, y: 0.0 }
    }

    pub fn dot(&self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm2(&self) -> f64 {
        self.dot(*self)
    }

    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn scale(&self, t: f64) -> Vec2 {
        Vec2::new(self.x * t, self.y * t)
    }
}

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("grid spacing {h} too coarse for this domain: {detail}")]
    TooCoarse { h: f64, detail: String },
    #[error("polygon is self-intersecting")]
    SelfIntersectingPolygon,
    #[error("polygon needs at least 3 vertices, got {0}")]
    DegeneratePolygon(usize),
    #[error("lattice interior is disconnected ({components} components); refine h or fix the domain")]
    DisconnectedInterior { components: usize },
    #[error("boundary ring does not form simple closed cycles: {detail}")]
    BoundaryNotCyclic { detail: String },
    #[error("expected {expected} boundary cycle(s), found {found}")]
    WrongCycleCount { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("boundary data length {got} does not match boundary node count {expected}")]
    BoundaryDataLength { got: usize, expected: usize },
}

/// Node classification on the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    Exterior,
    Interior,
    Boundary,
}

/// Which continuous domain the lattice discretizes.
#[derive(Debug, Clone)]
pub enum DomainKind {
    Disk { radius: f64 },
    Polygon { vertices: Vec<Point> },
    Annulus { r_inner: f64, r_outer: f64 },
}

/// One triangle of the lattice triangulation. `nodes` are lattice node ids;
/// `upper` selects which half of the cell (the split diagonal runs from the
/// cell's lower-left to its upper-right corner).
#[derive(Debug, Clone, Copy)]
pub struct Tri {
    pub nodes: [u32; 3],
    pub upper: bool,
}

impl Tri {
    /// Reference gradients of the three nodal hat functions, scaled by 1/h.
    pub fn grad_phi(&self, h: f64) -> [Vec2; 3] {
        let s = 1.0 / h;
        if self.upper {
            [
                Vec2::new(0.0, -s),
                Vec2::new(s, 0.0),
                Vec2::new(-s, s),
            ]
        } else {
            [
                Vec2::new(-s, 0.0),
                Vec2::new(s, -s),
                Vec2::new(0.0, s),
            ]
        }
    }

    /// Constant gradient of the linear interpolant of nodal values `u`.
    pub fn grad_u(&self, h: f64, u: &[f64]) -> Vec2 {
        let u0 = u[self.nodes[0] as usize];
        let u1 = u[self.nodes[1] as usize];
        let u2 = u[self.nodes[2] as usize];
        if self.upper {
            Vec2::new((u1 - u2) / h, (u2 - u0) / h)
        } else {
            Vec2::new((u1 - u0) / h, (u2 - u1) / h)
        }
    }
}

/// Grid discretization of a bounded planar domain.
///
/// Invariants established at construction:
/// - every 4-neighbor of an interior node is interior or boundary,
/// - the interior node set is 4-connected,
/// - boundary nodes form closed cycles, each visited exactly once by the
///   stored traversal (one cycle for Jordan domains),
/// - every boundary node is 8-adjacent to an interior and an exterior node.
#[derive(Debug)]
pub struct DiscreteDomain {
    h: f64,
    nx: usize,
    ny: usize,
    // lattice index offsets: node (i, j) sits at ((ix0+i)*h, (iy0+j)*h)
    ix0: i64,
    iy0: i64,
    class: Vec<NodeClass>,
    interior: Vec<usize>,
    boundary_cycles: Vec<Vec<usize>>,
    boundary_nodes: Vec<usize>,
    triangles: Vec<Tri>,
    kind: DomainKind,
}

const DIRS8: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

impl DiscreteDomain {
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn node_count(&self) -> usize {
        self.nx * self.ny
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn id(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn ij(&self, id: usize) -> (usize, usize) {
        (id % self.nx, id / self.nx)
    }

    pub fn coord(&self, id: usize) -> Point {
        let (i, j) = self.ij(id);
        Point::new(
            (self.ix0 + i as i64) as f64 * self.h,
            (self.iy0 + j as i64) as f64 * self.h,
        )
    }

    pub fn class(&self, id: usize) -> NodeClass {
        self.class[id]
    }

    pub fn is_interior(&self, id: usize) -> bool {
        self.class[id] == NodeClass::Interior
    }

    pub fn interior_nodes(&self) -> &[usize] {
        &self.interior
    }

    /// Boundary nodes in cycle order (cycles concatenated).
    pub fn boundary_nodes(&self) -> &[usize] {
        &self.boundary_nodes
    }

    pub fn boundary_cycles(&self) -> &[Vec<usize>] {
        &self.boundary_cycles
    }

    /// The unique boundary cycle of a Jordan domain.
    pub fn boundary_cycle(&self) -> Result<&[usize], GeometryError> {
        if self.boundary_cycles.len() == 1 {
            Ok(&self.boundary_cycles[0])
        } else {
            Err(GeometryError::WrongCycleCount {
                expected: 1,
                found: self.boundary_cycles.len(),
            })
        }
    }

    pub fn triangles(&self) -> &[Tri] {
        &self.triangles
    }

    /// Centroid of a triangle (for pointwise coefficient evaluation).
    pub fn tri_centroid(&self, tri: &Tri) -> Point {
        let a = self.coord(tri.nodes[0] as usize);
        let b = self.coord(tri.nodes[1] as usize);
        let c = self.coord(tri.nodes[2] as usize);
        Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }

    pub fn tri_area(&self) -> f64 {
        self.h * self.h / 2.0
    }

    /// 4-neighbors of a node, in-lattice only.
    pub fn neighbors4(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = self.ij(id);
        let nx = self.nx;
        let ny = self.ny;
        [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .filter_map(move |(di, dj)| {
                let ni = i as i64 + di;
                let nj = j as i64 + dj;
                if ni >= 0 && nj >= 0 && (ni as usize) < nx && (nj as usize) < ny {
                    Some(nj as usize * nx + ni as usize)
                } else {
                    None
                }
            })
    }

    /// 8-neighbors of a node, in-lattice only.
    pub fn neighbors8(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = self.ij(id);
        let nx = self.nx;
        let ny = self.ny;
        DIRS8.into_iter().filter_map(move |(di, dj)| {
            let ni = i as i64 + di;
            let nj = j as i64 + dj;
            if ni >= 0 && nj >= 0 && (ni as usize) < nx && (nj as usize) < ny {
                Some(nj as usize * nx + ni as usize)
            } else {
                None
            }
        })
    }

    /// Maximum extent of the classified (non-exterior) node set.
    pub fn diameter(&self) -> f64 {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for id in 0..self.node_count() {
            if self.class[id] != NodeClass::Exterior {
                let p = self.coord(id);
                lo.x = lo.x.min(p.x);
                lo.y = lo.y.min(p.y);
                hi.x = hi.x.max(p.x);
                hi.y = hi.y.max(p.y);
            }
        }
        (hi.x - lo.x).max(hi.y - lo.y)
    }

    /// Node ids whose coordinates lie in the closed ball `|p - center| <= r`.
    pub fn nodes_in_ball(&self, center: Point, r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        let r2 = r * r;
        let i_lo = (((center.x - r) / self.h).floor() as i64 - self.ix0).max(0) as usize;
        let i_hi = ((((center.x + r) / self.h).ceil() as i64 - self.ix0).max(0) as usize)
            .min(self.nx - 1);
        let j_lo = (((center.y - r) / self.h).floor() as i64 - self.iy0).max(0) as usize;
        let j_hi = ((((center.y + r) / self.h).ceil() as i64 - self.iy0).max(0) as usize)
            .min(self.ny - 1);
        for j in j_lo..=j_hi {
            for i in i_lo..=i_hi {
                let id = self.id(i, j);
                if self.coord(id).dist2(center) <= r2 {
                    out.push(id);
                }
            }
        }
        out
    }

    /// Nearest node to a point, with its distance.
    pub fn nearest_node(&self, p: Point) -> (usize, f64) {
        let i = ((p.x / self.h).round() as i64 - self.ix0).clamp(0, self.nx as i64 - 1) as usize;
        let j = ((p.y / self.h).round() as i64 - self.iy0).clamp(0, self.ny as i64 - 1) as usize;
        let id = self.id(i, j);
        (id, self.coord(id).dist(p))
    }
}

/// Dirichlet data on the boundary nodes, stored in boundary-cycle order
/// (parallel to [`DiscreteDomain::boundary_nodes`]).
#[derive(Debug, Clone)]
pub struct BoundaryData {
    values: Vec<f64>,
    cycle_lengths: Vec<usize>,
}

impl BoundaryData {
    pub fn from_cycle_values(
        domain: &DiscreteDomain,
        values: Vec<f64>,
    ) -> Result<Self, GeometryError> {
        if values.len() != domain.boundary_nodes().len() {
            return Err(GeometryError::BoundaryDataLength {
                got: values.len(),
                expected: domain.boundary_nodes().len(),
            });
        }
        Ok(BoundaryData {
            values,
            cycle_lengths: domain.boundary_cycles().iter().map(|c| c.len()).collect(),
        })
    }

    /// Evaluate a function of position at every boundary node.
    pub fn from_fn(domain: &DiscreteDomain, f: impl Fn(Point) -> f64) -> Self {
        let values = domain
            .boundary_nodes()
            .iter()
            .map(|&id| f(domain.coord(id)))
            .collect();
        BoundaryData {
            values,
            cycle_lengths: domain.boundary_cycles().iter().map(|c| c.len()).collect(),
        }
    }

    pub fn constant(domain: &DiscreteDomain, c: f64) -> Self {
        Self::from_fn(domain, |_| c)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cycle_lengths(&self) -> &[usize] {
        &self.cycle_lengths
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Count relative maxima and minima of cyclic boundary data.
///
/// Runs of equal consecutive values collapse to one plateau (including the
/// wrap-around join); a plateau is a relative maximum iff both cyclic
/// neighbors are strictly smaller, a minimum symmetrically. Constant data
/// has no relative extrema. Multi-cycle domains are counted per cycle and
/// summed.
pub fn count_relative_extrema(g: &BoundaryData) -> (usize, usize) {
    let mut maxima = 0;
    let mut minima = 0;
    let mut start = 0;
    for &len in &g.cycle_lengths {
        let (ma, mi) = count_relative_extrema_cyclic(&g.values[start..start + len]);
        maxima += ma;
        minima += mi;
        start += len;
    }
    (maxima, minima)
}

/// Plateau-collapsed extrema count on a single cyclic value sequence.
pub fn count_relative_extrema_cyclic(values: &[f64]) -> (usize, usize) {
    let plateaus = collapse_plateaus(values);
    if plateaus.len() < 2 {
        return (0, 0);
    }
    let n = plateaus.len();
    let mut maxima = 0;
    let mut minima = 0;
    for k in 0..n {
        let prev = plateaus[(k + n - 1) % n];
        let next = plateaus[(k + 1) % n];
        let v = plateaus[k];
        if v > prev && v > next {
            maxima += 1;
        } else if v < prev && v < next {
            minima += 1;
        }
    }
    (maxima, minima)
}

/// Collapse runs of equal consecutive values on a cycle, merging across the
/// wrap-around. A constant cycle collapses to a single plateau.
pub(crate) fn collapse_plateaus(values: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &v in values {
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Lattice disk domain centered at the origin: interior nodes have
/// `|x| < radius`, boundary nodes are the 4-adjacent outside ring.
pub fn build_disk_domain(radius: f64, h: f64) -> Result<DiscreteDomain, GeometryError> {
    if !(radius > 0.0) || !(h > 0.0) {
        return Err(GeometryError::InvalidParam(
            "radius and h must be positive".into(),
        ));
    }
    if h >= radius / 4.0 {
        return Err(GeometryError::TooCoarse {
            h,
            detail: format!("need h < radius/4 = {}", radius / 4.0),
        });
    }
    let r2 = radius * radius;
    build_domain(
        (-radius, radius, -radius, radius),
        h,
        |p| p.x * p.x + p.y * p.y < r2,
        DomainKind::Disk { radius },
        Some(1),
    )
}

/// Lattice annulus `r_inner < |x| < r_outer` (not a Jordan domain; used to
/// exercise the solver against radial p-harmonic profiles).
pub fn build_annulus_domain(
    r_inner: f64,
    r_outer: f64,
    h: f64,
) -> Result<DiscreteDomain, GeometryError> {
    if !(0.0 < r_inner && r_inner < r_outer) {
        return Err(GeometryError::InvalidParam(
            "need 0 < r_inner < r_outer".into(),
        ));
    }
    if h >= (r_outer - r_inner) / 4.0 {
        return Err(GeometryError::TooCoarse {
            h,
            detail: format!("need h < (r_outer - r_inner)/4 = {}", (r_outer - r_inner) / 4.0),
        });
    }
    let ri2 = r_inner * r_inner;
    let ro2 = r_outer * r_outer;
    build_domain(
        (-r_outer, r_outer, -r_outer, r_outer),
        h,
        |p| {
            let d2 = p.x * p.x + p.y * p.y;
            d2 > ri2 && d2 < ro2
        },
        DomainKind::Annulus { r_inner, r_outer },
        None,
    )
}

/// Lattice domain for a simple closed polygon. Nodes strictly inside are
/// interior; nodes exactly on an edge are not.
pub fn build_polygon_domain(
    vertices: &[Point],
    h: f64,
) -> Result<DiscreteDomain, GeometryError> {
    if vertices.len() < 3 {
        return Err(GeometryError::DegeneratePolygon(vertices.len()));
    }
    if polygon_self_intersects(vertices) {
        return Err(GeometryError::SelfIntersectingPolygon);
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for v in vertices {
        xmin = xmin.min(v.x);
        xmax = xmax.max(v.x);
        ymin = ymin.min(v.y);
        ymax = ymax.max(v.y);
    }
    let min_extent = (xmax - xmin).min(ymax - ymin);
    if !(h > 0.0) {
        return Err(GeometryError::InvalidParam("h must be positive".into()));
    }
    if h >= min_extent / 4.0 {
        return Err(GeometryError::TooCoarse {
            h,
            detail: format!("need h < min bbox extent / 4 = {}", min_extent / 4.0),
        });
    }
    let verts = vertices.to_vec();
    build_domain(
        (xmin, xmax, ymin, ymax),
        h,
        |p| point_strictly_in_polygon(p, &verts),
        DomainKind::Polygon {
            vertices: vertices.to_vec(),
        },
        Some(1),
    )
}

fn build_domain(
    bbox: (f64, f64, f64, f64),
    h: f64,
    inside: impl Fn(Point) -> bool,
    kind: DomainKind,
    expected_cycles: Option<usize>,
) -> Result<DiscreteDomain, GeometryError> {
    let (xmin, xmax, ymin, ymax) = bbox;
    // two-cell margin so boundary rings never touch the lattice edge
    let ix0 = (xmin / h).floor() as i64 - 2;
    let ix1 = (xmax / h).ceil() as i64 + 2;
    let iy0 = (ymin / h).floor() as i64 - 2;
    let iy1 = (ymax / h).ceil() as i64 + 2;
    let nx = (ix1 - ix0 + 1) as usize;
    let ny = (iy1 - iy0 + 1) as usize;

    let mut class = vec![NodeClass::Exterior; nx * ny];
    let coord = |i: usize, j: usize| {
        Point::new((ix0 + i as i64) as f64 * h, (iy0 + j as i64) as f64 * h)
    };
    let mut interior = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            if inside(coord(i, j)) {
                class[j * nx + i] = NodeClass::Interior;
                interior.push(j * nx + i);
            }
        }
    }
    if interior.len() < 4 {
        return Err(GeometryError::TooCoarse {
            h,
            detail: format!("only {} interior nodes", interior.len()),
        });
    }

    // boundary ring: non-interior 8-neighbors of interior nodes (the full
    // 8-ring closes every interior hat-function patch and covers lattice-
    // aligned corners exactly)
    for j in 0..ny {
        for i in 0..nx {
            if class[j * nx + i] != NodeClass::Interior {
                continue;
            }
            for (di, dj) in DIRS8 {
                let ni = (i as i64 + di) as usize;
                let nj = (j as i64 + dj) as usize;
                let nid = nj * nx + ni;
                if class[nid] == NodeClass::Exterior {
                    class[nid] = NodeClass::Boundary;
                }
            }
        }
    }

    // interior connectivity (the continuous domain is connected; a lattice
    // interior split into pieces means h failed to resolve it)
    let components = count_components4(&class, nx, ny, NodeClass::Interior);
    if components != 1 {
        return Err(GeometryError::DisconnectedInterior { components });
    }

    // every boundary node of a Jordan domain must see both sides of the curve
    for j in 0..if expected_cycles.is_some() { ny } else { 0 } {
        for i in 0..nx {
            let id = j * nx + i;
            if class[id] != NodeClass::Boundary {
                continue;
            }
            let mut has_ext = false;
            for (di, dj) in DIRS8 {
                let ni = i as i64 + di;
                let nj = j as i64 + dj;
                if ni < 0 || nj < 0 || ni as usize >= nx || nj as usize >= ny {
                    has_ext = true;
                    continue;
                }
                if class[nj as usize * nx + ni as usize] == NodeClass::Exterior {
                    has_ext = true;
                }
            }
            if !has_ext {
                return Err(GeometryError::TooCoarse {
                    h,
                    detail: format!(
                        "boundary node ({}, {}) has no exterior neighbor; the ring is pinched",
                        i, j
                    ),
                });
            }
        }
    }

    let boundary_cycles = if let Some(expected) = expected_cycles {
        let cycles = trace_boundary_cycles(&class, nx, ny, ix0, iy0, h)?;
        if cycles.len() != expected {
            return Err(GeometryError::WrongCycleCount {
                expected,
                found: cycles.len(),
            });
        }
        cycles
    } else {
        // non-Jordan test domains: boundary components, not traced cycles
        boundary_components(&class, nx, ny)
    };
    let boundary_nodes: Vec<usize> = boundary_cycles.iter().flatten().copied().collect();

    // triangulation: all three corners classified, and either an interior
    // corner (closes interior hat-function patches) or centroid inside the
    // continuous domain (covers lattice-aligned corners without dragging in
    // exterior slivers)
    let mut triangles = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let n00 = (j * nx + i) as u32;
            let n10 = (j * nx + i + 1) as u32;
            let n01 = ((j + 1) * nx + i) as u32;
            let n11 = ((j + 1) * nx + i + 1) as u32;
            let ok = |n: u32| class[n as usize] != NodeClass::Exterior;
            let int = |n: u32| class[n as usize] == NodeClass::Interior;
            let centroid = |a: u32, b: u32, c: u32| {
                let pts = [a, b, c].map(|n| {
                    let (pi, pj) = ((n as usize) % nx, (n as usize) / nx);
                    ((ix0 + pi as i64) as f64 * h, (iy0 + pj as i64) as f64 * h)
                });
                Point::new(
                    (pts[0].0 + pts[1].0 + pts[2].0) / 3.0,
                    (pts[0].1 + pts[1].1 + pts[2].1) / 3.0,
                )
            };
            if ok(n00) && ok(n10) && ok(n11) {
                let keep = int(n00) || int(n10) || int(n11) || inside(centroid(n00, n10, n11));
                if keep {
                    triangles.push(Tri {
                        nodes: [n00, n10, n11],
                        upper: false,
                    });
                }
            }
            if ok(n00) && ok(n11) && ok(n01) {
                let keep = int(n00) || int(n11) || int(n01) || inside(centroid(n00, n11, n01));
                if keep {
                    triangles.push(Tri {
                        nodes: [n00, n11, n01],
                        upper: true,
                    });
                }
            }
        }
    }

    Ok(DiscreteDomain {
        h,
        nx,
        ny,
        ix0,
        iy0,
        class,
        interior,
        boundary_cycles,
        boundary_nodes,
        triangles,
        kind,
    })
}

fn count_components4(class: &[NodeClass], nx: usize, ny: usize, which: NodeClass) -> usize {
    let mut seen = vec![false; nx * ny];
    let mut components = 0;
    let mut stack = Vec::new();
    for start in 0..nx * ny {
        if class[start] != which || seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(id) = stack.pop() {
            let (i, j) = (id % nx, id / nx);
            for (di, dj) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                let ni = i as i64 + di;
                let nj = j as i64 + dj;
                if ni < 0 || nj < 0 || ni as usize >= nx || nj as usize >= ny {
                    continue;
                }
                let nid = nj as usize * nx + ni as usize;
                if class[nid] == which && !seen[nid] {
                    seen[nid] = true;
                    stack.push(nid);
                }
            }
        }
    }
    components
}

/// Boundary nodes grouped into 8-connected components (id-sorted), for
/// domains whose rings are not traced into cycles.
fn boundary_components(class: &[NodeClass], nx: usize, ny: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; nx * ny];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..nx * ny {
        if class[start] != NodeClass::Boundary || seen[start] {
            continue;
        }
        let mut nodes = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(id) = stack.pop() {
            let (i, j) = (id % nx, id / nx);
            for (di, dj) in DIRS8 {
                let ni = i as i64 + di;
                let nj = j as i64 + dj;
                if ni < 0 || nj < 0 || ni as usize >= nx || nj as usize >= ny {
                    continue;
                }
                let nid = nj as usize * nx + ni as usize;
                if class[nid] == NodeClass::Boundary && !seen[nid] {
                    seen[nid] = true;
                    nodes.push(nid);
                    stack.push(nid);
                }
            }
        }
        nodes.sort_unstable();
        comps.push(nodes);
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Trace every 8-connected component of the boundary ring into a closed
/// cycle by Moore-neighbor marching (scan the 8-neighborhood from the last
/// background pixel onward; the first classified hit is provably a ring
/// node). Each cycle is validated to visit its component exactly once,
/// normalized counterclockwise, and rotated to start at its smallest node id.
fn trace_boundary_cycles(
    class: &[NodeClass],
    nx: usize,
    ny: usize,
    ix0: i64,
    iy0: i64,
    h: f64,
) -> Result<Vec<Vec<usize>>, GeometryError> {
    let is_ring = |id: usize| class[id] == NodeClass::Boundary;
    let in_domain = |id: usize| class[id] != NodeClass::Exterior;

    // split ring into 8-connected components
    let mut comp = vec![usize::MAX; nx * ny];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..nx * ny {
        if !is_ring(start) || comp[start] != usize::MAX {
            continue;
        }
        let label = comps.len();
        let mut nodes = vec![start];
        comp[start] = label;
        let mut stack = vec![start];
        while let Some(id) = stack.pop() {
            let (i, j) = (id % nx, id / nx);
            for (di, dj) in DIRS8 {
                let ni = i as i64 + di;
                let nj = j as i64 + dj;
                if ni < 0 || nj < 0 || ni as usize >= nx || nj as usize >= ny {
                    continue;
                }
                let nid = nj as usize * nx + ni as usize;
                if is_ring(nid) && comp[nid] == usize::MAX {
                    comp[nid] = label;
                    nodes.push(nid);
                    stack.push(nid);
                }
            }
        }
        comps.push(nodes);
    }

    let mut cycles = Vec::new();
    for nodes in &comps {
        let start = *nodes.iter().min().unwrap();
        let (si, sj) = (start % nx, start / nx);
        // initial backtrack: first exterior 8-neighbor in scan order
        let mut back_dir = None;
        for (k, (di, dj)) in DIRS8.iter().enumerate() {
            let ni = si as i64 + di;
            let nj = sj as i64 + dj;
            if ni < 0 || nj < 0 || ni as usize >= nx || nj as usize >= ny {
                back_dir = Some(k);
                break;
            }
            if class[nj as usize * nx + ni as usize] == NodeClass::Exterior {
                back_dir = Some(k);
                break;
            }
        }
        let back0 = back_dir.expect("boundary node with exterior neighbor");
        let _ = back0;

        let mut cycle = Vec::new();
        let mut cur = start;
        let mut back = back0;
        let limit = 4 * nodes.len() + 8;
        let mut steps = 0;
        loop {
            steps += 1;
            if steps > limit {
                return Err(GeometryError::BoundaryNotCyclic {
                    detail: "marching did not close up".into(),
                });
            }
            let (ci, cj) = (cur % nx, cur / nx);
            let mut advanced = false;
            for t in 1..=8 {
                let k = (back + t) % 8;
                let mut ni = ci as i64 + DIRS8[k].0;
                let mut nj = cj as i64 + DIRS8[k].1;
                if ni < 0 || nj < 0 || ni as usize >= nx || nj as usize >= ny {
                    continue;
                }
                let mut nid = nj as usize * nx + ni as usize;
                if in_domain(nid) {
                    if !is_ring(nid) {
                        return Err(GeometryError::BoundaryNotCyclic {
                            detail: "march stepped onto an interior node".into(),
                        });
                    }
                    // the last background pixel we passed over
                    let prev_k = (k + 7) % 8;
                    let bi = ci as i64 + DIRS8[prev_k].0;
                    let bj = cj as i64 + DIRS8[prev_k].1;
                    // inner-corner rule: a diagonal hit must not cut past a
                    // ring node sitting at the 4-adjacent corner next in the
                    // rotation (reflex corners of polygonal domains)
                    if k % 2 == 1 {
                        let k2 = (k + 1) % 8;
                        let mi = ci as i64 + DIRS8[k2].0;
                        let mj = cj as i64 + DIRS8[k2].1;
                        if mi >= 0 && mj >= 0 && (mi as usize) < nx && (mj as usize) < ny {
                            let mid = mj as usize * nx + mi as usize;
                            if is_ring(mid) {
                                ni = mi;
                                nj = mj;
                                nid = mid;
                            }
                        }
                    }
                    let mut nb = None;
                    for (kk, (di, dj)) in DIRS8.iter().enumerate() {
                        if ni + di == bi && nj + dj == bj {
                            nb = Some(kk);
                            break;
                        }
                    }
                    cycle.push(cur);
                    cur = nid;
                    back = nb.expect("backtrack pixel is 8-adjacent");
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                // isolated ring pixel
                cycle.push(cur);
                break;
            }
            // first return closes the cycle; pinched rings that would need a
            // second pass fail the coverage validation below
            if cur == start {
                break;
            }
        }

        // the march may revisit pixels in pinched configurations; reject those
        let mut seen = std::collections::HashSet::new();
        for &id in &cycle {
            if !seen.insert(id) {
                return Err(GeometryError::BoundaryNotCyclic {
                    detail: format!("node {} visited twice; refine h", id),
                });
            }
        }
        if seen.len() != nodes.len() {
            return Err(GeometryError::BoundaryNotCyclic {
                detail: format!(
                    "cycle covers {} of {} ring nodes; refine h",
                    seen.len(),
                    nodes.len()
                ),
            });
        }

        // normalize orientation to counterclockwise, start at smallest id
        let signed_area: f64 = {
            let pt = |id: usize| {
                let (i, j) = (id % nx, id / nx);
                (
                    (ix0 + i as i64) as f64 * h,
                    (iy0 + j as i64) as f64 * h,
                )
            };
            let n = cycle.len();
            (0..n)
                .map(|k| {
                    let (x0, y0) = pt(cycle[k]);
                    let (x1, y1) = pt(cycle[(k + 1) % n]);
                    x0 * y1 - x1 * y0
                })
                .sum::<f64>()
        };
        let mut cycle = cycle;
        if signed_area < 0.0 {
            cycle.reverse();
        }
        let minpos = cycle
            .iter()
            .enumerate()
            .min_by_key(|(_, &id)| id)
            .map(|(k, _)| k)
            .unwrap();
        cycle.rotate_left(minpos);
        cycles.push(cycle);
    }

    cycles.sort_by_key(|c| c[0]);
    Ok(cycles)
}

fn segments_properly_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let orient = |p: Point, q: Point, r: Point| {
        (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    };
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn polygon_self_intersects(verts: &[Point]) -> bool {
    let n = verts.len();
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        for j in i + 1..n {
            // skip edges sharing a vertex
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let c = verts[j];
            let d = verts[(j + 1) % n];
            if segments_properly_intersect(a, b, c, d) {
                return true;
            }
        }
    }
    false
}

/// Strict point-in-polygon: points on an edge or vertex are outside.
fn point_strictly_in_polygon(p: Point, verts: &[Point]) -> bool {
    let n = verts.len();
    for k in 0..n {
        let a = verts[k];
        let b = verts[(k + 1) % n];
        let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if cross == 0.0
            && p.x >= a.x.min(b.x)
            && p.x <= a.x.max(b.x)
            && p.y >= a.y.min(b.y)
            && p.y <= a.y.max(b.y)
        {
            return false;
        }
    }
    let mut inside = false;
    for k in 0..n {
        let a = verts[k];
        let b = verts[(k + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let t = (p.y - a.y) / (b.y - a.y);
            let xi = a.x + t * (b.x - a.x);
            if p.x < xi {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Vec<Point> {
        vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]
    }

    fn l_shape() -> Vec<Point> {
        vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 0.5),
            Point::new(0.5, 0.5),
            Point::new(0.5, 1.0),
            Point::new(0.0, 1.0),
        ]
    }

    #[test]
    fn disk_too_coarse_is_rejected() {
        assert!(matches!(
            build_disk_domain(1.0, 0.5),
            Err(GeometryError::TooCoarse { .. })
        ));
    }

    #[test]
    fn disk_interior_count_matches_area() {
        let h = 1.0 / 64.0;
        let dom = build_disk_domain(1.0, h).unwrap();
        // area-count oracle: interior nodes approximate area/h^2
        let expected = std::f64::consts::PI / (h * h);
        let got = dom.interior_nodes().len() as f64;
        assert!(
            (got - expected).abs() <= 0.05 * expected,
            "got {} expected about {}",
            got,
            expected
        );
    }

    #[test]
    fn disk_boundary_is_one_cycle() {
        let dom = build_disk_domain(1.0, 1.0 / 32.0).unwrap();
        assert_eq!(dom.boundary_cycles().len(), 1);
        let cycle = dom.boundary_cycle().unwrap();
        assert_eq!(cycle.len(), dom.boundary_nodes().len());
        // consecutive cycle nodes are 8-adjacent and the cycle closes up
        let n = cycle.len();
        for k in 0..n {
            let (i0, j0) = dom.ij(cycle[k]);
            let (i1, j1) = dom.ij(cycle[(k + 1) % n]);
            let di = (i0 as i64 - i1 as i64).abs();
            let dj = (j0 as i64 - j1 as i64).abs();
            assert!(di <= 1 && dj <= 1 && di + dj > 0);
        }
    }

    #[test]
    fn interior_neighbors_never_exterior() {
        let dom = build_disk_domain(1.0, 1.0 / 24.0).unwrap();
        for &id in dom.interior_nodes() {
            for nid in dom.neighbors4(id) {
                assert_ne!(dom.class(nid), NodeClass::Exterior);
            }
        }
    }

    #[test]
    fn boundary_sees_both_sides() {
        let dom = build_disk_domain(1.0, 1.0 / 24.0).unwrap();
        for &id in dom.boundary_nodes() {
            let mut has_int = false;
            let mut has_ext = false;
            for nid in dom.neighbors8(id) {
                match dom.class(nid) {
                    NodeClass::Interior => has_int = true,
                    NodeClass::Exterior => has_ext = true,
                    NodeClass::Boundary => {}
                }
            }
            assert!(has_int && has_ext);
        }
    }

    #[test]
    fn aligned_square_interior_count() {
        let h = 1.0 / 32.0;
        let dom = build_polygon_domain(&unit_square(), h).unwrap();
        // direct lattice-count oracle
        let mut oracle = 0;
        for k in 1..200 {
            for l in 1..200 {
                let p = Point::new(k as f64 * h, l as f64 * h);
                if p.x < 1.0 && p.y < 1.0 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(oracle, 31 * 31);
        assert_eq!(dom.interior_nodes().len(), 31 * 31);
    }

    #[test]
    fn square_too_coarse_is_rejected() {
        assert!(matches!(
            build_polygon_domain(&unit_square(), 0.5),
            Err(GeometryError::TooCoarse { .. })
        ));
    }

    #[test]
    fn l_shape_single_cycle() {
        let dom = build_polygon_domain(&l_shape(), 1.0 / 64.0).unwrap();
        assert_eq!(dom.boundary_cycles().len(), 1);
    }

    #[test]
    fn self_intersecting_polygon_rejected() {
        let bowtie = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(matches!(
            build_polygon_domain(&bowtie, 1.0 / 32.0),
            Err(GeometryError::SelfIntersectingPolygon)
        ));
    }

    #[test]
    fn annulus_has_two_cycles() {
        let dom = build_annulus_domain(1.0, 2.0, 1.0 / 16.0).unwrap();
        assert_eq!(dom.boundary_cycles().len(), 2);
        assert!(dom.boundary_cycle().is_err());
    }

    #[test]
    fn constant_data_has_no_extrema() {
        let dom = build_disk_domain(1.0, 1.0 / 16.0).unwrap();
        let g = BoundaryData::constant(&dom, 3.0);
        assert_eq!(count_relative_extrema(&g), (0, 0));
    }

    #[test]
    fn sin_2theta_has_two_maxima_two_minima() {
        let dom = build_disk_domain(1.0, 1.0 / 16.0).unwrap();
        // sample on the cycle: the sampled sequence is what the oracle sees
        let g = BoundaryData::from_fn(&dom, |p| (2.0 * p.y.atan2(p.x)).sin());
        assert_eq!(count_relative_extrema(&g), (2, 2));

        // 256 evenly spaced samples of sin(2θ), brute-force oracle
        let vals: Vec<f64> = (0..256)
            .map(|k| (2.0 * (k as f64) * std::f64::consts::TAU / 256.0).sin())
            .collect();
        assert_eq!(count_relative_extrema_cyclic(&vals), (2, 2));
    }

    #[test]
    fn plateau_cycle_example() {
        let vals = [0.0, 1.0, 1.0, 0.0, -1.0, -1.0, 0.0];
        assert_eq!(count_relative_extrema_cyclic(&vals), (1, 1));
    }

    #[test]
    fn symmetric_lattice_coordinates() {
        let dom = build_disk_domain(1.0, 1.0 / 32.0).unwrap();
        // node coordinates are exact multiples of h, symmetric about 0
        let mut found_origin = false;
        for id in 0..dom.node_count() {
            let p = dom.coord(id);
            if p.x == 0.0 && p.y == 0.0 {
                found_origin = true;
            }
        }
        assert!(found_origin);
    }
}
