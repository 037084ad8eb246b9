//! Lattice graph families and their boundary operators.
//!
//! Infinite graphs are represented by finite windows. Each vertex carries an
//! `interior` flag: true iff every neighbor it has in the infinite graph is
//! present in the window. Boundary operators reject sets touching non-interior
//! vertices instead of silently truncating counts.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Dense vertex index, unique and stable within one [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Integer lattice coordinates, present for families embedded in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub x: i64,
    pub y: i64,
}

impl Coord {
    pub const fn new(x: i64, y: i64) -> Self {
        Coord { x, y }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Graph family together with its window parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Square window {(x,y) : |x| <= w, |y| <= w} of the planar grid.
    GridWindow { half_width: u32 },
    /// Window {(x,y) : 0 <= x < len, y in {0,1}} of the half-infinite ladder.
    Ladder { length: u32 },
    /// Window of the two-sided integer line, centered at 0.
    Path { length: u32 },
    /// Rooted window of the infinite d-regular tree, cut at `depth`.
    RegularTree { degree: u32, depth: u32 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::GridWindow { .. } => "grid",
            Family::Ladder { .. } => "ladder",
            Family::Path { .. } => "path",
            Family::RegularTree { .. } => "tree",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::GridWindow { half_width } => write!(f, "grid {half_width}"),
            Family::Ladder { length } => write!(f, "ladder {length}"),
            Family::Path { length } => write!(f, "path {length}"),
            Family::RegularTree { degree, depth } => write!(f, "tree {degree} {depth}"),
        }
    }
}

/// A subset of a graph's vertices.
pub type VertexSet = BTreeSet<VertexId>;

/// Finite simple undirected window of one of the four families.
///
/// Immutable after construction; all queries are pure, so a `Graph` can be
/// shared freely across threads (usually behind an [`Arc`]).
#[derive(Debug)]
pub struct Graph {
    family: Family,
    coords: Vec<Option<Coord>>,
    adjacency: Vec<Vec<VertexId>>,
    interior: Vec<bool>,
    coord_index: HashMap<Coord, VertexId>,
    /// Tree families only: parent of each non-root vertex.
    parent: Vec<Option<VertexId>>,
    /// Tree families only: distance from the root.
    depth: Vec<u32>,
    edge_count: usize,
}

impl Graph {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.adjacency.len() as u32).map(VertexId)
    }

    pub fn coord(&self, v: VertexId) -> Option<Coord> {
        self.coords[v.index()]
    }

    /// Looks up a vertex by lattice coordinates (lattice families only).
    pub fn vertex_at(&self, c: Coord) -> Option<VertexId> {
        self.coord_index.get(&c).copied()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.index()].len()
    }

    pub fn is_interior(&self, v: VertexId) -> bool {
        self.interior[v.index()]
    }

    /// Degree this vertex has in the infinite graph the window was cut from.
    pub fn infinite_degree(&self, v: VertexId) -> usize {
        match self.family {
            Family::GridWindow { .. } => 4,
            Family::Ladder { .. } => {
                let c = self.coords[v.index()].expect("ladder vertices carry coords");
                if c.x == 0 {
                    2
                } else {
                    3
                }
            }
            Family::Path { .. } => 2,
            Family::RegularTree { degree, .. } => degree as usize,
        }
    }

    /// Tree families: parent of a vertex, `None` for the root.
    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v.index()]
    }

    /// Tree families: distance from the root; 0 elsewhere.
    pub fn depth(&self, v: VertexId) -> u32 {
        self.depth[v.index()]
    }

    /// All edges as ordered pairs (u, v) with u < v.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for v in self.vertices() {
            for &w in self.neighbors(v) {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out
    }

    fn check_members(&self, a: &VertexSet) -> Result<()> {
        for &v in a {
            if v.index() >= self.vertex_count() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
            if !self.is_interior(v) {
                return Err(Error::NonInteriorVertex(self.describe_vertex(v)));
            }
        }
        Ok(())
    }

    fn describe_vertex(&self, v: VertexId) -> String {
        match self.coord(v) {
            Some(c) => format!("{v} at {c}"),
            None => v.to_string(),
        }
    }

    /// Edges with exactly one endpoint in `a`.
    ///
    /// Every member of `a` must be interior; this makes the count equal to the
    /// edge boundary of `a` in the infinite graph.
    pub fn edge_boundary(&self, a: &VertexSet) -> Result<Vec<(VertexId, VertexId)>> {
        self.check_members(a)?;
        let mut out = Vec::new();
        for &v in a {
            for &w in self.neighbors(v) {
                if !a.contains(&w) {
                    out.push((v, w));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn edge_boundary_count(&self, a: &VertexSet) -> Result<usize> {
        Ok(self.edge_boundary(a)?.len())
    }

    /// Vertices outside `a` adjacent to `a`. Same precondition as
    /// [`Graph::edge_boundary`].
    pub fn vertex_boundary(&self, a: &VertexSet) -> Result<VertexSet> {
        self.check_members(a)?;
        let mut out = VertexSet::new();
        for &v in a {
            for &w in self.neighbors(v) {
                if !a.contains(&w) {
                    out.insert(w);
                }
            }
        }
        Ok(out)
    }

    pub fn vertex_boundary_count(&self, a: &VertexSet) -> Result<usize> {
        Ok(self.vertex_boundary(a)?.len())
    }

    /// Serializes the window: a header line `family params...`, one line per
    /// vertex `id x y interior`, then one line per edge `id id`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("{}\n", self.family));
        for v in self.vertices() {
            let (x, y) = match self.coord(v) {
                Some(c) => (c.x, c.y),
                // Trees have no planar embedding; store parent id and depth in
                // the coordinate columns so the format stays integer-only.
                None => (
                    self.parent(v).map_or(-1, |p| p.0 as i64),
                    self.depth(v) as i64,
                ),
            };
            s.push_str(&format!(
                "{} {} {} {}\n",
                v.0,
                x,
                y,
                u8::from(self.is_interior(v))
            ));
        }
        for (u, v) in self.edges() {
            s.push_str(&format!("{} {}\n", u.0, v.0));
        }
        s
    }

    /// Parses the [`Graph::to_text`] format. The window is rebuilt from the
    /// header via the family builder and every vertex/edge line is verified
    /// against it; files disagreeing with the builders are rejected.
    pub fn from_text(text: &str) -> Result<Arc<Graph>> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse =
            |s: &str| -> Result<u32> { s.parse().map_err(|_| Error::Parse(format!("bad integer {s}"))) };
        let graph = match fields.as_slice() {
            ["grid", w] => build_grid_window(parse(w)?),
            ["ladder", l] => build_ladder(parse(l)?),
            ["path", l] => build_path(parse(l)?),
            ["tree", d, h] => build_regular_tree(parse(d)?, parse(h)?),
            _ => Err(Error::Parse(format!("bad graph header: {header}"))),
        }?;
        let expected = graph.to_text();
        let mut expected_lines = expected.lines().skip(1);
        for line in lines {
            match expected_lines.next() {
                Some(e) if e == line.trim_end() => {}
                _ => return Err(Error::Parse(format!("graph line mismatch: {line}"))),
            }
        }
        if expected_lines.next().is_some() {
            return Err(Error::Parse("truncated graph file".into()));
        }
        Ok(graph)
    }
}

struct GraphBuilder {
    family: Family,
    coords: Vec<Option<Coord>>,
    adjacency: Vec<Vec<VertexId>>,
    interior: Vec<bool>,
    coord_index: HashMap<Coord, VertexId>,
    parent: Vec<Option<VertexId>>,
    depth: Vec<u32>,
}

impl GraphBuilder {
    fn new(family: Family) -> Self {
        GraphBuilder {
            family,
            coords: Vec::new(),
            adjacency: Vec::new(),
            interior: Vec::new(),
            coord_index: HashMap::new(),
            parent: Vec::new(),
            depth: Vec::new(),
        }
    }

    fn add_vertex(&mut self, coord: Option<Coord>, parent: Option<VertexId>, depth: u32) -> VertexId {
        let id = VertexId(self.adjacency.len() as u32);
        self.coords.push(coord);
        self.adjacency.push(Vec::new());
        self.interior.push(true);
        self.parent.push(parent);
        self.depth.push(depth);
        if let Some(c) = coord {
            self.coord_index.insert(c, id);
        }
        id
    }

    fn add_edge(&mut self, u: VertexId, v: VertexId) {
        debug_assert_ne!(u, v);
        self.adjacency[u.index()].push(v);
        self.adjacency[v.index()].push(u);
    }

    fn finish(mut self) -> Arc<Graph> {
        let mut edge_count = 0;
        for (i, adj) in self.adjacency.iter_mut().enumerate() {
            adj.sort();
            adj.dedup();
            debug_assert!(!adj.contains(&VertexId(i as u32)));
            edge_count += adj.len();
        }
        Arc::new(Graph {
            family: self.family,
            coords: self.coords,
            adjacency: self.adjacency,
            interior: self.interior,
            coord_index: self.coord_index,
            parent: self.parent,
            depth: self.depth,
            edge_count: edge_count / 2,
        })
    }
}

/// Builds the square grid window {(x,y) : |x| <= w, |y| <= w} with edges
/// between vertices at taxicab distance 1. The border ring is non-interior.
pub fn build_grid_window(half_width: u32) -> Result<Arc<Graph>> {
    if half_width == 0 {
        return Err(Error::InvalidParameter("grid half_width must be >= 1".into()));
    }
    let w = half_width as i64;
    let mut b = GraphBuilder::new(Family::GridWindow { half_width });
    for y in -w..=w {
        for x in -w..=w {
            b.add_vertex(Some(Coord::new(x, y)), None, 0);
        }
    }
    let idx = |x: i64, y: i64| -> VertexId {
        VertexId(((y + w) * (2 * w + 1) + (x + w)) as u32)
    };
    for y in -w..=w {
        for x in -w..=w {
            let v = idx(x, y);
            if x < w {
                b.add_edge(v, idx(x + 1, y));
            }
            if y < w {
                b.add_edge(v, idx(x, y + 1));
            }
            b.interior[v.index()] = x.abs() < w && y.abs() < w;
        }
    }
    Ok(b.finish())
}

/// Builds the ladder window {0..len-1} x {0,1} with rung and rail edges.
///
/// Column 0 is a genuine boundary of the half-infinite ladder, so it stays
/// interior; only the rightmost column is truncated by the window.
pub fn build_ladder(length: u32) -> Result<Arc<Graph>> {
    if length == 0 {
        return Err(Error::InvalidParameter("ladder length must be >= 1".into()));
    }
    let n = length as i64;
    let mut b = GraphBuilder::new(Family::Ladder { length });
    for x in 0..n {
        for y in 0..2 {
            b.add_vertex(Some(Coord::new(x, y)), None, 0);
        }
    }
    let idx = |x: i64, y: i64| -> VertexId { VertexId((x * 2 + y) as u32) };
    for x in 0..n {
        b.add_edge(idx(x, 0), idx(x, 1));
        if x + 1 < n {
            b.add_edge(idx(x, 0), idx(x + 1, 0));
            b.add_edge(idx(x, 1), idx(x + 1, 1));
        }
        let interior = x < n - 1;
        b.interior[idx(x, 0).index()] = interior;
        b.interior[idx(x, 1).index()] = interior;
    }
    Ok(b.finish())
}

/// Builds a path window of `length` vertices on the two-sided integer line,
/// embedded at y = 0 and centered at x = 0. Both endpoints are non-interior.
pub fn build_path(length: u32) -> Result<Arc<Graph>> {
    if length == 0 {
        return Err(Error::InvalidParameter("path length must be >= 1".into()));
    }
    let n = length as i64;
    let lo = -(n / 2);
    let mut b = GraphBuilder::new(Family::Path { length });
    for x in lo..lo + n {
        b.add_vertex(Some(Coord::new(x, 0)), None, 0);
    }
    for i in 0..n - 1 {
        b.add_edge(VertexId(i as u32), VertexId((i + 1) as u32));
    }
    if n > 1 {
        for i in 1..n - 1 {
            b.interior[i as usize] = true;
        }
        b.interior[0] = false;
        b.interior[(n - 1) as usize] = false;
    } else {
        b.interior[0] = false;
    }
    Ok(b.finish())
}

/// Builds the rooted window of the infinite d-regular tree down to `depth`.
///
/// The root has d children and every other internal vertex has d-1 children,
/// so all non-leaf vertices have full degree d. Leaves are non-interior.
/// Vertex ids follow breadth-first construction order.
pub fn build_regular_tree(degree: u32, depth: u32) -> Result<Arc<Graph>> {
    if degree < 3 {
        return Err(Error::InvalidParameter("tree degree must be >= 3".into()));
    }
    let mut b = GraphBuilder::new(Family::RegularTree { degree, depth });
    let root = b.add_vertex(None, None, 0);
    let mut frontier = vec![root];
    for level in 1..=depth {
        let mut next = Vec::new();
        for &p in &frontier {
            let children = if p == root { degree } else { degree - 1 };
            for _ in 0..children {
                let c = b.add_vertex(None, Some(p), level);
                b.add_edge(p, c);
                next.push(c);
            }
        }
        frontier = next;
    }
    for &leaf in &frontier {
        if depth > 0 {
            b.interior[leaf.index()] = false;
        }
    }
    if depth == 0 {
        b.interior[root.index()] = false;
    }
    Ok(b.finish())
}

/// Convenience: collect coordinates into a vertex set, failing on unknowns.
pub fn set_from_coords(g: &Graph, coords: &[(i64, i64)]) -> Result<VertexSet> {
    let mut out = VertexSet::new();
    for &(x, y) in coords {
        let v = g
            .vertex_at(Coord::new(x, y))
            .ok_or_else(|| Error::UnknownVertex(format!("({x},{y})")))?;
        out.insert(v);
    }
    Ok(out)
}
