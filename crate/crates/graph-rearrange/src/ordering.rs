//! The named vertex orderings and neighbor-containment measurements.
//!
//! An ordering is a prefix of an intended infinite vertex permutation
//! v1, v2, ... restricted to a finite window. `valid_prefix_len` is the
//! largest N such that the first N vertices *and all their neighbors* are
//! interior; audits refuse ranges beyond it so window truncation can never
//! contaminate a reported constant.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Coord, Family, Graph, VertexId, VertexSet};

/// Which construction produced an ordering. Audit bounds depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingKind {
    Spiral,
    Diamond,
    Snake,
    Lexicographic,
    PathCenter,
    TreeBfs,
    Custom,
}

impl fmt::Display for OrderingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            OrderingKind::Spiral => "spiral",
            OrderingKind::Diamond => "diamond",
            OrderingKind::Snake => "snake",
            OrderingKind::Lexicographic => "lex",
            OrderingKind::PathCenter => "path",
            OrderingKind::TreeBfs => "tree-bfs",
            OrderingKind::Custom => "custom",
        };
        f.write_str(name)
    }
}

/// Injective rank -> vertex map over a window graph.
#[derive(Debug, Clone)]
pub struct VertexOrdering {
    graph: Arc<Graph>,
    ranks: Vec<VertexId>,
    rank_of: Vec<Option<u32>>,
    valid_prefix_len: usize,
    kind: OrderingKind,
}

impl VertexOrdering {
    fn build(graph: Arc<Graph>, ranks: Vec<VertexId>, kind: OrderingKind) -> Result<Self> {
        let mut rank_of = vec![None; graph.vertex_count()];
        for (i, &v) in ranks.iter().enumerate() {
            if v.index() >= graph.vertex_count() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
            if rank_of[v.index()].is_some() {
                return Err(Error::DuplicateVertex(v.to_string()));
            }
            rank_of[v.index()] = Some(i as u32 + 1);
        }
        let mut valid_prefix_len = 0;
        'scan: for &v in &ranks {
            if !graph.is_interior(v) {
                break;
            }
            for &w in graph.neighbors(v) {
                if !graph.is_interior(w) {
                    break 'scan;
                }
            }
            valid_prefix_len += 1;
        }
        Ok(VertexOrdering {
            graph,
            ranks,
            rank_of,
            valid_prefix_len,
            kind,
        })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn kind(&self) -> OrderingKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Largest N such that the first N vertices and their neighbors are all
    /// interior.
    pub fn valid_prefix_len(&self) -> usize {
        self.valid_prefix_len
    }

    /// Vertex holding `rank` (1-based).
    pub fn vertex_at_rank(&self, rank: usize) -> Option<VertexId> {
        self.ranks.get(rank.checked_sub(1)?).copied()
    }

    /// Rank of `v` (1-based), if ranked.
    pub fn rank_of(&self, v: VertexId) -> Option<usize> {
        self.rank_of[v.index()].map(|r| r as usize)
    }

    /// The set {v1, ..., vn}.
    pub fn prefix(&self, n: usize) -> VertexSet {
        self.ranks[..n.min(self.ranks.len())].iter().copied().collect()
    }

    /// Smallest M such that every neighbor of {v1..vN} has rank <= M.
    ///
    /// Errors if N exceeds the valid prefix or if some neighbor is unranked
    /// (the window is too small to answer).
    pub fn containment_index(&self, n: usize) -> Result<usize> {
        if n == 0 || n > self.valid_prefix_len {
            return Err(Error::PrefixRangeExceeded {
                requested: n,
                valid: self.valid_prefix_len,
            });
        }
        let prefix = self.prefix(n);
        let boundary = self.graph.vertex_boundary(&prefix)?;
        let mut max_rank = n;
        for v in boundary {
            match self.rank_of(v) {
                Some(r) => max_rank = max_rank.max(r),
                None => {
                    return Err(Error::UnrankedNeighbor(match self.graph.coord(v) {
                        Some(c) => c.to_string(),
                        None => v.to_string(),
                    }))
                }
            }
        }
        Ok(max_rank)
    }

    /// Serializes as `rank x y` lines (lattice families) or `rank vertex_id`
    /// lines (trees).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, &v) in self.ranks.iter().enumerate() {
            match self.graph.coord(v) {
                Some(c) => s.push_str(&format!("{} {} {}\n", i + 1, c.x, c.y)),
                None => s.push_str(&format!("{} {}\n", i + 1, v.0)),
            }
        }
        s
    }

    /// Parses the [`VertexOrdering::to_text`] format against `graph`.
    pub fn from_text(graph: Arc<Graph>, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_i = |s: &str| -> Result<i64> {
                s.parse().map_err(|_| Error::Parse(format!("bad integer {s}")))
            };
            match fields.as_slice() {
                [rank, x, y] => {
                    let c = Coord::new(parse_i(x)?, parse_i(y)?);
                    let v = graph
                        .vertex_at(c)
                        .ok_or_else(|| Error::UnknownVertex(c.to_string()))?;
                    entries.push((parse_i(rank)? as usize, v));
                }
                [rank, id] => {
                    let v = VertexId(parse_i(id)? as u32);
                    entries.push((parse_i(rank)? as usize, v));
                }
                _ => return Err(Error::Parse(format!("bad ordering line: {line}"))),
            }
        }
        entries.sort_by_key(|&(rank, _)| rank);
        for (i, &(rank, _)) in entries.iter().enumerate() {
            if rank != i + 1 {
                return Err(Error::Parse(format!("ranks must be 1..n, found {rank}")));
            }
        }
        let ranks = entries.into_iter().map(|(_, v)| v).collect();
        Self::build(graph, ranks, OrderingKind::Custom)
    }
}

fn require_family(graph: &Graph, want: &str) -> Result<()> {
    if graph.family().name() != want {
        return Err(Error::WrongFamily {
            expected: want.into(),
            found: graph.family().name().into(),
        });
    }
    Ok(())
}

/// Counterclockwise square spiral from the origin: E, then turn left whenever
/// the cell to the left of the walking direction is unvisited. Covers the
/// whole window.
pub fn spiral_ordering(graph: &Arc<Graph>) -> Result<VertexOrdering> {
    require_family(graph, "grid")?;
    let n = graph.vertex_count();
    let mut ranks = Vec::with_capacity(n);
    let mut visited = std::collections::HashSet::new();
    let mut pos = (0i64, 0i64);
    // Directions in counterclockwise order: E, N, W, S.
    const DIRS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    let mut dir = 0usize;
    visited.insert(pos);
    ranks.push(graph.vertex_at(Coord::new(0, 0)).expect("origin in window"));
    while ranks.len() < n {
        pos = (pos.0 + DIRS[dir].0, pos.1 + DIRS[dir].1);
        visited.insert(pos);
        let v = graph
            .vertex_at(Coord::new(pos.0, pos.1))
            .expect("square spiral stays inside the window until it is full");
        ranks.push(v);
        // After each arrival, turn left if that cell is still unvisited.
        let left = (dir + 1) % 4;
        let left_cell = (pos.0 + DIRS[left].0, pos.1 + DIRS[left].1);
        if !visited.contains(&left_cell) {
            dir = left;
        }
    }
    VertexOrdering::build(Arc::clone(graph), ranks, OrderingKind::Spiral)
}

/// First thirteen ranks of the nested vertex-isoperimetric minimizer sequence
/// on the grid. Fixed by construction; the continuation fills taxicab spheres.
const DIAMOND_HEAD: [(i64, i64); 13] = [
    (0, 0),
    (0, 1),
    (1, 0),
    (-1, 0),
    (0, -1),
    (1, 1),
    (-1, 1),
    (0, 2),
    (2, 0),
    (1, -1),
    (-2, 0),
    (-1, -1),
    (0, -2),
];

/// Nested taxicab-ball ordering on the grid window. Ranks 1-13 are pinned;
/// beyond that each sphere is filled in descending y, then ascending x (a
/// convention, since any sphere order keeps the prefixes nested balls).
/// Stops before the first sphere that does not fit in the window, so the
/// ranks stay a gap-free prefix of the infinite permutation.
pub fn diamond_ordering(graph: &Arc<Graph>) -> Result<VertexOrdering> {
    require_family(graph, "grid")?;
    let Family::GridWindow { half_width } = graph.family() else {
        unreachable!()
    };
    let w = half_width as i64;
    let mut cells: Vec<(i64, i64)> = Vec::new();
    for &(x, y) in DIAMOND_HEAD.iter() {
        if x.abs() + y.abs() <= w {
            cells.push((x, y));
        }
    }
    for radius in 3..=w {
        let mut sphere: Vec<(i64, i64)> = Vec::new();
        for y in (-radius..=radius).rev() {
            let r = radius - y.abs();
            for x in [-r, r] {
                sphere.push((x, y));
                if r == 0 {
                    break;
                }
            }
        }
        sphere.sort_by_key(|&(x, y)| (-y, x));
        cells.extend(sphere);
    }
    let ranks = cells
        .into_iter()
        .map(|(x, y)| graph.vertex_at(Coord::new(x, y)).expect("ball fits in window"))
        .collect();
    VertexOrdering::build(Arc::clone(graph), ranks, OrderingKind::Diamond)
}

/// Boustrophedon ordering of the ladder: column by column, alternating the
/// row direction, starting (0,0),(0,1),(1,1),(1,0),...
pub fn snake_ordering(graph: &Arc<Graph>) -> Result<VertexOrdering> {
    require_family(graph, "ladder")?;
    let Family::Ladder { length } = graph.family() else {
        unreachable!()
    };
    let mut ranks = Vec::new();
    for x in 0..length as i64 {
        let ys: [i64; 2] = if x % 2 == 0 { [0, 1] } else { [1, 0] };
        for y in ys {
            ranks.push(graph.vertex_at(Coord::new(x, y)).unwrap());
        }
    }
    VertexOrdering::build(Arc::clone(graph), ranks, OrderingKind::Snake)
}

/// Lexicographic ordering of the ladder: (0,0),(0,1),(1,0),(1,1),...
pub fn lex_ordering(graph: &Arc<Graph>) -> Result<VertexOrdering> {
    require_family(graph, "ladder")?;
    let Family::Ladder { length } = graph.family() else {
        unreachable!()
    };
    let mut ranks = Vec::new();
    for x in 0..length as i64 {
        for y in 0..2 {
            ranks.push(graph.vertex_at(Coord::new(x, y)).unwrap());
        }
    }
    VertexOrdering::build(Arc::clone(graph), ranks, OrderingKind::Lexicographic)
}

/// Center-out ordering of the path: offsets 0, -1, +1, -2, +2, ... from x = 0.
/// Stops as soon as the next offset falls outside the window.
pub fn path_ordering(graph: &Arc<Graph>) -> Result<VertexOrdering> {
    require_family(graph, "path")?;
    let mut ranks = Vec::new();
    let mut offsets = vec![0i64];
    for k in 1..graph.vertex_count() as i64 {
        offsets.push(-k);
        offsets.push(k);
    }
    for x in offsets {
        match graph.vertex_at(Coord::new(x, 0)) {
            Some(v) => ranks.push(v),
            None => break,
        }
        if ranks.len() == graph.vertex_count() {
            break;
        }
    }
    VertexOrdering::build(Arc::clone(graph), ranks, OrderingKind::PathCenter)
}

/// Breadth-first ordering of the regular tree: the root first, then its d
/// children, then the d-1 children of the vertex ranked 2, and so on.
pub fn tree_bfs_ordering(graph: &Arc<Graph>) -> Result<VertexOrdering> {
    require_family(graph, "tree")?;
    // Tree vertices are created in breadth-first order.
    let ranks = graph.vertices().collect();
    VertexOrdering::build(Arc::clone(graph), ranks, OrderingKind::TreeBfs)
}

/// Ordering from an explicit vertex list (ranks as listed).
pub fn from_vertices(graph: &Arc<Graph>, vertices: Vec<VertexId>) -> Result<VertexOrdering> {
    VertexOrdering::build(Arc::clone(graph), vertices, OrderingKind::Custom)
}

/// Ordering from an explicit coordinate list (lattice families).
pub fn from_coords(graph: &Arc<Graph>, coords: &[(i64, i64)]) -> Result<VertexOrdering> {
    let mut vertices = Vec::with_capacity(coords.len());
    for &(x, y) in coords {
        let v = graph
            .vertex_at(Coord::new(x, y))
            .ok_or_else(|| Error::UnknownVertex(format!("({x},{y})")))?;
        vertices.push(v);
    }
    from_vertices(graph, vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_grid_window, build_ladder, build_path, build_regular_tree};

    fn coords_of(o: &VertexOrdering, upto: usize) -> Vec<(i64, i64)> {
        (1..=upto)
            .map(|r| {
                let c = o.graph().coord(o.vertex_at_rank(r).unwrap()).unwrap();
                (c.x, c.y)
            })
            .collect()
    }

    #[test]
    fn spiral_first_sixteen() {
        let g = build_grid_window(4).unwrap();
        let o = spiral_ordering(&g).unwrap();
        let expected = [
            (0, 0),
            (1, 0),
            (1, 1),
            (0, 1),
            (-1, 1),
            (-1, 0),
            (-1, -1),
            (0, -1),
            (1, -1),
            (2, -1),
            (2, 0),
            (2, 1),
            (2, 2),
            (1, 2),
            (0, 2),
            (-1, 2),
        ];
        assert_eq!(coords_of(&o, 16), expected);
        assert_eq!(o.len(), g.vertex_count());
    }

    #[test]
    fn spiral_square_prefixes_are_boxes() {
        let g = build_grid_window(6).unwrap();
        let o = spiral_ordering(&g).unwrap();
        for m in 1..=4usize {
            let prefix = o.prefix(m * m);
            let coords: Vec<Coord> = prefix.iter().map(|&v| g.coord(v).unwrap()).collect();
            let (xs, ys): (Vec<i64>, Vec<i64>) = coords.iter().map(|c| (c.x, c.y)).unzip();
            let dx = xs.iter().max().unwrap() - xs.iter().min().unwrap() + 1;
            let dy = ys.iter().max().unwrap() - ys.iter().min().unwrap() + 1;
            assert_eq!((dx as usize, dy as usize), (m, m));
            assert_eq!(g.edge_boundary_count(&prefix).unwrap(), 4 * m);
        }
    }

    #[test]
    fn diamond_first_thirteen() {
        let g = build_grid_window(4).unwrap();
        let o = diamond_ordering(&g).unwrap();
        assert_eq!(coords_of(&o, 13), DIAMOND_HEAD);
        assert_eq!(coords_of(&o, 1)[0], (0, 0));
        assert_eq!(coords_of(&o, 8)[7], (0, 2));
        assert_eq!(coords_of(&o, 13)[12], (0, -2));
    }

    #[test]
    fn diamond_prefixes_are_balls() {
        let g = build_grid_window(5).unwrap();
        let o = diamond_ordering(&g).unwrap();
        for (n, radius) in [(1usize, 0i64), (5, 1), (13, 2), (25, 3)] {
            let prefix = o.prefix(n);
            for &v in &prefix {
                let c = g.coord(v).unwrap();
                assert!(c.x.abs() + c.y.abs() <= radius);
            }
            assert_eq!(prefix.len(), n);
        }
        // Covers the full ball of radius w and nothing beyond.
        assert_eq!(o.len(), 2 * 5 * 5 + 2 * 5 + 1);
    }

    #[test]
    fn snake_and_lex_orders() {
        let g = build_ladder(4).unwrap();
        let snake = snake_ordering(&g).unwrap();
        assert_eq!(
            coords_of(&snake, 8),
            [(0, 0), (0, 1), (1, 1), (1, 0), (2, 0), (2, 1), (3, 1), (3, 0)]
        );
        let lex = lex_ordering(&g).unwrap();
        assert_eq!(
            coords_of(&lex, 6),
            [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]
        );
        assert_eq!(coords_of(&snake, 3)[2], (1, 1));
        assert_eq!(coords_of(&lex, 3)[2], (1, 0));
        assert_eq!(coords_of(&snake, 1)[0], (0, 0));
        assert_eq!(coords_of(&lex, 1)[0], (0, 0));
    }

    #[test]
    fn path_alternates_around_center() {
        let g = build_path(7).unwrap();
        let o = path_ordering(&g).unwrap();
        assert_eq!(
            coords_of(&o, 7),
            [(0, 0), (-1, 0), (1, 0), (-2, 0), (2, 0), (-3, 0), (3, 0)]
        );
    }

    #[test]
    fn tree_bfs_ranks() {
        let g = build_regular_tree(3, 2).unwrap();
        let o = tree_bfs_ordering(&g).unwrap();
        let root = o.vertex_at_rank(1).unwrap();
        assert_eq!(g.depth(root), 0);
        let children: Vec<VertexId> = (2..=4).map(|r| o.vertex_at_rank(r).unwrap()).collect();
        for &c in &children {
            assert_eq!(g.parent(c), Some(root));
        }
        // Ranks 5..6 are the children of the vertex ranked 2.
        for r in 5..=6 {
            let v = o.vertex_at_rank(r).unwrap();
            assert_eq!(g.parent(v), Some(children[0]));
        }
        // Depth-2 tree: rank 10 is the last grandchild.
        assert_eq!(o.len(), 10);
        assert_eq!(g.depth(o.vertex_at_rank(10).unwrap()), 2);
    }

    #[test]
    fn wrong_family_is_rejected() {
        let ladder = build_ladder(3).unwrap();
        assert!(matches!(
            spiral_ordering(&ladder),
            Err(Error::WrongFamily { .. })
        ));
        let grid = build_grid_window(2).unwrap();
        assert!(snake_ordering(&grid).is_err());
        assert!(lex_ordering(&grid).is_err());
        assert!(path_ordering(&grid).is_err());
        assert!(tree_bfs_ordering(&grid).is_err());
    }

    #[test]
    fn from_list_validation() {
        let g = build_grid_window(1).unwrap();
        assert!(from_coords(&g, &[(0, 0)]).is_ok());
        assert!(matches!(
            from_coords(&g, &[(0, 0), (0, 0)]),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(
            from_coords(&g, &[(9, 9)]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn containment_spiral_matches_small_table() {
        let g = build_grid_window(5).unwrap();
        let o = spiral_ordering(&g).unwrap();
        let ms: Vec<usize> = (1..=6).map(|n| o.containment_index(n).unwrap()).collect();
        assert_eq!(ms, [8, 11, 14, 15, 18, 19]);
    }

    #[test]
    fn containment_path_is_n_plus_two() {
        let g = build_path(31).unwrap();
        let o = path_ordering(&g).unwrap();
        for n in 1..=10 {
            assert_eq!(o.containment_index(n).unwrap(), n + 2);
        }
    }

    #[test]
    fn containment_tree_is_linear() {
        let g = build_regular_tree(3, 4).unwrap();
        let o = tree_bfs_ordering(&g).unwrap();
        for n in 1..=8 {
            assert_eq!(o.containment_index(n).unwrap(), 2 * n + 2);
        }
    }

    #[test]
    fn containment_monotone_and_above_n() {
        let g = build_grid_window(6).unwrap();
        let o = spiral_ordering(&g).unwrap();
        let mut prev = 0;
        for n in 1..=o.valid_prefix_len().min(20) {
            let m = o.containment_index(n).unwrap();
            assert!(m > n);
            assert!(m >= prev);
            prev = m;
        }
    }

    #[test]
    fn containment_range_errors() {
        let g = build_grid_window(2).unwrap();
        let o = spiral_ordering(&g).unwrap();
        // On a half-width-2 window nothing has an all-interior neighborhood
        // except the origin.
        assert_eq!(o.valid_prefix_len(), 1);
        assert!(o.containment_index(2).is_err());
    }

    #[test]
    fn valid_prefix_lengths() {
        let g = build_grid_window(4).unwrap();
        let o = spiral_ordering(&g).unwrap();
        assert_eq!(o.valid_prefix_len(), 25);
        let ladder = build_ladder(6).unwrap();
        assert_eq!(snake_ordering(&ladder).unwrap().valid_prefix_len(), 8);
        let tree = build_regular_tree(3, 4).unwrap();
        assert_eq!(tree_bfs_ordering(&tree).unwrap().valid_prefix_len(), 10);
    }

    #[test]
    fn ordering_text_round_trip() {
        let g = build_grid_window(3).unwrap();
        let o = spiral_ordering(&g).unwrap();
        let text = o.to_text();
        let back = VertexOrdering::from_text(Arc::clone(&g), &text).unwrap();
        assert_eq!(back.len(), o.len());
        for r in 1..=o.len() {
            assert_eq!(back.vertex_at_rank(r), o.vertex_at_rank(r));
        }

        let tree = build_regular_tree(3, 2).unwrap();
        let to = tree_bfs_ordering(&tree).unwrap();
        let back = VertexOrdering::from_text(Arc::clone(&tree), &to.to_text()).unwrap();
        assert_eq!(back.len(), to.len());
    }
}
