//! Brute-force isoperimetric oracles on finite search regions plus the
//! closed-form profiles, and the nested-minimizer check for orderings.
//!
//! The oracle enumerates every N-subset of a search region and computes the
//! boundary each subset has in the *infinite* graph: edge boundaries via
//! degree bookkeeping (sum of infinite degrees minus twice the internal edge
//! count), vertex boundaries on a region padded by one ring. A minimum is
//! only certified when some minimizing witness avoids the region border;
//! otherwise the search box was too small and the call fails.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{
    build_grid_window, build_ladder, build_path, build_regular_tree, Coord, Family, Graph,
    VertexId, VertexSet,
};
use crate::ordering::VertexOrdering;

/// Hard cap on subset size; beyond this the enumeration count explodes.
pub const MAX_ORACLE_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Edge,
    Vertex,
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryKind::Edge => "edge",
            BoundaryKind::Vertex => "vertex",
        })
    }
}

/// The infinite graph an isoperimetric problem lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemFamily {
    Grid,
    Ladder,
    Path,
    Tree { degree: u32 },
}

impl ProblemFamily {
    pub fn of(family: Family) -> ProblemFamily {
        match family {
            Family::GridWindow { .. } => ProblemFamily::Grid,
            Family::Ladder { .. } => ProblemFamily::Ladder,
            Family::Path { .. } => ProblemFamily::Path,
            Family::RegularTree { degree, .. } => ProblemFamily::Tree { degree },
        }
    }
}

impl fmt::Display for ProblemFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemFamily::Grid => f.write_str("grid"),
            ProblemFamily::Ladder => f.write_str("ladder"),
            ProblemFamily::Path => f.write_str("path"),
            ProblemFamily::Tree { degree } => write!(f, "tree(d={degree})"),
        }
    }
}

/// Where a profile value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Oracle { box_size: usize },
    ClosedForm,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Oracle { box_size } => write!(f, "oracle(box={box_size})"),
            Provenance::ClosedForm => f.write_str("closed-form"),
        }
    }
}

/// Result of one oracle run: the certified minimum and a witness achieving
/// it, embedded in a window graph so it can be re-measured.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub minimum: usize,
    pub graph: Arc<Graph>,
    pub witness: VertexSet,
}

impl OracleOutcome {
    pub fn witness_coords(&self) -> Vec<(i64, i64)> {
        self.witness
            .iter()
            .filter_map(|&v| self.graph.coord(v).map(|c| (c.x, c.y)))
            .collect()
    }
}

/// Default search box honoring the minimizer-fits-in-box margins:
/// side 2N+1 for the grid, length 2N for ladder and path, and for trees the
/// smallest depth whose interior ball already holds N vertices.
pub fn default_box(family: ProblemFamily, n: usize) -> usize {
    match family {
        ProblemFamily::Grid => 2 * n + 1,
        ProblemFamily::Ladder | ProblemFamily::Path => 2 * n,
        ProblemFamily::Tree { degree } => {
            let d = degree as usize;
            let mut count = 1usize;
            let mut layer = d;
            let mut depth = 0usize;
            while count < n {
                count += layer;
                layer *= d - 1;
                depth += 1;
            }
            depth + 1
        }
    }
}

/// Exhaustive minimum edge boundary over N-subsets of the search box.
pub fn min_edge_boundary(family: ProblemFamily, n: usize, box_size: usize) -> Result<OracleOutcome> {
    oracle(family, BoundaryKind::Edge, n, box_size)
}

/// Exhaustive minimum vertex boundary over N-subsets of the search box.
pub fn min_vertex_boundary(
    family: ProblemFamily,
    n: usize,
    box_size: usize,
) -> Result<OracleOutcome> {
    oracle(family, BoundaryKind::Vertex, n, box_size)
}

/// Closed-form profiles. Supported: grid edge, tree edge and vertex, ladder
/// edge, path edge and vertex. The grid vertex profile has no closed form
/// here and must come from the oracle.
pub fn closed_form_profile(family: ProblemFamily, kind: BoundaryKind, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    match (family, kind) {
        (ProblemFamily::Grid, BoundaryKind::Edge) => {
            let m = (1..).take_while(|&m| m * m <= n).last().unwrap_or(1);
            Ok(if n == m * m {
                4 * m
            } else if n <= m * m + m {
                4 * m + 2
            } else {
                4 * m + 4
            })
        }
        (ProblemFamily::Tree { degree }, _) => Ok((degree as usize - 2) * n + 2),
        (ProblemFamily::Ladder, BoundaryKind::Edge) => Ok(if n % 2 == 0 {
            2
        } else if n == 1 {
            2
        } else {
            3
        }),
        (ProblemFamily::Path, _) => Ok(2),
        (f, k) => Err(Error::UnsupportedProfile(format!("{f} {k}"))),
    }
}

/// Minimum boundary for one N with a default source policy: the closed form
/// when one exists, otherwise the oracle on `box_size` (or the default box).
pub fn minimum_boundary(
    family: ProblemFamily,
    kind: BoundaryKind,
    n: usize,
    box_size: Option<usize>,
) -> Result<(usize, Provenance)> {
    match closed_form_profile(family, kind, n) {
        Ok(v) if box_size.is_none() => Ok((v, Provenance::ClosedForm)),
        closed => {
            let b = box_size.unwrap_or_else(|| default_box(family, n));
            let outcome = oracle(family, kind, n, b)?;
            if let Ok(v) = closed {
                if v != outcome.minimum {
                    return Err(Error::ProfileMismatch {
                        n,
                        oracle: outcome.minimum,
                        closed_form: v,
                    });
                }
            }
            Ok((outcome.minimum, Provenance::Oracle { box_size: b }))
        }
    }
}

/// Per-N minimal boundary sizes with provenance.
#[derive(Debug, Clone)]
pub struct IsoperimetricProfile {
    pub family: ProblemFamily,
    pub kind: BoundaryKind,
    pub values: BTreeMap<usize, (usize, Provenance)>,
}

impl IsoperimetricProfile {
    pub fn value(&self, n: usize) -> Option<usize> {
        self.values.get(&n).map(|&(v, _)| v)
    }

    pub fn is_nondecreasing(&self) -> bool {
        let mut prev = 0;
        for (&_, &(v, _)) in &self.values {
            if v < prev {
                return false;
            }
            prev = v;
        }
        true
    }
}

/// Computes the profile for N in `ns`. The oracle runs when `box_size` is
/// given or when no closed form exists; when both sources are available they
/// must agree.
pub fn compute_profile(
    family: ProblemFamily,
    kind: BoundaryKind,
    ns: impl IntoIterator<Item = usize>,
    box_size: Option<usize>,
) -> Result<IsoperimetricProfile> {
    let mut values = BTreeMap::new();
    for n in ns {
        let entry = minimum_boundary(family, kind, n, box_size)?;
        values.insert(n, entry);
    }
    Ok(IsoperimetricProfile {
        family,
        kind,
        values,
    })
}

/// One row of a nested-minimizer comparison.
#[derive(Debug, Clone)]
pub struct NestedRow {
    pub n: usize,
    pub prefix_boundary: usize,
    pub minimum: usize,
    pub provenance: Provenance,
    pub equal: bool,
}

#[derive(Debug, Clone)]
pub struct NestedMinimizerReport {
    pub kind: BoundaryKind,
    pub rows: Vec<NestedRow>,
    pub first_failure: Option<usize>,
}

impl NestedMinimizerReport {
    pub fn all_equal(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Compares every ordering prefix boundary against the per-size minimum.
pub fn nested_minimizer_check(
    o: &VertexOrdering,
    kind: BoundaryKind,
    nmax: usize,
    box_size: Option<usize>,
) -> Result<NestedMinimizerReport> {
    if nmax == 0 || nmax > o.valid_prefix_len() {
        return Err(Error::PrefixRangeExceeded {
            requested: nmax,
            valid: o.valid_prefix_len(),
        });
    }
    let family = ProblemFamily::of(o.graph().family());
    let mut rows = Vec::with_capacity(nmax);
    let mut first_failure = None;
    for n in 1..=nmax {
        let prefix = o.prefix(n);
        let prefix_boundary = match kind {
            BoundaryKind::Edge => o.graph().edge_boundary_count(&prefix)?,
            BoundaryKind::Vertex => o.graph().vertex_boundary_count(&prefix)?,
        };
        let (minimum, provenance) = minimum_boundary(family, kind, n, box_size)?;
        let equal = prefix_boundary == minimum;
        if !equal && first_failure.is_none() {
            first_failure = Some(n);
        }
        rows.push(NestedRow {
            n,
            prefix_boundary,
            minimum,
            provenance,
            equal,
        });
    }
    Ok(NestedMinimizerReport {
        kind,
        rows,
        first_failure,
    })
}

/// Whether two planar cell sets agree up to translation, rotation, and
/// reflection (the eight lattice isometries).
pub fn congruent_up_to_isometry(a: &[(i64, i64)], b: &[(i64, i64)]) -> bool {
    fn normalize(cells: &[(i64, i64)]) -> Vec<(i64, i64)> {
        let min_x = cells.iter().map(|c| c.0).min().unwrap_or(0);
        let min_y = cells.iter().map(|c| c.1).min().unwrap_or(0);
        let mut out: Vec<(i64, i64)> = cells.iter().map(|c| (c.0 - min_x, c.1 - min_y)).collect();
        out.sort();
        out
    }
    if a.len() != b.len() {
        return false;
    }
    let target = normalize(b);
    let transforms: [fn((i64, i64)) -> (i64, i64); 8] = [
        |(x, y)| (x, y),
        |(x, y)| (-y, x),
        |(x, y)| (-x, -y),
        |(x, y)| (y, -x),
        |(x, y)| (-x, y),
        |(x, y)| (x, -y),
        |(x, y)| (y, x),
        |(x, y)| (-y, -x),
    ];
    transforms.iter().any(|t| {
        let image: Vec<(i64, i64)> = a.iter().map(|&c| t(c)).collect();
        normalize(&image) == target
    })
}

// ---------------------------------------------------------------------------
// Enumeration machinery
// ---------------------------------------------------------------------------

/// 256-bit set over the padded cell universe.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Mask([u64; 4]);

impl Mask {
    fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1u64 << (i & 63);
    }

    fn or_assign(&mut self, other: &Mask) {
        for k in 0..4 {
            self.0[k] |= other.0[k];
        }
    }

    fn and_count(&self, other: &Mask) -> u32 {
        (0..4).map(|k| (self.0[k] & other.0[k]).count_ones()).sum()
    }

    fn diff_count(&self, other: &Mask) -> u32 {
        (0..4).map(|k| (self.0[k] & !other.0[k]).count_ones()).sum()
    }
}

/// What a region cell denotes, for reporting witnesses.
#[derive(Debug, Clone)]
enum CellLabels {
    Coords(Vec<Coord>),
    TreeIds(Arc<Graph>),
}

/// Search region plus the one-ring padding needed for vertex boundaries.
struct Universe {
    /// Padded-universe bit of each region cell.
    bit: Vec<usize>,
    /// Neighbor mask (padded bits) of each region cell.
    nbr: Vec<Mask>,
    /// Infinite-graph degree of each region cell.
    deg: Vec<u64>,
    /// Region cells on the truncation border (uncertified if all witnesses
    /// touch them).
    border: Vec<bool>,
    /// First cell forced into every subset (translation anchoring).
    anchored: bool,
    labels: CellLabels,
}

const MAX_BITS: usize = 256;

impl Universe {
    fn grid(box_size: usize) -> Result<Universe> {
        let r = (box_size / 2).max(1) as i64;
        let width = 2 * r + 3;
        let height = r + 3;
        if (width * height) as usize > MAX_BITS {
            return Err(Error::InvalidParameter(format!(
                "grid box {box_size} exceeds the {MAX_BITS}-bit search universe"
            )));
        }
        let bit_at = |x: i64, y: i64| -> usize { ((y + 1) * width + (x + r + 1)) as usize };
        // Region cells in (y, x) order; the anchor (0,0) comes first and the
        // ineligible cells left of it in row 0 are excluded. Every subset is
        // normalized by translating its lowest-then-leftmost cell to the
        // origin, so this region covers all shapes whose bounding box fits in
        // an (r+1) x (r+1) square.
        let mut coords = Vec::new();
        for y in 0..=r {
            for x in -r..=r {
                if y == 0 && x < 0 {
                    continue;
                }
                coords.push(Coord::new(x, y));
            }
        }
        let mut u = Universe {
            bit: Vec::new(),
            nbr: Vec::new(),
            deg: Vec::new(),
            border: Vec::new(),
            anchored: true,
            labels: CellLabels::Coords(coords.clone()),
        };
        for c in &coords {
            u.bit.push(bit_at(c.x, c.y));
            let mut m = Mask::default();
            for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                m.set(bit_at(c.x + dx, c.y + dy));
            }
            u.nbr.push(m);
            u.deg.push(4);
            u.border.push(c.x.abs() == r || c.y == r);
        }
        Ok(u)
    }

    fn ladder(box_size: usize) -> Result<Universe> {
        let len = box_size.max(2) as i64;
        if (2 * (len + 1)) as usize > MAX_BITS {
            return Err(Error::InvalidParameter(format!(
                "ladder box {box_size} exceeds the {MAX_BITS}-bit search universe"
            )));
        }
        let bit_at = |x: i64, y: i64| -> usize { (x * 2 + y) as usize };
        let mut coords = Vec::new();
        for x in 0..len {
            for y in 0..2 {
                coords.push(Coord::new(x, y));
            }
        }
        let mut u = Universe {
            bit: Vec::new(),
            nbr: Vec::new(),
            deg: Vec::new(),
            border: Vec::new(),
            anchored: false,
            labels: CellLabels::Coords(coords.clone()),
        };
        for c in &coords {
            u.bit.push(bit_at(c.x, c.y));
            let mut m = Mask::default();
            m.set(bit_at(c.x, 1 - c.y));
            m.set(bit_at(c.x + 1, c.y));
            if c.x > 0 {
                m.set(bit_at(c.x - 1, c.y));
            }
            u.nbr.push(m);
            u.deg.push(if c.x == 0 { 2 } else { 3 });
            u.border.push(c.x == len - 1);
        }
        Ok(u)
    }

    fn path(box_size: usize) -> Result<Universe> {
        let len = box_size.max(2) as i64;
        if (len + 2) as usize > MAX_BITS {
            return Err(Error::InvalidParameter(format!(
                "path box {box_size} exceeds the {MAX_BITS}-bit search universe"
            )));
        }
        let bit_at = |x: i64| -> usize { (x + 1) as usize };
        let coords: Vec<Coord> = (0..len).map(|x| Coord::new(x, 0)).collect();
        let mut u = Universe {
            bit: Vec::new(),
            nbr: Vec::new(),
            deg: Vec::new(),
            border: Vec::new(),
            anchored: true,
            labels: CellLabels::Coords(coords.clone()),
        };
        for c in &coords {
            u.bit.push(bit_at(c.x));
            let mut m = Mask::default();
            m.set(bit_at(c.x + 1));
            m.set(bit_at(c.x - 1));
            u.nbr.push(m);
            u.deg.push(2);
            u.border.push(c.x == len - 1);
        }
        Ok(u)
    }

    fn tree(degree: u32, depth: usize) -> Result<Universe> {
        let window = build_regular_tree(degree, depth as u32)?;
        let region = window.vertex_count();
        let leaves = window
            .vertices()
            .filter(|&v| window.depth(v) as usize == depth)
            .count();
        let pad = leaves * (degree as usize - 1);
        if region + pad > MAX_BITS {
            return Err(Error::InvalidParameter(format!(
                "tree window depth {depth} exceeds the {MAX_BITS}-bit search universe"
            )));
        }
        let mut u = Universe {
            bit: Vec::new(),
            nbr: Vec::new(),
            deg: Vec::new(),
            border: Vec::new(),
            anchored: false,
            labels: CellLabels::TreeIds(Arc::clone(&window)),
        };
        let mut next_pad = region;
        for v in window.vertices() {
            u.bit.push(v.index());
            let mut m = Mask::default();
            for &w in window.neighbors(v) {
                m.set(w.index());
            }
            if window.depth(v) as usize == depth && depth > 0 {
                // Synthetic bits for the children cut off by the window.
                for _ in 0..degree - 1 {
                    m.set(next_pad);
                    next_pad += 1;
                }
            }
            u.nbr.push(m);
            u.deg.push(degree as u64);
            u.border.push(window.depth(v) as usize == depth);
        }
        Ok(u)
    }

    fn cells(&self) -> usize {
        self.bit.len()
    }
}

/// Running best: minimum value plus the first (lexicographically least)
/// witness, preferring witnesses that avoid the region border.
#[derive(Debug, Clone)]
struct Best {
    value: u32,
    interior_witness: Option<Vec<u16>>,
    any_witness: Option<Vec<u16>>,
}

impl Best {
    fn empty() -> Best {
        Best {
            value: u32::MAX,
            interior_witness: None,
            any_witness: None,
        }
    }

    fn offer(&mut self, value: u32, chosen: &[u16], touches_border: bool) {
        if value < self.value {
            self.value = value;
            self.any_witness = Some(chosen.to_vec());
            self.interior_witness = (!touches_border).then(|| chosen.to_vec());
        } else if value == self.value {
            if self.interior_witness.is_none() && !touches_border {
                self.interior_witness = Some(chosen.to_vec());
            }
        }
    }

    /// Merge preserving enumeration order: `self` ranges over lexicographically
    /// smaller subsets than `later`.
    fn merge(mut self, later: Best) -> Best {
        if later.value < self.value {
            return later;
        }
        if later.value == self.value && self.interior_witness.is_none() {
            self.interior_witness = later.interior_witness;
        }
        self
    }
}

struct SearchState {
    set: Mask,
    union: Mask,
    internal: u32,
    degsum: u64,
    border_hits: u32,
}

impl SearchState {
    fn new() -> SearchState {
        SearchState {
            set: Mask::default(),
            union: Mask::default(),
            internal: 0,
            degsum: 0,
            border_hits: 0,
        }
    }

    fn with_cell(&self, u: &Universe, i: usize) -> SearchState {
        let mut s = SearchState {
            set: self.set,
            union: self.union,
            internal: self.internal + u.nbr[i].and_count(&self.set),
            degsum: self.degsum + u.deg[i],
            border_hits: self.border_hits + u32::from(u.border[i]),
        };
        s.set.set(u.bit[i]);
        s.union.or_assign(&u.nbr[i]);
        s
    }

    fn value(&self, kind: BoundaryKind) -> u32 {
        match kind {
            BoundaryKind::Edge => (self.degsum - 2 * self.internal as u64) as u32,
            BoundaryKind::Vertex => self.union.diff_count(&self.set),
        }
    }
}

fn recurse(
    u: &Universe,
    kind: BoundaryKind,
    remaining: usize,
    start: usize,
    state: &SearchState,
    chosen: &mut Vec<u16>,
    best: &mut Best,
) {
    if remaining == 0 {
        best.offer(state.value(kind), chosen, state.border_hits > 0);
        return;
    }
    let last = u.cells() - remaining;
    for i in start..=last {
        let next = state.with_cell(u, i);
        chosen.push(i as u16);
        recurse(u, kind, remaining - 1, i + 1, &next, chosen, best);
        chosen.pop();
    }
}

fn oracle(
    family: ProblemFamily,
    kind: BoundaryKind,
    n: usize,
    box_size: usize,
) -> Result<OracleOutcome> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    if n > MAX_ORACLE_N {
        return Err(Error::SubsetTooLarge {
            n,
            max: MAX_ORACLE_N,
        });
    }
    let u = match family {
        ProblemFamily::Grid => Universe::grid(box_size)?,
        ProblemFamily::Ladder => Universe::ladder(box_size)?,
        ProblemFamily::Path => Universe::path(box_size)?,
        ProblemFamily::Tree { degree } => Universe::tree(degree, box_size)?,
    };
    if u.cells() < n {
        return Err(Error::InvalidParameter(format!(
            "box {box_size} holds only {} cells, need {n}",
            u.cells()
        )));
    }

    let base = SearchState::new();
    let best = if u.anchored {
        let anchored = base.with_cell(&u, 0);
        if n == 1 {
            let mut b = Best::empty();
            b.offer(anchored.value(kind), &[0], anchored.border_hits > 0);
            b
        } else {
            let last = u.cells() - (n - 1);
            (1..=last)
                .into_par_iter()
                .map(|i| {
                    let mut b = Best::empty();
                    let mut chosen = vec![0u16, i as u16];
                    let state = anchored.with_cell(&u, i);
                    recurse(&u, kind, n - 2, i + 1, &state, &mut chosen, &mut b);
                    b
                })
                .reduce(Best::empty, Best::merge)
        }
    } else {
        let last = u.cells() - n;
        (0..=last)
            .into_par_iter()
            .map(|i| {
                let mut b = Best::empty();
                let mut chosen = vec![i as u16];
                let state = base.with_cell(&u, i);
                recurse(&u, kind, n - 1, i + 1, &state, &mut chosen, &mut b);
                b
            })
            .reduce(Best::empty, Best::merge)
    };

    let witness_cells = best.interior_witness.ok_or(Error::BoxTooSmall)?;
    let minimum = best.value as usize;

    let (graph, witness) = match &u.labels {
        CellLabels::Coords(coords) => {
            let picked: Vec<Coord> = witness_cells
                .iter()
                .map(|&i| coords[i as usize])
                .collect();
            embed_witness(family, &picked)?
        }
        CellLabels::TreeIds(window) => {
            let set: VertexSet = witness_cells
                .iter()
                .map(|&i| VertexId(i as u32))
                .collect();
            (Arc::clone(window), set)
        }
    };
    Ok(OracleOutcome {
        minimum,
        graph,
        witness,
    })
}

/// Embeds witness coordinates into a window graph large enough that the
/// witness is interior, so graph-core can re-measure its boundary.
fn embed_witness(family: ProblemFamily, picked: &[Coord]) -> Result<(Arc<Graph>, VertexSet)> {
    match family {
        ProblemFamily::Grid => {
            let extent = picked
                .iter()
                .map(|c| c.x.abs().max(c.y.abs()))
                .max()
                .unwrap_or(0);
            let g = build_grid_window(extent as u32 + 1)?;
            let set = picked
                .iter()
                .map(|&c| g.vertex_at(c).unwrap())
                .collect();
            Ok((g, set))
        }
        ProblemFamily::Ladder => {
            let extent = picked.iter().map(|c| c.x).max().unwrap_or(0);
            let g = build_ladder(extent as u32 + 2)?;
            let set = picked
                .iter()
                .map(|&c| g.vertex_at(c).unwrap())
                .collect();
            Ok((g, set))
        }
        ProblemFamily::Path => {
            let extent = picked.iter().map(|c| c.x).max().unwrap_or(0);
            let g = build_path(2 * (extent as u32 + 1) + 1)?;
            let set = picked
                .iter()
                .map(|&c| g.vertex_at(c).unwrap())
                .collect();
            Ok((g, set))
        }
        ProblemFamily::Tree { .. } => unreachable!("tree witnesses use the window directly"),
    }
}
