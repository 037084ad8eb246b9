//! Discrete rearrangements and isoperimetric machinery on lattice graphs.
//!
//! The crate builds finite windows of four infinite graph families (planar
//! grid, half-infinite ladder, two-sided path, regular tree), constructs the
//! classical orderings on them (spiral, diamond, snake, lexicographic,
//! center-out, breadth-first), rearranges finitely supported nonnegative
//! functions along an ordering, and measures the effect on exact Lp gradient
//! norms. Brute-force isoperimetric oracles and closed-form profiles back a
//! set of audits that certify, over a finite range, the hypotheses under
//! which a rearrangement satisfies a Polya-Szego inequality.
//!
//! Everything value-level is exact rational arithmetic; only irrational
//! exponents fall back to floating point.
//!
//! The `examples/` directory is the best starting point — one runnable
//! example per capability:
//!
//! ```text
//! cargo run --example build_graphs      # families, windows, boundaries
//! cargo run --example orderings         # the named orderings + containment
//! cargo run --example rearrange_demo    # rearrangement and norms
//! cargo run --example coarea            # both coarea identities
//! cargo run --example profiles          # oracle vs closed-form profiles
//! cargo run --example audits            # the three audit families
//! cargo run --example counterexample    # the L2 obstruction engine
//! cargo run --example random_harness    # seeded property suite
//! cargo run --example render_svg        # deterministic SVG output
//! cargo run --example reproduce         # full reproduction bundle
//! ```
//!
//! A thin binary `gr` exposes the same operations as subcommands; see the
//! README.

pub mod audit;
pub mod cli;
pub mod error;
pub mod graph;
pub mod isoperimetry;
pub mod ordering;
pub mod rearrange;
pub mod render;

pub use error::{Error, Result};
pub use graph::{
    build_grid_window, build_ladder, build_path, build_regular_tree, Coord, Family, Graph,
    VertexId, VertexSet,
};
pub use ordering::{
    diamond_ordering, from_coords, from_vertices, lex_ordering, path_ordering, snake_ordering,
    spiral_ordering, tree_bfs_ordering, OrderingKind, VertexOrdering,
};
pub use rearrange::{LatticeFunction, PNorm, Rational};
