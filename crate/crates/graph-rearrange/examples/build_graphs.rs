//! Build the four graph families and measure a few boundaries.
//!
//! ```text
//! cargo run --example build_graphs
//! ```

use graph_rearrange::graph::set_from_coords;
use graph_rearrange::{build_grid_window, build_ladder, build_path, build_regular_tree, VertexId};

fn main() -> graph_rearrange::Result<()> {
    let grid = build_grid_window(3)?;
    let ladder = build_ladder(6)?;
    let path = build_path(9)?;
    let tree = build_regular_tree(3, 3)?;

    for g in [&grid, &ladder, &path, &tree] {
        let interior = g.vertices().filter(|&v| g.is_interior(v)).count();
        println!(
            "{:<10} {:>3} vertices, {:>3} edges, {:>3} interior",
            g.family().to_string(),
            g.vertex_count(),
            g.edge_count(),
            interior
        );
    }

    // The five-cell block from the edge-isoperimetric discussion.
    let block = set_from_coords(&grid, &[(0, 0), (1, 0), (1, 1), (0, 1), (-1, 1)])?;
    println!(
        "\nblock pentomino: edge boundary {}, vertex boundary {}",
        grid.edge_boundary_count(&block)?,
        grid.vertex_boundary_count(&block)?
    );

    let root: graph_rearrange::VertexSet = [VertexId(0)].into_iter().collect();
    println!(
        "tree root alone: edge boundary {}",
        tree.edge_boundary_count(&root)?
    );

    // Window export format: header, vertices, edges.
    println!("\nladder window in export format:\n{}", ladder.to_text());
    Ok(())
}
