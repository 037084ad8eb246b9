//! Print the named vertex orderings and their containment indices.
//!
//! ```text
//! cargo run --example orderings
//! ```

use graph_rearrange::{
    build_grid_window, build_ladder, build_path, build_regular_tree, diamond_ordering,
    lex_ordering, path_ordering, snake_ordering, spiral_ordering, tree_bfs_ordering,
    VertexOrdering,
};

fn show_ranks(name: &str, o: &VertexOrdering, upto: usize) {
    let cells: Vec<String> = (1..=upto.min(o.len()))
        .map(|r| {
            let v = o.vertex_at_rank(r).unwrap();
            match o.graph().coord(v) {
                Some(c) => format!("{}", c),
                None => format!("{v}"),
            }
        })
        .collect();
    println!("{name:<8} {}", cells.join(" "));
}

fn main() -> graph_rearrange::Result<()> {
    let grid = build_grid_window(5)?;
    let spiral = spiral_ordering(&grid)?;
    let diamond = diamond_ordering(&grid)?;
    show_ranks("spiral", &spiral, 16);
    show_ranks("diamond", &diamond, 13);

    let ladder = build_ladder(6)?;
    show_ranks("snake", &snake_ordering(&ladder)?, 8);
    show_ranks("lex", &lex_ordering(&ladder)?, 8);

    let path = build_path(9)?;
    show_ranks("path", &path_ordering(&path)?, 9);

    let tree = build_regular_tree(3, 3)?;
    show_ranks("tree-bfs", &tree_bfs_ordering(&tree)?, 10);

    // Smallest M such that all neighbors of the first N spiral cells have
    // rank at most M. The gap M - N tracks the vertex boundary.
    println!("\nspiral containment indices:");
    println!("  N: {}", (1..=10).map(|n| format!("{n:>3}")).collect::<String>());
    let ms: Vec<usize> = (1..=10)
        .map(|n| spiral.containment_index(n))
        .collect::<graph_rearrange::Result<_>>()?;
    println!("  M: {}", ms.iter().map(|m| format!("{m:>3}")).collect::<String>());
    Ok(())
}
