//! Deterministic scalable-vector-graphics output for grid and ladder data.
//!
//! Output is a pure function of the input: integer geometry, exact-rational
//! brightness levels, no timestamps. Identical inputs give byte-identical
//! files.

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ordering::VertexOrdering;
use crate::rearrange::{LatticeFunction, Rational};

const CELL: i64 = 40;
const MARGIN: i64 = 30;

fn check_planar(g: &Graph) -> Result<()> {
    match g.family().name() {
        "grid" | "ladder" => Ok(()),
        _ => Err(Error::UnsupportedRender),
    }
}

struct Canvas {
    min_x: i64,
    min_y: i64,
    max_x: i64,
    max_y: i64,
    body: String,
}

impl Canvas {
    fn new(min_x: i64, min_y: i64, max_x: i64, max_y: i64) -> Canvas {
        Canvas {
            min_x,
            min_y,
            max_x,
            max_y,
            body: String::new(),
        }
    }

    fn sx(&self, x: i64) -> i64 {
        MARGIN + (x - self.min_x) * CELL
    }

    /// Lattice y grows upward, screen y downward.
    fn sy(&self, y: i64) -> i64 {
        MARGIN + (self.max_y - y) * CELL
    }

    fn width(&self) -> i64 {
        2 * MARGIN + (self.max_x - self.min_x + 1) * CELL
    }

    fn height(&self) -> i64 {
        2 * MARGIN + (self.max_y - self.min_y + 1) * CELL
    }

    fn rect(&mut self, x: i64, y: i64, fill: &str) {
        let sx = self.sx(x);
        let sy = self.sy(y);
        self.body.push_str(&format!(
            "<rect x=\"{sx}\" y=\"{sy}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{fill}\" stroke=\"#808080\" stroke-width=\"1\"/>\n"
        ));
    }

    fn label(&mut self, x: i64, y: i64, text: &str, fill: &str) {
        let cx = self.sx(x) + CELL / 2;
        let cy = self.sy(y) + CELL / 2 + 5;
        self.body.push_str(&format!(
            "<text x=\"{cx}\" y=\"{cy}\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\" fill=\"{fill}\">{text}</text>\n"
        ));
    }

    /// Axis lines through the lattice origin.
    fn axes(&mut self) {
        let x0 = self.sx(self.min_x) - MARGIN / 2;
        let x1 = self.sx(self.max_x) + CELL + MARGIN / 2;
        let y0 = self.sy(self.max_y) - MARGIN / 2;
        let y1 = self.sy(self.min_y) + CELL + MARGIN / 2;
        // Horizontal axis at lattice y = 0, vertical at lattice x = 0; both
        // run along cell boundaries just below/left of the origin cell.
        let ay = self.sy(0) + CELL;
        let ax = self.sx(0);
        self.body.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{ay}\" x2=\"{x1}\" y2=\"{ay}\" stroke=\"#404040\" stroke-width=\"1\"/>\n"
        ));
        self.body.push_str(&format!(
            "<line x1=\"{ax}\" y1=\"{y0}\" x2=\"{ax}\" y2=\"{y1}\" stroke=\"#404040\" stroke-width=\"1\"/>\n"
        ));
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n{}</svg>\n",
            self.width(),
            self.height(),
            self.width(),
            self.height(),
            self.body
        )
    }
}

/// Gray level proportional to value / max, computed exactly then floored.
fn gray(value: &Rational, max: &Rational) -> String {
    if max.is_zero() {
        return "#000000".into();
    }
    let level = (value * Rational::from_integer(255.into()) / max)
        .floor()
        .to_integer()
        .to_u8()
        .unwrap_or(255);
    format!("#{level:02x}{level:02x}{level:02x}")
}

/// Heatmap of a function over the bounding box of its support; brightness is
/// proportional to the value. An empty function yields a blank canvas with
/// axes only.
pub fn render_function(f: &LatticeFunction) -> Result<String> {
    let g = f.graph();
    check_planar(g)?;
    let support = f.support();
    if support.is_empty() {
        let mut canvas = Canvas::new(-1, -1, 1, 1);
        canvas.axes();
        return Ok(canvas.finish());
    }
    let coords: Vec<(i64, i64)> = support
        .iter()
        .map(|&v| {
            let c = g.coord(v).expect("planar families carry coords");
            (c.x, c.y)
        })
        .collect();
    let min_x = coords.iter().map(|c| c.0).min().unwrap();
    let max_x = coords.iter().map(|c| c.0).max().unwrap();
    let min_y = coords.iter().map(|c| c.1).min().unwrap();
    let max_y = coords.iter().map(|c| c.1).max().unwrap();
    let mut canvas = Canvas::new(min_x, min_y, max_x, max_y);
    let max = f.sup();
    for y in (min_y..=max_y).rev() {
        for x in min_x..=max_x {
            if let Some(v) = g.vertex_at(crate::graph::Coord::new(x, y)) {
                canvas.rect(x, y, &gray(&f.value(v), &max));
            }
        }
    }
    canvas.axes();
    Ok(canvas.finish())
}

/// Rank labels of the first `upto` ordering positions at their lattice cells.
pub fn render_ordering(o: &VertexOrdering, upto: usize) -> Result<String> {
    let g = o.graph();
    check_planar(g)?;
    let upto = upto.min(o.len()).max(1);
    let coords: Vec<(i64, i64)> = (1..=upto)
        .map(|r| {
            let c = g.coord(o.vertex_at_rank(r).unwrap()).unwrap();
            (c.x, c.y)
        })
        .collect();
    let min_x = coords.iter().map(|c| c.0).min().unwrap();
    let max_x = coords.iter().map(|c| c.0).max().unwrap();
    let min_y = coords.iter().map(|c| c.1).min().unwrap();
    let max_y = coords.iter().map(|c| c.1).max().unwrap();
    let mut canvas = Canvas::new(min_x, min_y, max_x, max_y);
    for (i, &(x, y)) in coords.iter().enumerate() {
        canvas.rect(x, y, "#ffffff");
        canvas.label(x, y, &(i + 1).to_string(), "#000000");
    }
    canvas.axes();
    Ok(canvas.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_grid_window, build_regular_tree};
    use crate::ordering::spiral_ordering;
    use crate::rearrange::{rational_int, LatticeFunction};
    use std::sync::Arc;

    #[test]
    fn heatmap_of_plus_is_three_by_three_with_bright_center() {
        let g = build_grid_window(4).unwrap();
        let f = LatticeFunction::from_coords(
            &g,
            &[
                ((0, 0), rational_int(2)),
                ((1, 0), rational_int(1)),
                ((-1, 0), rational_int(1)),
                ((0, 1), rational_int(1)),
                ((0, -1), rational_int(1)),
            ],
        )
        .unwrap();
        let svg = render_function(&f).unwrap();
        assert_eq!(svg.matches("<rect x=").count(), 9);
        assert!(svg.contains("#ffffff\" stroke")); // center at full brightness
        assert!(svg.contains("#7f7f7f")); // arms at half brightness
    }

    #[test]
    fn empty_function_gives_axes_only() {
        let g = build_grid_window(2).unwrap();
        let f = LatticeFunction::zero(Arc::clone(&g));
        let svg = render_function(&f).unwrap();
        assert_eq!(svg.matches("<rect x=").count(), 0);
        assert_eq!(svg.matches("<line").count(), 2);
    }

    #[test]
    fn ordering_labels_match_spiral_layout() {
        let g = build_grid_window(3).unwrap();
        let o = spiral_ordering(&g).unwrap();
        let svg = render_ordering(&o, 16).unwrap();
        assert_eq!(svg.matches("<text").count(), 16);
        assert!(svg.contains(">10<"));
    }

    #[test]
    fn output_is_deterministic() {
        let g = build_grid_window(3).unwrap();
        let o = spiral_ordering(&g).unwrap();
        assert_eq!(
            render_ordering(&o, 9).unwrap(),
            render_ordering(&o, 9).unwrap()
        );
    }

    #[test]
    fn unsupported_family_is_rejected() {
        let tree = build_regular_tree(3, 2).unwrap();
        let f = LatticeFunction::zero(tree);
        assert!(matches!(render_function(&f), Err(Error::UnsupportedRender)));
    }
}
