//! Urban-block extraction: 4-connected components of built cells, their
//! areas and perimeters, and the convex hull of the built footprint.
//!
//! Perimeter counts only interfaces between a built cell and an open cell
//! strictly inside the grid. Edges along the grid boundary contribute
//! nothing: an analysis window is an arbitrary crop, and counting the cut
//! edge would inflate clipped blocks.

use crate::error::{Error, Result};
use crate::grid::Grid;

/// One 4-connected component of built cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Deterministic id: blocks are numbered in row-major order of their
    /// first-scanned cell.
    pub id: usize,
    /// Member cell count (the A_i of the permeability measure).
    pub area: usize,
    /// Built/open interior-edge count (the P_i of the permeability measure).
    pub perimeter: usize,
    /// Member coordinates, in discovery order.
    pub cells: Vec<(u32, u32)>,
}

/// Decompose the built cells of `grid` into 4-connected blocks.
///
/// The blocks partition the built cells: every built cell belongs to exactly
/// one block and block areas sum to the grid's built-cell count.
pub fn extract_blocks(grid: &Grid) -> Vec<Block> {
    let (w, h) = (grid.width(), grid.height());
    let cells = grid.cells();
    let mut visited = vec![false; w * h];
    let mut blocks = Vec::new();
    let mut stack: Vec<usize> = Vec::new();

    for start in 0..w * h {
        if cells[start] != 1 || visited[start] {
            continue;
        }
        let id = blocks.len();
        let mut area = 0usize;
        let mut perimeter = 0usize;
        let mut members = Vec::new();

        visited[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (x, y) = (idx % w, idx / w);
            area += 1;
            members.push((x as u32, y as u32));

            // Left, right, up, down. Out-of-grid edges are not perimeter.
            if x > 0 {
                visit_neighbor(idx - 1, cells, &mut visited, &mut stack, &mut perimeter);
            }
            if x + 1 < w {
                visit_neighbor(idx + 1, cells, &mut visited, &mut stack, &mut perimeter);
            }
            if y > 0 {
                visit_neighbor(idx - w, cells, &mut visited, &mut stack, &mut perimeter);
            }
            if y + 1 < h {
                visit_neighbor(idx + w, cells, &mut visited, &mut stack, &mut perimeter);
            }
        }

        blocks.push(Block {
            id,
            area,
            perimeter,
            cells: members,
        });
    }
    blocks
}

#[inline]
fn visit_neighbor(
    idx: usize,
    cells: &[u8],
    visited: &mut [bool],
    stack: &mut Vec<usize>,
    perimeter: &mut usize,
) {
    if cells[idx] == 1 {
        if !visited[idx] {
            visited[idx] = true;
            stack.push(idx);
        }
    } else {
        *perimeter += 1;
    }
}

/// Area of the convex hull of the corner points of all built unit-square
/// cells, via monotone-chain hull construction and the shoelace formula.
///
/// Taking cell corners rather than centers gives a lone building hull area 1
/// instead of a degenerate point. Errors when the grid has no built cells.
pub fn convex_hull_area(grid: &Grid) -> Result<f64> {
    let pts = corner_candidates(grid);
    if pts.is_empty() {
        return Err(Error::EmptySettlement);
    }
    let hull = convex_hull(pts);
    Ok(polygon_double_area(&hull) as f64 / 2.0)
}

/// Candidate corner points: for each grid row, the corners of the leftmost
/// and rightmost built cells. Interior corners can never be hull vertices,
/// so this keeps hull construction linear in the grid height.
fn corner_candidates(grid: &Grid) -> Vec<(i64, i64)> {
    let mut pts = Vec::new();
    for y in 0..grid.height() {
        let mut min_x = None;
        let mut max_x = 0usize;
        for x in 0..grid.width() {
            if grid.is_built(x, y) {
                if min_x.is_none() {
                    min_x = Some(x);
                }
                max_x = x;
            }
        }
        if let Some(min_x) = min_x {
            let (y0, y1) = (y as i64, y as i64 + 1);
            let (l, r) = (min_x as i64, max_x as i64 + 1);
            pts.push((l, y0));
            pts.push((l, y1));
            pts.push((r, y0));
            pts.push((r, y1));
        }
    }
    pts
}

/// Monotone-chain convex hull on integer points; returns the hull in
/// counter-clockwise order without repeating the first point.
fn convex_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort_unstable();
    pts.dedup();
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(2 * n);
    // Lower hull, then upper hull.
    for &p in pts.iter() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev() {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

#[inline]
fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Twice the shoelace area; exact in i64 for grid-scale coordinates.
fn polygon_double_area(hull: &[(i64, i64)]) -> i64 {
    if hull.len() < 3 {
        return 0;
    }
    let mut acc = 0i64;
    for i in 0..hull.len() {
        let (x0, y0) = hull[i];
        let (x1, y1) = hull[(i + 1) % hull.len()];
        acc += x0 * y1 - x1 * y0;
    }
    acc.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_open_grid_has_no_blocks() {
        let g = Grid::new(5, 5).unwrap();
        assert!(extract_blocks(&g).is_empty());
    }

    #[test]
    fn single_center_cell() {
        let g = Grid::from_rows(&["000", "010", "000"]).unwrap();
        let blocks = extract_blocks(&g);
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].area, 1);
        assert_eq!(blocks[0].perimeter, 4);
        assert_eq!(blocks[0].cells, vec![(1, 1)]);
    }

    #[test]
    fn plus_pentomino_perimeter() {
        let g = Grid::from_rows(&["00000", "00100", "01110", "00100", "00000"]).unwrap();
        let blocks = extract_blocks(&g);
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].area, 5);
        assert_eq!(blocks[0].perimeter, 12);
    }

    #[test]
    fn boundary_edges_are_not_perimeter() {
        // Single cell in a grid corner: only two interior neighbors.
        let g = Grid::from_rows(&["10", "00"]).unwrap();
        let blocks = extract_blocks(&g);
        assert_eq!(blocks[0].perimeter, 2);
        // All-built grid: no open interfaces at all.
        let full = Grid::from_rows(&["11", "11"]).unwrap();
        assert_eq!(extract_blocks(&full)[0].perimeter, 0);
    }

    #[test]
    fn diagonal_cells_stay_separate() {
        let g = Grid::from_rows(&["10", "01"]).unwrap();
        let blocks = extract_blocks(&g);
        assert_eq!(blocks.len(), 2);
        // Deterministic ids in row-major scan order.
        assert_eq!(blocks[0].cells[0], (0, 0));
        assert_eq!(blocks[1].cells[0], (1, 1));
    }

    #[test]
    fn areas_partition_built_cells() {
        let g = Grid::from_rows(&["11010", "01011", "00100", "11001"]).unwrap();
        let blocks = extract_blocks(&g);
        let total: usize = blocks.iter().map(|b| b.area).sum();
        assert_eq!(total, g.built_count());
    }

    #[test]
    fn hull_of_single_cell_is_unit_square() {
        let g = Grid::from_rows(&["000", "010", "000"]).unwrap();
        assert_eq!(convex_hull_area(&g).unwrap(), 1.0);
    }

    #[test]
    fn hull_of_solid_square() {
        let g = Grid::from_rows(&["110", "110", "000"]).unwrap();
        assert_eq!(convex_hull_area(&g).unwrap(), 4.0);
    }

    #[test]
    fn hull_spans_gap_between_cells() {
        // Cells at (0,0) and (2,0): hull is the 3x1 corner rectangle.
        let g = Grid::from_rows(&["101"]).unwrap();
        assert_eq!(convex_hull_area(&g).unwrap(), 3.0);
    }

    #[test]
    fn hull_errors_on_empty_settlement() {
        let g = Grid::new(4, 4).unwrap();
        assert!(matches!(convex_hull_area(&g), Err(Error::EmptySettlement)));
    }

    #[test]
    fn hull_at_least_built_count() {
        let g = Grid::from_rows(&["10010", "00100", "01001"]).unwrap();
        assert!(convex_hull_area(&g).unwrap() >= g.built_count() as f64);
    }

    #[test]
    fn hull_invariant_under_rotation() {
        let g = Grid::from_rows(&["10010", "00100", "01001", "00011"]).unwrap();
        let a = convex_hull_area(&g).unwrap();
        let b = convex_hull_area(&g.rotate90()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn block_multiset_invariant_under_rotation() {
        let g = Grid::from_rows(&["11010", "01011", "00100", "11001"]).unwrap();
        let mut a: Vec<(usize, usize)> = extract_blocks(&g)
            .iter()
            .map(|b| (b.area, b.perimeter))
            .collect();
        let mut b: Vec<(usize, usize)> = extract_blocks(&g.rotate90())
            .iter()
            .map(|b| (b.area, b.perimeter))
            .collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }
}
