//! Restricted-random aggregation: random growth constrained to preserve the
//! continuity of open space.
//!
//! Starting from a central seed, each step converts one uniformly drawn
//! open cell 4-adjacent to the aggregate, but only if the remaining open
//! cells still form a single 4-connected component. Candidates that would
//! split the open space are rejected and redrawn; growth stops at the
//! budget or when no legal candidate remains.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::rng::Rng;

/// Outcome of a restricted-random aggregation run.
#[derive(Debug, Clone)]
pub struct RrpRun {
    pub grid: Grid,
    /// Cells actually converted to built form (equals the budget unless the
    /// frontier was exhausted first).
    pub placed: usize,
    /// True when growth stopped because no legal candidate remained.
    pub exhausted: bool,
}

pub fn rrp(width: usize, height: usize, cells_to_place: usize, seed: u64) -> Result<RrpRun> {
    if cells_to_place == 0 {
        return Err(Error::InvalidSpec("rrp needs at least one cell".into()));
    }
    if cells_to_place > width * height - 1 {
        return Err(Error::InvalidSpec(format!(
            "budget {cells_to_place} leaves no open space in {width}x{height}"
        )));
    }

    let mut grid = Grid::new(width, height)?;
    let mut rng = Rng::seed_from_u64(seed);

    let seed_x = width / 2;
    let seed_y = height / 2;
    grid.set(seed_x, seed_y, 1);
    let mut placed = 1usize;
    let mut exhausted = false;

    // Frontier: open cells 4-adjacent to the aggregate, each present once.
    let w = grid.width();
    let mut in_frontier = vec![false; width * height];
    let mut frontier: Vec<usize> = Vec::new();
    push_neighbors(&grid, seed_y * w + seed_x, &mut frontier, &mut in_frontier);

    while placed < cells_to_place {
        match draw_legal(&mut grid, &mut rng, &mut frontier, &mut in_frontier) {
            Some(idx) => {
                grid.set(idx % w, idx / w, 1);
                placed += 1;
                push_neighbors(&grid, idx, &mut frontier, &mut in_frontier);
            }
            None => {
                exhausted = true;
                break;
            }
        }
    }

    Ok(RrpRun {
        grid,
        placed,
        exhausted,
    })
}

/// Draw frontier cells uniformly until one keeps the open space connected.
/// Rejected candidates are excluded for this placement only; they return to
/// the frontier afterwards since later growth can change their legality.
fn draw_legal(
    grid: &mut Grid,
    rng: &mut Rng,
    frontier: &mut Vec<usize>,
    in_frontier: &mut [bool],
) -> Option<usize> {
    let mut rejected: Vec<usize> = Vec::new();
    let picked = loop {
        if frontier.is_empty() {
            break None;
        }
        let at = rng.next_index(frontier.len());
        let idx = frontier.swap_remove(at);
        if open_space_stays_connected(grid, idx) {
            in_frontier[idx] = false;
            break Some(idx);
        }
        rejected.push(idx);
    };
    frontier.extend(rejected);
    picked
}

/// Add the open 4-neighbors of `idx` to the frontier.
fn push_neighbors(grid: &Grid, idx: usize, frontier: &mut Vec<usize>, in_frontier: &mut [bool]) {
    let w = grid.width();
    let (x, y) = (idx % w, idx / w);
    let mut consider = |nx: usize, ny: usize| {
        let n = ny * w + nx;
        if grid.cells()[n] == 0 && !in_frontier[n] {
            in_frontier[n] = true;
            frontier.push(n);
        }
    };
    if x > 0 {
        consider(x - 1, y);
    }
    if x + 1 < w {
        consider(x + 1, y);
    }
    if y > 0 {
        consider(x, y - 1);
    }
    if y + 1 < grid.height() {
        consider(x, y + 1);
    }
}

/// Would converting `candidate` keep the open cells one 4-connected
/// component? Checked by flood fill over the open cells with the candidate
/// hypothetically built.
fn open_space_stays_connected(grid: &Grid, candidate: usize) -> bool {
    let (w, h) = (grid.width(), grid.height());
    let cells = grid.cells();
    let open_after = cells.iter().filter(|&&c| c == 0).count() - 1;
    if open_after == 0 {
        return true;
    }

    // Flood from any open cell other than the candidate.
    let start = match (0..cells.len()).find(|&i| cells[i] == 0 && i != candidate) {
        Some(i) => i,
        None => return true,
    };
    let mut seen = vec![false; cells.len()];
    seen[candidate] = true; // treat as built
    seen[start] = true;
    let mut stack = vec![start];
    let mut reached = 1usize;
    while let Some(idx) = stack.pop() {
        let (x, y) = (idx % w, idx / w);
        let mut visit = |n: usize, stack: &mut Vec<usize>, reached: &mut usize| {
            if !seen[n] && cells[n] == 0 {
                seen[n] = true;
                *reached += 1;
                stack.push(n);
            }
        };
        if x > 0 {
            visit(idx - 1, &mut stack, &mut reached);
        }
        if x + 1 < w {
            visit(idx + 1, &mut stack, &mut reached);
        }
        if y > 0 {
            visit(idx - w, &mut stack, &mut reached);
        }
        if y + 1 < h {
            visit(idx + w, &mut stack, &mut reached);
        }
    }
    reached == open_after
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent open-space component count via a second flood fill.
    fn open_components(grid: &Grid) -> usize {
        let (w, h) = (grid.width(), grid.height());
        let cells = grid.cells();
        let mut seen = vec![false; cells.len()];
        let mut components = 0;
        for start in 0..cells.len() {
            if cells[start] != 0 || seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(idx) = stack.pop() {
                let (x, y) = (idx % w, idx / w);
                for n in [
                    (x > 0).then(|| idx - 1),
                    (x + 1 < w).then(|| idx + 1),
                    (y > 0).then(|| idx - w),
                    (y + 1 < h).then(|| idx + w),
                ]
                .into_iter()
                .flatten()
                {
                    if !seen[n] && cells[n] == 0 {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        components
    }

    #[test]
    fn single_placement_is_the_seed() {
        let run = rrp(21, 21, 1, 5).unwrap();
        assert_eq!(run.grid.built_count(), 1);
        assert_eq!(run.grid.get(10, 10), 1);
        assert_eq!(run.placed, 1);
        assert!(!run.exhausted);
    }

    #[test]
    fn open_space_stays_one_component() {
        for seed in 0..5 {
            let run = rrp(40, 40, 300, seed).unwrap();
            assert_eq!(open_components(&run.grid), 1, "seed {seed}");
            assert_eq!(run.grid.built_count(), run.placed);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = rrp(30, 30, 150, 77).unwrap();
        let b = rrp(30, 30, 150, 77).unwrap();
        assert_eq!(a.grid, b.grid);
        assert_eq!(a.placed, b.placed);
    }

    #[test]
    fn rejects_budget_that_fills_grid() {
        assert!(rrp(5, 5, 25, 1).is_err());
        assert!(rrp(5, 5, 24, 1).is_ok());
    }

    #[test]
    fn aggregate_is_connected() {
        let run = rrp(40, 40, 200, 9).unwrap();
        let blocks = crate::blocks::extract_blocks(&run.grid);
        assert_eq!(blocks.len(), 1);
    }
}
