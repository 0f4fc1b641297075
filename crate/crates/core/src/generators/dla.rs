//! Diffusion-limited aggregation on the cell lattice.
//!
//! A seed sits at the grid center; each subsequent particle performs a
//! 4-neighbor random walk launched from a circle just outside the current
//! cluster and sticks on first 4-adjacency to it. Walkers that stray past
//! the kill radius (or off the grid) are relaunched. Growth stops at the
//! particle budget or as soon as the launch circle no longer fits inside
//! the grid.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::rng::Rng;

/// Gap between the cluster's bounding radius and the launch circle.
const LAUNCH_MARGIN: f64 = 5.0;
/// Kill radius as a multiple of the launch radius.
const KILL_FACTOR: f64 = 2.0;

/// Grow a DLA cluster of up to `particles` cells (seed included).
pub fn dla(width: usize, height: usize, particles: usize, seed: u64) -> Result<Grid> {
    if particles == 0 {
        return Err(Error::InvalidSpec("dla needs at least one particle".into()));
    }
    if particles > width * height {
        return Err(Error::InvalidSpec(format!(
            "particle budget {particles} exceeds grid capacity {}",
            width * height
        )));
    }

    let mut grid = Grid::new(width, height)?;
    let cx = (width / 2) as i64;
    let cy = (height / 2) as i64;
    grid.set(cx as usize, cy as usize, 1);

    // Largest launch radius that keeps the whole launch circle on the grid.
    let max_launch = (cx
        .min(cy)
        .min(width as i64 - 1 - cx)
        .min(height as i64 - 1 - cy)) as f64;

    let mut rng = Rng::seed_from_u64(seed);
    let mut cluster_radius = 0.0f64;

    for _ in 1..particles {
        let launch_radius = cluster_radius + LAUNCH_MARGIN;
        if launch_radius + 1.0 >= max_launch {
            break; // cluster touches the launch circle
        }
        let kill_sq = (launch_radius * KILL_FACTOR).powi(2);

        let (mut x, mut y) = launch_point(&mut rng, cx, cy, launch_radius);
        loop {
            if sticks(&grid, x, y) {
                grid.set(x as usize, y as usize, 1);
                let d = dist_sq(x, y, cx, cy).sqrt();
                if d > cluster_radius {
                    cluster_radius = d;
                }
                break;
            }
            let (nx, ny) = step(&mut rng, x, y);
            if !in_grid(&grid, nx, ny) || dist_sq(nx, ny, cx, cy) > kill_sq {
                let relaunched = launch_point(&mut rng, cx, cy, launch_radius);
                x = relaunched.0;
                y = relaunched.1;
            } else {
                x = nx;
                y = ny;
            }
        }
    }
    Ok(grid)
}

fn launch_point(rng: &mut Rng, cx: i64, cy: i64, radius: f64) -> (i64, i64) {
    let angle = rng.next_f64() * std::f64::consts::TAU;
    let x = cx + (radius * angle.cos()).round() as i64;
    let y = cy + (radius * angle.sin()).round() as i64;
    (x, y)
}

#[inline]
fn step(rng: &mut Rng, x: i64, y: i64) -> (i64, i64) {
    match rng.next_index(4) {
        0 => (x - 1, y),
        1 => (x + 1, y),
        2 => (x, y - 1),
        _ => (x, y + 1),
    }
}

#[inline]
fn in_grid(grid: &Grid, x: i64, y: i64) -> bool {
    x >= 0 && y >= 0 && (x as usize) < grid.width() && (y as usize) < grid.height()
}

/// True when `(x, y)` is open and 4-adjacent to a cluster cell.
#[inline]
fn sticks(grid: &Grid, x: i64, y: i64) -> bool {
    if !in_grid(grid, x, y) || grid.is_built(x as usize, y as usize) {
        return false;
    }
    let (xu, yu) = (x as usize, y as usize);
    (xu > 0 && grid.is_built(xu - 1, yu))
        || (xu + 1 < grid.width() && grid.is_built(xu + 1, yu))
        || (yu > 0 && grid.is_built(xu, yu - 1))
        || (yu + 1 < grid.height() && grid.is_built(xu, yu + 1))
}

#[inline]
fn dist_sq(x: i64, y: i64, cx: i64, cy: i64) -> f64 {
    let dx = (x - cx) as f64;
    let dy = (y - cy) as f64;
    dx * dx + dy * dy
}
