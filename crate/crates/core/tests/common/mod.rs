//! Independent oracles shared by the integration suites. Everything here
//! recomputes from first principles — no calls into the production scan,
//! labeling, or incremental-update paths it checks.
#![allow(dead_code)] // each test binary uses its own subset

use std::collections::HashMap;

use morphospace_core::rng::Rng;
use morphospace_core::Grid;

/// Brute-force window recount: explicit double loop, explicit 4x4 gather.
pub fn brute_histogram(grid: &Grid) -> (HashMap<u16, u64>, u64) {
    let mut counts = HashMap::new();
    let mut total = 0u64;
    for oy in 0..=grid.height() - 4 {
        for ox in 0..=grid.width() - 4 {
            let mut code = 0u16;
            for dy in 0..4 {
                for dx in 0..4 {
                    code |= (grid.get(ox + dx, oy + dy) as u16) << (dy * 4 + dx);
                }
            }
            if code != 0 && code != u16::MAX {
                *counts.entry(code).or_insert(0u64) += 1;
                total += 1;
            }
        }
    }
    (counts, total)
}

/// Entropy via the algebraic identity H = log2(T) - (sum c*log2 c) / T,
/// accumulated over codes in ascending order with Kahan compensation.
pub fn brute_entropy_bits(grid: &Grid) -> f64 {
    let (counts, total) = brute_histogram(grid);
    if total == 0 {
        return 0.0;
    }
    let mut keys: Vec<u16> = counts.keys().copied().collect();
    keys.sort_unstable();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in keys {
        let c = counts[&k] as f64;
        let term = c * c.log2();
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let t = total as f64;
    t.log2() - sum / t
}

/// Brute-force perimeter of a set of cells: count (built, open) adjacencies
/// strictly inside the grid, one probe per cell per direction.
pub fn brute_perimeter(grid: &Grid, cells: &[(u32, u32)]) -> usize {
    let mut perimeter = 0;
    for &(x, y) in cells {
        let (x, y) = (x as i64, y as i64);
        for (dx, dy) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
            let (nx, ny) = (x + dx, y + dy);
            if nx < 0 || ny < 0 || nx >= grid.width() as i64 || ny >= grid.height() as i64 {
                continue; // grid boundary contributes nothing
            }
            if !grid.is_built(nx as usize, ny as usize) {
                perimeter += 1;
            }
        }
    }
    perimeter
}

/// Number of 4-connected components among the open cells.
pub fn open_components(grid: &Grid) -> usize {
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
            let mut visit = |n: usize, stack: &mut Vec<usize>| {
                if !seen[n] && cells[n] == 0 {
                    seen[n] = true;
                    stack.push(n);
                }
            };
            if x > 0 {
                visit(idx - 1, &mut stack);
            }
            if x + 1 < w {
                visit(idx + 1, &mut stack);
            }
            if y > 0 {
                visit(idx - w, &mut stack);
            }
            if y + 1 < h {
                visit(idx + w, &mut stack);
            }
        }
    }
    components
}

/// Box-counting dimension over box sizes 2..64 (powers of two): the
/// least-squares slope of ln N(s) against ln(1/s).
pub fn box_counting_dimension(grid: &Grid) -> f64 {
    let sizes = [2usize, 4, 8, 16, 32, 64];
    let mut xs = Vec::with_capacity(sizes.len());
    let mut ys = Vec::with_capacity(sizes.len());
    for &s in &sizes {
        let mut occupied = 0u64;
        for by in (0..grid.height()).step_by(s) {
            for bx in (0..grid.width()).step_by(s) {
                'bx: for y in by..(by + s).min(grid.height()) {
                    for x in bx..(bx + s).min(grid.width()) {
                        if grid.is_built(x, y) {
                            occupied += 1;
                            break 'bx;
                        }
                    }
                }
            }
        }
        xs.push(-(s as f64).ln());
        ys.push((occupied as f64).ln());
    }
    least_squares_slope(&xs, &ys)
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Seeded random grid with the given occupancy.
pub fn random_grid(width: usize, height: usize, p: f64, seed: u64) -> Grid {
    let mut rng = Rng::seed_from_u64(seed);
    let cells: Vec<u8> = (0..width * height)
        .map(|_| (rng.next_f64() < p) as u8)
        .collect();
    Grid::from_cells(width, height, cells).unwrap()
}
