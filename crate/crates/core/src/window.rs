//! Sliding-window pattern histogram: the frequency table of 4x4 cell
//! configurations that feeds the spatial-information measure.
//!
//! Every 4x4 window fully inside the grid is visited at stride 1 and packed
//! into a 16-bit code, bit `dy * 4 + dx` (least-significant bit = top-left
//! cell). The two homogeneous codes — 0 (all open) and 65535 (all built) —
//! are skipped, leaving 65,534 admissible patterns.

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Number of admissible window patterns (2^16 minus the two homogeneous codes).
pub const PATTERN_SPACE: usize = 65_534;

pub(crate) const ALL_OPEN: u16 = 0;
pub(crate) const ALL_BUILT: u16 = u16::MAX;

/// Dense pattern-frequency table over the 16-bit code space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowHistogram {
    counts: Box<[u64]>,
    total: u64,
}

impl WindowHistogram {
    fn empty() -> Self {
        WindowHistogram {
            counts: vec![0u64; 1 << 16].into_boxed_slice(),
            total: 0,
        }
    }

    /// Occurrences of one pattern code.
    #[inline]
    pub fn count(&self, code: u16) -> u64 {
        self.counts[code as usize]
    }

    /// Number of counted (non-homogeneous) windows.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct pattern codes present.
    pub fn distinct(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Iterate `(code, count)` over present patterns in ascending code order.
    pub fn iter(&self) -> impl Iterator<Item = (u16, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(code, &c)| (code as u16, c))
    }

    fn merge(&mut self, other: &WindowHistogram) {
        for (dst, src) in self.counts.iter_mut().zip(other.counts.iter()) {
            *dst += *src;
        }
        self.total += other.total;
    }

    /// Hand the raw table to the annealer, which maintains it incrementally.
    pub(crate) fn into_parts(self) -> (Box<[u64]>, u64) {
        (self.counts, self.total)
    }
}

/// Pack the 4x4 window with origin `(ox, oy)` into its 16-bit code.
#[inline]
pub fn window_code(grid: &Grid, ox: usize, oy: usize) -> u16 {
    let w = grid.width();
    let cells = grid.cells();
    let mut code = 0u16;
    for dy in 0..4 {
        let row = (oy + dy) * w + ox;
        for dx in 0..4 {
            code |= (cells[row + dx] as u16) << (dy * 4 + dx);
        }
    }
    code
}

/// Scan the full grid single-threaded.
pub fn window_histogram(grid: &Grid) -> Result<WindowHistogram> {
    window_histogram_with_workers(grid, 1)
}

/// Scan the full grid with `workers` threads.
///
/// Window rows are split into contiguous chunks; each worker owns a private
/// table merged by exact integer addition afterwards, so the result is
/// bit-identical for every worker count.
pub fn window_histogram_with_workers(grid: &Grid, workers: usize) -> Result<WindowHistogram> {
    if grid.width() < 4 || grid.height() < 4 {
        return Err(Error::GridTooSmall {
            width: grid.width(),
            height: grid.height(),
        });
    }
    let rows = grid.height() - 3;
    let workers = workers.max(1).min(rows);

    if workers == 1 {
        let mut hist = WindowHistogram::empty();
        scan_rows(grid, 0, rows, &mut hist);
        return Ok(hist);
    }

    let chunk = rows.div_ceil(workers);
    let mut partials: Vec<WindowHistogram> = Vec::with_capacity(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|i| {
                let lo = i * chunk;
                let hi = ((i + 1) * chunk).min(rows);
                scope.spawn(move || {
                    let mut hist = WindowHistogram::empty();
                    if lo < hi {
                        scan_rows(grid, lo, hi, &mut hist);
                    }
                    hist
                })
            })
            .collect();
        for handle in handles {
            partials.push(handle.join().expect("scan worker panicked"));
        }
    });

    let mut hist = WindowHistogram::empty();
    for p in &partials {
        hist.merge(p);
    }
    Ok(hist)
}

/// Scan window rows `oy in [row_lo, row_hi)` into `hist`, sliding each
/// window code one column at a time: shift out column 0, shift in column 3.
fn scan_rows(grid: &Grid, row_lo: usize, row_hi: usize, hist: &mut WindowHistogram) {
    let w = grid.width();
    let cells = grid.cells();
    const COL_DROP_MASK: u16 = 0x7777; // clears bit 3 of each row nibble after the shift

    for oy in row_lo..row_hi {
        let r0 = oy * w;
        let r1 = r0 + w;
        let r2 = r1 + w;
        let r3 = r2 + w;

        let mut code = window_code(grid, 0, oy);
        tally(hist, code);

        for ox in 1..=w - 4 {
            let nx = ox + 3;
            code = (code >> 1) & COL_DROP_MASK;
            code |= (cells[r0 + nx] as u16) << 3;
            code |= (cells[r1 + nx] as u16) << 7;
            code |= (cells[r2 + nx] as u16) << 11;
            code |= (cells[r3 + nx] as u16) << 15;
            tally(hist, code);
        }
    }
}

#[inline]
fn tally(hist: &mut WindowHistogram, code: u16) {
    if code != ALL_OPEN && code != ALL_BUILT {
        hist.counts[code as usize] += 1;
        hist.total += 1;
    }
}
