//! Binary occupancy grid: the substrate for every metric and generator.
//!
//! Cells are stored row-major as `u8`, 1 = built form, 0 = open space.
//! A `Grid` is never mutated once handed to a metric; generators build
//! their output in place and then release it.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    width: usize,
    height: usize,
    cells: Vec<u8>,
}

impl Grid {
    /// All-open grid. Dimensions must be at least 1x1.
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::BadDimensions { width, height });
        }
        Ok(Grid {
            width,
            height,
            cells: vec![0u8; width * height],
        })
    }

    /// Wrap an existing row-major cell buffer. Values must be 0 or 1.
    pub fn from_cells(width: usize, height: usize, cells: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::BadDimensions { width, height });
        }
        if cells.len() != width * height {
            return Err(Error::CellCountMismatch {
                width,
                height,
                len: cells.len(),
            });
        }
        if let Some(&bad) = cells.iter().find(|&&v| v > 1) {
            return Err(Error::NonBinaryCell(bad));
        }
        Ok(Grid {
            width,
            height,
            cells,
        })
    }

    /// Build a grid from '0'/'1' string rows; test and doc convenience.
    pub fn from_rows(rows: &[&str]) -> Result<Self> {
        crate::raster::parse_text_grid(&rows.join("\n"))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Total cell count (9,000,000 at the default 3000x3000 analysis resolution).
    pub fn total_cells(&self) -> usize {
        self.width * self.height
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.cells[y * self.width + x]
    }

    #[inline]
    pub fn is_built(&self, x: usize, y: usize) -> bool {
        self.get(x, y) == 1
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        debug_assert!(x < self.width && y < self.height);
        debug_assert!(value <= 1);
        self.cells[y * self.width + x] = value;
    }

    /// Number of built cells.
    pub fn built_count(&self) -> usize {
        self.cells.iter().filter(|&&v| v == 1).count()
    }

    /// Majority-vote resampling to the target dimensions.
    ///
    /// Each target cell covers an axis-aligned rectangle of the source; it
    /// becomes built when built cells cover at least half of that rectangle
    /// (ties resolve to built). Exact integer arithmetic throughout, so
    /// resampling to the same dimensions is the identity and upsampling
    /// replicates source cells.
    pub fn resample(&self, target_width: usize, target_height: usize) -> Result<Grid> {
        if target_width == 0 || target_height == 0 {
            return Err(Error::BadDimensions {
                width: target_width,
                height: target_height,
            });
        }
        if target_width == self.width && target_height == self.height {
            return Ok(self.clone());
        }

        let (sw, sh) = (self.width as u64, self.height as u64);
        let (tw, th) = (target_width as u64, target_height as u64);
        let mut out = vec![0u8; target_width * target_height];

        // Work on a lattice scaled by tw horizontally and th vertically:
        // source cell sx spans [sx*tw, (sx+1)*tw), target cell tx spans
        // [tx*sw, (tx+1)*sw), and analogously for y. Every overlap is integral
        // and each target cell covers exactly sw*sh scaled units.
        for ty in 0..th {
            let y0 = ty * sh;
            let y1 = y0 + sh;
            let sy_first = (y0 / th) as usize;
            let sy_last = ((y1 - 1) / th) as usize;
            for tx in 0..tw {
                let x0 = tx * sw;
                let x1 = x0 + sw;
                let sx_first = (x0 / tw) as usize;
                let sx_last = ((x1 - 1) / tw) as usize;

                let mut built_area: u64 = 0;
                for sy in sy_first..=sy_last {
                    let oy = overlap(y0, y1, sy as u64 * th, (sy as u64 + 1) * th);
                    let row_base = sy * self.width;
                    for (off, &cell) in self.cells[row_base + sx_first..=row_base + sx_last]
                        .iter()
                        .enumerate()
                    {
                        if cell == 1 {
                            let sx = (sx_first + off) as u64;
                            let ox = overlap(x0, x1, sx * tw, (sx + 1) * tw);
                            built_area += ox * oy;
                        }
                    }
                }
                if 2 * built_area >= sw * sh {
                    out[(ty * tw + tx) as usize] = 1;
                }
            }
        }
        Grid::from_cells(target_width, target_height, out)
    }

    /// Exact 90-degree clockwise rotation.
    pub fn rotate90(&self) -> Grid {
        let (w, h) = (self.width, self.height);
        let mut out = vec![0u8; w * h];
        // (x, y) -> (h - 1 - y, x) in an h-wide, w-tall grid.
        for y in 0..h {
            for x in 0..w {
                out[x * h + (h - 1 - y)] = self.cells[y * w + x];
            }
        }
        Grid {
            width: h,
            height: w,
            cells: out,
        }
    }
}

#[inline]
fn overlap(a0: u64, a1: u64, b0: u64, b1: u64) -> u64 {
    a1.min(b1).saturating_sub(a0.max(b0))
}
