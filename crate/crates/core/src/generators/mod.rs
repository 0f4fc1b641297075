//! Theoretical reference configurations and growth processes: seeded random
//! fields, ordered tilings, dispersed lattices, diffusion-limited
//! aggregation, restricted-random aggregation, and entropy-reducing
//! annealing.
//!
//! Every generator is a pure function of its spec: identical inputs give
//! bit-identical grids on every platform.

mod anneal;
mod dla;
mod rrp;

pub use anneal::{
    anneal_entropy, AnnealMode, AnnealParams, AnnealTrace, Annealer, StepOutcome, TraceStep,
};
pub use dla::dla;
pub use rrp::{rrp, RrpRun};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::rng::Rng;

/// Parameters of one synthetic configuration process.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenKind {
    /// Independent per-cell occupancy with probability `p`.
    Random { p: f64 },
    /// Solid squares separated by open streets.
    Ordered {
        block_size: usize,
        street_width: usize,
    },
    /// Isolated cells on a square lattice.
    Dispersed { spacing: usize },
    /// Diffusion-limited aggregation from a central seed.
    Dla { particles: usize },
    /// Restricted-random aggregation preserving open-space continuity.
    Rrp { cells_to_place: usize },
    /// Entropy-reducing swap annealing of a random field at occupancy `p`.
    Anneal { p: f64, params: AnnealParams },
}

impl GenSpec {
    /// Compact provenance string used as a dataset source descriptor.
    pub fn digest(&self) -> String {
        let body = match &self.kind {
            GenKind::Random { p } => format!("random:p={p}"),
            GenKind::Ordered {
                block_size,
                street_width,
            } => format!("ordered:block={block_size}:street={street_width}"),
            GenKind::Dispersed { spacing } => format!("dispersed:spacing={spacing}"),
            GenKind::Dla { particles } => format!("dla:particles={particles}"),
            GenKind::Rrp { cells_to_place } => format!("rrp:cells={cells_to_place}"),
            GenKind::Anneal { p, params } => format!(
                "anneal:p={p}:steps={}:mode={}:t0={}:cooling={}",
                params.steps, params.mode, params.initial_temperature, params.cooling
            ),
        };
        format!(
            "gen:{}:{}x{}:seed={}",
            body, self.width, self.height, self.seed
        )
    }

    fn check_dims(&self) -> Result<()> {
        if self.width < 4 || self.height < 4 {
            return Err(Error::InvalidSpec(format!(
                "generator dimensions {}x{} below the 4x4 metric minimum",
                self.width, self.height
            )));
        }
        Ok(())
    }
}

/// Run the process described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<Grid> {
    spec.check_dims()?;
    match &spec.kind {
        GenKind::Random { p } => random_field(spec.width, spec.height, *p, spec.seed),
        GenKind::Ordered {
            block_size,
            street_width,
        } => ordered_tiling(spec.width, spec.height, *block_size, *street_width),
        GenKind::Dispersed { spacing } => dispersed_lattice(spec.width, spec.height, *spacing),
        GenKind::Dla { particles } => dla(spec.width, spec.height, *particles, spec.seed),
        GenKind::Rrp { cells_to_place } => {
            rrp(spec.width, spec.height, *cells_to_place, spec.seed).map(|run| run.grid)
        }
        GenKind::Anneal { p, params } => {
            let start = random_field(spec.width, spec.height, *p, spec.seed)?;
            let (grid, _) = anneal_entropy(&start, params, spec.seed.wrapping_add(1))?;
            Ok(grid)
        }
    }
}

/// Each cell built independently with probability `p`, row-major draw order.
pub fn random_field(width: usize, height: usize, p: f64, seed: u64) -> Result<Grid> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidSpec(format!(
            "occupancy p={p} outside [0, 1]"
        )));
    }
    let mut rng = Rng::seed_from_u64(seed);
    let cells: Vec<u8> = (0..width * height)
        .map(|_| (rng.next_f64() < p) as u8)
        .collect();
    Grid::from_cells(width, height, cells)
}

/// Periodic tiling of solid built squares separated by open streets.
///
/// A cell is built when both of its coordinates fall inside the block part
/// of the (block + street) period. The degenerate one-cell period
/// (block = street = 1) is defined as the alternating checkerboard.
pub fn ordered_tiling(
    width: usize,
    height: usize,
    block_size: usize,
    street_width: usize,
) -> Result<Grid> {
    if block_size == 0 {
        return Err(Error::InvalidSpec("block_size must be at least 1".into()));
    }
    if block_size + street_width > width.min(height) {
        return Err(Error::InvalidSpec(format!(
            "period {} exceeds grid extent {}",
            block_size + street_width,
            width.min(height)
        )));
    }
    if block_size == 1 && street_width == 1 {
        return checkerboard(width, height);
    }
    let period = block_size + street_width;
    let mut g = Grid::new(width, height)?;
    for y in 0..height {
        if y % period >= block_size {
            continue;
        }
        for x in 0..width {
            if x % period < block_size {
                g.set(x, y, 1);
            }
        }
    }
    Ok(g)
}

/// Alternating checkerboard: built where column + row is even.
pub fn checkerboard(width: usize, height: usize) -> Result<Grid> {
    let mut g = Grid::new(width, height)?;
    for y in 0..height {
        for x in 0..width {
            if (x + y) % 2 == 0 {
                g.set(x, y, 1);
            }
        }
    }
    Ok(g)
}

/// Isolated built cells on a square lattice with the given spacing.
pub fn dispersed_lattice(width: usize, height: usize, spacing: usize) -> Result<Grid> {
    if spacing < 2 {
        return Err(Error::InvalidSpec(format!(
            "dispersed spacing {spacing} would merge cells (need >= 2)"
        )));
    }
    let mut g = Grid::new(width, height)?;
    for y in (0..height).step_by(spacing) {
        for x in (0..width).step_by(spacing) {
            g.set(x, y, 1);
        }
    }
    Ok(g)
}
