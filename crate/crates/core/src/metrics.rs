//! The three morphospace coordinates of a binary grid.
//!
//! * Density: built cells over total cells, or over the convex-hull area of
//!   the footprint for small settlements.
//! * Permeability: one minus the normalised area-weighted block-perimeter
//!   load on open space. High values mean movement is unobstructed.
//! * Information: one minus the normalised Shannon entropy of 4x4 window
//!   pattern frequencies. High values mean regular, predictable structure.

use crate::blocks::{convex_hull_area, extract_blocks};
use crate::error::Result;
use crate::grid::Grid;
use crate::window::{window_histogram_with_workers, WindowHistogram, PATTERN_SPACE};

/// Which denominator the density coordinate uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DensityMode {
    /// Built cells over all grid cells.
    #[default]
    Global,
    /// Built cells over the convex-hull area of the footprint; intended for
    /// settlements that fill only a corner of the analysis grid.
    Hull,
}

/// One settlement's coordinates in the (density, permeability, information)
/// unit cube, plus labelling metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct MorphoPoint {
    pub label: String,
    /// De: density in [0, 1].
    pub density: f64,
    /// iPe: inverted normalised permeability load in [0, 1].
    pub permeability: f64,
    /// I: one minus normalised window-pattern entropy, in [0, 1].
    pub information: f64,
    /// Optional population, carried through for plot sizing only.
    pub population: Option<u64>,
    /// Optional category tag (city, proto-urban, non-urban, theoretical).
    pub category: Option<String>,
}

/// Density over the whole grid: built cells / total cells, exact.
pub fn density(grid: &Grid) -> f64 {
    grid.built_count() as f64 / grid.total_cells() as f64
}

/// Density over the convex hull of the built footprint.
///
/// Errors when the grid has no built cells.
pub fn density_hull(grid: &Grid) -> Result<f64> {
    let hull = convex_hull_area(grid)?;
    Ok(grid.built_count() as f64 / hull)
}

/// Inverted normalised permeability iPe in [0, 1].
///
/// Pe sums perimeter x area over blocks and divides by the open-space area;
/// it is normalised by Pe_max = 4 * (total - 1), the load of the most
/// obstructed configuration under the interior-edge perimeter rule (one
/// solid block filling all but a single open cell: P = 4, A = total - 1,
/// A_O = 1). A grid with no open space pins iPe to 0.
pub fn permeability(grid: &Grid) -> f64 {
    let total = grid.total_cells() as u64;
    let built = grid.built_count() as u64;
    let open = total - built;
    if open == 0 {
        return 0.0;
    }

    let blocks = extract_blocks(grid);
    let load: u128 = blocks
        .iter()
        .map(|b| b.perimeter as u128 * b.area as u128)
        .sum();

    let pe = load as f64 / open as f64;
    let pe_max = 4.0 * (total - 1) as f64;
    let n_pe = pe / pe_max;
    (1.0 - n_pe).clamp(0.0, 1.0)
}

/// Shannon entropy of the histogram in bits.
///
/// Terms accumulate in descending-count order with Kahan compensation so the
/// value is reproducible to well below the 1e-12 oracle tolerance.
pub fn entropy_bits(hist: &WindowHistogram) -> f64 {
    let total = hist.total();
    if total == 0 {
        return 0.0;
    }
    let mut counts: Vec<u64> = hist.iter().map(|(_, c)| c).collect();
    counts.sort_unstable_by(|a, b| b.cmp(a));

    let t = total as f64;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &c in &counts {
        let p = c as f64 / t;
        let term = -p * p.log2();
        let y = term - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    sum
}

/// Spatial information I = 1 - H / H_max from a pre-computed histogram.
///
/// H_max = log2(65534): with homogeneous windows excluded, the equiprobable
/// support is exactly the 65,534 admissible patterns. An empty histogram
/// carries no surprise at all and maps to I = 1.
pub fn information_from_histogram(hist: &WindowHistogram) -> f64 {
    let h = entropy_bits(hist);
    let h_max = (PATTERN_SPACE as f64).log2();
    (1.0 - h / h_max).clamp(0.0, 1.0)
}

/// Spatial information I of a grid. Errors when the grid is smaller than 4x4.
pub fn information(grid: &Grid) -> Result<f64> {
    Ok(information_from_histogram(&window_histogram_with_workers(
        grid, 1,
    )?))
}

/// Number of distinct 4x4 patterns present in the grid.
pub fn distinct_patterns(grid: &Grid) -> Result<usize> {
    Ok(window_histogram_with_workers(grid, 1)?.distinct())
}

/// Compute all three coordinates of a grid as a labelled morphospace point.
pub fn measure(
    grid: &Grid,
    mode: DensityMode,
    label: impl Into<String>,
    population: Option<u64>,
) -> Result<MorphoPoint> {
    measure_with_workers(grid, mode, label, population, 1)
}

/// [`measure`] with a worker count for the window scan. The worker count
/// never changes the result, only the wall time.
pub fn measure_with_workers(
    grid: &Grid,
    mode: DensityMode,
    label: impl Into<String>,
    population: Option<u64>,
    workers: usize,
) -> Result<MorphoPoint> {
    let hist = window_histogram_with_workers(grid, workers)?;
    let de = match mode {
        DensityMode::Global => density(grid),
        DensityMode::Hull => density_hull(grid)?,
    };
    Ok(MorphoPoint {
        label: label.into(),
        density: de,
        permeability: permeability(grid),
        information: information_from_histogram(&hist),
        population,
        category: None,
    })
}
