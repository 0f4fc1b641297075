//! Settlement morphology toolkit: place binary footprint grids in the
//! three-dimensional morphospace of density, permeability, and spatial
//! information, and generate the theoretical reference configurations used
//! to anchor that space.
//!
//! The pipeline is: ingest or generate a [`Grid`], measure it into a
//! [`MorphoPoint`], assemble points into a [`MorphoDataset`], then classify,
//! cluster, and plot.

pub mod blocks;
pub mod dataset;
pub mod error;
pub mod generators;
pub mod grid;
pub mod metrics;
pub mod raster;
pub mod rng;
pub mod svg;
pub mod window;

pub use blocks::{convex_hull_area, extract_blocks, Block};
pub use dataset::{
    classify, cluster, default_bands, load_bands, BandSpec, BandTable, MorphoDataset,
};
pub use error::{Error, Result};
pub use generators::{
    anneal_entropy, dla, generate, rrp, AnnealMode, AnnealParams, GenKind, GenSpec,
};
pub use grid::Grid;
pub use metrics::{
    density, density_hull, distinct_patterns, information, measure, measure_with_workers,
    permeability, DensityMode, MorphoPoint,
};
pub use raster::{load_raster, load_raster_with, save_raster, Polarity, RasterFormat};
pub use svg::{emit_svg_scatter, scatter_svg, Axis};
pub use window::{window_histogram, window_histogram_with_workers, WindowHistogram};
