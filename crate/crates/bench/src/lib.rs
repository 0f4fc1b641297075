//! Shared fixtures for the criterion benches.

use morphospace_core::rng::Rng;
use morphospace_core::Grid;

/// Seeded random grid at the given occupancy.
pub fn random_grid(size: usize, p: f64, seed: u64) -> Grid {
    let mut rng = Rng::seed_from_u64(seed);
    let cells: Vec<u8> = (0..size * size)
        .map(|_| (rng.next_f64() < p) as u8)
        .collect();
    Grid::from_cells(size, size, cells).unwrap()
}
