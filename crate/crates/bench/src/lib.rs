//! Fixtures shared by the criterion benches in `benches/`.

use kdvexp::experiments::{make_initial, InitialCondition};
use kdvexp::{Grid, SpectralField};

/// Sech2Sin data on a unit-scale grid of `k` modes.
pub fn sech2sin(k: usize, dealias: bool) -> SpectralField {
    let grid = Grid::unit(k).expect("even mode count").with_dealias(dealias);
    make_initial(&InitialCondition::sech2sin(grid))
}
