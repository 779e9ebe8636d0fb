//! Fixtures shared by the benchmarks in `benches/`.

use skyrme_core::initdata::{build_initial, Profile, ProfileSpec};
use skyrme_core::{make_grid, FieldState, Params, RadialGrid};

/// Arctan data at rest on `[0, 1]` with `cells` cells, `α = 1`, no potential.
pub fn arctan_fixture(cells: usize) -> (RadialGrid, FieldState, Params) {
    let grid = make_grid(1.0, cells).expect("valid grid");
    let spec = ProfileSpec::at_rest(Profile::Arctan { amplitude: 1.0, scale: 0.25 });
    let state = build_initial(&spec, &grid).expect("analytic data");
    (grid, state, Params::skyrme(1.0).expect("positive alpha"))
}
