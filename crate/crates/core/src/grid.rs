use crate::error::{Error, Result};

/// Smallest admissible cell count.
pub const MIN_CELLS: usize = 8;

/// Cell-centered grid on `[0, R]`: `r_j = (j + 1/2) dr`, `dr = R / N`.
///
/// The origin is a cell face, never a sample point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialGrid {
    radius: f64,
    cells: usize,
    dr: f64,
}

pub fn make_grid(radius: f64, cells: usize) -> Result<RadialGrid> {
    RadialGrid::new(radius, cells)
}

impl RadialGrid {
    pub fn new(radius: f64, cells: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::DegenerateGrid(format!(
                "outer radius must be positive, got {radius}"
            )));
        }
        if cells < MIN_CELLS {
            return Err(Error::DegenerateGrid(format!(
                "need at least {MIN_CELLS} cells, got {cells}"
            )));
        }
        Ok(RadialGrid {
            radius,
            cells,
            dr: radius / cells as f64,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    /// Center of cell `j`; also valid for ghost indices `j = N, N+1`.
    #[inline]
    pub fn center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dr
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|j| self.center(j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staggered_unit_grid() {
        let g = make_grid(1.0, 8).unwrap();
        assert_eq!(g.dr(), 0.125);
        assert_eq!(g.center(0), 0.0625);
        assert_eq!(g.center(7), 0.9375);
        assert!(g.centers().iter().all(|&r| r > 0.0 && r < 1.0));
    }

    #[test]
    fn first_center_on_wider_grid() {
        let g = make_grid(2.0, 16).unwrap();
        assert_eq!(g.center(0), 0.0625);
    }

    #[test]
    fn degenerate_grids_rejected() {
        assert!(make_grid(1.0, 4).is_err());
        assert!(make_grid(0.0, 16).is_err());
        assert!(make_grid(-1.0, 16).is_err());
    }
}
