//! Cell-center rasterization of support shapes.

use crate::geometry::support::SupportSpec;
use crate::simulator::grid::{Field, Grid};

/// Indicator field of a region: 1 where the cell center belongs to it.
/// `clipped` reports whether the region extends beyond the grid (always for
/// unbounded shapes).
pub struct Raster {
    pub field: Field,
    pub clipped: bool,
}

pub fn rasterize(spec: &SupportSpec, grid: &Grid) -> Raster {
    let mut field = Field::zeros(grid);
    for iy in 0..grid.nx() {
        for ix in 0..grid.nx() {
            if spec.contains(grid.center(ix, iy)) {
                field.set(ix, iy, 1.0);
            }
        }
    }
    let clipped = match spec.bounding_radius() {
        None => true,
        Some(r) => r > grid.extent(),
    };
    Raster { field, clipped }
}

/// First cell where both indicators are set, row-major, if any.
pub fn first_overlap(u: &Field, v: &Field) -> Option<(usize, usize)> {
    let nx = u.nx();
    for iy in 0..nx {
        for ix in 0..nx {
            if u.get(ix, iy) > 0.0 && v.get(ix, iy) > 0.0 {
                return Some((ix, iy));
            }
        }
    }
    None
}
