//! Symmetric square grid and scalar fields on it.

use crate::vec2::Vec2;

/// Cell-centered square grid, symmetric about the origin: `nx = 2m + 1`
/// cells per axis with centers `(i - m) h`, so the origin is always a cell
/// center and mirror symmetry is exact.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Grid {
    m: usize,
    h: f64,
}

impl Grid {
    /// Smallest symmetric grid whose centers cover `[-extent, extent]`.
    pub fn centered(extent: f64, h: f64) -> Grid {
        assert!(extent > 0.0 && h > 0.0, "grid needs positive extent and spacing");
        let m = (extent / h).ceil() as usize;
        Grid { m, h }
    }

    pub fn nx(&self) -> usize {
        2 * self.m + 1
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Physical coordinate of cell center `i` along one axis.
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - self.m as f64) * self.h
    }

    /// Physical position of cell `(ix, iy)`.
    pub fn center(&self, ix: usize, iy: usize) -> Vec2 {
        Vec2::new(self.coord(ix), self.coord(iy))
    }

    /// Half-width actually covered by cell centers.
    pub fn extent(&self) -> f64 {
        self.m as f64 * self.h
    }

    /// Continuous grid coordinate of a physical position (0 at the first
    /// cell center).
    pub fn grid_coord(&self, x: f64) -> f64 {
        x / self.h + self.m as f64
    }
}

/// Row-major scalar field on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    nx: usize,
    data: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: &Grid) -> Field {
        let nx = grid.nx();
        Field {
            nx,
            data: vec![0.0; nx * nx],
        }
    }

    pub fn from_data(nx: usize, data: Vec<f64>) -> Field {
        assert_eq!(data.len(), nx * nx, "field data must fill the grid");
        Field { nx, data }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    #[inline]
    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.data[iy * self.nx + ix]
    }

    #[inline]
    pub fn set(&mut self, ix: usize, iy: usize, value: f64) {
        self.data[iy * self.nx + ix] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn max(&self) -> f64 {
        self.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.data.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Bilinear interpolation at a physical position; `None` outside the
    /// cell-center hull.
    pub fn sample(&self, grid: &Grid, p: Vec2) -> Option<f64> {
        let gx = grid.grid_coord(p.x);
        let gy = grid.grid_coord(p.y);
        let last = (self.nx - 1) as f64;
        if !(0.0..=last).contains(&gx) || !(0.0..=last).contains(&gy) {
            return None;
        }
        let ix = (gx.floor() as usize).min(self.nx - 2);
        let iy = (gy.floor() as usize).min(self.nx - 2);
        let fx = gx - ix as f64;
        let fy = gy - iy as f64;
        let v00 = self.get(ix, iy);
        let v10 = self.get(ix + 1, iy);
        let v01 = self.get(ix, iy + 1);
        let v11 = self.get(ix + 1, iy + 1);
        Some(
            v00 * (1.0 - fx) * (1.0 - fy)
                + v10 * fx * (1.0 - fy)
                + v01 * (1.0 - fx) * fy
                + v11 * fx * fy,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_symmetric_and_covers_extent() {
        let g = Grid::centered(10.0, 0.75);
        assert_eq!(g.nx() % 2, 1);
        assert!(g.extent() >= 10.0);
        assert_eq!(g.coord((g.nx() - 1) / 2), 0.0);
        assert_eq!(g.coord(0), -g.extent());
        assert_eq!(g.coord(g.nx() - 1), g.extent());
    }

    #[test]
    fn bilinear_reproduces_linear_functions() {
        let g = Grid::centered(2.0, 0.5);
        let mut f = Field::zeros(&g);
        for iy in 0..g.nx() {
            for ix in 0..g.nx() {
                let p = g.center(ix, iy);
                f.set(ix, iy, 2.0 * p.x - 3.0 * p.y + 1.0);
            }
        }
        for &(x, y) in &[(0.1, 0.2), (-1.3, 0.7), (1.99, -1.99), (0.0, 0.0)] {
            let got = f.sample(&g, Vec2::new(x, y)).unwrap();
            let want = 2.0 * x - 3.0 * y + 1.0;
            assert!((got - want).abs() < 1e-12, "at ({x}, {y})");
        }
        assert!(f.sample(&g, Vec2::new(2.6, 0.0)).is_none());
    }
}
