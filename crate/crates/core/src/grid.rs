use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform periodic grid on `[-L/2, L/2)^dim`.
///
/// Node `i` along an axis sits at `(i - N/2) * h`, so the center of the
/// period is a grid node. Two-dimensional samples are stored row-major with
/// axis 0 slowest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec<T> {
    dim: usize,
    points_per_axis: usize,
    extent: T,
}

pub fn make_grid<T: Real>(dim: usize, points_per_axis: usize, extent: T) -> Result<GridSpec<T>> {
    GridSpec::new(dim, points_per_axis, extent)
}

impl<T: Real> GridSpec<T> {
    pub fn new(dim: usize, points_per_axis: usize, extent: T) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if points_per_axis < 16 || !points_per_axis.is_power_of_two() {
            return Err(Error::InvalidResolution(points_per_axis));
        }
        if !(extent.is_finite() && extent > T::zero()) {
            return Err(Error::InvalidExtent(extent.as_f64()));
        }
        Ok(GridSpec { dim, points_per_axis, extent })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn extent(&self) -> T {
        self.extent
    }

    pub fn spacing(&self) -> T {
        self.extent / T::from_usize_lossy(self.points_per_axis)
    }

    pub fn node_count(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    /// Volume of one grid cell, `h^dim`.
    pub fn cell_volume(&self) -> T {
        self.spacing().powi(self.dim as i32)
    }

    /// Coordinate of axis index `i`.
    pub fn coordinate(&self, i: usize) -> T {
        let shifted = i as i64 - (self.points_per_axis / 2) as i64;
        T::from_i64(shifted).unwrap() * self.spacing()
    }

    /// Axis indices of a flat node index (unused axes are 0).
    pub fn axes(&self, flat: usize) -> [usize; 2] {
        if self.dim == 1 {
            [flat, 0]
        } else {
            [flat / self.points_per_axis, flat % self.points_per_axis]
        }
    }

    pub fn flat(&self, axes: [usize; 2]) -> usize {
        if self.dim == 1 {
            axes[0]
        } else {
            axes[0] * self.points_per_axis + axes[1]
        }
    }

    /// Physical position of a node (unused axes are 0).
    pub fn position(&self, flat: usize) -> [T; 2] {
        let a = self.axes(flat);
        if self.dim == 1 {
            [self.coordinate(a[0]), T::zero()]
        } else {
            [self.coordinate(a[0]), self.coordinate(a[1])]
        }
    }

    /// Signed lattice offset of axis index `i` relative to index 0, wrapped to `[-N/2, N/2)`.
    pub fn wrapped_offset(&self, i: usize) -> i64 {
        let n = self.points_per_axis as i64;
        let i = i as i64;
        if i >= n / 2 {
            i - n
        } else {
            i
        }
    }

    /// Same grid with twice the resolution.
    pub fn refined(&self) -> Self {
        GridSpec { points_per_axis: self.points_per_axis * 2, ..*self }
    }

    pub fn to_f64(&self) -> GridSpec<f64> {
        GridSpec { dim: self.dim, points_per_axis: self.points_per_axis, extent: self.extent.as_f64() }
    }
}

/// Plain description of a grid used in configuration files and field headers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub dim: usize,
    pub points_per_axis: usize,
    pub extent: f64,
}

impl GridConfig {
    pub fn build<T: Real>(&self) -> Result<GridSpec<T>> {
        GridSpec::new(self.dim, self.points_per_axis, T::lit(self.extent))
    }
}

impl<T: Real> From<GridSpec<T>> for GridConfig {
    fn from(g: GridSpec<T>) -> Self {
        GridConfig { dim: g.dim, points_per_axis: g.points_per_axis, extent: g.extent.as_f64() }
    }
}

/// Integration domain inside the fundamental period.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    FullTorus,
    CenteredBall { radius: f64 },
    CenteredBox { half_widths: [f64; 2] },
}

impl Region {
    pub fn ball(radius: f64) -> Self {
        Region::CenteredBall { radius }
    }

    pub fn cube(half_width: f64) -> Self {
        Region::CenteredBox { half_widths: [half_width, half_width] }
    }

    pub fn validate<T: Real>(&self, grid: &GridSpec<T>) -> Result<()> {
        let half = grid.extent().as_f64() / 2.0;
        match *self {
            Region::FullTorus => Ok(()),
            Region::CenteredBall { radius } => {
                if radius > 0.0 && radius < half {
                    Ok(())
                } else {
                    Err(Error::InvalidRegion(format!("ball radius {radius} not in (0, {half})")))
                }
            }
            Region::CenteredBox { half_widths } => {
                for &w in &half_widths[..grid.dim()] {
                    if !(w > 0.0 && w < half) {
                        return Err(Error::InvalidRegion(format!("box half-width {w} not in (0, {half})")));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn contains<T: Real>(&self, grid: &GridSpec<T>, flat: usize) -> bool {
        let x = grid.position(flat);
        let x = [x[0].as_f64(), x[1].as_f64()];
        match *self {
            Region::FullTorus => true,
            Region::CenteredBall { radius } => x[0] * x[0] + x[1] * x[1] <= radius * radius,
            Region::CenteredBox { half_widths } => (0..grid.dim()).all(|a| x[a].abs() <= half_widths[a]),
        }
    }

    /// Membership mask over all grid nodes.
    pub fn mask<T: Real>(&self, grid: &GridSpec<T>) -> Vec<bool> {
        (0..grid.node_count()).map(|i| self.contains(grid, i)).collect()
    }

    /// Diameter of the region (for the torus, the diameter of the period cell).
    pub fn diameter<T: Real>(&self, grid: &GridSpec<T>) -> f64 {
        let n = grid.dim() as f64;
        match *self {
            Region::FullTorus => grid.extent().as_f64() * n.sqrt(),
            Region::CenteredBall { radius } => 2.0 * radius,
            Region::CenteredBox { half_widths } => {
                2.0 * half_widths[..grid.dim()].iter().map(|w| w * w).sum::<f64>().sqrt()
            }
        }
    }
}
