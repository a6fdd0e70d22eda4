//! Rectangular and cylindrical coordinate charts with uniform grids.

use crate::error::{CoreError, Result};

/// A planar chart [x_lo, x_hi] x [y_lo, y_hi], optionally periodic in y with
/// period sigma, optionally with the core locus x = 0 removed.
#[derive(Debug, Clone)]
pub struct Chart {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    /// Period of the y-coordinate; y_hi - y_lo must equal sigma when set.
    pub period: Option<f64>,
    /// Whether the locus x = 0 is excluded from the chart.
    pub exclude_core: bool,
    pub nx: usize,
    pub ny: usize,
}

impl Chart {
    pub fn new(
        x_range: (f64, f64),
        y_range: (f64, f64),
        period: Option<f64>,
        exclude_core: bool,
        nx: usize,
        ny: usize,
    ) -> Result<Chart> {
        if x_range.0 >= x_range.1 || nx < 2 || ny < 2 {
            return Err(CoreError::BadDomain(format!(
                "invalid chart ranges ({}, {}) with {}x{} nodes",
                x_range.0, x_range.1, nx, ny
            )));
        }
        if let Some(sigma) = period {
            if sigma <= 0.0 {
                return Err(CoreError::BadDomain("period must be positive".into()));
            }
        }
        let chart = Chart {
            x_lo: x_range.0,
            x_hi: x_range.1,
            y_lo: y_range.0,
            y_hi: y_range.1,
            period,
            exclude_core,
            nx,
            ny,
        };
        if exclude_core && x_range.0 < 0.0 && x_range.1 > 0.0 {
            // Grid nodes must keep at least half a cell away from x = 0.
            let half = 0.5 * chart.dx();
            for i in 0..nx {
                let x = chart.x(i);
                if x.abs() < half * (1.0 - 1e-12) {
                    return Err(CoreError::BadDomain(format!(
                        "grid node x = {x} within half a cell of the excluded locus"
                    )));
                }
            }
        }
        Ok(chart)
    }

    pub fn dx(&self) -> f64 {
        (self.x_hi - self.x_lo) / (self.nx as f64 - 1.0)
    }

    pub fn dy(&self) -> f64 {
        if self.period.is_some() {
            (self.y_hi - self.y_lo) / self.ny as f64
        } else {
            (self.y_hi - self.y_lo) / (self.ny as f64 - 1.0)
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_lo + self.dx() * i as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_lo + self.dy() * j as f64
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let in_x = x >= self.x_lo - 1e-12 && x <= self.x_hi + 1e-12;
        let in_y = self.period.is_some() || (y >= self.y_lo - 1e-12 && y <= self.y_hi + 1e-12);
        in_x && in_y
    }

    pub fn node_index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Iterate (i, j, x, y) in row-major order with y outer.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (i, j, self.x(i), self.y(j))))
    }
}
