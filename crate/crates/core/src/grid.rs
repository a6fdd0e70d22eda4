//! Grids of map samples into the quadric targets (hyperbolic space, de
//! Sitter space, the 3-sphere slice, the projectivized light cone) with
//! finite-difference tangent and tension stencils and Dirichlet energy
//! densities.

use crate::chart::Chart;
use crate::error::{CoreError, Result};
use crate::mat2::Mat2;
use crate::mink::{herm_of_mink, MinkVec4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TargetTag {
    /// <x,x> = -1 in R^{1,3} (both sheets).
    H3,
    /// <x,x> = +1 in R^{1,3}.
    DS3,
    /// Light-cone slice x0 = 1 in R^{1,4}.
    S3,
    /// Projectivized light cone, stored as unnormalized cone representatives.
    PL,
}

impl TargetTag {
    pub fn dim(&self) -> usize {
        match self {
            TargetTag::H3 | TargetTag::DS3 => 4,
            TargetTag::S3 | TargetTag::PL => 5,
        }
    }
}

/// Rectangular/cylindrical grid of samples of a map into a quadric target.
#[derive(Debug, Clone)]
pub struct MapGrid {
    pub chart: Chart,
    pub tag: TargetTag,
    /// Row-major with y outer; components beyond `tag.dim()` are zero.
    pub data: Vec<[f64; 5]>,
}

impl MapGrid {
    pub fn from_fn4(
        chart: Chart,
        tag: TargetTag,
        f: impl Fn(f64, f64) -> MinkVec4,
    ) -> MapGrid {
        assert_eq!(tag.dim(), 4);
        let data = chart
            .nodes()
            .map(|(_, _, x, y)| {
                let v = f(x, y);
                [v.0[0], v.0[1], v.0[2], v.0[3], 0.0]
            })
            .collect();
        MapGrid { chart, tag, data }
    }

    pub fn from_fn5(
        chart: Chart,
        tag: TargetTag,
        f: impl Fn(f64, f64) -> [f64; 5],
    ) -> MapGrid {
        assert_eq!(tag.dim(), 5);
        let data = chart.nodes().map(|(_, _, x, y)| f(x, y)).collect();
        MapGrid { chart, tag, data }
    }

    pub fn value(&self, i: usize, j: usize) -> [f64; 5] {
        self.data[self.chart.node_index(i, j)]
    }

    /// Worst violation of the target quadric over all nodes.
    pub fn max_constraint_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, j, _, _) in self.chart.nodes() {
            let v = self.value(i, j);
            let q = match self.tag {
                TargetTag::H3 => mink4(&v, &v) + 1.0,
                TargetTag::DS3 => mink4(&v, &v) - 1.0,
                TargetTag::S3 => {
                    let c = mink5(&v, &v);
                    c.abs().max((v[0] - 1.0).abs())
                }
                TargetTag::PL => mink5(&v, &v),
            };
            worst = worst.max(q.abs());
        }
        worst
    }

    fn wrap_j(&self, j: isize) -> Option<usize> {
        let ny = self.chart.ny as isize;
        if self.chart.period.is_some() {
            Some(((j % ny + ny) % ny) as usize)
        } else if j < 0 || j >= ny {
            None
        } else {
            Some(j as usize)
        }
    }

    /// Central-difference tangent in x (2nd-order one-sided at the edges).
    pub fn tangent_x(&self, i: usize, j: usize) -> [f64; 5] {
        let dx = self.chart.dx();
        let nx = self.chart.nx;
        let v = |i: usize| self.value(i, j);
        if i == 0 {
            comb3(&v(0), &v(1), &v(2), -1.5 / dx, 2.0 / dx, -0.5 / dx)
        } else if i == nx - 1 {
            comb3(&v(nx - 1), &v(nx - 2), &v(nx - 3), 1.5 / dx, -2.0 / dx, 0.5 / dx)
        } else {
            comb2(&v(i + 1), &v(i - 1), 0.5 / dx, -0.5 / dx)
        }
    }

    pub fn tangent_y(&self, i: usize, j: usize) -> [f64; 5] {
        let dy = self.chart.dy();
        let ny = self.chart.ny;
        let jj = j as isize;
        match (self.wrap_j(jj - 1), self.wrap_j(jj + 1)) {
            (Some(jm), Some(jp)) => {
                comb2(&self.value(i, jp), &self.value(i, jm), 0.5 / dy, -0.5 / dy)
            }
            (None, Some(_)) => comb3(
                &self.value(i, 0),
                &self.value(i, 1),
                &self.value(i, 2),
                -1.5 / dy,
                2.0 / dy,
                -0.5 / dy,
            ),
            (Some(_), None) => comb3(
                &self.value(i, ny - 1),
                &self.value(i, ny - 2),
                &self.value(i, ny - 3),
                1.5 / dy,
                -2.0 / dy,
                0.5 / dy,
            ),
            (None, None) => unreachable!(),
        }
    }

    /// Laplacian stencil m_xx + m_yy at an interior node; 4 m_z zbar.
    pub fn laplacian(&self, i: usize, j: usize) -> Result<[f64; 5]> {
        let nx = self.chart.nx;
        if i == 0 || i + 1 >= nx {
            return Err(CoreError::OutsideChart(self.chart.x(i), self.chart.y(j)));
        }
        let (jm, jp) = match (self.wrap_j(j as isize - 1), self.wrap_j(j as isize + 1)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(CoreError::OutsideChart(self.chart.x(i), self.chart.y(j))),
        };
        let dx2 = self.chart.dx() * self.chart.dx();
        let dy2 = self.chart.dy() * self.chart.dy();
        let c = self.value(i, j);
        let xx = comb3(&self.value(i + 1, j), &c, &self.value(i - 1, j), 1.0, -2.0, 1.0);
        let yy = comb3(&self.value(i, jp), &c, &self.value(i, jm), 1.0, -2.0, 1.0);
        let mut out = [0.0; 5];
        for k in 0..5 {
            out[k] = xx[k] / dx2 + yy[k] / dy2;
        }
        Ok(out)
    }

    pub fn vec4(&self, i: usize, j: usize) -> MinkVec4 {
        let v = self.value(i, j);
        MinkVec4([v[0], v[1], v[2], v[3]])
    }
}

pub fn mink4(a: &[f64; 5], b: &[f64; 5]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

pub fn mink5(a: &[f64; 5], b: &[f64; 5]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3] + a[4] * b[4]
}

fn comb2(a: &[f64; 5], b: &[f64; 5], ca: f64, cb: f64) -> [f64; 5] {
    let mut out = [0.0; 5];
    for k in 0..5 {
        out[k] = ca * a[k] + cb * b[k];
    }
    out
}

fn comb3(a: &[f64; 5], b: &[f64; 5], c: &[f64; 5], ca: f64, cb: f64, cc: f64) -> [f64; 5] {
    let mut out = [0.0; 5];
    for k in 0..5 {
        out[k] = ca * a[k] + cb * b[k] + cc * c[k];
    }
    out
}

/// Dirichlet energy density of a map grid at a node, with the sign
/// conventions of the respective energy functionals: for hyperbolic targets
/// (<df, df> positive) the usual (1/2)(|f_x|^2 + |f_y|^2); for de Sitter
/// targets the density of E(N) = -(1/2) int G(dN ^ *dN), which can be
/// negative.
pub fn dirichlet_energy_density(m: &MapGrid, i: usize, j: usize) -> Result<f64> {
    let tx = m.tangent_x(i, j);
    let ty = m.tangent_y(i, j);
    let s = match m.tag {
        TargetTag::H3 => 0.5,
        TargetTag::DS3 => -0.5,
        _ => {
            return Err(CoreError::BadDomain(
                "energy density defined for the R^{1,3} quadric targets".into(),
            ))
        }
    };
    Ok(s * (mink4(&tx, &tx) + mink4(&ty, &ty)))
}

/// Same density through the Hermitian matrix model,
/// (1/4) tr((h^{-1} h_x)^2 + (h^{-1} h_y)^2) with h the Herm2 sample.
pub fn dirichlet_energy_density_herm(m: &MapGrid, i: usize, j: usize) -> Result<f64> {
    if m.tag.dim() != 4 {
        return Err(CoreError::BadDomain("matrix-model route needs an R^{1,3} target".into()));
    }
    let h = herm_of_mink(&m.vec4(i, j)).0;
    let hi = h.inv().ok_or(CoreError::SingularSample(m.chart.x(i), m.chart.y(j)))?;
    let to_herm = |v: [f64; 5]| herm_of_mink(&MinkVec4([v[0], v[1], v[2], v[3]])).0;
    let phix = hi * to_herm(m.tangent_x(i, j));
    let phiy = hi * to_herm(m.tangent_y(i, j));
    let val = ((phix * phix).trace() + (phiy * phiy).trace()).re * 0.25;
    // The trace route computes the symmetric-space density; its sign matches
    // E(f) for hyperbolic and E(N) for de Sitter targets automatically.
    Ok(val)
}

/// Hermitian matrix sample of an R^{1,3}-valued grid.
pub fn herm_sample(m: &MapGrid, i: usize, j: usize) -> Mat2 {
    herm_of_mink(&m.vec4(i, j)).0
}
