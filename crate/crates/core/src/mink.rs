//! Minkowski vectors, the Hermitian-matrix model of R^{1,3}, and the tagged
//! quadric points (sphere, hyperbolic space, de Sitter space, light cone).

use crate::error::{CoreError, Result};
use crate::mat2::{cx, Mat2};

/// Default tolerance for quadric membership on construction.
pub const SLICE_TOL: f64 = 1e-10;
/// Threshold below which a coordinate counts as sitting on a singular locus.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Vector in R^{1,3}, signature (-+++).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkVec4(pub [f64; 4]);

/// Vector in R^{1,4}, signature (-++++).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkVec5(pub [f64; 5]);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalType {
    Timelike,
    Spacelike,
    Null,
}

impl MinkVec4 {
    pub fn inner(&self, o: &MinkVec4) -> f64 {
        -self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2] + self.0[3] * o.0[3]
    }

    pub fn norm2(&self) -> f64 {
        self.inner(self)
    }

    pub fn causal_type(&self, tol: f64) -> CausalType {
        classify(self.norm2(), self.euclid_norm(), tol)
    }

    pub fn euclid_norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn add(&self, o: &MinkVec4) -> MinkVec4 {
        let mut r = *self;
        for i in 0..4 {
            r.0[i] += o.0[i];
        }
        r
    }

    pub fn sub(&self, o: &MinkVec4) -> MinkVec4 {
        let mut r = *self;
        for i in 0..4 {
            r.0[i] -= o.0[i];
        }
        r
    }

    pub fn scale(&self, s: f64) -> MinkVec4 {
        let mut r = *self;
        for v in r.0.iter_mut() {
            *v *= s;
        }
        r
    }
}

impl MinkVec5 {
    pub fn inner(&self, o: &MinkVec5) -> f64 {
        -self.0[0] * o.0[0]
            + self.0[1] * o.0[1]
            + self.0[2] * o.0[2]
            + self.0[3] * o.0[3]
            + self.0[4] * o.0[4]
    }

    pub fn norm2(&self) -> f64 {
        self.inner(self)
    }

    pub fn euclid_norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn causal_type(&self, tol: f64) -> CausalType {
        classify(self.norm2(), self.euclid_norm(), tol)
    }

    pub fn is_lightcone(&self, tol: f64) -> bool {
        self.norm2().abs() <= tol * (1.0 + self.euclid_norm().powi(2))
    }

    pub fn sub(&self, o: &MinkVec5) -> MinkVec5 {
        let mut r = *self;
        for i in 0..5 {
            r.0[i] -= o.0[i];
        }
        r
    }

    pub fn scale(&self, s: f64) -> MinkVec5 {
        let mut r = *self;
        for v in r.0.iter_mut() {
            *v *= s;
        }
        r
    }
}

fn classify(q: f64, scale: f64, tol: f64) -> CausalType {
    let eps = tol * (1.0 + scale * scale);
    if q.abs() <= eps {
        CausalType::Null
    } else if q < 0.0 {
        CausalType::Timelike
    } else {
        CausalType::Spacelike
    }
}

/// Hermitian 2x2 matrix; the quadratic form -det identifies this space with
/// R^{1,3}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Herm2(pub Mat2);

impl Herm2 {
    pub fn new(m: Mat2, tol: f64) -> Result<Herm2> {
        if !m.is_hermitian(tol) {
            return Err(CoreError::NotOnSlice(format!(
                "matrix is not Hermitian within {tol:e}"
            )));
        }
        // Symmetrize so the invariant holds exactly.
        let h = (m + m.adj()).scale_re(0.5);
        Ok(Herm2(h))
    }

    pub fn mat(&self) -> Mat2 {
        self.0
    }
}

/// (x0,x1,x2,x3) -> [[x0+x1, x2+i x3],[x2-i x3, x0-x1]]; an isometry onto
/// (Herm2, -det).
pub fn herm_of_mink(x: &MinkVec4) -> Herm2 {
    let [x0, x1, x2, x3] = x.0;
    Herm2(Mat2::new(
        cx(x0 + x1, 0.0),
        cx(x2, x3),
        cx(x2, -x3),
        cx(x0 - x1, 0.0),
    ))
}

pub fn mink_of_herm(a: &Herm2) -> MinkVec4 {
    let m = a.0;
    MinkVec4([
        0.5 * (m.m[0][0].re + m.m[1][1].re),
        0.5 * (m.m[0][0].re - m.m[1][1].re),
        m.m[0][1].re,
        m.m[0][1].im,
    ])
}

/// Point on S^3 = {x in L : x0 = 1} inside R^{1,4}.
#[derive(Debug, Clone, Copy)]
pub struct PointS3(pub MinkVec5);

/// Point on H^3_+- = {x in R^{1,3} : <x,x> = -1} (both sheets).
#[derive(Debug, Clone, Copy)]
pub struct PointH3(pub MinkVec4);

/// Point on de Sitter space dS_3 = {x : <x,x> = 1}, equivalently a Hermitian
/// matrix of determinant -1.
#[derive(Debug, Clone, Copy)]
pub struct PointDS3(pub Herm2);

impl PointS3 {
    pub fn new(x: MinkVec5, tol: f64) -> Result<PointS3> {
        if (x.0[0] - 1.0).abs() > tol {
            return Err(CoreError::NotOnSlice(format!("x0 = {} != 1", x.0[0])));
        }
        if !x.is_lightcone(tol) {
            return Err(CoreError::NotOnSlice(format!(
                "<x,x> = {:.3e} != 0",
                x.norm2()
            )));
        }
        Ok(PointS3(x))
    }
}

impl PointH3 {
    pub fn new(x: MinkVec4, tol: f64) -> Result<PointH3> {
        if (x.norm2() + 1.0).abs() > tol * (1.0 + x.euclid_norm().powi(2)) {
            return Err(CoreError::NotOnSlice(format!(
                "<x,x> = {:.6e} != -1",
                x.norm2()
            )));
        }
        Ok(PointH3(x))
    }

    pub fn herm(&self) -> Herm2 {
        herm_of_mink(&self.0)
    }
}

impl PointDS3 {
    pub fn new_from_vec(x: MinkVec4, tol: f64) -> Result<PointDS3> {
        if (x.norm2() - 1.0).abs() > tol * (1.0 + x.euclid_norm().powi(2)) {
            return Err(CoreError::NotOnSlice(format!(
                "<x,x> = {:.6e} != 1",
                x.norm2()
            )));
        }
        Ok(PointDS3(herm_of_mink(&x)))
    }

    pub fn new_from_herm(h: Herm2, tol: f64) -> Result<PointDS3> {
        let d = h.0.det();
        if (d.re + 1.0).abs() > tol * (1.0 + h.0.norm().powi(2)) || d.im.abs() > tol {
            return Err(CoreError::NotOnSlice(format!("det h = {} != -1", d)));
        }
        Ok(PointDS3(h))
    }

    pub fn vec(&self) -> MinkVec4 {
        mink_of_herm(&self.0)
    }
}
