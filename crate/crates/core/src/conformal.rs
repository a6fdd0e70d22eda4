//! Exact models of S^3, H^3_+- and dS_3 inside Minkowski space and the
//! transition maps between them.
//!
//! S^3 is the slice {x0 = 1} of the light cone in R^{1,4}; H^3_+- is the slice
//! {x4 = 1}. The map Xi projects one slice onto the other; Upsilon identifies
//! the spherical slice with SU(2).

use crate::error::{CoreError, Result};
use crate::mat2::{cx, Mat2, I};
use crate::mink::{herm_of_mink, mink_of_herm, Herm2, MinkVec4, MinkVec5, PointH3, PointS3};

/// Conformal diffeomorphism Xi from the spherical slice (minus the equator
/// x4 = 0) to the hyperbolic slice:
/// (x0,...,x4) -> (x0/x4, ..., x3/x4, 1).
pub fn xi(p: &PointS3, tol: f64) -> Result<PointH3> {
    let x = p.0 .0;
    if x[4].abs() <= tol {
        return Err(CoreError::EquatorSingular(x[4].abs()));
    }
    let v = MinkVec4([x[0] / x[4], x[1] / x[4], x[2] / x[4], x[3] / x[4]]);
    PointH3::new(v, 1e-8)
}

/// Inverse of Xi: (x0,...,x3,1) -> (1, x1/x0, x2/x0, x3/x0, 1/x0).
pub fn xi_inv(q: &PointH3, tol: f64) -> Result<PointS3> {
    let x = q.0 .0;
    if x[0].abs() <= tol {
        return Err(CoreError::ZeroHeight(x[0].abs()));
    }
    let v = MinkVec5([1.0, x[1] / x[0], x[2] / x[0], x[3] / x[0], 1.0 / x[0]]);
    PointS3::new(v, 1e-8)
}

/// Upsilon identifies the spherical slice {(A, r) : tr A = 2, det A = r^2}
/// with SU(2) via (A, r) -> r id + i A0, where A0 is the trace-free part.
pub fn upsilon(a: &Herm2, r: f64, tol: f64) -> Result<Mat2> {
    let tr = a.0.trace();
    if (tr.re - 2.0).abs() > tol || tr.im.abs() > tol {
        return Err(CoreError::NotOnSlice(format!("tr A = {tr} != 2")));
    }
    let det = a.0.det();
    if (det.re - r * r).abs() > tol * (1.0 + r * r) || det.im.abs() > tol {
        return Err(CoreError::NotOnSlice(format!("det A = {det} != r^2")));
    }
    let b = Mat2::diag(cx(r, 0.0), cx(r, 0.0)) + a.0.traceless().scale(I);
    Ok(b)
}

/// Inverse of Upsilon: B in SU(2) -> (id - i B0, tr B / 2).
pub fn upsilon_inv(b: &Mat2, tol: f64) -> Result<(Herm2, f64)> {
    check_special_unitary(b, tol)?;
    let r = 0.5 * b.trace().re;
    let a = Mat2::id() - b.traceless().scale(I);
    Ok((Herm2::new(a, 1e-9)?, r))
}

/// Xi composed with the SU(2)-identification: for B in SU(2) with tr B != 0,
/// returns the hyperbolic-slice matrix (2/tr B)(id - i B0).
pub fn xi_su2(b: &Mat2, tol: f64) -> Result<Herm2> {
    check_special_unitary(b, 1e-8)?;
    let tr = b.trace();
    if tr.norm() <= tol {
        return Err(CoreError::EquatorSingular(tr.norm()));
    }
    let a = (Mat2::id() - b.traceless().scale(I)).scale(cx(2.0, 0.0) / tr);
    Herm2::new(a, 1e-9)
}

/// Inverse: a definite Hermitian matrix A of determinant 1 maps to the
/// unitary (2/tr A)(id + i A0).
pub fn xi_su2_inv(a: &Herm2, tol: f64) -> Result<Mat2> {
    let d = a.0.det();
    if (d.re - 1.0).abs() > 1e-8 * (1.0 + a.0.norm().powi(2)) || d.im.abs() > 1e-8 {
        return Err(CoreError::NotOnSlice(format!("det A = {d} != 1")));
    }
    let tr = a.0.trace();
    if tr.norm() <= tol {
        return Err(CoreError::EquatorSingular(tr.norm()));
    }
    Ok((Mat2::id() + a.0.traceless().scale(I)).scale(cx(2.0, 0.0) / tr))
}

/// The double cover SL(2,C) -> SO+(1,3): X -> g X g^*.
pub fn sl2c_action(g: &Mat2, x: &Herm2, tol: f64) -> Result<Herm2> {
    let d = g.det();
    if (d - cx(1.0, 0.0)).norm() > tol {
        return Err(CoreError::NotUnimodular((d - cx(1.0, 0.0)).norm()));
    }
    Herm2::new(*g * x.0 * g.adj(), 1e-9)
}

/// Same action transported to Minkowski vectors.
pub fn sl2c_action_vec(g: &Mat2, x: &MinkVec4, tol: f64) -> Result<MinkVec4> {
    Ok(mink_of_herm(&sl2c_action(g, &herm_of_mink(x), tol)?))
}

fn check_special_unitary(b: &Mat2, tol: f64) -> Result<()> {
    let uu = b.adj() * *b - Mat2::id();
    if uu.norm() > tol {
        return Err(CoreError::NotOnSlice(format!(
            "matrix is not unitary (|B*B - id| = {:.3e})",
            uu.norm()
        )));
    }
    let d = b.det();
    if (d - cx(1.0, 0.0)).norm() > tol {
        return Err(CoreError::NotUnimodular((d - cx(1.0, 0.0)).norm()));
    }
    Ok(())
}
