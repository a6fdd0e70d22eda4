//! Closed forms attached to the cylinder model solution: the gauge pair, its
//! flat connection and explicit parallel frame, the harmonic map into
//! hyperbolic space, its de Sitter Gauss map, the spherical continuation,
//! the core-loop reflection and the singular gauge.
//!
//! The model lives on {x + iy : x != 0}, periodic in y, and is singular along
//! the core loop x = 0.

use crate::error::{CoreError, Result};
use crate::field::{FieldFn, GaugePair, MatrixField, MetricSign};
use crate::mat2::{cx, Cx, Mat2, I};
use crate::mink::{MinkVec4, MinkVec5};
use std::sync::Arc;

/// Cylinder data: rescaling parameter t and period sigma of the y-coordinate.
#[derive(Debug, Clone, Copy)]
pub struct ModelBundle {
    pub t: f64,
    pub sigma: f64,
}

impl ModelBundle {
    pub fn new(t: f64, sigma: f64) -> Result<ModelBundle> {
        if t <= 0.0 || sigma <= 0.0 {
            return Err(CoreError::BadDomain("t and sigma must be positive".into()));
        }
        Ok(ModelBundle { t, sigma })
    }
}

pub fn coth(u: f64) -> f64 {
    1.0 / u.tanh()
}

pub fn csch(u: f64) -> f64 {
    1.0 / u.sinh()
}

pub fn sech(u: f64) -> f64 {
    1.0 / u.cosh()
}

/// u / sinh(u), stable through u = 0.
pub fn u_over_sinh(u: f64) -> f64 {
    if u.abs() < 1e-5 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + 7.0 * u2 * u2 / 360.0
    } else {
        u / u.sinh()
    }
}

/// t coth(t x) - 1/x, stable for small |t x| where the naive form cancels.
pub fn t_coth_minus_inv(t: f64, x: f64) -> f64 {
    let u = t * x;
    if u.abs() < 1e-2 {
        // coth u = 1/u + u/3 - u^3/45 + 2 u^5/945 - ...
        t * (u / 3.0 - u.powi(3) / 45.0 + 2.0 * u.powi(5) / 945.0)
    } else {
        t * coth(u) - 1.0 / x
    }
}

/// Square root on the principal branch, accepting negative reals.
fn csqrt(v: f64) -> Cx {
    Cx::new(v, 0.0).sqrt()
}

/// Model gauge pair: A = t csch(2tx) diag(-i, i) dy,
/// Phi = 1/2 [[0, coth(tx)],[tanh(tx), 0]] dz, with analytic derivatives.
pub fn model_pair(t: f64) -> GaugePair {
    let a_y: FieldFn = Arc::new(move |x, _| {
        Mat2::diag(cx(0.0, -1.0), cx(0.0, 1.0)).scale_re(t * csch(2.0 * t * x))
    });
    let a_y_dx: FieldFn = Arc::new(move |x, _| {
        let u = 2.0 * t * x;
        Mat2::diag(cx(0.0, -1.0), cx(0.0, 1.0)).scale_re(-2.0 * t * t * csch(u) * coth(u))
    });
    let phi: FieldFn = Arc::new(move |x, _| {
        let u = t * x;
        Mat2::from_real(0.0, 0.5 * coth(u), 0.5 * u.tanh(), 0.0)
    });
    let phi_dx: FieldFn = Arc::new(move |x, _| {
        let u = t * x;
        Mat2::from_real(0.0, -0.5 * t * csch(u) * csch(u), 0.5 * t * sech(u) * sech(u), 0.0)
    });
    let zero: FieldFn = Arc::new(|_, _| Mat2::zero());
    GaugePair {
        a_x: MatrixField::new_analytic(zero.clone(), zero.clone(), zero.clone()),
        a_y: MatrixField::new_analytic(a_y, a_y_dx, zero.clone()),
        phi_z: MatrixField::new_analytic(phi, phi_dx, zero),
        metric: MetricSign::Definite,
    }
}

/// Flat SL(2,C) connection of the model, D = d_A + t Phi + (t Phi)^*:
/// D_x = t coth(2tx) u, D_y = i t csch(2tx) [[-1,1],[-1,1]].
pub fn model_flat_connection(t: f64) -> (MatrixField, MatrixField) {
    let dx_f: FieldFn = Arc::new(move |x, _| Mat2::u().scale_re(t * coth(2.0 * t * x)));
    let dx_dx: FieldFn = Arc::new(move |x, _| {
        let c = csch(2.0 * t * x);
        Mat2::u().scale_re(-2.0 * t * t * c * c)
    });
    let dy_f: FieldFn = Arc::new(move |x, _| {
        Mat2::from_real(-1.0, 1.0, -1.0, 1.0).scale(I).scale_re(t * csch(2.0 * t * x))
    });
    let dy_dx: FieldFn = Arc::new(move |x, _| {
        let u = 2.0 * t * x;
        Mat2::from_real(-1.0, 1.0, -1.0, 1.0)
            .scale(I)
            .scale_re(-2.0 * t * t * csch(u) * coth(u))
    });
    let zero: FieldFn = Arc::new(|_, _| Mat2::zero());
    (
        MatrixField::new_analytic(dx_f, dx_dx, zero.clone()),
        MatrixField::new_analytic(dy_f, dy_dx, zero),
    )
}

/// Explicit parallel frame of the model flat connection,
/// F(x,y) = 1/2 [[h + 1/h, 1/h - h],[1/h - h, h + 1/h]] [[1 + iy/2, -iy/2],[iy/2, 1 - iy/2]]
/// with h = sqrt(sinh(2tx)/(2t)); det F = 1 exactly; complex for x < 0.
pub fn model_frame(t: f64, x: f64, y: f64) -> Result<Mat2> {
    if x == 0.0 {
        return Err(CoreError::OnCoreLoop(x));
    }
    Ok(frame_m(t, x) * frame_u(y))
}

fn frame_m(t: f64, x: f64) -> Mat2 {
    let h = csqrt((2.0 * t * x).sinh() / (2.0 * t));
    let hi = h.inv();
    Mat2::new(
        (h + hi) * 0.5,
        (hi - h) * 0.5,
        (hi - h) * 0.5,
        (h + hi) * 0.5,
    )
}

fn frame_u(y: f64) -> Mat2 {
    Mat2::new(cx(1.0, 0.5 * y), cx(0.0, -0.5 * y), cx(0.0, 0.5 * y), cx(1.0, -0.5 * y))
}

/// Analytic partial derivatives of the frame.
pub fn model_frame_deriv(t: f64, x: f64, y: f64) -> Result<(Mat2, Mat2)> {
    if x == 0.0 {
        return Err(CoreError::OnCoreLoop(x));
    }
    let h = csqrt((2.0 * t * x).sinh() / (2.0 * t));
    let hp = Cx::new((2.0 * t * x).cosh(), 0.0) / (h * 2.0);
    let hi2 = (h * h).inv();
    // dM/dh * h'(x)
    let dm = Mat2::new(
        (Cx::new(1.0, 0.0) - hi2) * 0.5,
        (-Cx::new(1.0, 0.0) - hi2) * 0.5,
        (-Cx::new(1.0, 0.0) - hi2) * 0.5,
        (Cx::new(1.0, 0.0) - hi2) * 0.5,
    )
    .scale(hp);
    let w = Mat2::from_real(1.0, -1.0, 1.0, -1.0).scale(cx(0.0, 0.5));
    Ok((dm * frame_u(y), frame_m(t, x) * w))
}

/// Constant SL(2,C) frame change taking the raw parallel frame to the one
/// whose harmonic map is the displayed closed form:
/// C = i delta (cosh(s/2) id + sinh(s/2) u) with e^s = 2t.
pub fn frame_correction(t: f64) -> Mat2 {
    let r = (2.0 * t).sqrt();
    let c = 0.5 * (r + 1.0 / r);
    let s = 0.5 * (r - 1.0 / r);
    (Mat2::delta() * (Mat2::id().scale_re(c) + Mat2::u().scale_re(s))).scale(I)
}

/// Frame adapted to the closed-form maps: F_adj = F * C(t). Then
/// f_hyp = sgn(x) F_adj^* F_adj and N = sgn(x) F_adj^* R F_adj for the
/// reflection fixing the Higgs eigenline.
pub fn model_frame_adapted(t: f64, x: f64, y: f64) -> Result<Mat2> {
    Ok(model_frame(t, x, y)? * frame_correction(t))
}

/// Harmonic map into H^3_+-:
/// f(x,y) = csch(2tx)/4 (8t^2y^2 + cosh(4tx) + 1, 0, 8t^2y^2 + cosh(4tx) - 3, 8ty).
pub fn model_map_hyp(t: f64, x: f64, y: f64) -> Result<MinkVec4> {
    if x == 0.0 {
        return Err(CoreError::OnCoreLoop(x));
    }
    let c = csch(2.0 * t * x);
    let d = 8.0 * t * t * y * y + (4.0 * t * x).cosh();
    Ok(MinkVec4([
        0.25 * (d + 1.0) * c,
        0.0,
        0.25 * (d - 3.0) * c,
        2.0 * t * y * c,
    ]))
}

/// Oblique Gauss map of the model, smooth through x = 0:
/// N(x,y) = (8t^2y^2 - cosh(4tx) + 3, 4, 8t^2y^2 - cosh(4tx) - 1, 8ty) / (4 cosh(2tx)).
pub fn model_map_gauss(t: f64, x: f64, y: f64) -> MinkVec4 {
    let p = 0.25 * sech(2.0 * t * x);
    let c4 = (4.0 * t * x).cosh();
    let q = 8.0 * t * t * y * y;
    MinkVec4([(q - c4 + 3.0) * p, 4.0 * p, (q - c4 - 1.0) * p, 8.0 * t * y * p])
}

/// Spherical continuation of the hyperbolic map, smooth through x = 0:
/// f_sph = (1, 0, (D-4)/D, 8ty/D, 4 sinh(2tx)/D) with D = 8t^2y^2 + cosh(4tx) + 1.
pub fn model_map_sph(t: f64, x: f64, y: f64) -> MinkVec5 {
    let d = 8.0 * t * t * y * y + (4.0 * t * x).cosh() + 1.0;
    MinkVec5([
        1.0,
        0.0,
        (d - 4.0) / d,
        8.0 * t * y / d,
        4.0 * (2.0 * t * x).sinh() / d,
    ])
}

/// All three maps at once (the hyperbolic one needs x != 0).
pub fn model_maps(t: f64, x: f64, y: f64) -> Result<(MinkVec4, MinkVec4, MinkVec5)> {
    Ok((model_map_hyp(t, x, y)?, model_map_gauss(t, x, y), model_map_sph(t, x, y)))
}

/// Hopf differential of the hyperbolic model map is Q = t^2 dz^2; the square
/// root branch whose oblique Gauss map is `model_map_gauss` is omega = -t dz.
pub fn model_omega(t: f64, opposite_branch: bool) -> Cx {
    if opposite_branch {
        cx(t, 0.0)
    } else {
        cx(-t, 0.0)
    }
}

/// Reflection on the Higgs eigenline span(1, tanh(tx)), as displayed:
/// R = [[tanh^2-1, -2 tanh],[-2 tanh, 1-tanh^2]] / (1+tanh^2).
/// It satisfies R^2 = id, R^* = R, and R v = -v on the eigenline.
pub fn model_reflection(t: f64, x: f64) -> Mat2 {
    let tau = (t * x).tanh();
    let n = 1.0 + tau * tau;
    Mat2::from_real(
        (tau * tau - 1.0) / n,
        -2.0 * tau / n,
        -2.0 * tau / n,
        (1.0 - tau * tau) / n,
    )
}

/// Singular gauge transformation g = (i/sqrt 2) [[-sqrt x, 1/sqrt x],[sqrt x, 1/sqrt x]]
/// that renders the model flat connection smooth through the core loop.
pub fn singular_gauge(x: f64) -> Result<Mat2> {
    if x == 0.0 {
        return Err(CoreError::OnCoreLoop(x));
    }
    let s = csqrt(x);
    let si = s.inv();
    let f = cx(0.0, 1.0 / 2f64.sqrt());
    Ok(Mat2::new(-s, si, s, si).scale(f))
}

/// Closed form of the gauged connection D . g: diagonal dx part
/// +- (1/(2x) - t coth(tx)/2 - t tanh(tx)/2) and dy part [[0,0],[2itx csch(2tx),0]];
/// both extend continuously through x = 0.
pub fn model_gauged_connection(t: f64) -> (MatrixField, MatrixField) {
    let dx_f: FieldFn = Arc::new(move |x, _| {
        let kappa = -0.5 * t_coth_minus_inv(t, x) - 0.5 * t * (t * x).tanh();
        Mat2::diag(cx(kappa, 0.0), cx(-kappa, 0.0))
    });
    let dy_f: FieldFn = Arc::new(move |x, _| {
        Mat2::new(
            cx(0.0, 0.0),
            cx(0.0, 0.0),
            cx(0.0, u_over_sinh(2.0 * t * x)),
            cx(0.0, 0.0),
        )
    });
    (
        MatrixField::new_fd(dx_f, 1e-6),
        MatrixField::new_fd(dy_f, 1e-6),
    )
}

/// SU(2) gauge transformation of Section "model solution" that brings the
/// Higgs field to upper-triangular form.
pub fn su2_gauge_gt(t: f64, x: f64) -> Mat2 {
    let e = (2.0 * t * x).exp();
    let n = (2.0 * e * e + 2.0).sqrt();
    Mat2::from_real((e + 1.0) / n, (e - 1.0) / n, (1.0 - e) / n, (e + 1.0) / n)
}

/// Gauge pair of the upper-triangular frame at t = 1 (the frame in which the
/// associated lambda-family takes its displayed closed form):
/// A_z = [[-csch 4x, 0],[-sech 2x, csch 4x]], Phi_z = [[-1/2, csch 2x],[0, 1/2]].
pub fn model_pair_triangular() -> GaugePair {
    let az = |x: f64| {
        Mat2::new(
            cx(-csch(4.0 * x), 0.0),
            cx(0.0, 0.0),
            cx(-sech(2.0 * x), 0.0),
            cx(csch(4.0 * x), 0.0),
        )
    };
    let az_dx = |x: f64| {
        Mat2::new(
            cx(4.0 * csch(4.0 * x) * coth(4.0 * x), 0.0),
            cx(0.0, 0.0),
            cx(2.0 * sech(2.0 * x) * (2.0 * x).tanh(), 0.0),
            cx(-4.0 * csch(4.0 * x) * coth(4.0 * x), 0.0),
        )
    };
    pair_from_z_parts(
        Arc::new(move |x, _| az(x)),
        Arc::new(move |x, _| az_dx(x)),
        Arc::new(move |x, _| {
            Mat2::new(cx(-0.5, 0.0), cx(csch(2.0 * x), 0.0), cx(0.0, 0.0), cx(0.5, 0.0))
        }),
        Arc::new(move |x, _| {
            Mat2::new(
                cx(0.0, 0.0),
                cx(-2.0 * csch(2.0 * x) * coth(2.0 * x), 0.0),
                cx(0.0, 0.0),
                cx(0.0, 0.0),
            )
        }),
        MetricSign::Definite,
    )
}

/// Twisted companion of `model_pair_triangular`: the SU(1,1) pair whose
/// lambda-family is the second displayed closed form (t = 1):
/// A_z = [[-csch 4x, csch 2x],[0, csch 4x]], Phi_z = [[-1/2, 0],[-sech 2x, 1/2]].
pub fn model_pair_triangular_twisted() -> GaugePair {
    pair_from_z_parts(
        Arc::new(move |x, _| {
            Mat2::new(
                cx(-csch(4.0 * x), 0.0),
                cx(csch(2.0 * x), 0.0),
                cx(0.0, 0.0),
                cx(csch(4.0 * x), 0.0),
            )
        }),
        Arc::new(move |x, _| {
            Mat2::new(
                cx(4.0 * csch(4.0 * x) * coth(4.0 * x), 0.0),
                cx(-2.0 * csch(2.0 * x) * coth(2.0 * x), 0.0),
                cx(0.0, 0.0),
                cx(-4.0 * csch(4.0 * x) * coth(4.0 * x), 0.0),
            )
        }),
        Arc::new(move |x, _| {
            Mat2::new(cx(-0.5, 0.0), cx(0.0, 0.0), cx(-sech(2.0 * x), 0.0), cx(0.5, 0.0))
        }),
        Arc::new(move |x, _| {
            Mat2::new(
                cx(0.0, 0.0),
                cx(0.0, 0.0),
                cx(2.0 * sech(2.0 * x) * (2.0 * x).tanh(), 0.0),
                cx(0.0, 0.0),
            )
        }),
        MetricSign::Indefinite,
    )
}

/// SU(1,1) pair smooth through the core loop, obtained from the twisted
/// family by the gauge of the worked example (t = 1):
/// Phi_z = 1/2 [[tanh 2x, -sech 2x],[-sech 2x, -tanh 2x]],
/// A_z   = 1/2 [[0, -sech 2x],[sech 2x, 0]].
pub fn model_pair_su11_smooth() -> GaugePair {
    pair_from_z_parts(
        Arc::new(move |x, _| {
            let s = sech(2.0 * x);
            Mat2::from_real(0.0, -0.5 * s, 0.5 * s, 0.0)
        }),
        Arc::new(move |x, _| {
            let d = -2.0 * sech(2.0 * x) * (2.0 * x).tanh();
            Mat2::from_real(0.0, -0.5 * d, 0.5 * d, 0.0)
        }),
        Arc::new(move |x, _| {
            let s = sech(2.0 * x);
            let th = (2.0 * x).tanh();
            Mat2::from_real(0.5 * th, -0.5 * s, -0.5 * s, -0.5 * th)
        }),
        Arc::new(move |x, _| {
            let s = sech(2.0 * x);
            let th = (2.0 * x).tanh();
            let dth = 2.0 * s * s;
            let ds = -2.0 * s * th;
            Mat2::from_real(0.5 * dth, -0.5 * ds, -0.5 * ds, -0.5 * dth)
        }),
        MetricSign::Indefinite,
    )
}

/// Gauge of the worked example, SU(1,1)-valued for x < 0, complex for x > 0:
/// g = [[1, e^{2x}],[e^{2x}, 1]] / sqrt(1 - e^{4x}).
pub fn dual_su11_gauge(x: f64) -> Mat2 {
    let e = (2.0 * x).exp();
    let den = csqrt(1.0 - e * e).inv();
    Mat2::new(den, den * e, den * e, den)
}

/// Builds a gauge pair from A_z, its x-derivative (y-independent data) and
/// Phi_z with x-derivative; the metric tag fixes adjoints downstream.
fn pair_from_z_parts(
    az: FieldFn,
    az_dx: FieldFn,
    phi: FieldFn,
    phi_dx: FieldFn,
    metric: MetricSign,
) -> GaugePair {
    let zero: FieldFn = Arc::new(|_, _| Mat2::zero());
    // A_zbar = -(A_z)^{adj} for the tagged metric (unitary connection).
    let azb = {
        let az = az.clone();
        let f: FieldFn = Arc::new(move |x, y| -metric.adjoint(az(x, y)));
        f
    };
    let azb_dx = {
        let az_dx = az_dx.clone();
        let f: FieldFn = Arc::new(move |x, y| -metric.adjoint(az_dx(x, y)));
        f
    };
    let a_x: FieldFn = {
        let (az, azb) = (az.clone(), azb.clone());
        Arc::new(move |x, y| az(x, y) + azb(x, y))
    };
    let a_x_dx: FieldFn = {
        let (az_dx, azb_dx) = (az_dx.clone(), azb_dx.clone());
        Arc::new(move |x, y| az_dx(x, y) + azb_dx(x, y))
    };
    let a_y: FieldFn = Arc::new(move |x, y| (az(x, y) - azb(x, y)).scale(I));
    let a_y_dx: FieldFn = Arc::new(move |x, y| (az_dx(x, y) - azb_dx(x, y)).scale(I));
    GaugePair {
        a_x: MatrixField::new_analytic(a_x, a_x_dx, zero.clone()),
        a_y: MatrixField::new_analytic(a_y, a_y_dx, zero.clone()),
        phi_z: MatrixField::new_analytic(phi, phi_dx, zero),
        metric,
    }
}

/// Report from the reflection-symmetry sweep.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SymmetryReport {
    pub max_a_invariance: f64,
    pub max_phi_invariance: f64,
    pub max_f_odd: f64,
    pub max_n_even: f64,
    pub max_frame_relation: f64,
    pub max_reflection_relation: f64,
}

impl SymmetryReport {
    pub fn max_all(&self) -> f64 {
        [
            self.max_a_invariance,
            self.max_phi_invariance,
            self.max_f_odd,
            self.max_n_even,
            self.max_frame_relation,
            self.max_reflection_relation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Verifies on a grid that the model data is invariant under the reflection
/// (x + iy, v) -> (-x + iy, conj v): connection and Higgs field invariant,
/// f_hyp odd, N even, r^*F = -i u^{-1} F, r^*R = -u^{-1} R u.
pub fn model_symmetry_check(t: f64, xs: &[f64], ys: &[f64]) -> Result<SymmetryReport> {
    let pair = model_pair(t);
    let mut rep = SymmetryReport {
        max_a_invariance: 0.0,
        max_phi_invariance: 0.0,
        max_f_odd: 0.0,
        max_n_even: 0.0,
        max_frame_relation: 0.0,
        max_reflection_relation: 0.0,
    };
    let u = Mat2::u();
    for &x in xs {
        if x == 0.0 {
            return Err(CoreError::OnCoreLoop(x));
        }
        for &y in ys {
            // Pullback under (x,y) -> (-x,y) with fiberwise conjugation:
            // A_x -> -conj A_x, A_y -> conj A_y, Phi_z -> -conj Phi_z.
            let ai = (pair.a_x.eval(x, y) + pair.a_x.eval(-x, y).conj()).norm()
                + (pair.a_y.eval(x, y) - pair.a_y.eval(-x, y).conj()).norm();
            let pi = (pair.phi_z.eval(x, y) + pair.phi_z.eval(-x, y).conj()).norm();
            let f_p = model_map_hyp(t, x, y)?;
            let f_m = model_map_hyp(t, -x, y)?;
            let fo = f_p.add(&f_m).euclid_norm();
            let ne = model_map_gauss(t, x, y)
                .sub(&model_map_gauss(t, -x, y))
                .euclid_norm();
            let fr = (model_frame(t, -x, y)? + (u * model_frame(t, x, y)?).scale(I)).norm();
            let rr = (model_reflection(t, -x) + u * model_reflection(t, x) * u).norm();
            rep.max_a_invariance = rep.max_a_invariance.max(ai);
            rep.max_phi_invariance = rep.max_phi_invariance.max(pi);
            rep.max_f_odd = rep.max_f_odd.max(fo);
            rep.max_n_even = rep.max_n_even.max(ne);
            rep.max_frame_relation = rep.max_frame_relation.max(fr);
            rep.max_reflection_relation = rep.max_reflection_relation.max(rr);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::hitchin_residual;

    #[test]
    fn phi_entries_at_unit_argument() {
        // Oracle: evaluate coth/tanh directly.
        let p = model_pair(1.0).phi_z.eval(1.0, 0.0);
        let coth1 = 1.0f64 / 1.0f64.tanh();
        assert!((p.m[0][1].re - 0.5 * coth1).abs() < 1e-15);
        assert!((p.m[1][0].re - 0.5 * 1.0f64.tanh()).abs() < 1e-15);
        // Frozen decimals of the oracle values.
        assert!((p.m[0][1].re - 0.6565176).abs() < 1e-7);
        assert!((p.m[1][0].re - 0.3807971).abs() < 1e-7);
    }

    #[test]
    fn pair_limits_at_large_x() {
        let pair = model_pair(2.0);
        let a = pair.a_y.eval(10.0, 0.3);
        let p = pair.phi_z.eval(10.0, 0.3);
        assert!(a.norm() < 1e-8);
        assert!((p - Mat2::u().scale_re(0.5)).norm() < 1e-8);
    }

    #[test]
    fn model_solves_rescaled_equations() {
        for t in [1.0, 2.0, 8.0] {
            for x in [-0.8, -0.2, 0.11, 0.5, 1.3] {
                for y in [0.0, 0.7, -1.9] {
                    let (r1, r2) = hitchin_residual(&model_pair(t), t, x, y);
                    assert!(r1 < 1e-8 && r2 < 1e-8, "t={t} x={x} y={y}: {r1} {r2}");
                }
            }
        }
    }

    #[test]
    fn frame_has_unit_determinant_and_is_parallel() {
        let t = 1.0;
        let (dx_field, dy_field) = model_flat_connection(t);
        for (x, y) in [(1.0, 0.0), (0.35, 1.2), (-0.6, 0.4), (2.0, -2.0)] {
            let f = model_frame(t, x, y).unwrap();
            assert!((f.det() - cx(1.0, 0.0)).norm() < 1e-12, "det at ({x},{y})");
            let (fx, fy) = model_frame_deriv(t, x, y).unwrap();
            let rx = (fx + dx_field.eval(x, y) * f).norm();
            let ry = (fy + dy_field.eval(x, y) * f).norm();
            assert!(rx < 1e-9 && ry < 1e-9, "parallel residual {rx} {ry}");
        }
        // Frozen value at h = sqrt(sinh 2 / 2): symmetric with det 1.
        let f = model_frame(1.0, 1.0, 0.0).unwrap();
        let h = (2f64.sinh() / 2.0).sqrt();
        assert!((f.m[0][0].re - 0.5 * (h + 1.0 / h)).abs() < 1e-14);
        assert!((f.m[0][1].re - 0.5 * (1.0 / h - h)).abs() < 1e-14);
        assert!((f - f.transpose()).norm() < 1e-14);
    }

    #[test]
    fn y_dependence_is_the_unipotent_factor() {
        // F(x,0)^{-1} F(x,y) depends only on y.
        let t = 1.3;
        let q = |x: f64, y: f64| {
            model_frame(t, x, 0.0).unwrap().inv().unwrap() * model_frame(t, x, y).unwrap()
        };
        let y = 0.8;
        let d = (q(0.4, y) - q(1.7, y)).norm() + (q(-0.9, y) - q(0.4, y)).norm();
        assert!(d < 1e-10, "unipotent factor drift {d}");
        assert!((q(0.4, y) - frame_u(y)).norm() < 1e-10);
    }

    #[test]
    fn maps_satisfy_their_quadrics() {
        for t in [1.0, 2.0] {
            for (x, y) in [(1.0, 0.0), (0.3, 0.8), (-0.7, -0.4), (1.9, 2.5)] {
                let (f, n, s) = model_maps(t, x, y).unwrap();
                assert!((f.norm2() + 1.0).abs() < 1e-9, "<f,f> = {}", f.norm2());
                assert!((n.norm2() - 1.0).abs() < 1e-9, "<N,N> = {}", n.norm2());
                assert!(s.norm2().abs() < 1e-9, "<s,s> = {}", s.norm2());
                assert!((s.0[0] - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn hyperbolic_map_frozen_values() {
        // Oracle: direct evaluation of the closed form at (1,0), t=1.
        let f = model_map_hyp(1.0, 1.0, 0.0).unwrap();
        let c4 = 4f64.cosh();
        let cs = 1.0 / 2f64.sinh();
        assert!((f.0[0] - 0.25 * (c4 + 1.0) * cs).abs() < 1e-14);
        assert!((f.0[2] - 0.25 * (c4 - 3.0) * cs).abs() < 1e-14);
        assert!((f.0[0] - 1.9512905).abs() < 1e-7);
        assert!((f.0[2] - 1.6755679).abs() < 1e-7);
        assert_eq!(f.0[1], 0.0);
        assert_eq!(f.0[3], 0.0);
    }

    #[test]
    fn gauss_map_value_at_origin() {
        // N(0,0) = (1/(2t), 1, -1/(2t), 0); the t = 1 value is the frozen
        // acceptance number (1/2, 1, -1/2, 0).
        for t in [1.0, 2.0] {
            let n = model_map_gauss(t, 0.0, 0.0);
            assert!((n.0[0] - 0.5 / t).abs() < 1e-14);
            assert!((n.0[1] - 1.0).abs() < 1e-14);
            assert!((n.0[2] + 0.5 / t).abs() < 1e-14);
            assert_eq!(n.0[3], 0.0);
        }
    }

    #[test]
    fn maps_agree_with_the_frame_route() {
        // f_hyp = sgn(x) Fc^* Fc and N = sgn(x) Fc^* R Fc with Fc = F C(t).
        use crate::mink::{herm_of_mink, mink_of_herm, Herm2};
        for t in [1.0, 2.0] {
            for (x, y) in [(1.0, 0.0), (0.4, 0.9), (-0.8, 0.3), (0.25, -1.4)] {
                let s = x.signum();
                let fc = model_frame_adapted(t, x, y).unwrap();
                let f_frames = (fc.adj() * fc).scale_re(s);
                let f_direct = herm_of_mink(&model_map_hyp(t, x, y).unwrap());
                assert!(
                    (f_frames - f_direct.0).norm() < 1e-8,
                    "f mismatch at t={t} ({x},{y}): {}",
                    (f_frames - f_direct.0).norm()
                );
                let n_frames = (fc.adj() * model_reflection(t, x) * fc).scale_re(-s);
                let n_vec = mink_of_herm(&Herm2::new(n_frames, 1e-8).unwrap());
                let d = n_vec.sub(&model_map_gauss(t, x, y)).euclid_norm();
                assert!(d < 1e-8, "N mismatch at t={t} ({x},{y}): {d}");
            }
        }
    }

    #[test]
    fn scaling_in_t_pulls_back_the_unit_model() {
        // f_t(x, y) = f_1(tx, ty), N_t(x, y) = N_1(tx, ty).
        let (t, x, y) = (2.7, 0.43, -0.66);
        let f_t = model_map_hyp(t, x, y).unwrap();
        let f_1 = model_map_hyp(1.0, t * x, t * y).unwrap();
        assert!(f_t.sub(&f_1).euclid_norm() < 1e-12);
        let n_t = model_map_gauss(t, x, y);
        let n_1 = model_map_gauss(1.0, t * x, t * y);
        assert!(n_t.sub(&n_1).euclid_norm() < 1e-12);
    }

    #[test]
    fn gauss_map_defining_conditions() {
        // <f, N> = 0 and <df, N> = omega + conj(omega) with omega = -t dz,
        // finite differences for df.
        let (t, x, y) = (1.0, 1.0, 0.0);
        let h = 1e-5;
        let f = model_map_hyp(t, x, y).unwrap();
        let n = model_map_gauss(t, x, y);
        assert!(f.inner(&n).abs() < 1e-12);
        let fx = model_map_hyp(t, x + h, y)
            .unwrap()
            .sub(&model_map_hyp(t, x - h, y).unwrap())
            .scale(0.5 / h);
        let fy = model_map_hyp(t, x, y + h)
            .unwrap()
            .sub(&model_map_hyp(t, x, y - h).unwrap())
            .scale(0.5 / h);
        let omega = model_omega(t, false);
        // eta = omega + conj omega: eta_x = 2 Re omega, eta_y = -2 Im omega.
        assert!((fx.inner(&n) - 2.0 * omega.re).abs() < 1e-6);
        assert!((fy.inner(&n) + 2.0 * omega.im).abs() < 1e-6);
        // Orientation: det(f, N, f_x, f_y) > 0.
        let m = [f.0, n.0, fx.0, fy.0];
        assert!(det4(&m) > 0.0);
    }

    fn det4(m: &[[f64; 4]; 4]) -> f64 {
        let mut a = *m;
        let mut det = 1.0;
        for k in 0..4 {
            let mut piv = k;
            for r in k + 1..4 {
                if a[r][k].abs() > a[piv][k].abs() {
                    piv = r;
                }
            }
            if a[piv][k] == 0.0 {
                return 0.0;
            }
            if piv != k {
                a.swap(piv, k);
                det = -det;
            }
            det *= a[k][k];
            for r in k + 1..4 {
                let f = a[r][k] / a[k][k];
                for c in k..4 {
                    a[r][c] -= f * a[k][c];
                }
            }
        }
        det
    }

    #[test]
    fn reflection_properties() {
        let (t, x) = (1.4, 0.63);
        let r = model_reflection(t, x);
        assert!((r * r - Mat2::id()).norm() < 1e-14);
        assert!((r - r.adj()).norm() < 1e-14);
        // R negates the eigenline (1, tanh(tx)) and fixes its complement.
        let tau = (t * x).tanh();
        let v = [cx(1.0, 0.0), cx(tau, 0.0)];
        let rv = r.mul_vec(v);
        assert!((rv[0] + v[0]).norm() + (rv[1] + v[1]).norm() < 1e-12);
        let w = [cx(-tau, 0.0), cx(1.0, 0.0)];
        let rw = r.mul_vec(w);
        assert!((rw[0] - w[0]).norm() + (rw[1] - w[1]).norm() < 1e-12);
        // x -> infinity limit of the displayed formula is [[0,-1],[-1,0]].
        let rinf = model_reflection(1.0, 40.0);
        assert!((rinf - Mat2::from_real(0.0, -1.0, -1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn singular_gauge_smooths_the_connection() {
        // D . g computed as g^{-1} D g + g^{-1} dg matches the closed form of
        // the gauged connection, and the latter extends through x = 0.
        let t = 1.0;
        let (dx_field, dy_field) = model_flat_connection(t);
        let (gdx, gdy) = model_gauged_connection(t);
        let h = 1e-6;
        for x in [0.5, -0.5, 0.03, -0.03] {
            let g = singular_gauge(x).unwrap();
            let gi = g.inv().unwrap();
            let dg_dx = (singular_gauge(x + h).unwrap() - singular_gauge(x - h).unwrap())
                .scale_re(0.5 / h);
            let via_action_x = gi * dx_field.eval(x, 0.0) * g + gi * dg_dx;
            let via_action_y = gi * dy_field.eval(x, 0.0) * g;
            assert!(
                (via_action_x - gdx.eval(x, 0.0)).norm() < 1e-6,
                "dx coefficient at {x}"
            );
            assert!((via_action_y - gdy.eval(x, 0.0)).norm() < 1e-9);
        }
        // O(x) approach to the x -> 0 limit of the dx coefficient.
        let k = |x: f64| gdx.eval(x, 0.0).m[0][0].re;
        assert!(k(1e-8).abs() < 1e-6);
        let s1 = (k(1e-3) - k(0.0)) / 1e-3;
        let s2 = (k(2e-3) - k(0.0)) / 2e-3;
        assert!(s1.abs() > 1e-3, "slope should be nonzero O(1)");
        assert!((s1 - s2).abs() < 0.05 * s1.abs(), "linear approach in x");
        // dy entry tends to i.
        assert!((gdy.eval(1e-9, 0.0).m[1][0] - cx(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn symmetry_sweep_is_tight() {
        let xs = [0.2, 0.5, 0.9, 1.4, 2.0];
        let ys = [-1.3, 0.0, 0.4, 2.2];
        let rep = model_symmetry_check(1.0, &xs, &ys).unwrap();
        assert!(rep.max_all() < 1e-10, "{rep:?}");
    }

    #[test]
    fn triangular_pairs_are_unitary_gauges_of_the_model() {
        // The triangular pair is (model pair at t=1) gauged by g_t, which is
        // special unitary; spot check the gauge relation for Phi.
        let x = 0.37;
        let g = su2_gauge_gt(1.0, x);
        assert!((g.adj() * g - Mat2::id()).norm() < 1e-13);
        let phi = model_pair(1.0).phi_z.eval(x, 0.0);
        let expect = model_pair_triangular().phi_z.eval(x, 0.0);
        let got = g.inv().unwrap() * phi * g;
        assert!((got - expect).norm() < 1e-12);
    }
}
