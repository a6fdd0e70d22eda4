//! Matrix-valued fields on charts: curvature, self-duality residuals, gauge
//! actions, flat lambda-families, reality conditions, parallel transport.
//!
//! Form conventions, fixed once for the whole crate:
//!   dz = dx + i dy,           dz ^ dzbar = -2i dx ^ dy,
//!   A_z = (A_x - i A_y)/2,    A_zbar = (A_x + i A_y)/2,
//!   [Phi ^ Phi*] has dx^dy coefficient -2i (Phi_z Phi_z* - Phi_z* Phi_z).

use crate::error::{CoreError, Result};
use crate::mat2::{cx, Mat2, I};
use std::sync::Arc;

pub type FieldFn = Arc<dyn Fn(f64, f64) -> Mat2 + Send + Sync>;

/// Default finite-difference step for derivative oracles.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

#[derive(Clone)]
pub enum Deriv {
    /// Closed-form partial derivatives.
    Analytic { fx: FieldFn, fy: FieldFn },
    /// Central differences with step h.
    CentralDiff { h: f64 },
}

/// A smooth assignment (x, y) -> 2x2 complex matrix together with a
/// derivative oracle.
#[derive(Clone)]
pub struct MatrixField {
    pub f: FieldFn,
    pub deriv: Deriv,
}

impl MatrixField {
    pub fn new_fd(f: FieldFn, h: f64) -> Self {
        MatrixField { f, deriv: Deriv::CentralDiff { h } }
    }

    pub fn new_analytic(f: FieldFn, fx: FieldFn, fy: FieldFn) -> Self {
        MatrixField { f, deriv: Deriv::Analytic { fx, fy } }
    }

    pub fn constant(m: Mat2) -> Self {
        let z = Mat2::zero();
        MatrixField::new_analytic(
            Arc::new(move |_, _| m),
            Arc::new(move |_, _| z),
            Arc::new(move |_, _| z),
        )
    }

    pub fn zero() -> Self {
        MatrixField::constant(Mat2::zero())
    }

    pub fn eval(&self, x: f64, y: f64) -> Mat2 {
        (self.f)(x, y)
    }

    pub fn dx(&self, x: f64, y: f64) -> Mat2 {
        match &self.deriv {
            Deriv::Analytic { fx, .. } => fx(x, y),
            Deriv::CentralDiff { h } => {
                ((self.f)(x + h, y) - (self.f)(x - h, y)).scale_re(0.5 / h)
            }
        }
    }

    pub fn dy(&self, x: f64, y: f64) -> Mat2 {
        match &self.deriv {
            Deriv::Analytic { fy, .. } => fy(x, y),
            Deriv::CentralDiff { h } => {
                ((self.f)(x, y + h) - (self.f)(x, y - h)).scale_re(0.5 / h)
            }
        }
    }

    /// d/dz = (d/dx - i d/dy)/2.
    pub fn dz(&self, x: f64, y: f64) -> Mat2 {
        (self.dx(x, y) - self.dy(x, y).scale(I)).scale_re(0.5)
    }

    /// d/dzbar = (d/dx + i d/dy)/2.
    pub fn dzbar(&self, x: f64, y: f64) -> Mat2 {
        (self.dx(x, y) + self.dy(x, y).scale(I)).scale_re(0.5)
    }

    /// Mismatch between the analytic oracle and a central difference of the
    /// values; used by the quadratic-convergence self-check.
    pub fn deriv_mismatch(&self, x: f64, y: f64, h: f64) -> f64 {
        let fdx = ((self.f)(x + h, y) - (self.f)(x - h, y)).scale_re(0.5 / h);
        let fdy = ((self.f)(x, y + h) - (self.f)(x, y - h)).scale_re(0.5 / h);
        (self.dx(x, y) - fdx).norm() + (self.dy(x, y) - fdy).norm()
    }
}

/// Hermitian structure tag of a gauge pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricSign {
    /// Standard definite metric h0; adjoint is the conjugate transpose.
    Definite,
    /// Indefinite metric diag(1,-1); adjoint is delta A* delta.
    Indefinite,
}

impl MetricSign {
    pub fn adjoint(&self, m: Mat2) -> Mat2 {
        match self {
            MetricSign::Definite => m.adj(),
            MetricSign::Indefinite => m.adj_indef(),
        }
    }
}

/// Connection coefficients (A_x, A_y), Higgs coefficient Phi_z and a metric
/// tag: the (A, Phi, h) of a self-duality configuration.
#[derive(Clone)]
pub struct GaugePair {
    pub a_x: MatrixField,
    pub a_y: MatrixField,
    pub phi_z: MatrixField,
    pub metric: MetricSign,
}

impl GaugePair {
    /// Validates trace-freeness and metric-anti-Hermitianity of the
    /// connection at a sample point.
    pub fn validate_at(&self, x: f64, y: f64, tol: f64) -> Result<()> {
        let ax = self.a_x.eval(x, y);
        let ay = self.a_y.eval(x, y);
        let p = self.phi_z.eval(x, y);
        for (name, m) in [("A_x", ax), ("A_y", ay), ("Phi_z", p)] {
            if m.trace().norm() > tol * (1.0 + m.norm()) {
                return Err(CoreError::NotOnSlice(format!("{name} is not trace-free")));
            }
        }
        for (name, m) in [("A_x", ax), ("A_y", ay)] {
            if (self.metric.adjoint(m) + m).norm() > tol * (1.0 + m.norm()) {
                return Err(CoreError::NotOnSlice(format!(
                    "{name} is not anti-Hermitian for the tagged metric"
                )));
            }
        }
        Ok(())
    }

    pub fn a_z(&self, x: f64, y: f64) -> Mat2 {
        (self.a_x.eval(x, y) - self.a_y.eval(x, y).scale(I)).scale_re(0.5)
    }

    pub fn a_zbar(&self, x: f64, y: f64) -> Mat2 {
        (self.a_x.eval(x, y) + self.a_y.eval(x, y).scale(I)).scale_re(0.5)
    }
}

/// Curvature coefficient of dx^dy for the connection d + A:
/// F = d_x A_y - d_y A_x + [A_x, A_y].
pub fn curvature(a_x: &MatrixField, a_y: &MatrixField, x: f64, y: f64) -> Mat2 {
    a_y.dx(x, y) - a_x.dy(x, y) + Mat2::comm(a_x.eval(x, y), a_y.eval(x, y))
}

/// Residual norms of the t-rescaled self-duality equations
/// F_A + t^2 [Phi ^ Phi^*] = 0 and dbar_A Phi = 0 at a point. The metric tag
/// of the pair decides whether * is the definite or the indefinite adjoint.
pub fn hitchin_residual(pair: &GaugePair, t: f64, x: f64, y: f64) -> (f64, f64) {
    let curv = curvature(&pair.a_x, &pair.a_y, x, y);
    let phi = pair.phi_z.eval(x, y);
    let phi_star = pair.metric.adjoint(phi);
    let comm = Mat2::comm(phi, phi_star);
    // [Phi ^ Phi*] carries dz^dzbar = -2i dx^dy.
    let res1 = (curv + comm.scale(cx(0.0, -2.0 * t * t))).norm();
    let dbar_phi = pair.phi_z.dzbar(x, y) + Mat2::comm(pair.a_zbar(x, y), phi);
    (res1, dbar_phi.norm())
}

/// Residuals of the SU(1,1) self-duality equations (indefinite adjoint).
pub fn su11_residual(pair: &GaugePair, t: f64, x: f64, y: f64) -> (f64, f64) {
    let indef = GaugePair { metric: MetricSign::Indefinite, ..pair.clone() };
    hitchin_residual(&indef, t, x, y)
}

/// Complex gauge action
///   Phi * g = g^{-1} Phi g,
///   A_zbar * g = g^{-1} A_zbar g + g^{-1} d_zbar g,
///   A_z * g = g^* A_z (g^*)^{-1} + g^* d_z (g^*)^{-1},
/// with the adjoint taken for the pair's metric tag. Output fields use
/// finite-difference derivative oracles over the composed evaluation.
pub fn complex_gauge_action(pair: &GaugePair, g: &MatrixField, tol: f64) -> Result<GaugePair> {
    // Unimodularity spot check at the origin of the data we are handed.
    let g0 = g.eval(0.0, 0.0);
    if g0.det().norm() > 0.0 && (g0.det() - cx(1.0, 0.0)).norm() > tol {
        return Err(CoreError::NotUnimodular((g0.det() - cx(1.0, 0.0)).norm()));
    }
    let metric = pair.metric;
    let gauged = {
        let pair = pair.clone();
        let g = g.clone();
        move |x: f64, y: f64| -> (Mat2, Mat2, Mat2) {
            let gm = g.eval(x, y);
            let gi = gm.inv().expect("gauge transformation must be invertible");
            let gs = metric.adjoint(gm);
            let gsi = gs.inv().expect("gauge transformation must be invertible");
            // d_z(g^adj) = (d_zbar g)^adj and vice versa.
            let dz_gs = metric.adjoint(g.dzbar(x, y));
            let new_azbar = gi * pair.a_zbar(x, y) * gm + gi * g.dzbar(x, y);
            let new_az = gs * pair.a_z(x, y) * gsi - gs * gsi * dz_gs * gsi;
            let a_x = new_az + new_azbar;
            let a_y = (new_az - new_azbar).scale(I);
            let phi = gi * pair.phi_z.eval(x, y) * gm;
            (a_x, a_y, phi)
        }
    };
    let h = DEFAULT_FD_STEP;
    let gx = Arc::new(gauged);
    let g1 = gx.clone();
    let g2 = gx.clone();
    let g3 = gx;
    Ok(GaugePair {
        a_x: MatrixField::new_fd(Arc::new(move |x, y| g1(x, y).0), h),
        a_y: MatrixField::new_fd(Arc::new(move |x, y| g2(x, y).1), h),
        phi_z: MatrixField::new_fd(Arc::new(move |x, y| g3(x, y).2), h),
        metric,
    })
}

/// Family of connections nabla^lambda = nabla + lambda^{-1} Phi + lambda Psi.
#[derive(Clone)]
pub struct LambdaFamily {
    pub a_x: MatrixField,
    pub a_y: MatrixField,
    pub phi_z: MatrixField,
    pub psi_zbar: MatrixField,
}

impl LambdaFamily {
    /// Associated family of a self-duality solution at rescaling t:
    /// nabla + lambda^{-1} (t Phi) + lambda (t Phi)^{*h}.
    pub fn from_pair(pair: &GaugePair, t: f64) -> LambdaFamily {
        let phi = pair.phi_z.clone();
        let metric = pair.metric;
        let phi_f = phi.clone();
        let psi = match &phi.deriv {
            Deriv::Analytic { .. } => {
                let p1 = phi.clone();
                let p2 = phi.clone();
                let p3 = phi.clone();
                MatrixField::new_analytic(
                    Arc::new(move |x, y| metric.adjoint(p1.eval(x, y)).scale_re(t)),
                    // d_x commutes with the pointwise adjoint; d_y picks up
                    // conjugation of the i in dz, handled by adjoint(dy).
                    Arc::new(move |x, y| metric.adjoint(p2.dx(x, y)).scale_re(t)),
                    Arc::new(move |x, y| metric.adjoint(p3.dy(x, y)).scale_re(t)),
                )
            }
            Deriv::CentralDiff { h } => {
                let p1 = phi.clone();
                MatrixField::new_fd(
                    Arc::new(move |x, y| metric.adjoint(p1.eval(x, y)).scale_re(t)),
                    *h,
                )
            }
        };
        let phi_scaled = scale_field(&phi_f, t);
        LambdaFamily {
            a_x: pair.a_x.clone(),
            a_y: pair.a_y.clone(),
            phi_z: phi_scaled,
            psi_zbar: psi,
        }
    }

    /// Connection coefficients (B_x, B_y) of nabla^lambda.
    pub fn coeffs(&self, lambda: cxt::Cx, x: f64, y: f64) -> (Mat2, Mat2) {
        let b_z = self.b_z(lambda, x, y);
        let b_zbar = self.b_zbar(lambda, x, y);
        (b_z + b_zbar, (b_z - b_zbar).scale(I))
    }

    pub fn b_z(&self, lambda: cxt::Cx, x: f64, y: f64) -> Mat2 {
        let a_z = (self.a_x.eval(x, y) - self.a_y.eval(x, y).scale(I)).scale_re(0.5);
        a_z + self.phi_z.eval(x, y).scale(lambda.inv())
    }

    pub fn b_zbar(&self, lambda: cxt::Cx, x: f64, y: f64) -> Mat2 {
        let a_zbar = (self.a_x.eval(x, y) + self.a_y.eval(x, y).scale(I)).scale_re(0.5);
        a_zbar + self.psi_zbar.eval(x, y).scale(lambda)
    }

    fn b_z_dx(&self, lambda: cxt::Cx, x: f64, y: f64) -> Mat2 {
        let a_z_dx = (self.a_x.dx(x, y) - self.a_y.dx(x, y).scale(I)).scale_re(0.5);
        a_z_dx + self.phi_z.dx(x, y).scale(lambda.inv())
    }

    fn b_z_dy(&self, lambda: cxt::Cx, x: f64, y: f64) -> Mat2 {
        let a_z_dy = (self.a_x.dy(x, y) - self.a_y.dy(x, y).scale(I)).scale_re(0.5);
        a_z_dy + self.phi_z.dy(x, y).scale(lambda.inv())
    }

    fn b_zbar_dx(&self, lambda: cxt::Cx, x: f64, y: f64) -> Mat2 {
        let a_dx = (self.a_x.dx(x, y) + self.a_y.dx(x, y).scale(I)).scale_re(0.5);
        a_dx + self.psi_zbar.dx(x, y).scale(lambda)
    }

    fn b_zbar_dy(&self, lambda: cxt::Cx, x: f64, y: f64) -> Mat2 {
        let a_dy = (self.a_x.dy(x, y) + self.a_y.dy(x, y).scale(I)).scale_re(0.5);
        a_dy + self.psi_zbar.dy(x, y).scale(lambda)
    }
}

mod cxt {
    pub use crate::mat2::Cx;
}

fn scale_field(f: &MatrixField, t: f64) -> MatrixField {
    match &f.deriv {
        Deriv::Analytic { fx, fy } => {
            let (f0, fx, fy) = (f.f.clone(), fx.clone(), fy.clone());
            MatrixField::new_analytic(
                Arc::new(move |x, y| f0(x, y).scale_re(t)),
                Arc::new(move |x, y| fx(x, y).scale_re(t)),
                Arc::new(move |x, y| fy(x, y).scale_re(t)),
            )
        }
        Deriv::CentralDiff { h } => {
            let f0 = f.f.clone();
            MatrixField::new_fd(Arc::new(move |x, y| f0(x, y).scale_re(t)), *h)
        }
    }
}

/// Curvature norm of nabla^lambda at a point.
pub fn family_flatness(fam: &LambdaFamily, lambda: cxt::Cx, x: f64, y: f64) -> Result<f64> {
    if lambda.norm() == 0.0 {
        return Err(CoreError::LambdaZero);
    }
    let b_x = fam.b_z(lambda, x, y) + fam.b_zbar(lambda, x, y);
    let b_y = (fam.b_z(lambda, x, y) - fam.b_zbar(lambda, x, y)).scale(I);
    let bx_dy = (fam.b_z_dy(lambda, x, y) + fam.b_zbar_dy(lambda, x, y)).scale_re(1.0);
    let by_dx = (fam.b_z_dx(lambda, x, y) - fam.b_zbar_dx(lambda, x, y)).scale(I);
    Ok((by_dx - bx_dy + Mat2::comm(b_x, b_y)).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealitySign {
    /// (nabla^{-1/conj(lambda)})^* = nabla^lambda, the twistor-line case.
    Negative,
    /// Same with the constant gauge g = i diag(1,-1).
    Positive,
}

/// Norm of (nabla^{-1/conj lambda})^* - nabla^lambda . g at a point, where g
/// defaults to id (negative sign) or i delta (positive sign).
pub fn reality_check(
    fam: &LambdaFamily,
    lambda: cxt::Cx,
    sign: RealitySign,
    g: Option<Mat2>,
    x: f64,
    y: f64,
) -> Result<f64> {
    if lambda.norm() == 0.0 {
        return Err(CoreError::LambdaZero);
    }
    let g = g.unwrap_or(match sign {
        RealitySign::Negative => Mat2::id(),
        RealitySign::Positive => Mat2::delta().scale(I),
    });
    let gi = g.inv().ok_or(CoreError::NotUnimodular(f64::INFINITY))?;
    let mu = -lambda.conj().inv();
    // Adjoint connection of d + B is d - star(B) with
    // star(B)_z = (B_zbar)^*, star(B)_zbar = (B_z)^*.
    let lhs_z = -(fam.b_zbar(mu, x, y).adj());
    let lhs_zbar = -(fam.b_z(mu, x, y).adj());
    let rhs_z = gi * fam.b_z(lambda, x, y) * g;
    let rhs_zbar = gi * fam.b_zbar(lambda, x, y) * g;
    Ok((lhs_z - rhs_z).norm() + (lhs_zbar - rhs_zbar).norm())
}

/// Parallel frame along a polyline for the connection d + B, i.e. solutions
/// of dF + B F = 0, by the classical 4th-order one-step method with a fixed
/// number of steps per segment. Returns the frame at every vertex.
pub fn parallel_frame(
    b_x: &MatrixField,
    b_y: &MatrixField,
    path: &[(f64, f64)],
    f0: Mat2,
    steps_per_segment: usize,
) -> Result<Vec<Mat2>> {
    if path.len() < 2 || steps_per_segment == 0 {
        return Err(CoreError::BadDomain("path needs >= 2 vertices and >= 1 step".into()));
    }
    let mut frames = Vec::with_capacity(path.len());
    let mut f = f0;
    frames.push(f);
    for seg in path.windows(2) {
        let (x0, y0) = seg[0];
        let (x1, y1) = seg[1];
        let (dxs, dys) = (x1 - x0, y1 - y0);
        let n = steps_per_segment;
        let h = 1.0 / n as f64;
        // F'(s) = -(B_x dx/ds + B_y dy/ds) F(s) along the segment.
        let rhs = |s: f64, fm: Mat2| -> Mat2 {
            let x = x0 + s * dxs;
            let y = y0 + s * dys;
            -((b_x.eval(x, y).scale_re(dxs) + b_y.eval(x, y).scale_re(dys)) * fm)
        };
        for k in 0..n {
            let s = k as f64 * h;
            let k1 = rhs(s, f);
            let k2 = rhs(s + 0.5 * h, f + k1.scale_re(0.5 * h));
            let k3 = rhs(s + 0.5 * h, f + k2.scale_re(0.5 * h));
            let k4 = rhs(s + h, f + k3.scale_re(h));
            f = f + (k1 + k2.scale_re(2.0) + k3.scale_re(2.0) + k4).scale_re(h / 6.0);
        }
        let drift = (f.det() - cx(1.0, 0.0)).norm();
        if drift > 1e-6 {
            return Err(CoreError::StepTooLarge(drift));
        }
        frames.push(f);
    }
    Ok(frames)
}

/// Harmonic map from a parallel frame: f = sign * conj(F)^T F; Hermitian of
/// determinant 1.
pub fn harmonic_map_from_frame(f: Mat2, sign: f64) -> Mat2 {
    (f.adj() * f).scale_re(sign)
}

/// Density (dx^dy coefficient) of the section energy 2i tr(Phi ^ Psi).
pub fn section_energy_density(phi_z: Mat2, psi_zbar: Mat2) -> f64 {
    // 2i tr(Phi_z Psi_zbar) dz^dzbar = 4 tr(Phi_z Psi_zbar) dx^dy.
    (cx(4.0, 0.0) * (phi_z * psi_zbar).trace()).re
}
