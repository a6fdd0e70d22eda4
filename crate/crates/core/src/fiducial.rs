//! The fiducial desingularization near a simple zero of the quadratic
//! differential: the radial profile ell_t solving
//!     (d^2/dr^2 + (1/r) d/dr) ell = 8 t^2 r sinh(2 ell),
//! with ell ~ -log(r)/2 + b0 at the origin and the Bessel tail
//! ell ~ K_0((8/3) t r^{3/2})/pi at the outer radius, plus the gauge pair it
//! generates and the Fourier-mode radial operators of its linearization.
//!
//! The origin singularity is removed exactly by the substitution
//! w = ell + log(r)/2 (log r is radially harmonic in 2d); in s = log r the
//! equation becomes w_ss = 4 t^2 (e^{2s+2w} - e^{4s-2w}), discretized by a
//! Numerov scheme and solved by damped Newton iteration.

use crate::bessel;
use crate::error::{CoreError, Result};
use crate::field::{FieldFn, GaugePair, MatrixField, MetricSign};
use crate::mat2::{cx, Mat2};
use crate::util::{solve_tridiag, CubicHermite};
use std::sync::Arc;

/// Tabulated solution of the profile equation with derivative data.
#[derive(Debug, Clone)]
pub struct FiducialProfile {
    pub t: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// Regularized value extrapolated to the origin, ell + log(r)/2 -> b0.
    pub b0: f64,
    /// Interpolant of w(s) = ell + s/2 on s = log r, with derivative data.
    interp: CubicHermite,
}

impl FiducialProfile {
    pub fn contains(&self, r: f64) -> bool {
        r >= self.r_min * (1.0 - 1e-12) && r <= self.r_max * (1.0 + 1e-12)
    }

    fn check(&self, r: f64) -> Result<()> {
        if !self.contains(r) {
            return Err(CoreError::OutsideProfile(r, self.r_min, self.r_max));
        }
        Ok(())
    }

    pub fn ell(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        let s = r.ln();
        Ok(self.interp.eval(s) - 0.5 * s)
    }

    pub fn ell_deriv(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        let s = r.ln();
        Ok((self.interp.eval_deriv(s) - 0.5) / r)
    }

    /// F_t(r) = (1/2)(1/2 + r ell'(r)) = w_s(log r) / 2.
    pub fn f_t(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        Ok(0.5 * self.interp.eval_deriv(r.ln()))
    }

    /// dF_t/dr, exact along the solution: F_t' = 4 t^2 r^2 sinh(2 ell).
    pub fn f_t_deriv(&self, r: f64) -> Result<f64> {
        Ok(4.0 * self.t * self.t * r * r * (2.0 * self.ell(r)?).sinh())
    }

    /// Nodes (r, ell, ell', F_t) for exports and sweeps.
    pub fn rows(&self) -> Vec<(f64, f64, f64, f64)> {
        self.interp
            .xs
            .iter()
            .map(|&s| {
                let r = s.exp();
                let w = self.interp.eval(s);
                let ws = self.interp.eval_deriv(s);
                (r, w - 0.5 * s, (ws - 0.5) / r, 0.5 * ws)
            })
            .collect()
    }
}

fn tail_value(t: f64, r: f64) -> f64 {
    let xi = 8.0 / 3.0 * t * r.powf(1.5);
    (bessel::bessel_ln_k(0.0, xi).map(f64::exp).unwrap_or(0.0)) / std::f64::consts::PI
}

/// Solves the profile boundary value problem on (eps, r_max] with
/// eps = 1e-6 t^{-2/3}, a log-uniform grid of n panels, Neumann condition at
/// the inner end and the Bessel-tail Dirichlet value at the outer end.
pub fn solve_profile(t: f64, r_max: f64, n: usize) -> Result<FiducialProfile> {
    if t <= 0.0 {
        return Err(CoreError::BadDomain("t must be positive".into()));
    }
    let scale = t.powf(-2.0 / 3.0);
    if r_max < 3.0 * scale * (1.0 - 1e-12) {
        return Err(CoreError::BadDomain(format!(
            "r_max = {r_max} below 3 t^(-2/3) = {}",
            3.0 * scale
        )));
    }
    if n < 200 {
        return Err(CoreError::BadDomain("need at least 200 grid panels".into()));
    }
    let eps = 1e-6 * scale;
    let s0 = eps.ln();
    let s1 = r_max.ln();
    let h = (s1 - s0) / n as f64;
    let ss: Vec<f64> = (0..=n).map(|i| s0 + h * i as f64).collect();

    let g = |s: f64, w: f64| -> f64 {
        4.0 * t * t * ((2.0 * s + 2.0 * w).exp() - (4.0 * s - 2.0 * w).exp())
    };
    let dg = |s: f64, w: f64| -> f64 {
        8.0 * t * t * ((2.0 * s + 2.0 * w).exp() + (4.0 * s - 2.0 * w).exp())
    };

    // Initial guess: the Bessel tail, which already carries the correct
    // -log(r)/2 blow-up near the origin up to a bounded error.
    let mut w: Vec<f64> = ss
        .iter()
        .map(|&s| 0.5 * s + tail_value(t, s.exp()))
        .collect();
    let w_right = 0.5 * s1 + tail_value(t, r_max);
    w[n] = w_right;

    // Numerov rows: w_{i-1} - 2 w_i + w_{i+1} = (h^2/12)(g_{i-1} + 10 g_i + g_{i+1});
    // at i = 0 the Neumann condition inserts the ghost reflection w_{-1} = w_1.
    let residual = |w: &[f64]| -> Vec<f64> {
        let c = h * h / 12.0;
        let mut f = vec![0.0; n];
        f[0] = 2.0 * w[1] - 2.0 * w[0]
            - c * (g(ss[0] - h, w[1]) + 10.0 * g(ss[0], w[0]) + g(ss[1], w[1]));
        for i in 1..n {
            f[i] = w[i - 1] - 2.0 * w[i] + w[i + 1]
                - c * (g(ss[i - 1], w[i - 1]) + 10.0 * g(ss[i], w[i]) + g(ss[i + 1], w[i + 1]));
        }
        f
    };
    let norm_max = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    // Newton must reach the rounding floor of the discrete equations: the
    // plug-back residual divides second differences by h^2, so any leftover
    // algebraic residual is amplified accordingly.
    let mut res = residual(&w);
    let mut res_norm = norm_max(&res);
    for _ in 0..60 {
        if res_norm < 2e-15 {
            break;
        }
        let c = h * h / 12.0;
        // Tridiagonal Jacobian over the unknowns w_0 .. w_{n-1}.
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        diag[0] = -2.0 - 10.0 * c * dg(ss[0], w[0]);
        sup[0] = 2.0 - c * (dg(ss[0] - h, w[1]) + dg(ss[1], w[1]));
        for i in 1..n {
            sub[i] = 1.0 - c * dg(ss[i - 1], w[i - 1]);
            diag[i] = -2.0 - 10.0 * c * dg(ss[i], w[i]);
            if i + 1 < n {
                sup[i] = 1.0 - c * dg(ss[i + 1], w[i + 1]);
            }
        }
        let mut rhs: Vec<f64> = res.iter().map(|v| -v).collect();
        solve_tridiag(&sub, &diag, &sup, &mut rhs);
        // Damped update: halve the step while the residual grows.
        let mut lambda = 1.0;
        loop {
            let mut trial = w.clone();
            for i in 0..n {
                trial[i] += lambda * rhs[i];
            }
            let trial_res = residual(&trial);
            let trial_norm = norm_max(&trial_res);
            if trial_norm < res_norm || lambda < 1e-6 {
                w = trial;
                res = trial_res;
                res_norm = trial_norm;
                break;
            }
            lambda *= 0.5;
        }
    }
    if res_norm > 1e-12 {
        return Err(CoreError::NoConvergence(format!(
            "Newton stalled at residual {res_norm:.3e}"
        )));
    }

    // Derivative values: central 2nd-order corrected to 4th order using
    // w''' ~ dg/ds along the solution.
    let gv: Vec<f64> = (0..=n).map(|i| g(ss[i], w[i])).collect();
    let mut ws = vec![0.0; n + 1];
    for i in 1..n {
        ws[i] = (w[i + 1] - w[i - 1]) / (2.0 * h)
            - h * h / 6.0 * (gv[i + 1] - gv[i - 1]) / (2.0 * h);
    }
    ws[0] = (-25.0 * w[0] + 48.0 * w[1] - 36.0 * w[2] + 16.0 * w[3] - 3.0 * w[4]) / (12.0 * h);
    ws[n] = (25.0 * w[n] - 48.0 * w[n - 1] + 36.0 * w[n - 2] - 16.0 * w[n - 3]
        + 3.0 * w[n - 4])
        / (12.0 * h);

    let b0 = w[0];
    Ok(FiducialProfile {
        t,
        r_min: eps,
        r_max,
        b0,
        interp: CubicHermite::new(ss, w, ws),
    })
}

/// Plug-back residual of the solved profile against the original equation
/// ell'' + ell'/r - 8 t^2 r sinh(2 ell), maximized over panel midpoints with
/// r >= r_lo. The regularized form w_ss - g(s, w) is differenced with a
/// 4th-order midpoint stencil and divided by r^2 (the exact Jacobian of the
/// substitution); below r_lo the 1/r^2 amplification of roundoff makes the
/// original-variable residual meaningless in f64.
pub fn profile_ode_residual(p: &FiducialProfile, r_lo: f64) -> f64 {
    let ss = &p.interp.xs;
    let w = &p.interp.ys;
    let h = ss[1] - ss[0];
    let t = p.t;
    let mut worst = 0.0f64;
    for i in 2..ss.len() - 3 {
        let s = 0.5 * (ss[i] + ss[i + 1]);
        let r = s.exp();
        if r < r_lo {
            continue;
        }
        let wm = p.interp.eval(s);
        let d2m = midpoint_second_derivative(w, i, h);
        let res =
            d2m - 4.0 * t * t * ((2.0 * s + 2.0 * wm).exp() - (4.0 * s - 2.0 * wm).exp());
        worst = worst.max((res / (r * r)).abs());
    }
    worst
}

/// 4th-order second derivative at the midpoint between nodes i and i+1 from
/// six surrounding samples: with S_c = f(-c h) + f(c h) centred at the
/// midpoint, a = (S_{3/2} - S_{1/2})/(2h^2) and b = (S_{5/2} - S_{1/2})/(6h^2)
/// both equal f'' up to h^2 f'''' terms that cancel in (13 a - 5 b)/8.
fn midpoint_second_derivative(w: &[f64], i: usize, h: f64) -> f64 {
    let a = (w[i - 1] - w[i] - w[i + 1] + w[i + 2]) / (2.0 * h * h);
    let b = (w[i - 2] - w[i] - w[i + 1] + w[i + 3]) / (6.0 * h * h);
    (13.0 * a - 5.0 * b) / 8.0
}

/// Gauge pair of the fiducial solution at the profile's rescaling t:
/// A = i F_t(r) diag(1,-1) dtheta,
/// Phi = [[0, r^{1/2} e^{ell}],[r^{-1/2} e^{-ell} z, 0]] dz.
pub fn fiducial_pair(profile: &FiducialProfile) -> GaugePair {
    let p = Arc::new(profile.clone());
    let d = Mat2::delta();
    let a_field = |comp: usize, p: Arc<FiducialProfile>| -> FieldFn {
        Arc::new(move |x, y| {
            let r = (x * x + y * y).sqrt();
            let ft = p.f_t(r).expect("fiducial pair evaluated outside its profile");
            let c = if comp == 0 { -y } else { x };
            d.scale(cx(0.0, ft * c / (r * r)))
        })
    };
    let a_deriv = |comp: usize, dir: usize, p: Arc<FiducialProfile>| -> FieldFn {
        Arc::new(move |x, y| {
            let r2 = x * x + y * y;
            let r = r2.sqrt();
            let ft = p.f_t(r).unwrap();
            let ftp = p.f_t_deriv(r).unwrap();
            let c = if comp == 0 { -y } else { x };
            let dc: f64 = match (comp, dir) {
                (0, 0) => 0.0,
                (0, 1) => -1.0,
                (1, 0) => 1.0,
                (1, 1) => 0.0,
            };
            let rd = if dir == 0 { x / r } else { y / r };
            let v = ftp * rd * c / r2 + ft * (dc / r2 - 2.0 * c * rd / (r2 * r));
            d.scale(cx(0.0, v))
        })
    };
    let phi = |p: Arc<FiducialProfile>| -> FieldFn {
        Arc::new(move |x, y| {
            let r = (x * x + y * y).sqrt();
            let ell = p.ell(r).expect("fiducial pair evaluated outside its profile");
            let b = r.sqrt() * ell.exp();
            let cz = cx(x, y) * (-ell).exp() / r.sqrt();
            Mat2::new(cx(0.0, 0.0), cx(b, 0.0), cz, cx(0.0, 0.0))
        })
    };
    let phi_deriv = |dir: usize, p: Arc<FiducialProfile>| -> FieldFn {
        Arc::new(move |x, y| {
            let r = (x * x + y * y).sqrt();
            let ell = p.ell(r).unwrap();
            let dell = p.ell_deriv(r).unwrap();
            let rd = if dir == 0 { x / r } else { y / r };
            let b = r.sqrt() * ell.exp();
            let db = b * (0.5 / r + dell) * rd;
            let c0 = (-ell).exp() / r.sqrt();
            let z = cx(x, y);
            let dz = if dir == 0 { cx(1.0, 0.0) } else { cx(0.0, 1.0) };
            let dc = z * c0 * (-0.5 / r - dell) * rd + dz * c0;
            Mat2::new(cx(0.0, 0.0), cx(db, 0.0), dc, cx(0.0, 0.0))
        })
    };
    GaugePair {
        a_x: MatrixField::new_analytic(
            a_field(0, p.clone()),
            a_deriv(0, 0, p.clone()),
            a_deriv(0, 1, p.clone()),
        ),
        a_y: MatrixField::new_analytic(
            a_field(1, p.clone()),
            a_deriv(1, 0, p.clone()),
            a_deriv(1, 1, p.clone()),
        ),
        phi_z: MatrixField::new_analytic(
            phi(p.clone()),
            phi_deriv(0, p.clone()),
            phi_deriv(1, p),
        ),
        metric: MetricSign::Definite,
    }
}

/// Limiting fiducial configuration on the punctured plane:
/// A = (1/8) diag(1,-1)(dz/z - dzbar/zbar), Phi = [[0, r^{1/2}],[r^{-1/2} z, 0]] dz.
/// Curvature and commutator both vanish identically away from the origin.
pub fn limiting_fiducial() -> GaugePair {
    let d = Mat2::delta();
    let a = |comp: usize| -> FieldFn {
        Arc::new(move |x, y| {
            let r2 = x * x + y * y;
            let c = if comp == 0 { -y } else { x };
            d.scale(cx(0.0, 0.25 * c / r2))
        })
    };
    let a_d = |comp: usize, dir: usize| -> FieldFn {
        Arc::new(move |x, y| {
            let r2 = x * x + y * y;
            let c = if comp == 0 { -y } else { x };
            let dc: f64 = match (comp, dir) {
                (0, 1) => -1.0,
                (1, 0) => 1.0,
                _ => 0.0,
            };
            let rd2 = if dir == 0 { 2.0 * x } else { 2.0 * y };
            d.scale(cx(0.0, 0.25 * (dc / r2 - c * rd2 / (r2 * r2))))
        })
    };
    let phi: FieldFn = Arc::new(|x, y| {
        let r = (x * x + y * y).sqrt();
        Mat2::new(
            cx(0.0, 0.0),
            cx(r.sqrt(), 0.0),
            cx(x, y) / r.sqrt(),
            cx(0.0, 0.0),
        )
    });
    let phi_d = |dir: usize| -> FieldFn {
        Arc::new(move |x, y| {
            let r = (x * x + y * y).sqrt();
            let rd = if dir == 0 { x / r } else { y / r };
            let db = 0.5 / r.sqrt() * rd;
            let z = cx(x, y);
            let dz = if dir == 0 { cx(1.0, 0.0) } else { cx(0.0, 1.0) };
            let dc = dz / r.sqrt() - z * (0.5 * rd / (r * r.sqrt()));
            Mat2::new(cx(0.0, 0.0), cx(db, 0.0), dc, cx(0.0, 0.0))
        })
    };
    GaugePair {
        a_x: MatrixField::new_analytic(a(0), a_d(0, 0), a_d(0, 1)),
        a_y: MatrixField::new_analytic(a(1), a_d(1, 0), a_d(1, 1)),
        phi_z: MatrixField::new_analytic(phi, phi_d(0), phi_d(1)),
        metric: MetricSign::Definite,
    }
}

/// Radial operator data for the Fourier modes of the fiducial linearization:
/// both regularized modes share the operator
///   -v'' - v'/r + (k + 1/2)^2 r^{-2} v  (+ 16 t^2 r v for the Bessel branch)
/// with the common super-exponentially decaying perturbation
///   f = k (1 - 4 F_t) + (1/4 - 4 F_t^2) + 8 t^2 r^3 (1 - cosh 2 ell),
/// entering as r^{-2} f v.
#[derive(Debug, Clone, Copy)]
pub struct ModeCoefficients {
    pub k: i32,
    /// Indicial/Euler order of the unperturbed operator.
    pub nu_euler: f64,
    /// Bessel order after the substitution s = (8/3) t r^{3/2}.
    pub nu_bessel: f64,
    /// Perturbation value f(r).
    pub f: f64,
}

pub fn fiducial_mode_coefficients(
    profile: &FiducialProfile,
    k: i32,
    r: f64,
) -> Result<ModeCoefficients> {
    let ft = profile.f_t(r)?;
    let ell = profile.ell(r)?;
    let t = profile.t;
    let f = k as f64 * (1.0 - 4.0 * ft) + (0.25 - 4.0 * ft * ft)
        + 8.0 * t * t * r.powi(3) * (1.0 - (2.0 * ell).cosh());
    Ok(ModeCoefficients {
        k,
        nu_euler: (k as f64 + 0.5).abs(),
        nu_bessel: 2.0 / 3.0 * (k as f64 + 0.5).abs(),
        f,
    })
}

/// Perturbation of the Bessel-mode equation in the variable
/// s = (8/3) t r^{3/2}: h(s) = (4/9) f(r(s)).
pub fn fiducial_mode_perturbation(profile: &FiducialProfile, k: i32, s: f64) -> Result<f64> {
    let r = (3.0 * s / (8.0 * profile.t)).powf(2.0 / 3.0);
    Ok(4.0 / 9.0 * fiducial_mode_coefficients(profile, k, r)?.f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::hitchin_residual;

    fn profile_t1() -> FiducialProfile {
        solve_profile(1.0, 3.0, 16384).unwrap()
    }

    #[test]
    fn ode_residual_small_after_convergence() {
        let p = profile_t1();
        let res = profile_ode_residual(&p, 0.05);
        assert!(res < 1e-8, "midpoint ODE residual {res}");
    }

    #[test]
    fn profile_positive_decreasing_with_bounded_weights() {
        let p = profile_t1();
        let rows = p.rows();
        let mut prev = f64::INFINITY;
        for &(r, ell, dell, _) in &rows {
            assert!(ell > 0.0, "ell({r}) = {ell}");
            assert!(ell < prev + 1e-14);
            assert!(dell < 1e-12, "ell'({r}) = {dell}");
            prev = ell;
            if r <= 1.0 {
                // sup r^{1/2} e^{+-ell} <= C with C <= 3.
                assert!(r.sqrt() * ell.exp() <= 3.0);
                assert!(r.sqrt() * (-ell).exp() <= 3.0);
            }
        }
    }

    #[test]
    fn tail_matches_bessel_asymptote() {
        let p = profile_t1();
        let r = p.r_max;
        let tail = tail_value(1.0, r);
        let rel = (p.ell(r).unwrap() - tail).abs() / tail;
        assert!(rel < 1e-6, "tail relative error {rel}");
        // F_t -> 1/4 at the outer radius.
        assert!((p.f_t(r).unwrap() - 0.25).abs() < 1e-6);
    }

    #[test]
    fn scaling_law_in_t() {
        // ell_t(r) = ell_1(t^{2/3} r) for t = 4, relative error below 1e-5.
        let p1 = profile_t1();
        let t = 4.0;
        let p4 = solve_profile(t, 3.0 * t.powf(-2.0 / 3.0), 16384).unwrap();
        let k = t.powf(2.0 / 3.0);
        let mut worst = 0.0f64;
        for i in 0..200 {
            let r = p4.r_min * 1.5 * (p4.r_max / (p4.r_min * 1.5)).powf(i as f64 / 199.0);
            if !p1.contains(k * r) {
                continue;
            }
            let a = p4.ell(r).unwrap();
            let b = p1.ell(k * r).unwrap();
            worst = worst.max((a - b).abs() / b.abs().max(1e-12));
        }
        assert!(worst < 1e-5, "scaling-law relative error {worst}");
    }

    #[test]
    fn decay_bound_constant_below_one() {
        let p = profile_t1();
        let t = 1.0;
        let mut c_fit = 0.0f64;
        for i in 0..400 {
            let r = 1.0 + (p.r_max - 1.0) * i as f64 / 399.0;
            let u = t * r.powf(1.5);
            let bound = (-(8.0 / 3.0) * u).exp() / u.sqrt();
            c_fit = c_fit.max(p.ell(r).unwrap().abs() / bound);
        }
        assert!(c_fit <= 1.0, "fitted decay constant {c_fit}");
    }

    #[test]
    fn grid_doubling_stability() {
        let a = solve_profile(1.0, 3.0, 8192).unwrap();
        let b = solve_profile(1.0, 3.0, 16384).unwrap();
        let mut worst = 0.0f64;
        for i in 0..300 {
            let r = (a.r_min * 1.01) * (a.r_max / (a.r_min * 1.012)).powf(i as f64 / 299.0);
            worst = worst.max((a.ell(r).unwrap() - b.ell(r).unwrap()).abs());
        }
        assert!(worst < 1e-7, "doubling drift {worst}");
    }

    #[test]
    fn fiducial_pair_solves_rescaled_equations() {
        let p = profile_t1();
        let pair = fiducial_pair(&p);
        for (x, y) in [(0.5, 0.0), (0.3, 0.25), (-0.4, 0.35), (0.0, 0.9)] {
            let (r1, r2) = hitchin_residual(&pair, 1.0, x, y);
            assert!(r1 < 1e-6 && r2 < 1e-8, "residuals at ({x},{y}): {r1}, {r2}");
        }
    }

    #[test]
    fn limiting_pair_decouples_exactly() {
        let pair = limiting_fiducial();
        use crate::field::curvature;
        use crate::mat2::Mat2;
        for (x, y) in [(1.0, 0.0), (0.2, -0.7), (-0.5, 0.6)] {
            let f = curvature(&pair.a_x, &pair.a_y, x, y);
            assert!(f.norm() < 1e-9, "curvature {}", f.norm());
            let phi = pair.phi_z.eval(x, y);
            let comm = Mat2::comm(phi, phi.adj());
            assert!(comm.norm() < 1e-12, "commutator {}", comm.norm());
            let (_, hol) = hitchin_residual(&pair, 1.0, x, y);
            assert!(hol < 1e-9, "holomorphicity {hol}");
        }
        // Phi at z = 1 is [[0,1],[1,0]].
        assert!((pair.phi_z.eval(1.0, 0.0) - Mat2::u()).norm() < 1e-14);
    }

    #[test]
    fn fiducial_approaches_limiting_for_large_t() {
        let t = 8.0;
        let p = solve_profile(t, 3.0, 8192).unwrap();
        let fid = fiducial_pair(&p);
        let lim = limiting_fiducial();
        let mut worst = 0.0f64;
        for i in 0..30 {
            let r = 0.5 + 0.5 * i as f64 / 29.0;
            let (x, y) = (r * 0.6, r * 0.8);
            worst = worst.max((fid.a_x.eval(x, y) - lim.a_x.eval(x, y)).norm());
            worst = worst.max((fid.a_y.eval(x, y) - lim.a_y.eval(x, y)).norm());
            worst = worst.max((fid.phi_z.eval(x, y) - lim.phi_z.eval(x, y)).norm());
        }
        assert!(worst < 1e-3, "pair difference {worst}");
    }

    #[test]
    fn mode_perturbation_decays_superexponentially() {
        let p = solve_profile(4.0, 3.0, 8192).unwrap();
        for r in [1.0, 1.5, 2.0] {
            let m = fiducial_mode_coefficients(&p, 1, r).unwrap();
            assert!(m.f.abs() < 1e-10, "perturbation {} at r = {r}", m.f);
        }
        // Euler exponents of the k = 0 unperturbed operator are +-1/2.
        let m = fiducial_mode_coefficients(&p, 0, 0.5).unwrap();
        assert!((m.nu_euler - 0.5).abs() < 1e-15);
        assert!((m.nu_bessel - 1.0 / 3.0).abs() < 1e-15);
    }
}
