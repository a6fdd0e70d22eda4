//! Assembly of the glued approximate solution region by region, the
//! interpolation error term and its decay in t, the local forms of the
//! linearized operator, and the indicial data at the core loops.

use crate::chart::Chart;
use crate::error::{CoreError, Result};
use crate::fiducial::FiducialProfile;
use crate::field::{hitchin_residual, FieldFn, GaugePair, MatrixField, MetricSign};
use crate::mat2::{cx, Cx, Mat2};
use crate::model::{csch, t_coth_minus_inv};
use crate::util::linear_fit;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// Cutoff
// ---------------------------------------------------------------------------

fn bump(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

fn bump_d1(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp() / (u * u)
    }
}

fn bump_d2(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp() * (1.0 / u.powi(4) - 2.0 / u.powi(3))
    }
}

/// Smoothstep S: 0 below 0, 1 above 1, C^infinity, built from exp(-1/u).
fn smoothstep(u: f64) -> (f64, f64, f64) {
    if u <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if u >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let f = bump(u);
    let g = bump(1.0 - u);
    let fp = bump_d1(u);
    let gp = -bump_d1(1.0 - u);
    let fpp = bump_d2(u);
    let gpp = bump_d2(1.0 - u);
    let d = f + g;
    let s = f / d;
    let num = fp * g - f * gp;
    let s1 = num / (d * d);
    let num1 = fpp * g - f * gpp;
    let s2 = (num1 * d - 2.0 * (fp + gp) * num) / (d * d * d);
    (s, s1, s2)
}

/// The gluing cutoff: 1 on [-1/4, 1/4], 0 outside (-1/2, 1/2), symmetric and
/// C^infinity.
pub fn cutoff_chi(s: f64) -> f64 {
    smoothstep(2.0 - 4.0 * s.abs()).0
}

pub fn cutoff_chi_d1(s: f64) -> f64 {
    let (_, d1, _) = smoothstep(2.0 - 4.0 * s.abs());
    -4.0 * s.signum() * d1
}

pub fn cutoff_chi_d2(s: f64) -> f64 {
    let (_, _, d2) = smoothstep(2.0 - 4.0 * s.abs());
    16.0 * d2
}

/// Recorded bound of |chi'| on the collar, for error budgeting.
pub fn cutoff_max_slope() -> f64 {
    let mut m = 0.0f64;
    for i in 0..=4000 {
        let s = 0.25 + 0.25 * i as f64 / 4000.0;
        m = m.max(cutoff_chi_d1(s).abs());
    }
    m
}

// ---------------------------------------------------------------------------
// Regions and weights
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum RegionKind {
    /// Strebel cylinder carrying the model solution near its core loop.
    Cylinder,
    /// Disk around a zero of the quadratic differential (fiducial data).
    Disk,
    /// Interior chart carrying the limiting configuration exactly.
    Interior,
}

#[derive(Debug, Clone)]
pub struct RegionSpec {
    pub kind: RegionKind,
    pub chart: Chart,
}

impl RegionSpec {
    pub fn cylinder(sigma: f64, nx: usize, ny: usize) -> Result<RegionSpec> {
        Ok(RegionSpec {
            kind: RegionKind::Cylinder,
            chart: Chart::new((-1.0, 1.0), (0.0, sigma), Some(sigma), true, nx, ny)?,
        })
    }

    pub fn disk(nx: usize, ny: usize) -> Result<RegionSpec> {
        Ok(RegionSpec {
            kind: RegionKind::Disk,
            chart: Chart::new((-1.0, 1.0), (-1.0, 1.0), None, false, nx, ny)?,
        })
    }

    pub fn interior(nx: usize, ny: usize) -> Result<RegionSpec> {
        Ok(RegionSpec {
            kind: RegionKind::Interior,
            chart: Chart::new((-1.0, 1.0), (-1.0, 1.0), None, false, nx, ny)?,
        })
    }
}

/// Weight functions of the gluing norms: rho is the mollified |Re z| on
/// cylinders and 1 elsewhere; r_t = sqrt(t^{-4/3} + r^2) on disks.
#[derive(Debug, Clone, Copy)]
pub struct WeightFns {
    pub kind: RegionKind,
    pub t: f64,
}

impl WeightFns {
    pub fn rho(&self, x: f64, _y: f64) -> f64 {
        match self.kind {
            RegionKind::Cylinder => {
                let u = x.abs();
                let (s, _, _) = smoothstep((u - 0.5) * 2.0);
                (u * (1.0 - s) + s).min(1.0)
            }
            _ => 1.0,
        }
    }

    pub fn r_t(&self, x: f64, y: f64) -> f64 {
        match self.kind {
            RegionKind::Disk => {
                let r2 = x * x + y * y;
                (self.t.powf(-4.0 / 3.0) + r2).sqrt()
            }
            _ => 1.0,
        }
    }
}

// ---------------------------------------------------------------------------
// Approximate solutions
// ---------------------------------------------------------------------------

/// Limiting configuration on interior charts and cylinders:
/// trivial connection, Phi = c [[0,1],[1,0]] dz with c = 1 (interior) or 1/2
/// (cylinder normal form).
pub fn limiting_configuration(kind: RegionKind) -> GaugePair {
    let c = match kind {
        RegionKind::Cylinder => 0.5,
        _ => 1.0,
    };
    GaugePair {
        a_x: MatrixField::zero(),
        a_y: MatrixField::zero(),
        phi_z: MatrixField::constant(Mat2::u().scale_re(c)),
        metric: MetricSign::Definite,
    }
}

/// Gauged interpolation between the limiting configuration and the exact
/// model/fiducial solution: identical to the exact solution where chi = 1
/// and to the limiting configuration where chi = 0.
pub fn approximate_pair(
    region: &RegionSpec,
    t: f64,
    profile: Option<&FiducialProfile>,
) -> Result<GaugePair> {
    match region.kind {
        RegionKind::Interior => Ok(limiting_configuration(RegionKind::Interior)),
        RegionKind::Cylinder => Ok(cylinder_approximate_pair(t)),
        RegionKind::Disk => {
            let p = profile.ok_or_else(|| {
                CoreError::BadDomain("disk region needs a solved fiducial profile".into())
            })?;
            if (p.t - t).abs() > 1e-12 {
                return Err(CoreError::BadDomain(format!(
                    "profile solved for t = {} but t = {t} requested",
                    p.t
                )));
            }
            Ok(disk_approximate_pair(p))
        }
    }
}

/// Cylinder interpolation: gauge the limiting pair by
/// exp(chi(x) log g_model) with g_model = diag(tanh(tx)^{1/2}, tanh(tx)^{-1/2});
/// the logarithm takes the principal branch (phase i pi/2 per entry for
/// x < 0). Analytic derivative oracles throughout.
fn cylinder_approximate_pair(t: f64) -> GaugePair {
    // psi(x) = chi(x) mu(x) with mu = log(tanh(tx))/2 (complex for x < 0).
    let psi_parts = move |x: f64| -> (f64, f64, f64, f64) {
        // Returns (Re psi, Im psi, Re psi', Im psi').
        let chi = cutoff_chi(x);
        let chi1 = cutoff_chi_d1(x);
        let tau = (t * x).tanh();
        let mu_re = 0.5 * tau.abs().ln();
        let mu_im = if x < 0.0 { 0.5 * std::f64::consts::PI } else { 0.0 };
        let mu_re_d = t * csch(2.0 * t * x);
        (
            chi * mu_re,
            chi * mu_im,
            chi1 * mu_re + chi * mu_re_d,
            chi1 * mu_im,
        )
    };
    let a_x: FieldFn = Arc::new(move |x, _| {
        let (_, _, _, ip) = psi_parts(x);
        Mat2::diag(cx(0.0, ip), cx(0.0, -ip))
    });
    let a_x_dx: FieldFn = Arc::new(move |x, _| {
        let chi2 = cutoff_chi_d2(x);
        let mu_im = if x < 0.0 { 0.5 * std::f64::consts::PI } else { 0.0 };
        Mat2::diag(cx(0.0, chi2 * mu_im), cx(0.0, -chi2 * mu_im))
    });
    let a_y: FieldFn = Arc::new(move |x, _| {
        let (_, _, rp, _) = psi_parts(x);
        Mat2::diag(cx(0.0, -rp), cx(0.0, rp))
    });
    let a_y_dx: FieldFn = Arc::new(move |x, _| {
        let chi = cutoff_chi(x);
        let chi1 = cutoff_chi_d1(x);
        let chi2 = cutoff_chi_d2(x);
        let tau = (t * x).tanh();
        let mu_re = 0.5 * tau.abs().ln();
        let mu_re_d = t * csch(2.0 * t * x);
        let u = 2.0 * t * x;
        let mu_re_dd = -2.0 * t * t * csch(u) * (u.cosh() / u.sinh());
        let rpp = chi2 * mu_re + 2.0 * chi1 * mu_re_d + chi * mu_re_dd;
        Mat2::diag(cx(0.0, -rpp), cx(0.0, rpp))
    });
    let phi: FieldFn = Arc::new(move |x, _| {
        let (r, i, _, _) = psi_parts(x);
        let e = Cx::new(r, i).exp();
        Mat2::new(
            cx(0.0, 0.0),
            (e * e).inv() * 0.5,
            e * e * 0.5,
            cx(0.0, 0.0),
        )
    });
    let phi_dx: FieldFn = Arc::new(move |x, _| {
        let (r, i, rp, ip) = psi_parts(x);
        let e2 = (Cx::new(r, i) * 2.0).exp();
        let dpsi2 = Cx::new(rp, ip) * 2.0;
        Mat2::new(
            cx(0.0, 0.0),
            -dpsi2 * e2.inv() * 0.5,
            dpsi2 * e2 * 0.5,
            cx(0.0, 0.0),
        )
    });
    let zero: FieldFn = Arc::new(|_, _| Mat2::zero());
    GaugePair {
        a_x: MatrixField::new_analytic(a_x, a_x_dx, zero.clone()),
        a_y: MatrixField::new_analytic(a_y, a_y_dx, zero.clone()),
        phi_z: MatrixField::new_analytic(phi, phi_dx, zero),
        metric: MetricSign::Definite,
    }
}

/// Disk interpolation: gauge the limiting fiducial configuration by
/// diag(e^{-chi(|z|) ell/2}, e^{chi(|z|) ell/2}); at chi = 1 this is the
/// exact fiducial pair, at chi = 0 the limiting fiducial configuration.
fn disk_approximate_pair(profile: &FiducialProfile) -> GaugePair {
    let p = Arc::new(profile.clone());
    // psi_d(r) = -chi(r) ell(r) / 2 (real); the connection is
    // A = i (F_eff(r)) diag(1,-1) dtheta with F_eff = 1/4 + r psi_d'(r)/(-1)...
    // assembled directly from psi_d and its derivatives below.
    let psi = {
        let p = p.clone();
        move |r: f64| -> (f64, f64, f64) {
            let chi = cutoff_chi(r);
            let chi1 = cutoff_chi_d1(r);
            let chi2 = cutoff_chi_d2(r);
            let ell = p.ell(r).expect("disk gauge outside profile");
            let dell = p.ell_deriv(r).unwrap();
            let t = p.t;
            let ddell = 8.0 * t * t * r * (2.0 * ell).sinh() - dell / r;
            let v = -0.5 * chi * ell;
            let dv = -0.5 * (chi1 * ell + chi * dell);
            let ddv = -0.5 * (chi2 * ell + 2.0 * chi1 * dell + chi * ddell);
            (v, dv, ddv)
        }
    };
    let d = Mat2::delta();
    // A = A_infty + i diag(1,-1) (psi_y dx - psi_x dy), psi radial.
    let a_field = {
        let psi = psi.clone();
        move |comp: usize| -> FieldFn {
            let psi = psi.clone();
            Arc::new(move |x: f64, y: f64| {
                let r = (x * x + y * y).sqrt();
                let (_, dv, _) = psi(r);
                let c = if comp == 0 { -y } else { x };
                // limiting part (1/4) c / r^2 plus the gauge part -dv * c / r
                // with sign arranged so chi = 1 reproduces F_t.
                d.scale(cx(0.0, c * (0.25 / (r * r) - dv / r)))
            })
        }
    };
    let a_deriv = {
        let psi = psi.clone();
        move |comp: usize, dir: usize| -> FieldFn {
            let psi = psi.clone();
            Arc::new(move |x: f64, y: f64| {
                let r2 = x * x + y * y;
                let r = r2.sqrt();
                let (_, dv, ddv) = psi(r);
                let c = if comp == 0 { -y } else { x };
                let dc: f64 = match (comp, dir) {
                    (0, 1) => -1.0,
                    (1, 0) => 1.0,
                    _ => 0.0,
                };
                let rd = if dir == 0 { x / r } else { y / r };
                let q = 0.25 / r2 - dv / r;
                let dq = (-0.5 / (r2 * r) - (ddv * r - dv) / r2) * rd;
                d.scale(cx(0.0, dc * q + c * dq))
            })
        }
    };
    let phi_field: FieldFn = {
        let psi = psi.clone();
        Arc::new(move |x: f64, y: f64| {
            let r = (x * x + y * y).sqrt();
            let (v, _, _) = psi(r);
            let b = r.sqrt() * (-2.0 * v).exp();
            let cz = cx(x, y) * (2.0 * v).exp() / r.sqrt();
            Mat2::new(cx(0.0, 0.0), cx(b, 0.0), cz, cx(0.0, 0.0))
        })
    };
    let phi_deriv = move |dir: usize| -> FieldFn {
        let psi = psi.clone();
        Arc::new(move |x: f64, y: f64| {
            let r = (x * x + y * y).sqrt();
            let (v, dv, _) = psi(r);
            let rd = if dir == 0 { x / r } else { y / r };
            let b = r.sqrt() * (-2.0 * v).exp();
            let db = b * (0.5 / r - 2.0 * dv) * rd;
            let c0 = (2.0 * v).exp() / r.sqrt();
            let z = cx(x, y);
            let dz = if dir == 0 { cx(1.0, 0.0) } else { cx(0.0, 1.0) };
            let dc = z * c0 * (2.0 * dv - 0.5 / r) * rd + dz * c0;
            Mat2::new(cx(0.0, 0.0), cx(db, 0.0), dc, cx(0.0, 0.0))
        })
    };
    GaugePair {
        a_x: MatrixField::new_analytic(a_field(0), a_deriv(0, 0), a_deriv(0, 1)),
        a_y: MatrixField::new_analytic(a_field(1), a_deriv(1, 0), a_deriv(1, 1)),
        phi_z: MatrixField::new_analytic(phi_field, phi_deriv(0), phi_deriv(1)),
        metric: MetricSign::Definite,
    }
}

// ---------------------------------------------------------------------------
// Error term and sweeps
// ---------------------------------------------------------------------------

/// Curvature-part residual of the rescaled equations at the approximate
/// pair; supported in the interpolation collars.
pub fn error_term(pair: &GaugePair, t: f64, x: f64, y: f64) -> f64 {
    hitchin_residual(pair, t, x, y).0
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepRow {
    pub t: f64,
    pub region: RegionKind,
    pub sup_err: f64,
    pub weighted_sup_err: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SlopeFit {
    pub region: RegionKind,
    /// Least-squares slope of log sup_err against t.
    pub raw_slope: f64,
    /// Slope of log(sup_err / t^2) against t: the decay rate of the
    /// interpolation error with the quadratic-term prefactor removed.
    pub decay_slope: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ErrorSweep {
    pub rows: Vec<SweepRow>,
    pub fits: Vec<SlopeFit>,
}

/// Sweeps the interpolation error over the collar of each region for every t
/// and fits the decay slopes.
pub fn error_sweep(
    kinds: &[RegionKind],
    ts: &[f64],
    profiles: &[Option<FiducialProfile>],
) -> Result<ErrorSweep> {
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for &kind in kinds {
        let mut lts = Vec::new();
        let mut lsup = Vec::new();
        for (it, &t) in ts.iter().enumerate() {
            let region = match kind {
                RegionKind::Cylinder => RegionSpec::cylinder(1.0, 33, 5)?,
                RegionKind::Disk => RegionSpec::disk(33, 33)?,
                RegionKind::Interior => RegionSpec::interior(9, 9)?,
            };
            let profile = profiles.get(it).and_then(|p| p.as_ref());
            let pair = approximate_pair(&region, t, profile)?;
            let w = WeightFns { kind, t };
            let mut sup = 0.0f64;
            let mut wsup = 0.0f64;
            // Sample the collar densely in the radial/x direction.
            let n = 160;
            for i in 0..=n {
                let s = 0.25 + 0.25 * i as f64 / n as f64;
                let pts: Vec<(f64, f64)> = match kind {
                    RegionKind::Cylinder => {
                        vec![(s, 0.3), (-s, 0.3)]
                    }
                    _ => vec![(s * 0.8, s * 0.6), (s, 0.0), (0.0, -s)],
                };
                for (x, y) in pts {
                    let e = error_term(&pair, t, x, y);
                    sup = sup.max(e);
                    let weight = w.rho(x, y).powf(-0.75) * w.r_t(x, y).powi(2);
                    wsup = wsup.max(weight * e);
                }
            }
            rows.push(SweepRow { t, region: kind, sup_err: sup, weighted_sup_err: wsup });
            lts.push(t);
            lsup.push(sup.max(1e-300).ln());
        }
        if lts.len() >= 2 {
            let (raw, _) = linear_fit(&lts, &lsup);
            let l2: Vec<f64> = lts
                .iter()
                .zip(&lsup)
                .map(|(t, l)| l - 2.0 * t.ln())
                .collect();
            let (decay, _) = linear_fit(&lts, &l2);
            fits.push(SlopeFit { region: kind, raw_slope: raw, decay_slope: decay });
        }
    }
    Ok(ErrorSweep { rows, fits })
}

// ---------------------------------------------------------------------------
// Linearization local forms
// ---------------------------------------------------------------------------

/// Conformal factor of the region metric at a point (1 on Euclidean charts,
/// x^2 on the hyperbolic cylinder).
pub fn metric_factor(kind: RegionKind, x: f64) -> f64 {
    match kind {
        RegionKind::Cylinder => x * x,
        _ => 1.0,
    }
}

/// Assembles L_t(gamma) = Delta_A gamma - i * t^2 M_Phi(gamma) at a point
/// from the region's gauge pair, with finite-difference covariant second
/// derivatives.
pub fn linearization_apply(
    pair: &GaugePair,
    kind: RegionKind,
    t: f64,
    gamma: &MatrixField,
    x: f64,
    y: f64,
) -> Mat2 {
    let s = metric_factor(kind, x);
    let h = 1e-4;
    let cov = |dir: usize, x: f64, y: f64| -> Mat2 {
        let d = if dir == 0 { gamma.dx(x, y) } else { gamma.dy(x, y) };
        let a = if dir == 0 { pair.a_x.eval(x, y) } else { pair.a_y.eval(x, y) };
        d + Mat2::comm(a, gamma.eval(x, y))
    };
    let second = |dir: usize| -> Mat2 {
        let (dx, dy) = if dir == 0 { (h, 0.0) } else { (0.0, h) };
        let dcov = (cov(dir, x + dx, y + dy) - cov(dir, x - dx, y - dy)).scale_re(0.5 / h);
        let a = if dir == 0 { pair.a_x.eval(x, y) } else { pair.a_y.eval(x, y) };
        dcov + Mat2::comm(a, cov(dir, x, y))
    };
    let laplace = (second(0) + second(1)).scale_re(-s);
    let p = pair.phi_z.eval(x, y);
    let ps = pair.metric.adjoint(p);
    let m = Mat2::comm(ps, Mat2::comm(p, gamma.eval(x, y)))
        + Mat2::comm(p, Mat2::comm(ps, gamma.eval(x, y)));
    laplace + m.scale_re(2.0 * s * t * t)
}

// ---------------------------------------------------------------------------
// Indicial data
// ---------------------------------------------------------------------------

/// Indicial polynomial -s^2 + s + 2 of the core-loop normal operators and
/// its integer roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct IndicialData {
    /// Coefficients (c2, c1, c0) of c2 s^2 + c1 s + c0.
    pub coeffs: [i64; 3],
    pub roots: [i64; 2],
}

/// Derives the indicial family of the two core-loop normal operators
///   N(L^1) = -(x dx)^2 + (x dx) - (x dy)^2 + 2,
///   N(L^2) = -x^2 dx^2 - x^2 dy^2 + 2 i x dy + 2,
/// by substituting x^s and dropping the y-derivatives; both give
/// -s^2 + s + 2 with integer roots -1 and 2. All arithmetic is exact.
pub fn indicial_data() -> IndicialData {
    // N(L^1) in (x d/dx)-form: coefficients of (x dx)^2, (x dx), 1.
    let l1 = [-1i64, 1, 2];
    // N(L^2) in x^2 dx^2-form: x^2 dx^2 acts on x^s as s(s-1),
    // so the indicial coefficients are -(s^2 - s) + 2.
    let l2 = [-1i64, 1, 2];
    assert_eq!(l1, l2);
    let eval = |s: i64| l1[0] * s * s + l1[1] * s + l1[2];
    let roots = [-1i64, 2];
    assert_eq!(eval(roots[0]), 0);
    assert_eq!(eval(roots[1]), 0);
    IndicialData { coeffs: l1, roots }
}

/// Zero-mode exponents (1 +- sqrt(1 + 4 lambda)) / 2 of the hyperbolic
/// half-plane operator Delta_{H^2} + lambda; for lambda = 2 these are the
/// indicial roots {2, -1}.
pub fn halfspace_exponents(lambda: f64) -> (f64, f64) {
    let d = (1.0 + 4.0 * lambda).sqrt();
    (0.5 * (1.0 + d), 0.5 * (1.0 - d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiducial::solve_profile;

    #[test]
    fn cutoff_shape_and_slope_bound() {
        assert_eq!(cutoff_chi(0.0), 1.0);
        assert_eq!(cutoff_chi(0.2), 1.0);
        assert_eq!(cutoff_chi(0.6), 0.0);
        assert!((cutoff_chi(0.3) - cutoff_chi(-0.3)).abs() < 1e-15);
        assert!(cutoff_chi(0.35) > 0.0 && cutoff_chi(0.35) < 1.0);
        // Monotone on each side of the collar.
        let mut prev = 1.0;
        for i in 0..=100 {
            let s = 0.25 + 0.25 * i as f64 / 100.0;
            let v = cutoff_chi(s);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
        let m = cutoff_max_slope();
        assert!(m <= 12.0, "recorded |chi'| bound {m}");
        assert!(m > 4.0);
        // Analytic chi' matches differences.
        let h = 1e-6;
        for s in [0.3, 0.41, -0.37] {
            let fd = (cutoff_chi(s + h) - cutoff_chi(s - h)) / (2.0 * h);
            assert!((fd - cutoff_chi_d1(s)).abs() < 1e-6);
            let fd2 = (cutoff_chi_d1(s + h) - cutoff_chi_d1(s - h)) / (2.0 * h);
            assert!((fd2 - cutoff_chi_d2(s)).abs() < 1e-4);
        }
    }

    #[test]
    fn weights_are_bounded_and_floored() {
        let w = WeightFns { kind: RegionKind::Cylinder, t: 4.0 };
        for x in [-1.5, -0.4, 0.0, 0.3, 0.49, 0.8, 2.0] {
            let r = w.rho(x, 0.0);
            assert!((0.0..=1.0).contains(&r));
            if x.abs() <= 0.5 {
                assert!((r - x.abs()).abs() < 1e-15);
            }
        }
        let wd = WeightFns { kind: RegionKind::Disk, t: 4.0 };
        for (x, y) in [(0.0, 0.0), (0.3, 0.4), (1.0, 0.0)] {
            assert!(wd.r_t(x, y) >= 4.0f64.powf(-2.0 / 3.0) - 1e-15);
        }
    }

    #[test]
    fn cylinder_interpolation_matches_ends() {
        let t = 2.0;
        let appr = cylinder_approximate_pair(t);
        let model = crate::model::model_pair(t);
        let lim = limiting_configuration(RegionKind::Cylinder);
        for x in [0.1, -0.2, 0.24] {
            assert!((appr.a_y.eval(x, 0.4) - model.a_y.eval(x, 0.4)).norm() < 1e-9);
            assert!((appr.phi_z.eval(x, 0.4) - model.phi_z.eval(x, 0.4)).norm() < 1e-9);
        }
        for x in [0.8, -0.55, 0.99] {
            assert!(appr.a_y.eval(x, 0.0).norm() < 1e-9);
            assert!((appr.phi_z.eval(x, 0.0) - lim.phi_z.eval(x, 0.0)).norm() < 1e-9);
        }
        // Continuity across the collar edges.
        for edge in [0.25, 0.5, -0.25, -0.5] {
            let jump = (appr.phi_z.eval(edge - 1e-9, 0.1)
                - appr.phi_z.eval(edge + 1e-9, 0.1))
            .norm();
            assert!(jump < 1e-9, "jump {jump} at {edge}");
        }
    }

    #[test]
    fn disk_interpolation_matches_ends() {
        let t = 6.0;
        let p = solve_profile(t, 3.0, 8192).unwrap();
        let appr = disk_approximate_pair(&p);
        let fid = crate::fiducial::fiducial_pair(&p);
        let lim = crate::fiducial::limiting_fiducial();
        for (x, y) in [(0.1, 0.05), (0.0, 0.2), (-0.15, -0.1)] {
            assert!((appr.a_x.eval(x, y) - fid.a_x.eval(x, y)).norm() < 1e-9);
            assert!((appr.phi_z.eval(x, y) - fid.phi_z.eval(x, y)).norm() < 1e-9);
        }
        for (x, y) in [(0.6, 0.0), (0.0, 0.8), (0.5, 0.5)] {
            assert!((appr.a_x.eval(x, y) - lim.a_x.eval(x, y)).norm() < 1e-9);
            assert!((appr.phi_z.eval(x, y) - lim.phi_z.eval(x, y)).norm() < 1e-9);
        }
        // chi in (0,1): the gauge is positive diagonal, so the interpolated
        // Higgs keeps positive off-diagonal modulus.
        let m = appr.phi_z.eval(0.3, 0.0);
        assert!(m.m[0][1].re > 0.0 && m.m[1][0].re > 0.0);
    }

    #[test]
    fn error_vanishes_outside_collars() {
        let t = 4.0;
        let appr = cylinder_approximate_pair(t);
        for x in [0.05, 0.2, -0.23] {
            assert!(error_term(&appr, t, x, 0.3) < 1e-12, "inside");
        }
        for x in [0.55, 0.9, -0.7] {
            assert!(error_term(&appr, t, x, 0.3) < 1e-12, "outside");
        }
        // Nonzero inside the collar.
        assert!(error_term(&appr, t, 0.33, 0.3) > 1e-8);
    }

    #[test]
    fn error_term_equals_residual_route() {
        let t = 4.0;
        let appr = cylinder_approximate_pair(t);
        let (r1, _) = hitchin_residual(&appr, t, 0.35, 0.6);
        assert!((error_term(&appr, t, 0.35, 0.6) - r1).abs() < 1e-10);
    }

    #[test]
    fn decay_slopes_meet_thresholds() {
        let ts = [4.0, 6.0, 8.0, 12.0, 16.0];
        let profiles: Vec<Option<FiducialProfile>> = ts
            .iter()
            .map(|&t| Some(solve_profile(t, 3.0 * t.powf(-2.0 / 3.0).max(1.0), 4096).unwrap()))
            .collect();
        let sweep = error_sweep(
            &[RegionKind::Cylinder, RegionKind::Disk],
            &ts,
            &profiles,
        )
        .unwrap();
        for fit in &sweep.fits {
            match fit.region {
                RegionKind::Cylinder => {
                    assert!(fit.decay_slope <= -0.4, "cylinder decay {}", fit.decay_slope)
                }
                RegionKind::Disk => {
                    assert!(fit.decay_slope <= -0.25, "disk decay {}", fit.decay_slope)
                }
                _ => {}
            }
        }
    }

    #[test]
    fn interior_local_form_on_constant_sections() {
        use crate::mat2::cx;
        let t = 1.7;
        let pair = limiting_configuration(RegionKind::Interior);
        let gamma_m = Mat2::new(cx(0.4, 0.0), cx(0.3, 0.7), cx(0.3, -0.7), cx(-0.4, 0.0));
        let gamma = MatrixField::constant(gamma_m);
        let got = linearization_apply(&pair, RegionKind::Interior, t, &gamma, 0.2, -0.3);
        let u = gamma_m.m[0][0];
        let v = gamma_m.m[0][1];
        let expect = Mat2::new(
            u * 16.0,
            (v - v.conj()) * 8.0,
            (v.conj() - v) * 8.0,
            -u * 16.0,
        )
        .scale_re(t * t);
        assert!((got - expect).norm() < 1e-7, "{}", (got - expect).norm());
    }

    #[test]
    fn core_loop_diagonal_local_form() {
        use crate::field::FieldFn;
        let t = 1.2;
        let pair = crate::model::model_pair(t);
        // Diagonal section gamma = diag(u, -u) with a smooth scalar u.
        let uf = |x: f64, y: f64| (1.3 * x).sin() * (0.7 * y).cos() + 0.2 * x * y;
        let f: FieldFn = Arc::new(move |x, y| {
            Mat2::diag(cx(uf(x, y), 0.0), cx(-uf(x, y), 0.0))
        });
        let gamma = MatrixField::new_fd(f, 1e-5);
        let (x, y) = (0.7, 0.4);
        let got = linearization_apply(&pair, RegionKind::Cylinder, t, &gamma, x, y);
        // L^1 u = -x^2 (u_xx + u_yy) + 2 t^2 x^2 E(tx) u.
        let h = 1e-4;
        let lap = (uf(x + h, y) + uf(x - h, y) + uf(x, y + h) + uf(x, y - h)
            - 4.0 * uf(x, y))
            / (h * h);
        let e = (t * x).tanh().powi(2) + (t * x).tanh().powi(-2);
        let expect = -x * x * lap + 2.0 * t * t * x * x * e * uf(x, y);
        assert!(
            (got.m[0][0].re - expect).abs() < 1e-5,
            "L1 u = {} vs {expect}",
            got.m[0][0].re
        );
    }

    #[test]
    fn kernel_direction_at_a_zero() {
        // gamma with v = e^{-i theta/2}-phase satisfies v = e^{-i theta}
        // conj(v) and is annihilated by the zeroth-order part at the
        // limiting fiducial solution.
        let pair = crate::fiducial::limiting_fiducial();
        let (x, y) = (0.4, 0.3);
        let theta = y.atan2(x);
        let v = Cx::new(0.0, -0.5 * theta).exp();
        let gamma = Mat2::new(cx(0.0, 0.0), v, v.conj(), cx(0.0, 0.0));
        let p = pair.phi_z.eval(x, y);
        let ps = p.adj();
        let m = Mat2::comm(ps, Mat2::comm(p, gamma)) + Mat2::comm(p, Mat2::comm(ps, gamma));
        assert!(m.norm() < 1e-12, "kernel direction not annihilated: {}", m.norm());
    }

    #[test]
    fn indicial_roots_are_exact() {
        let d = indicial_data();
        assert_eq!(d.coeffs, [-1, 1, 2]);
        assert_eq!(d.roots, [-1, 2]);
        let (a, b) = halfspace_exponents(2.0);
        assert_eq!((a, b), (2.0, -1.0));
    }
}
