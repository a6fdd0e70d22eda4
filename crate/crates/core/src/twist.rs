//! The twist construction: splitting a self-duality pair along the Higgs
//! eigenline, the signature flip SU(2) <-> SU(1,1), the frame formula for the
//! de Sitter Gauss map, and the pointwise energy identities of the split.

use crate::error::{CoreError, Result};
use crate::field::{FieldFn, GaugePair, MatrixField, MetricSign};
use crate::mat2::{cx, vec2_norm, Cx, Mat2};
use std::sync::Arc;

pub type OmegaFn = Arc<dyn Fn(f64, f64) -> Cx + Send + Sync>;

pub fn constant_omega(w: Cx) -> OmegaFn {
    Arc::new(move |_, _| w)
}

/// Normalized eigenvector of the Higgs coefficient for the eigenvalue omega,
/// with the leading nonzero component rotated to the positive real axis.
pub fn eigenline(phi_z: Mat2, omega: Cx) -> Result<[Cx; 2]> {
    if omega.norm() < 1e-10 {
        return Err(CoreError::HopfZero(omega.norm()));
    }
    let consistency = (phi_z.det() + omega * omega).norm();
    if consistency > 1e-8 * (1.0 + phi_z.norm().powi(2)) {
        return Err(CoreError::NotAnEigenvalue(consistency));
    }
    // Kernel of (Phi - omega id): take the larger of the two row solutions.
    let a = phi_z.m[0][0] - omega;
    let b = phi_z.m[0][1];
    let c = phi_z.m[1][0];
    let d = phi_z.m[1][1] - omega;
    let cand1 = [b, -a];
    let cand2 = [d, -c];
    let mut v = if vec2_norm(cand1) >= vec2_norm(cand2) { cand1 } else { cand2 };
    let n = vec2_norm(v);
    if n < 1e-14 * (1.0 + phi_z.norm()) {
        return Err(CoreError::NotAnEigenvalue(n));
    }
    v = [v[0] / n, v[1] / n];
    // Phase normalization: first component real positive when possible.
    let lead = if v[0].norm() > 1e-8 { v[0] } else { v[1] };
    let phase = (lead / lead.norm()).conj();
    Ok([v[0] * phase, v[1] * phase])
}

/// Determinant-one unitary frame [v, v_perp] adapted to the eigenline.
pub fn adapted_frame(v: [Cx; 2]) -> Mat2 {
    Mat2::from_cols(v, [-v[1].conj(), v[0].conj()])
}

/// Split of a pair along the eigenline: line-connection coefficients, the
/// second fundamental forms gamma (anti-holomorphic) and alpha (holomorphic),
/// and the eigenvalue. All in the adapted unitary frame.
#[derive(Debug, Clone, Copy)]
pub struct SplitComponents {
    /// dz and dzbar coefficients of the line-bundle connection.
    pub conn_l_z: Cx,
    pub conn_l_zbar: Cx,
    /// (0,1)-form coefficient of the upper-right connection block.
    pub gamma_zbar: Cx,
    /// (1,0)-form coefficient of the upper-right Higgs block.
    pub alpha_z: Cx,
    pub omega: Cx,
    /// Size of the entries that must vanish in the adapted frame.
    pub block_residual: f64,
}

fn eigenframe_at(pair: &GaugePair, omega: &OmegaFn, x: f64, y: f64) -> Result<Mat2> {
    Ok(adapted_frame(eigenline(pair.phi_z.eval(x, y), omega(x, y))?))
}

/// Adapted-frame connection and Higgs coefficients at a point:
/// (A_z, A_zbar, Phi_z) conjugated into the eigenframe, including the
/// Maurer-Cartan term of the frame field (finite-differenced).
fn adapted_coefficients(
    pair: &GaugePair,
    omega: &OmegaFn,
    x: f64,
    y: f64,
    h: f64,
) -> Result<(Mat2, Mat2, Mat2)> {
    let v = eigenframe_at(pair, omega, x, y)?;
    let vi = v.adj(); // unitary
    let vxp = eigenframe_at(pair, omega, x + h, y)?;
    let vxm = eigenframe_at(pair, omega, x - h, y)?;
    let vyp = eigenframe_at(pair, omega, x, y + h)?;
    let vym = eigenframe_at(pair, omega, x, y - h)?;
    let dvx = (vxp - vxm).scale_re(0.5 / h);
    let dvy = (vyp - vym).scale_re(0.5 / h);
    let dvz = (dvx - dvy.scale(cx(0.0, 1.0))).scale_re(0.5);
    let dvzb = (dvx + dvy.scale(cx(0.0, 1.0))).scale_re(0.5);
    let a_z = vi * pair.a_z(x, y) * v + vi * dvz;
    let a_zbar = vi * pair.a_zbar(x, y) * v + vi * dvzb;
    let phi = vi * pair.phi_z.eval(x, y) * v;
    Ok((a_z, a_zbar, phi))
}

pub fn split_components(
    pair: &GaugePair,
    omega: &OmegaFn,
    x: f64,
    y: f64,
) -> Result<SplitComponents> {
    let (a_z, a_zbar, phi) = adapted_coefficients(pair, omega, x, y, 1e-5)?;
    let block_residual = phi.m[1][0].norm();
    Ok(SplitComponents {
        conn_l_z: a_z.m[0][0],
        conn_l_zbar: a_zbar.m[0][0],
        gamma_zbar: a_zbar.m[0][1],
        alpha_z: phi.m[0][1],
        omega: phi.m[0][0],
        block_residual,
    })
}

/// Reassembles the adapted-frame pair from split components and transports
/// it back to the original frame; the distance to the input is a consistency
/// diagnostic.
pub fn split_reassembly_residual(
    pair: &GaugePair,
    omega: &OmegaFn,
    x: f64,
    y: f64,
) -> Result<f64> {
    let h = 1e-5;
    let (a_z, a_zbar, phi) = adapted_coefficients(pair, omega, x, y, h)?;
    let s = split_components(pair, omega, x, y)?;
    let a_z_re = Mat2::new(s.conn_l_z, a_z.m[0][1], -s.gamma_zbar.conj(), -s.conn_l_z);
    let a_zbar_re = Mat2::new(s.conn_l_zbar, s.gamma_zbar, a_zbar.m[1][0], -s.conn_l_zbar);
    let phi_re = Mat2::new(s.omega, s.alpha_z, cx(0.0, 0.0), -s.omega);
    Ok((a_z_re - a_z).norm().max((a_zbar_re - a_zbar).norm()) .max((phi_re - phi).norm()
        - s.block_residual))
}

/// Twist of a definite self-duality pair into an indefinite one: in the
/// eigenframe the connection keeps its diagonal and swaps its off-diagonal
/// block with the Higgs field; the output is expressed in the eigenframe, in
/// which the indefinite metric is the constant diag(1,-1).
pub fn twist_su2_to_su11(pair: &GaugePair, t: f64, omega: &OmegaFn) -> Result<GaugePair> {
    if pair.metric != MetricSign::Definite {
        return Err(CoreError::BadDomain("forward twist expects a definite pair".into()));
    }
    twist_block_swap(pair, t, omega, MetricSign::Indefinite)
}

fn twist_block_swap(
    pair: &GaugePair,
    t: f64,
    omega: &OmegaFn,
    out_metric: MetricSign,
) -> Result<GaugePair> {
    let pair = pair.clone();
    let omega = omega.clone();
    let h = 1e-5;
    let eval = Arc::new(move |x: f64, y: f64| -> (Mat2, Mat2, Mat2) {
        let (a_z, a_zbar, phi) = adapted_coefficients(&pair, &omega, x, y, h)
            .expect("twist evaluated where the eigenline is undefined");
        // Unrescaled Higgs Psi = t Phi; swap gamma (connection, (0,1)) with
        // alpha (Higgs, (1,0)):
        //   new A_z = [[a, t alpha],[old behaviour of -gamma* removed]],
        //   new Psi = [[t omega, 0],[-gamma*, -t omega]].
        let alpha = phi.m[0][1] * t;
        let gamma = a_zbar.m[0][1];
        let new_a_z = Mat2::new(a_z.m[0][0], alpha, cx(0.0, 0.0), a_z.m[1][1]);
        let new_a_zbar = Mat2::new(a_zbar.m[0][0], cx(0.0, 0.0), alpha.conj(), a_zbar.m[1][1]);
        let new_phi = Mat2::new(
            phi.m[0][0],
            cx(0.0, 0.0),
            -gamma.conj() / t,
            phi.m[1][1],
        );
        let a_x = new_a_z + new_a_zbar;
        let a_y = (new_a_z - new_a_zbar).scale(cx(0.0, 1.0));
        (a_x, a_y, new_phi)
    });
    let (e1, e2, e3) = (eval.clone(), eval.clone(), eval);
    Ok(GaugePair {
        a_x: MatrixField::new_fd(Arc::new(move |x, y| e1(x, y).0), h),
        a_y: MatrixField::new_fd(Arc::new(move |x, y| e2(x, y).1), h),
        phi_z: MatrixField::new_fd(Arc::new(move |x, y| e3(x, y).2), h),
        metric: out_metric,
    })
}

/// Pairing of the omega-eigenline of an indefinite pair against the metric
/// diag(1,-1); its vanishing marks the locus where the reverse twist is
/// undefined.
pub fn eigenline_pairing(pair: &GaugePair, omega: &OmegaFn, x: f64, y: f64) -> Result<f64> {
    let v = eigenline(pair.phi_z.eval(x, y), omega(x, y))?;
    Ok(v[0].norm_sqr() - v[1].norm_sqr())
}

/// Reverse twist: from an indefinite pair whose omega-eigenline is nowhere
/// null back to a definite pair, by splitting along the eigenline and its
/// metric-orthogonal complement and swapping the blocks back. The output is
/// expressed in the frame that diagonalizes the indefinite metric to
/// diag(1,-1) and renders the recovered definite metric the standard one.
pub fn twist_su11_to_su2(pair: &GaugePair, t: f64, omega: &OmegaFn) -> Result<GaugePair> {
    if pair.metric != MetricSign::Indefinite {
        return Err(CoreError::BadDomain("reverse twist expects an indefinite pair".into()));
    }
    // Null-eigenline guard at construction time is pointwise; evaluation
    // panics outside the validated region, so check lazily in the closure
    // and eagerly at the probe point where the caller works.
    let pair = pair.clone();
    let omega = omega.clone();
    let h = 1e-5;
    let frame = Arc::new(move |x: f64, y: f64| -> Result<Mat2> {
        let v = eigenline(pair.phi_z.eval(x, y), omega(x, y))?;
        let pairing = v[0].norm_sqr() - v[1].norm_sqr();
        if pairing.abs() < 1e-6 {
            return Err(CoreError::NullEigenline(pairing.abs()));
        }
        // h-orthonormal frame: hat-h(e1,e1) = +1, hat-h(e2,e2) = -1.
        let w = [v[1].conj(), v[0].conj()];
        let (pos, neg) = if pairing > 0.0 { (v, w) } else { (w, v) };
        let pn = (pos[0].norm_sqr() - pos[1].norm_sqr()).abs().sqrt();
        let nn = (neg[1].norm_sqr() - neg[0].norm_sqr()).abs().sqrt();
        let mut frame = Mat2::from_cols(
            [pos[0] / pn, pos[1] / pn],
            [neg[0] / nn, neg[1] / nn],
        );
        // Normalize the determinant phase.
        let det = frame.det();
        let phase = det / det.norm();
        frame.m[0][1] /= phase;
        frame.m[1][1] /= phase;
        Ok(frame)
    });
    let pair2 = {
        let frame = frame.clone();
        let pair = pair.clone();
        let omega = omega.clone();
        Arc::new(move |x: f64, y: f64| -> Result<(Mat2, Mat2, Mat2)> {
            let v = frame(x, y)?;
            // Inverse with respect to hat-h: v is h-unitary, so
            // v^{-1} = delta v^* delta (an honest inverse since det v = 1).
            let vi = v.inv().ok_or(CoreError::NullEigenline(0.0))?;
            let d = |g: &dyn Fn(f64, f64) -> Result<Mat2>, dir: usize| -> Result<Mat2> {
                let (dx, dy) = if dir == 0 { (h, 0.0) } else { (0.0, h) };
                Ok((g(x + dx, y + dy)? - g(x - dx, y - dy)?).scale_re(0.5 / h))
            };
            let fr = |a: f64, b: f64| frame(a, b);
            let dvx = d(&fr, 0)?;
            let dvy = d(&fr, 1)?;
            let dvz = (dvx - dvy.scale(cx(0.0, 1.0))).scale_re(0.5);
            let dvzb = (dvx + dvy.scale(cx(0.0, 1.0))).scale_re(0.5);
            let a_z = vi * pair.a_z(x, y) * v + vi * dvz;
            let a_zbar = vi * pair.a_zbar(x, y) * v + vi * dvzb;
            let phi = vi * pair.phi_z.eval(x, y) * v;
            let _ = omega(x, y);
            // Reverse block swap: alpha comes back from the connection's
            // (1,2) dz-entry, gamma from the Higgs' (2,1) entry.
            let alpha = a_z.m[0][1];
            let gamma_zbar = -(phi.m[1][0] * t).conj();
            let new_a_z =
                Mat2::new(a_z.m[0][0], cx(0.0, 0.0), -gamma_zbar.conj(), a_z.m[1][1]);
            let new_a_zbar =
                Mat2::new(a_zbar.m[0][0], gamma_zbar, cx(0.0, 0.0), a_zbar.m[1][1]);
            let new_phi = Mat2::new(phi.m[0][0], alpha / t, cx(0.0, 0.0), phi.m[1][1]);
            Ok((
                new_a_z + new_a_zbar,
                (new_a_z - new_a_zbar).scale(cx(0.0, 1.0)),
                new_phi,
            ))
        })
    };
    let (e1, e2, e3) = (pair2.clone(), pair2.clone(), pair2);
    Ok(GaugePair {
        a_x: MatrixField::new_fd(
            Arc::new(move |x, y| e1(x, y).expect("reverse twist on a null eigenline").0),
            h,
        ),
        a_y: MatrixField::new_fd(
            Arc::new(move |x, y| e2(x, y).expect("reverse twist on a null eigenline").1),
            h,
        ),
        phi_z: MatrixField::new_fd(
            Arc::new(move |x, y| e3(x, y).expect("reverse twist on a null eigenline").2),
            h,
        ),
        metric: MetricSign::Definite,
    })
}

/// De Sitter Gauss map from a parallel frame and the eigenline-adapted
/// basis: N = sign * F^* (V diag(1,-1) V^*) F, Hermitian of determinant -1.
pub fn gauss_map_from_frames(frame: Mat2, v: [Cx; 2], sign: f64) -> Mat2 {
    let vm = adapted_frame(v);
    let refl = vm * Mat2::delta() * vm.adj();
    (frame.adj() * refl * frame).scale_re(sign)
}

/// Curvature identity of the split line bundle:
/// |F^{nabla L} + gamma^* ^ gamma + t^2 alpha ^ alpha^*| at a point, as the
/// dx^dy coefficient.
pub fn line_curvature_identity(
    pair: &GaugePair,
    t: f64,
    omega: &OmegaFn,
    x: f64,
    y: f64,
) -> Result<f64> {
    let h = 1e-4;
    let a_coeff = |x: f64, y: f64| -> Result<(Cx, Cx)> {
        let s = split_components(pair, omega, x, y)?;
        // 1-form coefficients a_x, a_y of the line connection.
        let a_x = s.conn_l_z + s.conn_l_zbar;
        let a_y = (s.conn_l_z - s.conn_l_zbar) * cx(0.0, 1.0);
        Ok((a_x, a_y))
    };
    let (_, ay_p) = a_coeff(x + h, y)?;
    let (_, ay_m) = a_coeff(x - h, y)?;
    let (ax_p, _) = a_coeff(x, y + h)?;
    let (ax_m, _) = a_coeff(x, y - h)?;
    let f_curv = (ay_p - ay_m) * cx(0.5 / h, 0.0) - (ax_p - ax_m) * cx(0.5 / h, 0.0);
    let s = split_components(pair, omega, x, y)?;
    let wedge = cx(0.0, -2.0)
        * cx(
            s.gamma_zbar.norm_sqr() + t * t * s.alpha_z.norm_sqr(),
            0.0,
        );
    Ok((f_curv + wedge).norm())
}

/// Pointwise energy identity of the twist: with e(f) the Dirichlet density of
/// the harmonic map and tr(N) the plain induced-metric trace density of its
/// Gauss map (the density of -E(N)), the split satisfies
///   e(f) + tr(N) = 4 (t^2 |alpha|^2 + |gamma|^2).
/// The two densities are passed in from independent (finite-difference map)
/// routes; the returned value is the violation.
pub fn energy_density_identity(
    pair: &GaugePair,
    t: f64,
    omega: &OmegaFn,
    e_f: f64,
    trace_n: f64,
    x: f64,
    y: f64,
) -> Result<f64> {
    let s = split_components(pair, omega, x, y)?;
    let rhs = 4.0 * (t * t * s.alpha_z.norm_sqr() + s.gamma_zbar.norm_sqr());
    Ok((e_f + trace_n - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{hitchin_residual, su11_residual, LambdaFamily};
    use crate::model;

    #[test]
    fn model_eigenline_and_diagonal_cases() {
        let t = 1.3;
        let x = 0.52;
        let phi = model::model_pair(t).phi_z.eval(x, 0.0);
        // det Phi = -1/4, eigenvalue branch +1/2 has eigenvector (1, tanh(tx)).
        let v = eigenline(phi, cx(0.5, 0.0)).unwrap();
        let tau = (t * x).tanh();
        let n = (1.0 + tau * tau).sqrt();
        assert!((v[0] - cx(1.0 / n, 0.0)).norm() < 1e-12);
        assert!((v[1] - cx(tau / n, 0.0)).norm() < 1e-12);
        // Diagonal Higgs: eigenvector e1.
        let d = Mat2::diag(cx(0.7, 0.0), cx(-0.7, 0.0));
        let v = eigenline(d, cx(0.7, 0.0)).unwrap();
        assert!((v[0] - cx(1.0, 0.0)).norm() < 1e-14 && v[1].norm() < 1e-14);
        // Opposite branch at large x tends to the complementary line of u/2.
        let phi_far = model::model_pair(1.0).phi_z.eval(12.0, 0.0);
        let vm = eigenline(phi_far, cx(-0.5, 0.0)).unwrap();
        assert!((vm[0].norm() - vm[1].norm()).abs() < 1e-7);
        assert!((vm[0] + vm[1]).norm() < 1.0 + 1e-9); // (1,-1)/sqrt2 up to phase
        let wrong = eigenline(phi, cx(0.9, 0.0));
        assert!(matches!(wrong, Err(CoreError::NotAnEigenvalue(_))));
    }

    #[test]
    fn split_reassembles_and_is_upper_triangular() {
        let t = 1.0;
        let pair = model::model_pair(t);
        let om = constant_omega(cx(0.5, 0.0));
        for (x, y) in [(0.4, 0.0), (0.9, 1.3), (-0.6, 0.2)] {
            let s = split_components(&pair, &om, x, y).unwrap();
            assert!(s.block_residual < 1e-9, "lower-left Higgs entry {}", s.block_residual);
            assert!((s.omega - cx(0.5, 0.0)).norm() < 1e-9);
            let res = split_reassembly_residual(&pair, &om, x, y).unwrap();
            assert!(res < 1e-9, "reassembly {res}");
        }
        // Constant diagonal example: gamma = alpha = 0.
        let diag_pair = GaugePair {
            a_x: MatrixField::zero(),
            a_y: MatrixField::zero(),
            phi_z: MatrixField::constant(Mat2::diag(cx(0.3, 0.0), cx(-0.3, 0.0))),
            metric: MetricSign::Definite,
        };
        let s = split_components(&diag_pair, &constant_omega(cx(0.3, 0.0)), 0.1, 0.2).unwrap();
        assert!(s.gamma_zbar.norm() < 1e-12 && s.alpha_z.norm() < 1e-12);
    }

    #[test]
    fn twist_of_triangular_pair_matches_displayed_family() {
        // In the upper-triangular frame at t = 1 the eigenline is e1 and the
        // twist is the literal block swap of the displayed families.
        let pair = model::model_pair_triangular();
        let om = constant_omega(cx(-0.5, 0.0));
        let twisted = twist_su2_to_su11(&pair, 1.0, &om).unwrap();
        let expect = model::model_pair_triangular_twisted();
        for x in [0.3, -0.45, 0.8] {
            for get in [0usize, 1, 2] {
                let a = match get {
                    0 => twisted.a_x.eval(x, 0.1),
                    1 => twisted.a_y.eval(x, 0.1),
                    _ => twisted.phi_z.eval(x, 0.1),
                };
                let b = match get {
                    0 => expect.a_x.eval(x, 0.1),
                    1 => expect.a_y.eval(x, 0.1),
                    _ => expect.phi_z.eval(x, 0.1),
                };
                assert!((a - b).norm() < 1e-7, "coefficient {get} at x={x}: {}", (a - b).norm());
            }
        }
    }

    #[test]
    fn lambda_gauge_relates_the_two_families() {
        // Conjugating the definite family by diag(1, lambda) reproduces the
        // twisted family.
        let lam = cx(2.0, 0.0);
        let fam = LambdaFamily::from_pair(&model::model_pair_triangular(), 1.0);
        let fam_hat = LambdaFamily::from_pair(&model::model_pair_triangular_twisted(), 1.0);
        let g = Mat2::diag(cx(1.0, 0.0), lam);
        let gi = g.inv().unwrap();
        for x in [0.35, -0.6, 1.1] {
            let bz = gi * fam.b_z(lam, x, 0.2) * g;
            let bzb = gi * fam.b_zbar(lam, x, 0.2) * g;
            let d = (bz - fam_hat.b_z(lam, x, 0.2)).norm()
                + (bzb - fam_hat.b_zbar(lam, x, 0.2)).norm();
            assert!(d < 1e-7, "lambda-gauge mismatch {d} at x={x}");
        }
    }

    #[test]
    fn twisted_model_solves_su11_equations() {
        let t = 1.0;
        let pair = model::model_pair(t);
        let (r1, r2) = hitchin_residual(&pair, t, 0.4, 0.0);
        assert!(r1 < 1e-6 && r2 < 1e-6);
        let om = constant_omega(cx(0.5, 0.0));
        let twisted = twist_su2_to_su11(&pair, t, &om).unwrap();
        for x in [0.4, -0.4, 0.9] {
            let (s1, s2) = su11_residual(&twisted, t, x, 0.3);
            assert!(s1 < 1e-5 && s2 < 1e-5, "SU(1,1) residuals at {x}: {s1} {s2}");
        }
        // det Phi preserved.
        for x in [0.4, -0.7] {
            let d1 = pair.phi_z.eval(x, 0.0).det();
            let d2 = twisted.phi_z.eval(x, 0.0).det();
            assert!((d1 - d2).norm() < 1e-10);
        }
    }

    #[test]
    fn smooth_su11_pair_solves_through_the_core() {
        let pair = model::model_pair_su11_smooth();
        for x in [-0.5, -0.01, 0.0, 0.2, 1.0] {
            let (s1, s2) = su11_residual(&pair, 1.0, x, 0.7);
            assert!(s1 < 1e-7 && s2 < 1e-7, "residuals at {x}: {s1} {s2}");
        }
    }

    #[test]
    fn dual_gauge_connects_twisted_family_to_smooth_one() {
        // Gauging the twisted family by the displayed gauge yields
        // coefficients that agree from both sides of the core loop.
        let fam = LambdaFamily::from_pair(&model::model_pair_triangular_twisted(), 1.0);
        let lam = cx(0.7, 0.4);
        let coeff = |x: f64| -> (Mat2, Mat2) {
            let g = model::dual_su11_gauge(x);
            let gi = g.inv().unwrap();
            let h = 1e-6;
            let dgx = (model::dual_su11_gauge(x + h) - model::dual_su11_gauge(x - h))
                .scale_re(0.5 / h);
            let dgz = dgx.scale_re(0.5);
            let dgzb = dgx.scale_re(0.5);
            (
                gi * fam.b_z(lam, x, 0.0) * g + gi * dgz,
                gi * fam.b_zbar(lam, x, 0.0) * g + gi * dgzb,
            )
        };
        let (zp, zbp) = coeff(1e-4);
        let (zm, zbm) = coeff(-1e-4);
        assert!((zp - zm).norm() < 1e-3, "dz jump {}", (zp - zm).norm());
        assert!((zbp - zbm).norm() < 1e-3, "dzbar jump {}", (zbp - zbm).norm());
        // And they match the closed-form smooth family.
        let smooth = LambdaFamily::from_pair(&model::model_pair_su11_smooth(), 1.0);
        assert!((zp - smooth.b_z(lam, 1e-4, 0.0)).norm() < 1e-3);
        assert!((zbm - smooth.b_zbar(lam, -1e-4, 0.0)).norm() < 1e-3);
    }

    #[test]
    fn reverse_twist_roundtrips_away_from_the_core() {
        let t = 1.0;
        let pair = model::model_pair(t);
        let om = constant_omega(cx(0.5, 0.0));
        let twisted = twist_su2_to_su11(&pair, t, &om).unwrap();
        let back = twist_su11_to_su2(&twisted, t, &om).unwrap();
        for x in [0.5, 0.1, 1.0] {
            let (r1, r2) = hitchin_residual(&back, t, x, 0.2);
            assert!(r1 < 1e-4 && r2 < 1e-4, "recovered residuals at {x}: {r1} {r2}");
            // Gauge-invariant round trip: det Phi and split magnitudes.
            let d1 = pair.phi_z.eval(x, 0.2).det();
            let d2 = back.phi_z.eval(x, 0.2).det();
            assert!((d1 - d2).norm() < 1e-6);
            let s1 = split_components(&pair, &om, x, 0.2).unwrap();
            let s2 = split_components(&back, &om, x, 0.2).unwrap();
            assert!((s1.alpha_z.norm() - s2.alpha_z.norm()).abs() < 1e-6);
            assert!((s1.gamma_zbar.norm() - s2.gamma_zbar.norm()).abs() < 1e-6);
        }
    }

    #[test]
    fn reverse_twist_raises_null_eigenline_on_the_core_band() {
        let t = 1.0;
        let twisted = twist_su2_to_su11(&model::model_pair(t), t, &constant_omega(cx(0.5, 0.0)))
            .unwrap();
        let om = constant_omega(cx(0.5, 0.0));
        for x in [1e-8, -1e-7, 1e-6] {
            let p = eigenline_pairing(&twisted, &om, x, 0.0).unwrap();
            assert!(p.abs() < 1e-6, "pairing {p} at {x}");
        }
        for x in [0.1, 0.5, -1.0] {
            let p = eigenline_pairing(&twisted, &om, x, 0.0).unwrap();
            assert!(p.abs() > 1e-6);
        }
        // Diagonal toy example round-trips exactly.
        let toy = GaugePair {
            a_x: MatrixField::zero(),
            a_y: MatrixField::zero(),
            phi_z: MatrixField::constant(Mat2::diag(cx(0.4, 0.0), cx(-0.4, 0.0))),
            metric: MetricSign::Definite,
        };
        let om_toy = constant_omega(cx(0.4, 0.0));
        let tw = twist_su2_to_su11(&toy, 1.0, &om_toy).unwrap();
        let back = twist_su11_to_su2(&tw, 1.0, &om_toy).unwrap();
        assert!((back.phi_z.eval(0.3, 0.1) - toy.phi_z.eval(0.3, 0.1)).norm() < 1e-12);
    }

    #[test]
    fn frame_route_gauss_map_and_basepoint() {
        use crate::mink::{mink_of_herm, Herm2};
        // F = id with eigenline e1 gives the basepoint diag(1,-1).
        let n0 = gauss_map_from_frames(Mat2::id(), [cx(1.0, 0.0), cx(0.0, 0.0)], 1.0);
        assert!((n0 - Mat2::delta()).norm() < 1e-15);
        // Model frames with the adapted correction reproduce N_t.
        let t = 1.0;
        for (x, y) in [(0.7, 0.0), (0.4, 1.1), (-0.8, -0.5)] {
            let fc = model::model_frame_adapted(t, x, y).unwrap();
            let phi = model::model_pair(t).phi_z.eval(x, y);
            let v = eigenline(phi, cx(0.5, 0.0)).unwrap();
            let n = gauss_map_from_frames(fc, v, x.signum());
            let nv = mink_of_herm(&Herm2::new(n, 1e-8).unwrap());
            let d = nv.sub(&model::model_map_gauss(t, x, y)).euclid_norm();
            assert!(d < 1e-6, "frame-route N mismatch {d} at ({x},{y})");
        }
    }

    #[test]
    fn opposite_eigenline_gives_the_oppositely_oriented_gauss_map() {
        // The displayed matrix with a = alpha/omega satisfies the defining
        // conditions with the same pairing but negative orientation.
        let t = 1.0;
        let (x, y) = (0.8, 0.3);
        let pair = model::model_pair(t);
        let om = constant_omega(cx(0.5, 0.0));
        let s = split_components(&pair, &om, x, y).unwrap();
        let a = s.alpha_z / s.omega;
        let den = a * a + cx(4.0, 0.0);
        let m = Mat2::new(
            (cx(4.0, 0.0) - a * a) / den,
            a * cx(4.0, 0.0) / den,
            a * cx(4.0, 0.0) / den,
            (a * a - cx(4.0, 0.0)) / den,
        );
        let v = eigenline(pair.phi_z.eval(x, y), cx(0.5, 0.0)).unwrap();
        let vm = adapted_frame(v);
        let fc = model::model_frame_adapted(t, x, y).unwrap();
        let n_tilde = (fc.adj() * (vm * m * vm.adj()) * fc).scale_re(x.signum());
        use crate::mink::{herm_of_mink, mink_of_herm, Herm2};
        let nt = mink_of_herm(&Herm2::new(n_tilde, 1e-7).unwrap());
        // On de Sitter space, orthogonal to f, same pairing as N.
        assert!((nt.norm2() - 1.0).abs() < 1e-8);
        let f = model::model_map_hyp(t, x, y).unwrap();
        assert!(f.inner(&nt).abs() < 1e-7);
        let h = 1e-5;
        let fx = model::model_map_hyp(t, x + h, y)
            .unwrap()
            .sub(&model::model_map_hyp(t, x - h, y).unwrap())
            .scale(0.5 / h);
        let fy = model::model_map_hyp(t, x, y + h)
            .unwrap()
            .sub(&model::model_map_hyp(t, x, y - h).unwrap())
            .scale(0.5 / h);
        let n = model::model_map_gauss(t, x, y);
        assert!((fx.inner(&nt) - fx.inner(&n)).abs() < 1e-5);
        assert!((fy.inner(&nt) - fy.inner(&n)).abs() < 1e-5);
        // Oppositely oriented.
        let det = |n: &crate::mink::MinkVec4| {
            let rows = [f.0, n.0, fx.0, fy.0];
            let mut a = rows;
            let mut det = 1.0;
            for k in 0..4 {
                let mut piv = k;
                for r in k + 1..4 {
                    if a[r][k].abs() > a[piv][k].abs() {
                        piv = r;
                    }
                }
                if piv != k {
                    a.swap(piv, k);
                    det = -det;
                }
                det *= a[k][k];
                for r in k + 1..4 {
                    let fct = a[r][k] / a[k][k];
                    for c in k..4 {
                        a[r][c] -= fct * a[k][c];
                    }
                }
            }
            det
        };
        assert!(det(&n) > 0.0);
        assert!(det(&nt) < 0.0);
        let _ = herm_of_mink(&f);
    }

    #[test]
    fn line_curvature_identity_holds_for_the_model() {
        let t = 1.0;
        let pair = model::model_pair(t);
        let om = constant_omega(cx(0.5, 0.0));
        for (x, y) in [(0.5, 0.0), (1.0, 0.4), (-0.7, 0.9)] {
            let r = line_curvature_identity(&pair, t, &om, x, y).unwrap();
            assert!(r < 1e-7, "line curvature identity {r} at ({x},{y})");
        }
    }

    #[test]
    fn energy_identity_with_finite_difference_densities() {
        let t = 1.0;
        let pair = model::model_pair(t);
        let om = constant_omega(cx(0.5, 0.0));
        let h = 1e-4;
        for (x, y) in [(1.0, 0.0), (0.6, 0.5), (-0.9, 0.2)] {
            let e_f = {
                let fx = model::model_map_hyp(t, x + h, y)
                    .unwrap()
                    .sub(&model::model_map_hyp(t, x - h, y).unwrap())
                    .scale(0.5 / h);
                let fy = model::model_map_hyp(t, x, y + h)
                    .unwrap()
                    .sub(&model::model_map_hyp(t, x, y - h).unwrap())
                    .scale(0.5 / h);
                0.5 * (fx.norm2() + fy.norm2())
            };
            let tr_n = {
                let nx = model::model_map_gauss(t, x + h, y)
                    .sub(&model::model_map_gauss(t, x - h, y))
                    .scale(0.5 / h);
                let ny = model::model_map_gauss(t, x, y + h)
                    .sub(&model::model_map_gauss(t, x, y - h))
                    .scale(0.5 / h);
                0.5 * (nx.norm2() + ny.norm2())
            };
            let viol = energy_density_identity(&pair, t, &om, e_f, tr_n, x, y).unwrap();
            assert!(viol < 1e-5, "energy identity violation {viol} at ({x},{y})");
            // Section-energy density of the associated family equals e(f).
            let phi = pair.phi_z.eval(x, y).scale_re(t);
            let psi = phi.adj();
            let es = crate::field::section_energy_density(phi, psi);
            assert!((es - e_f).abs() < 1e-6, "section energy {es} vs {e_f}");
        }
    }
}
