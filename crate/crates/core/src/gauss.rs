//! Constructive oblique Gauss maps, dual maps, Hopf differentials with
//! square-root branch tracking, the transgressive extension across the
//! equatorial sphere, and the finite-difference harmonicity detector.

use crate::error::{CoreError, Result};
use crate::grid::{mink4, mink5, MapGrid, TargetTag};
use crate::mat2::Cx;
use crate::mink::MinkVec4;

/// Square-root field of a Hopf differential with branch bookkeeping.
#[derive(Debug, Clone)]
pub struct HopfField {
    pub q: Vec<Cx>,
    pub omega: Vec<Cx>,
    /// Nodes where the square root was near zero or the continuity choice
    /// was ambiguous.
    pub branch_events: Vec<(usize, usize)>,
}

/// Hopf differential coefficient <d_z f, d_z f> at a node; for light-cone
/// representatives the lift-normalized version <d_z f, d_z f> / f_0^2.
pub fn hopf(f: &MapGrid, i: usize, j: usize) -> Cx {
    let tx = f.tangent_x(i, j);
    let ty = f.tangent_y(i, j);
    let fz: Vec<Cx> = (0..5).map(|k| Cx::new(0.5 * tx[k], -0.5 * ty[k])).collect();
    let q = match f.tag {
        TargetTag::H3 | TargetTag::DS3 => {
            -fz[0] * fz[0] + fz[1] * fz[1] + fz[2] * fz[2] + fz[3] * fz[3]
        }
        TargetTag::S3 | TargetTag::PL => {
            -fz[0] * fz[0] + fz[1] * fz[1] + fz[2] * fz[2] + fz[3] * fz[3] + fz[4] * fz[4]
        }
    };
    match f.tag {
        TargetTag::PL => q / Cx::new(f.value(i, j)[0], 0.0).powi(2),
        _ => q,
    }
}

/// Builds the Hopf field and a continuous square root omega with
/// omega^2 = Q (hyperbolic/spherical targets) or -omega^2 = Q (de Sitter).
/// The branch is tracked along rows, then down the first column; `seed`
/// selects the root at the first node.
pub fn hopf_field(f: &MapGrid, seed_positive_re: bool) -> HopfField {
    let nx = f.chart.nx;
    let ny = f.chart.ny;
    let mut q = vec![Cx::new(0.0, 0.0); nx * ny];
    let mut omega = vec![Cx::new(0.0, 0.0); nx * ny];
    let mut events = Vec::new();
    let mut scale = 0.0f64;
    for j in 0..ny {
        for i in 0..nx {
            let v = hopf(f, i, j);
            q[f.chart.node_index(i, j)] = v;
            scale = scale.max(v.norm());
        }
    }
    for j in 0..ny {
        for i in 0..nx {
            let idx = f.chart.node_index(i, j);
            let arg = match f.tag {
                TargetTag::DS3 => -q[idx],
                _ => q[idx],
            };
            let mut w = arg.sqrt();
            let reference = if i > 0 {
                Some(omega[f.chart.node_index(i - 1, j)])
            } else if j > 0 {
                Some(omega[f.chart.node_index(0, j - 1)])
            } else {
                None
            };
            match reference {
                Some(r) if r.norm() > 0.0 => {
                    if (w - r).norm() > (w + r).norm() {
                        w = -w;
                    }
                    if ((w - r).norm() - (w + r).norm()).abs() < 0.1 * w.norm().max(1e-300) {
                        events.push((i, j));
                    }
                }
                _ => {
                    if seed_positive_re == (w.re < 0.0) {
                        w = -w;
                    }
                }
            }
            if w.norm() * w.norm() < 1e-10 * scale.max(1e-300) {
                events.push((i, j));
            }
            omega[idx] = w;
        }
    }
    HopfField { q, omega, branch_events: events }
}

/// Euclidean 4d cross product: vector orthogonal to a, b, c with the
/// cofactor normalization det(e_k, a, b, c).
fn cross4(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4]) -> [f64; 4] {
    let minor = |r0: usize, r1: usize, r2: usize| -> f64 {
        // 3x3 determinant of columns (r0, r1, r2) of the rows a, b, c.
        a[r0] * (b[r1] * c[r2] - b[r2] * c[r1]) - a[r1] * (b[r0] * c[r2] - b[r2] * c[r0])
            + a[r2] * (b[r0] * c[r1] - b[r1] * c[r0])
    };
    [
        minor(1, 2, 3),
        -minor(0, 2, 3),
        minor(0, 1, 3),
        -minor(0, 1, 2),
    ]
}

fn metric_flip(v: &[f64; 4]) -> [f64; 4] {
    [-v[0], v[1], v[2], v[3]]
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mdot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn det4(rows: &[[f64; 4]; 4]) -> f64 {
    let mut a = *rows;
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

fn solve4(rows: &[[f64; 4]; 4], rhs: &[f64; 4]) -> Option<[f64; 4]> {
    let mut a = *rows;
    let mut b = *rhs;
    for k in 0..4 {
        let mut piv = k;
        for r in k + 1..4 {
            if a[r][k].abs() > a[piv][k].abs() {
                piv = r;
            }
        }
        if a[piv][k].abs() < 1e-300 {
            return None;
        }
        a.swap(piv, k);
        b.swap(piv, k);
        for r in k + 1..4 {
            let f = a[r][k] / a[k][k];
            for c in k..4 {
                a[r][c] -= f * a[k][c];
            }
            b[r] -= f * b[k];
        }
    }
    let mut x = [0.0; 4];
    for k in (0..4).rev() {
        let mut s = b[k];
        for c in k + 1..4 {
            s -= a[k][c] * x[c];
        }
        x[k] = s / a[k][k];
    }
    Some(x)
}

fn first4(v: &[f64; 5]) -> [f64; 4] {
    [v[0], v[1], v[2], v[3]]
}

/// Gram-signature classification of the image of the differential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ImageSignature {
    Spacelike,
    Lorentzian,
    Null,
}

#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct GaussDiagnostics {
    pub orientation_ambiguous: Vec<(usize, usize)>,
    pub branch_tags: Vec<ImageSignature>,
    /// Worst residual of the defining equations over all processed nodes.
    pub max_defining_residual: f64,
}

/// Oblique Gauss map of an immersion grid into H^3_+-: the unique N with
/// <N, f> = 0, <df, N> = omega + conj(omega), <N, N> = 1 and
/// det(f, N, f_x, f_y) > 0, solved nodewise.
pub fn oblique_gauss_map(
    f: &MapGrid,
    omega: &HopfField,
) -> Result<(MapGrid, GaussDiagnostics)> {
    if f.tag != TargetTag::H3 {
        return Err(CoreError::BadDomain("oblique Gauss map needs an H3 grid".into()));
    }
    let mut out = f.clone();
    out.tag = TargetTag::DS3;
    let mut diag = GaussDiagnostics::default();
    let mut prev: Option<[f64; 4]> = None;
    for j in 0..f.chart.ny {
        for i in 0..f.chart.nx {
            let idx = f.chart.node_index(i, j);
            let fv = first4(&f.value(i, j));
            let tx = first4(&f.tangent_x(i, j));
            let ty = first4(&f.tangent_y(i, j));
            let gram = [mdot(&tx, &tx), mdot(&tx, &ty), mdot(&ty, &ty)];
            if gram[0] * gram[2] - gram[1] * gram[1] <= 1e-10 {
                return Err(CoreError::NotImmersive(i, j));
            }
            let w = omega.omega[idx];
            let rhs = [0.0, 2.0 * w.re, -2.0 * w.im, 0.0];
            let n = solve_on_quadric(&fv, &tx, &ty, &rhs, 1.0, |cand| {
                det4(&[fv, *cand, tx, ty])
            })
            .map_err(|e| match e {
                CoreError::PairingInfeasible(..) => CoreError::PairingInfeasible(i, j),
                other => other,
            })?;
            let n = resolve_orientation(n, &mut prev, &mut diag, (i, j));
            let res = residual_gauss(&fv, &tx, &ty, &n, &rhs);
            diag.max_defining_residual = diag.max_defining_residual.max(res);
            out.data[idx] = [n[0], n[1], n[2], n[3], 0.0];
        }
        prev = None;
    }
    Ok((out, diag))
}

/// Dual map of an immersion grid into de Sitter space: the unique f with
/// <f, N> = 0, <dN, f> = -(omega + conj omega), <f, f> = -1 and
/// det(N, f, N_x, N_y) > 0, with the Gram-signature branch logic of the
/// degenerate case handled through the null-frame formula.
pub fn dual_map(n: &MapGrid, omega: &HopfField) -> Result<(MapGrid, GaussDiagnostics)> {
    if n.tag != TargetTag::DS3 {
        return Err(CoreError::BadDomain("dual map needs a dS3 grid".into()));
    }
    let mut out = n.clone();
    out.tag = TargetTag::H3;
    let mut diag = GaussDiagnostics::default();
    let mut prev: Option<[f64; 4]> = None;
    for j in 0..n.chart.ny {
        for i in 0..n.chart.nx {
            let idx = n.chart.node_index(i, j);
            let nv = first4(&n.value(i, j));
            let tx = first4(&n.tangent_x(i, j));
            let ty = first4(&n.tangent_y(i, j));
            let w = omega.omega[idx];
            if w.norm() < 1e-6 {
                return Err(CoreError::NearHopfZero(w.norm()));
            }
            let g11 = mdot(&tx, &tx);
            let g12 = mdot(&tx, &ty);
            let g22 = mdot(&ty, &ty);
            let tr_norm = g11.abs() + g22.abs();
            let disc = (0.25 * (g11 - g22) * (g11 - g22) + g12 * g12).sqrt();
            let mid = 0.5 * (g11 + g22);
            let (e1, e2) = (mid + disc, mid - disc);
            if e1.abs().min(e2.abs()) > 1e-10 && (e1 * e2).abs() <= 1e-20 * tr_norm * tr_norm
            {
                return Err(CoreError::NotImmersive(i, j));
            }
            let sig = if e1.abs().min(e2.abs()) < 1e-6 * tr_norm {
                ImageSignature::Null
            } else if e1 * e2 > 0.0 {
                ImageSignature::Spacelike
            } else {
                ImageSignature::Lorentzian
            };
            diag.branch_tags.push(sig);
            let rhs = [0.0, -2.0 * w.re, 2.0 * w.im, 0.0];
            let fcand = if sig == ImageSignature::Null {
                dual_null_frame(&nv, &tx, &ty, w)?
            } else {
                solve_on_quadric(&nv, &tx, &ty, &rhs, -1.0, |cand| {
                    det4(&[nv, *cand, tx, ty])
                })
                .map_err(|e| match e {
                    CoreError::PairingInfeasible(..) => CoreError::PairingInfeasible(i, j),
                    other => other,
                })?
            };
            let fv = resolve_orientation(fcand, &mut prev, &mut diag, (i, j));
            let res = residual_gauss(&nv, &tx, &ty, &fv, &rhs);
            diag.max_defining_residual = diag.max_defining_residual.max(res);
            out.data[idx] = [fv[0], fv[1], fv[2], fv[3], 0.0];
        }
        prev = None;
    }
    Ok((out, diag))
}

/// Solves the three linear defining conditions plus the quadric constraint
/// <X, X> = target; the returned candidate is the orientation-positive root
/// (det handed in by the caller); an ambiguous orientation keeps both roots
/// encoded via the sign of the determinant and is resolved by the caller.
fn solve_on_quadric(
    base: &[f64; 4],
    tx: &[f64; 4],
    ty: &[f64; 4],
    rhs: &[f64; 4],
    target: f64,
    orient: impl Fn(&[f64; 4]) -> f64,
) -> Result<[f64; 4]> {
    let k = metric_flip(&cross4(&metric_flip(base), &metric_flip(tx), &metric_flip(ty)));
    let rows = [metric_flip(base), metric_flip(tx), metric_flip(ty), metric_flip(&k)];
    let x0 = solve4(&rows, rhs).ok_or(CoreError::SingularSample(0.0, 0.0))?;
    let kk = mdot(&k, &k);
    let s2 = (target - mdot(&x0, &x0)) / kk;
    if s2 < -1e-12 {
        return Err(CoreError::PairingInfeasible(0, 0));
    }
    let s = s2.max(0.0).sqrt();
    let mut plus = x0;
    let mut minus = x0;
    for c in 0..4 {
        plus[c] += s * k[c];
        minus[c] -= s * k[c];
    }
    Ok(if orient(&plus) >= orient(&minus) { plus } else { minus })
}

/// Orientation/continuity resolution: the solver hands back its
/// orientation-positive candidate; when that choice was numerically
/// ambiguous the nearest previously resolved neighbor wins.
fn resolve_orientation(
    cand: [f64; 4],
    prev: &mut Option<[f64; 4]>,
    diag: &mut GaussDiagnostics,
    node: (usize, usize),
) -> [f64; 4] {
    let mut n = cand;
    if let Some(p) = prev {
        let d_plus: f64 = n.iter().zip(p.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
        let flipped: [f64; 4] = [-n[0], -n[1], -n[2], -n[3]];
        let d_minus: f64 =
            flipped.iter().zip(p.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
        // Only act when the candidate sits essentially on the branch cut.
        if d_minus < d_plus * 1e-6 {
            n = flipped;
            diag.orientation_ambiguous.push(node);
        }
    }
    *prev = Some(n);
    n
}

/// Degenerate-image branch of the dual map: with X chosen so omega(X) = r > 0
/// the dual is f = dN(X)/(4r) - 2 r nu for the second null direction nu in
/// the plane orthogonal to dN(JX), normalized by <nu, dN(X)> = 1.
fn dual_null_frame(nv: &[f64; 4], tx: &[f64; 4], ty: &[f64; 4], w: Cx) -> Result<[f64; 4]> {
    let r = w.norm();
    let zeta = w.conj() / r;
    let dn = |a: f64, b: f64| -> [f64; 4] {
        let mut v = [0.0; 4];
        for c in 0..4 {
            v[c] = a * tx[c] + b * ty[c];
        }
        v
    };
    let dnx = dn(zeta.re, zeta.im);
    let dnjx = dn(-zeta.im, zeta.re);
    let ktilde = metric_flip(&cross4(&metric_flip(nv), &metric_flip(&dnjx), &metric_flip(&dnx)));
    let rows = [
        metric_flip(nv),
        metric_flip(&dnjx),
        metric_flip(&dnx),
        metric_flip(&ktilde),
    ];
    let nu0 = solve4(&rows, &[0.0, 0.0, 1.0, 0.0]).ok_or(CoreError::SingularSample(0.0, 0.0))?;
    // <nu, nu> = 0 along nu = nu0 + tau ktilde.
    let a = mdot(&ktilde, &ktilde);
    let b = 2.0 * mdot(&nu0, &ktilde);
    let c = mdot(&nu0, &nu0);
    let tau = if a.abs() < 1e-14 * (b.abs() + 1.0) {
        -c / b
    } else {
        let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
        let t1 = (-b + disc) / (2.0 * a);
        let t2 = (-b - disc) / (2.0 * a);
        if t1.abs() < t2.abs() {
            t1
        } else {
            t2
        }
    };
    let mut f = [0.0; 4];
    for cidx in 0..4 {
        let nu = nu0[cidx] + tau * ktilde[cidx];
        f[cidx] = dnx[cidx] / (4.0 * r) - 2.0 * r * nu;
    }
    Ok(f)
}

fn residual_gauss(
    base: &[f64; 4],
    tx: &[f64; 4],
    ty: &[f64; 4],
    n: &[f64; 4],
    rhs: &[f64; 4],
) -> f64 {
    (mdot(base, n) - rhs[0]).abs().max((mdot(tx, n) - rhs[1]).abs()).max(
        (mdot(ty, n) - rhs[2]).abs(),
    )
}

// ---------------------------------------------------------------------------
// Transgressive extension
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct TransgressivityReport {
    /// Nodes adjacent to a sign change of the equator coordinate x4.
    pub gamma_nodes: Vec<(usize, usize)>,
    /// Max |Q| (lift-normalized) on the gamma-adjacent nodes.
    pub max_hopf_on_gamma: f64,
    /// Max least-squares residual of solving df (a,b) = e4 there.
    pub max_orthogonality_residual: f64,
}

/// Locates the equator crossing and reports conformality at infinity and
/// orthogonal intersection diagnostics.
pub fn transgressivity_check(f: &MapGrid) -> Result<TransgressivityReport> {
    if f.tag != TargetTag::S3 {
        return Err(CoreError::BadDomain("transgressivity check needs an S3 grid".into()));
    }
    let mut rep = TransgressivityReport::default();
    for j in 0..f.chart.ny {
        for i in 0..f.chart.nx.saturating_sub(1) {
            let a = f.value(i, j)[4];
            let b = f.value(i + 1, j)[4];
            if a == 0.0 || a * b < 0.0 {
                rep.gamma_nodes.push((i, j));
                if a != 0.0 {
                    rep.gamma_nodes.push((i + 1, j));
                }
            }
        }
    }
    for &(i, j) in &rep.gamma_nodes {
        // Lift-normalized Hopf coefficient (x0 = 1 on the spherical slice).
        let q = hopf(f, i, j);
        rep.max_hopf_on_gamma = rep.max_hopf_on_gamma.max(q.norm());
        // Least squares for df (a,b) = e4 over the last four (tangent)
        // components.
        let tx = f.tangent_x(i, j);
        let ty = f.tangent_y(i, j);
        let g11: f64 = (1..5).map(|k| tx[k] * tx[k]).sum();
        let g12: f64 = (1..5).map(|k| tx[k] * ty[k]).sum();
        let g22: f64 = (1..5).map(|k| ty[k] * ty[k]).sum();
        let b1 = tx[4];
        let b2 = ty[4];
        let det = g11 * g22 - g12 * g12;
        if det.abs() < 1e-300 {
            return Err(CoreError::NotImmersive(i, j));
        }
        let a = (b1 * g22 - b2 * g12) / det;
        let b = (b2 * g11 - b1 * g12) / det;
        let mut res = 0.0;
        for k in 1..5 {
            let e4k = if k == 4 { 1.0 } else { 0.0 };
            res += (a * tx[k] + b * ty[k] - e4k).powi(2);
        }
        rep.max_orthogonality_residual = rep.max_orthogonality_residual.max(res.sqrt());
    }
    Ok(rep)
}

/// Orientation convention of the spherical Gauss solve, fixed so that the
/// extension of the model maps reproduces their de Sitter Gauss map.
const SPHERICAL_ORIENTATION: f64 = 1.0;

/// Extends the hyperbolic oblique Gauss map of a transgressive spherical
/// grid across the equator: the spherical oblique Gauss map is solved in the
/// round metric, and the singular ratio N4/f4 is replaced near the equator by
/// the quotient of the x-difference quotients of numerator and denominator.
pub fn transgressive_extend(
    f: &MapGrid,
    omega: &HopfField,
) -> Result<(MapGrid, GaussDiagnostics)> {
    if f.tag != TargetTag::S3 {
        return Err(CoreError::BadDomain("transgressive extension needs an S3 grid".into()));
    }
    let nx = f.chart.nx;
    let ny = f.chart.ny;
    // Spherical oblique Gauss map, all in the Euclidean R^4 slice.
    let mut nsph = vec![[0.0f64; 4]; nx * ny];
    let mut diag = GaussDiagnostics::default();
    let mut prev: Option<[f64; 4]> = None;
    for j in 0..ny {
        for i in 0..nx {
            let idx = f.chart.node_index(i, j);
            let fv = f.value(i, j);
            let fh = [fv[1], fv[2], fv[3], fv[4]];
            let txf = f.tangent_x(i, j);
            let tyf = f.tangent_y(i, j);
            let tx = [txf[1], txf[2], txf[3], txf[4]];
            let ty = [tyf[1], tyf[2], tyf[3], tyf[4]];
            let w = omega.omega[idx];
            let rhs = [0.0, 2.0 * w.re, -2.0 * w.im, 0.0];
            let k = cross4(&fh, &tx, &ty);
            let rows = [fh, tx, ty, k];
            let n0 = solve4(&rows, &rhs).ok_or(CoreError::NotImmersive(i, j))?;
            let kk = dot4(&k, &k);
            let s2 = (1.0 - dot4(&n0, &n0)) / kk;
            if s2 < -1e-12 {
                return Err(CoreError::PairingInfeasible(i, j));
            }
            let s = s2.max(0.0).sqrt();
            let mut plus = n0;
            let mut minus = n0;
            for c in 0..4 {
                plus[c] += s * k[c];
                minus[c] -= s * k[c];
            }
            let dp = SPHERICAL_ORIENTATION * det4(&[fh, plus, tx, ty]);
            let dm = SPHERICAL_ORIENTATION * det4(&[fh, minus, tx, ty]);
            let cand = if dp >= dm { plus } else { minus };
            let cand = resolve_orientation(cand, &mut prev, &mut diag, (i, j));
            nsph[idx] = cand;
        }
        prev = None;
    }
    // N_hyp = N_sph - (N_sph4 / f4) f_sph, with the ratio replaced by the
    // quotient of difference quotients where f4 changes sign or is tiny.
    let mut out = MapGrid {
        chart: f.chart.clone(),
        tag: TargetTag::DS3,
        data: vec![[0.0; 5]; nx * ny],
    };
    let mut f4max = 0.0f64;
    for v in &f.data {
        f4max = f4max.max(v[4].abs());
    }
    for j in 0..ny {
        for i in 0..nx {
            let idx = f.chart.node_index(i, j);
            let fv = f.value(i, j);
            let n4 = nsph[idx][3];
            let f4 = fv[4];
            let ratio = if f4.abs() > 1e-3 * f4max {
                n4 / f4
            } else {
                // One-sided/central difference quotients in the x-direction.
                let (ia, ib) = if i == 0 {
                    (0, 1)
                } else if i == nx - 1 {
                    (nx - 2, nx - 1)
                } else {
                    (i - 1, i + 1)
                };
                let dn = nsph[f.chart.node_index(ib, j)][3] - nsph[f.chart.node_index(ia, j)][3];
                let df = f.value(ib, j)[4] - f.value(ia, j)[4];
                if df.abs() < 1e-300 {
                    return Err(CoreError::NotTransgressive(format!(
                        "equator coordinate is stationary at node ({i}, {j})"
                    )));
                }
                dn / df
            };
            out.data[idx] = [
                -ratio,
                nsph[idx][0] - ratio * fv[1],
                nsph[idx][1] - ratio * fv[2],
                nsph[idx][2] - ratio * fv[3],
                0.0,
            ];
        }
    }
    Ok((out, diag))
}

// ---------------------------------------------------------------------------
// Harmonicity detector
// ---------------------------------------------------------------------------

/// Norm of the component of the discrete tension field m_zzbar orthogonal to
/// the position vector; O(h^2)-consistent estimate of the failure of the
/// harmonic map equation into the quadric target.
pub fn harmonicity_residual(m: &MapGrid, i: usize, j: usize) -> Result<f64> {
    let lap = m.laplacian(i, j)?;
    let v = m.value(i, j);
    match m.tag {
        TargetTag::H3 | TargetTag::DS3 => {
            let q = mink4(&v, &v);
            let c = mink4(&lap, &v) / q;
            let mut r = 0.0;
            for k in 0..4 {
                r += (0.25 * (lap[k] - c * v[k])).powi(2);
            }
            Ok(r.sqrt())
        }
        TargetTag::S3 => {
            let mut dot = 0.0;
            let mut nrm = 0.0;
            for k in 1..5 {
                dot += lap[k] * v[k];
                nrm += v[k] * v[k];
            }
            let c = dot / nrm;
            let mut r = 0.0;
            for k in 1..5 {
                r += (0.25 * (lap[k] - c * v[k])).powi(2);
            }
            Ok(r.sqrt())
        }
        TargetTag::PL => Err(CoreError::BadDomain(
            "harmonicity residual needs a fixed quadric target".into(),
        )),
    }
}

/// Convenience: builds a fine local grid around (x, y) with spacing h from a
/// closed-form map and evaluates the harmonicity residual at the center.
pub fn harmonicity_residual_at(
    f: impl Fn(f64, f64) -> MinkVec4,
    tag: TargetTag,
    x: f64,
    y: f64,
    h: f64,
) -> Result<f64> {
    let chart = crate::chart::Chart::new(
        (x - 2.0 * h, x + 2.0 * h),
        (y - 2.0 * h, y + 2.0 * h),
        None,
        false,
        5,
        5,
    )?;
    let g = MapGrid::from_fn4(chart, tag, f);
    harmonicity_residual(&g, 2, 2)
}
