//! Small numerical utilities: gamma function, cubic Hermite interpolation,
//! linear least squares on a line, tridiagonal solves.

/// ln Gamma by the Lanczos approximation (g = 7, 9 coefficients); relative
/// error below 1e-13 on the positive axis.
pub fn ln_gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection Gamma(x) Gamma(1-x) = pi / sin(pi x).
        let s = (std::f64::consts::PI * x).sin();
        return std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = G[0];
    let t = x + 7.5;
    for (i, &g) in G.iter().enumerate().skip(1) {
        a += g / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = (std::f64::consts::PI * x).sin();
        std::f64::consts::PI / (s * gamma(1.0 - x))
    } else {
        ln_gamma(x).exp()
    }
}

/// Cubic Hermite interpolation on a sorted grid with values and derivatives.
#[derive(Debug, Clone)]
pub struct CubicHermite {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub dys: Vec<f64>,
}

impl CubicHermite {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, dys: Vec<f64>) -> CubicHermite {
        assert_eq!(xs.len(), ys.len());
        assert_eq!(xs.len(), dys.len());
        CubicHermite { xs, ys, dys }
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let s = (x - x0) / h;
        let (h00, h10, h01, h11) = hermite_basis(s);
        h00 * self.ys[i] + h10 * h * self.dys[i] + h01 * self.ys[i + 1] + h11 * h * self.dys[i + 1]
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let s = (x - x0) / h;
        let d00 = (6.0 * s * s - 6.0 * s) / h;
        let d10 = 3.0 * s * s - 4.0 * s + 1.0;
        let d01 = (6.0 * s - 6.0 * s * s) / h;
        let d11 = 3.0 * s * s - 2.0 * s;
        d00 * self.ys[i] + d10 * self.dys[i] + d01 * self.ys[i + 1] + d11 * self.dys[i + 1]
    }
}

fn hermite_basis(s: f64) -> (f64, f64, f64, f64) {
    let s2 = s * s;
    let s3 = s2 * s;
    (
        2.0 * s3 - 3.0 * s2 + 1.0,
        s3 - 2.0 * s2 + s,
        -2.0 * s3 + 3.0 * s2,
        s3 - s2,
    )
}

/// Cumulative integral of samples on a uniform grid by composite Simpson;
/// entry j holds the integral from the first node to node j.
pub fn cumulative_simpson(g: &[f64], dx: f64) -> Vec<f64> {
    let n = g.len();
    let mut c = vec![0.0; n];
    if n >= 3 {
        c[1] = dx / 12.0 * (5.0 * g[0] + 8.0 * g[1] - g[2]);
    } else if n == 2 {
        c[1] = 0.5 * dx * (g[0] + g[1]);
    }
    for j in 2..n {
        c[j] = c[j - 2] + dx / 3.0 * (g[j - 2] + 4.0 * g[j - 1] + g[j]);
    }
    c
}

/// Least-squares slope and intercept of y against x.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Solves a tridiagonal system in place (Thomas algorithm).
/// `a` is the subdiagonal (a[0] unused), `b` the diagonal, `c` the
/// superdiagonal (c[n-1] unused), `d` the right-hand side.
pub fn solve_tridiag(a: &[f64], b: &[f64], c: &[f64], d: &mut [f64]) {
    let n = b.len();
    let mut cp = vec![0.0; n];
    cp[0] = c[0] / b[0];
    d[0] /= b[0];
    for i in 1..n {
        let m = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        d[i] = (d[i] - a[i] * d[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        d[i] -= cp[i] * d[i + 1];
    }
}

/// Singular values of a real 4x2 matrix (columns are the two tangents), via
/// the eigenvalues of the 2x2 Gram matrix.
pub fn singular_values_4x2(cols: [[f64; 4]; 2]) -> (f64, f64) {
    let dot = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let g11 = dot(&cols[0], &cols[0]);
    let g12 = dot(&cols[0], &cols[1]);
    let g22 = dot(&cols[1], &cols[1]);
    let tr = g11 + g22;
    let det = g11 * g22 - g12 * g12;
    let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
    let l1 = (0.5 * tr + disc).max(0.0);
    let l2 = (0.5 * tr - disc).max(0.0);
    (l1.sqrt(), l2.sqrt())
}
