//! Dense complex 2x2 matrices.
//!
//! Everything in this crate lives in rank 2, so a fixed-size type beats a
//! general linear-algebra dependency: determinants, adjoints and commutators
//! are all closed one-liners.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

pub type Cx = Complex64;

pub const I: Cx = Cx::new(0.0, 1.0);

pub fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

/// Complex 2x2 matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m: [[Cx; 2]; 2],
}

impl Mat2 {
    pub fn new(a: Cx, b: Cx, c: Cx, d: Cx) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(cx(a, 0.0), cx(b, 0.0), cx(c, 0.0), cx(d, 0.0))
    }

    pub fn zero() -> Self {
        Mat2::from_real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn id() -> Self {
        Mat2::from_real(1.0, 0.0, 0.0, 1.0)
    }

    /// Off-diagonal symmetric unit matrix u = [[0,1],[1,0]].
    pub fn u() -> Self {
        Mat2::from_real(0.0, 1.0, 1.0, 0.0)
    }

    /// delta = diag(1,-1), the standard indefinite Hermitian form.
    pub fn delta() -> Self {
        Mat2::from_real(1.0, 0.0, 0.0, -1.0)
    }

    /// e = [[0,1],[-1,0]] (rotation by pi/2).
    pub fn e() -> Self {
        Mat2::from_real(0.0, 1.0, -1.0, 0.0)
    }

    pub fn diag(a: Cx, d: Cx) -> Self {
        Mat2::new(a, Cx::new(0.0, 0.0), Cx::new(0.0, 0.0), d)
    }

    pub fn scale(self, s: Cx) -> Self {
        let mut r = self;
        for i in 0..2 {
            for j in 0..2 {
                r.m[i][j] *= s;
            }
        }
        r
    }

    pub fn scale_re(self, s: f64) -> Self {
        self.scale(cx(s, 0.0))
    }

    pub fn trace(&self) -> Cx {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Cx {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Conjugate transpose.
    pub fn adj(&self) -> Self {
        Mat2::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    /// Adjoint with respect to the indefinite form delta = diag(1,-1):
    /// A^dagger = delta A^* delta.
    pub fn adj_indef(&self) -> Self {
        let d = Mat2::delta();
        d * self.adj() * d
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.m[0][0], self.m[1][0], self.m[0][1], self.m[1][1])
    }

    pub fn conj(&self) -> Self {
        Mat2::new(
            self.m[0][0].conj(),
            self.m[0][1].conj(),
            self.m[1][0].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn inv(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        Some(Mat2::new(self.m[1][1] / d, -self.m[0][1] / d, -self.m[1][0] / d, self.m[0][0] / d))
    }

    /// Trace-free part.
    pub fn traceless(&self) -> Self {
        let h = self.trace() * 0.5;
        *self - Mat2::diag(h, h)
    }

    pub fn comm(a: Mat2, b: Mat2) -> Mat2 {
        a * b - b * a
    }

    pub fn norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                s += self.m[i][j].norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.adj()).norm() <= tol * (1.0 + self.norm())
    }

    pub fn col(&self, j: usize) -> [Cx; 2] {
        [self.m[0][j], self.m[1][j]]
    }

    pub fn from_cols(c0: [Cx; 2], c1: [Cx; 2]) -> Self {
        Mat2::new(c0[0], c1[0], c0[1], c1[1])
    }

    pub fn mul_vec(&self, v: [Cx; 2]) -> [Cx; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let mut r = self;
        for i in 0..2 {
            for j in 0..2 {
                r.m[i][j] += o.m[i][j];
            }
        }
        r
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        let mut r = self;
        for i in 0..2 {
            for j in 0..2 {
                r.m[i][j] -= o.m[i][j];
            }
        }
        r
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let mut r = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                r.m[i][j] = self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j];
            }
        }
        r
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale_re(-1.0)
    }
}

pub fn vec2_norm(v: [Cx; 2]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}
