//! 4×4 real matrices acting on quaternion coordinates `(x0, x1, x2, x3)`.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Pivot magnitude below which [`RealMatrix4::lu`] treats the matrix as singular.
const SINGULAR_PIVOT: f64 = 1e-300;

/// Row-major 4×4 real matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RealMatrix4(pub [[f64; 4]; 4]);

impl RealMatrix4 {
    pub const ZERO: RealMatrix4 = RealMatrix4([[0.0; 4]; 4]);

    pub fn identity() -> Self {
        let mut m = Self::ZERO;
        for i in 0..4 {
            m.0[i][i] = 1.0;
        }
        m
    }

    /// Builds the matrix whose columns are the coordinates of `cols`.
    pub fn from_columns(cols: [Quaternion; 4]) -> Self {
        let mut m = Self::ZERO;
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.to_array().into_iter().enumerate() {
                m.0[i][j] = v;
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Quaternion {
        Quaternion::new(self.0[0][j], self.0[1][j], self.0[2][j], self.0[3][j])
    }

    /// Matrix of `h ↦ q·h`.
    pub fn left_mul(q: Quaternion) -> Self {
        Self::from_columns(Quaternion::BASIS.map(|e| q * e))
    }

    /// Matrix of `h ↦ h·q`.
    pub fn right_mul(q: Quaternion) -> Self {
        Self::from_columns(Quaternion::BASIS.map(|e| e * q))
    }

    /// Matrix of `h ↦ a·h·b`.
    pub fn sandwich(a: Quaternion, b: Quaternion) -> Self {
        Self::from_columns(Quaternion::BASIS.map(|e| a * e * b))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                t.0[j][i] = self.0[i][j];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|row| row.map(|v| v * s)))
    }

    /// Acts on the coordinate vector of `h`.
    pub fn apply(&self, h: Quaternion) -> Quaternion {
        let x = h.to_array();
        let mut y = [0.0; 4];
        for (yi, row) in y.iter_mut().zip(&self.0) {
            *yi = row.iter().zip(&x).map(|(a, b)| a * b).sum();
        }
        Quaternion::from_array(y)
    }

    /// Frobenius inner product `Σ a_ij b_ij`.
    pub fn frobenius_dot(&self, other: &Self) -> f64 {
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                s += self.0[i][j] * other.0[i][j];
            }
        }
        s
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..4)
            .map(|j| (0..4).map(|i| self.0[i][j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<Lu4> {
        let mut a = self.0;
        let mut perm = [0usize, 1, 2, 3];
        for k in 0..4 {
            let p = (k..4)
                .max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))
                .unwrap_or(k);
            if !(a[p][k].abs() > SINGULAR_PIVOT) {
                return Err(Error::IllConditioned {
                    condition: f64::INFINITY,
                });
            }
            a.swap(k, p);
            perm.swap(k, p);
            for i in k + 1..4 {
                let f = a[i][k] / a[k][k];
                a[i][k] = f;
                for j in k + 1..4 {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        Ok(Lu4 { factors: a, perm })
    }

    pub fn inverse(&self) -> Result<Self> {
        let lu = self.lu()?;
        let cols = Quaternion::BASIS.map(|e| lu.solve(e));
        Ok(Self::from_columns(cols))
    }

    /// `‖A‖₁·‖A⁻¹‖₁`; infinite for a singular matrix.
    pub fn condition_1(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => self.norm_1() * inv.norm_1(),
            Err(_) => f64::INFINITY,
        }
    }
}

/// Packed LU factors of a [`RealMatrix4`].
#[derive(Debug, Clone, Copy)]
pub struct Lu4 {
    factors: [[f64; 4]; 4],
    perm: [usize; 4],
}

impl Lu4 {
    /// Solves `A x = rhs` for the coordinate vector `x`.
    pub fn solve(&self, rhs: Quaternion) -> Quaternion {
        let b = rhs.to_array();
        let a = &self.factors;
        let mut y = [0.0; 4];
        for i in 0..4 {
            let mut s = b[self.perm[i]];
            for j in 0..i {
                s -= a[i][j] * y[j];
            }
            y[i] = s;
        }
        let mut x = [0.0; 4];
        for i in (0..4).rev() {
            let mut s = y[i];
            for j in i + 1..4 {
                s -= a[i][j] * x[j];
            }
            x[i] = s / a[i][i];
        }
        Quaternion::from_array(x)
    }
}

impl Mul for RealMatrix4 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut m = Self::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = (0..4).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        m
    }
}

impl Add for RealMatrix4 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] += o.0[i][j];
            }
        }
        m
    }
}

impl Sub for RealMatrix4 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o.scale(-1.0)
    }
}
