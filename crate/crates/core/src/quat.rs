//! Quaternion arithmetic.
//!
//! A [`Quaternion`] is the value `x0 + x1·i₁ + x2·i₂ + x3·i₃` with Hamilton's
//! multiplication rules `i₁i₂ = i₃`, `i₂i₃ = i₁`, `i₃i₁ = i₂` and
//! `i₁² = i₂² = i₃² = −1`. Multiplication is associative but not commutative;
//! nothing in this crate reorders a product.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// Which identity set [`Quaternion::real_coordinates`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordinateMethod {
    /// `x0 = ¼(z − i₁zi₁ − i₂zi₂ − i₃zi₃)` and the companion formulas; no conjugate.
    Hausdorff,
    /// `x0 = ½(z̄ + z)`, `x_k = ½(i_k z̄ − z i_k)`.
    Conjugate,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I1: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const I2: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const I3: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    /// The basis `(1, i₁, i₂, i₃)` in coordinate order.
    pub const BASIS: [Quaternion; 4] = [Self::ONE, Self::I1, Self::I2, Self::I3];

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    pub const fn real(x: f64) -> Self {
        Self::new(x, 0.0, 0.0, 0.0)
    }

    pub const fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn conj(self) -> Self {
        Self::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(self) -> bool {
        self.x0 == 0.0 && self.x1 == 0.0 && self.x2 == 0.0 && self.x3 == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    /// Splits `q = x0 + v` into its real part and pure-imaginary part.
    pub fn split(self) -> (f64, Quaternion) {
        (self.x0, Self::new(0.0, self.x1, self.x2, self.x3))
    }

    /// The imaginary part `v` of `q = x0 + v`.
    pub fn imag(self) -> Quaternion {
        self.split().1
    }

    /// `conj(q) / |q|²`.
    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::domain("no inverse of 0"));
        }
        Ok(self.conj() / n2)
    }

    /// Integer power; `q⁰ = 1` and negative powers go through [`Quaternion::inverse`].
    pub fn pow_int(self, n: i32) -> Result<Self> {
        if n < 0 {
            if self.is_zero() {
                return Err(Error::domain("negative power of 0"));
            }
            return self.pow_int(-n)?.inverse();
        }
        let mut acc = Self::ONE;
        for _ in 0..n {
            acc = acc * self;
        }
        Ok(acc)
    }

    /// Recovers `(x0, x1, x2, x3)` through quaternion products only.
    ///
    /// Each formula yields a real quaternion; its scalar part is returned.
    pub fn real_coordinates(self, method: CoordinateMethod) -> [f64; 4] {
        let [_, e1, e2, e3] = Self::BASIS;
        let z = self;
        match method {
            CoordinateMethod::Hausdorff => {
                let s1 = e1 * z * e1;
                let s2 = e2 * z * e2;
                let s3 = e3 * z * e3;
                // 1/(4 i_k) = -i_k / 4
                let c0 = (z - s1 - s2 - s3) * 0.25;
                let c1 = -e1 * (z - s1 + s2 + s3) * 0.25;
                let c2 = -e2 * (z + s1 - s2 + s3) * 0.25;
                let c3 = -e3 * (z + s1 + s2 - s3) * 0.25;
                [c0.x0, c1.x0, c2.x0, c3.x0]
            }
            CoordinateMethod::Conjugate => {
                let zb = z.conj();
                let c0 = (zb + z) * 0.5;
                let c1 = (e1 * zb - z * e1) * 0.5;
                let c2 = (e2 * zb - z * e2) * 0.5;
                let c3 = (e3 * zb - z * e3) * 0.5;
                [c0.x0, c1.x0, c2.x0, c3.x0]
            }
        }
    }

    /// Componentwise comparison with an absolute tolerance.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .all(|(a, b)| (a - b).abs() <= tol)
    }

    /// Componentwise comparison with tolerance scaled by `max(1, |self|, |other|)`.
    pub fn approx_eq_rel(self, other: Self, tol: f64) -> bool {
        let scale = 1f64.max(self.norm()).max(other.norm());
        self.approx_eq(other, tol * scale)
    }

    /// `|self - other|`.
    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }
}

impl From<f64> for Quaternion {
    fn from(x: f64) -> Self {
        Self::real(x)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.x0 + o.x0,
            self.x1 + o.x1,
            self.x2 + o.x2,
            self.x3 + o.x3,
        )
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(
            self.x0 - o.x0,
            self.x1 - o.x1,
            self.x2 - o.x2,
            self.x3 - o.x3,
        )
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
            a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
            a.x0 * b.x2 - a.x1 * b.x3 + a.x2 * b.x0 + a.x3 * b.x1,
            a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.x0 / s, self.x1 / s, self.x2 / s, self.x3 / s)
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

/// Serialized as `[x0, x1, x2, x3]`.
impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        <[f64; 4]>::deserialize(d).map(Self::from_array)
    }
}

/// Renders `a+bi+cj+dk`, always with all four components.
impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.x0)?;
        for (c, unit) in [(self.x1, 'i'), (self.x2, 'j'), (self.x3, 'k')] {
            if c < 0.0 {
                write!(f, "-{}{}", -c, unit)?;
            } else {
                write!(f, "+{}{}", c.abs(), unit)?;
            }
        }
        Ok(())
    }
}
