//! Sandwich forms: real-linear maps `h ↦ Σ A_k·h·B_k` on quaternions.
//!
//! A differential of a quaternion function is stored as such a map. The
//! derivative is its trace `Σ A_k B_k`, which is the map applied to `h = 1`.
//!
//! Every real-linear map on ℍ has exactly one representation with the left
//! factors fixed to the basis `(1, i₁, i₂, i₃)`; that is [`CanonicalSandwich`].
//! The sixteen basis maps `h ↦ e_i·h·e_j` have matrices that are mutually
//! orthogonal under the Frobenius product, each with squared norm 4, so
//! decomposition is a projection rather than a general 16×16 solve.

use std::fmt;
use std::sync::LazyLock;

use crate::matrix::RealMatrix4;
use crate::quat::Quaternion;

/// Matrices of `h ↦ e_i·h·e_j`, indexed `[i][j]`.
static BASIS_MAPS: LazyLock<[[RealMatrix4; 4]; 4]> = LazyLock::new(|| {
    let e = Quaternion::BASIS;
    [0, 1, 2, 3].map(|i| [0, 1, 2, 3].map(|j| RealMatrix4::sandwich(e[i], e[j])))
});

/// Squared Frobenius norm shared by every basis map matrix.
const BASIS_NORM_SQR: f64 = 4.0;

/// Common surface of the two sandwich representations.
pub trait LinearMap {
    fn apply(&self, h: Quaternion) -> Quaternion;

    /// `Σ A_k B_k`.
    fn trace(&self) -> Quaternion;

    /// Column `j` holds the coordinates of `apply(e_j)`.
    fn to_matrix(&self) -> RealMatrix4 {
        RealMatrix4::from_columns(Quaternion::BASIS.map(|e| self.apply(e)))
    }

    fn canonicalize(&self) -> CanonicalSandwich {
        CanonicalSandwich::from_matrix(&self.to_matrix())
    }
}

/// Unnormalized list of `(A_k, B_k)` pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SandwichForm {
    terms: Vec<(Quaternion, Quaternion)>,
}

impl SandwichForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: Vec<(Quaternion, Quaternion)>) -> Self {
        Self { terms }
    }

    pub fn identity() -> Self {
        Self::from_terms(vec![(Quaternion::ONE, Quaternion::ONE)])
    }

    pub fn push(&mut self, a: Quaternion, b: Quaternion) {
        self.terms.push((a, b));
    }

    pub fn with(mut self, a: Quaternion, b: Quaternion) -> Self {
        self.push(a, b);
        self
    }

    pub fn terms(&self) -> &[(Quaternion, Quaternion)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl LinearMap for SandwichForm {
    fn apply(&self, h: Quaternion) -> Quaternion {
        self.terms.iter().map(|&(a, b)| a * h * b).sum()
    }

    fn trace(&self) -> Quaternion {
        self.terms.iter().map(|&(a, b)| a * b).sum()
    }

    fn to_matrix(&self) -> RealMatrix4 {
        self.terms.iter().fold(RealMatrix4::ZERO, |m, &(a, b)| {
            m + RealMatrix4::sandwich(a, b)
        })
    }
}

impl FromIterator<(Quaternion, Quaternion)> for SandwichForm {
    fn from_iter<I: IntoIterator<Item = (Quaternion, Quaternion)>>(iter: I) -> Self {
        Self::from_terms(iter.into_iter().collect())
    }
}

/// The map `h ↦ h·b0 + i₁·h·b1 + i₂·h·b2 + i₃·h·b3`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CanonicalSandwich {
    b: [Quaternion; 4],
}

impl CanonicalSandwich {
    pub const ZERO: CanonicalSandwich = CanonicalSandwich {
        b: [Quaternion::ZERO; 4],
    };

    pub const IDENTITY: CanonicalSandwich = CanonicalSandwich {
        b: [
            Quaternion::ONE,
            Quaternion::ZERO,
            Quaternion::ZERO,
            Quaternion::ZERO,
        ],
    };

    pub fn new(b: [Quaternion; 4]) -> Self {
        Self { b }
    }

    /// The right-hand factors `(b0, b1, b2, b3)`.
    pub fn coefficients(&self) -> [Quaternion; 4] {
        self.b
    }

    /// Unique canonical form with `to_matrix(result) == m`.
    pub fn from_matrix(m: &RealMatrix4) -> Self {
        let maps = &*BASIS_MAPS;
        let b = [0, 1, 2, 3].map(|i| {
            let c = [0, 1, 2, 3].map(|j| m.frobenius_dot(&maps[i][j]) / BASIS_NORM_SQR);
            Quaternion::from_array(c)
        });
        Self { b }
    }

    pub fn to_form(&self) -> SandwichForm {
        Quaternion::BASIS.into_iter().zip(self.b).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            b: [0, 1, 2, 3].map(|k| self.b[k] + other.b[k]),
        }
    }

    /// `h ↦ c·L(h)`.
    pub fn scale_left(&self, c: Quaternion) -> Self {
        (RealMatrix4::left_mul(c) * self.to_matrix()).into()
    }

    /// `h ↦ L(h)·c`.
    pub fn scale_right(&self, c: Quaternion) -> Self {
        Self {
            b: self.b.map(|bk| bk * c),
        }
    }

    /// `h ↦ a·L(h)·c`.
    pub fn sandwich_with(&self, a: Quaternion, c: Quaternion) -> Self {
        self.scale_left(a).scale_right(c)
    }

    /// Maximum componentwise difference between the right-hand factors.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.b
            .iter()
            .zip(&other.b)
            .flat_map(|(x, y)| (*x - *y).to_array())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl From<RealMatrix4> for CanonicalSandwich {
    fn from(m: RealMatrix4) -> Self {
        Self::from_matrix(&m)
    }
}

impl LinearMap for CanonicalSandwich {
    fn apply(&self, h: Quaternion) -> Quaternion {
        Quaternion::BASIS
            .iter()
            .zip(&self.b)
            .map(|(&e, &b)| e * h * b)
            .sum()
    }

    fn trace(&self) -> Quaternion {
        Quaternion::BASIS
            .iter()
            .zip(&self.b)
            .map(|(&e, &b)| e * b)
            .sum()
    }

    fn canonicalize(&self) -> CanonicalSandwich {
        *self
    }
}

/// Canonical form of `h ↦ outer(inner(h))`; the chain rule for differentials.
pub fn compose(outer: &impl LinearMap, inner: &impl LinearMap) -> CanonicalSandwich {
    CanonicalSandwich::from_matrix(&(outer.to_matrix() * inner.to_matrix()))
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a Quaternion, &'a Quaternion)>,
) -> fmt::Result {
    let mut first = true;
    for (a, b) in terms {
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        write!(f, "({a}) h ({b})")?;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// `(A_1) h (B_1) + (A_2) h (B_2) + ...`, or `0` for the empty form.
impl fmt::Display for SandwichForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(a, b)| (a, b)))
    }
}

impl fmt::Display for CanonicalSandwich {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, Quaternion::BASIS.iter().zip(self.b.iter()))
    }
}
