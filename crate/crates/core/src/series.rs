//! Power series for `exp`, `sin` and `cos` of a quaternion argument.
//!
//! All powers of a single quaternion commute, so the value series is summed
//! exactly as in the scalar case. The number of retained terms `N` is the
//! first index with `N + 2 > |z|` whose ratio-test remainder
//!
//! ```text
//! |z|^(N+1) / (N+1)! · 1 / (1 − |z|/(N+2))
//! ```
//!
//! is below the requested `eps`. This majorant bounds the tail of all three
//! series since their coefficients are at most `1/p!` in magnitude.
//!
//! The increment `f(z+h) − f(z)` of a series `Σ a_p z^p` expands to
//! `Σ_b c_b(z)·h·z^b + (second order)` with `c_b(z) = Σ_a a_(a+b+1) z^a`.
//! [`increment_form`] returns that first-order part with every product
//! `z^a h z^b` of total degree `a + b ≤ N` kept. The dropped first-order
//! terms are bounded by the same value remainder.

use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::sandwich::SandwichForm;

/// Remainder bound and term cap for the series evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    pub eps: f64,
    pub n_max: usize,
}

impl SeriesTruncation {
    pub const DEFAULT_EPS: f64 = 1e-14;
    pub const DEFAULT_N_MAX: usize = 200;

    pub fn new(eps: f64, n_max: usize) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::Config(format!("series eps must be > 0, got {eps}")));
        }
        if n_max < 3 {
            return Err(Error::Config(format!(
                "series n_max must be >= 3, got {n_max}"
            )));
        }
        Ok(Self { eps, n_max })
    }
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self {
            eps: Self::DEFAULT_EPS,
            n_max: Self::DEFAULT_N_MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elementary {
    Exp,
    Sin,
    Cos,
}

impl Elementary {
    pub const ALL: [Elementary; 3] = [Elementary::Exp, Elementary::Sin, Elementary::Cos];

    pub fn name(self) -> &'static str {
        match self {
            Elementary::Exp => "exp",
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
        }
    }

    /// Sign pattern of the coefficient of `z^p`, relative to `1/p!`.
    fn sign(self, p: usize) -> f64 {
        match self {
            Elementary::Exp => 1.0,
            Elementary::Sin if p.is_multiple_of(2) => 0.0,
            Elementary::Sin => {
                if (p / 2).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            }
            Elementary::Cos if !p.is_multiple_of(2) => 0.0,
            Elementary::Cos => {
                if (p / 2).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// `[1/0!, 1/1!, ..., 1/n!]`, built by repeated division so it underflows instead of overflowing.
fn inverse_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut v = 1.0;
    out.push(v);
    for k in 1..=n {
        v /= k as f64;
        out.push(v);
    }
    out
}

/// Ratio-test remainder after keeping terms `0..=n`; infinite while `n + 2 <= |z|`.
pub fn remainder_bound(abs_z: f64, n: usize) -> f64 {
    let next = (n + 2) as f64;
    if next <= abs_z {
        return f64::INFINITY;
    }
    let mut term = 1.0;
    for k in 1..=n + 1 {
        term *= abs_z / k as f64;
    }
    term / (1.0 - abs_z / next)
}

/// Number of retained terms `N` (powers `0..=N`) for `|z| = abs_z`.
pub fn truncation_order(abs_z: f64, trunc: &SeriesTruncation) -> Result<usize> {
    if !abs_z.is_finite() {
        return Err(Error::domain("series argument is not finite"));
    }
    let mut term = 1.0;
    for n in 0..=trunc.n_max {
        // term = |z|^(n+1) / (n+1)!
        term *= abs_z / (n + 1) as f64;
        let next = (n + 2) as f64;
        if next > abs_z && term / (1.0 - abs_z / next) < trunc.eps {
            return Ok(n);
        }
    }
    Err(Error::Truncation {
        achieved: remainder_bound(abs_z, trunc.n_max),
        requested: trunc.eps,
        terms: trunc.n_max,
    })
}

/// A series value with its truncation record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Quaternion,
    /// Highest retained power `N`.
    pub order: usize,
    pub remainder_bound: f64,
}

pub fn eval_series(
    kind: Elementary,
    z: Quaternion,
    trunc: &SeriesTruncation,
) -> Result<SeriesValue> {
    let abs_z = z.norm();
    let order = truncation_order(abs_z, trunc)?;
    let mut term = Quaternion::ONE;
    let mut sum = Quaternion::ZERO;
    for p in 0..=order {
        if p > 0 {
            term = term * z / p as f64;
        }
        let s = kind.sign(p);
        if s != 0.0 {
            sum += term * s;
        }
    }
    Ok(SeriesValue {
        value: sum,
        order,
        remainder_bound: remainder_bound(abs_z, order),
    })
}

pub fn eval_exp(z: Quaternion, trunc: &SeriesTruncation) -> Result<Quaternion> {
    eval_series(Elementary::Exp, z, trunc).map(|v| v.value)
}

pub fn eval_sin(z: Quaternion, trunc: &SeriesTruncation) -> Result<Quaternion> {
    eval_series(Elementary::Sin, z, trunc).map(|v| v.value)
}

pub fn eval_cos(z: Quaternion, trunc: &SeriesTruncation) -> Result<Quaternion> {
    eval_series(Elementary::Cos, z, trunc).map(|v| v.value)
}

/// Bound on the second-order part `A_n` of `((z+h)^n − z^n)/n!`:
/// `(2ⁿ/n!)·|h|²/(1−|h|)`, times `|z|^(n−2)` when `|z| ≥ 1`.
pub fn tail_bound(abs_z: f64, abs_h: f64, n: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&abs_h) {
        return Err(Error::domain(format!(
            "tail bound needs 0 <= |h| < 1, got {abs_h}"
        )));
    }
    if !(abs_z >= 0.0) {
        return Err(Error::domain(format!(
            "tail bound needs |z| >= 0, got {abs_z}"
        )));
    }
    if n < 2 {
        return Err(Error::domain(format!("tail bound needs n >= 2, got {n}")));
    }
    Ok(tail_coefficient(abs_z, n) * abs_h * abs_h / (1.0 - abs_h))
}

/// `(2ⁿ/n!)·max(1,|z|)^(n−2)`.
fn tail_coefficient(abs_z: f64, n: usize) -> f64 {
    let base = abs_z.max(1.0);
    let mut c = 1.0;
    for k in 1..=n {
        c *= 2.0 / k as f64;
        if k > 2 {
            c *= base;
        }
    }
    c
}

/// `K` with `Σ_{n=2}^{order+1} tail_bound(|z|, |h|, n) = K·|h|²/(1−|h|)`.
///
/// Covers every power touched by a differential built with [`increment_form`]
/// at the same `order`.
pub fn increment_tail_constant(abs_z: f64, order: usize) -> f64 {
    (2..=order + 1).map(|n| tail_coefficient(abs_z, n)).sum()
}

/// First-order part of the increment at `z`: terms `(c_b(z), z^b)` for
/// `b = 0..=order`, keeping every `z^a h z^b` with `a + b <= order`.
pub fn increment_form(kind: Elementary, z: Quaternion, order: usize) -> SandwichForm {
    let inv_fact = inverse_factorials(order + 1);
    let mut powers = Vec::with_capacity(order + 1);
    let mut p = Quaternion::ONE;
    for _ in 0..=order {
        powers.push(p);
        p = p * z;
    }
    (0..=order)
        .filter_map(|b| {
            let mut c = Quaternion::ZERO;
            for a in 0..=order - b {
                let deg = a + b + 1;
                let s = kind.sign(deg);
                if s != 0.0 {
                    c += powers[a] * (s * inv_fact[deg]);
                }
            }
            (!c.is_zero()).then_some((c, powers[b]))
        })
        .collect()
}
