//! Principal quaternion logarithm and its H-derivative.
//!
//! Differentiating `z = exp(ln z)` gives the linear equation
//!
//! ```text
//! 1 = Σ_m c_m(w)·w′·w^m,   c_m(w) = Σ_j w^j / (m+j+1)!
//! ```
//!
//! for `w′ = (ln z)′` at `w = ln z`. The left side is the differential of
//! `exp` at `w` applied to `w′`, so the equation is solved as a 4×4 real
//! system through its matrix.

use std::f64::consts::PI;

use crate::autodiff::{d_compose, Diagnostics, HDual};
use crate::error::{Error, Result};
use crate::matrix::RealMatrix4;
use crate::quat::Quaternion;
use crate::sandwich::{CanonicalSandwich, LinearMap, SandwichForm};
use crate::series::{self, Elementary, SeriesTruncation};

/// Condition numbers above this are reported as [`Error::IllConditioned`].
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSolveConfig {
    /// Highest outer power `w^m` retained.
    pub m_max: usize,
    /// Highest power `w^j` in each coefficient series.
    pub j_max: usize,
    /// Residual tolerance for `|L(w′) − 1|`.
    pub eps: f64,
}

impl LogSolveConfig {
    pub fn new(m_max: usize, j_max: usize, eps: f64) -> Result<Self> {
        if m_max < 1 || j_max < 1 {
            return Err(Error::Config(format!(
                "m_max and j_max must be >= 1, got {m_max} and {j_max}"
            )));
        }
        if !(eps > 0.0) {
            return Err(Error::Config(format!("log eps must be > 0, got {eps}")));
        }
        Ok(Self { m_max, j_max, eps })
    }
}

impl Default for LogSolveConfig {
    fn default() -> Self {
        Self {
            m_max: 40,
            j_max: 40,
            eps: 1e-10,
        }
    }
}

/// `ln|z| + (v/|v|)·atan2(|v|, x0)` for `z = x0 + v`.
pub fn principal_log(z: Quaternion) -> Result<Quaternion> {
    if z.is_zero() {
        return Err(Error::domain("logarithm of 0"));
    }
    let (x0, v) = z.split();
    let abs_v = v.norm();
    let ln_abs = z.norm().ln();
    if abs_v == 0.0 {
        if x0 < 0.0 {
            return Err(Error::domain(
                "logarithm branch point: negative real has no principal imaginary direction",
            ));
        }
        return Ok(Quaternion::real(ln_abs));
    }
    let angle = abs_v.atan2(x0);
    debug_assert!(angle <= PI);
    Ok(Quaternion::real(ln_abs) + v * (angle / abs_v))
}

/// The truncated form `h ↦ Σ_{m≤m_max} c_m(w)·h·w^m` with `j ≤ j_max` in each `c_m`.
pub fn exp_differential_form(w: Quaternion, cfg: &LogSolveConfig) -> SandwichForm {
    let top = cfg.m_max + cfg.j_max + 1;
    let mut inv_fact = Vec::with_capacity(top + 1);
    let mut v = 1.0;
    inv_fact.push(v);
    for k in 1..=top {
        v /= k as f64;
        inv_fact.push(v);
    }
    let n_pow = cfg.m_max.max(cfg.j_max);
    let mut powers = Vec::with_capacity(n_pow + 1);
    let mut p = Quaternion::ONE;
    for _ in 0..=n_pow {
        powers.push(p);
        p = p * w;
    }
    (0..=cfg.m_max)
        .map(|m| {
            let c: Quaternion = (0..=cfg.j_max)
                .map(|j| powers[j] * inv_fact[m + j + 1])
                .sum();
            (c, powers[m])
        })
        .collect()
}

/// The `exp` differential at `w` with the series carried to machine precision.
///
/// The truncated system is solved exactly, so residuals are measured here.
fn converged_exp_differential(w: Quaternion) -> Result<SandwichForm> {
    let trunc = SeriesTruncation::new(1e-17, 400)?;
    let order = series::truncation_order(w.norm(), &trunc)?;
    Ok(series::increment_form(Elementary::Exp, w, order))
}

/// Solution of the log-derivative equation at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDerivative {
    /// `w = ln z`.
    pub log: Quaternion,
    /// `w′`.
    pub derivative: Quaternion,
    /// `|L(w′) − 1|` with `L` summed to convergence.
    pub residual: f64,
    /// 1-norm condition number of the matrix of `L`.
    pub condition: f64,
}

fn checked_inverse(m: &RealMatrix4) -> Result<(RealMatrix4, f64)> {
    let condition = m.condition_1();
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    Ok((m.inverse()?, condition))
}

/// Solves `L(w′) = 1` for `w′ = (ln z)′`.
pub fn solve_log_derivative(z: Quaternion, cfg: &LogSolveConfig) -> Result<LogDerivative> {
    let w = principal_log(z)?;
    let form = exp_differential_form(w, cfg);
    let m = form.to_matrix();
    let condition = m.condition_1();
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let derivative = m.lu()?.solve(Quaternion::ONE);
    let residual = (converged_exp_differential(w)?.apply(derivative) - Quaternion::ONE).norm();
    if !(residual < cfg.eps) {
        return Err(Error::Residual {
            residual,
            eps: cfg.eps,
        });
    }
    Ok(LogDerivative {
        log: w,
        derivative,
        residual,
        condition,
    })
}

/// Full differential of `ln` at `z`: the inverse of the `exp` differential at `ln z`.
pub fn log_differential(
    z: Quaternion,
    cfg: &LogSolveConfig,
) -> Result<(Quaternion, CanonicalSandwich, f64)> {
    let w = principal_log(z)?;
    let m = exp_differential_form(w, cfg).to_matrix();
    let (inv, condition) = checked_inverse(&m)?;
    Ok((w, CanonicalSandwich::from_matrix(&inv), condition))
}

/// `ln(f)` through the chain rule.
pub fn d_ln(f: &HDual, cfg: &LogSolveConfig) -> Result<HDual> {
    let (w, diff, condition) = log_differential(f.value, cfg)?;
    let mut out = d_compose(&diff, w, f);
    out.diagnostics = out.diagnostics.merge(&Diagnostics {
        condition_numbers: vec![condition],
        ..Diagnostics::default()
    });
    Ok(out)
}
