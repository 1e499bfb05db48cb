//! Finite-difference oracles that never look at a differential.
//!
//! The functions here take any `Fn(Quaternion) -> Result<Quaternion, E>`,
//! so they work on closures and on parsed expressions alike.

use crate::error::Error;
use crate::quat::Quaternion;
use crate::Side;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Central,
    Forward,
}

/// Step, scheme and comparison tolerance for the oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffConfig {
    pub step: f64,
    pub scheme: Scheme,
    pub tol: f64,
}

impl DiffConfig {
    pub fn new(step: f64, scheme: Scheme, tol: f64) -> Result<Self, Error> {
        if !(step > 0.0) {
            return Err(Error::Config(format!("step must be > 0, got {step}")));
        }
        if !(tol > 0.0) {
            return Err(Error::Config(format!("tol must be > 0, got {tol}")));
        }
        Ok(Self { step, scheme, tol })
    }

    /// Central differences, step `1e-5`, tolerance `1e-6`.
    pub fn first_order() -> Self {
        Self {
            step: 1e-5,
            scheme: Scheme::Central,
            tol: 1e-6,
        }
    }

    /// Step `1e-3` for second differences.
    pub fn second_order() -> Self {
        Self {
            step: 1e-3,
            scheme: Scheme::Central,
            tol: 1e-6,
        }
    }

    /// Widened step for an operator applied to another finite difference.
    pub fn nested() -> Self {
        Self {
            step: 1e-2,
            scheme: Scheme::Central,
            tol: 1e-3,
        }
    }
}

impl Default for DiffConfig {
    fn default() -> Self {
        Self::first_order()
    }
}

/// `∂f/∂x_axis` at `z0`.
pub fn partial<F, E>(f: &F, z0: Quaternion, axis: usize, cfg: &DiffConfig) -> Result<Quaternion, E>
where
    F: Fn(Quaternion) -> Result<Quaternion, E>,
{
    let e = Quaternion::BASIS[axis] * cfg.step;
    match cfg.scheme {
        Scheme::Central => Ok((f(z0 + e)? - f(z0 - e)?) / (2.0 * cfg.step)),
        Scheme::Forward => Ok((f(z0 + e)? - f(z0)?) / cfg.step),
    }
}

/// Difference quotient along the real axis; equals the H-derivative when it exists.
pub fn fd_partial_x0<F, E>(f: &F, z0: Quaternion, cfg: &DiffConfig) -> Result<Quaternion, E>
where
    F: Fn(Quaternion) -> Result<Quaternion, E>,
{
    partial(f, z0, 0, cfg)
}

/// `[f(z0+h) − f(z0)]·h⁻¹` (right) or `h⁻¹·[f(z0+h) − f(z0)]` (left), `h = s·dir`.
pub fn directional_quotient<F, E>(
    f: &F,
    z0: Quaternion,
    dir: Quaternion,
    side: Side,
    s: f64,
) -> Result<Quaternion, E>
where
    F: Fn(Quaternion) -> Result<Quaternion, E>,
    E: From<Error>,
{
    if dir.is_zero() {
        return Err(Error::domain("difference quotient direction is 0").into());
    }
    if s == 0.0 {
        return Err(Error::domain("difference quotient step is 0").into());
    }
    let h = dir * s;
    let h_inv = h.inverse()?;
    let delta = f(z0 + h)? - f(z0)?;
    Ok(match side {
        Side::Right => delta * h_inv,
        Side::Left => h_inv * delta,
    })
}

/// Fixed unit directions used to probe one-sided derivative limits.
pub const PROBE_DIRECTIONS: [Quaternion; 8] = {
    const H: f64 = 0.5;
    const R: f64 = std::f64::consts::FRAC_1_SQRT_2;
    [
        Quaternion::ONE,
        Quaternion::I1,
        Quaternion::I2,
        Quaternion::I3,
        Quaternion::new(H, H, H, H),
        Quaternion::new(R, -R, 0.0, 0.0),
        Quaternion::new(0.0, 0.0, R, R),
        Quaternion::new(H, H, -H, -H),
    ]
};

/// One-sided quotients across [`PROBE_DIRECTIONS`] and their spread.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientSpread {
    pub quotients: Vec<Quaternion>,
    /// Largest pairwise distance between quotients.
    pub spread: f64,
}

pub fn quotient_spread<F, E>(f: &F, z0: Quaternion, side: Side, s: f64) -> Result<QuotientSpread, E>
where
    F: Fn(Quaternion) -> Result<Quaternion, E>,
    E: From<Error>,
{
    let quotients = PROBE_DIRECTIONS
        .iter()
        .map(|&d| directional_quotient(f, z0, d, side, s))
        .collect::<Result<Vec<_>, E>>()?;
    let mut spread: f64 = 0.0;
    for (i, a) in quotients.iter().enumerate() {
        for b in &quotients[i + 1..] {
            spread = spread.max(a.dist(*b));
        }
    }
    Ok(QuotientSpread { quotients, spread })
}

/// Right: `Σ_k (∂f/∂x_k)·e_k`; left: `Σ_k e_k·(∂f/∂x_k)`, with `e₀ = 1`.
pub fn fueter_apply<F, E>(
    f: &F,
    z0: Quaternion,
    side: Side,
    cfg: &DiffConfig,
) -> Result<Quaternion, E>
where
    F: Fn(Quaternion) -> Result<Quaternion, E>,
{
    let mut acc = Quaternion::ZERO;
    for (k, e) in Quaternion::BASIS.into_iter().enumerate() {
        let d = partial(f, z0, k, cfg)?;
        acc += match side {
            Side::Right => d * e,
            Side::Left => e * d,
        };
    }
    Ok(acc)
}

/// Sum of the four second central differences. `cfg.scheme` is ignored.
pub fn laplacian<F, E>(f: &F, z0: Quaternion, cfg: &DiffConfig) -> Result<Quaternion, E>
where
    F: Fn(Quaternion) -> Result<Quaternion, E>,
{
    let s = cfg.step;
    let center = f(z0)?;
    let mut acc = Quaternion::ZERO;
    for e in Quaternion::BASIS {
        let d = e * s;
        acc += f(z0 + d)? - center * 2.0 + f(z0 - d)?;
    }
    Ok(acc / (s * s))
}
