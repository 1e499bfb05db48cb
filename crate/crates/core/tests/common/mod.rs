//! Independent oracles and samplers shared by the integration tests.
//!
//! The closed forms here use the complex-slice reduction `z = x0 + u·t`
//! with `u` a unit imaginary and never touch the series module.

#![allow(dead_code)]

use hderiv::Quaternion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction scaled to a radius drawn uniformly from `[r_min, r_max]`.
pub fn in_shell(rng: &mut impl Rng, r_min: f64, r_max: f64) -> Quaternion {
    let dir = unit(rng);
    dir * rng.gen_range(r_min..=r_max)
}

pub fn unit(rng: &mut impl Rng) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = q.norm();
        if n > 0.1 && n <= 1.0 {
            return q / n;
        }
    }
}

/// Uniform in the ball `|z| <= r`.
pub fn in_ball(rng: &mut impl Rng, r: f64) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.gen_range(-r..r),
            rng.gen_range(-r..r),
            rng.gen_range(-r..r),
            rng.gen_range(-r..r),
        );
        if q.norm() <= r {
            return q;
        }
    }
}

/// `(x0, t, u)` with `z = x0 + u·t`, `t = |Im z|`; `u = i₁` when `t = 0`.
fn slice(z: Quaternion) -> (f64, f64, Quaternion) {
    let (x0, v) = z.split();
    let t = v.norm();
    let u = if t == 0.0 { Quaternion::I1 } else { v / t };
    (x0, t, u)
}

pub fn exp_closed(z: Quaternion) -> Quaternion {
    let (x0, t, u) = slice(z);
    (Quaternion::real(t.cos()) + u * t.sin()) * x0.exp()
}

pub fn sin_closed(z: Quaternion) -> Quaternion {
    let (x0, t, u) = slice(z);
    Quaternion::real(x0.sin() * t.cosh()) + u * (x0.cos() * t.sinh())
}

pub fn cos_closed(z: Quaternion) -> Quaternion {
    let (x0, t, u) = slice(z);
    Quaternion::real(x0.cos() * t.cosh()) - u * (x0.sin() * t.sinh())
}

pub fn ln_closed(z: Quaternion) -> Quaternion {
    let (x0, t, u) = slice(z);
    Quaternion::real(z.norm().ln()) + u * t.atan2(x0)
}

/// `z^n` by repeated multiplication; negative `n` inverts `conj(z)/|z|²` first.
pub fn pow_naive(z: Quaternion, n: i32) -> Quaternion {
    let base = if n < 0 { z.conj() / z.norm_sqr() } else { z };
    (0..n.unsigned_abs()).fold(Quaternion::ONE, |acc, _| acc * base)
}

pub fn rel_err(got: Quaternion, want: Quaternion) -> f64 {
    got.dist(want) / want.norm().max(1.0)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
