//! Forward propagation of `(value, differential)` pairs.
//!
//! An [`HDual`] holds `f(z⁰)` together with the linear part of the increment
//! `h ↦ f(z⁰+h) − f(z⁰)` as a canonical sandwich form. The H-derivative is
//! the trace of that form. Every rule keeps the factor order of the
//! products it differentiates.

use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::sandwich::{compose, CanonicalSandwich, LinearMap, SandwichForm};
use crate::series::{self, Elementary, SeriesTruncation};
use crate::Side;

/// Side information gathered while propagating.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// Largest series order `N` used by an elementary function.
    pub series_order: Option<usize>,
    /// Largest increment-tail constant `K`; the second-order remainder is
    /// bounded by `K·|h|²/(1−|h|)` for that series.
    pub tail_constant: Option<f64>,
    /// Condition numbers of the linear solves behind each logarithm.
    pub condition_numbers: Vec<f64>,
}

fn max_opt<T: PartialOrd + Copy>(a: Option<T>, b: Option<T>) -> Option<T> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y > x { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Diagnostics {
    pub fn merge(&self, other: &Diagnostics) -> Diagnostics {
        let mut condition_numbers = self.condition_numbers.clone();
        condition_numbers.extend_from_slice(&other.condition_numbers);
        Diagnostics {
            series_order: max_opt(self.series_order, other.series_order),
            tail_constant: max_opt(self.tail_constant, other.tail_constant),
            condition_numbers,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.series_order.is_none()
            && self.tail_constant.is_none()
            && self.condition_numbers.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HDual {
    pub value: Quaternion,
    pub differential: CanonicalSandwich,
    pub diagnostics: Diagnostics,
}

impl HDual {
    pub fn new(value: Quaternion, differential: CanonicalSandwich) -> Self {
        Self {
            value,
            differential,
            diagnostics: Diagnostics::default(),
        }
    }

    fn with_diagnostics(mut self, diagnostics: Diagnostics) -> Self {
        self.diagnostics = diagnostics;
        self
    }

    /// `Σ A_k B_k` of the differential.
    pub fn derivative(&self) -> Quaternion {
        self.differential.trace()
    }
}

/// The variable itself at `z0`: identity differential.
pub fn lift_var(z0: Quaternion) -> HDual {
    HDual::new(z0, CanonicalSandwich::IDENTITY)
}

/// A constant: zero differential.
pub fn lift_const(c: Quaternion) -> HDual {
    HDual::new(c, CanonicalSandwich::ZERO)
}

pub fn d_add(f: &HDual, g: &HDual) -> HDual {
    HDual::new(f.value + g.value, f.differential.add(&g.differential))
        .with_diagnostics(f.diagnostics.merge(&g.diagnostics))
}

pub fn d_neg(f: &HDual) -> HDual {
    d_scale(-Quaternion::ONE, f, Side::Right)
}

pub fn d_sub(f: &HDual, g: &HDual) -> HDual {
    d_add(f, &d_neg(g))
}

/// `c·f` for [`Side::Left`], `f·c` for [`Side::Right`].
pub fn d_scale(c: Quaternion, f: &HDual, side: Side) -> HDual {
    let (value, differential) = match side {
        Side::Left => (c * f.value, f.differential.scale_left(c)),
        Side::Right => (f.value * c, f.differential.scale_right(c)),
    };
    HDual::new(value, differential).with_diagnostics(f.diagnostics.clone())
}

/// Product rule `h ↦ Df(h)·g + f·Dg(h)`.
pub fn d_mul(f: &HDual, g: &HDual) -> HDual {
    let differential = f
        .differential
        .scale_right(g.value)
        .add(&g.differential.scale_left(f.value));
    HDual::new(f.value * g.value, differential)
        .with_diagnostics(f.diagnostics.merge(&g.diagnostics))
}

/// `1/f` with differential `h ↦ −f⁻¹·Df(h)·f⁻¹`.
pub fn d_inv(f: &HDual) -> Result<HDual> {
    if f.value.is_zero() {
        return Err(Error::domain("inverse of vanishing function"));
    }
    let inv = f.value.inverse()?;
    let differential = f.differential.sandwich_with(-inv, inv);
    Ok(HDual::new(inv, differential).with_diagnostics(f.diagnostics.clone()))
}

/// Integer power by repeated products; negative powers invert afterwards.
pub fn d_pow(f: &HDual, n: i32) -> Result<HDual> {
    if n < 0 {
        if f.value.is_zero() {
            return Err(Error::domain("inverse of vanishing function"));
        }
        return d_inv(&d_pow(f, -n)?);
    }
    if n == 0 {
        return Ok(lift_const(Quaternion::ONE).with_diagnostics(f.diagnostics.clone()));
    }
    let mut acc = f.clone();
    for _ in 1..n {
        acc = d_mul(&acc, f);
    }
    Ok(acc)
}

/// Chain rule: `outer_diff_at_w` is the differential of the outer function at
/// `w = f.value` and `outer_value` its value there.
pub fn d_compose(outer_diff_at_w: &CanonicalSandwich, outer_value: Quaternion, f: &HDual) -> HDual {
    let differential = if f.differential == CanonicalSandwich::IDENTITY {
        *outer_diff_at_w
    } else {
        compose(outer_diff_at_w, &f.differential)
    };
    HDual::new(outer_value, differential).with_diagnostics(f.diagnostics.clone())
}

/// Differential of `exp`, `sin` or `cos` at `w`, truncated at `order`.
pub fn elementary_differential(kind: Elementary, w: Quaternion, order: usize) -> CanonicalSandwich {
    series::increment_form(kind, w, order).canonicalize()
}

/// `exp(f)`, `sin(f)` or `cos(f)`.
pub fn d_elementary(kind: Elementary, f: &HDual, trunc: &SeriesTruncation) -> Result<HDual> {
    let w = f.value;
    let value = series::eval_series(kind, w, trunc)?;
    let outer = elementary_differential(kind, w, value.order);
    let mut out = d_compose(&outer, value.value, f);
    let own = Diagnostics {
        series_order: Some(value.order),
        tail_constant: Some(series::increment_tail_constant(w.norm(), value.order)),
        condition_numbers: Vec::new(),
    };
    out.diagnostics = out.diagnostics.merge(&own);
    Ok(out)
}

/// Product of several HDuals in the given order.
pub fn d_product(factors: &[HDual]) -> Option<HDual> {
    let (first, rest) = factors.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, g| d_mul(&acc, g)))
}

/// Builds an [`HDual`] from an explicit (non-canonical) sandwich form.
pub fn from_form(value: Quaternion, form: &SandwichForm) -> HDual {
    HDual::new(value, form.canonicalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{eval_cos, eval_exp, eval_sin};

    const ONE: Quaternion = Quaternion::ONE;
    const I1: Quaternion = Quaternion::I1;
    const I2: Quaternion = Quaternion::I2;
    const I3: Quaternion = Quaternion::I3;

    fn tr() -> SeriesTruncation {
        SeriesTruncation::default()
    }

    #[test]
    fn lifts() {
        for z0 in [I2, Quaternion::ZERO, Quaternion::new(1.0, -2.0, 0.5, 3.0)] {
            let v = lift_var(z0);
            assert_eq!(v.value, z0);
            assert_eq!(v.derivative(), ONE);
        }
        assert_eq!(lift_const(I3).derivative(), Quaternion::ZERO);
        assert_eq!(lift_const(Quaternion::ZERO).derivative(), Quaternion::ZERO);
        let b = Quaternion::new(2.0, 0.0, -1.0, 1.0);
        let g = d_add(&lift_const(b), &lift_var(I1));
        assert_eq!(g.derivative(), ONE);
    }

    #[test]
    fn add_and_scale() {
        let z = lift_var(I1);
        assert_eq!(d_add(&z, &z).derivative(), Quaternion::real(2.0));
        let f = d_mul(&z, &z);
        let shifted = d_add(&f, &lift_const(Quaternion::new(3.0, 1.0, 1.0, 1.0)));
        assert_eq!(shifted.derivative(), f.derivative());

        let z0 = Quaternion::new(0.3, -1.2, 0.8, 2.0);
        let z = lift_var(z0);
        assert!(d_scale(I1, &z, Side::Left)
            .derivative()
            .approx_eq(I1, 1e-15));
        assert!(d_scale(I1, &z, Side::Right)
            .derivative()
            .approx_eq(I1, 1e-15));
        let r = Quaternion::real(-2.5);
        let f = d_mul(&z, &z);
        let left = d_scale(r, &f, Side::Left);
        let right = d_scale(r, &f, Side::Right);
        assert!(left.value.approx_eq(right.value, 1e-15));
        assert!(left.differential.max_abs_diff(&right.differential) < 1e-14);
    }

    #[test]
    fn product_rule_keeps_order() {
        let z0 = Quaternion::new(0.5, 1.0, -0.4, 0.2);
        let z = lift_var(z0);
        assert!(d_mul(&z, &z).derivative().approx_eq(z0 * 2.0, 1e-14));
        let a = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert!(d_mul(&lift_const(a), &z).derivative().approx_eq(a, 1e-14));

        let z = lift_var(I2);
        let e = d_elementary(Elementary::Exp, &z, &tr()).unwrap();
        let p = d_mul(&z, &e);
        let e_val = eval_exp(I2, &tr()).unwrap();
        assert!(p.derivative().approx_eq(e_val + I2 * e_val, 1e-13));
    }

    #[test]
    fn inverse_rule() {
        let d = d_inv(&lift_var(I1)).unwrap().derivative();
        assert!(d.approx_eq(ONE, 1e-15), "{d}");
        let d = d_inv(&lift_var(Quaternion::real(2.0)))
            .unwrap()
            .derivative();
        assert!(d.approx_eq(Quaternion::real(-0.25), 1e-15));

        let c = Quaternion::new(1.0, 0.5, -2.0, 0.0);
        let z0 = Quaternion::new(0.2, 0.1, 0.7, -1.0);
        let f = d_sub(&lift_const(c), &lift_var(z0));
        let d = d_inv(&f).unwrap().derivative();
        let expect = (c - z0).pow_int(-2).unwrap();
        assert!(d.approx_eq(expect, 1e-14));

        let err = d_inv(&lift_const(Quaternion::ZERO)).unwrap_err();
        assert_eq!(err, Error::Domain("inverse of vanishing function".into()));
    }

    #[test]
    fn power_rule() {
        let z0 = Quaternion::new(0.7, -0.3, 1.1, 0.4);
        let z = lift_var(z0);
        let d = d_pow(&z, 3).unwrap().derivative();
        assert!(d.approx_eq(z0 * z0 * 3.0, 1e-13));
        // m z^(m-1) with m = -2 at i₁: −2·i₁⁻³ = −2·i₁
        let d = d_pow(&lift_var(I1), -2).unwrap().derivative();
        assert!(d.approx_eq(I1 * -2.0, 1e-14), "{d}");
        let f = d_elementary(Elementary::Sin, &z, &tr()).unwrap();
        assert_eq!(d_pow(&f, 1).unwrap(), f);
        assert_eq!(d_pow(&z, 0).unwrap().derivative(), Quaternion::ZERO);
        assert!(d_pow(&lift_var(Quaternion::ZERO), -1).is_err());
    }

    #[test]
    fn elementary_derivatives() {
        let d = d_elementary(Elementary::Exp, &lift_var(Quaternion::ZERO), &tr()).unwrap();
        assert_eq!(d.derivative(), ONE);

        let x = 0.83;
        let d = d_elementary(Elementary::Sin, &lift_var(Quaternion::real(x)), &tr()).unwrap();
        assert!(d.derivative().approx_eq(Quaternion::real(x.cos()), 1e-14));

        let z0 = ONE + I1 + I2;
        let d = d_elementary(Elementary::Exp, &lift_var(z0), &tr()).unwrap();
        assert!(d
            .derivative()
            .approx_eq(eval_exp(z0, &tr()).unwrap(), 1e-10));
        assert!(d.diagnostics.series_order.is_some());

        let t = 1.4;
        let d = d_elementary(Elementary::Cos, &lift_var(I3 * t), &tr()).unwrap();
        assert!(d.derivative().approx_eq(I3 * -t.sinh(), 1e-13));

        let z0 = Quaternion::new(-0.4, 0.9, 0.3, -1.2);
        let z = lift_var(z0);
        let s = d_elementary(Elementary::Sin, &z, &tr())
            .unwrap()
            .derivative();
        let c = d_elementary(Elementary::Cos, &z, &tr())
            .unwrap()
            .derivative();
        assert!(s.approx_eq(eval_cos(z0, &tr()).unwrap(), 1e-13));
        assert!(c.approx_eq(-eval_sin(z0, &tr()).unwrap(), 1e-13));
    }

    #[test]
    fn compose_examples() {
        let z0 = Quaternion::new(0.3, 0.2, -0.5, 0.1);
        let f = d_elementary(Elementary::Exp, &lift_var(z0), &tr()).unwrap();
        let same = d_compose(&CanonicalSandwich::IDENTITY, f.value, &f);
        assert!(same.differential.max_abs_diff(&f.differential) < 1e-15);

        // F(w) = w² at w = f.value
        let w = f.value;
        let outer = SandwichForm::new().with(w, ONE).with(ONE, w).canonicalize();
        let sq = d_compose(&outer, w * w, &f);
        let ew = eval_exp(z0, &tr()).unwrap();
        assert!(sq.derivative().approx_eq(ew * ew * 2.0, 1e-13));
        let via_pow = d_pow(&f, 2).unwrap();
        assert!(sq.derivative().approx_eq(via_pow.derivative(), 1e-13));

        let c = lift_const(Quaternion::new(1.0, 1.0, 0.0, 0.0));
        let out = d_compose(&outer, Quaternion::ONE, &c);
        assert_eq!(out.derivative(), Quaternion::ZERO);
    }
}
