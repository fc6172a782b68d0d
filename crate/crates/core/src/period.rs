//! Period of the closed orbits surrounding a tangential center.
//!
//! The orbit through `(x, 0)` spends time `T_sigma(x)` on each side; with
//! the traversal from `x` to `phi(x)` parametrized by `t` in `[0, 1]`,
//!
//! `T_sigma(x) = (phi(x) - x) * integral_0^1 dt / X_sigma(u(t), v(t))`
//!
//! where `u = x + (phi - x) t` and `v` is the arc height at `u`. The total
//! period is `T = delta (T_minus - T_plus)`; its Taylor coefficients are the
//! period constants. All integrands live in `MixedSeries`: the `t`-dependence
//! stays polynomial and is integrated exactly, so every constant is an exact
//! rational.

use crate::error::{Error, Result};
use crate::field::Classification;
use crate::field::{classify, PiecewiseField, Side};
use crate::half_return::{center_check, y_coefficients};
use crate::mixed::MixedSeries;
use crate::scalar::ExactScalar;
use crate::series1::Series1;
use crate::series2::Series2;

/// Signed half-period series and the assembled period constants.
#[derive(Clone, Debug)]
pub struct PeriodData {
    pub t_plus: Series1,
    pub t_minus: Series1,
    pub t: Series1,
    pub t_hat: Vec<ExactScalar>,
    pub order: usize,
}

/// Arc height along the traversal: substitutes the scaled time
/// `sigma delta (phi(x) - x) t` into the flow expansion `sum y_i t^i / i!`.
pub fn scaled_flow_series(
    field: &PiecewiseField,
    class: &Classification,
    side: Side,
    phi: &Series1,
    order: usize,
) -> Result<MixedSeries> {
    assert!(
        phi.order() >= order,
        "map known to lower order than requested"
    );
    assert!(phi.coeff(0).is_zero(), "map must fix the origin");
    let t_bound = order;
    let mut acc = MixedSeries::zero(order, t_bound);
    if order == 0 {
        return Ok(acc);
    }
    let ys = y_coefficients(field, class, side, order)?;
    let s = ExactScalar::int(side.sign() * class.delta);
    let w = phi.sub(&Series1::monomial(ExactScalar::one(), 1, phi.order()));
    let mut w_pow = Series1::constant(ExactScalar::one(), phi.order());
    for (idx, y) in ys.entries.iter().enumerate() {
        let i = idx + 1;
        w_pow = w_pow.mul(&w);
        let c = &s.pow(i as u32) / &ExactScalar::factorial(i);
        let coeff = y.mul(&w_pow).scale(&c);
        debug_assert!(coeff.order() >= order);
        acc = acc.add(&MixedSeries::from_series1_t_pow(&coeff, i, t_bound));
    }
    Ok(acc)
}

/// Evaluates a bivariate series at mixed-series arguments with positive
/// `x`-valuation. Trustworthy through `min(order, series.order())`.
fn evaluate_at_arcs(
    series: &Series2,
    u: &MixedSeries,
    v: &MixedSeries,
    order: usize,
    t_bound: usize,
) -> MixedSeries {
    debug_assert!(u.valuation_bound() >= 1 && v.valuation_bound() >= 1);
    let one = MixedSeries::from_series1(&Series1::constant(ExactScalar::one(), order), t_bound);
    let mut u_pows = vec![one.clone()];
    let mut v_pows = vec![one];
    let mut acc = MixedSeries::zero(order, t_bound);
    for (i, j, c) in series.terms() {
        if i + j > order {
            continue;
        }
        while u_pows.len() <= i {
            let next = u_pows.last().unwrap().mul(u).truncated_to_at_most(order);
            u_pows.push(next);
        }
        while v_pows.len() <= j {
            let next = v_pows.last().unwrap().mul(v).truncated_to_at_most(order);
            v_pows.push(next);
        }
        acc = acc.add(&u_pows[i].mul(&v_pows[j]).scale(c));
    }
    acc
}

/// Signed time spent on one side by the orbit through `(x, 0)`.
pub fn half_period_series(
    field: &PiecewiseField,
    class: &Classification,
    side: Side,
    phi: &Series1,
    order: usize,
) -> Result<Series1> {
    assert!(order >= 1, "period order must be at least 1");
    assert!(
        order <= field.order(),
        "period order exceeds the declared field order"
    );
    let t_bound = order;
    let w = phi.sub(&Series1::monomial(ExactScalar::one(), 1, phi.order()));
    let v = scaled_flow_series(field, class, side, phi, order)?;
    let u = MixedSeries::from_series1(&Series1::monomial(ExactScalar::one(), 1, order), t_bound)
        .add(&MixedSeries::from_series1_t_pow(&w, 1, t_bound));
    let speed = evaluate_at_arcs(field.x_component(side), &u, &v, order, t_bound);
    let integral = speed.reciprocal()?.t_integrate_01();
    Ok(w.mul(&integral).truncated(order))
}

/// Exact period constants through `order`. Refuses fields whose two
/// half-return maps disagree at some index within `order`.
pub fn period_constants(field: &PiecewiseField, order: usize) -> Result<PeriodData> {
    let report = center_check(field, order)?;
    if let Some(n) = report.first_mismatch_index {
        return Err(Error::NotACenter {
            first_mismatch_index: n,
        });
    }
    if order == 0 {
        let zero = Series1::zero(0);
        return Ok(PeriodData {
            t_plus: zero.clone(),
            t_minus: zero.clone(),
            t: zero,
            t_hat: vec![ExactScalar::zero()],
            order,
        });
    }
    let class = classify(field)?;
    let phi = report.phi().expect("mismatch handled above");
    let t_plus = half_period_series(field, &class, Side::Plus, &phi, order)?;
    let t_minus = half_period_series(field, &class, Side::Minus, &phi, order)?;
    let t = t_minus.sub(&t_plus).scale(&ExactScalar::int(class.delta));
    let t_hat: Vec<ExactScalar> = (0..=order).map(|i| t.coeff(i).clone()).collect();
    debug_assert!(t_hat[0].is_zero());
    debug_assert!(t_hat[1].is_positive());
    Ok(PeriodData {
        t_plus,
        t_minus,
        t,
        t_hat,
        order,
    })
}

/// Closed forms for the first two period constants: `T_hat_0 = 0` and
/// `T_hat_1 = 2 delta (X_minus - X_plus) / (X_plus X_minus)` at the origin.
pub fn corollary_values(field: &PiecewiseField) -> Result<(ExactScalar, ExactScalar)> {
    let class = classify(field)?;
    let xp = field.x_component(Side::Plus).coeff(0, 0);
    let xm = field.x_component(Side::Minus).coeff(0, 0);
    let t1 = &(&(&xm - &xp) * &ExactScalar::int(2 * class.delta)) / &(&xp * &xm);
    Ok((ExactScalar::zero(), t1))
}

/// Period of the unit-horizontal-speed reparametrization: `2 (x - phi(x))`.
pub fn tilde_period(phi: &Series1) -> Series1 {
    assert!(phi.order() >= 1, "map must carry at least order 1");
    Series1::monomial(ExactScalar::one(), 1, phi.order())
        .sub(phi)
        .scale(&ExactScalar::int(2))
}
