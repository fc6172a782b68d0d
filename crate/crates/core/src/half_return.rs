//! Half-return maps of the two half-fields, computed through exact series
//! recursions.
//!
//! The arc of the side-`sigma` half-field through `(x, 0)` is the graph of
//! `t -> (x + s t, y(t, x))` with `s = sigma * delta`, where `y` solves
//! `dy/dt = eta(x + s t, y)`, `y(0) = 0`. Writing `y = sum y_i(x) t^i / i!`
//! gives a recursion for the `y_i`; evaluating the arc where it crosses the
//! vertical axis gives the crossing-height series `mu`; solving
//! `mu(phi(x)) = mu(x)` coefficient by coefficient gives the half-return map
//! `phi = sum alpha_n x^n`, an involution with `alpha_1 = -1`.
//!
//! Trustworthy orders, for a field declared through total degree `N`:
//! `y_i` through `N - i + 1`, `mu_i` for `i <= N + 1`, and `alpha_n` for
//! `n <= N + 2 - 2k` on a side with contact order `k`.

use crate::bell::{ordinary_bell, partial_bell};
use crate::error::{Error, Result};
use crate::field::{classify, fg_series, Classification, PiecewiseField, Side};
use crate::scalar::ExactScalar;
use crate::series1::Series1;

/// Coefficient functions `y_1 .. y_M` of the arc expansion on one side.
/// Entry `i - 1` holds `y_i`, trustworthy through order `N - i + 1`.
#[derive(Clone, Debug)]
pub struct FlowYSeries {
    pub side: Side,
    pub entries: Vec<Series1>,
}

impl FlowYSeries {
    pub fn depth(&self) -> usize {
        self.entries.len()
    }
}

/// Runs the `y_i` recursion to the requested depth.
pub fn y_coefficients(
    field: &PiecewiseField,
    class: &Classification,
    side: Side,
    depth: usize,
) -> Result<FlowYSeries> {
    let n = field.order();
    if depth > n + 1 {
        return Err(Error::DepthTooLarge {
            requested: depth,
            order: n,
            max: n + 1,
        });
    }
    let k = class.k(side);
    let two_k = 2 * k;
    let a = class.a(side);
    let s = ExactScalar::int(side.sign() * class.delta);
    let (f, g) = fg_series(field, class, side)?;

    let mut entries: Vec<Series1> = Vec::with_capacity(depth);
    for i in 1..=depth {
        let target = n + 1 - i;
        let s_pow = s.pow((i - 1) as u32);
        let mut acc = Series1::zero(target);

        // d^{i-1}/dx^{i-1} of the tangential part a x^{2k-1} + x^{2k} f(x),
        // transported along the moving point (factor s^{i-1}).
        if i <= two_k {
            let c = &(a * &ExactScalar::falling_factorial(two_k - 1, i - 1)) * &s_pow;
            acc = acc.add(&Series1::monomial(c, two_k - i, target));
        }
        for l in 0..=(i - 1).min(two_k) {
            let d = i - 1 - l;
            if d > f.order() {
                // The term sits at valuation 2k - l, beyond the target order.
                debug_assert!(two_k - l > target);
                continue;
            }
            let c = &(&ExactScalar::binomial(i - 1, l) * &ExactScalar::falling_factorial(two_k, l))
                * &s_pow;
            let term = f.derivative_n(d).mul_xpow(two_k - l).scale(&c);
            debug_assert!(term.order() == target);
            acc = acc.add(&term);
        }

        // Contribution of the y-dependent part y g(x, y), by Leibniz in t and
        // the power-of-a-series rule written with partial Bell polynomials.
        for l in 1..=i.saturating_sub(1) {
            let c_l = &ExactScalar::binomial(i - 1, l) * &s.pow((i - 1 - l) as u32);
            for j in 1..=l {
                let bell = partial_bell(l, j, &entries[..(l - j + 1)])?;
                let g_der = g.partial_at_y0(i - 1 - l, j - 1);
                let c = &c_l * &ExactScalar::int(j as i64);
                let term = bell.mul(&g_der).scale(&c);
                debug_assert!(term.order() >= target);
                acc = acc.add(&term);
            }
        }

        debug_assert!(acc.order() == target);
        entries.push(acc);
    }
    Ok(FlowYSeries { side, entries })
}

/// Heights at which the arcs through `(x, 0)` cross the vertical axis:
/// `mu(x) = y(-s x, x)`, returned as the list `mu_1 .. mu_M`.
pub fn mu_coefficients(ys: &FlowYSeries, delta: i64) -> Vec<ExactScalar> {
    if ys.entries.is_empty() {
        return Vec::new();
    }
    let n = ys.entries[0].order();
    let depth = ys.entries.len();
    let sign = ExactScalar::int(-(ys.side.sign() * delta));
    let mut acc = Series1::zero(n + 1);
    for (idx, y) in ys.entries.iter().enumerate() {
        let j = idx + 1;
        let c = &sign.pow(j as u32) / &ExactScalar::factorial(j);
        acc = acc.add(&y.mul_xpow(j).scale(&c));
    }
    (1..=depth).map(|i| acc.coeff(i).clone()).collect()
}

/// Solves `mu(phi(x)) = mu(x)` for the coefficients of `phi`, starting from
/// `alpha_1 = -1`. `mu` is the list `mu_1 ..` and must reach index
/// `order + 2k - 1`.
pub fn alpha_coefficients(mu: &[ExactScalar], k: usize, order: usize) -> Result<Vec<ExactScalar>> {
    if order == 0 {
        return Ok(Vec::new());
    }
    let two_k = 2 * k;
    assert!(
        mu.len() >= order + two_k - 1,
        "need mu through index {}, have {}",
        order + two_k - 1,
        mu.len()
    );
    for (idx, value) in mu.iter().enumerate().take(two_k - 1) {
        if !value.is_zero() {
            return Err(Error::InconsistentField(format!(
                "crossing-height coefficient mu_{} is nonzero below index 2k = {two_k}",
                idx + 1
            )));
        }
    }
    let mu_lead = &mu[two_k - 1];
    if mu_lead.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    let denom = &ExactScalar::int(2 * k as i64) * mu_lead;

    let mut alpha = vec![ExactScalar::int(-1)];
    for n in 2..=order {
        let p_idx = n + two_k - 1;
        // The n-th coefficient of mu(phi) splits into the part already
        // determined by alpha_1 .. alpha_{n-1} and a single -2k mu_{2k}
        // alpha_n term; padding the argument list with a zero removes the
        // unknown from the leading Bell polynomial.
        let mut padded = alpha.clone();
        padded.push(ExactScalar::zero());
        let mut known = mu_lead * &ordinary_bell(p_idx, two_k, &padded)?;
        for i in (two_k + 1)..=p_idx {
            let args = &alpha[..(p_idx - i + 1)];
            known = &known + &(&mu[i - 1] * &ordinary_bell(p_idx, i, args)?);
        }
        alpha.push(&(&known - &mu[p_idx - 1]) / &denom);
    }
    Ok(alpha)
}

/// Exact half-return data for one side: crossing heights and map
/// coefficients, trustworthy through `order`.
#[derive(Clone, Debug)]
pub struct HalfReturnData {
    pub side: Side,
    pub k: usize,
    pub mu: Vec<ExactScalar>,
    pub alpha: Vec<ExactScalar>,
    pub order: usize,
}

impl HalfReturnData {
    /// The half-return map `phi(x) = sum alpha_n x^n` as a series.
    pub fn map(&self) -> Series1 {
        let mut coeffs = vec![ExactScalar::zero()];
        coeffs.extend(self.alpha.iter().cloned());
        Series1::from_coeffs(coeffs)
    }
}

/// Full chain for one side. The map order is capped by the declared field
/// order: `order <= N + 2 - 2k`.
pub fn half_return_data(
    field: &PiecewiseField,
    class: &Classification,
    side: Side,
    order: usize,
) -> Result<HalfReturnData> {
    let k = class.k(side);
    let max = field.order() + 2 - 2 * k;
    if order > max {
        return Err(Error::InsufficientOrder {
            requested: order,
            order: field.order(),
            max,
        });
    }
    let depth = order + 2 * k - 1;
    let ys = y_coefficients(field, class, side, depth)?;
    let mu = mu_coefficients(&ys, class.delta);
    let alpha = alpha_coefficients(&mu, k, order)?;
    Ok(HalfReturnData {
        side,
        k,
        mu,
        alpha,
        order,
    })
}

/// Side-by-side comparison of the two half-return maps.
#[derive(Clone, Debug)]
pub struct CenterReport {
    pub order: usize,
    pub first_mismatch_index: Option<usize>,
    pub plus: HalfReturnData,
    pub minus: HalfReturnData,
}

impl CenterReport {
    pub fn is_center(&self) -> bool {
        self.first_mismatch_index.is_none()
    }

    /// The common map when both sides agree through the checked order.
    pub fn phi(&self) -> Option<Series1> {
        self.is_center().then(|| self.plus.map())
    }
}

/// Computes both half-return maps through `order` and reports the first
/// coefficient where they differ, if any.
pub fn center_check(field: &PiecewiseField, order: usize) -> Result<CenterReport> {
    let class = classify(field)?;
    let plus = half_return_data(field, &class, Side::Plus, order)?;
    let minus = half_return_data(field, &class, Side::Minus, order)?;
    let first_mismatch_index = plus
        .alpha
        .iter()
        .zip(&minus.alpha)
        .position(|(p, m)| p != m)
        .map(|idx| idx + 1);
    Ok(CenterReport {
        order,
        first_mismatch_index,
        plus,
        minus,
    })
}

/// `phi(phi(x)) - x`. A genuine half-return map is an involution, so this
/// must vanish through the trustworthy order.
pub fn involution_defect(phi: &Series1) -> Result<Series1> {
    if phi.order() < 1 || !phi.coeff(0).is_zero() || *phi.coeff(1) != ExactScalar::int(-1) {
        return Err(Error::NotHalfReturnShaped);
    }
    let composed = phi.compose(phi)?;
    Ok(composed.sub(&Series1::monomial(ExactScalar::one(), 1, composed.order())))
}
