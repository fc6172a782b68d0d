//! Piecewise-smooth planar fields split along `y = 0` and the classification
//! of the tangency both half-fields have at the origin.
//!
//! A field is accepted when the origin is an invisible odd-order tangency of
//! both half-fields and the two `X` components push crossings in opposite
//! directions, so every small orbit crosses the line twice and first returns.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::series1::Series1;
use crate::series2::Series2;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    /// `+1` on the upper half-plane, `-1` on the lower.
    pub fn sign(self) -> i64 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        }
    }

    pub fn both() -> [Side; 2] {
        [Side::Plus, Side::Minus]
    }
}

/// The two half-fields, each trustworthy through total degree `order`.
#[derive(Clone, Debug)]
pub struct PiecewiseField {
    order: usize,
    x_plus: Series2,
    y_plus: Series2,
    x_minus: Series2,
    y_minus: Series2,
}

impl PiecewiseField {
    pub fn new(
        order: usize,
        x_plus: Series2,
        y_plus: Series2,
        x_minus: Series2,
        y_minus: Series2,
    ) -> Result<Self> {
        for s in [&x_plus, &y_plus, &x_minus, &y_minus] {
            if s.order() < order {
                return Err(Error::Document(format!(
                    "component known only to order {}, field declared to order {order}",
                    s.order()
                )));
            }
        }
        Ok(PiecewiseField {
            order,
            x_plus: x_plus.truncated(order),
            y_plus: y_plus.truncated(order),
            x_minus: x_minus.truncated(order),
            y_minus: y_minus.truncated(order),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn x_component(&self, side: Side) -> &Series2 {
        match side {
            Side::Plus => &self.x_plus,
            Side::Minus => &self.x_minus,
        }
    }

    pub fn y_component(&self, side: Side) -> &Series2 {
        match side {
            Side::Plus => &self.y_plus,
            Side::Minus => &self.y_minus,
        }
    }
}

/// Outcome of the admissibility checks at the origin.
///
/// `k_plus`/`k_minus` are the contact orders: the restriction of each `Y`
/// component to `y = 0` starts at degree `2k - 1`. `delta` is the sign of
/// `X` above the line, and `a_plus`/`a_minus` are the leading coefficients
/// of the normalized fields; `a * delta < 0` always holds here.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub k_plus: usize,
    pub k_minus: usize,
    pub delta: i64,
    pub a_plus: ExactScalar,
    pub a_minus: ExactScalar,
}

impl Classification {
    pub fn k(&self, side: Side) -> usize {
        match side {
            Side::Plus => self.k_plus,
            Side::Minus => self.k_minus,
        }
    }

    pub fn a(&self, side: Side) -> &ExactScalar {
        match side {
            Side::Plus => &self.a_plus,
            Side::Minus => &self.a_minus,
        }
    }
}

/// Checks, in order: odd invisible tangency on each side, then opposite
/// sliding directions. Each rejection names the side and the failed check.
pub fn classify(field: &PiecewiseField) -> Result<Classification> {
    let mut k = [0usize; 2];
    let mut lead = [ExactScalar::zero(), ExactScalar::zero()];
    let mut x0 = [ExactScalar::zero(), ExactScalar::zero()];

    for (slot, side) in Side::both().into_iter().enumerate() {
        let xc = field.x_component(side).coeff(0, 0);
        if xc.is_zero() {
            return Err(Error::NotTangential {
                side: side.label(),
                detail: "X vanishes at the origin".into(),
            });
        }
        let y_line = field.y_component(side).restrict_y0();
        if !y_line.coeff(0).is_zero() {
            return Err(Error::NotTangential {
                side: side.label(),
                detail: "Y does not vanish at the origin".into(),
            });
        }
        let m = y_line.valuation_bound();
        if m > field.order() {
            return Err(Error::NotTangential {
                side: side.label(),
                detail: format!(
                    "Y vanishes identically on y = 0 through order {}",
                    field.order()
                ),
            });
        }
        if m.is_multiple_of(2) {
            return Err(Error::NotTangential {
                side: side.label(),
                detail: format!("contact has even order {m}"),
            });
        }
        k[slot] = m.div_ceil(2);
        lead[slot] = y_line.coeff(m).clone();
        x0[slot] = xc;
    }

    // Invisible tangency: the half-orbit through the contact point stays on
    // its own side, which fixes the sign of X * (leading Y coefficient).
    if (&x0[0] * &lead[0]).is_positive() {
        return Err(Error::VisibleContact { side: "plus" });
    }
    if (&x0[1] * &lead[1]).is_negative() {
        return Err(Error::VisibleContact { side: "minus" });
    }
    if !(&x0[0] * &x0[1]).is_negative() {
        return Err(Error::NoFirstReturn);
    }

    let delta = x0[0].signum();
    let a_plus = &lead[0] / &x0[0].abs();
    let a_minus = &lead[1] / &x0[1].abs();
    debug_assert!(&a_plus * &ExactScalar::int(delta) < ExactScalar::zero());
    debug_assert!(&a_minus * &ExactScalar::int(delta) < ExactScalar::zero());
    Ok(Classification {
        k_plus: k[0],
        k_minus: k[1],
        delta,
        a_plus,
        a_minus,
    })
}

/// Normalized scalar field whose flow, after straightening time so that the
/// horizontal speed is exactly `1`, carries the chosen half-field: the graph
/// slope field `eta = sign * delta * Y / X` with `sign = +1` above the line.
pub fn eta_series(field: &PiecewiseField, class: &Classification, side: Side) -> Result<Series2> {
    let x = field.x_component(side);
    let y = field.y_component(side);
    let sign = ExactScalar::int(side.sign() * class.delta);
    Ok(y.mul(&x.reciprocal()?).scale(&sign))
}

/// Splits `eta(x, y) = a x^{2k-1} + x^{2k} f(x) + y g(x, y)`.
///
/// `f` is trustworthy through order `N - 2k` and `g` through `N - 1`.
pub fn fg_series(
    field: &PiecewiseField,
    class: &Classification,
    side: Side,
) -> Result<(Series1, Series2)> {
    let eta = eta_series(field, class, side)?;
    let on_line = eta.restrict_y0();
    let two_k = 2 * class.k(side);
    let lead = Series1::monomial(class.a(side).clone(), two_k - 1, on_line.order());
    let f = on_line.sub(&lead).div_xpow(two_k)?;
    let g = eta.sub(&Series2::from_series1_x(&on_line)).div_y()?;
    Ok((f, g))
}

/// Rescales time on each side so the horizontal speed is exactly `1`: the
/// result is `(delta, eta_plus)` above the line and `(-delta, eta_minus)`
/// below it. Orbits, half-return maps, and the classification data other
/// than flight times are unchanged.
pub fn reparametrized_field(
    field: &PiecewiseField,
    class: &Classification,
) -> Result<PiecewiseField> {
    let n = field.order();
    let speed = |v: i64| Series2::constant(ExactScalar::int(v), n);
    PiecewiseField::new(
        n,
        speed(class.delta),
        eta_series(field, class, Side::Plus)?,
        speed(-class.delta),
        eta_series(field, class, Side::Minus)?,
    )
}

/// On-disk field description: total-degree order plus sparse coefficient
/// lists `[i, j, "p/q"]` for the four components.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDocument {
    pub order: usize,
    pub plus: ComponentPair,
    pub minus: ComponentPair,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentPair {
    #[serde(rename = "X")]
    pub x: Vec<(usize, usize, String)>,
    #[serde(rename = "Y")]
    pub y: Vec<(usize, usize, String)>,
}

fn component_series(terms: &[(usize, usize, String)], order: usize) -> Result<Series2> {
    let mut parsed = Vec::with_capacity(terms.len());
    for (i, j, text) in terms {
        let value = ExactScalar::parse(text).map_err(|_| {
            Error::Document(format!("term x^{i} y^{j}: bad rational literal {text:?}"))
        })?;
        parsed.push((*i, *j, value));
    }
    Series2::from_terms(parsed, order)
}

impl PiecewiseField {
    pub fn from_document(doc: &FieldDocument) -> Result<Self> {
        PiecewiseField::new(
            doc.order,
            component_series(&doc.plus.x, doc.order)?,
            component_series(&doc.plus.y, doc.order)?,
            component_series(&doc.minus.x, doc.order)?,
            component_series(&doc.minus.y, doc.order)?,
        )
    }
}

/// Parses the JSON field document format.
pub fn load_field(json: &str) -> Result<PiecewiseField> {
    let doc: FieldDocument =
        serde_json::from_str(json).map_err(|e| Error::Document(e.to_string()))?;
    PiecewiseField::from_document(&doc)
}
