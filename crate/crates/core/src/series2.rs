//! Bivariate truncated power series over `ExactScalar`.
//!
//! Truncation is by total degree: the coefficient of `x^i y^j` is exact for
//! `i + j <= order` and unknown beyond. Invariants:
//! - All stored keys satisfy `i + j <= order`; no key maps to zero.
//! - Coefficient lookup beyond the order panics; it is never silently zero.
//! - Products use the valuation-sharpened order rule on total degree.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::series1::Series1;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series2 {
    coeffs: BTreeMap<(usize, usize), ExactScalar>,
    order: usize,
}

impl Series2 {
    pub fn zero(order: usize) -> Self {
        Series2 {
            coeffs: BTreeMap::new(),
            order,
        }
    }

    pub fn constant(value: ExactScalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.insert(0, 0, value);
        s
    }

    /// Builds from `(i, j, coefficient)` terms, validating degrees and
    /// rejecting duplicates.
    pub fn from_terms(terms: Vec<(usize, usize, ExactScalar)>, order: usize) -> Result<Self> {
        let mut s = Self::zero(order);
        for (i, j, c) in terms {
            if i + j > order {
                return Err(Error::Document(format!(
                    "term x^{i} y^{j} exceeds declared order {order}"
                )));
            }
            if s.coeffs.contains_key(&(i, j)) {
                return Err(Error::Document(format!(
                    "duplicate coefficient for x^{i} y^{j}"
                )));
            }
            s.insert(i, j, c);
        }
        Ok(s)
    }

    /// Embeds a univariate series as a function of `x` alone.
    pub fn from_series1_x(s: &Series1) -> Self {
        let mut out = Self::zero(s.order());
        for (i, c) in s.coeffs().iter().enumerate() {
            out.insert(i, 0, c.clone());
        }
        out
    }

    fn insert(&mut self, i: usize, j: usize, value: ExactScalar) {
        debug_assert!(i + j <= self.order);
        if value.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), value);
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &ExactScalar)> {
        self.coeffs.iter().map(|(&(i, j), c)| (i, j, c))
    }

    /// Panics when `i + j` exceeds the trustworthy order.
    pub fn coeff(&self, i: usize, j: usize) -> ExactScalar {
        assert!(
            i + j <= self.order,
            "coefficient x^{i} y^{j} beyond trustworthy order {}",
            self.order
        );
        self.coeffs
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    /// Minimum total degree of the known nonzero part, or `order + 1`.
    pub fn valuation_bound(&self) -> usize {
        self.coeffs
            .keys()
            .map(|&(i, j)| i + j)
            .min()
            .unwrap_or(self.order + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order, "cannot extend order");
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&(i, j), _)| i + j <= order)
            .map(|(&k, c)| (k, c.clone()))
            .collect();
        Series2 { coeffs, order }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut out = self.truncated(order);
        for (&(i, j), c) in &rhs.coeffs {
            if i + j <= order {
                let v = out.coeff(i, j) + c;
                out.insert(i, j, v);
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Series2 {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, factor: &ExactScalar) -> Self {
        if factor.is_zero() {
            return Self::zero(self.order);
        }
        Series2 {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, c * factor)).collect(),
            order: self.order,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = (self.order + rhs.valuation_bound()).min(rhs.order + self.valuation_bound());
        let mut out = Self::zero(order);
        for (&(ia, ja), a) in &self.coeffs {
            for (&(ib, jb), b) in &rhs.coeffs {
                let (i, j) = (ia + ib, ja + jb);
                if i + j <= order {
                    let v = out.coeff(i, j) + &(a * b);
                    out.insert(i, j, v);
                }
            }
        }
        out
    }

    /// Multiplicative inverse; requires a nonzero value at the origin.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeff(0, 0);
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        // self = c0 (1 - s) with val(s) >= 1; invert by geometric series.
        let s = Series2::constant(ExactScalar::one(), self.order).sub(&self.scale(&inv0));
        let mut acc = Series2::constant(ExactScalar::one(), self.order);
        let mut power = Series2::constant(ExactScalar::one(), self.order);
        for _ in 1..=self.order {
            power = power.mul(&s).truncated_to_at_most(self.order);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.scale(&inv0))
    }

    /// Restriction to the switching line `y = 0`.
    pub fn restrict_y0(&self) -> Series1 {
        let mut coeffs = vec![ExactScalar::zero(); self.order + 1];
        for (&(i, j), c) in &self.coeffs {
            if j == 0 {
                coeffs[i] = c.clone();
            }
        }
        Series1::from_coeffs(coeffs)
    }

    /// `(d^{a+b} / dx^a dy^b) self` restricted to `y = 0`, as a series in x.
    /// Requires `a + b <= order`.
    pub fn partial_at_y0(&self, a: usize, b: usize) -> Series1 {
        assert!(
            a + b <= self.order,
            "partial derivative order {a}+{b} beyond trustworthy order {}",
            self.order
        );
        let ord = self.order - a - b;
        let mut coeffs = vec![ExactScalar::zero(); ord + 1];
        let b_fact = ExactScalar::factorial(b);
        for (&(i, j), c) in &self.coeffs {
            if j == b && i >= a && i - a <= ord {
                let fall = ExactScalar::falling_factorial(i, a);
                coeffs[i - a] = c * &fall * &b_fact;
            }
        }
        Series1::from_coeffs(coeffs)
    }

    /// Division by `y`; every pure-x coefficient must vanish.
    pub fn div_y(&self) -> Result<Self> {
        if self.coeffs.keys().any(|&(_, j)| j == 0) {
            return Err(Error::InconsistentField("series not divisible by y".into()));
        }
        assert!(self.order >= 1, "division by y at order 0");
        let mut out = Self::zero(self.order - 1);
        for (&(i, j), c) in &self.coeffs {
            out.insert(i, j - 1, c.clone());
        }
        Ok(out)
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (&(i, j), c) in &self.coeffs {
            acc += c.to_f64() * x.powi(i as i32) * y.powi(j as i32);
        }
        acc
    }

    fn truncated_to_at_most(&self, order: usize) -> Self {
        if self.order > order {
            self.truncated(order)
        } else {
            self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(ts: &[(usize, usize, i64)], order: usize) -> Series2 {
        Series2::from_terms(
            ts.iter()
                .map(|&(i, j, c)| (i, j, ExactScalar::int(c)))
                .collect(),
            order,
        )
        .unwrap()
    }

    #[test]
    fn construction_validates_degrees_and_duplicates() {
        assert!(Series2::from_terms(vec![(2, 1, ExactScalar::one())], 2).is_err());
        assert!(Series2::from_terms(
            vec![(0, 0, ExactScalar::one()), (0, 0, ExactScalar::one())],
            2
        )
        .is_err());
    }

    #[test]
    fn product_and_order_rule() {
        // (x + y)(x - y) = x^2 - y^2.
        let p = terms(&[(1, 0, 1), (0, 1, 1)], 3).mul(&terms(&[(1, 0, 1), (0, 1, -1)], 3));
        assert_eq!(p.coeff(2, 0), ExactScalar::one());
        assert_eq!(p.coeff(0, 2), ExactScalar::int(-1));
        assert_eq!(p.coeff(1, 1), ExactScalar::zero());
        // orders 3, valuations 1: certified through total degree 4.
        assert_eq!(p.order(), 4);
    }

    #[test]
    fn reciprocal_against_hand_expansion() {
        // 1 / (2 + x) = 1/2 - x/4 + x^2/8 - ...
        let r = terms(&[(0, 0, 2), (1, 0, 1)], 2).reciprocal().unwrap();
        assert_eq!(r.coeff(0, 0), ExactScalar::ratio(1, 2));
        assert_eq!(r.coeff(1, 0), ExactScalar::ratio(-1, 4));
        assert_eq!(r.coeff(2, 0), ExactScalar::ratio(1, 8));
        let prod = terms(&[(0, 0, 2), (1, 0, 1)], 2).mul(&r).truncated(2);
        assert_eq!(prod, Series2::constant(ExactScalar::one(), 2));
    }

    #[test]
    fn reciprocal_requires_nonzero_origin() {
        assert_eq!(
            terms(&[(1, 0, 1)], 2).reciprocal(),
            Err(Error::NotInvertible)
        );
    }

    #[test]
    fn restriction_to_switching_line() {
        let s = terms(&[(0, 0, 3), (2, 0, -1), (1, 1, 5)], 3);
        let r = s.restrict_y0();
        assert_eq!(r.order(), 3);
        assert_eq!(r.coeff(0), &ExactScalar::int(3));
        assert_eq!(r.coeff(2), &ExactScalar::int(-1));
        assert_eq!(r.coeff(1), &ExactScalar::zero());
    }

    #[test]
    fn mixed_partial_on_the_line() {
        // s = x^2 y: d/dx d/dy at y=0 is 2x.
        let s = terms(&[(2, 1, 1)], 3);
        let d = s.partial_at_y0(1, 1);
        assert_eq!(d.order(), 1);
        assert_eq!(d.coeff(1), &ExactScalar::int(2));
        // d^2/dy^2 of x^2 y vanishes.
        assert!(s.partial_at_y0(0, 2).is_zero());
    }

    #[test]
    fn division_by_y() {
        let s = terms(&[(1, 1, 4), (0, 2, -2)], 3);
        let q = s.div_y().unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(q.coeff(1, 0), ExactScalar::int(4));
        assert_eq!(q.coeff(0, 1), ExactScalar::int(-2));
        assert!(terms(&[(1, 0, 1)], 2).div_y().is_err());
    }

    #[test]
    #[should_panic(expected = "beyond trustworthy order")]
    fn coefficient_beyond_order_panics() {
        let _ = terms(&[(0, 0, 1)], 2).coeff(2, 1);
    }

    #[test]
    fn float_evaluation() {
        let s = terms(&[(0, 0, 1), (1, 0, -2), (1, 1, 3)], 2);
        assert_eq!(s.eval_f64(0.5, 2.0), 1.0 - 1.0 + 3.0);
    }
}
