//! Univariate truncated power series over `ExactScalar`.
//!
//! Invariants:
//! - `coeffs.len() == order + 1`; the coefficient of `x^i` is exact for all
//!   `i <= order` and unknown beyond.
//! - Binary operations return the largest order both operands certify:
//!   `min` of the orders for addition, and the sharper
//!   `min(ord_a + val_b, ord_b + val_a)` for products, where `val` is the
//!   valuation of the known part (order + 1 for a known-zero series).
//! - Coefficient lookup beyond the order panics; it is never silently zero.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Eq)]
pub struct Series1 {
    coeffs: Vec<ExactScalar>,
}

impl Series1 {
    pub fn zero(order: usize) -> Self {
        Series1 {
            coeffs: vec![ExactScalar::zero(); order + 1],
        }
    }

    pub fn constant(value: ExactScalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    /// The series `x`; requires `order >= 1`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(ExactScalar::one(), 1, order)
    }

    /// `value * x^power`; requires `power <= order`.
    pub fn monomial(value: ExactScalar, power: usize, order: usize) -> Self {
        assert!(power <= order, "monomial power exceeds order");
        let mut s = Self::zero(order);
        s.coeffs[power] = value;
        s
    }

    pub fn from_coeffs(coeffs: Vec<ExactScalar>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "series needs at least the constant term"
        );
        Series1 { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Panics when `i` exceeds the trustworthy order.
    pub fn coeff(&self, i: usize) -> &ExactScalar {
        assert!(
            i <= self.order(),
            "coefficient x^{i} beyond trustworthy order {}",
            self.order()
        );
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    /// Index of the first nonzero known coefficient, or `order + 1` when the
    /// known part vanishes identically.
    pub fn valuation_bound(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncated(&self, order: usize) -> Self {
        assert!(
            order <= self.order(),
            "cannot extend order {} to {order}",
            self.order()
        );
        Series1 {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Extends the claimed order with zero coefficients. The caller asserts
    /// the extra coefficients are genuinely zero, not merely unknown.
    pub fn padded(&self, order: usize) -> Self {
        assert!(order >= self.order(), "padding cannot reduce the order");
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, ExactScalar::zero());
        Series1 { coeffs }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] + &rhs.coeffs[i])
            .collect();
        Series1 { coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] - &rhs.coeffs[i])
            .collect();
        Series1 { coeffs }
    }

    pub fn neg(&self) -> Self {
        Series1 {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: &ExactScalar) -> Self {
        Series1 {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order =
            (self.order() + rhs.valuation_bound()).min(rhs.order() + self.valuation_bound());
        let mut coeffs = vec![ExactScalar::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i > order {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j > order {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        Series1 { coeffs }
    }

    /// Exact multiplication by `x^m`; raises the trustworthy order by `m`.
    pub fn mul_xpow(&self, m: usize) -> Self {
        let mut coeffs = vec![ExactScalar::zero(); self.coeffs.len() + m];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i + m] = c.clone();
        }
        Series1 { coeffs }
    }

    /// Division by `x^m`; the first `m` coefficients must vanish.
    pub fn div_xpow(&self, m: usize) -> Result<Self> {
        assert!(m <= self.order(), "divisor power exceeds order");
        if self.coeffs[..m].iter().any(|c| !c.is_zero()) {
            return Err(Error::InconsistentField(format!(
                "series not divisible by x^{m}"
            )));
        }
        Ok(Series1 {
            coeffs: self.coeffs[m..].to_vec(),
        })
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = self.coeffs[0].recip();
        let mut out = vec![ExactScalar::zero(); self.coeffs.len()];
        out[0] = inv0.clone();
        for n in 1..=self.order() {
            let mut acc = ExactScalar::zero();
            for k in 1..=n {
                acc += &(&self.coeffs[k] * &out[n - k]);
            }
            out[n] = -(&acc * &inv0);
        }
        Ok(Series1 { coeffs: out })
    }

    /// Substitution `self(inner(x))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let val = inner.valuation_bound().max(1);
        let order = inner.order().min((self.order() + 1) * val - 1);
        let mut acc = Series1::constant(self.coeffs[self.order()].clone(), order);
        for n in (0..self.order()).rev() {
            acc = acc.mul(&inner.truncated_to_at_most(order));
            acc = acc.truncated_to_at_most(order);
            acc.coeffs[0] = &acc.coeffs[0] + &self.coeffs[n];
        }
        // The multiplications can only keep or grow the certified order;
        // pin the result to the bound derived above.
        Ok(acc.padded_or_truncated(order))
    }

    /// Derivative; loses one order. Panics at order zero.
    pub fn derivative(&self) -> Self {
        assert!(self.order() >= 1, "derivative of an order-0 series");
        let coeffs = (1..=self.order())
            .map(|i| &self.coeffs[i] * &ExactScalar::int(i as i64))
            .collect();
        Series1 { coeffs }
    }

    pub fn derivative_n(&self, n: usize) -> Self {
        let mut s = self.clone();
        for _ in 0..n {
            s = s.derivative();
        }
        s
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64();
        }
        acc
    }

    fn truncated_to_at_most(&self, order: usize) -> Self {
        if self.order() > order {
            self.truncated(order)
        } else {
            self.clone()
        }
    }

    fn padded_or_truncated(&self, order: usize) -> Self {
        if self.order() >= order {
            self.truncated(order)
        } else {
            let mut coeffs = self.coeffs.clone();
            coeffs.resize(order + 1, ExactScalar::zero());
            Series1 { coeffs }
        }
    }
}

impl fmt::Debug for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(coeffs: &[i64]) -> Series1 {
        Series1::from_coeffs(coeffs.iter().map(|&c| ExactScalar::int(c)).collect())
    }

    #[test]
    fn product_of_conjugates() {
        let p = s(&[1, 1, 0]).mul(&s(&[1, -1, 0]));
        assert_eq!(p, s(&[1, 0, -1]));
    }

    #[test]
    fn truncated_exponential_product() {
        // (1 + x + x^2/2)(1 - x + x^2/2) = 1 + 0x + 0x^2 through order 2.
        let half = ExactScalar::ratio(1, 2);
        let a = Series1::from_coeffs(vec![ExactScalar::one(), ExactScalar::one(), half.clone()]);
        let b = Series1::from_coeffs(vec![ExactScalar::one(), ExactScalar::int(-1), half]);
        assert_eq!(a.mul(&b), s(&[1, 0, 0]));
    }

    #[test]
    fn addition_uses_min_order() {
        let sum = s(&[1, 2, 3]).add(&s(&[1, 1]));
        assert_eq!(sum.order(), 1);
        assert_eq!(sum, s(&[2, 3]));
    }

    #[test]
    fn product_order_sharpened_by_valuation() {
        // x * (1 + x): the factor orders are 5 and 1, but the x-shift makes
        // the x^2 coefficient certain.
        let p = s(&[0, 1, 0, 0, 0, 0]).mul(&s(&[1, 1]));
        assert_eq!(p.order(), 2);
        assert_eq!(p, s(&[0, 1, 1]));
    }

    #[test]
    fn reciprocal_of_one_plus_x() {
        let r = s(&[1, 1, 0, 0]).reciprocal().unwrap();
        assert_eq!(r, s(&[1, -1, 1, -1]));
    }

    #[test]
    fn reciprocal_of_constant_two() {
        let r = Series1::constant(ExactScalar::int(2), 3)
            .reciprocal()
            .unwrap();
        assert_eq!(r, Series1::constant(ExactScalar::ratio(1, 2), 3));
    }

    #[test]
    fn reciprocal_requires_unit_constant_term() {
        assert_eq!(s(&[0, 1]).reciprocal(), Err(Error::NotInvertible));
    }

    #[test]
    fn reciprocal_is_two_sided_inverse() {
        let a = Series1::from_coeffs(vec![
            ExactScalar::ratio(3, 2),
            ExactScalar::int(-1),
            ExactScalar::ratio(2, 7),
            ExactScalar::int(5),
        ]);
        let prod = a.mul(&a.reciprocal().unwrap());
        assert_eq!(prod, s(&[1, 0, 0, 0]));
    }

    #[test]
    fn composition_hand_expansion() {
        // (x + x^2) o (x + x^2) = x + 2x^2 + 2x^3 through order 3.
        let f = s(&[0, 1, 1, 0]);
        assert_eq!(f.compose(&f).unwrap(), s(&[0, 1, 2, 2]));
    }

    #[test]
    fn composition_with_identity() {
        let f = s(&[0, 3, -2, 5]);
        assert_eq!(f.compose(&Series1::identity(3)).unwrap(), f);
    }

    #[test]
    fn composition_rejects_constant_shift() {
        let f = s(&[1, 1]);
        assert_eq!(f.compose(&s(&[1, 1])), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn composition_order_capped_by_outer_knowledge() {
        // outer known through x^1 only; inner exact through x^5 with val 1:
        // unknown outer tail enters at x^2.
        let outer = s(&[4, 1]);
        let inner = s(&[0, 1, 0, 0, 0, 0]);
        let c = outer.compose(&inner).unwrap();
        assert_eq!(c.order(), 1);
        assert_eq!(c, s(&[4, 1]));
    }

    #[test]
    #[should_panic(expected = "beyond trustworthy order")]
    fn coefficient_beyond_order_panics() {
        let _ = s(&[1, 2]).coeff(2);
    }

    #[test]
    fn shift_and_divide() {
        let f = s(&[2, 3]);
        let shifted = f.mul_xpow(2);
        assert_eq!(shifted.order(), 3);
        assert_eq!(shifted, s(&[0, 0, 2, 3]));
        assert_eq!(shifted.div_xpow(2).unwrap(), f);
        assert!(s(&[1, 0, 2]).div_xpow(1).is_err());
    }

    #[test]
    fn derivative_drops_an_order() {
        let d = s(&[7, 1, 3, 5]).derivative();
        assert_eq!(d, s(&[1, 6, 15]));
        assert_eq!(s(&[1, 2, 3]).derivative_n(2), s(&[6]));
    }

    #[test]
    fn evaluation_in_floats() {
        assert_eq!(s(&[1, -2, 1]).eval_f64(0.5), 0.25);
    }

    #[test]
    fn valuation_of_zero_series_is_order_plus_one() {
        assert_eq!(Series1::zero(4).valuation_bound(), 5);
        assert_eq!(s(&[0, 0, 7]).valuation_bound(), 2);
    }
}
