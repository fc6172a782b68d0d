//! Series in `x` whose coefficients are exact polynomials in an auxiliary
//! variable `t` ranging over `[0, 1]`.
//!
//! Truncation applies to `x` only; `t`-polynomials are never truncated
//! (the `t`-degree bound is a sanity cap, and exceeding it is a bug, not a
//! rounding rule). Invariants:
//! - `coeffs.len() == order + 1`; entry `i` is the `t`-polynomial multiplying
//!   `x^i`, exact for `i <= order`.
//! - Every `t`-degree stays `<= t_bound`.

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::series1::Series1;

/// Dense polynomial in `t`, trimmed of trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TPoly(Vec<ExactScalar>);

impl TPoly {
    pub fn zero() -> Self {
        TPoly(Vec::new())
    }

    pub fn constant(c: ExactScalar) -> Self {
        let mut p = TPoly(vec![c]);
        p.trim();
        p
    }

    /// `c * t^d`.
    pub fn monomial(c: ExactScalar, d: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut v = vec![ExactScalar::zero(); d + 1];
        v[d] = c;
        TPoly(v)
    }

    pub fn from_coeffs(coeffs: Vec<ExactScalar>) -> Self {
        let mut p = TPoly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree of the zero polynomial is reported as 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.0
    }

    /// The constant value when `t`-free, otherwise `None`.
    pub fn as_constant(&self) -> Option<ExactScalar> {
        match self.0.len() {
            0 => Some(ExactScalar::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.0.len().max(rhs.0.len());
        let mut out = vec![ExactScalar::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.0.iter().enumerate() {
            out[i] += c;
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        TPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![ExactScalar::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, factor: &ExactScalar) -> Self {
        Self::from_coeffs(self.0.iter().map(|c| c * factor).collect())
    }

    /// Exact integral over `t` in `[0, 1]`.
    pub fn integral_01(&self) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (d, c) in self.0.iter().enumerate() {
            acc += &(c / &ExactScalar::int(d as i64 + 1));
        }
        acc
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MixedSeries {
    coeffs: Vec<TPoly>,
    t_bound: usize,
}

impl MixedSeries {
    pub fn zero(order: usize, t_bound: usize) -> Self {
        MixedSeries {
            coeffs: vec![TPoly::zero(); order + 1],
            t_bound,
        }
    }

    pub fn from_series1(s: &Series1, t_bound: usize) -> Self {
        MixedSeries {
            coeffs: s
                .coeffs()
                .iter()
                .map(|c| TPoly::constant(c.clone()))
                .collect(),
            t_bound,
        }
    }

    /// `s(x) * t^d`.
    pub fn from_series1_t_pow(s: &Series1, d: usize, t_bound: usize) -> Self {
        assert!(d <= t_bound, "t-degree bound exceeded");
        MixedSeries {
            coeffs: s
                .coeffs()
                .iter()
                .map(|c| TPoly::monomial(c.clone(), d))
                .collect(),
            t_bound,
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn t_bound(&self) -> usize {
        self.t_bound
    }

    /// Panics when `i` exceeds the trustworthy order.
    pub fn coeff(&self, i: usize) -> &TPoly {
        assert!(
            i <= self.order(),
            "coefficient x^{i} beyond trustworthy order {}",
            self.order()
        );
        &self.coeffs[i]
    }

    pub fn valuation_bound(&self) -> usize {
        self.coeffs
            .iter()
            .position(|p| !p.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|p| p.is_zero())
    }

    pub fn truncated(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend order");
        MixedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
            t_bound: self.t_bound,
        }
    }

    pub fn truncated_to_at_most(&self, order: usize) -> Self {
        if self.order() > order {
            self.truncated(order)
        } else {
            self.clone()
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].add(&rhs.coeffs[i]))
            .collect();
        MixedSeries {
            coeffs,
            t_bound: self.t_bound,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        MixedSeries {
            coeffs: self.coeffs.iter().map(|p| p.neg()).collect(),
            t_bound: self.t_bound,
        }
    }

    pub fn scale(&self, factor: &ExactScalar) -> Self {
        MixedSeries {
            coeffs: self.coeffs.iter().map(|p| p.scale(factor)).collect(),
            t_bound: self.t_bound,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.t_bound, rhs.t_bound);
        // Above `t_bound` the coefficients would carry `t`-degrees past the
        // declared bound, so the product stops there even when the valuation
        // rule would certify more.
        let order = (self.order() + rhs.valuation_bound())
            .min(rhs.order() + self.valuation_bound())
            .min(self.t_bound);
        let mut coeffs = vec![TPoly::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i > order {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j > order {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        let out = MixedSeries {
            coeffs,
            t_bound: self.t_bound,
        };
        out.assert_t_bound();
        out
    }

    fn assert_t_bound(&self) {
        for p in &self.coeffs {
            assert!(
                p.is_zero() || p.degree() <= self.t_bound,
                "t-degree bound {} exceeded",
                self.t_bound
            );
        }
    }

    /// Multiplicative inverse. Only defined when the `x^0` coefficient is a
    /// nonzero `t`-free constant (the general case has no polynomial inverse).
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0].as_constant().ok_or(Error::NotInvertible)?;
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let order = self.order();
        // self = c0 (1 - s) with x-valuation(s) >= 1.
        let s =
            MixedSeries::from_series1(&Series1::constant(ExactScalar::one(), order), self.t_bound)
                .sub(&self.scale(&inv0));
        let one =
            MixedSeries::from_series1(&Series1::constant(ExactScalar::one(), order), self.t_bound);
        let mut acc = one.clone();
        let mut power = one;
        for _ in 1..=order {
            power = power.mul(&s).truncated_to_at_most(order);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.scale(&inv0))
    }

    /// Integrates every `t`-polynomial coefficient over `[0, 1]` exactly.
    pub fn t_integrate_01(&self) -> Series1 {
        Series1::from_coeffs(self.coeffs.iter().map(|p| p.integral_01()).collect())
    }
}
