//! Arbitrary-precision rational scalars.
//!
//! Every coefficient in this crate is an `ExactScalar`: a reduced fraction
//! with positive denominator. Backed by `num_rational::BigRational`, which
//! maintains both invariants on construction.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        ExactScalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// Panics if `den == 0`; intended for literal values in code and tests.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ExactScalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Document("zero denominator in rational".into()));
        }
        Ok(ExactScalar(BigRational::new(num, den)))
    }

    /// Parses `"p/q"` or a bare integer `"p"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (num_txt, den_txt) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num = BigInt::from_str(num_txt)
            .map_err(|_| Error::Document(format!("unreadable rational {text:?}")))?;
        let den = BigInt::from_str(den_txt)
            .map_err(|_| Error::Document(format!("unreadable rational {text:?}")))?;
        Self::from_big(num, den)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn signum(&self) -> i64 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        ExactScalar(self.0.abs())
    }

    /// Panics on zero; callers check first.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero scalar");
        ExactScalar(self.0.recip())
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc *= self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("rational out of f64 range")
    }

    /// n! as a scalar.
    pub fn factorial(n: usize) -> Self {
        ExactScalar(BigRational::from_integer(factorial_int(n)))
    }

    /// Binomial coefficient C(n, k); zero when k > n.
    pub fn binomial(n: usize, k: usize) -> Self {
        ExactScalar(BigRational::from_integer(binomial_int(n, k)))
    }

    /// Falling factorial n! / (n - l)!; panics when l > n.
    pub fn falling_factorial(n: usize, l: usize) -> Self {
        assert!(l <= n, "falling factorial out of range");
        let mut acc = BigInt::one();
        for v in (n - l + 1)..=n {
            acc *= BigInt::from(v);
        }
        ExactScalar(BigRational::from_integer(acc))
    }
}

fn factorial_int(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for v in 2..=n {
        acc *= BigInt::from(v);
    }
    acc
}

fn binomial_int(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                ExactScalar(&self.0 $op &rhs.0)
            }
        }
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar(self.0 $op rhs.0)
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                ExactScalar(self.0 $op &rhs.0)
            }
        }
    };
}

binary_op!(Add, add, +);
binary_op!(Sub, sub, -);
binary_op!(Mul, mul, *);

impl Div for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        assert!(!rhs.is_zero(), "division by zero scalar");
        ExactScalar(&self.0 / &rhs.0)
    }
}

impl Div for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        (&self).div(&rhs)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-&self.0)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        self.0 *= &rhs.0;
    }
}
