//! Gaussian rationals: exact complex arithmetic for the oracle paths.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::polynomials::rational_to_f64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplexRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; panics on zero like rational division does.
    pub fn inv(&self) -> Self {
        let d = self.norm_sqr();
        Self::new(&self.re / &d, -(&self.im / &d))
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(&self.re * c, &self.im * c)
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl Add for &ExactComplexRational {
    type Output = ExactComplexRational;
    fn add(self, rhs: Self) -> ExactComplexRational {
        ExactComplexRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &ExactComplexRational {
    type Output = ExactComplexRational;
    fn sub(self, rhs: Self) -> ExactComplexRational {
        ExactComplexRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &ExactComplexRational {
    type Output = ExactComplexRational;
    fn mul(self, rhs: Self) -> ExactComplexRational {
        ExactComplexRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for &ExactComplexRational {
    type Output = ExactComplexRational;
    fn div(self, rhs: Self) -> ExactComplexRational {
        self * &rhs.inv()
    }
}

impl Neg for &ExactComplexRational {
    type Output = ExactComplexRational;
    fn neg(self) -> ExactComplexRational {
        ExactComplexRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Add for ExactComplexRational {
    type Output = ExactComplexRational;
    fn add(self, rhs: Self) -> ExactComplexRational {
        &self + &rhs
    }
}

impl Sub for ExactComplexRational {
    type Output = ExactComplexRational;
    fn sub(self, rhs: Self) -> ExactComplexRational {
        &self - &rhs
    }
}

impl Mul for ExactComplexRational {
    type Output = ExactComplexRational;
    fn mul(self, rhs: Self) -> ExactComplexRational {
        &self * &rhs
    }
}

impl Div for ExactComplexRational {
    type Output = ExactComplexRational;
    fn div(self, rhs: Self) -> ExactComplexRational {
        &self / &rhs
    }
}
