use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::real::BigFloat;

/// Complex number whose parts share one declared precision.
#[derive(Clone, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        assert_eq!(re.digits(), im.digits(), "precision mismatch in complex parts");
        BigComplex { re, im }
    }

    pub fn zero(digits: u32) -> Self {
        BigComplex { re: BigFloat::zero(digits), im: BigFloat::zero(digits) }
    }

    pub fn one(digits: u32) -> Self {
        BigComplex { re: BigFloat::one(digits), im: BigFloat::zero(digits) }
    }

    pub fn i(digits: u32) -> Self {
        BigComplex { re: BigFloat::zero(digits), im: BigFloat::one(digits) }
    }

    pub fn from_real(re: BigFloat) -> Self {
        let d = re.digits();
        BigComplex { re, im: BigFloat::zero(d) }
    }

    pub fn from_i64(v: i64, digits: u32) -> Self {
        BigComplex::from_real(BigFloat::from_i64(v, digits))
    }

    pub fn digits(&self) -> u32 {
        self.re.digits()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        BigComplex { re: self.re.mul_i64(k), im: self.im.mul_i64(k) }
    }

    pub fn mul_real(&self, k: &BigFloat) -> Self {
        BigComplex { re: &self.re * k, im: &self.im * k }
    }

    pub fn abs2(&self) -> BigFloat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigFloat {
        self.abs2().sqrt().expect("abs2 is nonnegative")
    }

    pub fn inv(&self) -> Self {
        let n = self.abs2();
        assert!(!n.is_zero(), "division by zero");
        BigComplex { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn exp(&self) -> Self {
        let mag = self.re.exp();
        let (s, c) = self.im.sin_cos();
        BigComplex { re: &mag * &c, im: &mag * &s }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let digits = self.digits();
        if self.is_zero() {
            return BigComplex::zero(digits);
        }
        let r = self.abs();
        let two = BigFloat::from_i64(2, digits);
        if self.im.is_zero() && !self.re.is_negative() {
            return BigComplex::from_real(self.re.sqrt().expect("nonnegative"));
        }
        let w = ((&r + &self.re.abs()) / &two).sqrt().expect("nonnegative");
        if !self.re.is_negative() {
            let im = &self.im / &w.mul_i64(2);
            BigComplex { re: w, im }
        } else {
            let re = self.im.abs() / &w.mul_i64(2);
            let im = if self.im.is_negative() { -w } else { w };
            BigComplex { re, im }
        }
    }

    pub fn powi(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BigComplex::one(self.digits());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn with_digits(&self, digits: u32) -> Self {
        BigComplex { re: self.re.with_digits(digits), im: self.im.with_digits(digits) }
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}i)",
            self.re.to_decimal_string(10.min(self.re.digits())),
            self.im.to_decimal_string(10.min(self.im.digits()))
        )
    }
}

impl Add<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        BigComplex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}
impl Sub<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        BigComplex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}
impl Mul<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        BigComplex { re, im }
    }
}
impl Div<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        self * &rhs.inv()
    }
}
impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -self.re, im: -self.im }
    }
}
impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -&self.re, im: -&self.im }
    }
}

macro_rules! impl_cbinop {
    ($trait:ident, $method:ident) => {
        impl $trait<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: &BigComplex) -> BigComplex {
                (&self).$method(rhs)
            }
        }
    };
}
impl_cbinop!(Add, add);
impl_cbinop!(Sub, sub);
impl_cbinop!(Mul, mul);
impl_cbinop!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_minus_one() {
        let d = 80;
        let z = BigComplex::from_i64(-1, d);
        let r = z.sqrt();
        assert!((&r.im - &BigFloat::one(d)).abs() < BigFloat::pow10(-70, d));
        assert!(r.re.abs() < BigFloat::pow10(-70, d));
    }

    #[test]
    fn inv_multiplies_to_one() {
        let d = 90;
        let z = BigComplex::new(BigFloat::from_rational_i64(3, 7, d), BigFloat::from_i64(-2, d));
        let p = &z * &z.inv();
        assert!((&p.re - &BigFloat::one(d)).abs() < BigFloat::pow10(-80, d));
        assert!(p.im.abs() < BigFloat::pow10(-80, d));
    }

    #[test]
    fn complex_exp_euler() {
        let d = 90;
        let z = BigComplex::new(BigFloat::zero(d), BigFloat::pi(d));
        let e = z.exp();
        assert!((&e.re + &BigFloat::one(d)).abs() < BigFloat::pow10(-80, d));
        assert!(e.im.abs() < BigFloat::pow10(-80, d));
    }
}
