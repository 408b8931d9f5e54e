use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Binary precision backing `digits` decimal digits plus 50 guard digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    // ceil((digits + 50) * log2(10)); 3321929/10^6 > log2(10)
    (((digits as u64 + 50) * 3_321_929 + 999_999) / 1_000_000) as u32
}

/// Fixed-point real number: `mant / 2^bits_for_digits(digits)`.
#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat {
    pub(crate) mant: BigInt,
    pub(crate) digits: u32,
}

fn shr_round(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (s - 1);
    let (sign, mag) = (x.sign(), x.magnitude());
    let rounded = (BigInt::from(mag.clone()) + half) >> s;
    match sign {
        Sign::Minus => -rounded,
        _ => rounded,
    }
}

impl BigFloat {
    fn bits(&self) -> u32 {
        bits_for_digits(self.digits)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn zero(digits: u32) -> Self {
        BigFloat { mant: BigInt::zero(), digits }
    }

    pub fn one(digits: u32) -> Self {
        Self::from_i64(1, digits)
    }

    pub fn from_i64(v: i64, digits: u32) -> Self {
        BigFloat { mant: BigInt::from(v) << bits_for_digits(digits), digits }
    }

    pub fn from_bigint(v: &BigInt, digits: u32) -> Self {
        BigFloat { mant: v.clone() << bits_for_digits(digits), digits }
    }

    pub fn from_rational(r: &BigRational, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        let num = r.numer() << bits;
        BigFloat { mant: rounded_div(&num, r.denom()), digits }
    }

    pub fn from_rational_i64(num: i64, den: i64, digits: u32) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)), digits)
    }

    /// Exact power of ten, `10^k`, at the given working precision.
    pub fn pow10(k: i64, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        if k >= 0 {
            let p = BigInt::from(10u32).pow(k as u32);
            BigFloat { mant: p << bits, digits }
        } else {
            let p = BigInt::from(10u32).pow((-k) as u32);
            BigFloat { mant: rounded_div(&(BigInt::one() << bits), &p), digits }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), digits: self.digits }
    }

    /// Convert to another working precision (rescales the mantissa).
    pub fn with_digits(&self, digits: u32) -> Self {
        let old = self.bits();
        let new = bits_for_digits(digits);
        let mant = if new >= old {
            &self.mant << (new - old)
        } else {
            shr_round(&self.mant, old - new)
        };
        BigFloat { mant, digits }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        BigFloat { mant: &self.mant * k, digits: self.digits }
    }

    pub fn div_i64(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        BigFloat { mant: rounded_div(&self.mant, &BigInt::from(k)), digits: self.digits }
    }

    /// Multiply by `2^k` (exact).
    pub fn shl(&self, k: i64) -> Self {
        let mant = if k >= 0 { &self.mant << (k as u32) } else { shr_round(&self.mant, (-k) as u32) };
        BigFloat { mant, digits: self.digits }
    }

    pub fn floor_i64(&self) -> i64 {
        let f = &self.mant >> self.bits();
        f.to_i64().expect("floor exceeds i64 range")
    }

    pub fn round_i64(&self) -> i64 {
        shr_round(&self.mant, self.bits()).to_i64().expect("round exceeds i64 range")
    }

    pub fn round_bigint(&self) -> BigInt {
        shr_round(&self.mant, self.bits())
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.bits();
        // keep 80 bits of mantissa for the conversion
        let nb = self.mant.bits() as i64;
        let drop = (nb - 80).max(0) as u32;
        let top = (&self.mant >> drop).to_f64().unwrap_or(0.0);
        top * 2f64.powi(drop as i32 - bits as i32)
    }

    pub fn sqrt(&self) -> Result<Self, super::ApfloatError> {
        if self.mant.is_negative() {
            return Err(super::ApfloatError::NegativeSqrt);
        }
        let big = self.mant.magnitude() << self.bits();
        let root = big.sqrt();
        Ok(BigFloat { mant: BigInt::from(root), digits: self.digits })
    }

    /// pi at the given precision (cached per precision).
    pub fn pi(digits: u32) -> Self {
        static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        {
            let guard = cache.lock().unwrap();
            if let Some(m) = guard.get(&digits) {
                return BigFloat { mant: m.clone(), digits };
            }
        }
        let bits = bits_for_digits(digits) + 16;
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
        let a = atan_inv_int(5, bits);
        let b = atan_inv_int(239, bits);
        let pi = (a * 16u32 - b * 4u32) >> 16u32;
        cache.lock().unwrap().insert(digits, pi.clone());
        BigFloat { mant: pi, digits }
    }

    fn ln2(digits: u32) -> Self {
        static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        {
            let guard = cache.lock().unwrap();
            if let Some(m) = guard.get(&digits) {
                return BigFloat { mant: m.clone(), digits };
            }
        }
        let bits = bits_for_digits(digits) + 16;
        // ln 2 = 2 atanh(1/3) = 2 sum 1/((2k+1) 3^(2k+1))
        let ln2 = (atanh_inv_int(3, bits) * 2u32) >> 16u32;
        cache.lock().unwrap().insert(digits, ln2.clone());
        BigFloat { mant: ln2, digits }
    }

    /// e^x by argument reduction against ln 2 followed by a squared Taylor sum.
    pub fn exp(&self) -> Self {
        let digits = self.digits;
        let ln2 = Self::ln2(digits);
        let k = {
            let q = self / &ln2;
            q.round_i64()
        };
        let r = self - &ln2.mul_i64(k);
        // halve the argument s times, Taylor, square back
        let s = 48u32;
        let small = r.shl(-(s as i64));
        let mut sum = BigFloat::one(digits);
        let mut term = BigFloat::one(digits);
        let mut n = 1i64;
        loop {
            term = &term * &small;
            term = term.div_i64(n);
            if term.mant.is_zero() {
                break;
            }
            sum = &sum + &term;
            n += 1;
            if n > 10_000 {
                break;
            }
        }
        let mut acc = sum;
        for _ in 0..s {
            acc = &acc * &acc;
        }
        acc.shl(k)
    }

    /// Simultaneous sin/cos, reducing modulo 2 pi first.
    pub fn sin_cos(&self) -> (Self, Self) {
        let digits = self.digits;
        let two_pi = Self::pi(digits).mul_i64(2);
        let k = (self / &two_pi).round_i64();
        let r = self - &two_pi.mul_i64(k);
        let s = 32u32;
        let small = r.shl(-(s as i64));
        // Taylor for sin and cos at the reduced argument
        let x2 = &small * &small;
        let mut sin = small.clone();
        let mut term = small;
        let mut n = 1i64;
        loop {
            term = &term * &x2;
            term = term.div_i64(-(2 * n) * (2 * n + 1));
            if term.mant.is_zero() {
                break;
            }
            sin = &sin + &term;
            n += 1;
            if n > 10_000 {
                break;
            }
        }
        let mut cos = BigFloat::one(digits);
        let mut term = BigFloat::one(digits);
        let mut n = 1i64;
        loop {
            term = &term * &x2;
            term = term.div_i64(-(2 * n - 1) * (2 * n));
            if term.mant.is_zero() {
                break;
            }
            cos = &cos + &term;
            n += 1;
            if n > 10_000 {
                break;
            }
        }
        // double-angle back up
        for _ in 0..s {
            let new_sin = (&sin * &cos).mul_i64(2);
            let new_cos = &(&cos * &cos) - &(&sin * &sin);
            sin = new_sin;
            cos = new_cos;
        }
        (sin, cos)
    }

    /// Decimal rendering with `frac_digits` digits after the point.
    pub fn to_decimal_string(&self, frac_digits: u32) -> String {
        let bits = self.bits();
        let scaled = &self.mant * BigInt::from(10u32).pow(frac_digits);
        let int = shr_round(&scaled, bits);
        let neg = int.is_negative();
        let mag = int.magnitude().to_str_radix(10);
        let mag = if mag.len() <= frac_digits as usize {
            format!("{}{}", "0".repeat(frac_digits as usize + 1 - mag.len()), mag)
        } else {
            mag
        };
        let split = mag.len() - frac_digits as usize;
        let (ip, fp) = mag.split_at(split);
        format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
    }

    pub fn from_decimal_str(s: &str, digits: u32) -> Option<Self> {
        let s = s.trim();
        let (neg, s) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (ip, fp) = match s.split_once('.') {
            Some((a, b)) => (a, b),
            None => (s, ""),
        };
        if !ip.chars().all(|c| c.is_ascii_digit()) || !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let combined: BigInt = format!("{}{}", ip, fp).parse().ok()?;
        let den = BigInt::from(10u32).pow(fp.len() as u32);
        let bits = bits_for_digits(digits);
        let mant = rounded_div(&(combined << bits), &den);
        Some(BigFloat { mant: if neg { -mant } else { mant }, digits })
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.digits, other.digits,
            "precision mismatch: {} vs {} digits",
            self.digits, other.digits
        );
    }
}

/// Round-to-nearest division, ties away from zero.
fn rounded_div(num: &BigInt, den: &BigInt) -> BigInt {
    assert!(!den.is_zero(), "division by zero");
    let negative = num.is_negative() != den.is_negative();
    let n = BigInt::from(num.magnitude().clone());
    let d = BigInt::from(den.magnitude().clone());
    let (mut q, r) = n.div_rem(&d);
    if &r * 2 >= d {
        q += 1;
    }
    if negative {
        -q
    } else {
        q
    }
}

/// atan(1/n) mantissa at `bits` fractional bits.
fn atan_inv_int(n: u64, bits: u32) -> BigInt {
    let n2 = BigInt::from(n) * BigInt::from(n);
    let mut term = (BigInt::one() << bits) / BigInt::from(n);
    let mut sum = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term /= &n2;
        if term.is_zero() {
            break;
        }
        let denom = 2 * k + 1;
        let piece = &term / BigInt::from(denom);
        if k % 2 == 1 {
            sum -= &piece;
        } else {
            sum += &piece;
        }
        k += 1;
    }
    sum
}

/// atanh(1/n) mantissa at `bits` fractional bits.
fn atanh_inv_int(n: u64, bits: u32) -> BigInt {
    let n2 = BigInt::from(n) * BigInt::from(n);
    let mut term = (BigInt::one() << bits) / BigInt::from(n);
    let mut sum = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term /= &n2;
        if term.is_zero() {
            break;
        }
        sum += &term / BigInt::from(2 * k + 1);
        k += 1;
    }
    sum
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({}, D={})", self.to_decimal_string(12.min(self.digits)), self.digits)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(self.digits))
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.check(other);
        self.mant.cmp(&other.mant)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                (&self).$method(rhs)
            }
        }
    };
}

impl Add<&BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &BigFloat) -> BigFloat {
        self.check(rhs);
        BigFloat { mant: &self.mant + &rhs.mant, digits: self.digits }
    }
}
impl Sub<&BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        self.check(rhs);
        BigFloat { mant: &self.mant - &rhs.mant, digits: self.digits }
    }
}
impl Mul<&BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &BigFloat) -> BigFloat {
        self.check(rhs);
        BigFloat { mant: shr_round(&(&self.mant * &rhs.mant), self.bits()), digits: self.digits }
    }
}
impl Div<&BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: &BigFloat) -> BigFloat {
        self.check(rhs);
        assert!(!rhs.mant.is_zero(), "division by zero");
        BigFloat { mant: rounded_div(&(&self.mant << self.bits()), &rhs.mant), digits: self.digits }
    }
}
impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { mant: -self.mant, digits: self.digits }
    }
}
impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { mant: -&self.mant, digits: self.digits }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_to_60_digits() {
        let pi = BigFloat::pi(100);
        let expected = BigFloat::from_decimal_str(
            "3.141592653589793238462643383279502884197169399375105820974944",
            100,
        )
        .unwrap();
        assert!((&pi - &expected).abs() < BigFloat::pow10(-58, 100));
    }

    #[test]
    fn exp_of_one() {
        let e = BigFloat::one(100).exp();
        let expected = BigFloat::from_decimal_str(
            "2.718281828459045235360287471352662497757247093699959574966968",
            100,
        )
        .unwrap();
        assert!((&e - &expected).abs() < BigFloat::pow10(-58, 100));
    }

    #[test]
    fn sin_cos_pythagoras() {
        let d = 120;
        let x = BigFloat::from_rational_i64(7, 3, d);
        let (s, c) = x.sin_cos();
        let one = &(&s * &s) + &(&c * &c);
        assert!((&one - &BigFloat::one(d)).abs() < BigFloat::pow10(-(d as i64) - 20, d));
    }

    #[test]
    fn sqrt_squares_back() {
        let d = 200;
        let x = BigFloat::from_i64(61, d);
        let r = x.sqrt().unwrap();
        assert!((&(&r * &r) - &x).abs() < BigFloat::pow10(-(d as i64) - 30, d));
    }

    #[test]
    fn decimal_round_trip() {
        let d = 80;
        let x = BigFloat::from_decimal_str("-123.4567890123456789", d).unwrap();
        let s = x.to_decimal_string(30);
        assert!(s.starts_with("-123.456789012345678900000"));
        let y = BigFloat::from_decimal_str(&s, d).unwrap();
        assert!((&x - &y).abs() < BigFloat::pow10(-28, d));
    }

    #[test]
    fn mixed_precision_panics() {
        let a = BigFloat::one(50);
        let b = BigFloat::one(60);
        let r = std::panic::catch_unwind(|| &a + &b);
        assert!(r.is_err());
    }
}
