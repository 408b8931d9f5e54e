//! Arbitrary-precision real and complex arithmetic at a declared decimal
//! precision, plus the dense complex linear algebra used downstream.
//!
//! Values are fixed-point: a `BigFloat` of precision `D` stores an integer
//! mantissa scaled by `2^-bits(D)`, where `bits(D)` covers `D` decimal digits
//! plus 50 guard digits. Operands of different precisions do not mix; convert
//! explicitly with [`BigFloat::with_digits`].

mod real;
mod complex;
mod matrix;
mod roots;

pub use real::{bits_for_digits, BigFloat};
pub use complex::BigComplex;
pub use matrix::{ComplexMatrix, SolveError};
pub use roots::complex_roots;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ApfloatError {
    #[error("precision mismatch: {0} vs {1} digits")]
    PrecisionMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of negative value")]
    NegativeSqrt,
    #[error("matrix is not Hermitian (deviation {0})")]
    NotHermitian(String),
    #[error("inconsistent linear system (residual {0})")]
    Inconsistent(String),
    #[error("matrix dimension mismatch")]
    Dimension,
}

/// `q = e^{2 pi i z}` with the integer part of `Re z` removed first, so that
/// translates of `z` by 1 produce structurally identical output.
pub fn exp_q(z: &BigComplex, digits: u32) -> BigComplex {
    let zr = z.re.clone();
    let n = zr.floor_i64();
    let re = zr - BigFloat::from_i64(n, digits);
    let two_pi = BigFloat::pi(digits).mul_i64(2);
    // e^{2 pi i (re + i im)} = e^{-2 pi im} (cos 2 pi re + i sin 2 pi re)
    let mag = (-(&two_pi * &z.im)).exp();
    let angle = &two_pi * &re;
    let (s, c) = angle.sin_cos();
    BigComplex::new(&mag * &c, &mag * &s)
}

/// The real radius `R = e^{-2 pi / (m sqrt(N))}` controlling the decay of the
/// twisted period series.
pub fn series_radius(m: u32, level: u32, digits: u32) -> BigFloat {
    let two_pi = BigFloat::pi(digits).mul_i64(2);
    let denom = BigFloat::from_i64(level as i64, digits)
        .sqrt()
        .expect("level is positive")
        .mul_i64(m as i64);
    (-(&two_pi / &denom)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_q_at_i_is_exp_minus_two_pi() {
        let d = 100;
        let z = BigComplex::new(BigFloat::zero(d), BigFloat::from_i64(1, d));
        let q = exp_q(&z, d);
        // e^{-2 pi} to 60 digits
        let expected = BigFloat::from_decimal_str(
            "0.00186744273170798881443021293482703039342280500247531719938153",
            d,
        )
        .unwrap();
        let err = (&q.re - &expected).abs();
        assert!(err < BigFloat::pow10(-58, d), "err = {}", err.to_decimal_string(20));
        assert!(q.im.abs() < BigFloat::pow10(-90, d));
    }

    #[test]
    fn exp_q_periodicity_is_structural() {
        let d = 80;
        let z = BigComplex::new(
            BigFloat::from_rational_i64(3, 7, d),
            BigFloat::from_rational_i64(5, 4, d),
        );
        let z1 = BigComplex::new(&z.re + &BigFloat::from_i64(1, d), z.im.clone());
        let q0 = exp_q(&z, d);
        let q1 = exp_q(&z1, d);
        assert_eq!(q0.re, q1.re);
        assert_eq!(q0.im, q1.im);
    }

    #[test]
    fn series_radius_level_61() {
        let d = 50;
        let r = series_radius(1, 61, d);
        // e^{-2 pi / sqrt 61} = e^{-0.80448...}
        let lo = BigFloat::from_decimal_str("0.4472", d).unwrap();
        let hi = BigFloat::from_decimal_str("0.4474", d).unwrap();
        assert!(lo < r && r < hi, "R = {}", r.to_decimal_string(10));
    }
}
