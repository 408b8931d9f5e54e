//! Exact arithmetic: rationals, the two fixed number fields, finite fields
//! F_p and F_{p^k}, and prime splitting data.
//!
//! Number field elements are vectors of rationals on the power basis of the
//! defining polynomial; all operations reduce modulo that polynomial and stay
//! exact.

mod nf;
mod finite;
mod split;
pub mod ratpoly;

pub use nf::{det_rational, embedding_bound_c, NFElement, NumberField, NumberFieldError};
pub use finite::{factor_mod_p, legendre, pow_mod, sqrt_mod, Fp, FqCtx, FqElem};
pub use split::{split_prime, PrimeAbove, PrimeSplit, SplitKind};

use std::sync::Arc;

/// `Q(nu)` with `nu^2 = nu + 15`, i.e. `nu = (1 + sqrt 61)/2`. The power basis
/// order `Z[nu]` is the maximal order.
pub fn field_qsqrt61() -> Arc<NumberField> {
    NumberField::shared("Qsqrt61", &[-15, -1, 1])
}

/// The quartic coefficient field `Q(alpha)` with `alpha^4 + 8 alpha^2 + 13 = 0`.
pub fn field_kf() -> Arc<NumberField> {
    NumberField::shared("Kf", &[13, 0, 8, 0, 1])
}

/// The rationals as a degree-1 field, for uniform interfaces.
pub fn field_q() -> Arc<NumberField> {
    NumberField::shared("Q", &[0, 1])
}

/// `Z[sqrt 3]`, used for the endomorphism-order fixture.
pub fn field_qsqrt3() -> Arc<NumberField> {
    NumberField::shared("Qsqrt3", &[-3, 0, 1])
}
