use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apfloat::{complex_roots, BigComplex, BigFloat};

#[derive(Debug, Error)]
pub enum NumberFieldError {
    #[error("elements belong to different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
}

/// A number field presented by a monic irreducible integer polynomial.
/// Elements live on the power basis `1, theta, ..., theta^(deg-1)`.
pub struct NumberField {
    pub name: String,
    /// Monic: `min_poly[deg] = 1`; coefficients low-to-high.
    pub min_poly: Vec<BigInt>,
    pub degree: usize,
    embeddings: Mutex<HashMap<u32, Vec<BigComplex>>>,
}

impl NumberField {
    pub fn new(name: &str, min_poly_coeffs: &[i64]) -> Arc<Self> {
        let min_poly: Vec<BigInt> = min_poly_coeffs.iter().map(|&c| BigInt::from(c)).collect();
        let degree = min_poly.len() - 1;
        assert!(min_poly[degree].is_one(), "defining polynomial must be monic");
        Arc::new(NumberField { name: name.to_string(), min_poly, degree, embeddings: Mutex::new(HashMap::new()) })
    }

    /// Process-wide shared instances keyed by name, so that elements built in
    /// different places compare as same-field.
    pub fn shared(name: &'static str, min_poly_coeffs: &[i64]) -> Arc<Self> {
        static REGISTRY: OnceLock<Mutex<HashMap<&'static str, Arc<NumberField>>>> = OnceLock::new();
        let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = reg.lock().unwrap();
        guard.entry(name).or_insert_with(|| NumberField::new(name, min_poly_coeffs)).clone()
    }

    /// Complex roots of the defining polynomial at the given precision,
    /// computed on demand and cached. Each root satisfies the polynomial to
    /// within `10^(-digits+10)`.
    pub fn embeddings(self: &Arc<Self>, digits: u32) -> Vec<BigComplex> {
        {
            let cache = self.embeddings.lock().unwrap();
            if let Some(r) = cache.get(&digits) {
                return r.clone();
            }
        }
        let roots = complex_roots(&self.min_poly, digits);
        assert_eq!(roots.len(), self.degree, "number of embeddings equals the degree");
        let tol = BigFloat::pow10(-(digits as i64) + 10, digits);
        for r in &roots {
            let mut p = BigComplex::zero(digits);
            for c in self.min_poly.iter().rev() {
                p = &(&p * r) + &BigComplex::from_real(BigFloat::from_bigint(c, digits));
            }
            assert!(p.abs() < tol, "embedding root fails the defining polynomial");
        }
        let mut cache = self.embeddings.lock().unwrap();
        cache.insert(digits, roots.clone());
        roots
    }

    pub fn zero(self: &Arc<Self>) -> NFElement {
        NFElement { field: self.clone(), coords: vec![BigRational::zero(); self.degree] }
    }

    pub fn one(self: &Arc<Self>) -> NFElement {
        self.from_i64(1)
    }

    pub fn from_i64(self: &Arc<Self>, v: i64) -> NFElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[0] = BigRational::from(BigInt::from(v));
        NFElement { field: self.clone(), coords }
    }

    pub fn from_rational(self: &Arc<Self>, r: BigRational) -> NFElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[0] = r;
        NFElement { field: self.clone(), coords }
    }

    /// The generator `theta` of the power basis.
    pub fn gen(self: &Arc<Self>) -> NFElement {
        assert!(self.degree >= 2, "the rationals have no generator");
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[1] = BigRational::one();
        NFElement { field: self.clone(), coords }
    }

    /// Element from integer power-basis coordinates.
    pub fn elem(self: &Arc<Self>, coords: &[i64]) -> NFElement {
        assert_eq!(coords.len(), self.degree);
        NFElement {
            field: self.clone(),
            coords: coords.iter().map(|&c| BigRational::from(BigInt::from(c))).collect(),
        }
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }
}
impl Eq for NumberField {}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({}, deg {})", self.name, self.degree)
    }
}

/// Element of a fixed number field, with rational coordinates kept in lowest
/// terms on the power basis.
#[derive(Clone)]
pub struct NFElement {
    pub field: Arc<NumberField>,
    pub coords: Vec<BigRational>,
}

impl NFElement {
    fn same_field(&self, other: &Self) -> Result<(), NumberFieldError> {
        if self.field.min_poly != other.field.min_poly {
            return Err(NumberFieldError::FieldMismatch(
                self.field.name.clone(),
                other.field.name.clone(),
            ));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other).unwrap();
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        NFElement { field: self.field.clone(), coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other).unwrap();
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        NFElement { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> Self {
        NFElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        NFElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * r).collect() }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&BigRational::from(BigInt::from(k)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other).unwrap();
        let n = self.field.degree;
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        // reduce modulo the monic defining polynomial
        for k in (n..2 * n - 1).rev() {
            if prod[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut prod[k], BigRational::zero());
            for j in 0..n {
                let m = &self.field.min_poly[j];
                if m.is_zero() {
                    continue;
                }
                prod[k - n + j] -= &c * BigRational::from(m.clone());
            }
        }
        prod.truncate(n);
        NFElement { field: self.field.clone(), coords: prod }
    }

    /// Matrix of multiplication by `self` on the power basis (rational entries,
    /// column j = self * theta^j).
    pub fn mult_matrix(&self) -> Vec<Vec<BigRational>> {
        let n = self.field.degree;
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.clone();
        cols.push(cur.coords.clone());
        for _ in 1..n {
            cur = cur.mul(&self.field.gen());
            cols.push(cur.coords.clone());
        }
        // transpose into rows
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Field norm: determinant of the multiplication matrix.
    pub fn norm(&self) -> BigRational {
        let m = self.mult_matrix();
        det_rational(m)
    }

    /// Field trace: trace of the multiplication matrix.
    pub fn trace(&self) -> BigRational {
        let n = self.field.degree;
        let m = self.mult_matrix();
        let mut t = BigRational::zero();
        for (i, row) in m.iter().enumerate().take(n) {
            t += &row[i];
        }
        t
    }

    pub fn inv(&self) -> Result<Self, NumberFieldError> {
        if self.is_zero() {
            return Err(NumberFieldError::DivisionByZero);
        }
        // extended Euclid in Q[x] against the defining polynomial
        let n = self.field.degree;
        let modulus: Vec<BigRational> =
            self.field.min_poly.iter().map(|c| BigRational::from(c.clone())).collect();
        let (g, _s, t) = super::ratpoly::xgcd(&modulus, &self.coords);
        // g must be a nonzero constant
        assert_eq!(super::ratpoly::deg(&g), 0, "defining polynomial is irreducible");
        let ginv = g[0].recip();
        let mut coords: Vec<BigRational> = t.iter().map(|c| c * &ginv).collect();
        coords.resize(n, BigRational::zero());
        Ok(NFElement { field: self.field.clone(), coords })
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumberFieldError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Image under the `idx`-th complex embedding at the given precision.
    pub fn embed(&self, idx: usize, digits: u32) -> BigComplex {
        let roots = self.field.embeddings(digits);
        let theta = &roots[idx];
        let mut acc = BigComplex::zero(digits);
        for c in self.coords.iter().rev() {
            acc = &(&acc * theta) + &BigComplex::from_real(BigFloat::from_rational(c, digits));
        }
        acc
    }

    /// All integer coordinates? (denominator 1 on the power basis)
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.denom().is_one())
    }

    /// Reduce modulo a rational prime via a root of the defining polynomial.
    /// Denominators must be invertible mod p.
    pub fn reduce_mod_p(&self, root: u64, p: u64) -> u64 {
        let mut acc: u64 = 0;
        for c in self.coords.iter().rev() {
            let num = rational_mod_p(c, p);
            acc = ((acc as u128 * root as u128 + num as u128) % p as u128) as u64;
        }
        acc
    }

    pub fn serialize_coords(&self) -> Vec<String> {
        self.coords.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect()
    }

    pub fn from_serialized(field: &Arc<NumberField>, coords: &[String]) -> Option<Self> {
        let mut out = Vec::with_capacity(field.degree);
        for s in coords {
            let (n, d) = s.split_once('/')?;
            out.push(BigRational::new(n.parse().ok()?, d.parse().ok()?));
        }
        if out.len() != field.degree {
            return None;
        }
        Some(NFElement { field: field.clone(), coords: out })
    }
}

/// `x mod p` for a rational with denominator prime to p.
pub(crate) fn rational_mod_p(x: &BigRational, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let n = ((x.numer() % &pb) + &pb) % &pb;
    let d = ((x.denom() % &pb) + &pb) % &pb;
    let n64: u64 = n.try_into().unwrap();
    let d64: u64 = d.try_into().unwrap();
    assert!(d64 != 0, "denominator divisible by p");
    let dinv = super::finite::pow_mod(d64, p - 2, p);
    ((n64 as u128 * dinv as u128) % p as u128) as u64
}

impl PartialEq for NFElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.min_poly == other.field.min_poly && self.coords == other.coords
    }
}
impl Eq for NFElement {}

impl fmt::Debug for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "t", "t^2", "t^3", "t^4", "t^5"];
        let mut parts = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 {
                parts.push(format!("{}", c));
            } else {
                parts.push(format!("{}*{}", c, names.get(i).copied().unwrap_or("t^?")));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct NFElementJson {
    pub field: String,
    pub coords: Vec<String>,
}

/// Determinant over Q by fraction-free style elimination on rationals.
pub fn det_rational(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { return BigRational::zero() };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        let inv = pv.recip();
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let s = &m[col][c] * &f;
                m[r][c] -= s;
            }
        }
    }
    det
}

/// Max over basis elements j of the sum over embeddings of |(V^-1)_{j,tau}|,
/// where V is the embedding matrix of the given basis; rounded up slightly.
pub fn embedding_bound_c(basis: &[NFElement], digits: u32) -> BigFloat {
    let n = basis.len();
    assert!(n >= 1);
    let field = basis[0].field.clone();
    assert_eq!(n, field.degree, "basis size must equal the field degree");
    let m = crate::apfloat::ComplexMatrix::from_fn(n, n, digits, |tau, j| basis[j].embed(tau, digits));
    let inv = m.inverse().expect("embedding matrix of a basis is invertible");
    let mut best = BigFloat::zero(digits);
    for j in 0..n {
        let mut s = BigFloat::zero(digits);
        for tau in 0..n {
            s = &s + &inv[(j, tau)].abs();
        }
        if s > best {
            best = s;
        }
    }
    // round up in the last retained digit
    &best + &BigFloat::pow10(-(digits as i64) + 2, digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{field_kf, field_q, field_qsqrt61};

    #[test]
    fn nu_squared_is_nu_plus_15() {
        let k = field_qsqrt61();
        let nu = k.gen();
        let sq = nu.mul(&nu);
        assert_eq!(sq, k.elem(&[15, 1]));
    }

    #[test]
    fn alpha_fourth_power_relation() {
        let kf = field_kf();
        let a2 = kf.gen().mul(&kf.gen());
        let a4 = a2.mul(&a2);
        // alpha^4 = -8 alpha^2 - 13
        assert_eq!(a4, kf.elem(&[-13, 0, -8, 0]));
    }

    #[test]
    fn one_times_x_is_x() {
        let k = field_qsqrt61();
        let x = k.elem(&[7, -3]);
        assert_eq!(k.one().mul(&x), x);
    }

    #[test]
    fn norm_of_delta_is_minus_one() {
        let k = field_qsqrt61();
        // -5 nu + 22
        let delta = k.elem(&[22, -5]);
        assert_eq!(delta.norm(), BigRational::from(BigInt::from(-1)));
    }

    #[test]
    fn norm_in_z_sqrt3() {
        let k = crate::exactnum::field_qsqrt3();
        let x = k.elem(&[1, 1]); // 1 + sqrt 3
        assert_eq!(x.norm(), BigRational::from(BigInt::from(-2)));
    }

    #[test]
    fn rational_scalar_norm_in_quadratic_field() {
        let k = field_qsqrt61();
        let seven = k.from_i64(7);
        assert_eq!(seven.norm(), BigRational::from(BigInt::from(49)));
    }

    #[test]
    fn inverse_and_associativity() {
        let kf = field_kf();
        let x = kf.elem(&[3, -1, 2, 5]);
        let y = kf.elem(&[0, 7, -2, 1]);
        let z = kf.elem(&[-4, 0, 1, 1]);
        assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        assert!(x.mul(&x.inv().unwrap()).is_one());
        // norm multiplicativity
        assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn field_mismatch_is_detected() {
        let a = field_qsqrt61().one();
        let b = field_kf().one();
        assert!(a.same_field(&b).is_err());
    }

    #[test]
    fn embedding_bound_for_q_is_one() {
        let q = field_q();
        let c = embedding_bound_c(&[q.one()], 50);
        let one = BigFloat::one(50);
        assert!((&c - &one).abs() < BigFloat::pow10(-1, 50));
    }

    #[test]
    fn embedding_bound_quadratic_matches_hand_inverse() {
        // For basis (1, nu) with embeddings nu, nu', the inverse of
        // [[1, nu], [1, nu']] has rows [nu'/(nu'-nu), -nu/(nu'-nu)] and
        // [-1/(nu'-nu), 1/(nu'-nu)]; C = max of the two row abs-sums.
        let d = 60;
        let k = field_qsqrt61();
        let c = embedding_bound_c(&[k.one(), k.gen()], d);
        let s61 = BigFloat::from_i64(61, d).sqrt().unwrap();
        // |nu| + |nu'| over sqrt61, vs 2/sqrt61; the first dominates
        let nu = (&BigFloat::one(d) + &s61).div_i64(2);
        let nu_bar = (&s61 - &BigFloat::one(d)).div_i64(2);
        let expected = (&nu + &nu_bar) / &s61;
        assert!((&c - &expected).abs() < BigFloat::pow10(-1, d), "c = {:?}", c);
    }

    #[test]
    fn serialization_round_trip() {
        let k = field_kf();
        let x = NFElement {
            field: k.clone(),
            coords: vec![
                BigRational::new(BigInt::from(3), BigInt::from(7)),
                BigRational::from(BigInt::from(-2)),
                BigRational::zero(),
                BigRational::new(BigInt::from(1), BigInt::from(2)),
            ],
        };
        let s = x.serialize_coords();
        let y = NFElement::from_serialized(&k, &s).unwrap();
        assert_eq!(x, y);
    }
}
