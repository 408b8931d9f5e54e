use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::finite::factor_mod_p;
use super::nf::NumberField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
    /// Mixed factorization pattern (only possible in degree > 2).
    Other,
}

/// One prime above p, described through the factorization of the defining
/// polynomial mod p.
#[derive(Debug, Clone)]
pub struct PrimeAbove {
    /// The monic factor mod p (low-to-high coefficients). For residue degree
    /// one this is `x - root`, so `root = p - factor[0]`.
    pub factor: Vec<u64>,
    pub residue_degree: usize,
    pub ramification: usize,
}

impl PrimeAbove {
    /// The root of the defining polynomial mod p, for degree-one primes.
    pub fn root(&self, p: u64) -> u64 {
        assert_eq!(self.residue_degree, 1);
        (p - self.factor[0] % p) % p
    }
}

#[derive(Debug, Clone)]
pub struct PrimeSplit {
    pub p: u64,
    pub field_name: String,
    pub primes: Vec<PrimeAbove>,
    pub kind: SplitKind,
}

impl PrimeSplit {
    pub fn is_totally_split(&self) -> bool {
        self.kind == SplitKind::Split
    }
}

/// Factor the defining polynomial of `field` modulo p. For the fixed fields
/// used here (power-basis orders with odd p not dividing the index) this is
/// the splitting of p.
pub fn split_prime(p: u64, field: &Arc<NumberField>) -> PrimeSplit {
    assert!(p >= 2);
    let coeffs: Vec<i64> = field
        .min_poly
        .iter()
        .map(|c| {
            let r = c % BigInt::from(p);
            let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
            i64::try_from(r).unwrap()
        })
        .collect();
    let factors = factor_mod_p(&coeffs, p);
    let primes: Vec<PrimeAbove> = factors
        .iter()
        .map(|(f, m)| PrimeAbove { factor: f.clone(), residue_degree: f.len() - 1, ramification: *m })
        .collect();
    let degree: usize = primes.iter().map(|q| q.residue_degree * q.ramification).sum();
    assert_eq!(degree, field.degree, "e_i f_i must sum to the degree");
    let kind = if primes.iter().any(|q| q.ramification > 1) {
        SplitKind::Ramified
    } else if primes.len() == field.degree {
        SplitKind::Split
    } else if primes.len() == 1 {
        SplitKind::Inert
    } else {
        SplitKind::Other
    };
    PrimeSplit { p, field_name: field.name.clone(), primes, kind }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{field_kf, field_qsqrt61};

    #[test]
    fn p61_ramifies() {
        let s = split_prime(61, &field_qsqrt61());
        assert_eq!(s.kind, SplitKind::Ramified);
        assert_eq!(s.primes.len(), 1);
        assert_eq!(s.primes[0].ramification, 2);
    }

    #[test]
    fn p3_splits_with_roots_of_the_quadratic() {
        let s = split_prime(3, &field_qsqrt61());
        assert_eq!(s.kind, SplitKind::Split);
        let mut roots: Vec<u64> = s.primes.iter().map(|q| q.root(3)).collect();
        roots.sort();
        // x^2 - x - 15 = x^2 - x mod 3: roots 0 and 1
        assert_eq!(roots, vec![0, 1]);
    }

    #[test]
    fn p2_is_inert_in_qsqrt61() {
        // 61 = 5 mod 8, so 2 is inert; cross-check the factorization against
        // the Kronecker symbol computed by hand from the discriminant
        let s = split_prime(2, &field_qsqrt61());
        assert_eq!(s.kind, SplitKind::Inert);
        assert_eq!(kronecker_at_2(&field_qsqrt61()), SplitKind::Inert);
    }

    #[test]
    fn residue_degrees_sum_to_field_degree_small_primes() {
        let kf = field_kf();
        let k61 = field_qsqrt61();
        for p in crate::util::primes_upto(500) {
            if p == 2 {
                continue;
            }
            let s1 = split_prime(p, &kf);
            let s2 = split_prime(p, &k61);
            let d1: usize = s1.primes.iter().map(|q| q.residue_degree * q.ramification).sum();
            let d2: usize = s2.primes.iter().map(|q| q.residue_degree * q.ramification).sum();
            assert_eq!(d1, 4);
            assert_eq!(d2, 2);
        }
    }

    fn kronecker_at_2(field: &Arc<NumberField>) -> SplitKind {
        // Kronecker symbol at 2 for x^2 - x - c: disc = 1 + 4c
        let c = -&field.min_poly[0];
        let disc = BigInt::from(1) + BigInt::from(4) * c;
        let m8: BigInt = ((&disc % 8) + 8) % 8;
        if m8 == BigInt::from(1) {
            SplitKind::Split
        } else if m8 == BigInt::from(5) {
            SplitKind::Inert
        } else {
            SplitKind::Ramified
        }
    }
}
