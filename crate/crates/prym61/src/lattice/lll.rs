use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::intmat::{mat_identity, IMat};

/// Exact-integer LLL on the row lattice, Lovász parameter 99/100.
/// Zero rows are dropped; rows must otherwise be independent.
pub fn lll_reduce(basis: &IMat) -> IMat {
    lll_reduce_with_transform(basis).0
}

/// As [`lll_reduce`], also returning the unimodular transform `U` with
/// `U * input = output` (after zero rows are dropped from the input).
pub fn lll_reduce_with_transform(basis: &IMat) -> (IMat, IMat) {
    let mut b: IMat = basis.iter().filter(|r| !r.iter().all(|x| x.is_zero())).cloned().collect();
    let n = b.len();
    if n <= 1 {
        return (b, mat_identity(n));
    }
    let mut u = mat_identity(n);
    // integral LLL state: d[0..=n], lambda[i][j] for j < i
    let mut d: Vec<BigInt> = vec![BigInt::one(); n + 1];
    let mut lambda: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    d[1] = dot(&b[0], &b[0]);
    assert!(!d[1].is_zero(), "dependent or zero row in LLL input");
    let mut kmax = 0usize; // largest index with Gram data (0-based)
    let mut k = 1usize;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut uval = dot(&b[k], &b[j]);
                for i in 0..j {
                    uval = (&d[i + 1] * &uval - &lambda[k][i] * &lambda[j][i]).div_exact(&d[i]);
                }
                if j < k {
                    lambda[k][j] = uval;
                } else {
                    d[k + 1] = uval;
                    assert!(!d[k + 1].is_zero(), "dependent rows in LLL input");
                }
            }
        }
        loop {
            red(&mut b, &mut u, &mut lambda, &d, k, k - 1);
            // swap when 100 d[k+1] d[k-1] < 99 d[k]^2 - 100 lambda^2
            let lhs = BigInt::from(100) * (&d[k + 1] * &d[k - 1]);
            let rhs = BigInt::from(99) * (&d[k] * &d[k])
                - BigInt::from(100) * (&lambda[k][k - 1] * &lambda[k][k - 1]);
            if lhs < rhs {
                swap_step(&mut b, &mut u, &mut lambda, &mut d, k, kmax);
                k = k.max(2) - 1;
            } else {
                for l in (0..k.saturating_sub(1)).rev() {
                    red(&mut b, &mut u, &mut lambda, &d, k, l);
                }
                k += 1;
                break;
            }
        }
    }
    (b, u)
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

trait DivExact {
    fn div_exact(&self, d: &BigInt) -> BigInt;
}
impl DivExact for BigInt {
    fn div_exact(&self, d: &BigInt) -> BigInt {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "exact division in integral LLL");
        q
    }
}

fn red(b: &mut IMat, u: &mut IMat, lambda: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let two_lam = (&lambda[k][l] * 2u32).magnitude().clone();
    if &two_lam <= d[l + 1].magnitude() {
        return;
    }
    // q = nearest integer to lambda[k][l] / d[l+1]
    let q = {
        let (quot, rem) = lambda[k][l].div_rem(&d[l + 1]);
        if (&rem * 2u32).magnitude() > d[l + 1].magnitude() {
            if rem.is_negative() == d[l + 1].is_negative() {
                quot + 1
            } else {
                quot - 1
            }
        } else {
            quot
        }
    };
    if q.is_zero() {
        return;
    }
    for c in 0..b[0].len() {
        let t = &q * &b[l][c];
        b[k][c] -= t;
    }
    for c in 0..u[0].len() {
        let t = &q * &u[l][c];
        u[k][c] -= t;
    }
    let t = &q * &d[l + 1];
    lambda[k][l] -= t;
    for i in 0..l {
        let t = &q * &lambda[l][i];
        lambda[k][i] -= t;
    }
}

fn swap_step(
    b: &mut IMat,
    u: &mut IMat,
    lambda: &mut [Vec<BigInt>],
    d: &mut [BigInt],
    k: usize,
    kmax: usize,
) {
    b.swap(k, k - 1);
    u.swap(k, k - 1);
    for j in 0..k.saturating_sub(1) {
        let tmp = lambda[k][j].clone();
        lambda[k][j] = lambda[k - 1][j].clone();
        lambda[k - 1][j] = tmp;
    }
    let lam = lambda[k][k - 1].clone();
    let bb = (&d[k - 1] * &d[k + 1] + &lam * &lam).div_exact(&d[k]);
    for i in k + 1..=kmax {
        let t = lambda[i][k].clone();
        lambda[i][k] = (&d[k + 1] * &lambda[i][k - 1] - &lam * &t).div_exact(&d[k]);
        lambda[i][k - 1] = (&bb * &t + &lam * &lambda[i][k]).div_exact(&d[k + 1]);
    }
    d[k] = bb;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{gram, intmat::det_bigint};

    fn m(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn norm2(v: &[BigInt]) -> BigInt {
        dot(v, v)
    }

    #[test]
    fn identity_is_fixed() {
        let id = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(lll_reduce(&id), id);
    }

    #[test]
    fn recovers_short_vector() {
        let basis = m(&[&[1, 0], &[1_000_000, 1]]);
        let red = lll_reduce(&basis);
        let min = red.iter().map(|r| norm2(r)).min().unwrap();
        assert!(min <= BigInt::from(2), "short vector of norm <= 2, got {}", min);
    }

    #[test]
    fn gram_determinant_preserved() {
        let basis = m(&[&[4, 1, 7], &[-3, 2, 5], &[9, 9, 1]]);
        let (red, u) = lll_reduce_with_transform(&basis);
        assert_eq!(det_bigint(&gram(&basis)), det_bigint(&gram(&red)));
        assert_eq!(det_bigint(&u).magnitude().clone(), BigInt::one().magnitude().clone());
        assert_eq!(super::super::intmat::mat_mul(&u, &basis), red);
    }

    #[test]
    fn first_vector_meets_lll_bound() {
        // |b1|^2 <= 2^(m-1) det(Gram)^(1/m): check squared form
        let basis = m(&[&[12, 1, 0, 3], &[0, 17, -5, 1], &[2, 2, 31, 2], &[1, 0, 4, 23]]);
        let red = lll_reduce(&basis);
        let b1 = norm2(&red[0]);
        let det = det_bigint(&gram(&red));
        // (|b1|^2)^m <= 2^(m(m-1)/2) * det
        let m_dim = 4u32;
        let lhs = b1.pow(m_dim);
        let rhs = (BigInt::one() << (m_dim * (m_dim - 1) / 2)) * det;
        assert!(lhs <= rhs, "LLL quality bound");
    }

    #[test]
    fn huge_skew_reduces() {
        // one column scaled by a large constant; the kernel direction pops out
        let c = BigInt::from(10).pow(40);
        let mut basis = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        // forms: l(x) = x0 + x1 - 2 x2 scaled by c in an extra column
        for row in basis.iter_mut() {
            let val = &row[0] + &row[1] - BigInt::from(2) * &row[2];
            row.push(val * &c);
        }
        let red = lll_reduce(&basis);
        // some reduced vector has last coordinate 0 and small entries
        let found = red.iter().any(|r| r[3].is_zero() && norm2(&r[..3].to_vec()) <= BigInt::from(9));
        assert!(found, "kernel vector found: {:?}", red);
    }
}
