//! Dense univariate polynomial arithmetic over Q (coefficients low-to-high).

use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn deg(p: &[BigRational]) -> usize {
    for i in (0..p.len()).rev() {
        if !p[i].is_zero() {
            return i;
        }
    }
    0
}

pub fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

pub fn is_zero(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

pub fn divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = deg(b);
    assert!(!is_zero(b), "division by the zero polynomial");
    let mut rem = trim(a.to_vec());
    let mut da = deg(&rem);
    if da < db || is_zero(&rem) {
        return (vec![BigRational::zero()], rem);
    }
    let mut q = vec![BigRational::zero(); da - db + 1];
    let lead_inv = b[db].recip();
    while da >= db && !is_zero(&rem) {
        let c = &rem[da] * &lead_inv;
        q[da - db] = c.clone();
        for i in 0..=db {
            let v = &b[i] * &c;
            rem[da - db + i] -= v;
        }
        rem = trim(rem);
        let nda = deg(&rem);
        if is_zero(&rem) || nda < db {
            break;
        }
        da = nda;
    }
    (trim(q), trim(rem))
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g.
pub fn xgcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut s0 = vec![BigRational::one()];
    let mut s1 = vec![BigRational::zero()];
    let mut t0 = vec![BigRational::zero()];
    let mut t1 = vec![BigRational::one()];
    while !is_zero(&r1) {
        let (q, r) = divmod(&r0, &r1);
        let new_s = sub(&s0, &mul(&q, &s1));
        let new_t = sub(&t0, &mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = new_s;
        t0 = t1;
        t1 = new_t;
    }
    (r0, s0, t0)
}

/// Evaluate at a square rational matrix, by Horner. `m` is row-major.
pub fn eval_at_matrix(p: &[BigRational], m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let zero = || vec![vec![BigRational::zero(); n]; n];
    let mut acc = zero();
    for c in p.iter().rev() {
        // acc = acc * m + c * I
        let mut next = zero();
        for i in 0..n {
            for k in 0..n {
                if acc[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if m[k][j].is_zero() {
                        continue;
                    }
                    let t = &acc[i][k] * &m[k][j];
                    next[i][j] += t;
                }
            }
        }
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c;
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(coeffs: &[i64]) -> Vec<BigRational> {
        coeffs.iter().map(|&c| BigRational::from(BigInt::from(c))).collect()
    }

    #[test]
    fn divmod_exact() {
        // (x^2 - 1) / (x - 1) = x + 1
        let (q, r) = divmod(&p(&[-1, 0, 1]), &p(&[-1, 1]));
        assert_eq!(q, p(&[1, 1]));
        assert!(is_zero(&r));
    }

    #[test]
    fn xgcd_coprime() {
        // gcd(x^2+1, x) = 1
        let (g, s, t) = xgcd(&p(&[1, 0, 1]), &p(&[0, 1]));
        assert_eq!(deg(&g), 0);
        let lhs = sub(&mul(&s, &p(&[1, 0, 1])), &mul(&t, &p(&[0, -1])));
        assert_eq!(trim(lhs), g);
    }
}
