use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;

pub fn mat_identity(n: usize) -> IMat {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let (ra, ca) = (a.len(), a[0].len());
    let cb = b[0].len();
    assert_eq!(ca, b.len(), "dimension mismatch");
    let mut out = vec![vec![BigInt::zero(); cb]; ra];
    for i in 0..ra {
        for k in 0..ca {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cb {
                if b[k][j].is_zero() {
                    continue;
                }
                let t = &a[i][k] * &b[k][j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn mat_transpose(a: &IMat) -> IMat {
    let (r, c) = (a.len(), a[0].len());
    let mut out = vec![vec![BigInt::zero(); r]; c];
    for i in 0..r {
        for j in 0..c {
            out[j][i] = a[i][j].clone();
        }
    }
    out
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det_bigint(a: &IMat) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: IMat = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = t.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division is exact");
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Row-style Hermite normal form (upper echelon, positive pivots, entries
/// above a pivot reduced modulo it). Returns the nonzero rows, which are a
/// canonical basis of the row lattice.
pub fn hnf_rows(a: &IMat) -> IMat {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut m: IMat = a.to_vec();
    let mut row = 0usize;
    for col in 0..cols {
        if row >= m.len() {
            break;
        }
        // gcd down the column via Euclidean row operations
        loop {
            let mut pivot: Option<usize> = None;
            for r in row..m.len() {
                if !m[r][col].is_zero() {
                    pivot = match pivot {
                        None => Some(r),
                        Some(p) => {
                            if m[r][col].magnitude() < m[p][col].magnitude() {
                                Some(r)
                            } else {
                                Some(p)
                            }
                        }
                    };
                }
            }
            let Some(p) = pivot else { break };
            m.swap(row, p);
            let mut any = false;
            for r in row + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let q = div_round(&m[r][col], &m[row][col]);
                if !q.is_zero() {
                    for c in 0..cols {
                        let t = &q * &m[row][c];
                        m[r][c] -= t;
                    }
                }
                if !m[r][col].is_zero() {
                    any = true;
                }
            }
            if !any {
                break;
            }
        }
        if m[row][col].is_zero() {
            continue;
        }
        if m[row][col].is_negative() {
            for c in 0..cols {
                m[row][c] = -m[row][c].clone();
            }
        }
        // reduce entries above the pivot
        for r in 0..row {
            if m[r][col].is_zero() {
                continue;
            }
            let q = m[r][col].div_floor(&m[row][col]);
            if !q.is_zero() {
                for c in 0..cols {
                    let t = &q * &m[row][c];
                    m[r][c] -= t;
                }
            }
        }
        row += 1;
    }
    m.truncate(row);
    m
}

/// Nearest-integer quotient.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if (&r * 2u32).magnitude() > b.magnitude() {
        if r.is_negative() == b.is_negative() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Smith normal form with transforms: returns (S, U, V) such that
/// `U * A * V = S`, U and V unimodular, S diagonal with divisibility chain.
pub fn snf_with_transforms(a: &IMat) -> (IMat, IMat, IMat) {
    let rows = a.len();
    let cols = a[0].len();
    let mut s = a.to_vec();
    let mut u = mat_identity(rows);
    let mut v = mat_identity(cols);
    let n = rows.min(cols);
    let mut t = 0usize;
    while t < n {
        // find a nonzero pivot in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !s[i][j].is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => s[i][j].magnitude() < s[pi][pj].magnitude(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        s.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut s, t, pj);
        swap_cols(&mut v, t, pj);
        // clear row and column t
        let mut done = false;
        while !done {
            done = true;
            for i in t + 1..rows {
                if s[i][t].is_zero() {
                    continue;
                }
                let q = div_round(&s[i][t], &s[t][t]);
                row_sub(&mut s, i, t, &q);
                row_sub(&mut u, i, t, &q);
                if !s[i][t].is_zero() {
                    s.swap(i, t);
                    u.swap(i, t);
                    done = false;
                }
            }
            for j in t + 1..cols {
                if s[t][j].is_zero() {
                    continue;
                }
                let q = div_round(&s[t][j], &s[t][t]);
                col_sub(&mut s, j, t, &q);
                col_sub(&mut v, j, t, &q);
                if !s[t][j].is_zero() {
                    swap_cols(&mut s, j, t);
                    swap_cols(&mut v, j, t);
                    done = false;
                }
            }
        }
        // ensure pivot divides the rest of the block
        let mut clean = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&s[i][j] % &s[t][t]).is_zero() {
                    // add row i to row t and restart the clearing
                    for c in 0..cols {
                        let add = s[i][c].clone();
                        s[t][c] += add;
                    }
                    for c in 0..rows {
                        let add = u[i][c].clone();
                        u[t][c] += add;
                    }
                    clean = false;
                    break 'scan;
                }
            }
        }
        if clean {
            if s[t][t].is_negative() {
                for c in 0..cols {
                    s[t][c] = -s[t][c].clone();
                }
                for c in 0..rows {
                    u[t][c] = -u[t][c].clone();
                }
            }
            t += 1;
        }
    }
    (s, u, v)
}

fn swap_cols(m: &mut IMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn row_sub(m: &mut IMat, i: usize, j: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let cols = m[0].len();
    for c in 0..cols {
        let t = q * &m[j][c];
        m[i][c] -= t;
    }
}

fn col_sub(m: &mut IMat, j: usize, i: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let t = q * &row[i];
        row[j] -= t;
    }
}

/// Nonzero diagonal entries of the Smith form (the elementary divisors).
pub fn snf_elementary_divisors(a: &IMat) -> Vec<BigInt> {
    let (s, _, _) = snf_with_transforms(a);
    let n = s.len().min(s[0].len());
    (0..n).map(|i| s[i][i].clone()).filter(|d| !d.is_zero()).collect()
}

/// Saturated basis of the right kernel `{x : A x = 0}`, as rows.
pub fn kernel_int(a: &IMat) -> IMat {
    let cols = a[0].len();
    let (s, _u, v) = snf_with_transforms(a);
    let n = s.len().min(cols);
    let mut rank = 0usize;
    for i in 0..n {
        if !s[i][i].is_zero() {
            rank += 1;
        }
    }
    // kernel basis = columns of V with index >= rank
    let mut out = Vec::with_capacity(cols - rank);
    for j in rank..cols {
        let mut row = Vec::with_capacity(cols);
        for v_row in v.iter().take(cols) {
            row.push(v_row[j].clone());
        }
        out.push(row);
    }
    out
}

/// Characteristic polynomial of a square integer matrix (Berkowitz,
/// division-free). Coefficients low-to-high; leading coefficient 1.
pub fn charpoly(a: &IMat) -> Vec<BigInt> {
    let n = a.len();
    if n == 0 {
        return vec![BigInt::one()];
    }
    // Berkowitz: iteratively build the characteristic polynomial vector
    let mut poly: Vec<BigInt> = vec![BigInt::one()];
    for k in 0..n {
        // principal k+1 x k+1 leading submatrix data
        let m = k + 1;
        let sub = |i: usize, j: usize| -> &BigInt { &a[i][j] };
        // Toeplitz column: [1, -a_kk, -(R A^0 C), -(R A^1 C), ...]
        // where R = row (a_k,0..a_k,k-1), C = col (a_0,k..a_k-1,k), A = leading k x k block
        let mut col: Vec<BigInt> = Vec::with_capacity(m + 1);
        col.push(BigInt::one());
        col.push(-sub(k, k).clone());
        if k > 0 {
            // iterate c = A^t C
            let mut c: Vec<BigInt> = (0..k).map(|i| sub(i, k).clone()).collect();
            for _t in 0..k {
                // dot R . c
                let mut dot = BigInt::zero();
                for i in 0..k {
                    dot += sub(k, i) * &c[i];
                }
                col.push(-dot);
                // c = A c
                let mut next = vec![BigInt::zero(); k];
                for (i, slot) in next.iter_mut().enumerate() {
                    let mut acc = BigInt::zero();
                    for j in 0..k {
                        acc += sub(i, j) * &c[j];
                    }
                    *slot = acc;
                }
                c = next;
            }
            col.truncate(m + 1);
        }
        // poly = toeplitz(col) * poly
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (i, pc) in poly.iter().enumerate() {
            for (j, tc) in col.iter().enumerate() {
                if i + j < next.len() {
                    let t = pc * tc;
                    next[i + j] += t;
                }
            }
        }
        poly = next;
    }
    // poly is highest-degree-first per Berkowitz convention; reverse to low-first
    poly.reverse();
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(det_bigint(&m(&[&[2, 1], &[1, 1]])), BigInt::one());
        assert_eq!(det_bigint(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), BigInt::zero());
        assert_eq!(det_bigint(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
    }

    #[test]
    fn hnf_canonical() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let h = hnf_rows(&a);
        // same lattice, echelon with positive pivots
        assert_eq!(h.len(), 3);
        assert!(h[0][0] > BigInt::zero());
        // HNF of the HNF is itself
        assert_eq!(hnf_rows(&h), h);
    }

    #[test]
    fn snf_divisibility_chain() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (s, u, v) = snf_with_transforms(&a);
        let prod = mat_mul(&mat_mul(&u, &a), &v);
        assert_eq!(prod, s);
        assert_eq!(det_bigint(&u).magnitude().clone(), BigInt::one().magnitude().clone());
        assert_eq!(det_bigint(&v).magnitude().clone(), BigInt::one().magnitude().clone());
        let divs = snf_elementary_divisors(&a);
        for w in divs.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain");
        }
    }

    #[test]
    fn snf_type_of_polarization_blocks() {
        // interleaved symplectic pairs with multipliers (1,2): divisors 1,1,2,2
        let e2 = m(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -2], &[0, 0, 2, 0]]);
        let divs = snf_elementary_divisors(&e2);
        let as_i64: Vec<i64> = divs.iter().map(|d| i64::try_from(d).unwrap()).collect();
        assert_eq!(as_i64, vec![1, 1, 2, 2]);
        // 6x6 block with multipliers (1,2,2): divisors 1,1,2,2,2,2
        let e3 = m(&[
            &[0, -1, 0, 0, 0, 0],
            &[1, 0, 0, 0, 0, 0],
            &[0, 0, 0, -2, 0, 0],
            &[0, 0, 2, 0, 0, 0],
            &[0, 0, 0, 0, 0, -2],
            &[0, 0, 0, 0, 2, 0],
        ]);
        let divs = snf_elementary_divisors(&e3);
        let as_i64: Vec<i64> = divs.iter().map(|d| i64::try_from(d).unwrap()).collect();
        assert_eq!(as_i64, vec![1, 1, 2, 2, 2, 2]);
    }

    #[test]
    fn kernel_is_saturated() {
        // kernel of [1 2 3] contains primitive vectors
        let a = m(&[&[1, 2, 3]]);
        let k = kernel_int(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: BigInt = v.iter().zip(&a[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
        // the 2x3 kernel matrix has elementary divisors 1,1 (saturation)
        let divs = snf_elementary_divisors(&k);
        assert!(divs.iter().all(|d| d == &BigInt::one()));
    }

    #[test]
    fn charpoly_companion() {
        // companion matrix of x^3 - 2x - 5
        let a = m(&[&[0, 0, 5], &[1, 0, 2], &[0, 1, 0]]);
        let cp = charpoly(&a);
        let as_i64: Vec<i64> = cp.iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert_eq!(as_i64, vec![-5, -2, 0, 1]);
    }

    #[test]
    fn charpoly_diagonal() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let cp = charpoly(&a);
        let as_i64: Vec<i64> = cp.iter().map(|c| i64::try_from(c).unwrap()).collect();
        // (x-2)(x-3) = 6 - 5x + x^2
        assert_eq!(as_i64, vec![6, -5, 1]);
    }
}
