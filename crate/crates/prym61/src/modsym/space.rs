use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::p1::SymbolClasses;
use crate::lattice::{hnf_rows, kernel_int, mat_mul, mat_transpose, snf_with_transforms, IMat};
use crate::util::gcd;

/// Subgroup choice for the level-N symbol space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subgroup {
    /// All of (Z/N)^*: symbols for Gamma_0(N).
    Full,
    /// The squares in (Z/N)^*: kernel of the quadratic character.
    Squares,
}

impl Subgroup {
    pub fn elements(&self, n: u64) -> Vec<u64> {
        if n == 1 {
            return vec![0];
        }
        match self {
            Subgroup::Full => (1..n).filter(|&x| gcd(x, n) == 1).collect(),
            Subgroup::Squares => {
                let mut v: Vec<u64> =
                    (1..n).filter(|&x| gcd(x, n) == 1).map(|x| x * x % n).collect();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Subgroup::Full => "full",
            Subgroup::Squares => "squares",
        }
    }
}

/// Manin-symbol model of the weight-2 modular symbol space for Gamma_H(N),
/// together with its boundary map and the cuspidal homology lattice.
pub struct ManinSpace {
    pub level: u64,
    pub subgroup: Subgroup,
    pub classes: SymbolClasses,
    /// rank of the torsion-free symbol quotient (relative homology)
    pub rank: usize,
    /// #symbols x rank projection to quotient coordinates
    pub proj: IMat,
    /// rank x #symbols section of `proj`
    pub lift: IMat,
    /// cusp representatives (p, q) with the class index of each symbol end
    pub cusps: Vec<(i64, i64)>,
    /// rank x #cusps boundary map on quotient coordinates
    pub boundary: IMat,
    /// basis rows (in quotient coordinates) of the cuspidal sublattice
    pub cuspidal: IMat,
    pub genus: usize,
    /// elliptic point counts (order 2, order 3) and cusp count
    pub nu2: usize,
    pub nu3: usize,
}

/// Build the symbol space. Relations imposed: `x + x sigma = 0` and
/// `x + x tau + x tau^2 = 0` with `sigma = [[0,-1],[1,0]]`,
/// `tau = [[0,-1],[1,-1]]` acting on the right of `(c : d)`.
pub fn build_space(level: u64, subgroup: Subgroup) -> ManinSpace {
    let h = subgroup.elements(level);
    let classes = SymbolClasses::new(level, &h);
    let m = classes.len();

    if level == 1 {
        // x + x sigma = 2x = 0 kills everything
        return ManinSpace {
            level,
            subgroup,
            classes,
            rank: 0,
            proj: vec![vec![]; 1],
            lift: vec![],
            cusps: vec![(1, 0)],
            boundary: vec![],
            cuspidal: vec![],
            genus: 0,
            nu2: 1,
            nu3: 1,
        };
    }

    let sigma = |c: i64, d: i64| (d, -c);
    let tau = |c: i64, d: i64| (d, -c - d);

    let mut relations: IMat = Vec::new();
    let mut seen_sigma = vec![false; m];
    let mut seen_tau = vec![false; m];
    let mut nu2 = 0usize;
    let mut nu3 = 0usize;
    for i in 0..m {
        let (c, d) = classes.reps[i];
        let (c, d) = (c as i64, d as i64);
        // sigma relation
        if !seen_sigma[i] {
            let (sc, sd) = sigma(c, d);
            let j = classes.index(sc, sd) as usize;
            seen_sigma[i] = true;
            seen_sigma[j] = true;
            let mut row = vec![BigInt::zero(); m];
            row[i] += 1;
            row[j] += 1;
            if i == j {
                nu2 += 1;
            }
            relations.push(row);
        }
        // tau relation
        if !seen_tau[i] {
            let (tc, td) = tau(c, d);
            let j = classes.index(tc, td) as usize;
            let (t2c, t2d) = tau(tc, td);
            let k = classes.index(t2c, t2d) as usize;
            seen_tau[i] = true;
            seen_tau[j] = true;
            seen_tau[k] = true;
            let mut row = vec![BigInt::zero(); m];
            row[i] += 1;
            row[j] += 1;
            row[k] += 1;
            if i == j && j == k {
                nu3 += 1;
            }
            relations.push(row);
        }
    }

    // free quotient via Smith form of the relation matrix
    let (s, _u, v) = snf_with_transforms(&relations);
    let nrel = relations.len();
    let mut rank_rel = 0usize;
    for i in 0..nrel.min(m) {
        if !s[i][i].is_zero() {
            rank_rel += 1;
        }
    }
    let rank = m - rank_rel;
    // projection: x -> (x V) restricted to the free coordinates
    let proj: IMat = (0..m).map(|i| (rank_rel..m).map(|j| v[i][j].clone()).collect()).collect();
    // section: rows rank_rel.. of V^-1
    let vinv = inv_unimodular(&v);
    let lift: IMat = (rank_rel..m).map(|i| vinv[i].clone()).collect();

    // boundary: symbol (g) = {g 0, g infinity} has boundary [a/c] - [b/d]
    let mut cusps: Vec<(i64, i64)> = Vec::new();
    let mut classify = |p: i64, q: i64, cusps: &mut Vec<(i64, i64)>| -> usize {
        let (p, q) = normalize_cusp(p, q);
        for (i, &(cp, cq)) in cusps.iter().enumerate() {
            if cusp_equivalent(level, &h, (cp, cq), (p, q)) {
                return i;
            }
        }
        cusps.push((p, q));
        cusps.len() - 1
    };
    let mut sym_boundary: Vec<(usize, usize)> = Vec::with_capacity(m);
    for i in 0..m {
        let [a, b, c, d] = classes.lift_to_sl2(i);
        let plus = classify(a, c, &mut cusps);
        let minus = classify(b, d, &mut cusps);
        sym_boundary.push((plus, minus));
    }
    let ncusps = cusps.len();
    let mut bmat = vec![vec![BigInt::zero(); ncusps]; m];
    for (i, &(plus, minus)) in sym_boundary.iter().enumerate() {
        bmat[i][plus] += 1;
        bmat[i][minus] -= 1;
    }
    // boundary on quotient coordinates: lift then apply
    let boundary = mat_mul(&lift, &bmat);

    // cuspidal sublattice: saturated kernel of the boundary (row vectors v
    // with v * boundary = 0)
    let cuspidal_rows = kernel_int(&mat_transpose(&boundary));
    let cuspidal = hnf_rows(&cuspidal_rows);
    let genus2 = cuspidal.len();
    assert!(genus2 % 2 == 0, "cuspidal rank is even");

    ManinSpace {
        level,
        subgroup,
        classes,
        rank,
        proj,
        lift,
        cusps,
        boundary,
        cuspidal,
        genus: genus2 / 2,
        nu2,
        nu3,
    }
}

impl ManinSpace {
    /// Project a symbol-space vector to quotient coordinates.
    pub fn project(&self, sym_vec: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.rank];
        for (i, c) in sym_vec.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if self.proj[i][j].is_zero() {
                    continue;
                }
                let t = c * &self.proj[i][j];
                out[j] += t;
            }
        }
        out
    }

    pub fn project_rational(&self, sym_vec: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.rank];
        for (i, c) in sym_vec.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if self.proj[i][j].is_zero() {
                    continue;
                }
                out[j] += c * BigRational::from(self.proj[i][j].clone());
            }
        }
        out
    }

    /// Genus from the standard index/elliptic/cusp count formula, as an
    /// independent cross-check on the homology rank.
    pub fn genus_by_formula(&self) -> i64 {
        if self.level == 1 {
            return 0;
        }
        let index = self.classes.len() as i64;
        let nu2 = self.nu2 as i64;
        let nu3 = self.nu3 as i64;
        let c = self.cusps.len() as i64;
        // g = 1 + index/12 - nu2/4 - nu3/3 - c/2 over Q
        let twelve_g = 12 + index - 3 * nu2 - 4 * nu3 - 6 * c;
        assert_eq!(twelve_g % 12, 0, "genus formula must give an integer");
        twelve_g / 12
    }
}

fn normalize_cusp(p: i64, q: i64) -> (i64, i64) {
    if q == 0 {
        return (1, 0);
    }
    let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
    let (mut p, mut q) = (p / g, q / g);
    if q < 0 {
        p = -p;
        q = -q;
    }
    (p, q)
}

/// Are two cusps Gamma_H(N)-equivalent? Tests gamma = g2 (+-T^j) g1^{-1} for
/// membership, j mod N.
fn cusp_equivalent(n: u64, h: &[u64], a: (i64, i64), b: (i64, i64)) -> bool {
    let n = n as i64;
    let g1 = lift_pair_cusp(a);
    let g2 = lift_pair_cusp(b);
    // g1^{-1} = [d, -b; -c, a]
    let inv1 = [g1[3], -g1[1], -g1[2], g1[0]];
    let in_h = |x: i64| h.contains(&(x.rem_euclid(n) as u64));
    for sign in [1i64, -1] {
        // gamma = g2 * sign * T^j * inv1; entries linear in j
        // T^j = [1, j; 0, 1]
        // base = g2 * inv1, jpart = g2 * [0,1;0,0] * inv1
        let base = mat2_mul(g2, inv1);
        let jm = mat2_mul(g2, mat2_mul([0, 1, 0, 0], inv1));
        for j in 0..n {
            let gamma = [
                sign * (base[0] + j * jm[0]),
                sign * (base[1] + j * jm[1]),
                sign * (base[2] + j * jm[2]),
                sign * (base[3] + j * jm[3]),
            ];
            if gamma[2].rem_euclid(n) == 0 && in_h(gamma[0]) && in_h(gamma[3]) {
                return true;
            }
        }
    }
    false
}

fn lift_pair_cusp((p, q): (i64, i64)) -> [i64; 4] {
    // matrix with first column (p, q): [p, x; q, y] with p y - x q = 1
    let (g, y, xn) = crate::util::xgcd(p, q);
    debug_assert_eq!(g, 1, "cusp not in lowest terms");
    [p, -xn, q, y]
}

fn mat2_mul(a: [i64; 4], b: [i64; 4]) -> [i64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// Inverse of a unimodular integer matrix (exact, via rational elimination).
fn inv_unimodular(v: &IMat) -> IMat {
    let n = v.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                v[i].iter().map(|x| BigRational::from(x.clone())).collect();
            for j in 0..n {
                row.push(if i == j { BigRational::one() } else { BigRational::zero() });
            }
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero()).expect("matrix is invertible");
        aug.swap(col, piv);
        let inv = aug[col][col].recip();
        for c in 0..2 * n {
            aug[col][c] = &aug[col][c] * &inv;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let f = aug[r][col].clone();
            for c in 0..2 * n {
                let t = &f * &aug[col][c];
                aug[r][c] -= t;
            }
        }
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = &aug[i][n + j];
                    assert!(x.denom().is_one(), "unimodular inverse must be integral");
                    x.numer().clone()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_11_is_genus_one() {
        let s = build_space(11, Subgroup::Full);
        assert_eq!(s.rank, 3); // 2g + cusps - 1 = 2 + 2 - 1
        assert_eq!(s.cusps.len(), 2);
        assert_eq!(s.cuspidal.len(), 2);
        assert_eq!(s.genus, 1);
        assert_eq!(s.genus_by_formula(), 1);
    }

    #[test]
    fn level_23_is_genus_two() {
        let s = build_space(23, Subgroup::Full);
        assert_eq!(s.cuspidal.len(), 4);
        assert_eq!(s.genus_by_formula(), 2);
    }

    #[test]
    fn level_61_squares_is_genus_eight() {
        let s = build_space(61, Subgroup::Squares);
        assert_eq!(s.classes.len(), 124);
        assert_eq!(s.cusps.len(), 4);
        assert_eq!(s.rank, 19);
        assert_eq!(s.cuspidal.len(), 16);
        assert_eq!(s.genus, 8);
        assert_eq!(s.genus_by_formula(), 8);
    }

    #[test]
    fn level_61_full_is_genus_four() {
        let s = build_space(61, Subgroup::Full);
        assert_eq!(s.cusps.len(), 2);
        assert_eq!(s.cuspidal.len(), 8);
        assert_eq!(s.genus_by_formula(), 4);
    }

    #[test]
    fn level_one_is_trivial() {
        let s = build_space(1, Subgroup::Full);
        assert_eq!(s.cuspidal.len(), 0);
    }

    #[test]
    fn projection_section_identity() {
        let s = build_space(61, Subgroup::Squares);
        let prod = mat_mul(&s.lift, &s.proj);
        assert_eq!(prod, crate::lattice::mat_identity(s.rank));
    }

    #[test]
    fn relations_die_in_quotient() {
        let s = build_space(11, Subgroup::Full);
        // x + x sigma projects to zero for every symbol
        for i in 0..s.classes.len() {
            let (c, d) = s.classes.reps[i];
            let j = s.classes.index(d as i64, -(c as i64)) as usize;
            let mut v = vec![BigInt::zero(); s.classes.len()];
            v[i] += 1;
            v[j] += 1;
            assert!(s.project(&v).iter().all(|x| x.is_zero()));
        }
    }
}
