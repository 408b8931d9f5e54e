use crate::util::gcd;

/// Right cosets of Gamma_H(N) in SL2(Z), encoded as pairs `(c : d)` over Z/N
/// with `gcd(c, d, N) = 1`, up to scaling by elements of H.
#[derive(Debug)]
pub struct SymbolClasses {
    pub level: u64,
    /// sorted elements of H <= (Z/N)^*
    pub subgroup: Vec<u64>,
    /// canonical representative of each class
    pub reps: Vec<(u64, u64)>,
    /// lookup table: index c*N + d -> class index (u32::MAX when invalid)
    table: Vec<u32>,
}

impl SymbolClasses {
    pub fn new(level: u64, subgroup: &[u64]) -> Self {
        let n = level;
        assert!(n >= 1);
        let mut h: Vec<u64> = subgroup.to_vec();
        h.sort_unstable();
        h.dedup();
        assert!(h.contains(&(1 % n.max(1))) || n == 1, "H must contain 1");
        if n == 1 {
            return SymbolClasses { level: 1, subgroup: vec![0], reps: vec![(0, 0)], table: vec![0] };
        }
        // -1 in H keeps the symbol space free of sign identifications beyond
        // the Manin relations
        assert!(h.contains(&(n - 1)), "H must contain -1 mod N");

        let nn = (n * n) as usize;
        let mut table = vec![u32::MAX; nn];
        let mut reps: Vec<(u64, u64)> = Vec::new();
        for c in 0..n {
            for d in 0..n {
                if gcd(gcd(c, d), n) != 1 {
                    continue;
                }
                if table[(c * n + d) as usize] != u32::MAX {
                    continue;
                }
                let idx = reps.len() as u32;
                // mark the whole H-orbit
                let mut canonical = (u64::MAX, u64::MAX);
                for &lam in &h {
                    let cc = lam * c % n;
                    let dd = lam * d % n;
                    if (cc, dd) < canonical {
                        canonical = (cc, dd);
                    }
                    table[(cc * n + dd) as usize] = idx;
                }
                reps.push(canonical);
            }
        }
        SymbolClasses { level: n, subgroup: h, reps, table }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Class index of `(c : d)` given any integer pair.
    #[inline]
    pub fn index(&self, c: i64, d: i64) -> u32 {
        let n = self.level as i64;
        if self.level == 1 {
            return 0;
        }
        let cc = c.rem_euclid(n) as u64;
        let dd = d.rem_euclid(n) as u64;
        let idx = self.table[(cc * self.level + dd) as usize];
        assert!(idx != u32::MAX, "({} : {}) is not a valid symbol mod {}", c, d, self.level);
        idx
    }

    /// Lift the class representative to a matrix [[a, b], [c, d]] in SL2(Z).
    pub fn lift_to_sl2(&self, idx: usize) -> [i64; 4] {
        let (c0, d0) = self.reps[idx];
        lift_pair(c0 as i64, d0 as i64, self.level as i64)
    }
}

/// Lift `(c : d) mod N` with gcd(c, d, N) = 1 to a genuine SL2(Z) matrix
/// [[a, b], [c', d']] with (c', d') = (c, d) mod N.
pub fn lift_pair(c: i64, d: i64, n: i64) -> [i64; 4] {
    if n == 1 {
        return [1, 0, 0, 1];
    }
    let mut c = c.rem_euclid(n);
    let mut d = d.rem_euclid(n);
    if c == 0 {
        c = n;
    }
    // ensure gcd(c, d) = 1 by shifting d by multiples of n
    let mut k = 0i64;
    while gcd(c.unsigned_abs(), d.unsigned_abs()) != 1 {
        d += n;
        k += 1;
        assert!(k < 10_000, "failed to make (c, d) coprime");
    }
    let (g, x, y) = crate::util::xgcd(d, -c);
    debug_assert_eq!(g, 1);
    // a d - b c = 1 with a = x, b = y
    [x, y, c, d]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares_mod(n: u64) -> Vec<u64> {
        let mut v: Vec<u64> = (1..n).filter(|&x| gcd(x, n) == 1).map(|x| x * x % n).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn full_group(n: u64) -> Vec<u64> {
        (1..n).filter(|&x| gcd(x, n) == 1).collect()
    }

    #[test]
    fn class_counts() {
        // Gamma_0(11): |P^1(Z/11)| = 12
        let s = SymbolClasses::new(11, &full_group(11));
        assert_eq!(s.len(), 12);
        // Gamma_H(61), H = squares: twice |P^1(Z/61)| = 124
        let s = SymbolClasses::new(61, &squares_mod(61));
        assert_eq!(s.subgroup.len(), 30);
        assert_eq!(s.len(), 124);
    }

    #[test]
    fn lifts_have_determinant_one() {
        let s = SymbolClasses::new(61, &squares_mod(61));
        for i in 0..s.len() {
            let [a, b, c, d] = s.lift_to_sl2(i);
            assert_eq!(a * d - b * c, 1);
            let (c0, d0) = s.reps[i];
            assert_eq!(c.rem_euclid(61) as u64, c0);
            assert_eq!(d.rem_euclid(61) as u64, d0);
        }
    }

    #[test]
    fn index_respects_scaling() {
        let s = SymbolClasses::new(61, &squares_mod(61));
        // scaling by a square lands in the same class; by a non-square not
        let i1 = s.index(2, 5);
        let i2 = s.index(2 * 4, 5 * 4); // 4 is a square
        assert_eq!(i1, i2);
        // 2 is not a square mod 61 (61 = 5 mod 8)
        let i3 = s.index(2 * 2, 5 * 2);
        assert_ne!(i1, i3);
    }
}
