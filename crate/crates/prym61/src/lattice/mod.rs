//! Integer-lattice algorithms: exact-arithmetic LLL, Hermite and Smith normal
//! forms, integer kernels, and the scaled-embedding search for integer
//! solutions of numerical linear forms.
//!
//! Lattices are row lattices: a basis is a `Vec` of rows spanning the lattice
//! over Z.

mod intmat;
mod lll;
mod numeric;

pub use intmat::{
    charpoly, det_bigint, hnf_rows, kernel_int, mat_identity, mat_mul, mat_transpose,
    snf_elementary_divisors, snf_with_transforms, IMat,
};
pub use lll::{lll_reduce, lll_reduce_with_transform};
pub use numeric::{integer_kernel_numeric, KernelError};

use num_bigint::BigInt;

/// Integer lattice given by independent basis rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntLattice {
    pub basis: IMat,
    pub ambient_dim: usize,
}

impl IntLattice {
    pub fn new(basis: IMat) -> Self {
        let ambient_dim = basis.first().map(|r| r.len()).unwrap_or(0);
        assert!(basis.iter().all(|r| r.len() == ambient_dim), "ragged basis");
        IntLattice { basis, ambient_dim }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Canonical (row-HNF) basis of the same lattice.
    pub fn hnf(&self) -> IMat {
        hnf_rows(&self.basis)
    }

    /// Determinant of the Gram matrix (squared covolume).
    pub fn gram_det(&self) -> BigInt {
        let g = gram(&self.basis);
        det_bigint(&g)
    }
}

pub(crate) fn gram(rows: &IMat) -> IMat {
    let n = rows.len();
    let mut g = vec![vec![BigInt::from(0); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut acc = BigInt::from(0);
            for k in 0..rows[i].len() {
                acc += &rows[i][k] * &rows[j][k];
            }
            g[i][j] = acc.clone();
            g[j][i] = acc;
        }
    }
    g
}
