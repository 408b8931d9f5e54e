//! Staged reconstruction of an abelian-surface computation over Q(sqrt(61)):
//! modular symbols and high-accuracy q-expansions for the level-61 newforms,
//! period matrices via twisted winding elements, numerical polarization and
//! endomorphism recovery, gluing with an elliptic curve, and exact arithmetic
//! verification of the resulting genus-3 plane quartic.
//!
//! The crate is organized as a library backing the `prym61` command-line
//! pipeline; see the `pipeline` module for the stage graph.

pub mod util;
pub mod exactnum;
pub mod apfloat;
pub mod lattice;
pub mod modsym;
