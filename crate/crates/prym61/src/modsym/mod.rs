//! Modular symbols for the congruence subgroups Gamma_H(N): Manin-symbol
//! presentation, boundary map and cuspidal homology lattice, Hecke operators
//! by coset representatives, eigenvalue extraction, and twisted winding
//! elements with their expression of the isotypic sublattice.

mod p1;
mod space;
mod hecke;
mod winding;

pub use hecke::{hecke_matrix, isotypic_sublattice, EigenvalueExtractor};
pub use p1::SymbolClasses;
pub use space::{build_space, ManinSpace, Subgroup};
pub use winding::{
    express_homology_in_winding, winding_decompose, DirichletCharacter, HomologyExpression,
    WindingElement, WindingGenerators,
};
