//! Exact Schubert calculus on flag manifolds `G/P`.
//!
//! Structure constants are evaluated from the Cartan matrix through the
//! triangular operator on reduced words; integer linear algebra on top of
//! them produces presentations of the integral cohomology rings.

pub mod cartan;
pub mod characteristics;
pub mod cohomology;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod triangular;
pub mod weyl;

pub use cartan::{cartan_matrix, CartanMatrix, Family, LieType, RootSystem, RootVector, WeightVector};
pub use characteristics::{characteristic, expand_product, subwords_equal_to, ProductEngine, SchubertExpansion};
pub use cohomology::{
    assemble_full_flag, giambelli, gysin_analysis, minimal_generators, minimal_relations, relation_kernel,
    structure_matrix, weyl_orbit_invariants, GeneratorSet, GlueRelation, GysinTable, Presentation,
    StructureMatrixBundle,
};
pub use error::{Error, Result};
pub use linalg::{cokernel_structure, diagonalize_with_unit_minor, kernel_basis, AbelianGroupStructure, IntegerMatrix};
pub use poly::{monomial_basis, IntPolynomial, Monomial, VarSet};
pub use triangular::{cartan_matrix_of_word, StrictUpperMatrix};
pub use weyl::{enumerate_cosets, CosetTable, EnumerateOptions, ReducedWord, SchubertClass, WeylElement};
