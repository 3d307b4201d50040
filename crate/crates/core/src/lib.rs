//! Orthonormal product bases of the bipartite space C² ⊗ Cⁿ.
//!
//! The crate builds, verifies and structurally classifies product bases of a
//! qubit–qudit system. Every product basis of C² ⊗ Cⁿ decomposes into pairs
//! of antipodal qubit rays `(a, a⊥)`, each paired with two orthonormal bases
//! of a common subspace `V_i ⊆ Cⁿ`, and the subspaces split Cⁿ orthogonally.
//! The list of subspace dimensions, sorted, is a partition of `n` (the
//! *right type* of the basis).
//!
//! Modules:
//!
//! * [`numerics`]: dense complex vectors/matrices, Gram–Schmidt, closed-form
//!   singular values of 2×n matrices, subspace comparison.
//! * [`product_space`]: Kronecker products and their inverse (product-vector
//!   detection).
//! * [`analyzer`]: orthonormality/product checks, groupability, the full
//!   structural classification and mutual-unbiasedness checks.
//! * [`generator`]: product bases from a partition, named families and
//!   mutually unbiased product-basis triples.
//! * [`partitions`]: integer partitions and the type-count lower bound.
//! * [`basis_file`]: the JSON interchange format used by the CLI.

pub mod analyzer;
pub mod basis_file;
pub mod error;
pub mod generator;
pub mod numerics;
pub mod partitions;
pub mod product_space;

pub use analyzer::{
    check_groupable, check_pairwise_condition, classify, left_classify, mu_check,
    verify_orthonormal, verify_product_basis, PairBlock, ProductBasis, ProductCheck, RayClass,
    StructureReport,
};
pub use basis_file::BasisFile;
pub use error::{Error, Result};
pub use generator::{
    generate_from_type, named_family, random_unitary, FamilyOutput, FamilyParams, FamilyTag,
    PairMode, QubitMode, SubspaceMode, TypeSpec,
};
pub use numerics::{
    inner, orthonormalize, singular_values_2xn, subspace_equal, ComplexMatrix, ComplexScalar,
    ComplexVector, Subspace, Tolerances,
};
pub use partitions::{partition_count, partitions_of, type_count_lower_bound, Partition};
pub use product_space::{factorize, kron, qubit_orthogonal, Factorization, ProductVector};
