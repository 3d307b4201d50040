//! Shared fixtures for the criterion benchmarks.

use prodbase::{generate_from_type, Partition, ProductBasis, TypeSpec};

/// A generated product basis of C² ⊗ Cⁿ with right type `partition`.
pub fn fixture(partition: &str, seed: u64) -> ProductBasis {
    let partition: Partition = partition.parse().expect("valid partition");
    generate_from_type(&TypeSpec::new(partition, seed)).expect("generation succeeds")
}
