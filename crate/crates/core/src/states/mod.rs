//! Entropy vectors of concrete quantum states.

pub mod catalog;
pub mod generators;
pub mod stabilizer;

pub use catalog::{
    build_catalog, coverage, placements, realize_pattern, standard_kinds, Catalog, CatalogEntry, Coverage,
    GeneratorKind, Realization,
};
pub use generators::{bell_vector, complementary_entropies, ghz_vector, perfect_vector, GeneratorSpec};
pub use stabilizer::{stabilizer_entropy_vector, CheckMatrix};
