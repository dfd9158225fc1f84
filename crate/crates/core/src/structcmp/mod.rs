//! Structural relation measures and meta-structures: structures compared
//! with each other, and meta-structures compared in turn.

mod correlation;
mod ledger;
mod measure;
mod meta;
mod procrustes;
pub mod svd;

pub use correlation::{
    average_ranks, extract, pearson, pearson_structures, spearman, spearman_structures, Extraction,
};
pub use ledger::DecisionLedger;
pub use measure::{DeltaId, StructuralMeasure};
pub use meta::{
    code_equivalence, group_mean_distance, meta_structure, nested_semantics, CodeEquivalence,
    Geometry, GroupStats, Label, MetaStructure, DEFAULT_MAX_LEVEL, META_MAGIC,
};
pub use procrustes::{procrustes_disparity, procrustes_matrices, DEGENERATE_NORM};
