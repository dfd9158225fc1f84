//! The structural map: representations to structures via a relation
//! measure, plus random and null reference structures.

mod baselines;
mod map;
pub mod measures;
mod representation;
mod structure;

pub use baselines::{null_structure, random_structure, RandomKind};
pub use map::{structural_map, structure_digest, text_structure};
pub use measures::{
    cosine_distance, edit_distance, euclidean, hellinger, jsd, Domain, MeasureKind,
    RelationMeasure,
};
pub use representation::Representation;
pub use structure::Structure;
