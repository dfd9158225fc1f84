//! Latent symbol geometries.
//!
//! A *structure* is the full matrix of pairwise relations a model imposes on
//! a set of symbols. This crate builds structures from corpora (documents →
//! document-term counts → LDA doc-topic mixtures → pairwise divergences) and
//! compares them with structural measures (Procrustes disparity, Pearson and
//! Spearman correlation over entries), producing meta-structures over the
//! modeling decisions that were varied.
//!
//! Numeric containers are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar for the common case.

pub mod corpus;
pub mod digest;
pub mod error;
pub mod experiments;
pub mod lda;
pub mod matrix;
pub mod provenance;
pub mod relations;
pub mod rng;
pub mod scalar;
pub mod structcmp;
mod textio;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Matrix64 = matrix::Matrix<f64>;
pub type Matrix32 = matrix::Matrix<f32>;
pub type Representation64 = relations::Representation<f64>;
pub type Representation32 = relations::Representation<f32>;
pub type Structure64 = relations::Structure<f64>;
pub type Structure32 = relations::Structure<f32>;
pub type MetaStructure64 = structcmp::MetaStructure<f64>;
pub type MetaStructure32 = structcmp::MetaStructure<f32>;
