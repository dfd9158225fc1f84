//! Ensembles of topic models and the analyses over them: seed stability,
//! the meaning of k, and agreement between structural measures. Artifacts
//! are cached in a content-addressed store.

mod analysis;
mod config;
mod ensemble;
mod pipeline;
pub mod report;
mod spec;
mod store;
pub mod svg;

pub use analysis::{
    delta_agreement, k_sweep, stability_analysis, AgreementPair, AgreementReport, KCell, KSweepReport, PairValue,
    StabilityReport, K_VARIED,
};
pub use config::{
    CorpusSection, EnsembleSection, MeasuresSection, PreprocessSection, RunConfig, RunSection, SynthSection,
};
pub use ensemble::{
    build_ensemble, ensemble_symbols, BaselineManifest, Baselines, Ensemble, EnsembleManifest, ManifestMember, Member,
};
pub use pipeline::{Pipeline, RunManifest, RunSummary, StabilityLine};
pub use spec::{EnsembleSpec, LdaTemplate, Seeds};
pub use store::{StructureStore, STORE_ENV};
