//! Latent Dirichlet allocation by collapsed Gibbs sampling, with fold-in
//! inference for applying a trained model to other documents.

mod config;
mod gibbs;
mod infer;
mod model;

pub use config::LdaConfig;
pub use gibbs::{train_lda, train_lda_observed, training_digest, GibbsState, TrainedLda};
pub use infer::{infer_doc_topics, represent_symbols, representation_digest, DocTopicMatrix, DEFAULT_FOLD_ITERS};
pub use model::{TopicModel, MODEL_MAGIC};
