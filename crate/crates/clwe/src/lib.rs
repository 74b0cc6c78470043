//! Cross-lingual word embeddings through a related-language pivot.
//!
//! The toolkit has three computational pillars and a verification harness:
//!
//! - [`mapper`]: unsupervised offline mapping between two embedding spaces —
//!   similarity-matrix seeding, orthogonal Procrustes solving, CSLS retrieval,
//!   and a self-learning refinement loop.
//! - [`trainer`]: skip-gram with negative sampling, monolingual and joint
//!   bilingual (sentence-aligned parallel text with a monotone diagonal
//!   word alignment).
//! - [`pipeline`]: the three-stage pivot — map source onto a related
//!   language, jointly train related and target, then map the two
//!   related-anchored spaces onto each other.
//! - [`evaluator`]: bilingual lexicon induction precision, eigenvalue
//!   similarity of k-NN graph Laplacians, ablation schemes, and a synthetic
//!   language generator that makes all of the above checkable at desk scale.

pub mod embeddings;
pub mod evaluator;
pub mod kvconfig;
pub mod mapper;
pub mod pipeline;
pub mod trainer;

mod error;
mod hash;

pub use error::{Error, Result};
