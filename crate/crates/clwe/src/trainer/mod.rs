//! Skip-gram with negative sampling: monolingual training, and joint
//! bilingual training over sentence-aligned parallel text where each word
//! also predicts the window around its diagonally-projected position in the
//! other language.

mod config;
mod corpus;
mod joint;
mod mono;
mod sampler;
mod sgns;

pub use config::{TrainConfig, TrainStats, LR_FLOOR_FRAC};
pub use corpus::{build_vocab, load_corpus, load_parallel_corpus, Corpus, ParallelCorpus};
pub use joint::{projected_position, train_joint};
pub use mono::train_monolingual;
pub use sampler::{negative_sampling_distribution, subsample_discard_probs, UnigramSampler};
