//! Embedding and vocabulary data model, word2vec-text I/O, and the
//! normalization chain consumed by the mapper and the evaluators.

mod dictionary;
mod io;
mod space;
mod vocab;

pub use dictionary::{save_dictionary, DictionaryCoverage, DictionaryPairs, OovPolicy};
pub use io::{load_dictionary, load_embeddings, save_embeddings};
pub use space::{EmbeddingSpace, NormStep};
pub use vocab::Vocabulary;
