//! Unsupervised offline mapping between two embedding spaces: the
//! similarity-matrix initialization heuristic, CSLS retrieval, dictionary
//! induction, the orthogonal Procrustes solver, and the self-learning
//! refinement loop that ties them together.

mod config;
mod induce;
mod map;
mod procrustes;
mod retrieval;
mod seed;
mod self_learn;

pub use config::{Direction, MapConfig, Retrieval, SeedMode};
pub use induce::{induce_dictionary, Induction};
pub use map::OrthogonalMap;
pub use procrustes::{orthogonal_procrustes, procrustes_objective};
pub use retrieval::{csls_knn, csls_score_matrix, nn_rank, rank_by_scores, similarity_matrix};
pub use seed::unsupervised_seed;
pub use self_learn::{
    self_learn, self_learn_from_seed, trace_csv, write_trace_csv, SelfLearnResult, TracePoint,
};
