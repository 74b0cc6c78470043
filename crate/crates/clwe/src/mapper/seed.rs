use ndarray::{s, Array2, Axis};

use super::retrieval::similarity_matrix;
use super::{MapConfig, SeedMode};
use crate::embeddings::{DictionaryPairs, EmbeddingSpace};
use crate::{Error, Result};

/// Builds the initial dictionary without any cross-lingual supervision.
///
/// Similarity-matrix mode: intra-lingual similarity matrices are computed on
/// the cutoff vocabulary, each row is sorted ascending and unit-normalized,
/// and rows are matched across languages by nearest neighbor. Sorted
/// similarity rows are invariant under orthogonal maps and row permutations,
/// which is what makes the heuristic work with zero supervision.
///
/// Identical-tokens mode seeds from string-equal tokens instead.
pub fn unsupervised_seed(
    x: &EmbeddingSpace,
    y: &EmbeddingSpace,
    cfg: &MapConfig,
) -> Result<DictionaryPairs> {
    cfg.validate()?;
    if !x.is_unit() {
        return Err(Error::NotUnitNormalized { op: "seeding" });
    }
    if !y.is_unit() {
        return Err(Error::NotUnitNormalized { op: "seeding" });
    }
    match cfg.seed_mode {
        SeedMode::IdenticalTokens => identical_token_seed(x, y, cfg),
        SeedMode::SimilarityMatrix => similarity_matrix_seed(x, y, cfg),
    }
}

fn identical_token_seed(
    x: &EmbeddingSpace,
    y: &EmbeddingSpace,
    cfg: &MapConfig,
) -> Result<DictionaryPairs> {
    let m_x = cfg.vocab_cutoff.min(x.len()) as u32;
    let m_y = cfg.vocab_cutoff.min(y.len()) as u32;
    let mut pairs = Vec::new();
    for sid in 0..m_x {
        if let Some(tid) = y.vocab().id(x.vocab().token(sid)) {
            if tid < m_y {
                pairs.push((sid, tid));
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::NoIdenticalTokens);
    }
    DictionaryPairs::new(pairs, x.vocab(), y.vocab())
}

fn similarity_matrix_seed(
    x: &EmbeddingSpace,
    y: &EmbeddingSpace,
    cfg: &MapConfig,
) -> Result<DictionaryPairs> {
    // Sorted rows are compared across languages, so both sides must use the
    // same cutoff length.
    let m = cfg.vocab_cutoff.min(x.len()).min(y.len());
    if m < 2 {
        return Err(Error::TooFewWords {
            needed: 2,
            found: m,
        });
    }
    let x_sig = sorted_similarity_signature(x, m);
    let y_sig = sorted_similarity_signature(y, m);
    let cross = similarity_matrix(x_sig.view(), y_sig.view());

    let mut pairs = Vec::with_capacity(2 * m);
    for i in 0..m {
        let j = argmax_row(cross.row(i).as_slice().expect("contiguous"));
        pairs.push((i as u32, j as u32));
    }
    for j in 0..m {
        let col: Vec<f64> = (0..m).map(|i| cross[[i, j]]).collect();
        let i = argmax_row(&col);
        pairs.push((i as u32, j as u32));
    }
    pairs.sort_unstable();
    pairs.dedup();
    DictionaryPairs::new(pairs, x.vocab(), y.vocab())
}

/// Intra-lingual similarity rows over the first `m` words, each sorted
/// ascending and unit-normalized.
fn sorted_similarity_signature(space: &EmbeddingSpace, m: usize) -> Array2<f64> {
    let block = space.matrix().slice(s![0..m, ..]);
    let mut sims = similarity_matrix(block, block);
    for mut row in sims.axis_iter_mut(Axis(0)) {
        row.as_slice_mut()
            .expect("contiguous row")
            .sort_unstable_by(f64::total_cmp);
        let norm = row.dot(&row).sqrt();
        // self-similarity 1 guarantees a positive norm
        row.mapv_inplace(|v| v / norm);
    }
    sims
}

fn argmax_row(values: &[f64]) -> usize {
    let mut best = 0usize;
    for (i, v) in values.iter().enumerate().skip(1) {
        if v.total_cmp(&values[best]).is_gt() {
            best = i;
        }
    }
    best
}
