use std::collections::{BTreeMap, HashSet};

use crate::embeddings::{DictionaryPairs, EmbeddingSpace};
use crate::mapper::{csls_knn, nn_rank, Retrieval};
use crate::{Error, Result};

/// Bilingual lexicon induction precision report.
#[derive(Debug, Clone)]
pub struct BliReport {
    /// (k, precision) in ascending k order.
    pub precisions: Vec<(usize, f64)>,
    /// Distinct gold source words evaluated.
    pub evaluated: usize,
    /// Gold source words dropped earlier as out-of-vocabulary.
    pub skipped_oov: usize,
    pub retrieval: Retrieval,
    pub csls_k: usize,
}

impl BliReport {
    pub fn p_at(&self, k: usize) -> Option<f64> {
        self.precisions.iter().find(|(kk, _)| *kk == k).map(|(_, p)| *p)
    }
}

/// Precision@k over a gold dictionary: for each distinct gold source word,
/// retrieve the top-k targets (CSLS or plain cosine); the word counts as
/// correct at k if any of its gold translations appears. Precision is
/// correct / evaluated; `skipped_oov` carries the loader's count of source
/// words that never made it into the dictionary.
pub fn bli_precision(
    xa: &EmbeddingSpace,
    ya: &EmbeddingSpace,
    gold: &DictionaryPairs,
    retrieval: Retrieval,
    csls_k: usize,
    k_list: &[usize],
    skipped_oov: usize,
) -> Result<BliReport> {
    if gold.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    gold.check_refs(xa.vocab(), ya.vocab())?;
    if xa.dim() != ya.dim() {
        return Err(Error::DimensionMismatch {
            left: xa.dim(),
            right: ya.dim(),
        });
    }
    if k_list.is_empty() {
        return Err(Error::InvalidConfig("k_list must be non-empty".into()));
    }

    // Cosine semantics regardless of input scaling.
    let xa_unit;
    let xa = if xa.is_unit() {
        xa
    } else {
        xa_unit = xa.unit_normalize()?;
        &xa_unit
    };
    let ya_unit;
    let ya = if ya.is_unit() {
        ya
    } else {
        ya_unit = ya.unit_normalize()?;
        &ya_unit
    };

    let mut translations: BTreeMap<u32, HashSet<u32>> = BTreeMap::new();
    for &(s, t) in gold.pairs() {
        translations.entry(s).or_default().insert(t);
    }
    let queries: Vec<u32> = translations.keys().copied().collect();
    let top = k_list.iter().copied().max().expect("non-empty k_list");

    let ranked = match retrieval {
        Retrieval::Csls => csls_knn(xa.view(), ya.view(), csls_k, &queries, top)?,
        Retrieval::Nn => nn_rank(xa.view(), ya.view(), &queries, top)?,
    };

    let evaluated = queries.len();
    let mut precisions = Vec::with_capacity(k_list.len());
    let mut ks: Vec<usize> = k_list.to_vec();
    ks.sort_unstable();
    ks.dedup();
    for &k in &ks {
        let correct = queries
            .iter()
            .zip(&ranked)
            .filter(|(q, r)| {
                let golds = &translations[q];
                r.iter().take(k).any(|t| golds.contains(t))
            })
            .count();
        precisions.push((k, correct as f64 / evaluated as f64));
    }

    Ok(BliReport {
        precisions,
        evaluated,
        skipped_oov,
        retrieval,
        csls_k,
    })
}
