use super::bli::{bli_precision, BliReport};
use crate::embeddings::{DictionaryPairs, EmbeddingSpace};
use crate::mapper::Retrieval;
use crate::Result;

/// The three embedding schemes compared by the ablation harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Raw monolingual source against the target, no shared alignment.
    Unaligned,
    /// Source aligned to the related language against the jointly-trained
    /// target, before the final map.
    RelatedAligned,
    /// After the final offline map.
    Full,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Unaligned => "unaligned",
            Scheme::RelatedAligned => "related-aligned",
            Scheme::Full => "full",
        }
    }
}

/// The pipeline artifacts the ablation consumes. All three source variants
/// share one vocabulary; the target side is the jointly-trained space.
pub struct AblationInputs<'a> {
    pub x_unaligned: &'a EmbeddingSpace,
    pub x_related_aligned: &'a EmbeddingSpace,
    pub x_final: &'a EmbeddingSpace,
    pub y: &'a EmbeddingSpace,
}

/// Evaluates the same gold dictionary under the three schemes.
pub fn ablation_schemes(
    inputs: &AblationInputs<'_>,
    gold: &DictionaryPairs,
    retrieval: Retrieval,
    csls_k: usize,
    k_list: &[usize],
    skipped_oov: usize,
) -> Result<Vec<(Scheme, BliReport)>> {
    let run = |x: &EmbeddingSpace| -> Result<BliReport> {
        bli_precision(x, inputs.y, gold, retrieval, csls_k, k_list, skipped_oov)
    };
    Ok(vec![
        (Scheme::Unaligned, run(inputs.x_unaligned)?),
        (Scheme::RelatedAligned, run(inputs.x_related_aligned)?),
        (Scheme::Full, run(inputs.x_final)?),
    ])
}
