use rand::Rng;

use crate::embeddings::Vocabulary;

/// Unigram power for negative sampling; the word2vec convention.
const NEGATIVE_POWER: f64 = 0.75;

/// Negative-sampling distribution: probability of id i proportional to
/// `counts[i]^0.75`.
pub fn negative_sampling_distribution(vocab: &Vocabulary) -> Vec<f64> {
    let weights: Vec<f64> = vocab
        .counts()
        .iter()
        .map(|&c| (c as f64).powf(NEGATIVE_POWER))
        .collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Samples ids from the negative-sampling distribution by binary search on
/// the cumulative distribution (exact and deterministic given the RNG).
#[derive(Debug, Clone)]
pub struct UnigramSampler {
    cumulative: Vec<f64>,
}

impl UnigramSampler {
    pub fn new(vocab: &Vocabulary) -> Self {
        let probs = negative_sampling_distribution(vocab);
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in probs {
            acc += p;
            cumulative.push(acc);
        }
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        UnigramSampler { cumulative }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> u32 {
        let u: f64 = rng.gen();
        self.cumulative.partition_point(|&c| c <= u) as u32
    }
}

/// Per-id discard probability for frequent-word subsampling:
/// `max(0, 1 − sqrt(t / f))` for relative frequency `f`. Words at or below
/// the threshold are never discarded.
pub fn subsample_discard_probs(vocab: &Vocabulary, threshold: f64) -> Vec<f64> {
    let total = vocab.total_count() as f64;
    vocab
        .counts()
        .iter()
        .map(|&c| {
            let f = c as f64 / total;
            (1.0 - (threshold / f).sqrt()).max(0.0)
        })
        .collect()
}
