use rand::Rng;

use super::sampler::{subsample_discard_probs, UnigramSampler};
use super::sgns::{
    learning_rate, shard_bounds, train_group, worker_rng, LangParams, Progress, SharedMatrix,
};
use super::{Corpus, TrainConfig, TrainStats};
use crate::embeddings::EmbeddingSpace;
use crate::{Error, Result};

/// Trains skip-gram with negative sampling over a monolingual corpus and
/// returns the input-vector matrix.
///
/// Per center token a window size is drawn uniformly from `1..=window`;
/// frequent words are subsampled with discard probability
/// `max(0, 1 − sqrt(t/f))`; the learning rate decays linearly over the total
/// token count.
pub fn train_monolingual(corpus: &Corpus, cfg: &TrainConfig) -> Result<(EmbeddingSpace, TrainStats)> {
    cfg.validate()?;
    if corpus.sentences.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let n = corpus.vocab.len();
    let mut init_rng = worker_rng(cfg.seed, usize::MAX, 0);
    let params = LangParams {
        input: SharedMatrix::seeded_uniform(n, cfg.dim, &mut init_rng),
        output: SharedMatrix::zeros(n, cfg.dim),
        sampler: UnigramSampler::new(&corpus.vocab),
        discard: subsample_discard_probs(&corpus.vocab, cfg.subsample_threshold),
    };

    let progress = Progress::new(corpus.total_tokens * cfg.epochs as u64);
    let mut stats = TrainStats::default();

    for epoch in 0..cfg.epochs {
        let mut loss_sum = 0.0;
        let mut loss_count = 0u64;
        if cfg.workers == 1 {
            let (s, c) = run_shard(corpus, &params, cfg, &progress, 0, epoch, 0, corpus.sentences.len());
            loss_sum += s;
            loss_count += c;
        } else {
            let results: Vec<(f64, u64)> = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..cfg.workers)
                    .map(|w| {
                        let (lo, hi) = shard_bounds(corpus.sentences.len(), cfg.workers, w);
                        let params = &params;
                        let progress = &progress;
                        scope.spawn(move || run_shard(corpus, params, cfg, progress, w, epoch, lo, hi))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("worker")).collect()
            });
            for (s, c) in results {
                loss_sum += s;
                loss_count += c;
            }
        }
        stats
            .epoch_mean_loss
            .push(if loss_count == 0 { 0.0 } else { loss_sum / loss_count as f64 });
    }

    let space = EmbeddingSpace::new(corpus.vocab.clone(), params.input.to_array())?;
    Ok((space, stats))
}

fn run_shard(
    corpus: &Corpus,
    params: &LangParams,
    cfg: &TrainConfig,
    progress: &Progress,
    worker: usize,
    epoch: usize,
    lo: usize,
    hi: usize,
) -> (f64, u64) {
    let mut rng = worker_rng(cfg.seed, worker, epoch);
    let mut kept: Vec<u32> = Vec::new();
    let mut grad = vec![0.0f64; cfg.dim];
    let mut loss_sum = 0.0;
    let mut loss_count = 0u64;

    for sentence in &corpus.sentences[lo..hi] {
        let done = progress.advance(sentence.len() as u64);
        let lr = learning_rate(cfg, done, progress.total);
        params.subsample(sentence, &mut rng, &mut kept);
        for i in 0..kept.len() {
            let b = rng.gen_range(1..=cfg.window);
            let lo_c = i.saturating_sub(b);
            let hi_c = (i + b).min(kept.len() - 1);
            for c in lo_c..=hi_c {
                if c == i {
                    continue;
                }
                // Safety: hogwild contract; rows may race across workers.
                let loss = unsafe {
                    let center = params.input.row_mut(kept[i]);
                    train_group(
                        center,
                        &params.output,
                        &params.sampler,
                        kept[c],
                        cfg.negatives,
                        lr,
                        &mut rng,
                        &mut grad,
                    )
                };
                loss_sum += loss;
                loss_count += 1;
            }
        }
    }
    (loss_sum, loss_count)
}
