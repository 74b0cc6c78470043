use rand::Rng;

use super::sampler::{subsample_discard_probs, UnigramSampler};
use super::sgns::{
    learning_rate, shard_bounds, train_group, worker_rng, LangParams, Progress, SharedMatrix,
};
use super::{ParallelCorpus, TrainConfig, TrainStats};
use crate::embeddings::EmbeddingSpace;
use crate::{Error, Result};

/// Monotone diagonal alignment: position `i` of a length-`src_len` sentence
/// projects to `round(i · tgt_len / src_len)`, clamped into the target
/// sentence.
pub fn projected_position(i: usize, src_len: usize, tgt_len: usize) -> usize {
    let j = (i as f64 * tgt_len as f64 / src_len as f64).round() as usize;
    j.min(tgt_len - 1)
}

/// Joint bilingual skip-gram over a sentence-aligned parallel corpus. Each
/// position predicts its own monolingual window plus the window around its
/// diagonally-projected position in the other sentence (that window includes
/// the projected word itself: cross-lingually it is a distinct token, and it
/// carries the translation signal). Both returned spaces share one
/// coordinate system by construction of the joint objective.
pub fn train_joint(
    parallel: &ParallelCorpus,
    cfg: &TrainConfig,
) -> Result<(EmbeddingSpace, EmbeddingSpace, TrainStats)> {
    cfg.validate()?;
    if parallel.pairs.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let mut init_rng = worker_rng(cfg.seed, usize::MAX, 0);
    let params_a = LangParams {
        input: SharedMatrix::seeded_uniform(parallel.vocab_a.len(), cfg.dim, &mut init_rng),
        output: SharedMatrix::zeros(parallel.vocab_a.len(), cfg.dim),
        sampler: UnigramSampler::new(&parallel.vocab_a),
        discard: subsample_discard_probs(&parallel.vocab_a, cfg.subsample_threshold),
    };
    let params_b = LangParams {
        input: SharedMatrix::seeded_uniform(parallel.vocab_b.len(), cfg.dim, &mut init_rng),
        output: SharedMatrix::zeros(parallel.vocab_b.len(), cfg.dim),
        sampler: UnigramSampler::new(&parallel.vocab_b),
        discard: subsample_discard_probs(&parallel.vocab_b, cfg.subsample_threshold),
    };

    let progress = Progress::new(parallel.total_tokens * cfg.epochs as u64);
    let mut stats = TrainStats::default();

    for epoch in 0..cfg.epochs {
        let mut loss_sum = 0.0;
        let mut loss_count = 0u64;
        if cfg.workers == 1 {
            let (s, c) = run_shard(
                parallel, &params_a, &params_b, cfg, &progress, 0, epoch, 0,
                parallel.pairs.len(),
            );
            loss_sum += s;
            loss_count += c;
        } else {
            let results: Vec<(f64, u64)> = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..cfg.workers)
                    .map(|w| {
                        let (lo, hi) = shard_bounds(parallel.pairs.len(), cfg.workers, w);
                        let (pa, pb, progress) = (&params_a, &params_b, &progress);
                        scope.spawn(move || {
                            run_shard(parallel, pa, pb, cfg, progress, w, epoch, lo, hi)
                        })
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

    let space_a = EmbeddingSpace::new(parallel.vocab_a.clone(), params_a.input.to_array())?;
    let space_b = EmbeddingSpace::new(parallel.vocab_b.clone(), params_b.input.to_array())?;
    Ok((space_a, space_b, stats))
}

#[allow(clippy::too_many_arguments)]
fn run_shard(
    parallel: &ParallelCorpus,
    params_a: &LangParams,
    params_b: &LangParams,
    cfg: &TrainConfig,
    progress: &Progress,
    worker: usize,
    epoch: usize,
    lo: usize,
    hi: usize,
) -> (f64, u64) {
    let mut rng = worker_rng(cfg.seed, worker, epoch);
    let mut kept_a: Vec<u32> = Vec::new();
    let mut kept_b: Vec<u32> = Vec::new();
    let mut grad = vec![0.0f64; cfg.dim];
    let mut loss_sum = 0.0;
    let mut loss_count = 0u64;

    for (sent_a, sent_b) in &parallel.pairs[lo..hi] {
        let done = progress.advance((sent_a.len() + sent_b.len()) as u64);
        let lr = learning_rate(cfg, done, progress.total);
        params_a.subsample(sent_a, &mut rng, &mut kept_a);
        params_b.subsample(sent_b, &mut rng, &mut kept_b);

        let (s, c) = train_side(&kept_a, &kept_b, params_a, params_b, cfg, lr, &mut rng, &mut grad);
        loss_sum += s;
        loss_count += c;
        let (s, c) = train_side(&kept_b, &kept_a, params_b, params_a, cfg, lr, &mut rng, &mut grad);
        loss_sum += s;
        loss_count += c;
    }
    (loss_sum, loss_count)
}

/// Centers from `own` predict their monolingual window plus the cross-lingual
/// window around the projected position in `other`.
#[allow(clippy::too_many_arguments)]
fn train_side(
    own: &[u32],
    other: &[u32],
    own_params: &LangParams,
    other_params: &LangParams,
    cfg: &TrainConfig,
    lr: f64,
    rng: &mut impl Rng,
    grad: &mut [f64],
) -> (f64, u64) {
    let mut loss_sum = 0.0;
    let mut loss_count = 0u64;
    for i in 0..own.len() {
        let b = rng.gen_range(1..=cfg.window);

        let lo_c = i.saturating_sub(b);
        let hi_c = (i + b).min(own.len().saturating_sub(1));
        for c in lo_c..=hi_c {
            if c == i {
                continue;
            }
            // Safety: hogwild contract; rows may race across workers.
            let loss = unsafe {
                let center = own_params.input.row_mut(own[i]);
                train_group(
                    center,
                    &own_params.output,
                    &own_params.sampler,
                    own[c],
                    cfg.negatives,
                    lr,
                    rng,
                    grad,
                )
            };
            loss_sum += loss;
            loss_count += 1;
        }

        if other.is_empty() {
            continue;
        }
        let j = projected_position(i, own.len(), other.len());
        let lo_x = j.saturating_sub(b);
        let hi_x = (j + b).min(other.len() - 1);
        for c in lo_x..=hi_x {
            // Safety: hogwild contract; rows may race across workers.
            let loss = unsafe {
                let center = own_params.input.row_mut(own[i]);
                train_group(
                    center,
                    &other_params.output,
                    &other_params.sampler,
                    other[c],
                    cfg.negatives,
                    lr,
                    rng,
                    grad,
                )
            };
            loss_sum += loss;
            loss_count += 1;
        }
    }
    (loss_sum, loss_count)
}
