//! Shared skip-gram machinery: hogwild-shared parameter matrices, the
//! gradient step for one (center, context) group, and the learning-rate
//! schedule.

use std::sync::atomic::{AtomicU64, Ordering};

use ndarray::Array2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::sampler::UnigramSampler;
use super::{TrainConfig, LR_FLOOR_FRAC};

/// A parameter matrix shared across training workers. Workers update rows
/// without mutual exclusion (asynchronous hogwild updates); overlapping
/// writes are tolerated by the training contract, which judges multi-worker
/// output statistically. Single-worker runs are race-free and deterministic.
pub(crate) struct SharedMatrix {
    ptr: *mut f64,
    rows: usize,
    dim: usize,
    _own: Box<[f64]>,
}

unsafe impl Sync for SharedMatrix {}
unsafe impl Send for SharedMatrix {}

impl SharedMatrix {
    pub fn zeros(rows: usize, dim: usize) -> Self {
        let mut own = vec![0.0f64; rows * dim].into_boxed_slice();
        let ptr = own.as_mut_ptr();
        SharedMatrix {
            ptr,
            rows,
            dim,
            _own: own,
        }
    }

    /// Input-matrix init: uniform in [-0.5/dim, 0.5/dim), the word2vec
    /// convention. Drawn from a dedicated RNG so worker count cannot change
    /// initialization.
    pub fn seeded_uniform(rows: usize, dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut own = vec![0.0f64; rows * dim].into_boxed_slice();
        for v in own.iter_mut() {
            *v = (rng.gen::<f64>() - 0.5) / dim as f64;
        }
        let ptr = own.as_mut_ptr();
        SharedMatrix {
            ptr,
            rows,
            dim,
            _own: own,
        }
    }

    /// # Safety
    /// Callers may hold rows of the same matrix concurrently; data races on
    /// row contents are accepted per the hogwild contract.
    #[allow(clippy::mut_from_ref)]
    pub unsafe fn row_mut(&self, row: u32) -> &mut [f64] {
        debug_assert!((row as usize) < self.rows);
        std::slice::from_raw_parts_mut(self.ptr.add(row as usize * self.dim), self.dim)
    }

    pub fn to_array(&self) -> Array2<f64> {
        Array2::from_shape_vec((self.rows, self.dim), self._own.to_vec())
            .expect("consistent shape")
    }
}

/// One language's parameters: input (center) and output (context) vectors.
pub(crate) struct LangParams {
    pub input: SharedMatrix,
    pub output: SharedMatrix,
    pub sampler: UnigramSampler,
    pub discard: Vec<f64>,
}

impl LangParams {
    pub fn subsample<'a>(&self, sentence: &[u32], rng: &mut impl Rng, out: &'a mut Vec<u32>) {
        out.clear();
        for &id in sentence {
            let p = self.discard[id as usize];
            if p > 0.0 && rng.gen::<f64>() < p {
                continue;
            }
            out.push(id);
        }
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// One skip-gram group: center predicts `ctx` plus `negatives` samples from
/// the output-side unigram table. Returns the group loss
/// `−log σ(u_ctx·v) − Σ log σ(−u_neg·v)` measured before the update.
///
/// # Safety
/// `center` must come from the input matrix and `out` rows may be updated
/// concurrently by other workers (hogwild contract).
pub(crate) unsafe fn train_group(
    center: &mut [f64],
    out: &SharedMatrix,
    sampler: &UnigramSampler,
    ctx: u32,
    negatives: usize,
    lr: f64,
    rng: &mut impl Rng,
    grad_acc: &mut [f64],
) -> f64 {
    grad_acc.fill(0.0);
    let mut loss = 0.0;

    let u = out.row_mut(ctx);
    let x = dot(u, center);
    let sig = sigmoid(x);
    loss -= sig.max(1e-12).ln();
    let g = (1.0 - sig) * lr;
    axpy(g, u, grad_acc);
    axpy(g, center, u);

    for _ in 0..negatives {
        let neg = sampler.sample(rng);
        if neg == ctx {
            continue;
        }
        let un = out.row_mut(neg);
        let x = dot(un, center);
        let sig = sigmoid(x);
        loss -= (1.0 - sig).max(1e-12).ln();
        let g = -sig * lr;
        axpy(g, un, grad_acc);
        axpy(g, center, un);
    }

    for (c, g) in center.iter_mut().zip(grad_acc.iter()) {
        *c += g;
    }
    loss
}

/// Linear learning-rate decay over the total token budget with the word2vec
/// floor.
pub(crate) fn learning_rate(cfg: &TrainConfig, processed: u64, total: u64) -> f64 {
    let frac = 1.0 - processed as f64 / (total + 1) as f64;
    cfg.learning_rate * frac.max(LR_FLOOR_FRAC)
}

/// Tracks global progress for the learning-rate schedule across workers.
pub(crate) struct Progress {
    processed: AtomicU64,
    pub total: u64,
}

impl Progress {
    pub fn new(total: u64) -> Self {
        Progress {
            processed: AtomicU64::new(0),
            total,
        }
    }

    pub fn advance(&self, tokens: u64) -> u64 {
        self.processed.fetch_add(tokens, Ordering::Relaxed) + tokens
    }
}

/// Deterministic per-(worker, epoch) RNG stream, independent of thread
/// scheduling.
pub(crate) fn worker_rng(seed: u64, worker: usize, epoch: usize) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut z = seed
        .wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul((worker as u64).wrapping_add(1)))
        .wrapping_add(0xbf58476d1ce4e5b9u64.wrapping_mul((epoch as u64).wrapping_add(1)));
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// Contiguous shard bounds for `worker` of `workers` over `n` items.
pub(crate) fn shard_bounds(n: usize, workers: usize, worker: usize) -> (usize, usize) {
    let base = n / workers;
    let rem = n % workers;
    let start = worker * base + worker.min(rem);
    let len = base + usize::from(worker < rem);
    (start, start + len)
}
