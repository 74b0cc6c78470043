//! Scratch probe: seed quality and self-learning basins (deleted before finalization).

use clwe::embeddings::{DictionaryPairs, EmbeddingSpace};
use clwe::evaluator::{bli_precision, synth_generate, Relatedness, SynthSpec};
use clwe::mapper::{
    self_learn_from_seed, unsupervised_seed, MapConfig, Retrieval, SeedMode,
};
use clwe::trainer::{train_monolingual, Corpus, TrainConfig};

fn p1_identityish(xa: &EmbeddingSpace, ya: &EmbeddingSpace, top: u32) -> f64 {
    let mut pairs = Vec::new();
    for i in 0..(top.min(xa.len() as u32)) {
        if let Some(j) = ya.vocab().id(xa.vocab().token(i)) {
            pairs.push((i, j));
        }
    }
    let gold = DictionaryPairs::new(pairs, xa.vocab(), ya.vocab()).unwrap();
    bli_precision(xa, ya, &gold, Retrieval::Csls, 10, &[1], 0)
        .unwrap()
        .p_at(1)
        .unwrap()
}

fn seed_accuracy(seed: &DictionaryPairs, xa: &EmbeddingSpace, ya: &EmbeddingSpace) -> f64 {
    let correct = seed
        .pairs()
        .iter()
        .filter(|(s, t)| xa.vocab().token(*s) == ya.vocab().token(*t))
        .count();
    correct as f64 / seed.len() as f64
}

#[test]
#[ignore]
fn probe_seed_and_basin() {
    let spec = SynthSpec {
        vocab_size: 2000,
        dim: 50,
        sentences: 20_000,
        sentence_length: 12,
        noise_sigma: 0.01,
        relatedness: Relatedness {
            rotation_scale: 0.0,
            overlap: 1.0,
        },
        seed: 42,
    };
    let out = synth_generate(&spec).unwrap();
    let corpus = Corpus::from_lines(&out.corpus_z, 1).unwrap();
    let mut cfg = TrainConfig {
        dim: 50,
        negatives: 10,
        subsample_threshold: 1e-3,
        epochs: 10,
        window: 5,
        learning_rate: 0.025,
        min_count: 1,
        seed: 1,
        workers: 1,
    };
    let (a, _) = train_monolingual(&corpus, &cfg).unwrap();
    cfg.seed = 2;
    let (b, _) = train_monolingual(&corpus, &cfg).unwrap();
    let ap = a.prepare_for_mapping().unwrap();
    let bp = b.prepare_for_mapping().unwrap();

    // seed accuracy at different cutoffs
    for cutoff in [200usize, 500, 1000, 2000] {
        let map_cfg = MapConfig {
            vocab_cutoff: cutoff,
            ..MapConfig::default()
        };
        let seed = unsupervised_seed(&ap, &bp, &map_cfg).unwrap();
        eprintln!(
            "cutoff={cutoff}: sim-matrix seed accuracy {:.3} ({} pairs)",
            seed_accuracy(&seed, &ap, &bp),
            seed.len()
        );
    }

    // basin test: self-learn from a PARTIALLY correct seed. corrupt fraction
    // p of the identity seed over top-500.
    for corrupt in [0.0f64, 0.5, 0.8, 0.9, 0.95, 1.0] {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut pairs = Vec::new();
        for i in 0..500u32 {
            if let Some(j) = bp.vocab().id(ap.vocab().token(i)) {
                if rng.gen::<f64>() < corrupt {
                    pairs.push((i, rng.gen_range(0..500)));
                } else {
                    pairs.push((i, j));
                }
            }
        }
        let seed_dict = DictionaryPairs::new(pairs, ap.vocab(), bp.vocab()).unwrap();
        let map_cfg = MapConfig {
            vocab_cutoff: 20_000,
            max_iters: 200,
            seed: 5,
            ..MapConfig::default()
        };
        let learn = self_learn_from_seed(&ap, &bp, seed_dict, &map_cfg).unwrap();
        let mapped = learn.map.apply(&ap).unwrap();
        eprintln!(
            "corrupt={corrupt}: self-learn p@1={:.3} (iters={}, obj={:.4})",
            p1_identityish(&mapped, &bp, 200),
            learn.iterations,
            learn.best_objective
        );
    }

    // identical-token seed sanity (full overlap here): should be perfect
    let map_cfg = MapConfig {
        seed_mode: SeedMode::IdenticalTokens,
        ..MapConfig::default()
    };
    let seed = unsupervised_seed(&ap, &bp, &map_cfg).unwrap();
    eprintln!(
        "identical-token seed accuracy {:.3} ({} pairs)",
        seed_accuracy(&seed, &ap, &bp),
        seed.len()
    );
}
