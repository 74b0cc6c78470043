//! Scratch probe: cross-run SGNS isomorphism (deleted before finalization).

use clwe::embeddings::{DictionaryPairs, EmbeddingSpace};
use clwe::evaluator::{bli_precision, synth_generate, Relatedness, SynthSpec};
use clwe::mapper::{self_learn, MapConfig, Retrieval};
use clwe::trainer::{train_monolingual, Corpus, TrainConfig};

fn p1_identityish(
    xa: &EmbeddingSpace,
    ya: &EmbeddingSpace,
    top: u32,
) -> f64 {
    // gold: same token in both vocabs, restricted to xa's top-`top` ids
    let mut pairs = Vec::new();
    for i in 0..xa.len() as u32 {
        if i >= top {
            break;
        }
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

#[test]
#[ignore]
fn probe_cross_run_isomorphism() {
    for (sentences, epochs, cutoff) in [
        (6_000usize, 5usize, 20_000usize),
        (6_000, 5, 500),
        (20_000, 5, 500),
        (20_000, 10, 500),
        (20_000, 10, 1000),
        (20_000, 10, 20_000),
        (50_000, 10, 1000),
    ] {
        let t = std::time::Instant::now();
        let spec = SynthSpec {
            vocab_size: 2000,
            dim: 50,
            sentences,
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
            epochs,
            window: 5,
            learning_rate: 0.025,
            min_count: 1,
            seed: 1,
            workers: 1,
        };
        let (a, _) = train_monolingual(&corpus, &cfg).unwrap();
        cfg.seed = 2;
        let (b, _) = train_monolingual(&corpus, &cfg).unwrap();

        // direct supervised check: procrustes on identity over top-200, then p@1
        let ap = a.prepare_for_mapping().unwrap();
        let bp = b.prepare_for_mapping().unwrap();
        let sup_dict = DictionaryPairs::new(
            (0..200u32)
                .filter_map(|i| bp.vocab().id(ap.vocab().token(i)).map(|j| (i, j)))
                .collect(),
            ap.vocab(),
            bp.vocab(),
        )
        .unwrap();
        let w = clwe::mapper::orthogonal_procrustes(&ap, &bp, &sup_dict).unwrap();
        let a_sup = w.apply(&ap).unwrap();
        let sup_p1 = p1_identityish(&a_sup, &bp, 200);

        // unsupervised self-learning
        let map_cfg = MapConfig {
            vocab_cutoff: cutoff,
            max_iters: 200,
            seed: 5,
            ..MapConfig::default()
        };
        let learn = self_learn(&ap, &bp, &map_cfg).unwrap();
        let a_uns = learn.map.apply(&ap).unwrap();
        let uns_p1 = p1_identityish(&a_uns, &bp, 200);
        eprintln!(
            "sent={sentences} epochs={epochs} cutoff={cutoff}: supervised p@1={sup_p1:.3} unsup p@1={uns_p1:.3} (iters={}, {:.0?})",
            learn.iterations,
            t.elapsed()
        );
    }
}
