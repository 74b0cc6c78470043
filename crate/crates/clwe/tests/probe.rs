//! Scratch probe for empirical calibration (deleted before finalization).

use clwe::embeddings::DictionaryPairs;
use clwe::evaluator::{bli_precision, synth_generate, Relatedness, SynthSpec};
use clwe::mapper::Retrieval;
use clwe::trainer::{train_joint, ParallelCorpus, TrainConfig};

fn lines(v: &[String]) -> Vec<String> {
    v.to_vec()
}

#[test]
#[ignore]
fn probe_joint_oracle() {
    for (subsample, epochs, negs, window) in [
        (1.0f64, 5usize, 10usize, 5usize),
        (1e-2, 5, 10, 5),
        (1e-3, 5, 10, 5),
        (1e-5, 5, 10, 5),
        (1.0, 5, 5, 3),
    ] {
        let spec = SynthSpec {
            vocab_size: 200,
            dim: 32,
            sentences: 2000,
            sentence_length: 12,
            noise_sigma: 0.0,
            relatedness: Relatedness {
                rotation_scale: 0.0,
                overlap: 0.0,
            },
            seed: 42,
        };
        let out = synth_generate(&spec).unwrap();
        let parallel =
            ParallelCorpus::from_lines(&lines(&out.parallel_z), &lines(&out.parallel_y), 1)
                .unwrap();
        let cfg = TrainConfig {
            dim: 32,
            negatives: negs,
            subsample_threshold: subsample,
            epochs,
            window,
            learning_rate: 0.025,
            min_count: 1,
            seed: 7,
            workers: 1,
        };
        let t0 = std::time::Instant::now();
        let (z_sp, y_sp, stats) = train_joint(&parallel, &cfg).unwrap();
        let dt = t0.elapsed().as_secs_f64();

        // gold pairs for the top-50 most frequent z words
        let zp = z_sp.unit_normalize().unwrap();
        let yp = y_sp.unit_normalize().unwrap();
        let mut pairs = Vec::new();
        for (zt, yt) in &out.gold_zy {
            if let (Some(zi), Some(yi)) = (zp.vocab().id(zt), yp.vocab().id(yt)) {
                if zi < 50 {
                    pairs.push((zi, yi));
                }
            }
        }
        let gold = DictionaryPairs::new(pairs, zp.vocab(), yp.vocab()).unwrap();
        let report = bli_precision(&zp, &yp, &gold, Retrieval::Csls, 10, &[1], 0).unwrap();
        eprintln!(
            "subsample={subsample:.0e} epochs={epochs} negs={negs} window={window}: p@1={:.3} loss {:.3}->{:.3} ({dt:.1}s)",
            report.p_at(1).unwrap(),
            stats.epoch_mean_loss.first().unwrap(),
            stats.epoch_mean_loss.last().unwrap(),
        );
    }
}
