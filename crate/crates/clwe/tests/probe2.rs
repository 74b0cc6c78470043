//! Scratch probe for the end-to-end pivot (deleted before finalization).

use clwe::embeddings::{DictionaryPairs, EmbeddingSpace};
use clwe::evaluator::{
    bli_precision, eigenvalue_similarity, synth_generate, LaplacianKind, Relatedness, SynthSpec,
};
use clwe::mapper::{self_learn, MapConfig, Retrieval};
use clwe::pipeline::{
    stage1_align_source_to_related, stage2_joint_related_target, stage3_final_map,
};
use clwe::trainer::{train_monolingual, Corpus, ParallelCorpus, TrainConfig};

fn gold_pairs(
    gold: &[(String, String)],
    a: &EmbeddingSpace,
    b: &EmbeddingSpace,
) -> DictionaryPairs {
    let mut pairs = Vec::new();
    for (s, t) in gold {
        if let (Some(si), Some(ti)) = (a.vocab().id(s), b.vocab().id(t)) {
            pairs.push((si, ti));
        }
    }
    DictionaryPairs::new(pairs, a.vocab(), b.vocab()).unwrap()
}

fn p1(xa: &EmbeddingSpace, ya: &EmbeddingSpace, gold: &DictionaryPairs) -> f64 {
    bli_precision(xa, ya, gold, Retrieval::Csls, 10, &[1], 0)
        .unwrap()
        .p_at(1)
        .unwrap()
}

fn run_triple(rotation_scale: f64, overlap: f64, seed: u64, full_eval: bool) {
    let t_all = std::time::Instant::now();
    let spec = SynthSpec {
        vocab_size: 2000,
        dim: 50,
        sentences: 6000,
        sentence_length: 12,
        noise_sigma: 0.01,
        relatedness: Relatedness {
            rotation_scale,
            overlap,
        },
        seed,
    };
    let out = synth_generate(&spec).unwrap();

    let map_cfg = MapConfig {
        max_iters: 200,
        seed: seed + 1,
        ..MapConfig::default()
    };
    let train_cfg = TrainConfig {
        dim: 50,
        negatives: 10,
        subsample_threshold: 1e-3,
        epochs: 5,
        window: 5,
        learning_rate: 0.025,
        min_count: 1,
        seed: seed + 2,
        workers: 1,
    };

    // pretrained-style inputs: train monolingual embeddings from the corpora
    let x_corpus = Corpus::from_lines(&out.corpus_x, 1).unwrap();
    let z_corpus = Corpus::from_lines(&out.corpus_z, 1).unwrap();
    let (x_vec, _) = train_monolingual(&x_corpus, &train_cfg).unwrap();
    let (z_vec, _) = train_monolingual(&z_corpus, &train_cfg).unwrap();
    eprintln!(
        "[{:.0?}] trained mono x ({} words), z ({} words)",
        t_all.elapsed(),
        x_vec.len(),
        z_vec.len()
    );

    let s1 = stage1_align_source_to_related(&x_vec, &z_vec, &map_cfg).unwrap();
    let gold_xz = gold_pairs(&out.gold_xz, &s1.x_tilde.space, &s1.z_mono.space);
    let stage1_p1 = p1(&s1.x_tilde.space, &s1.z_mono.space, &gold_xz);
    eprintln!(
        "[{:.0?}] stage1: p@1={stage1_p1:.3} iters={} converged={}",
        t_all.elapsed(),
        s1.learn.iterations,
        s1.learn.converged,
    );

    let parallel = ParallelCorpus::from_lines(&out.parallel_z, &out.parallel_y, 1).unwrap();
    let s2 = stage2_joint_related_target(&parallel, &train_cfg, Some(&s1.z_mono.space)).unwrap();
    let gold_zz = {
        let mut pairs = Vec::new();
        for zj in 0..s2.z_joint.space.len() as u32 {
            if let Some(zm) = s1.z_mono.space.vocab().id(s2.z_joint.space.vocab().token(zj)) {
                pairs.push((zj, zm));
            }
        }
        DictionaryPairs::new(pairs, s2.z_joint.space.vocab(), s1.z_mono.space.vocab()).unwrap()
    };
    let orient_quality = p1(&s2.z_joint.space, &s1.z_mono.space, &gold_zz);
    eprintln!(
        "[{:.0?}] stage2: oriented z-joint vs z-mono p@1={orient_quality:.3}",
        t_all.elapsed(),
    );

    let map3 = MapConfig { seed: seed + 3, ..map_cfg.clone() };
    let s3 = stage3_final_map(&s1.x_tilde, &s2.y_tilde, &map3, None).unwrap();
    eprintln!(
        "[{:.0?}] stage3: iters={} converged={} obj={:.4}",
        t_all.elapsed(),
        s3.learn.iterations,
        s3.learn.converged,
        s3.learn.best_objective,
    );

    let gold_xy = gold_pairs(&out.gold_xy, &s1.x_input.space, &s2.y_tilde.space);
    let unaligned = p1(&s1.x_input.space, &s2.y_tilde.space, &gold_xy);
    let related = p1(&s1.x_tilde.space, &s2.y_tilde.space, &gold_xy);
    let full = p1(&s3.x_final.space, &s2.y_tilde.space, &gold_xy);
    eprintln!(
        "[{:.0?}] ablation(rot={rotation_scale},ovl={overlap},seed={seed}): unaligned={unaligned:.4} related={related:.4} full={full:.4}",
        t_all.elapsed()
    );

    if !full_eval {
        return;
    }

    // direct offline baseline
    let y_corpus = Corpus::from_lines(&out.parallel_y, 1).unwrap();
    let (y_mono_raw, _) = train_monolingual(&y_corpus, &train_cfg).unwrap();
    let xb = x_vec.prepare_for_mapping().unwrap();
    let yb = y_mono_raw.prepare_for_mapping().unwrap();
    let bl = self_learn(&xb, &yb, &MapConfig { seed: seed + 4, ..map_cfg.clone() }).unwrap();
    let x_base = bl.map.apply(&xb).unwrap();
    let gold_xy_base = gold_pairs(&out.gold_xy, &x_base, &yb);
    let baseline = p1(&x_base, &yb, &gold_xy_base);
    eprintln!(
        "[{:.0?}] baseline direct: p@1={baseline:.4} converged={}",
        t_all.elapsed(),
        bl.converged,
    );

    let eig_pivot = eigenvalue_similarity(
        &s3.x_final.space,
        &s2.y_tilde.space,
        1000,
        10,
        0.9,
        LaplacianKind::Unnormalized,
    )
    .unwrap();
    let eig_base =
        eigenvalue_similarity(&x_base, &yb, 1000, 10, 0.9, LaplacianKind::Unnormalized).unwrap();
    eprintln!(
        "[{:.0?}] eigsim: pivot delta={:.2} (k={}), baseline delta={:.2} (k={})",
        t_all.elapsed(),
        eig_pivot.delta,
        eig_pivot.k_effective,
        eig_base.delta,
        eig_base.k_effective,
    );
}

#[test]
#[ignore]
fn probe_end_to_end() {
    run_triple(0.1, 0.5, 42, true);
}

#[test]
#[ignore]
fn probe_sweep() {
    run_triple(0.1, 0.8, 42, false);
    run_triple(0.5, 0.5, 42, false);
    run_triple(1.0, 0.2, 42, false);
}
