use std::path::Path;
use std::time::Instant;

use super::checkpoint::{
    checkpoint_path, require_checkpoint, CheckpointFile, Provenance, WorkdirLock,
};
use super::config::{PivotConfig, Stage};
use super::frames::{Frame, FramedSpace};
use crate::embeddings::{
    load_embeddings, save_dictionary, save_embeddings, DictionaryPairs, EmbeddingSpace,
};
use crate::mapper::{
    orthogonal_procrustes, self_learn, self_learn_from_seed, similarity_matrix, write_trace_csv,
    MapConfig, OrthogonalMap, SelfLearnResult,
};
use crate::trainer::{load_parallel_corpus, train_joint, ParallelCorpus, TrainConfig, TrainStats};
use crate::{Error, Result};

/// Stage-1 products: the prepared inputs and the source space carried into
/// the related language's coordinates.
pub struct Stage1Output {
    pub x_input: FramedSpace,
    pub z_mono: FramedSpace,
    pub x_tilde: FramedSpace,
    pub map: OrthogonalMap,
    pub learn: SelfLearnResult,
}

/// Offline-maps the source space onto the related space with unsupervised
/// self-learning. Both inputs are normalized unit→center→unit first.
pub fn stage1_align_source_to_related(
    x_raw: &EmbeddingSpace,
    z_raw: &EmbeddingSpace,
    cfg: &MapConfig,
) -> Result<Stage1Output> {
    let x = x_raw.prepare_for_mapping()?;
    let z = z_raw.prepare_for_mapping()?;
    let learn = self_learn(&x, &z, cfg)?;
    let x_tilde = learn.map.apply(&x)?;
    Ok(Stage1Output {
        x_input: FramedSpace::new(Frame::SourceRaw, x),
        z_mono: FramedSpace::new(Frame::ZMono, z),
        x_tilde: FramedSpace::new(Frame::ZMono, x_tilde),
        map: learn.map.clone(),
        learn,
    })
}

/// Stage-2 products: the two jointly-trained spaces sharing the z-joint
/// frame.
pub struct Stage2Output {
    pub z_joint: FramedSpace,
    pub y_tilde: FramedSpace,
    pub stats: TrainStats,
    pub orientation: Option<OrthogonalMap>,
}

/// Jointly trains related and target embeddings from the parallel corpus and
/// normalizes both. When `orient_to` carries the related language's
/// monolingual space, the whole joint frame is rigidly rotated onto it by a
/// Procrustes solve over the related language's own shared tokens — a
/// within-language orientation convention, not a cross-lingual signal. The
/// re-learned joint vectors stay distinct from the monolingual ones.
pub fn stage2_joint_related_target(
    parallel: &ParallelCorpus,
    train_cfg: &TrainConfig,
    orient_to: Option<&EmbeddingSpace>,
) -> Result<Stage2Output> {
    let (z_joint_raw, y_tilde_raw, stats) = train_joint(parallel, train_cfg)?;
    let mut z_joint = z_joint_raw.prepare_for_mapping()?;
    let mut y_tilde = y_tilde_raw.prepare_for_mapping()?;
    let mut orientation = None;

    if let Some(z_mono) = orient_to {
        let mut pairs = Vec::new();
        for zj_id in 0..z_joint.len() as u32 {
            if let Some(zm_id) = z_mono.vocab().id(z_joint.vocab().token(zj_id)) {
                pairs.push((zj_id, zm_id));
            }
        }
        if pairs.is_empty() {
            return Err(Error::NoIdenticalTokens);
        }
        let dict = DictionaryPairs::new(pairs, z_joint.vocab(), z_mono.vocab())?;
        let w = orthogonal_procrustes(&z_joint, z_mono, &dict)?;
        z_joint = w.apply(&z_joint)?;
        let w_for_y = w
            .clone()
            .with_refs(Some(y_tilde.vocab().fingerprint()), None);
        y_tilde = w_for_y.apply(&y_tilde)?;
        orientation = Some(w);
    }

    Ok(Stage2Output {
        z_joint: FramedSpace::new(Frame::ZJoint, z_joint),
        y_tilde: FramedSpace::new(Frame::ZJoint, y_tilde),
        stats,
        orientation,
    })
}

/// Stage-3 products: the source space mapped into the target's coordinates.
pub struct Stage3Output {
    pub x_final: FramedSpace,
    pub map: OrthogonalMap,
    pub learn: SelfLearnResult,
}

/// Final unsupervised map from the z-mono-frame source onto the z-joint-frame
/// target. `anchor` optionally carries (z-mono, z-joint) spaces to seed the
/// dictionary from identical related-language tokens transported across the
/// frames; the default is the same unsupervised seed as stage 1.
pub fn stage3_final_map(
    x_tilde: &FramedSpace,
    y_tilde: &FramedSpace,
    cfg: &MapConfig,
    anchor: Option<(&EmbeddingSpace, &EmbeddingSpace)>,
) -> Result<Stage3Output> {
    let x = x_tilde.expect_frame(Frame::ZMono)?;
    let y = y_tilde.expect_frame(Frame::ZJoint)?;
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let xp = x.prepare_for_mapping()?;
    let yp = y.prepare_for_mapping()?;
    let learn = match anchor {
        None => self_learn(&xp, &yp, cfg)?,
        Some((z_mono, z_joint)) => {
            let seed = z_anchor_seed(&xp, &yp, z_mono, z_joint)?;
            self_learn_from_seed(&xp, &yp, seed, cfg)?
        }
    };
    let x_final = learn.map.apply(&xp)?;
    Ok(Stage3Output {
        x_final: FramedSpace::new(Frame::Final, x_final),
        map: learn.map.clone(),
        learn,
    })
}

/// Identical related-language tokens exist in both the z-mono and z-joint
/// frames; their nearest source/target rows form a seed dictionary.
fn z_anchor_seed(
    x_tilde: &EmbeddingSpace,
    y_tilde: &EmbeddingSpace,
    z_mono: &EmbeddingSpace,
    z_joint: &EmbeddingSpace,
) -> Result<DictionaryPairs> {
    let mut zm_ids = Vec::new();
    let mut zj_ids = Vec::new();
    for zj_id in 0..z_joint.len() as u32 {
        if let Some(zm_id) = z_mono.vocab().id(z_joint.vocab().token(zj_id)) {
            zm_ids.push(zm_id);
            zj_ids.push(zj_id);
        }
    }
    if zm_ids.is_empty() {
        return Err(Error::NoIdenticalTokens);
    }
    let zm_rows = stack_rows(z_mono, &zm_ids);
    let zj_rows = stack_rows(z_joint, &zj_ids);
    let sims_x = similarity_matrix(zm_rows.view(), x_tilde.view());
    let sims_y = similarity_matrix(zj_rows.view(), y_tilde.view());
    let mut pairs = Vec::with_capacity(zm_ids.len());
    for r in 0..zm_ids.len() {
        let i = argmax(sims_x.row(r).as_slice().expect("contiguous"));
        let j = argmax(sims_y.row(r).as_slice().expect("contiguous"));
        pairs.push((i as u32, j as u32));
    }
    pairs.sort_unstable();
    pairs.dedup();
    DictionaryPairs::new(pairs, x_tilde.vocab(), y_tilde.vocab())
}

fn stack_rows(space: &EmbeddingSpace, ids: &[u32]) -> ndarray::Array2<f64> {
    let mut out = ndarray::Array2::zeros((ids.len(), space.dim()));
    for (r, &id) in ids.iter().enumerate() {
        out.row_mut(r).assign(&space.row(id));
    }
    out
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if v.total_cmp(&values[best]).is_gt() {
            best = i;
        }
    }
    best
}

/// The full pipeline result, every space tagged with its frame.
pub struct PivotResult {
    pub x_tilde: FramedSpace,
    pub y_tilde: FramedSpace,
    pub z_mono: FramedSpace,
    pub z_joint: FramedSpace,
    pub x_final: FramedSpace,
    pub final_map: OrthogonalMap,
    pub provenance: Provenance,
}

/// What a `run_pivot` invocation produced. `result` is present when stage 3
/// ran; `warnings` carries non-convergence flags (the run still completes
/// with the best state).
pub struct PivotOutcome {
    pub completed_through: Stage,
    pub result: Option<PivotResult>,
    pub warnings: Vec<String>,
}

fn load_framed(workdir: &Path, file: CheckpointFile, frame: Frame) -> Result<FramedSpace> {
    let path = require_checkpoint(workdir, file)?;
    Ok(FramedSpace::new(frame, load_embeddings(path)?))
}

/// Executes stages 1–3 in order, resuming from checkpoints per the config's
/// stage markers. Later stages always read earlier stages' outputs from the
/// persisted checkpoints, so a resumed run is byte-identical to a fresh one
/// with the same seeds.
pub fn run_pivot(cfg: &PivotConfig) -> Result<PivotOutcome> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.workdir).map_err(|e| Error::io(&cfg.workdir, e))?;
    let _lock = WorkdirLock::acquire(&cfg.workdir)?;

    let mut provenance = Provenance::new(cfg.config_hash(), cfg.seed);
    let mut warnings = Vec::new();
    let workdir = cfg.workdir.as_path();
    let runs = |stage: Stage| cfg.run_from <= stage && stage <= cfg.run_to;

    if runs(Stage::Stage1) {
        let started = Instant::now();
        let x_raw = load_embeddings(&cfg.source_embeddings)?;
        let z_raw = load_embeddings(&cfg.related_embeddings)?;
        let out = stage1_align_source_to_related(&x_raw, &z_raw, &cfg.map_stage1)?;
        save_embeddings(&out.x_input.space, checkpoint_path(workdir, CheckpointFile::XInput))?;
        save_embeddings(&out.z_mono.space, checkpoint_path(workdir, CheckpointFile::ZMono))?;
        save_embeddings(&out.x_tilde.space, checkpoint_path(workdir, CheckpointFile::XTilde))?;
        out.map
            .save(checkpoint_path(workdir, CheckpointFile::Stage1Map))?;
        write_trace_csv(
            &out.learn.trace,
            checkpoint_path(workdir, CheckpointFile::Stage1Trace),
        )?;
        save_dictionary(
            &out.learn.dictionary,
            out.x_input.space.vocab(),
            out.z_mono.space.vocab(),
            checkpoint_path(workdir, CheckpointFile::Stage1Dict),
        )?;
        provenance.push("stage1.objective", format!("{}", out.learn.best_objective));
        provenance.push("stage1.iterations", out.learn.iterations.to_string());
        provenance.push("stage1.converged", out.learn.converged.to_string());
        provenance.push("stage1.dict_size", out.learn.dictionary.len().to_string());
        provenance.push("stage1.frame", out.x_tilde.frame.as_str());
        provenance.push("stage1.duration_ms", started.elapsed().as_millis().to_string());
        if !out.learn.converged {
            warnings.push(format!(
                "stage1: self-learning hit max_iters={} without stalling at keep 1.0; continuing with the best state",
                cfg.map_stage1.max_iters
            ));
        }
        provenance.write(checkpoint_path(workdir, CheckpointFile::Provenance))?;
    }
    if cfg.run_to == Stage::Stage1 {
        return Ok(PivotOutcome {
            completed_through: Stage::Stage1,
            result: None,
            warnings,
        });
    }

    if runs(Stage::Stage2) {
        let started = Instant::now();
        let z_mono = load_framed(workdir, CheckpointFile::ZMono, Frame::ZMono)?;
        let parallel =
            load_parallel_corpus(&cfg.parallel_related, &cfg.parallel_target, cfg.train.min_count)?;
        let orient = cfg.orient_joint_to_related.then_some(&z_mono.space);
        let out = stage2_joint_related_target(&parallel, &cfg.train, orient)?;
        save_embeddings(&out.z_joint.space, checkpoint_path(workdir, CheckpointFile::ZJoint))?;
        save_embeddings(&out.y_tilde.space, checkpoint_path(workdir, CheckpointFile::YTilde))?;
        if let Some(w) = &out.orientation {
            w.save(checkpoint_path(workdir, CheckpointFile::Stage2OrientationMap))?;
        }
        provenance.push("stage2.pairs", parallel.pairs.len().to_string());
        provenance.push("stage2.vocab_related", parallel.vocab_a.len().to_string());
        provenance.push("stage2.vocab_target", parallel.vocab_b.len().to_string());
        if let (Some(first), Some(last)) = (
            out.stats.epoch_mean_loss.first(),
            out.stats.epoch_mean_loss.last(),
        ) {
            provenance.push("stage2.first_epoch_loss", format!("{first}"));
            provenance.push("stage2.last_epoch_loss", format!("{last}"));
        }
        provenance.push("stage2.oriented", out.orientation.is_some().to_string());
        provenance.push("stage2.frame", out.y_tilde.frame.as_str());
        provenance.push("stage2.duration_ms", started.elapsed().as_millis().to_string());
        provenance.write(checkpoint_path(workdir, CheckpointFile::Provenance))?;
    }
    if cfg.run_to == Stage::Stage2 {
        return Ok(PivotOutcome {
            completed_through: Stage::Stage2,
            result: None,
            warnings,
        });
    }

    let started = Instant::now();
    let x_tilde = load_framed(workdir, CheckpointFile::XTilde, Frame::ZMono)?;
    let y_tilde = load_framed(workdir, CheckpointFile::YTilde, Frame::ZJoint)?;
    let anchor_spaces = if cfg.stage3_z_anchor_seed {
        let z_mono = load_framed(workdir, CheckpointFile::ZMono, Frame::ZMono)?;
        let z_joint = load_framed(workdir, CheckpointFile::ZJoint, Frame::ZJoint)?;
        Some((z_mono, z_joint))
    } else {
        None
    };
    let out = {
        let anchor = anchor_spaces
            .as_ref()
            .map(|(zm, zj)| (&zm.space, &zj.space));
        stage3_final_map(&x_tilde, &y_tilde, &cfg.map_stage3, anchor)?
    };
    save_embeddings(&out.x_final.space, checkpoint_path(workdir, CheckpointFile::XFinal))?;
    out.map
        .save(checkpoint_path(workdir, CheckpointFile::Stage3Map))?;
    write_trace_csv(
        &out.learn.trace,
        checkpoint_path(workdir, CheckpointFile::Stage3Trace),
    )?;
    save_dictionary(
        &out.learn.dictionary,
        x_tilde.space.vocab(),
        y_tilde.space.vocab(),
        checkpoint_path(workdir, CheckpointFile::Stage3Dict),
    )?;
    provenance.push("stage3.objective", format!("{}", out.learn.best_objective));
    provenance.push("stage3.iterations", out.learn.iterations.to_string());
    provenance.push("stage3.converged", out.learn.converged.to_string());
    provenance.push("stage3.dict_size", out.learn.dictionary.len().to_string());
    provenance.push("stage3.frame", out.x_final.frame.as_str());
    provenance.push("stage3.duration_ms", started.elapsed().as_millis().to_string());
    if !out.learn.converged {
        warnings.push(format!(
            "stage3: self-learning hit max_iters={} without stalling at keep 1.0; continuing with the best state",
            cfg.map_stage3.max_iters
        ));
    }
    provenance.write(checkpoint_path(workdir, CheckpointFile::Provenance))?;

    let z_mono = load_framed(workdir, CheckpointFile::ZMono, Frame::ZMono)?;
    let z_joint = load_framed(workdir, CheckpointFile::ZJoint, Frame::ZJoint)?;
    Ok(PivotOutcome {
        completed_through: Stage::Stage3,
        result: Some(PivotResult {
            x_tilde,
            y_tilde,
            z_mono,
            z_joint,
            x_final: out.x_final,
            final_map: out.map,
            provenance,
        }),
        warnings,
    })
}

/// The checkpointed spaces the ablation harness compares.
pub struct AblationArtifacts {
    pub x_input: EmbeddingSpace,
    pub x_tilde: EmbeddingSpace,
    pub x_final: EmbeddingSpace,
    pub y_tilde: EmbeddingSpace,
}

/// Loads the four ablation inputs from a pivot workdir, naming the absent
/// stage if a checkpoint is missing.
pub fn load_ablation_inputs(workdir: &Path) -> Result<AblationArtifacts> {
    Ok(AblationArtifacts {
        x_input: load_embeddings(require_checkpoint(workdir, CheckpointFile::XInput)?)?,
        x_tilde: load_embeddings(require_checkpoint(workdir, CheckpointFile::XTilde)?)?,
        x_final: load_embeddings(require_checkpoint(workdir, CheckpointFile::XFinal)?)?,
        y_tilde: load_embeddings(require_checkpoint(workdir, CheckpointFile::YTilde)?)?,
    })
}
