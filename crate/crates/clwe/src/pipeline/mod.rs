//! The three-stage pivot pipeline: offline-map source onto the related
//! language, jointly train related and target from parallel text, then
//! offline-map the two related-anchored spaces onto each other. Every stage
//! persists its artifacts so runs can resume and the ablation harness can
//! read intermediates exactly as produced.

mod checkpoint;
mod config;
mod frames;
mod run;

pub use checkpoint::{checkpoint_path, CheckpointFile, Provenance, WorkdirLock};
pub use config::{PivotConfig, Stage};
pub use frames::{Frame, FramedSpace};
pub use run::{
    load_ablation_inputs, run_pivot, stage1_align_source_to_related,
    stage2_joint_related_target, stage3_final_map, PivotOutcome, PivotResult, Stage1Output,
    Stage2Output, Stage3Output,
};
