use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use crate::kvconfig::KvConfig;
use crate::mapper::{Direction, MapConfig, Retrieval, SeedMode};
use crate::trainer::TrainConfig;
use crate::{Error, Result};

/// Pipeline stage markers, ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Stage1,
    Stage2,
    Stage3,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Stage1 => "stage1",
            Stage::Stage2 => "stage2",
            Stage::Stage3 => "stage3",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "stage1" => Ok(Stage::Stage1),
            "stage2" => Ok(Stage::Stage2),
            "stage3" => Ok(Stage::Stage3),
            other => Err(Error::InvalidConfig(format!(
                "unknown stage {other:?} (expected stage1|stage2|stage3)"
            ))),
        }
    }
}

/// Full pipeline configuration. Parsed from flat key-value text; every field
/// has a default except the five paths.
#[derive(Debug, Clone)]
pub struct PivotConfig {
    pub source_embeddings: PathBuf,
    pub related_embeddings: PathBuf,
    pub parallel_related: PathBuf,
    pub parallel_target: PathBuf,
    pub workdir: PathBuf,
    pub train: TrainConfig,
    pub map_stage1: MapConfig,
    pub map_stage3: MapConfig,
    pub run_from: Stage,
    pub run_to: Stage,
    /// After joint training, rigidly orient the joint coordinate system onto
    /// the related language's monolingual frame using the related language's
    /// own shared tokens (no cross-lingual supervision involved).
    pub orient_joint_to_related: bool,
    /// Seed stage 3 from identical related-language tokens transported
    /// across the two frames instead of the unsupervised heuristic
    /// (robustness switch, off by default).
    pub stage3_z_anchor_seed: bool,
    pub seed: u64,
}

fn take_map_section(kv: &mut KvConfig, prefix: &str, seed: u64) -> Result<MapConfig> {
    let mut cfg = MapConfig {
        seed,
        ..MapConfig::default()
    };
    if let Some(s) = kv.take(&format!("{prefix}.retrieval")) {
        cfg.retrieval = Retrieval::parse(&s)?;
    }
    if let Some(v) = kv.take_parse(&format!("{prefix}.csls_k"))? {
        cfg.csls_k = v;
    }
    if let Some(v) = kv.take_parse(&format!("{prefix}.vocab_cutoff"))? {
        cfg.vocab_cutoff = v;
    }
    if let Some(v) = kv.take_parse(&format!("{prefix}.stochastic_keep"))? {
        cfg.stochastic_keep = v;
    }
    if let Some(v) = kv.take_parse(&format!("{prefix}.objective_tol"))? {
        cfg.objective_tol = v;
    }
    if let Some(v) = kv.take_parse(&format!("{prefix}.max_iters"))? {
        cfg.max_iters = v;
    }
    if let Some(s) = kv.take(&format!("{prefix}.direction")) {
        cfg.direction = Direction::parse(&s)?;
    }
    if let Some(s) = kv.take(&format!("{prefix}.seed_mode")) {
        cfg.seed_mode = SeedMode::parse(&s)?;
    }
    if let Some(v) = kv.take_parse(&format!("{prefix}.seed"))? {
        cfg.seed = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn take_train_section(kv: &mut KvConfig, seed: u64) -> Result<TrainConfig> {
    let mut cfg = TrainConfig {
        seed,
        ..TrainConfig::default()
    };
    if let Some(v) = kv.take_parse("train.dim")? {
        cfg.dim = v;
    }
    if let Some(v) = kv.take_parse("train.negatives")? {
        cfg.negatives = v;
    }
    if let Some(v) = kv.take_parse("train.subsample_threshold")? {
        cfg.subsample_threshold = v;
    }
    if let Some(v) = kv.take_parse("train.epochs")? {
        cfg.epochs = v;
    }
    if let Some(v) = kv.take_parse("train.window")? {
        cfg.window = v;
    }
    if let Some(v) = kv.take_parse("train.learning_rate")? {
        cfg.learning_rate = v;
    }
    if let Some(v) = kv.take_parse("train.min_count")? {
        cfg.min_count = v;
    }
    if let Some(v) = kv.take_parse("train.workers")? {
        cfg.workers = v;
    }
    if let Some(v) = kv.take_parse("train.seed")? {
        cfg.seed = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

impl PivotConfig {
    /// Parses and validates a config. Referenced files must exist, run
    /// markers must be ordered, and the trainer dimension must equal the
    /// pretrained embedding dimension (a silent projection would change the
    /// method, so a mismatch is a hard error).
    pub fn from_kv(mut kv: KvConfig) -> Result<Self> {
        let path_key = |kv: &mut KvConfig, key: &str| -> Result<PathBuf> {
            kv.take(key)
                .map(PathBuf::from)
                .ok_or_else(|| Error::InvalidConfig(format!("missing required key {key:?}")))
        };
        let source_embeddings = path_key(&mut kv, "source_embeddings")?;
        let related_embeddings = path_key(&mut kv, "related_embeddings")?;
        let parallel_related = path_key(&mut kv, "parallel_related")?;
        let parallel_target = path_key(&mut kv, "parallel_target")?;
        let workdir = path_key(&mut kv, "workdir")?;

        let seed: u64 = kv.take_parse("seed")?.unwrap_or(0);
        let run_from = match kv.take("run_from") {
            Some(s) => Stage::parse(&s)?,
            None => Stage::Stage1,
        };
        let run_to = match kv.take("run_to") {
            Some(s) => Stage::parse(&s)?,
            None => Stage::Stage3,
        };
        if run_from > run_to {
            return Err(Error::InvalidConfig(format!(
                "run_from {} is after run_to {}",
                run_from.as_str(),
                run_to.as_str()
            )));
        }
        let train = take_train_section(&mut kv, seed)?;
        let map_stage1 = take_map_section(&mut kv, "stage1", seed)?;
        let map_stage3 = take_map_section(&mut kv, "stage3", seed)?;
        let orient_joint_to_related =
            kv.take_bool("stage2.orient_to_related")?.unwrap_or(true);
        let stage3_z_anchor_seed = kv.take_bool("stage3.z_anchor_seed")?.unwrap_or(false);
        kv.ensure_consumed()?;

        let cfg = PivotConfig {
            source_embeddings,
            related_embeddings,
            parallel_related,
            parallel_target,
            workdir,
            train,
            map_stage1,
            map_stage3,
            run_from,
            run_to,
            orient_joint_to_related,
            stage3_z_anchor_seed,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_kv(KvConfig::from_file(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        for (what, path) in [
            ("source_embeddings", &self.source_embeddings),
            ("related_embeddings", &self.related_embeddings),
            ("parallel_related", &self.parallel_related),
            ("parallel_target", &self.parallel_target),
        ] {
            if !path.exists() {
                return Err(Error::InvalidConfig(format!(
                    "{what} file does not exist: {}",
                    path.display()
                )));
            }
        }
        let src_dim = embedding_file_dim(&self.source_embeddings)?;
        let rel_dim = embedding_file_dim(&self.related_embeddings)?;
        if src_dim != rel_dim {
            return Err(Error::InvalidConfig(format!(
                "pretrained dimensions differ: source {src_dim} vs related {rel_dim}"
            )));
        }
        if self.train.dim != rel_dim {
            return Err(Error::InvalidConfig(format!(
                "train.dim {} must equal the pretrained embedding dimension {rel_dim}",
                self.train.dim
            )));
        }
        self.train.validate()?;
        self.map_stage1.validate()?;
        self.map_stage3.validate()?;
        Ok(())
    }

    /// Canonical rendering of every effective value, hashed into provenance.
    pub fn canonical(&self) -> String {
        let map_lines = |prefix: &str, m: &MapConfig| {
            format!(
                "{prefix}.retrieval={}\n{prefix}.csls_k={}\n{prefix}.vocab_cutoff={}\n\
                 {prefix}.stochastic_keep={}\n{prefix}.objective_tol={}\n{prefix}.max_iters={}\n\
                 {prefix}.direction={}\n{prefix}.seed_mode={}\n{prefix}.seed={}\n",
                m.retrieval.as_str(),
                m.csls_k,
                m.vocab_cutoff,
                m.stochastic_keep,
                m.objective_tol,
                m.max_iters,
                m.direction.as_str(),
                m.seed_mode.as_str(),
                m.seed
            )
        };
        format!(
            "source_embeddings={}\nrelated_embeddings={}\nparallel_related={}\n\
             parallel_target={}\nworkdir={}\nseed={}\nrun_from={}\nrun_to={}\n\
             train.dim={}\ntrain.negatives={}\ntrain.subsample_threshold={}\n\
             train.epochs={}\ntrain.window={}\ntrain.learning_rate={}\n\
             train.min_count={}\ntrain.workers={}\ntrain.seed={}\n{}{}\
             stage2.orient_to_related={}\nstage3.z_anchor_seed={}\n",
            self.source_embeddings.display(),
            self.related_embeddings.display(),
            self.parallel_related.display(),
            self.parallel_target.display(),
            self.workdir.display(),
            self.seed,
            self.run_from.as_str(),
            self.run_to.as_str(),
            self.train.dim,
            self.train.negatives,
            self.train.subsample_threshold,
            self.train.epochs,
            self.train.window,
            self.train.learning_rate,
            self.train.min_count,
            self.train.workers,
            self.train.seed,
            map_lines("stage1", &self.map_stage1),
            map_lines("stage3", &self.map_stage3),
            self.orient_joint_to_related,
            self.stage3_z_anchor_seed,
        )
    }

    pub fn config_hash(&self) -> u64 {
        crate::hash::fnv64_str_seq(self.canonical().lines())
    }
}

/// Reads just the dimension from a word2vec text header.
fn embedding_file_dim(path: &Path) -> Result<usize> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut header = String::new();
    BufReader::new(file)
        .read_line(&mut header)
        .map_err(|e| Error::io(path, e))?;
    let mut parts = header.split_whitespace();
    let _n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(path, 1, "malformed header"))?;
    parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(path, 1, "malformed header"))
}
