use std::fs::OpenOptions;
use std::path::{Path, PathBuf};

use super::Stage;
use crate::{Error, Result};

/// The artifacts a pivot run persists under its workdir.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckpointFile {
    /// Prepared source space (source frame).
    XInput,
    /// Prepared related monolingual space (z-mono frame).
    ZMono,
    /// Source mapped into the related frame (z-mono frame).
    XTilde,
    Stage1Map,
    Stage1Trace,
    Stage1Dict,
    /// Jointly-trained related space (z-joint frame).
    ZJoint,
    /// Jointly-trained target space (z-joint frame).
    YTilde,
    Stage2OrientationMap,
    /// Source in the final shared coordinates.
    XFinal,
    Stage3Map,
    Stage3Trace,
    Stage3Dict,
    Provenance,
}

impl CheckpointFile {
    pub fn file_name(self) -> &'static str {
        match self {
            CheckpointFile::XInput => "x_input.vec",
            CheckpointFile::ZMono => "z_mono.vec",
            CheckpointFile::XTilde => "x_tilde.vec",
            CheckpointFile::Stage1Map => "stage1_map.txt",
            CheckpointFile::Stage1Trace => "stage1_trace.csv",
            CheckpointFile::Stage1Dict => "stage1_dict.txt",
            CheckpointFile::ZJoint => "z_joint.vec",
            CheckpointFile::YTilde => "y_tilde.vec",
            CheckpointFile::Stage2OrientationMap => "stage2_orientation_map.txt",
            CheckpointFile::XFinal => "x_final.vec",
            CheckpointFile::Stage3Map => "stage3_map.txt",
            CheckpointFile::Stage3Trace => "stage3_trace.csv",
            CheckpointFile::Stage3Dict => "stage3_dict.txt",
            CheckpointFile::Provenance => "provenance.txt",
        }
    }

    pub fn stage(self) -> Stage {
        match self {
            CheckpointFile::XInput
            | CheckpointFile::ZMono
            | CheckpointFile::XTilde
            | CheckpointFile::Stage1Map
            | CheckpointFile::Stage1Trace
            | CheckpointFile::Stage1Dict => Stage::Stage1,
            CheckpointFile::ZJoint
            | CheckpointFile::YTilde
            | CheckpointFile::Stage2OrientationMap => Stage::Stage2,
            CheckpointFile::XFinal
            | CheckpointFile::Stage3Map
            | CheckpointFile::Stage3Trace
            | CheckpointFile::Stage3Dict
            | CheckpointFile::Provenance => Stage::Stage3,
        }
    }
}

pub fn checkpoint_path(workdir: &Path, file: CheckpointFile) -> PathBuf {
    workdir.join(file.file_name())
}

/// Errors with the owning stage's name when a checkpoint is absent.
pub fn require_checkpoint(workdir: &Path, file: CheckpointFile) -> Result<PathBuf> {
    let path = checkpoint_path(workdir, file);
    if !path.exists() {
        return Err(Error::MissingCheckpoint {
            stage: file.stage().as_str().to_string(),
            path,
        });
    }
    Ok(path)
}

/// Line-oriented provenance sidecar: config hash, seed, per-stage objective
/// summaries, and stage timings. Timing entries (keys ending in `_ms`) are
/// wall-clock and excluded from byte-reproducibility comparisons.
#[derive(Debug, Clone, Default)]
pub struct Provenance {
    pub entries: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(config_hash: u64, seed: u64) -> Self {
        let mut p = Provenance::default();
        p.push("config_hash", format!("{config_hash:016x}"));
        p.push("seed", seed.to_string());
        p
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push((key.into(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path.as_ref(), self.render()).map_err(|e| Error::io(path.as_ref(), e))
    }
}

/// Single-flight guard: an exclusive lock file per workdir, removed on drop.
#[derive(Debug)]
pub struct WorkdirLock {
    path: PathBuf,
}

impl WorkdirLock {
    pub fn acquire(workdir: &Path) -> Result<Self> {
        let path = workdir.join(".lock");
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(WorkdirLock { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                Err(Error::WorkdirLocked { path })
            }
            Err(e) => Err(Error::io(path, e)),
        }
    }
}

impl Drop for WorkdirLock {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lock_is_exclusive_and_released() {
        let dir = tempfile::tempdir().unwrap();
        let lock = WorkdirLock::acquire(dir.path()).unwrap();
        assert!(matches!(
            WorkdirLock::acquire(dir.path()),
            Err(Error::WorkdirLocked { .. })
        ));
        drop(lock);
        let _relock = WorkdirLock::acquire(dir.path()).unwrap();
    }

    #[test]
    fn missing_checkpoint_names_stage() {
        let dir = tempfile::tempdir().unwrap();
        match require_checkpoint(dir.path(), CheckpointFile::YTilde).unwrap_err() {
            Error::MissingCheckpoint { stage, .. } => assert_eq!(stage, "stage2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn provenance_round_trips_keys() {
        let mut p = Provenance::new(0xabcd, 7);
        p.push("stage1.objective", "0.5");
        assert_eq!(p.get("seed"), Some("7"));
        assert!(p.render().contains("config_hash=000000000000abcd\n"));
    }
}
