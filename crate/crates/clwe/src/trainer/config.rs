use crate::{Error, Result};

/// The learning rate decays linearly to this fraction of its initial value
/// over the total token count.
pub const LR_FLOOR_FRAC: f64 = 1e-4;

/// Skip-gram training configuration. Defaults follow the common fasttext/
/// word2vec settings: 300 dimensions, 10 negative samples, sub-sampling
/// threshold 1e-5, 5 epochs, window 5, initial learning rate 0.025.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub dim: usize,
    pub negatives: usize,
    pub subsample_threshold: f64,
    pub epochs: usize,
    pub window: usize,
    pub learning_rate: f64,
    pub min_count: u64,
    pub seed: u64,
    /// Concurrent workers updating shared parameters without mutual
    /// exclusion. 1 is deterministic.
    pub workers: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 300,
            negatives: 10,
            subsample_threshold: 1e-5,
            epochs: 5,
            window: 5,
            learning_rate: 0.025,
            min_count: 1,
            seed: 0,
            workers: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dim must be >= 1".into()));
        }
        if self.negatives == 0 {
            return Err(Error::InvalidConfig("negatives must be >= 1".into()));
        }
        if !(self.subsample_threshold > 0.0 && self.subsample_threshold <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "subsample_threshold must be in (0, 1], got {}",
                self.subsample_threshold
            )));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be >= 1".into()));
        }
        if self.window == 0 {
            return Err(Error::InvalidConfig("window must be >= 1".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "learning_rate must be > 0, got {}",
                self.learning_rate
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be >= 1".into()));
        }
        Ok(())
    }
}

/// Per-epoch training statistics.
#[derive(Debug, Clone, Default)]
pub struct TrainStats {
    /// Mean skip-gram loss (positive plus negatives per context) per epoch.
    pub epoch_mean_loss: Vec<f64>,
}
