use crate::{Error, Result};

/// Retrieval rule used for dictionary induction and evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Retrieval {
    /// Cross-domain similarity local scaling (hubness-corrected cosine).
    Csls,
    /// Plain cosine nearest neighbor.
    Nn,
}

impl Retrieval {
    pub fn as_str(self) -> &'static str {
        match self {
            Retrieval::Csls => "csls",
            Retrieval::Nn => "nn",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csls" => Ok(Retrieval::Csls),
            "nn" => Ok(Retrieval::Nn),
            other => Err(Error::InvalidConfig(format!(
                "unknown retrieval {other:?} (expected csls|nn)"
            ))),
        }
    }
}

/// Which induction directions contribute to the dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Union of forward and backward inductions.
    Union,
    /// Forward only (ablation option).
    Forward,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Union => "union",
            Direction::Forward => "forward",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "union" => Ok(Direction::Union),
            "forward" => Ok(Direction::Forward),
            other => Err(Error::InvalidConfig(format!(
                "unknown direction {other:?} (expected union|forward)"
            ))),
        }
    }
}

/// How the initial dictionary is seeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedMode {
    /// Sorted intra-lingual similarity matching (fully unsupervised).
    SimilarityMatrix,
    /// String-equal tokens across the two vocabularies.
    IdenticalTokens,
}

impl SeedMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SeedMode::SimilarityMatrix => "sim-matrix",
            SeedMode::IdenticalTokens => "identical-tokens",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sim-matrix" => Ok(SeedMode::SimilarityMatrix),
            "identical-tokens" => Ok(SeedMode::IdenticalTokens),
            other => Err(Error::InvalidConfig(format!(
                "unknown seed mode {other:?} (expected sim-matrix|identical-tokens)"
            ))),
        }
    }
}

/// Configuration of the offline mapper.
#[derive(Debug, Clone)]
pub struct MapConfig {
    pub retrieval: Retrieval,
    /// CSLS neighborhood size.
    pub csls_k: usize,
    /// Induction restricted to the top-m most frequent words (clipped to the
    /// vocabulary size).
    pub vocab_cutoff: usize,
    /// Initial probability of keeping each induced pair; doubled whenever the
    /// objective stalls, capped at 1.0.
    pub stochastic_keep: f64,
    /// Relative objective improvement below which the loop is considered
    /// stalled.
    pub objective_tol: f64,
    pub max_iters: usize,
    pub direction: Direction,
    pub seed_mode: SeedMode,
    pub seed: u64,
}

impl Default for MapConfig {
    fn default() -> Self {
        MapConfig {
            retrieval: Retrieval::Csls,
            csls_k: 10,
            vocab_cutoff: 20_000,
            stochastic_keep: 0.1,
            objective_tol: 1e-6,
            max_iters: 500,
            direction: Direction::Union,
            seed_mode: SeedMode::SimilarityMatrix,
            seed: 0,
        }
    }
}

impl MapConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.stochastic_keep > 0.0 && self.stochastic_keep <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "stochastic_keep must be in (0, 1], got {}",
                self.stochastic_keep
            )));
        }
        if self.csls_k == 0 {
            return Err(Error::InvalidConfig("csls_k must be >= 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be >= 1".into()));
        }
        if self.vocab_cutoff == 0 {
            return Err(Error::InvalidConfig("vocab_cutoff must be >= 1".into()));
        }
        if !(self.objective_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "objective_tol must be > 0, got {}",
                self.objective_tol
            )));
        }
        Ok(())
    }
}
