use ndarray::{Array2, ArrayView1, ArrayView2, Axis};

use super::Vocabulary;
use crate::{Error, Result};

/// A normalization step applied to an embedding matrix, recorded in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormStep {
    /// Every row divided by its Euclidean norm.
    Unit,
    /// Column means subtracted.
    Center,
}

/// A vocabulary plus a row-per-word real matrix, with the normalization
/// history recorded so downstream stages can check their preconditions.
#[derive(Debug, Clone)]
pub struct EmbeddingSpace {
    vocab: Vocabulary,
    matrix: Array2<f64>,
    norm_state: Vec<NormStep>,
}

impl EmbeddingSpace {
    pub fn new(vocab: Vocabulary, matrix: Array2<f64>) -> Result<Self> {
        if matrix.nrows() != vocab.len() {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows(),
                right: vocab.len(),
            });
        }
        if matrix.ncols() == 0 {
            return Err(Error::InvalidConfig("embedding dimension must be >= 1".into()));
        }
        if !matrix.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "embedding matrix".into(),
            });
        }
        Ok(EmbeddingSpace {
            vocab,
            matrix,
            norm_state: Vec::new(),
        })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.matrix.view()
    }

    pub fn row(&self, id: u32) -> ArrayView1<'_, f64> {
        self.matrix.row(id as usize)
    }

    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn norm_state(&self) -> &[NormStep] {
        &self.norm_state
    }

    /// True when the last normalization step was `unit` (rows have norm 1).
    pub fn is_unit(&self) -> bool {
        self.norm_state.last() == Some(&NormStep::Unit)
    }

    /// Divides every row by its Euclidean norm. Errors on a zero row, naming
    /// the offending token.
    pub fn unit_normalize(&self) -> Result<EmbeddingSpace> {
        let mut matrix = self.matrix.clone();
        for (i, mut row) in matrix.axis_iter_mut(Axis(0)).enumerate() {
            let norm = row.dot(&row).sqrt();
            if norm == 0.0 {
                return Err(Error::ZeroRow {
                    token: self.vocab.token(i as u32).to_string(),
                });
            }
            row.mapv_inplace(|v| v / norm);
        }
        let mut norm_state = self.norm_state.clone();
        norm_state.push(NormStep::Unit);
        Ok(EmbeddingSpace {
            vocab: self.vocab.clone(),
            matrix,
            norm_state,
        })
    }

    /// Subtracts the column means.
    pub fn mean_center(&self) -> Result<EmbeddingSpace> {
        if self.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let means = self.matrix.mean_axis(Axis(0)).expect("non-empty matrix");
        let mut matrix = self.matrix.clone();
        for mut row in matrix.axis_iter_mut(Axis(0)) {
            row.zip_mut_with(&means, |v, m| *v -= m);
        }
        let mut norm_state = self.norm_state.clone();
        norm_state.push(NormStep::Center);
        Ok(EmbeddingSpace {
            vocab: self.vocab.clone(),
            matrix,
            norm_state,
        })
    }

    /// The mapper's preprocessing chain: unit, center, unit.
    pub fn prepare_for_mapping(&self) -> Result<EmbeddingSpace> {
        self.unit_normalize()?.mean_center()?.unit_normalize()
    }

    /// Replaces the matrix, keeping vocab and normalization history. The new
    /// matrix must have the same shape.
    pub(crate) fn with_matrix(&self, matrix: Array2<f64>) -> Result<EmbeddingSpace> {
        if matrix.shape() != self.matrix.shape() {
            return Err(Error::DimensionMismatch {
                left: matrix.ncols(),
                right: self.matrix.ncols(),
            });
        }
        if !matrix.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "mapped embedding matrix".into(),
            });
        }
        Ok(EmbeddingSpace {
            vocab: self.vocab.clone(),
            matrix,
            norm_state: self.norm_state.clone(),
        })
    }
}
