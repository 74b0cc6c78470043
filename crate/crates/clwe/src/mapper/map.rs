use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::Array2;

use crate::embeddings::EmbeddingSpace;
use crate::{Error, Result};

/// A d×d orthogonal matrix with provenance: which spaces it maps between.
/// Rows of the source space are right-multiplied by it.
#[derive(Debug, Clone)]
pub struct OrthogonalMap {
    w: Array2<f64>,
    src_ref: Option<u64>,
    tgt_ref: Option<u64>,
}

/// Construction-time orthogonality tolerance on max |W'W - I|.
pub const ORTHOGONALITY_TOL: f64 = 1e-6;

impl OrthogonalMap {
    pub fn new(w: Array2<f64>, src_ref: Option<u64>, tgt_ref: Option<u64>) -> Result<Self> {
        if w.nrows() != w.ncols() {
            return Err(Error::DimensionMismatch {
                left: w.nrows(),
                right: w.ncols(),
            });
        }
        if !w.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "orthogonal map".into(),
            });
        }
        let map = OrthogonalMap { w, src_ref, tgt_ref };
        let deviation = map.orthogonality_deviation();
        if deviation >= ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { deviation });
        }
        Ok(map)
    }

    pub fn identity(dim: usize) -> Self {
        OrthogonalMap {
            w: Array2::eye(dim),
            src_ref: None,
            tgt_ref: None,
        }
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn src_ref(&self) -> Option<u64> {
        self.src_ref
    }

    pub fn tgt_ref(&self) -> Option<u64> {
        self.tgt_ref
    }

    /// max |W'W - I|, the orthogonality defect.
    pub fn orthogonality_deviation(&self) -> f64 {
        let gram = self.w.t().dot(&self.w);
        let mut dev: f64 = 0.0;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((gram[[i, j]] - target).abs());
            }
        }
        dev
    }

    /// The inverse map W' (orthogonal), with source/target provenance swapped.
    pub fn transpose(&self) -> OrthogonalMap {
        OrthogonalMap {
            w: self.w.t().to_owned(),
            src_ref: self.tgt_ref,
            tgt_ref: self.src_ref,
        }
    }

    /// Right-multiplies every row of `x` by W. Normalization state is
    /// preserved: orthogonal maps keep unit rows unit and centered columns
    /// centered.
    pub fn apply(&self, x: &EmbeddingSpace) -> Result<EmbeddingSpace> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: self.dim(),
            });
        }
        if let Some(fp) = self.src_ref {
            if fp != x.vocab().fingerprint() {
                return Err(Error::SpaceMismatch { what: "map source" });
            }
        }
        x.with_matrix(x.matrix().dot(&self.w))
    }

    /// Writes the map as text: a dimension header then one row per line with
    /// full-precision (round-trip exact) values.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        let d = self.dim();
        writeln!(out, "{d}").map_err(|e| Error::io(path, e))?;
        for row in self.w.rows() {
            let line = row
                .iter()
                .map(|v| format!("{v:e}"))
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(path, 1, "missing dimension header"))?
            .map_err(|e| Error::io(path, e))?;
        let d: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, 1, format!("bad dimension {header:?}")))?;
        let mut w = Array2::zeros((d, d));
        for i in 0..d {
            let line = lines
                .next()
                .ok_or_else(|| Error::parse(path, i + 2, "missing matrix row"))?
                .map_err(|e| Error::io(path, e))?;
            let values: Vec<f64> = line
                .split_whitespace()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::parse(path, i + 2, "bad matrix value"))?;
            if values.len() != d {
                return Err(Error::parse(
                    path,
                    i + 2,
                    format!("expected {d} values, found {}", values.len()),
                ));
            }
            for (j, v) in values.into_iter().enumerate() {
                w[[i, j]] = v;
            }
        }
        OrthogonalMap::new(w, None, None)
    }

    pub(crate) fn with_refs(mut self, src_ref: Option<u64>, tgt_ref: Option<u64>) -> Self {
        self.src_ref = src_ref;
        self.tgt_ref = tgt_ref;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::Vocabulary;
    use ndarray::array;

    fn rotation(theta: f64) -> Array2<f64> {
        let (s, c) = theta.sin_cos();
        array![[c, -s], [s, c]]
    }

    fn space(rows: Array2<f64>) -> EmbeddingSpace {
        let n = rows.nrows();
        let vocab =
            Vocabulary::from_ranked_tokens((0..n).map(|i| format!("w{i}")).collect()).unwrap();
        EmbeddingSpace::new(vocab, rows).unwrap()
    }

    #[test]
    fn rejects_non_orthogonal() {
        let err = OrthogonalMap::new(array![[1.0, 0.0], [0.0, 2.0]], None, None).unwrap_err();
        assert!(matches!(err, Error::NotOrthogonal { .. }));
    }

    #[test]
    fn identity_apply_is_noop() {
        let x = space(array![[0.6, 0.8], [1.0, 0.0]]);
        let mapped = OrthogonalMap::identity(2).apply(&x).unwrap();
        assert_eq!(mapped.matrix(), x.matrix());
    }

    #[test]
    fn apply_preserves_cosines_and_inverts() {
        let x = space(array![[0.6, 0.8], [1.0, 0.0], [0.0, 1.0]])
            .unit_normalize()
            .unwrap();
        let map = OrthogonalMap::new(rotation(0.7), None, None).unwrap();
        let mapped = map.apply(&x).unwrap();
        for i in 0..x.len() as u32 {
            for j in 0..x.len() as u32 {
                let before = x.row(i).dot(&x.row(j));
                let after = mapped.row(i).dot(&mapped.row(j));
                assert!((before - after).abs() < 1e-12);
            }
        }
        let back = map.transpose().apply(&mapped).unwrap();
        for (a, b) in back.matrix().iter().zip(x.matrix().iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(mapped.is_unit());
    }

    #[test]
    fn save_load_roundtrip_is_exact() {
        let map = OrthogonalMap::new(rotation(1.234567890123), None, None).unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        map.save(f.path()).unwrap();
        let loaded = OrthogonalMap::load(f.path()).unwrap();
        assert_eq!(map.matrix(), loaded.matrix());
    }
}
