use nalgebra::DMatrix;
use ndarray::Array2;

use super::OrthogonalMap;
use crate::embeddings::{DictionaryPairs, EmbeddingSpace};
use crate::{Error, Result};

/// Closed-form orthogonal Procrustes solution: `W = U·V'` where `U·Σ·V'` is
/// the SVD of `X_D' · Y_D` over the dictionary-selected row blocks. W
/// minimizes ‖X_D·W − Y_D‖_F over orthogonal matrices (reflections allowed).
pub fn orthogonal_procrustes(
    x: &EmbeddingSpace,
    y: &EmbeddingSpace,
    dict: &DictionaryPairs,
) -> Result<OrthogonalMap> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    if dict.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    dict.check_refs(x.vocab(), y.vocab())?;

    let d = x.dim();
    // cross-covariance M = X_D' · Y_D, accumulated pair by pair
    let mut m = Array2::<f64>::zeros((d, d));
    for &(si, ti) in dict.pairs() {
        let xs = x.row(si);
        let yt = y.row(ti);
        for (i, &xv) in xs.iter().enumerate() {
            if xv == 0.0 {
                continue;
            }
            let mut row = m.row_mut(i);
            for (j, &yv) in yt.iter().enumerate() {
                row[j] += xv * yv;
            }
        }
    }
    if !m.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite {
            what: "dictionary cross-covariance".into(),
        });
    }

    let m_na = DMatrix::from_row_iterator(d, d, m.iter().copied());
    let svd = m_na
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::NonFinite {
            what: "SVD of dictionary cross-covariance".into(),
        })?;
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V'");
    let w_na = u * v_t;
    let w = Array2::from_shape_fn((d, d), |(i, j)| w_na[(i, j)]);
    OrthogonalMap::new(
        w,
        Some(x.vocab().fingerprint()),
        Some(y.vocab().fingerprint()),
    )
}

/// Frobenius objective ‖X_D·W − Y_D‖_F² of a candidate map over a dictionary.
pub fn procrustes_objective(
    x: &EmbeddingSpace,
    y: &EmbeddingSpace,
    dict: &DictionaryPairs,
    w: &Array2<f64>,
) -> f64 {
    let mut total = 0.0;
    for &(si, ti) in dict.pairs() {
        let mapped = x.row(si).dot(w);
        let diff = &mapped - &y.row(ti);
        total += diff.dot(&diff);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::Vocabulary;
    use ndarray::array;

    fn space(rows: Array2<f64>) -> EmbeddingSpace {
        let n = rows.nrows();
        let vocab =
            Vocabulary::from_ranked_tokens((0..n).map(|i| format!("w{i}")).collect()).unwrap();
        EmbeddingSpace::new(vocab, rows).unwrap()
    }

    fn rotation(theta: f64) -> Array2<f64> {
        let (s, c) = theta.sin_cos();
        array![[c, -s], [s, c]]
    }

    #[test]
    fn identity_case() {
        let x = space(array![[1.0, 0.0], [0.0, 1.0], [0.7, 0.7]]);
        let dict = DictionaryPairs::identity(3, x.vocab(), x.vocab()).unwrap();
        let map = orthogonal_procrustes(&x, &x, &dict).unwrap();
        let eye = Array2::<f64>::eye(2);
        for (a, b) in map.matrix().iter().zip(eye.iter()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn recovers_constructed_rotation() {
        let r = rotation(30f64.to_radians());
        let xm = array![[1.0, 0.0], [0.0, 1.0], [0.7, -0.3], [0.2, 0.9]];
        let ym = xm.dot(&r);
        let x = space(xm);
        let y = space(ym);
        let dict = DictionaryPairs::identity(4, x.vocab(), y.vocab()).unwrap();
        let map = orthogonal_procrustes(&x, &y, &dict).unwrap();
        for (a, b) in map.matrix().iter().zip(r.iter()) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn empty_dictionary_rejected() {
        let x = space(array![[1.0, 0.0]]);
        let dict = DictionaryPairs::new(vec![], x.vocab(), x.vocab()).unwrap();
        assert!(matches!(
            orthogonal_procrustes(&x, &x, &dict),
            Err(Error::EmptyDictionary)
        ));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let x = space(array![[1.0, 0.0]]);
        let y = space(array![[1.0, 0.0, 0.0]]);
        let dict = DictionaryPairs::new(vec![(0, 0)], x.vocab(), y.vocab()).unwrap();
        assert!(matches!(
            orthogonal_procrustes(&x, &y, &dict),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
