use ndarray::{s, Array2, ArrayView2, Axis};
use rayon::prelude::*;

use crate::{Error, Result};

/// Dense similarity matrix `a · b'`. Rows are expected unit-normalized, so
/// entries are cosines. Parallelized over row blocks for larger inputs.
pub fn similarity_matrix(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> Array2<f64> {
    debug_assert_eq!(a.ncols(), b.ncols());
    let bt = b.t();
    if a.nrows() * b.nrows() < 1 << 16 {
        return a.dot(&bt);
    }
    let chunk = 256;
    let mut out = Array2::zeros((a.nrows(), b.nrows()));
    out.axis_chunks_iter_mut(Axis(0), chunk)
        .into_par_iter()
        .enumerate()
        .for_each(|(ci, mut block)| {
            let lo = ci * chunk;
            let hi = lo + block.nrows();
            block.assign(&a.slice(s![lo..hi, ..]).dot(&bt));
        });
    out
}

/// Mean of the k largest values.
fn mean_of_top_k(values: &[f64], k: usize) -> f64 {
    debug_assert!(k >= 1 && k <= values.len());
    if k == values.len() {
        return values.iter().sum::<f64>() / k as f64;
    }
    let mut buf = values.to_vec();
    let pivot = values.len() - k;
    buf.select_nth_unstable_by(pivot, |a, b| a.total_cmp(b));
    buf[pivot..].iter().sum::<f64>() / k as f64
}

/// Per-row mean similarity to the k nearest columns.
pub(crate) fn row_knn_means(sims: &Array2<f64>, k: usize) -> Vec<f64> {
    sims.rows()
        .into_iter()
        .map(|row| mean_of_top_k(row.as_slice().expect("contiguous row"), k))
        .collect()
}

/// Per-column mean similarity to the k nearest rows.
pub(crate) fn col_knn_means(sims: &Array2<f64>, k: usize) -> Vec<f64> {
    // Transposed copy so each column is contiguous.
    let t = sims.t().as_standard_layout().to_owned();
    row_knn_means(&t, k)
}

/// Ranks column ids of one score row in descending score order, ties broken
/// by lower id, truncated to `top`.
pub fn rank_by_scores(scores: &[f64], top: usize) -> Vec<u32> {
    let mut ids: Vec<u32> = (0..scores.len() as u32).collect();
    let cmp = |a: &u32, b: &u32| {
        scores[*b as usize]
            .total_cmp(&scores[*a as usize])
            .then(a.cmp(b))
    };
    if top < ids.len() {
        ids.select_nth_unstable_by(top, cmp);
        ids.truncate(top);
    }
    ids.sort_unstable_by(cmp);
    ids
}

/// Full CSLS score matrix for a mapped-source × target cosine matrix:
/// `score(i, j) = 2·cos(i, j) − r_T(i) − r_S(j)` with `r_T` the mean cosine
/// of source row i to its k nearest targets and `r_S` the mean cosine of
/// target j to its k nearest mapped-source rows.
pub fn csls_score_matrix(sims: &Array2<f64>, k: usize) -> Result<Array2<f64>> {
    let (n_src, n_tgt) = sims.dim();
    if k == 0 || k > n_tgt || k > n_src {
        return Err(Error::KOutOfRange {
            k,
            max: n_tgt.min(n_src),
        });
    }
    let r_t = row_knn_means(sims, k);
    let r_s = col_knn_means(sims, k);
    let mut scores = sims.clone();
    for (i, mut row) in scores.axis_iter_mut(Axis(0)).enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = 2.0 * *v - r_t[i] - r_s[j];
        }
    }
    Ok(scores)
}

/// CSLS retrieval: for each query row of `xm`, target ids ranked by
/// descending CSLS score (ties broken by lower id), truncated to `top`.
/// Rows of both matrices must be unit-normalized.
pub fn csls_knn(
    xm: ArrayView2<'_, f64>,
    y: ArrayView2<'_, f64>,
    k: usize,
    queries: &[u32],
    top: usize,
) -> Result<Vec<Vec<u32>>> {
    if xm.ncols() != y.ncols() {
        return Err(Error::DimensionMismatch {
            left: xm.ncols(),
            right: y.ncols(),
        });
    }
    if k == 0 || k > y.nrows() || k > xm.nrows() {
        return Err(Error::KOutOfRange {
            k,
            max: y.nrows().min(xm.nrows()),
        });
    }
    let sims = similarity_matrix(xm, y);
    let r_t = row_knn_means(&sims, k);
    let r_s = col_knn_means(&sims, k);
    let ranked = queries
        .par_iter()
        .map(|&q| {
            let row = sims.row(q as usize);
            let scores: Vec<f64> = row
                .iter()
                .enumerate()
                .map(|(j, v)| 2.0 * v - r_t[q as usize] - r_s[j])
                .collect();
            rank_by_scores(&scores, top)
        })
        .collect();
    Ok(ranked)
}

/// Plain cosine nearest-neighbor retrieval with the same ranking contract.
pub fn nn_rank(
    xm: ArrayView2<'_, f64>,
    y: ArrayView2<'_, f64>,
    queries: &[u32],
    top: usize,
) -> Result<Vec<Vec<u32>>> {
    if xm.ncols() != y.ncols() {
        return Err(Error::DimensionMismatch {
            left: xm.ncols(),
            right: y.ncols(),
        });
    }
    let sims = similarity_matrix(xm, y);
    Ok(queries
        .par_iter()
        .map(|&q| {
            let row = sims.row(q as usize);
            rank_by_scores(row.as_slice().expect("contiguous row"), top)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn unit_rows(mut m: Array2<f64>) -> Array2<f64> {
        for mut row in m.axis_iter_mut(Axis(0)) {
            let n = row.dot(&row).sqrt();
            row.mapv_inplace(|v| v / n);
        }
        m
    }

    #[test]
    fn top_k_mean_selects_largest() {
        assert!((mean_of_top_k(&[0.1, 0.9, 0.5, 0.7], 2) - 0.8).abs() < 1e-12);
        assert!((mean_of_top_k(&[0.1, 0.9], 2) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rank_breaks_ties_by_lower_id() {
        assert_eq!(rank_by_scores(&[0.5, 0.9, 0.5, 0.9], 4), vec![1, 3, 0, 2]);
        assert_eq!(rank_by_scores(&[0.5, 0.9, 0.5, 0.9], 2), vec![1, 3]);
    }

    #[test]
    fn full_neighborhood_matches_closed_form() {
        // k = full target count: score = 2 cos(x,y) − mean_t cos(x,t) − mean_s cos(s,y).
        let xm = unit_rows(array![[1.0, 0.2], [0.3, 1.0], [-0.5, 0.8]]);
        let y = unit_rows(array![[0.9, 0.1], [0.2, 0.7], [-0.3, 0.6]]);
        let sims = similarity_matrix(xm.view(), y.view());
        let scores = csls_score_matrix(&sims, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mean_t = (0..3).map(|t| sims[[i, t]]).sum::<f64>() / 3.0;
                let mean_s = (0..3).map(|s| sims[[s, j]]).sum::<f64>() / 3.0;
                let expected = 2.0 * sims[[i, j]] - mean_t - mean_s;
                assert!((scores[[i, j]] - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn equal_penalties_reduce_to_cosine_ranking() {
        // Source set equals the target set, three mutually equidistant unit
        // vectors. With k=1 every r term is exactly 1, a constant shift, so
        // CSLS ordering equals cosine ordering.
        let y = unit_rows(array![
            [1.0, 1.0, -1.0],
            [1.0, -1.0, 1.0],
            [-1.0, 1.0, 1.0],
        ]);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let c = y.row(i).dot(&y.row(j));
                    assert!((c + 1.0 / 3.0).abs() < 1e-12, "cos {c}");
                }
            }
        }
        let queries = [0, 1, 2];
        let csls = csls_knn(y.view(), y.view(), 1, &queries, 3).unwrap();
        let nn = nn_rank(y.view(), y.view(), &queries, 3).unwrap();
        assert_eq!(csls, nn);
        // each point retrieves itself first
        for (q, ranked) in queries.iter().zip(&csls) {
            assert_eq!(ranked[0], *q);
        }
    }

    #[test]
    fn k_out_of_range_rejected() {
        let xm = unit_rows(array![[1.0, 0.0]]);
        let y = unit_rows(array![[1.0, 0.0], [0.0, 1.0]]);
        assert!(matches!(
            csls_knn(xm.view(), y.view(), 3, &[0], 1),
            Err(Error::KOutOfRange { .. })
        ));
    }
}
