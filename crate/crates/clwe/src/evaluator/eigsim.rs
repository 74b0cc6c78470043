use nalgebra::DMatrix;
use ndarray::{s, Array2, ArrayView2, Axis};

use crate::embeddings::EmbeddingSpace;
use crate::mapper::{rank_by_scores, similarity_matrix};
use crate::{Error, Result};

/// Which graph Laplacian the spectrum is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianKind {
    /// L = D − A.
    Unnormalized,
    /// L = I − D^{−1/2} A D^{−1/2}; isolated nodes contribute 0 rows.
    Normalized,
}

/// Eigenvalue-similarity report. `delta` is the sum of squared differences
/// of the `k_effective` largest Laplacian eigenvalues; lower means the two
/// spaces are more isomorphic.
#[derive(Debug, Clone)]
pub struct EigsimReport {
    pub delta: f64,
    pub n_words: usize,
    pub knn_k: usize,
    pub k_effective: usize,
    /// Sorted ascending.
    pub spectrum_x: Vec<f64>,
    /// Sorted ascending.
    pub spectrum_y: Vec<f64>,
}

/// Symmetric unweighted k-nearest-neighbor adjacency by cosine: an edge
/// exists when either endpoint lists the other among its k nearest. Rows
/// must be unit-normalized. Self-edges are excluded; ties break by lower id.
pub fn knn_adjacency(rows: ArrayView2<'_, f64>, k: usize) -> Result<Array2<f64>> {
    let n = rows.nrows();
    if n < 2 || k == 0 || k > n - 1 {
        return Err(Error::KOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    let sims = similarity_matrix(rows, rows);
    let mut adj = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        let mut scores = sims.row(i).to_vec();
        scores[i] = f64::NEG_INFINITY; // no self-edge
        for j in rank_by_scores(&scores, k) {
            adj[[i, j as usize]] = 1.0;
            adj[[j as usize, i]] = 1.0;
        }
    }
    Ok(adj)
}

/// All Laplacian eigenvalues of an undirected graph, sorted ascending.
pub fn laplacian_spectrum(adj: &Array2<f64>, kind: LaplacianKind) -> Vec<f64> {
    let n = adj.nrows();
    let degrees: Vec<f64> = adj.rows().into_iter().map(|r| r.sum()).collect();
    let mut lap = DMatrix::<f64>::zeros(n, n);
    match kind {
        LaplacianKind::Unnormalized => {
            for i in 0..n {
                for j in 0..n {
                    lap[(i, j)] = if i == j {
                        degrees[i] - adj[[i, j]]
                    } else {
                        -adj[[i, j]]
                    };
                }
            }
        }
        LaplacianKind::Normalized => {
            for i in 0..n {
                for j in 0..n {
                    if degrees[i] == 0.0 || degrees[j] == 0.0 {
                        lap[(i, j)] = 0.0;
                    } else if i == j {
                        lap[(i, j)] = 1.0 - adj[[i, j]] / degrees[i];
                    } else {
                        lap[(i, j)] = -adj[[i, j]] / (degrees[i] * degrees[j]).sqrt();
                    }
                }
            }
        }
    }
    let mut eigs: Vec<f64> = lap.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_unstable_by(f64::total_cmp);
    eigs
}

/// The largest k such that the k largest eigenvalues hold less than
/// `threshold` of the total spectral energy. Spectrum must be sorted
/// ascending.
pub fn energy_rank(spectrum: &[f64], threshold: f64) -> usize {
    let total: f64 = spectrum.iter().sum();
    if total <= 0.0 {
        return 0;
    }
    let mut top_sum = 0.0;
    let mut rank = 0;
    for (count, value) in spectrum.iter().rev().enumerate() {
        top_sum += value;
        if top_sum / total < threshold {
            rank = count + 1;
        } else {
            break;
        }
    }
    rank
}

/// Δ between two spectra: both energy ranks are computed, `k_effective` is
/// their minimum, and the squared differences of the `k_effective` largest
/// eigenvalues (paired in descending order) are summed.
pub fn delta_from_spectra(
    spectrum_x: &[f64],
    spectrum_y: &[f64],
    energy_threshold: f64,
) -> (f64, usize) {
    let k_x = energy_rank(spectrum_x, energy_threshold);
    let k_y = energy_rank(spectrum_y, energy_threshold);
    let k_effective = k_x.min(k_y);
    let delta = spectrum_x
        .iter()
        .rev()
        .zip(spectrum_y.iter().rev())
        .take(k_effective)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    (delta, k_effective)
}

/// Eigenvalue similarity between two spaces: for each space independently,
/// take the `n_words` most frequent words, center and unit-normalize, build
/// the symmetric cosine k-NN graph, and compare Laplacian spectra with the
/// energy rule.
pub fn eigenvalue_similarity(
    x: &EmbeddingSpace,
    y: &EmbeddingSpace,
    n_words: usize,
    knn_k: usize,
    energy_threshold: f64,
    kind: LaplacianKind,
) -> Result<EigsimReport> {
    if n_words > x.len() || n_words > y.len() {
        return Err(Error::TooFewWords {
            needed: n_words,
            found: x.len().min(y.len()),
        });
    }
    if n_words < 2 {
        return Err(Error::TooFewWords {
            needed: 2,
            found: n_words,
        });
    }
    if !(energy_threshold > 0.0 && energy_threshold <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "energy threshold must be in (0, 1], got {energy_threshold}"
        )));
    }
    let spectrum_x = graph_spectrum(x, n_words, knn_k, kind)?;
    let spectrum_y = graph_spectrum(y, n_words, knn_k, kind)?;
    let (delta, k_effective) = delta_from_spectra(&spectrum_x, &spectrum_y, energy_threshold);
    Ok(EigsimReport {
        delta,
        n_words,
        knn_k,
        k_effective,
        spectrum_x,
        spectrum_y,
    })
}

fn graph_spectrum(
    space: &EmbeddingSpace,
    n_words: usize,
    knn_k: usize,
    kind: LaplacianKind,
) -> Result<Vec<f64>> {
    // centralise then normalise the top-frequency block
    let block = space.matrix().slice(s![0..n_words, ..]).to_owned();
    let means = block.mean_axis(Axis(0)).expect("non-empty block");
    let mut centered = block;
    for mut row in centered.axis_iter_mut(Axis(0)) {
        row.zip_mut_with(&means, |v, m| *v -= m);
    }
    for (i, mut row) in centered.axis_iter_mut(Axis(0)).enumerate() {
        let norm = row.dot(&row).sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroRow {
                token: space.vocab().token(i as u32).to_string(),
            });
        }
        row.mapv_inplace(|v| v / norm);
    }
    let adj = knn_adjacency(centered.view(), knn_k)?;
    Ok(laplacian_spectrum(&adj, kind))
}
