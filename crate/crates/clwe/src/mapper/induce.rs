use ndarray::s;
use rand::Rng;

use super::retrieval::{col_knn_means, row_knn_means, similarity_matrix};
use super::{Direction, MapConfig, OrthogonalMap, Retrieval};
use crate::embeddings::{DictionaryPairs, EmbeddingSpace};
use crate::{Error, Result};

/// One dictionary induction pass.
#[derive(Debug, Clone)]
pub struct Induction {
    /// Pairs that survived the stochastic keep filter.
    pub dict: DictionaryPairs,
    /// Mean cosine of all candidate pairs under the current map, before the
    /// keep filter. Deterministic given the map, used as the self-learning
    /// objective.
    pub objective: f64,
    pub candidate_count: usize,
}

/// Induces a dictionary under the current map: a forward retrieval pass over
/// the top-m source words, a backward pass with W' when direction is union,
/// then each candidate pair kept independently with probability
/// `stochastic_keep`.
pub fn induce_dictionary(
    x: &EmbeddingSpace,
    y: &EmbeddingSpace,
    map: &OrthogonalMap,
    cfg: &MapConfig,
    keep_prob: f64,
    rng: &mut impl Rng,
) -> Result<Induction> {
    cfg.validate()?;
    if !x.is_unit() || !y.is_unit() {
        return Err(Error::NotUnitNormalized { op: "induction" });
    }
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let m_x = cfg.vocab_cutoff.min(x.len());
    let m_y = cfg.vocab_cutoff.min(y.len());
    if m_x == 0 || m_y == 0 {
        return Err(Error::TooFewWords { needed: 1, found: 0 });
    }

    let mapped = x.matrix().slice(s![0..m_x, ..]).dot(map.matrix());
    let sims = similarity_matrix(mapped.view(), y.matrix().slice(s![0..m_y, ..]));

    // CSLS penalties, clipped to the block sizes.
    let k = cfg.csls_k.min(m_x).min(m_y);
    let (r_rows, r_cols) = match cfg.retrieval {
        Retrieval::Csls => (row_knn_means(&sims, k), col_knn_means(&sims, k)),
        Retrieval::Nn => (Vec::new(), Vec::new()),
    };

    let mut candidates: Vec<(u32, u32)> = Vec::with_capacity(m_x + m_y);
    for i in 0..m_x {
        let row = sims.row(i);
        let best = match cfg.retrieval {
            Retrieval::Nn => argmax_by(m_y, |j| row[j]),
            // r_T(i) is constant within a row; only the r_S(j) penalty can
            // change the argmax.
            Retrieval::Csls => argmax_by(m_y, |j| 2.0 * row[j] - r_cols[j]),
        };
        candidates.push((i as u32, best as u32));
    }
    if cfg.direction == Direction::Union {
        for j in 0..m_y {
            let best = match cfg.retrieval {
                Retrieval::Nn => argmax_by(m_x, |i| sims[[i, j]]),
                Retrieval::Csls => argmax_by(m_x, |i| 2.0 * sims[[i, j]] - r_rows[i]),
            };
            candidates.push((best as u32, j as u32));
        }
    }
    candidates.sort_unstable();
    candidates.dedup();

    let objective =
        candidates.iter().map(|&(i, j)| sims[[i as usize, j as usize]]).sum::<f64>()
            / candidates.len() as f64;

    let kept = if keep_prob >= 1.0 {
        candidates.clone()
    } else {
        // Retry on an all-dropped draw so the dictionary is never empty; the
        // retry consumes further RNG draws, keeping the run deterministic.
        let mut kept = Vec::new();
        for _ in 0..100 {
            kept = candidates
                .iter()
                .copied()
                .filter(|_| rng.gen::<f64>() < keep_prob)
                .collect();
            if !kept.is_empty() {
                break;
            }
        }
        if kept.is_empty() {
            kept = candidates.clone();
        }
        kept
    };

    Ok(Induction {
        dict: DictionaryPairs::new(kept, x.vocab(), y.vocab())?,
        objective,
        candidate_count: candidates.len(),
    })
}

fn argmax_by(n: usize, score: impl Fn(usize) -> f64) -> usize {
    let mut best = 0usize;
    let mut best_score = score(0);
    for i in 1..n {
        let s = score(i);
        if s.total_cmp(&best_score).is_gt() {
            best = i;
            best_score = s;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::Vocabulary;
    use ndarray::Array2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_unit_space(n: usize, d: usize, seed: u64, prefix: &str) -> EmbeddingSpace {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = Array2::from_shape_fn((n, d), |_| rng.gen::<f64>() * 2.0 - 1.0);
        let vocab =
            Vocabulary::from_ranked_tokens((0..n).map(|i| format!("{prefix}{i}")).collect())
                .unwrap();
        EmbeddingSpace::new(vocab, rows)
            .unwrap()
            .unit_normalize()
            .unwrap()
    }

    #[test]
    fn identity_map_full_keep_gives_identity_pairs() {
        let x = random_unit_space(30, 6, 5, "w");
        let map = OrthogonalMap::identity(6);
        let cfg = MapConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ind = induce_dictionary(&x, &x, &map, &cfg, 1.0, &mut rng).unwrap();
        assert_eq!(ind.candidate_count, 30);
        for &(s, t) in ind.dict.pairs() {
            assert_eq!(s, t);
        }
        assert!((ind.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn forward_nn_yields_one_pair_per_source() {
        let x = random_unit_space(25, 5, 11, "w");
        let y = random_unit_space(40, 5, 12, "v");
        let cfg = MapConfig {
            retrieval: Retrieval::Nn,
            direction: Direction::Forward,
            ..MapConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ind = induce_dictionary(&x, &y, &OrthogonalMap::identity(5), &cfg, 1.0, &mut rng)
            .unwrap();
        assert_eq!(ind.dict.len(), 25);
        let sources: Vec<u32> = ind.dict.pairs().iter().map(|p| p.0).collect();
        let mut expected: Vec<u32> = (0..25).collect();
        expected.sort_unstable();
        let mut got = sources.clone();
        got.sort_unstable();
        assert_eq!(got, expected);
    }

    #[test]
    fn stochastic_keep_within_binomial_bound() {
        let x = random_unit_space(200, 8, 21, "w");
        let y = random_unit_space(200, 8, 22, "v");
        let cfg = MapConfig {
            retrieval: Retrieval::Nn,
            ..MapConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let full = induce_dictionary(&x, &y, &OrthogonalMap::identity(8), &cfg, 1.0, &mut rng)
            .unwrap();
        let n = full.candidate_count as f64;
        let ind = induce_dictionary(&x, &y, &OrthogonalMap::identity(8), &cfg, 0.5, &mut rng)
            .unwrap();
        let mean = 0.5 * n;
        let sigma = (n * 0.25).sqrt();
        let kept = ind.dict.len() as f64;
        assert!(
            (kept - mean).abs() <= 3.0 * sigma,
            "kept {kept}, expected {mean} ± {}",
            3.0 * sigma
        );
    }

    #[test]
    fn keep_draws_are_seed_deterministic() {
        let x = random_unit_space(50, 6, 31, "w");
        let y = random_unit_space(50, 6, 32, "v");
        let cfg = MapConfig::default();
        let run = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            induce_dictionary(&x, &y, &OrthogonalMap::identity(6), &cfg, 0.3, &mut rng)
                .unwrap()
                .dict
                .pairs()
                .to_vec()
        };
        assert_eq!(run(9), run(9));
        assert_ne!(run(9), run(10));
    }
}
