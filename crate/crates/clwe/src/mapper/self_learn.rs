use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{induce_dictionary, orthogonal_procrustes, unsupervised_seed, MapConfig, OrthogonalMap};
use crate::embeddings::{DictionaryPairs, EmbeddingSpace};
use crate::{Error, Result};

/// One row of the self-learning objective trace.
#[derive(Debug, Clone, Copy)]
pub struct TracePoint {
    pub iteration: usize,
    pub objective: f64,
    pub keep_prob: f64,
    pub dict_size: usize,
}

/// Outcome of the self-learning loop: the best-objective state plus the full
/// trace. `converged` is false when the loop hit `max_iters` before the
/// objective stalled at keep probability 1.0.
#[derive(Debug, Clone)]
pub struct SelfLearnResult {
    pub map: OrthogonalMap,
    pub dictionary: DictionaryPairs,
    pub trace: Vec<TracePoint>,
    pub best_objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Unsupervised self-learning: seed a dictionary, then alternate the
/// Procrustes solve and dictionary induction. The objective is the mean
/// cosine of the induced pairs under the current map; whenever its relative
/// improvement over the best seen falls below `objective_tol` the stochastic
/// keep probability doubles (capped at 1.0), and the loop terminates once it
/// stalls at keep 1.0 or reaches `max_iters`. Returns the best state seen.
pub fn self_learn(
    x: &EmbeddingSpace,
    y: &EmbeddingSpace,
    cfg: &MapConfig,
) -> Result<SelfLearnResult> {
    let seed_dict = unsupervised_seed(x, y, cfg)?;
    self_learn_from_seed(x, y, seed_dict, cfg)
}

/// Self-learning from a caller-provided seed dictionary.
pub fn self_learn_from_seed(
    x: &EmbeddingSpace,
    y: &EmbeddingSpace,
    seed_dict: DictionaryPairs,
    cfg: &MapConfig,
) -> Result<SelfLearnResult> {
    cfg.validate()?;
    if !x.is_unit() || !y.is_unit() {
        return Err(Error::NotUnitNormalized { op: "self-learning" });
    }
    if seed_dict.is_empty() {
        return Err(Error::EmptyDictionary);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut dict = seed_dict;
    let mut keep = cfg.stochastic_keep;
    let mut trace = Vec::new();
    let mut best: Option<(OrthogonalMap, DictionaryPairs, f64)> = None;
    let mut converged = false;
    let mut iterations = 0;

    for iteration in 0..cfg.max_iters {
        iterations = iteration + 1;
        let map = orthogonal_procrustes(x, y, &dict)?;
        let keep_at_induction = keep;
        let induction = induce_dictionary(x, y, &map, cfg, keep, &mut rng)?;
        trace.push(TracePoint {
            iteration,
            objective: induction.objective,
            keep_prob: keep_at_induction,
            dict_size: induction.dict.len(),
        });

        let improved = match &best {
            None => true,
            Some((_, _, best_obj)) => {
                (induction.objective - best_obj) / best_obj.abs().max(1e-12)
                    >= cfg.objective_tol
            }
        };
        let is_best = best
            .as_ref()
            .map_or(true, |(_, _, b)| induction.objective > *b);
        if is_best {
            best = Some((map, induction.dict.clone(), induction.objective));
        }
        dict = induction.dict;

        if !improved {
            if keep_at_induction >= 1.0 {
                converged = true;
                break;
            }
            keep = (keep * 2.0).min(1.0);
        }
    }

    let (map, _, best_objective) = best.expect("at least one iteration ran");
    // Exported dictionary: a deterministic full induction under the best map
    // (keep 1.0 consumes no randomness).
    let final_induction = induce_dictionary(x, y, &map, cfg, 1.0, &mut rng)?;
    Ok(SelfLearnResult {
        map,
        dictionary: final_induction.dict,
        trace,
        best_objective,
        iterations,
        converged,
    })
}

/// Renders a trace as CSV with the documented column order.
pub fn trace_csv(trace: &[TracePoint]) -> String {
    let mut out = String::from("iter,objective,keep_prob,dict_size\n");
    for p in trace {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.iteration, p.objective, p.keep_prob, p.dict_size
        ));
    }
    out
}

/// Writes a trace CSV to disk.
pub fn write_trace_csv(trace: &[TracePoint], path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path.as_ref(), trace_csv(trace))
        .map_err(|e| Error::io(path.as_ref(), e))
}
