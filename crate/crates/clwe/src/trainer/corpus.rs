use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::embeddings::Vocabulary;
use crate::{Error, Result};

/// An encoded monolingual corpus: one token-id sequence per sentence.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub vocab: Vocabulary,
    pub sentences: Vec<Vec<u32>>,
    /// Total encoded tokens (the learning-rate schedule's denominator).
    pub total_tokens: u64,
}

/// A sentence-aligned parallel corpus over two vocabularies. Pairs with an
/// empty side are filtered at load.
#[derive(Debug, Clone)]
pub struct ParallelCorpus {
    pub vocab_a: Vocabulary,
    pub vocab_b: Vocabulary,
    pub pairs: Vec<(Vec<u32>, Vec<u32>)>,
    pub total_tokens: u64,
}

/// Counts tokens, keeps those with frequency >= `min_count`, and orders by
/// descending frequency with lexicographic tie-breaks.
pub fn build_vocab<'a>(
    sentences: impl IntoIterator<Item = &'a str>,
    min_count: u64,
) -> Result<Vocabulary> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for sentence in sentences {
        for token in sentence.split_whitespace() {
            *counts.entry(token.to_string()).or_insert(0) += 1;
        }
    }
    let mut entries: Vec<(String, u64)> = counts
        .into_iter()
        .filter(|(_, c)| *c >= min_count)
        .collect();
    if entries.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    entries.sort_unstable_by(|(ta, ca), (tb, cb)| cb.cmp(ca).then_with(|| ta.cmp(tb)));
    Vocabulary::new(entries)
}

fn encode_sentences(lines: &[String], vocab: &Vocabulary) -> (Vec<Vec<u32>>, u64) {
    let mut sentences = Vec::with_capacity(lines.len());
    let mut total = 0u64;
    for line in lines {
        let ids: Vec<u32> = line
            .split_whitespace()
            .filter_map(|t| vocab.id(t))
            .collect();
        if !ids.is_empty() {
            total += ids.len() as u64;
            sentences.push(ids);
        }
    }
    (sentences, total)
}

impl Corpus {
    pub fn from_lines(lines: &[String], min_count: u64) -> Result<Self> {
        let vocab = build_vocab(lines.iter().map(String::as_str), min_count)?;
        let (sentences, total_tokens) = encode_sentences(lines, &vocab);
        if sentences.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(Corpus {
            vocab,
            sentences,
            total_tokens,
        })
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    BufReader::new(file)
        .lines()
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| Error::io(path, e))
}

/// Loads a one-sentence-per-line, whitespace-tokenized corpus.
pub fn load_corpus(path: impl AsRef<Path>, min_count: u64) -> Result<Corpus> {
    Corpus::from_lines(&read_lines(path.as_ref())?, min_count)
}

impl ParallelCorpus {
    pub fn from_lines(lines_a: &[String], lines_b: &[String], min_count: u64) -> Result<Self> {
        if lines_a.len() != lines_b.len() {
            return Err(Error::InvalidConfig(format!(
                "parallel files differ in line count: {} vs {}",
                lines_a.len(),
                lines_b.len()
            )));
        }
        let vocab_a = build_vocab(lines_a.iter().map(String::as_str), min_count)?;
        let vocab_b = build_vocab(lines_b.iter().map(String::as_str), min_count)?;
        let mut pairs = Vec::with_capacity(lines_a.len());
        let mut total = 0u64;
        for (la, lb) in lines_a.iter().zip(lines_b) {
            let a: Vec<u32> = la.split_whitespace().filter_map(|t| vocab_a.id(t)).collect();
            let b: Vec<u32> = lb.split_whitespace().filter_map(|t| vocab_b.id(t)).collect();
            if a.is_empty() || b.is_empty() {
                continue;
            }
            total += (a.len() + b.len()) as u64;
            pairs.push((a, b));
        }
        if pairs.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(ParallelCorpus {
            vocab_a,
            vocab_b,
            pairs,
            total_tokens: total,
        })
    }
}

/// Loads two equal-line-count files as a sentence-aligned parallel corpus.
pub fn load_parallel_corpus(
    path_a: impl AsRef<Path>,
    path_b: impl AsRef<Path>,
    min_count: u64,
) -> Result<ParallelCorpus> {
    ParallelCorpus::from_lines(
        &read_lines(path_a.as_ref())?,
        &read_lines(path_b.as_ref())?,
        min_count,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lines(texts: &[&str]) -> Vec<String> {
        texts.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn vocab_counts_and_order() {
        let v = build_vocab(["a a b"], 1).unwrap();
        assert_eq!(v.tokens(), &["a".to_string(), "b".to_string()]);
        assert_eq!(v.counts(), &[2, 1]);
    }

    #[test]
    fn min_count_cutoff() {
        let v = build_vocab(["a a b"], 2).unwrap();
        assert_eq!(v.tokens(), &["a".to_string()]);
    }

    #[test]
    fn lexicographic_tie_break() {
        let v = build_vocab(["b a b a"], 1).unwrap();
        assert_eq!(v.tokens(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn empty_after_cutoff_is_error() {
        assert!(matches!(build_vocab(["a b"], 5), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn oov_tokens_dropped_and_empty_sentences_filtered() {
        let c = Corpus::from_lines(&lines(&["a a b", "b", "q q"]), 2).unwrap();
        // only "a" and "b" survive min_count=2? a:2, b:2, q:2 — all pass.
        assert_eq!(c.sentences.len(), 3);
        let c = Corpus::from_lines(&lines(&["a a b", "b", "q"]), 2).unwrap();
        // q dropped (count 1): its sentence becomes empty and is filtered
        assert_eq!(c.sentences.len(), 2);
        assert_eq!(c.total_tokens, 4);
    }

    #[test]
    fn parallel_line_count_must_match() {
        let err =
            ParallelCorpus::from_lines(&lines(&["a", "b"]), &lines(&["x"]), 1).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn parallel_empty_sides_filtered() {
        let p = ParallelCorpus::from_lines(
            &lines(&["a b", "", "c"]),
            &lines(&["x y", "z", "w"]),
            1,
        )
        .unwrap();
        assert_eq!(p.pairs.len(), 2);
    }
}
