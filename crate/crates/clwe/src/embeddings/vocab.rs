use std::collections::HashMap;

use crate::hash::fnv64_str_seq;
use crate::{Error, Result};

/// Bijection between tokens and dense ids `0..n`, ordered by descending
/// corpus frequency (id 0 is the most frequent word).
#[derive(Debug, Clone)]
pub struct Vocabulary {
    tokens: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, u32>,
    fingerprint: u64,
}

impl Vocabulary {
    /// Builds a vocabulary from `(token, count)` entries already sorted by
    /// descending count. Rejects duplicates, whitespace in tokens, empty
    /// tokens, and out-of-order counts.
    pub fn new(entries: Vec<(String, u64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let mut tokens = Vec::with_capacity(entries.len());
        let mut counts = Vec::with_capacity(entries.len());
        let mut index = HashMap::with_capacity(entries.len());
        for (i, (token, count)) in entries.into_iter().enumerate() {
            if token.is_empty() {
                return Err(Error::InvalidVocabulary(format!("empty token at id {i}")));
            }
            if token.chars().any(char::is_whitespace) {
                return Err(Error::InvalidVocabulary(format!(
                    "token {token:?} contains whitespace"
                )));
            }
            if i > 0 && counts[i - 1] < count {
                return Err(Error::InvalidVocabulary(format!(
                    "counts not in descending order at id {i} ({} < {count})",
                    counts[i - 1]
                )));
            }
            if index.insert(token.clone(), i as u32).is_some() {
                return Err(Error::InvalidVocabulary(format!(
                    "duplicate token {token:?}"
                )));
            }
            tokens.push(token);
            counts.push(count);
        }
        let fingerprint = fnv64_str_seq(tokens.iter().map(String::as_str));
        Ok(Vocabulary {
            tokens,
            counts,
            index,
            fingerprint,
        })
    }

    /// Vocabulary from tokens in frequency-rank order with synthesized counts
    /// `n - rank` (pretrained files carry no counts; file order is taken as
    /// frequency order).
    pub fn from_ranked_tokens(tokens: Vec<String>) -> Result<Self> {
        let n = tokens.len() as u64;
        Self::new(
            tokens
                .into_iter()
                .enumerate()
                .map(|(i, t)| (t, n - i as u64))
                .collect(),
        )
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: u32) -> &str {
        &self.tokens[id as usize]
    }

    pub fn count(&self, id: u32) -> u64 {
        self.counts[id as usize]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Stable identity of this vocabulary (hash of the token sequence), used
    /// to tie dictionaries and maps to the spaces their ids index into.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }
}
