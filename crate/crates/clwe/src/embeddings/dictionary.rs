use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::Vocabulary;
use crate::{Error, Result};

/// How to treat dictionary lines whose tokens are missing from a vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OovPolicy {
    /// Drop the line and count it (MUSE convention).
    Skip,
    /// Abort at the first out-of-vocabulary line.
    Error,
}

/// Coverage statistics from loading a dictionary file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DictionaryCoverage {
    pub total_lines: usize,
    pub kept_pairs: usize,
    pub skipped_lines: usize,
    /// Distinct source words with no surviving translation.
    pub skipped_source_words: usize,
}

/// A list of (source-id, target-id) translation pairs, tied to the
/// vocabularies the ids index into. One source may map to many targets.
#[derive(Debug, Clone)]
pub struct DictionaryPairs {
    pairs: Vec<(u32, u32)>,
    src_ref: u64,
    tgt_ref: u64,
}

impl DictionaryPairs {
    /// Validates ranges against the two vocabularies and drops duplicate
    /// pairs, keeping first-occurrence order.
    pub fn new(pairs: Vec<(u32, u32)>, src: &Vocabulary, tgt: &Vocabulary) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(pairs.len());
        let mut unique = Vec::with_capacity(pairs.len());
        for (s, t) in pairs {
            if s as usize >= src.len() {
                return Err(Error::IdOutOfRange {
                    side: "source",
                    id: s,
                    size: src.len(),
                });
            }
            if t as usize >= tgt.len() {
                return Err(Error::IdOutOfRange {
                    side: "target",
                    id: t,
                    size: tgt.len(),
                });
            }
            if seen.insert((s, t)) {
                unique.push((s, t));
            }
        }
        Ok(DictionaryPairs {
            pairs: unique,
            src_ref: src.fingerprint(),
            tgt_ref: tgt.fingerprint(),
        })
    }

    /// The identity dictionary `(i, i)` over the first `n` words.
    pub fn identity(n: usize, src: &Vocabulary, tgt: &Vocabulary) -> Result<Self> {
        Self::new((0..n as u32).map(|i| (i, i)).collect(), src, tgt)
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn src_ref(&self) -> u64 {
        self.src_ref
    }

    pub fn tgt_ref(&self) -> u64 {
        self.tgt_ref
    }

    /// Checks that this dictionary's ids index into the given vocabularies.
    pub fn check_refs(&self, src: &Vocabulary, tgt: &Vocabulary) -> Result<()> {
        if self.src_ref != src.fingerprint() || self.tgt_ref != tgt.fingerprint() {
            return Err(Error::SpaceMismatch { what: "dictionary" });
        }
        Ok(())
    }

    /// Distinct source ids in first-occurrence order.
    pub fn distinct_sources(&self) -> Vec<u32> {
        let mut seen = std::collections::HashSet::new();
        self.pairs
            .iter()
            .filter(|(s, _)| seen.insert(*s))
            .map(|(s, _)| *s)
            .collect()
    }
}

/// Writes the two-column text format: one "src tgt" token pair per line.
pub fn save_dictionary(
    dict: &DictionaryPairs,
    src: &Vocabulary,
    tgt: &Vocabulary,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    dict.check_refs(src, tgt)?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for &(s, t) in dict.pairs() {
        writeln!(out, "{} {}", src.token(s), tgt.token(t)).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}
