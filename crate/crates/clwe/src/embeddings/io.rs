use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::Array2;

use super::dictionary::{DictionaryCoverage, DictionaryPairs, OovPolicy};
use super::{EmbeddingSpace, Vocabulary};
use crate::{Error, Result};

/// Loads word2vec text format: a "<n> <d>" header, then one
/// "token v1 ... vd" line per word. File order is taken as frequency order.
pub fn load_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingSpace> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "missing header line"))?;
    let header = header.map_err(|e| Error::io(path, e))?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(path, 1, format!("malformed header {header:?}")))?;
    let d: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(path, 1, format!("malformed header {header:?}")))?;
    if parts.next().is_some() || n == 0 || d == 0 {
        return Err(Error::parse(path, 1, format!("malformed header {header:?}")));
    }

    let mut tokens = Vec::with_capacity(n);
    let mut data = Vec::with_capacity(n * d);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let token = fields
            .next()
            .ok_or_else(|| Error::parse(path, lineno, "empty row"))?;
        let mut row_len = 0usize;
        for field in fields {
            let value: f64 = field.parse().map_err(|_| {
                Error::parse(path, lineno, format!("cannot parse value {field:?}"))
            })?;
            if !value.is_finite() {
                return Err(Error::parse(path, lineno, format!("non-finite value {field:?}")));
            }
            data.push(value);
            row_len += 1;
        }
        if row_len != d {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected {d} values, found {row_len}"),
            ));
        }
        tokens.push(token.to_string());
    }
    if tokens.len() != n {
        return Err(Error::parse(
            path,
            tokens.len() + 1,
            format!("header declares {n} words, file has {}", tokens.len()),
        ));
    }
    let mut seen = std::collections::HashSet::with_capacity(n);
    for (i, t) in tokens.iter().enumerate() {
        if !seen.insert(t.as_str()) {
            return Err(Error::parse(path, i + 2, format!("duplicate token {t:?}")));
        }
    }
    let vocab = Vocabulary::from_ranked_tokens(tokens)?;
    let matrix = Array2::from_shape_vec((n, d), data).expect("validated shape");
    EmbeddingSpace::new(vocab, matrix)
}

/// Saves word2vec text format with 6 significant digits per value.
pub fn save_embeddings(space: &EmbeddingSpace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if space.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, s: &str| -> Result<()> {
        out.write_all(s.as_bytes()).map_err(|e| Error::io(path, e))
    };
    write(&mut out, &format!("{} {}\n", space.len(), space.dim()))?;
    let mut line = String::new();
    for (i, row) in space.matrix().rows().into_iter().enumerate() {
        line.clear();
        line.push_str(space.vocab().token(i as u32));
        for v in row {
            line.push(' ');
            line.push_str(&format_g6(*v));
        }
        line.push('\n');
        write(&mut out, &line)?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Formats a float with 6 significant digits, trimming trailing zeros
/// (C's `%.6g`). Writing, reloading, and rewriting is byte-stable.
pub(crate) fn format_g6(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    debug_assert!(v.is_finite());
    let sci = format!("{:.5e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("scientific exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exp:+03}")
    } else {
        let prec = (5 - exp).max(0) as usize;
        let fixed = format!("{:.*}", prec, v);
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    }
}

/// Loads a bilingual dictionary: one "src tgt" pair per line. Out-of-vocabulary
/// lines are skipped (MUSE convention) or abort, per `policy`. Duplicate pairs
/// collapse to one.
pub fn load_dictionary(
    path: impl AsRef<Path>,
    src: &Vocabulary,
    tgt: &Vocabulary,
    policy: OovPolicy,
) -> Result<(DictionaryPairs, DictionaryCoverage)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut pairs = Vec::new();
    let mut total_lines = 0usize;
    let mut skipped_lines = 0usize;
    let mut skipped_sources = std::collections::HashSet::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        total_lines += 1;
        let mut fields = line.split_whitespace();
        let (s, t) = match (fields.next(), fields.next(), fields.next()) {
            (Some(s), Some(t), None) => (s, t),
            _ => {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("expected \"src tgt\", got {line:?}"),
                ))
            }
        };
        match (src.id(s), tgt.id(t)) {
            (Some(si), Some(ti)) => {
                pairs.push((si, ti));
            }
            _ => {
                let missing = if src.id(s).is_none() { s } else { t };
                if policy == OovPolicy::Error {
                    return Err(Error::OutOfVocabulary {
                        path: path.to_path_buf(),
                        line: lineno,
                        token: missing.to_string(),
                    });
                }
                skipped_lines += 1;
                skipped_sources.insert(s.to_string());
            }
        }
    }
    // A source counts as skipped only if no line for it survived.
    let kept_sources: std::collections::HashSet<u32> = pairs.iter().map(|p| p.0).collect();
    let skipped_source_words = skipped_sources
        .iter()
        .filter(|s| src.id(s).map_or(true, |id| !kept_sources.contains(&id)))
        .count();
    let dict = DictionaryPairs::new(pairs, src, tgt)?;
    let coverage = DictionaryCoverage {
        total_lines,
        kept_pairs: dict.len(),
        skipped_lines,
        skipped_source_words,
    };
    Ok((dict, coverage))
}
