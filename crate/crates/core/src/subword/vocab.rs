//! Frequency-capped word vocabularies.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub const UNK: &str = "<unk>";

const HEADER_TAG: &str = "#vocab";

/// Token counts, mergeable across workers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenCounts {
    counts: HashMap<String, u64>,
    total: u64,
}

impl TokenCounts {
    pub fn add_sentence(&mut self, sentence: &str) {
        for tok in sentence.split_whitespace() {
            self.add(tok, 1);
        }
    }

    pub fn add(&mut self, token: &str, n: u64) {
        match self.counts.get_mut(token) {
            Some(c) => *c += n,
            None => {
                self.counts.insert(token.to_owned(), n);
            }
        }
        self.total += n;
    }

    pub fn merge(&mut self, other: TokenCounts) {
        for (tok, n) in other.counts {
            *self.counts.entry(tok).or_insert(0) += n;
        }
        self.total += other.total;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Top-`cap` tokens by count, ties broken by ascending token.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    entries: Vec<(String, u64)>,
    index: HashMap<String, usize>,
    cap: usize,
    total: u64,
}

/// Builds a vocabulary from whitespace-delimited tokens.
pub fn build_vocab<I, S>(tokens: I, cap: usize) -> Result<Vocabulary>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counts = TokenCounts::default();
    for t in tokens {
        counts.add_sentence(t.as_ref());
    }
    Vocabulary::from_counts(&counts, cap)
}

impl Vocabulary {
    pub fn from_counts(counts: &TokenCounts, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::InvalidArgument("vocabulary cap must be positive".into()));
        }
        let mut entries: Vec<(String, u64)> =
            counts.iter().map(|(t, n)| (t.to_owned(), n)).collect();
        entries.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        entries.truncate(cap);
        Ok(Self::from_entries(entries, cap, counts.total()))
    }

    fn from_entries(entries: Vec<(String, u64)>, cap: usize, total: u64) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, (t, _))| (t.clone(), i))
            .collect();
        Vocabulary {
            entries,
            index,
            cap,
            total,
        }
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Token occurrences in the corpus the vocabulary was built from.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    /// Fraction of corpus token occurrences that are in-vocabulary.
    /// An empty corpus has coverage 1.
    pub fn coverage(&self) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        let kept: u64 = self.entries.iter().map(|(_, n)| n).sum();
        kept as f64 / self.total as f64
    }

    /// Writes `#vocab\tcap=N\ttotal=N` followed by `<token>\t<count>` lines.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{HEADER_TAG}\tcap={}\ttotal={}", self.cap, self.total)?;
        for (tok, n) in &self.entries {
            writeln!(w, "{tok}\t{n}")?;
        }
        Ok(())
    }

    /// Reads a vocabulary file. Without a header the cap is the entry count
    /// and the total is the sum of the listed counts.
    pub fn read_from<R: BufRead>(reader: R) -> Result<Self> {
        let mut entries = Vec::new();
        let mut header: Option<(usize, u64)> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let err = |msg: String| Error::Parse { line: lineno, msg };
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let (Some(tok), Some(count)) = (fields.next(), fields.next()) else {
                return Err(err(format!("expected <token>\\t<count>, got {line:?}")));
            };
            if lineno == 1 && tok == HEADER_TAG {
                let cap = parse_kv(count, "cap").ok_or_else(|| err("bad cap".into()))?;
                let total = fields
                    .next()
                    .and_then(|f| parse_kv(f, "total"))
                    .ok_or_else(|| err("bad total".into()))?;
                header = Some((cap as usize, total));
                continue;
            }
            if fields.next().is_some() || tok.is_empty() || tok.contains(char::is_whitespace) {
                return Err(err(format!("malformed entry {line:?}")));
            }
            let n: u64 = count
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| err(format!("count {count:?} is not a positive integer")))?;
            entries.push((tok.to_owned(), n));
        }
        let listed: u64 = entries.iter().map(|(_, n)| n).sum();
        let (cap, total) = header.unwrap_or((entries.len().max(1), listed));
        if entries.len() > cap || total < listed {
            return Err(Error::InvalidArgument(
                "vocabulary header disagrees with its entries".into(),
            ));
        }
        Ok(Self::from_entries(entries, cap, total))
    }
}

fn parse_kv(field: &str, key: &str) -> Option<u64> {
    field.strip_prefix(key)?.strip_prefix('=')?.parse().ok()
}

/// Replaces out-of-vocabulary tokens with `<unk>`.
pub fn apply_vocab(sentence: &str, vocab: &Vocabulary) -> String {
    sentence
        .split_whitespace()
        .map(|t| if vocab.contains(t) { t } else { UNK })
        .collect::<Vec<_>>()
        .join(" ")
}
