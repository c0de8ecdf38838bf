//! Byte pair encoding over Unicode scalars.
//!
//! Every word is split into scalars followed by a distinct end-of-word
//! symbol. Learning repeatedly merges the most frequent adjacent pair (ties go
//! to the lexicographically smallest pair) until the symbol inventory would
//! exceed the target size or no pair occurs at least twice.
//!
//! Applied output marks word-internal boundaries with a trailing `@@`, so
//! `lower` may become `low@@ er`; [`bpe_undo`] removes the markers.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::subword::vocab::TokenCounts;

pub const DEFAULT_WORD_END: &str = "</w>";
pub const CONTINUATION: &str = "@@";
const FORMAT_VERSION: u32 = 1;

/// A subword unit. `word_end` symbols close a word; the bare end-of-word
/// symbol has empty text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub text: String,
    pub word_end: bool,
}

impl Symbol {
    pub fn scalar(c: char) -> Self {
        Symbol {
            text: c.to_string(),
            word_end: false,
        }
    }

    pub fn end() -> Self {
        Symbol {
            text: String::new(),
            word_end: true,
        }
    }

    pub fn merge(left: &Symbol, right: &Symbol) -> Self {
        Symbol {
            text: format!("{}{}", left.text, right.text),
            word_end: right.word_end,
        }
    }

    fn render(&self, marker: &str) -> String {
        if self.word_end {
            format!("{}{marker}", self.text)
        } else {
            self.text.clone()
        }
    }

    fn parse(s: &str, marker: &str) -> Self {
        match s.strip_suffix(marker) {
            Some(text) => Symbol {
                text: text.to_owned(),
                word_end: true,
            },
            None => Symbol {
                text: s.to_owned(),
                word_end: false,
            },
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(DEFAULT_WORD_END))
    }
}

/// Initial symbols of a word: its scalars, then the end-of-word symbol.
pub fn initial_symbols(word: &str) -> Vec<Symbol> {
    word.chars()
        .map(Symbol::scalar)
        .chain(std::iter::once(Symbol::end()))
        .collect()
}

/// Replaces every non-overlapping occurrence of `(left, right)`, scanning left
/// to right.
pub fn merge_pair<T: PartialEq + Clone>(seq: &[T], left: &T, right: &T, merged: &T) -> Vec<T> {
    let mut out = Vec::with_capacity(seq.len());
    let mut i = 0;
    while i < seq.len() {
        if i + 1 < seq.len() && seq[i] == *left && seq[i + 1] == *right {
            out.push(merged.clone());
            i += 2;
        } else {
            out.push(seq[i].clone());
            i += 1;
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct BpeModel {
    merges: Vec<(Symbol, Symbol)>,
    alphabet: BTreeSet<char>,
    target_size: usize,
    word_end_marker: String,
    // interned symbols: alphabet, end marker, then one per merge result
    symbols: Vec<Symbol>,
    ids: HashMap<Symbol, u32>,
    // (left id, right id) -> (ascending ranks the pair was learned at, merged id)
    ranks: HashMap<(u32, u32), (Vec<usize>, u32)>,
}

impl PartialEq for BpeModel {
    fn eq(&self, other: &Self) -> bool {
        self.merges == other.merges
            && self.alphabet == other.alphabet
            && self.target_size == other.target_size
            && self.word_end_marker == other.word_end_marker
    }
}

impl BpeModel {
    pub fn new(
        alphabet: BTreeSet<char>,
        merges: Vec<(Symbol, Symbol)>,
        target_size: usize,
        word_end_marker: impl Into<String>,
    ) -> Self {
        let mut model = BpeModel {
            merges: Vec::new(),
            alphabet,
            target_size,
            word_end_marker: word_end_marker.into(),
            symbols: Vec::new(),
            ids: HashMap::new(),
            ranks: HashMap::new(),
        };
        let initial: Vec<Symbol> = model
            .alphabet
            .iter()
            .map(|&c| Symbol::scalar(c))
            .chain(std::iter::once(Symbol::end()))
            .collect();
        for s in initial {
            model.intern(s);
        }
        for (rank, (l, r)) in merges.into_iter().enumerate() {
            let merged = Symbol::merge(&l, &r);
            let (li, ri, mi) = (model.intern(l.clone()), model.intern(r.clone()), model.intern(merged));
            model.ranks.entry((li, ri)).or_insert((Vec::new(), mi)).0.push(rank);
            model.merges.push((l, r));
        }
        model
    }

    fn intern(&mut self, s: Symbol) -> u32 {
        if let Some(&id) = self.ids.get(&s) {
            return id;
        }
        let id = self.symbols.len() as u32;
        self.ids.insert(s.clone(), id);
        self.symbols.push(s);
        id
    }

    pub fn merges(&self) -> &[(Symbol, Symbol)] {
        &self.merges
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn word_end_marker(&self) -> &str {
        &self.word_end_marker
    }

    /// Every symbol the model can produce from its own alphabet.
    pub fn vocab(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.iter()
    }

    pub fn vocab_size(&self) -> usize {
        self.symbols.len()
    }

    pub fn contains(&self, symbol: &Symbol) -> bool {
        self.ids.contains_key(symbol)
    }

    /// Splits one word into subword symbols by replaying the merges in rank
    /// order. Scalars outside the alphabet stay single symbols.
    pub fn segment(&self, word: &str) -> Vec<Symbol> {
        let mut extra: Vec<Symbol> = Vec::new();
        let base = self.symbols.len() as u32;
        let mut seq: Vec<u32> = initial_symbols(word)
            .into_iter()
            .map(|s| match self.ids.get(&s) {
                Some(&id) => id,
                None => {
                    extra.push(s);
                    base + extra.len() as u32 - 1
                }
            })
            .collect();
        // Equivalent to applying every merge in learned order: a pair whose
        // rank is already behind us is never revisited, even if it reappears.
        let mut next_rank = 0;
        loop {
            let best = seq
                .windows(2)
                .filter_map(|w| {
                    let (ranks, m) = self.ranks.get(&(w[0], w[1]))?;
                    let r = ranks.get(ranks.partition_point(|&r| r < next_rank))?;
                    Some((*r, w[0], w[1], *m))
                })
                .min();
            let Some((rank, l, r, m)) = best else { break };
            seq = merge_pair(&seq, &l, &r, &m);
            next_rank = rank + 1;
        }
        seq.into_iter()
            .map(|id| match self.symbols.get(id as usize) {
                Some(s) => s.clone(),
                None => extra[(id - base) as usize].clone(),
            })
            .collect()
    }

    /// Subword strings of one word, all but the last carrying `@@`.
    pub fn apply_word(&self, word: &str) -> Vec<String> {
        let mut symbols = self.segment(word);
        if symbols.last().is_some_and(|s| s.word_end && s.text.is_empty()) {
            symbols.pop();
        }
        let n = symbols.len();
        symbols
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                if i + 1 < n {
                    format!("{}{CONTINUATION}", s.text)
                } else {
                    s.text
                }
            })
            .collect()
    }

    /// Writes the header line and one `<left> <right>` line per merge.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let alphabet: String = self.alphabet.iter().collect();
        writeln!(
            w,
            "#bpe\tversion={FORMAT_VERSION}\tword_end={}\ttarget_size={}\talphabet={alphabet}",
            self.word_end_marker, self.target_size
        )?;
        for (l, r) in &self.merges {
            writeln!(
                w,
                "{} {}",
                l.render(&self.word_end_marker),
                r.render(&self.word_end_marker)
            )?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .transpose()?
            .ok_or(Error::EmptyInput("merges file"))?;
        let bad_header = || Error::Parse {
            line: 1,
            msg: "expected `#bpe\\tversion=..\\tword_end=..\\ttarget_size=..\\talphabet=..`".into(),
        };
        let mut fields = header.split('\t');
        if fields.next() != Some("#bpe") {
            return Err(bad_header());
        }
        let mut field = |key: &str| -> Result<String> {
            fields
                .next()
                .and_then(|f| f.strip_prefix(key))
                .and_then(|f| f.strip_prefix('='))
                .map(str::to_owned)
                .ok_or_else(bad_header)
        };
        let version: u32 = field("version")?.parse().map_err(|_| bad_header())?;
        if version != FORMAT_VERSION {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported merges format version {version}"),
            });
        }
        let marker = field("word_end")?;
        if marker.is_empty() {
            return Err(bad_header());
        }
        let target_size: usize = field("target_size")?.parse().map_err(|_| bad_header())?;
        let alphabet: BTreeSet<char> = field("alphabet")?.chars().collect();

        let mut merges = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line = line?;
            let mut parts = line.split(' ');
            let (Some(l), Some(r), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    line: idx + 2,
                    msg: format!("expected `<left> <right>`, got {line:?}"),
                });
            };
            let (l, r) = (Symbol::parse(l, &marker), Symbol::parse(r, &marker));
            if l.word_end || l.text.is_empty() {
                return Err(Error::Parse {
                    line: idx + 2,
                    msg: "left side of a merge cannot end a word".into(),
                });
            }
            merges.push((l, r));
        }
        Ok(BpeModel::new(alphabet, merges, target_size, marker))
    }
}

/// Applies a model to every whitespace token of a sentence.
pub fn bpe_apply(sentence: &str, model: &BpeModel) -> String {
    let mut out: Vec<String> = Vec::new();
    for word in sentence.split_whitespace() {
        out.extend(model.apply_word(word));
    }
    out.join(" ")
}

/// Joins `@@`-continued subwords back into words.
pub fn bpe_undo(sentence: &str) -> String {
    sentence.replace("@@ ", "")
}

/// Learns a model from a token stream.
pub fn bpe_learn<I, S>(corpus: I, target_size: usize) -> BpeModel
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counts = TokenCounts::default();
    for line in corpus {
        counts.add_sentence(line.as_ref());
    }
    learn_from_counts(&counts, target_size)
}

pub fn learn_from_counts(counts: &TokenCounts, target_size: usize) -> BpeModel {
    learn_with_trace(counts, target_size).0
}

/// Final learning-time segmentation of one training word.
pub type TraceEntry = (String, Vec<Symbol>);

/// Learns a model and also returns the segmentation every training word had
/// when learning stopped, sorted by word.
pub fn learn_with_trace(counts: &TokenCounts, target_size: usize) -> (BpeModel, Vec<TraceEntry>) {
    let mut learner = Learner::new(counts);
    learner.run(target_size);
    learner.finish(target_size)
}

// (count, smaller pair first, pair ids)
type HeapEntry = (u64, Reverse<(Symbol, Symbol)>, (u32, u32));

struct Learner {
    alphabet: BTreeSet<char>,
    symbols: Vec<Symbol>,
    ids: HashMap<Symbol, u32>,
    words: Vec<(String, Vec<u32>, u64)>,
    pair_counts: HashMap<(u32, u32), u64>,
    occurrences: HashMap<(u32, u32), HashSet<usize>>,
    heap: BinaryHeap<HeapEntry>,
    merges: Vec<(Symbol, Symbol)>,
}

impl Learner {
    fn new(counts: &TokenCounts) -> Self {
        let mut words: Vec<(&str, u64)> = counts.iter().collect();
        words.sort_unstable();
        let mut learner = Learner {
            alphabet: words.iter().flat_map(|(w, _)| w.chars()).collect(),
            symbols: Vec::new(),
            ids: HashMap::new(),
            words: Vec::with_capacity(words.len()),
            pair_counts: HashMap::new(),
            occurrences: HashMap::new(),
            heap: BinaryHeap::new(),
            merges: Vec::new(),
        };
        for (idx, (word, freq)) in words.into_iter().enumerate() {
            let seq: Vec<u32> = initial_symbols(word)
                .into_iter()
                .map(|s| learner.intern(s))
                .collect();
            for w in seq.windows(2) {
                let pair = (w[0], w[1]);
                *learner.pair_counts.entry(pair).or_insert(0) += freq;
                learner.occurrences.entry(pair).or_default().insert(idx);
            }
            learner.words.push((word.to_owned(), seq, freq));
        }
        let pairs: Vec<_> = learner.pair_counts.keys().copied().collect();
        for pair in pairs {
            learner.push(pair);
        }
        learner
    }

    fn intern(&mut self, s: Symbol) -> u32 {
        if let Some(&id) = self.ids.get(&s) {
            return id;
        }
        let id = self.symbols.len() as u32;
        self.ids.insert(s.clone(), id);
        self.symbols.push(s);
        id
    }

    fn push(&mut self, pair: (u32, u32)) {
        if let Some(&count) = self.pair_counts.get(&pair) {
            let key = (
                self.symbols[pair.0 as usize].clone(),
                self.symbols[pair.1 as usize].clone(),
            );
            self.heap.push((count, Reverse(key), pair));
        }
    }

    /// Most frequent live pair, skipping stale heap entries.
    fn best(&mut self) -> Option<(u64, (u32, u32))> {
        while let Some((count, _, pair)) = self.heap.peek() {
            if self.pair_counts.get(pair) == Some(count) {
                return Some((*count, *pair));
            }
            self.heap.pop();
        }
        None
    }

    fn run(&mut self, target_size: usize) {
        let initial = self.alphabet.len() + 1;
        while initial + self.merges.len() < target_size {
            let Some((count, (l, r))) = self.best() else { break };
            if count < 2 {
                break;
            }
            self.heap.pop();
            let left = self.symbols[l as usize].clone();
            let right = self.symbols[r as usize].clone();
            let merged = self.intern(Symbol::merge(&left, &right));
            self.merges.push((left, right));

            let mut affected: Vec<usize> = self
                .occurrences
                .remove(&(l, r))
                .map(|s| s.into_iter().collect())
                .unwrap_or_default();
            affected.sort_unstable();
            // net count change per pair; pairs that come out even need no new heap entry
            let mut delta: HashMap<(u32, u32), i64> = HashMap::new();
            for idx in affected {
                let (_, seq, freq) = &self.words[idx];
                let freq = *freq as i64;
                if !seq.windows(2).any(|w| w[0] == l && w[1] == r) {
                    continue;
                }
                let new_seq = merge_pair(seq, &l, &r, &merged);
                for w in seq.windows(2) {
                    *delta.entry((w[0], w[1])).or_insert(0) -= freq;
                }
                for w in new_seq.windows(2) {
                    *delta.entry((w[0], w[1])).or_insert(0) += freq;
                    self.occurrences.entry((w[0], w[1])).or_default().insert(idx);
                }
                self.words[idx].1 = new_seq;
            }
            let mut changed: Vec<((u32, u32), i64)> = delta.into_iter().filter(|(_, d)| *d != 0).collect();
            changed.sort_unstable();
            for (pair, d) in changed {
                let c = self.pair_counts.entry(pair).or_insert(0);
                *c = c.checked_add_signed(d).expect("pair count stays non-negative");
                if *c == 0 {
                    self.pair_counts.remove(&pair);
                    self.occurrences.remove(&pair);
                } else {
                    self.push(pair);
                }
            }
        }
    }

    fn finish(self, target_size: usize) -> (BpeModel, Vec<TraceEntry>) {
        let trace = self
            .words
            .iter()
            .map(|(word, seq, _)| {
                let syms = seq.iter().map(|&id| self.symbols[id as usize].clone()).collect();
                (word.clone(), syms)
            })
            .collect();
        let model = BpeModel::new(self.alphabet, self.merges, target_size, DEFAULT_WORD_END);
        (model, trace)
    }
}
