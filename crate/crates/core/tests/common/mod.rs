//! Brute-force oracles and input generators shared by the integration tests.
//!
//! Nothing here calls into the code under test except to read the fixture
//! table's character list and the punctuation marks.

#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wubi_core::{PunctuationMap, WubiTable};

// ---------------------------------------------------------------- BLEU

fn ngrams(tokens: &[&str], n: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    if tokens.len() < n {
        return out;
    }
    for i in 0..=tokens.len() - n {
        out.push(tokens[i..i + n].iter().map(|s| s.to_string()).collect());
    }
    out
}

/// Clipped matches and totals for one sentence pair by explicit multiset
/// intersection: every hypothesis n-gram consumes one matching reference
/// n-gram if any is left.
pub fn clipped_counts(hyp: &str, rf: &str, n: usize) -> (u64, u64) {
    let h: Vec<&str> = hyp.split_whitespace().collect();
    let r: Vec<&str> = rf.split_whitespace().collect();
    let hyp_grams = ngrams(&h, n);
    let mut pool = ngrams(&r, n);
    let mut matches = 0;
    for g in &hyp_grams {
        if let Some(pos) = pool.iter().position(|x| x == g) {
            pool.swap_remove(pos);
            matches += 1;
        }
    }
    (matches, hyp_grams.len() as u64)
}

/// Corpus BLEU on the 0..100 scale. Orders where the hypotheses contain no
/// n-grams at all are left out of the geometric mean.
pub fn oracle_corpus_bleu(hyps: &[String], refs: &[String]) -> f64 {
    let mut m = [0u64; 4];
    let mut t = [0u64; 4];
    let (mut c, mut r) = (0usize, 0usize);
    for (h, rf) in hyps.iter().zip(refs) {
        c += h.split_whitespace().count();
        r += rf.split_whitespace().count();
        for n in 1..=4 {
            let (mm, tt) = clipped_counts(h, rf, n);
            m[n - 1] += mm;
            t[n - 1] += tt;
        }
    }
    if c == 0 {
        return 0.0;
    }
    let mut logs = Vec::new();
    for n in 0..4 {
        if t[n] == 0 {
            continue;
        }
        if m[n] == 0 {
            return 0.0;
        }
        logs.push((m[n] as f64 / t[n] as f64).ln());
    }
    if logs.is_empty() {
        return 0.0;
    }
    let bp = if c > r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    100.0 * bp * (logs.iter().sum::<f64>() / logs.len() as f64).exp()
}

/// Sentence BLEU with add-one smoothing for orders 2..4.
pub fn oracle_sentence_bleu(hyp: &str, rf: &str) -> f64 {
    let c = hyp.split_whitespace().count();
    let r = rf.split_whitespace().count();
    let (m1, t1) = clipped_counts(hyp, rf, 1);
    if c == 0 || m1 == 0 {
        return 0.0;
    }
    let mut log = (m1 as f64 / t1 as f64).ln();
    for n in 2..=4 {
        let (m, t) = clipped_counts(hyp, rf, n);
        log += ((m + 1) as f64 / (t + 1) as f64).ln();
    }
    let bp = if c > r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    100.0 * bp * (log / 4.0).exp()
}

/// Random small parallel corpus: up to `max_pairs` pairs over a vocabulary of
/// `vocab` words, references perturbed copies of hypotheses half the time.
pub fn random_bleu_corpus(rng: &mut impl Rng, max_pairs: usize, vocab: usize) -> (Vec<String>, Vec<String>) {
    let words: Vec<String> = (0..vocab).map(|i| format!("w{i}")).collect();
    let pairs = rng.gen_range(1..=max_pairs);
    let mut hyps = Vec::with_capacity(pairs);
    let mut refs = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let len = rng.gen_range(0..=12);
        let h: Vec<&str> = (0..len).map(|_| words.choose(rng).unwrap().as_str()).collect();
        let r: Vec<&str> = if rng.gen_bool(0.5) {
            let mut r = h.clone();
            for tok in r.iter_mut() {
                if rng.gen_bool(0.2) {
                    *tok = words.choose(rng).unwrap();
                }
            }
            if rng.gen_bool(0.3) {
                r.push(words.choose(rng).unwrap());
            }
            if rng.gen_bool(0.3) && !r.is_empty() {
                r.remove(rng.gen_range(0..r.len()));
            }
            r
        } else {
            let len = rng.gen_range(0..=12);
            (0..len).map(|_| words.choose(rng).unwrap().as_str()).collect()
        };
        hyps.push(h.join(" "));
        refs.push(r.join(" "));
    }
    (hyps, refs)
}

// ---------------------------------------------------------------- vocabulary

/// Fraction of token occurrences whose type is among the `cap` most frequent
/// (ties by ascending token).
pub fn oracle_coverage(tokens: &[String], cap: usize) -> f64 {
    if tokens.is_empty() {
        return 1.0;
    }
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for t in tokens {
        *counts.entry(t).or_default() += 1;
    }
    let mut by_freq: Vec<(&str, u64)> = counts.into_iter().collect();
    by_freq.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let kept: u64 = by_freq.iter().take(cap).map(|(_, c)| c).sum();
    kept as f64 / tokens.len() as f64
}

/// Zipf(s = 1) corpus over `vocab` types, one sentence per line.
pub fn zipf_corpus(seed: u64, vocab: usize, tokens: usize, sentence_len: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (1..=vocab).map(|k| 1.0 / k as f64).collect();
    let dist = WeightedIndex::new(&weights).unwrap();
    let mut lines = Vec::new();
    let mut line = Vec::with_capacity(sentence_len);
    for _ in 0..tokens {
        line.push(format!("t{}", dist.sample(&mut rng)));
        if line.len() == sentence_len {
            lines.push(line.join(" "));
            line.clear();
        }
    }
    if !line.is_empty() {
        lines.push(line.join(" "));
    }
    lines
}

// ---------------------------------------------------------------- BPE

/// A symbol as `(text, closes_word)`; the bare end-of-word symbol is `("", true)`.
pub type Sym = (String, bool);

/// Learns merges by recounting every adjacent pair over every token occurrence
/// each round. Stops when `alphabet + 1 + merges` reaches `target` or the best
/// pair occurs fewer than twice. Ties go to the smallest pair.
pub fn oracle_bpe_merges(corpus: &[String], target: usize) -> Vec<(Sym, Sym)> {
    let mut words: Vec<Vec<Sym>> = Vec::new();
    let mut alphabet = std::collections::BTreeSet::new();
    for line in corpus {
        for w in line.split_whitespace() {
            let mut syms: Vec<Sym> = w.chars().map(|c| (c.to_string(), false)).collect();
            alphabet.extend(w.chars());
            syms.push((String::new(), true));
            words.push(syms);
        }
    }
    let mut merges = Vec::new();
    while alphabet.len() + 1 + merges.len() < target {
        let mut counts: BTreeMap<(Sym, Sym), u64> = BTreeMap::new();
        for w in &words {
            for i in 0..w.len().saturating_sub(1) {
                *counts.entry((w[i].clone(), w[i + 1].clone())).or_default() += 1;
            }
        }
        // BTreeMap iterates pairs in ascending order, so the first maximum wins ties.
        let mut best: Option<(&(Sym, Sym), u64)> = None;
        for (p, &c) in &counts {
            if best.is_none_or(|(_, bc)| c > bc) {
                best = Some((p, c));
            }
        }
        let Some((pair, count)) = best else { break };
        if count < 2 {
            break;
        }
        let pair = pair.clone();
        let merged: Sym = (format!("{}{}", pair.0 .0, pair.1 .0), pair.1 .1);
        for w in words.iter_mut() {
            let mut out = Vec::with_capacity(w.len());
            let mut i = 0;
            while i < w.len() {
                if i + 1 < w.len() && w[i] == pair.0 && w[i + 1] == pair.1 {
                    out.push(merged.clone());
                    i += 2;
                } else {
                    out.push(w[i].clone());
                    i += 1;
                }
            }
            *w = out;
        }
        merges.push(pair);
    }
    merges
}

/// Random lowercase corpus with shared stems so merges have something to find.
pub fn random_word_corpus(rng: &mut impl Rng, sentences: usize, alphabet: &[char]) -> Vec<String> {
    let stems: Vec<String> = (0..40)
        .map(|_| {
            let len = rng.gen_range(2..=6);
            (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
        })
        .collect();
    (0..sentences)
        .map(|_| {
            let n = rng.gen_range(1..=10);
            (0..n)
                .map(|_| {
                    let mut w = stems.choose(rng).unwrap().clone();
                    if rng.gen_bool(0.4) {
                        let extra = rng.gen_range(1..=3);
                        w.extend((0..extra).map(|_| *alphabet.choose(rng).unwrap()));
                    }
                    w
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

// ---------------------------------------------------------------- stats

/// `(mean, population std)`.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

// ---------------------------------------------------------------- codec inputs

pub fn fixture_chars() -> Vec<char> {
    let mut chars: Vec<char> = WubiTable::fixture().characters();
    chars.sort_unstable();
    chars
}

pub fn fixture_marks() -> Vec<char> {
    let mut marks: Vec<char> = PunctuationMap::builtin().marks().collect();
    marks.sort_unstable();
    marks
}

/// Tokens that look like encoder output or escapes and so must survive as
/// passthrough.
pub const LOOKALIKES: &[&str] = &[
    "abc", "bd|yad", "ukd0", "xyna0|ymc", "^", "^^x", "^bd", ".", ",", "\\,", "\\\"", "'", "\\.",
    "a||b", "|ab", "ab|", "|", "a1", "y", "ok", "xyz", "z", "a|z", "0", "2024", "@@", "<sp>",
    "<unk>", "x-y", "e.g.", "U.N.", "—", "「", "a。",
];

/// One strict-valid token: a Chinese word, a mapped mark, or a non-Chinese
/// passthrough token.
pub fn token_strategy() -> impl Strategy<Value = String> {
    let chars = fixture_chars();
    let marks = fixture_marks();
    let word = proptest::collection::vec(proptest::sample::select(chars), 1..5)
        .prop_map(|cs| cs.into_iter().collect::<String>());
    let mark = proptest::sample::select(marks).prop_map(|c| c.to_string());
    let lookalike = proptest::sample::select(LOOKALIKES).prop_map(str::to_owned);
    let latin = "[a-z0-9|^.,?!:;()<>\"'\\\\@#%&*+=_/-]{1,8}";
    prop_oneof![
        5 => word,
        2 => mark,
        2 => lookalike,
        2 => latin,
    ]
}

pub fn sentence_strategy() -> impl Strategy<Value = String> {
    proptest::collection::vec(token_strategy(), 0..12).prop_map(|t| t.join(" "))
}
