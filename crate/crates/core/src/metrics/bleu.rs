//! 4-gram BLEU over whitespace tokens, single reference.
//!
//! Corpus BLEU is unsmoothed: clipped n-gram matches and totals are summed over
//! all sentences, then `BP * exp(mean log p_n)`. An order with no hypothesis
//! n-grams at all is left out of the mean instead of zeroing the score, so a
//! corpus of very short sentences scored against itself still gets 100.
//!
//! Sentence BLEU (used for per-sentence and length-binned reports) adds one to
//! matches and totals for n >= 2.

use std::collections::HashMap;
use std::ops::{Add, AddAssign};

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 4;
/// Default source-length bin width for binned reports.
pub const DEFAULT_BIN_WIDTH: usize = 4;

/// Sufficient statistics for BLEU; additive over sentences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct BleuStats {
    pub matches: [u64; MAX_ORDER],
    pub totals: [u64; MAX_ORDER],
    pub hyp_len: u64,
    pub ref_len: u64,
}

impl Add for BleuStats {
    type Output = BleuStats;
    fn add(mut self, rhs: BleuStats) -> BleuStats {
        self += rhs;
        self
    }
}

impl AddAssign for BleuStats {
    fn add_assign(&mut self, rhs: BleuStats) {
        for n in 0..MAX_ORDER {
            self.matches[n] += rhs.matches[n];
            self.totals[n] += rhs.totals[n];
        }
        self.hyp_len += rhs.hyp_len;
        self.ref_len += rhs.ref_len;
    }
}

impl std::iter::Sum for BleuStats {
    fn sum<I: Iterator<Item = BleuStats>>(iter: I) -> Self {
        iter.fold(BleuStats::default(), Add::add)
    }
}

fn ngram_counts<'a>(tokens: &'a [&'a str], n: usize) -> HashMap<&'a [&'a str], u64> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

impl BleuStats {
    pub fn of(hypothesis: &str, reference: &str) -> Self {
        let hyp: Vec<&str> = hypothesis.split_whitespace().collect();
        let rf: Vec<&str> = reference.split_whitespace().collect();
        let mut stats = BleuStats {
            hyp_len: hyp.len() as u64,
            ref_len: rf.len() as u64,
            ..Default::default()
        };
        for n in 1..=MAX_ORDER {
            let h = ngram_counts(&hyp, n);
            let r = ngram_counts(&rf, n);
            stats.totals[n - 1] = hyp.len().saturating_sub(n - 1) as u64;
            stats.matches[n - 1] = h
                .iter()
                .map(|(g, &c)| c.min(r.get(g).copied().unwrap_or(0)))
                .sum();
        }
        stats
    }

    pub fn brevity_penalty(&self) -> f64 {
        if self.hyp_len == 0 {
            0.0
        } else if self.hyp_len > self.ref_len {
            1.0
        } else {
            (1.0 - self.ref_len as f64 / self.hyp_len as f64).exp()
        }
    }

    pub fn precisions(&self) -> [f64; MAX_ORDER] {
        std::array::from_fn(|n| {
            if self.totals[n] > 0 {
                self.matches[n] as f64 / self.totals[n] as f64
            } else {
                0.0
            }
        })
    }

    /// Unsmoothed corpus-level score on the 0..100 scale.
    pub fn score(&self) -> f64 {
        let mut log_sum = 0.0;
        let mut orders = 0;
        for n in 0..MAX_ORDER {
            if self.totals[n] == 0 {
                continue;
            }
            if self.matches[n] == 0 {
                return 0.0;
            }
            log_sum += (self.matches[n] as f64 / self.totals[n] as f64).ln();
            orders += 1;
        }
        if orders == 0 {
            return 0.0;
        }
        100.0 * self.brevity_penalty() * (log_sum / orders as f64).exp()
    }

    /// Sentence-level score with add-one smoothing for n >= 2.
    pub fn smoothed_score(&self) -> f64 {
        if self.totals[0] == 0 || self.matches[0] == 0 {
            return 0.0;
        }
        let mut log_sum = (self.matches[0] as f64 / self.totals[0] as f64).ln();
        for n in 1..MAX_ORDER {
            log_sum += ((self.matches[n] + 1) as f64 / (self.totals[n] + 1) as f64).ln();
        }
        100.0 * self.brevity_penalty() * (log_sum / MAX_ORDER as f64).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentenceScore {
    pub index: usize,
    pub source_len: usize,
    pub bleu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthBin {
    /// Inclusive lower bound on source length in words.
    pub start: usize,
    /// Exclusive upper bound.
    pub end: usize,
    pub mean_bleu: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BleuReport {
    pub corpus_bleu: f64,
    #[serde(rename = "precisions")]
    pub ngram_precisions: [f64; MAX_ORDER],
    #[serde(rename = "bp")]
    pub brevity_penalty: f64,
    pub hyp_len: u64,
    pub ref_len: u64,
    pub bin_width: usize,
    pub bins: Vec<LengthBin>,
    pub per_sentence: Vec<SentenceScore>,
}

/// Scores hypotheses against references; source lengths default to the
/// reference lengths.
pub fn corpus_bleu<S: AsRef<str>, T: AsRef<str>>(hypotheses: &[S], references: &[T]) -> Result<BleuReport> {
    corpus_bleu_with_sources::<S, T, &str>(hypotheses, references, None, DEFAULT_BIN_WIDTH)
}

pub fn corpus_bleu_with_sources<S, T, U>(
    hypotheses: &[S],
    references: &[T],
    sources: Option<&[U]>,
    bin_width: usize,
) -> Result<BleuReport>
where
    S: AsRef<str>,
    T: AsRef<str>,
    U: AsRef<str>,
{
    check_len("hypotheses vs references", hypotheses.len(), references.len())?;
    let stats: Vec<BleuStats> = hypotheses
        .iter()
        .zip(references)
        .map(|(h, r)| BleuStats::of(h.as_ref(), r.as_ref()))
        .collect();
    let source_lens: Vec<usize> = match sources {
        Some(src) => {
            check_len("sources vs references", src.len(), references.len())?;
            src.iter().map(|s| s.as_ref().split_whitespace().count()).collect()
        }
        None => stats.iter().map(|s| s.ref_len as usize).collect(),
    };
    report_from_stats(&stats, &source_lens, bin_width)
}

pub(crate) fn check_len(what: &'static str, left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::LengthMismatch { what, left, right });
    }
    Ok(())
}

/// Assembles a report from precomputed per-sentence statistics.
pub fn report_from_stats(
    stats: &[BleuStats],
    source_lens: &[usize],
    bin_width: usize,
) -> Result<BleuReport> {
    check_len("statistics vs source lengths", stats.len(), source_lens.len())?;
    let total: BleuStats = stats.iter().copied().sum();
    let per_sentence = stats
        .iter()
        .zip(source_lens)
        .enumerate()
        .map(|(index, (s, &source_len))| SentenceScore {
            index,
            source_len,
            bleu: s.smoothed_score(),
        })
        .collect();
    let mut report = BleuReport {
        corpus_bleu: total.score(),
        ngram_precisions: total.precisions(),
        brevity_penalty: total.brevity_penalty(),
        hyp_len: total.hyp_len,
        ref_len: total.ref_len,
        bin_width,
        bins: Vec::new(),
        per_sentence,
    };
    report.bins = length_binned_bleu(&report, bin_width)?;
    Ok(report)
}

/// Groups sentence scores into `[k*w, (k+1)*w)` source-length bins; empty
/// bins are omitted.
pub fn length_binned_bleu(report: &BleuReport, bin_width: usize) -> Result<Vec<LengthBin>> {
    if bin_width == 0 {
        return Err(Error::InvalidArgument("bin width must be positive".into()));
    }
    let mut sums: std::collections::BTreeMap<usize, (f64, usize)> = Default::default();
    for s in &report.per_sentence {
        let e = sums.entry(s.source_len / bin_width).or_insert((0.0, 0));
        e.0 += s.bleu;
        e.1 += 1;
    }
    Ok(sums
        .into_iter()
        .map(|(k, (sum, count))| LengthBin {
            start: k * bin_width,
            end: (k + 1) * bin_width,
            mean_bleu: sum / count as f64,
            count,
        })
        .collect())
}
