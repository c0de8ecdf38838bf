//! Descriptive corpus statistics (population variance).

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    /// Mean and population standard deviation; `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Some(MeanStd {
            mean,
            std: var.sqrt(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorpusStats {
    pub sentence_count: usize,
    pub words_per_sentence: MeanStd,
    /// Averaged over every word occurrence.
    pub chars_per_word: MeanStd,
    /// Scalars per sentence, separating spaces excluded.
    pub chars_per_sentence: MeanStd,
}

/// Per-sentence counts, collectable in parallel and combined in order.
#[derive(Debug, Clone, Default)]
pub struct SentenceCounts {
    pub word_lengths: Vec<usize>,
}

impl SentenceCounts {
    pub fn of(sentence: &str) -> Self {
        let word_lengths: Vec<usize> = sentence
            .split_whitespace()
            .map(|w| w.chars().count())
            .collect();
        SentenceCounts { word_lengths }
    }
}

pub fn corpus_stats<I, S>(corpus: I) -> Result<CorpusStats>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    stats_from_counts(corpus.into_iter().map(|s| SentenceCounts::of(s.as_ref())))
}

pub fn stats_from_counts<I>(counts: I) -> Result<CorpusStats>
where
    I: IntoIterator<Item = SentenceCounts>,
{
    let mut words = Vec::new();
    let mut word_lengths = Vec::new();
    let mut sentence_chars = Vec::new();
    for c in counts {
        words.push(c.word_lengths.len() as f64);
        sentence_chars.push(c.word_lengths.iter().sum::<usize>() as f64);
        word_lengths.extend(c.word_lengths.iter().map(|&l| l as f64));
    }
    let words_per_sentence = MeanStd::of(&words).ok_or(Error::EmptyInput("corpus statistics"))?;
    Ok(CorpusStats {
        sentence_count: words.len(),
        words_per_sentence,
        chars_per_word: MeanStd::of(&word_lengths).unwrap_or_default(),
        chars_per_sentence: MeanStd::of(&sentence_chars).expect("non-empty"),
    })
}

/// Mean and population std of hypothesis word counts.
pub fn output_length_stats<I, S>(hypotheses: I) -> Result<MeanStd>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let lens: Vec<f64> = hypotheses
        .into_iter()
        .map(|h| h.as_ref().split_whitespace().count() as f64)
        .collect();
    MeanStd::of(&lens).ok_or(Error::EmptyInput("output length statistics"))
}
