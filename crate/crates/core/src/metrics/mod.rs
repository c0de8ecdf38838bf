//! Corpus statistics and translation evaluation.

pub mod bleu;
pub mod bootstrap;
pub mod normalize;
pub mod stats;

pub use bleu::{
    corpus_bleu, corpus_bleu_with_sources, length_binned_bleu, BleuReport, BleuStats, LengthBin,
    SentenceScore, DEFAULT_BIN_WIDTH,
};
pub use bootstrap::{paired_bootstrap, SignificanceResult, DEFAULT_SAMPLES};
pub use normalize::{normalize_for_bleu, Normalized, Side};
pub use stats::{corpus_stats, output_length_stats, CorpusStats, MeanStd};
