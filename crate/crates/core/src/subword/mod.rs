//! Word, subword and character granularities.

pub mod bpe;
pub mod chars;
pub mod vocab;

pub use bpe::{bpe_apply, bpe_learn, bpe_undo, BpeModel, Symbol};
pub use chars::{from_characters, to_characters, SPACE_TOKEN};
pub use vocab::{apply_vocab, build_vocab, TokenCounts, Vocabulary, UNK};

/// Word-level vocabulary cap used for the translation experiments.
pub const DEFAULT_WORD_CAP: usize = 50_000;
/// Subword inventory cap used for the translation experiments.
pub const DEFAULT_BPE_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Level {
    #[default]
    Word,
    Subword,
    Character,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GranularityConfig {
    pub level: Level,
    pub word_cap: usize,
    pub bpe_cap: usize,
}

impl Default for GranularityConfig {
    fn default() -> Self {
        GranularityConfig {
            level: Level::Word,
            word_cap: DEFAULT_WORD_CAP,
            bpe_cap: DEFAULT_BPE_CAP,
        }
    }
}

impl GranularityConfig {
    pub fn validate(&self) -> crate::error::Result<()> {
        if self.word_cap == 0 || self.bpe_cap == 0 {
            return Err(crate::error::Error::InvalidArgument(
                "vocabulary caps must be positive".into(),
            ));
        }
        Ok(())
    }
}
