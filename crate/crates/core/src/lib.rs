//! Reversible Chinese ↔ Wubi encoding plus the corpus preparation and
//! evaluation tools around it: segmentation, word/subword/character
//! granularities, corpus statistics, BLEU and paired bootstrap testing.

pub mod cli;
pub mod codec;
pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod punct;
pub mod script;
pub mod segmenter;
pub mod subword;
mod tsv;
pub mod wubi_table;

pub use codec::{decode_sentence, encode_sentence, encode_word, Codec, EncodedText, Mode};
pub use error::{Error, Result};
pub use punct::PunctuationMap;
pub use wubi_table::{disambiguate, load_table, validate, RawTableEntry, WubiTable};
