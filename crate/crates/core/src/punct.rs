//! Bijective Chinese punctuation ↔ ASCII map.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use crate::codec::is_wubi_word;
use crate::error::{Error, Result};
use crate::script::is_cjk;
use crate::tsv;

/// The map shipped with the crate (`data/punct.tsv`).
pub const DEFAULT_PUNCT: &str = include_str!("../data/punct.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PunctuationMap {
    to_ascii: HashMap<char, String>,
    to_mark: HashMap<String, char>,
}

impl PunctuationMap {
    pub fn builtin() -> Self {
        Self::from_reader(DEFAULT_PUNCT.as_bytes()).expect("builtin punctuation map is valid")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file))
    }

    /// Parses `<mark>\t<ascii form>` lines.
    ///
    /// Forms are one or two printable ASCII characters and may not look like
    /// a Wubi word, contain `|`, or start with the `^` escape, since the
    /// decoder has to tell them apart from encoded words.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        let mut map = PunctuationMap::default();
        for row in tsv::read_rows(reader)? {
            let err = |msg: String| Error::Parse { line: row.line, msg };
            let mark = tsv::single_char(&row.key)
                .filter(|c| !c.is_ascii() && !is_cjk(*c) && !c.is_whitespace())
                .ok_or_else(|| err(format!("{:?} is not a single non-ASCII mark", row.key)))?;
            let form = row.value.as_str();
            let form_ok = (1..=2).contains(&form.len())
                && form.bytes().all(|b| b.is_ascii_graphic())
                && !form.starts_with('^')
                && !form.contains('|')
                && !is_wubi_word(form);
            if !form_ok {
                return Err(err(format!("{form:?} is not a usable ASCII form")));
            }
            if let Some(prev) = map.to_ascii.get(&mark) {
                if prev == form {
                    continue;
                }
                return Err(err(format!("{mark:?} already maps to {prev:?}")));
            }
            if let Some(prev) = map.to_mark.get(form) {
                return Err(err(format!("{form:?} already claimed by {prev:?}")));
            }
            map.to_ascii.insert(mark, form.to_owned());
            map.to_mark.insert(form.to_owned(), mark);
        }
        Ok(map)
    }

    /// ASCII form of a mapped mark.
    pub fn normalize(&self, mark: char) -> Option<&str> {
        self.to_ascii.get(&mark).map(String::as_str)
    }

    /// Mark for an ASCII form produced by [`normalize`](Self::normalize).
    pub fn denormalize(&self, form: &str) -> Option<char> {
        self.to_mark.get(form).copied()
    }

    pub fn is_mark(&self, c: char) -> bool {
        self.to_ascii.contains_key(&c)
    }

    pub fn is_form(&self, s: &str) -> bool {
        self.to_mark.contains_key(s)
    }

    pub fn len(&self) -> usize {
        self.to_ascii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_ascii.is_empty()
    }

    pub fn marks(&self) -> impl Iterator<Item = char> + '_ {
        self.to_ascii.keys().copied()
    }
}
