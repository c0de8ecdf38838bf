//! Dictionary-based forward maximum matching segmenter.
//!
//! Used when corpora arrive unsegmented. Chinese runs are split greedily into
//! the longest lexicon word at each position, falling back to single
//! characters; other scripts form one token per run and every punctuation mark
//! is its own token.

use std::collections::HashSet;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::script::{is_cjk, is_punctuation};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    words: HashSet<String>,
    max_len: usize,
}

impl Lexicon {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut lex = Lexicon::default();
        for w in words {
            lex.insert(w.into());
        }
        lex
    }

    fn insert(&mut self, word: String) {
        self.max_len = self.max_len.max(word.chars().count());
        self.words.insert(word);
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    /// Length in scalars of the longest word.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        load_lexicon(std::io::BufReader::new(file))
    }
}

/// One word per line; blank lines are skipped.
pub fn load_lexicon<R: BufRead>(reader: R) -> Result<Lexicon> {
    let mut lex = Lexicon::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let word = line.strip_suffix('\r').unwrap_or(&line);
        if word.is_empty() {
            continue;
        }
        if word.contains(char::is_whitespace) {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("word {word:?} contains whitespace"),
            });
        }
        lex.insert(word.to_owned());
    }
    Ok(lex)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Space,
    Cjk,
    Punct,
    Other,
}

fn classify(c: char) -> Class {
    if c.is_whitespace() {
        Class::Space
    } else if is_cjk(c) {
        Class::Cjk
    } else if is_punctuation(c) {
        Class::Punct
    } else {
        Class::Other
    }
}

/// Segments an unsegmented sentence into space-separated tokens.
/// Whitespace already present in the input acts as a boundary and is dropped.
pub fn segment(sentence: &str, lex: &Lexicon) -> String {
    segment_tokens(sentence, lex).join(" ")
}

pub fn segment_tokens<'a>(sentence: &'a str, lex: &Lexicon) -> Vec<&'a str> {
    let mut tokens = Vec::new();
    let mut run_start = 0;
    let mut run_class: Option<Class> = None;
    let close = |start: usize, end: usize, class: Class, tokens: &mut Vec<&'a str>| match class {
        Class::Cjk => forward_max_match(&sentence[start..end], lex, tokens),
        Class::Other => tokens.push(&sentence[start..end]),
        Class::Space | Class::Punct => {}
    };
    for (i, c) in sentence.char_indices() {
        let class = classify(c);
        if run_class != Some(class) || class == Class::Punct {
            if let Some(prev) = run_class {
                close(run_start, i, prev, &mut tokens);
            }
            run_start = i;
            run_class = Some(class);
        }
        if class == Class::Punct {
            tokens.push(&sentence[i..i + c.len_utf8()]);
        }
    }
    if let Some(prev) = run_class {
        close(run_start, sentence.len(), prev, &mut tokens);
    }
    tokens
}

fn forward_max_match<'a>(run: &'a str, lex: &Lexicon, tokens: &mut Vec<&'a str>) {
    // byte offsets of every scalar boundary, including the end
    let bounds: Vec<usize> = run
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(run.len()))
        .collect();
    let n = bounds.len() - 1;
    let mut i = 0;
    while i < n {
        let longest = lex.max_len.min(n - i);
        let len = (2..=longest)
            .rev()
            .find(|&len| lex.contains(&run[bounds[i]..bounds[i + len]]))
            .unwrap_or(1);
        tokens.push(&run[bounds[i]..bounds[i + len]]);
        i += len;
    }
}
