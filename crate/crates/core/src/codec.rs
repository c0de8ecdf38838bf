//! Reversible Chinese ↔ Wubi sentence codec.
//!
//! A segmented sentence is a list of space-separated tokens. Each token is
//! encoded by class:
//!
//! * all-Chinese words become their per-character codes joined by `|`
//!   (`承诺` → `bd|yad`);
//! * a single mapped punctuation mark becomes its ASCII form (`。` → `.`);
//! * tokens without Chinese characters pass through unchanged, prefixed with
//!   `^` whenever the bare token would otherwise decode to something else.
//!
//! Decoding inverts each rule, so `decode(encode(s)) == s` for every sentence
//! accepted in strict mode.

use std::fmt;

use crate::error::{Error, Result};
use crate::punct::PunctuationMap;
use crate::script::{all_cjk, contains_cjk, is_cjk, is_punctuation};
use crate::wubi_table::{is_wubi_key, WubiTable, MAX_CODE_LEN};

pub const WORD_SEPARATOR: char = '|';
pub const ESCAPE: char = '^';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Abort on unknown characters, mixed-script tokens and bad spacing.
    #[default]
    Strict,
    /// Never abort; split what cannot be encoded and report it.
    Lenient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    WubiWord,
    Passthrough,
    Punctuation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedToken {
    pub kind: TokenKind,
    pub surface: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EncodedText {
    pub tokens: Vec<EncodedToken>,
}

impl EncodedText {
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for EncodedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, tok) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&tok.surface)?;
        }
        Ok(())
    }
}

/// Something lenient encoding had to work around. Positions are scalar offsets
/// into the input sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    UnknownCharacter { ch: char, pos: usize },
    MixedToken { token: String, pos: usize },
    UnmappedPunctuation { ch: char, pos: usize },
    IrregularSpacing { pos: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::UnknownCharacter { ch, pos } => {
                write!(f, "unknown character {ch:?} at position {pos} kept as passthrough")
            }
            Diagnostic::MixedToken { token, pos } => {
                write!(f, "mixed-script token {token:?} at position {pos} split")
            }
            Diagnostic::UnmappedPunctuation { ch, pos } => {
                write!(f, "unmapped punctuation {ch:?} at position {pos} kept as is")
            }
            Diagnostic::IrregularSpacing { pos } => {
                write!(f, "irregular spacing at position {pos} normalized")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Encoded {
    pub text: EncodedText,
    pub diagnostics: Vec<Diagnostic>,
}

/// True if `s` is `code ('|' code)*` with `code = [a-y]{1,5}[0-9]*`.
pub fn is_wubi_word(s: &str) -> bool {
    !s.is_empty() && s.split(WORD_SEPARATOR).all(is_code)
}

fn is_code(code: &str) -> bool {
    let bytes = code.as_bytes();
    let letters = bytes.iter().take_while(|b| is_wubi_key(**b)).count();
    (1..=MAX_CODE_LEN).contains(&letters) && bytes[letters..].iter().all(u8::is_ascii_digit)
}

/// Tokens made only of code characters and `|` but not matching the word
/// grammar (`a||b`, `|ab`, `ab|`). The decoder rejects these.
fn is_wubi_shaped(s: &str) -> bool {
    s.contains(WORD_SEPARATOR)
        && s
            .bytes()
            .all(|b| is_wubi_key(b) || b.is_ascii_digit() || b == WORD_SEPARATOR as u8)
}

/// A passthrough token must be escaped iff decoding it bare would not give it back.
pub fn needs_escape(token: &str, punct: &PunctuationMap) -> bool {
    token.starts_with(ESCAPE) || punct.is_form(token) || is_wubi_word(token) || is_wubi_shaped(token)
}

/// Code of one character; `pos` is the scalar offset the error reports.
pub fn encode_char(c: char, table: &WubiTable, pos: usize) -> Result<&str> {
    table
        .code_of(c)
        .ok_or(Error::UnknownCharacter { ch: c, pos })
}

/// Joins per-character codes with `|`: `承诺` → `bd|yad`.
pub fn encode_word(word: &str, table: &WubiTable) -> Result<EncodedToken> {
    encode_word_at(word, table, 0)
}

fn encode_word_at(word: &str, table: &WubiTable, offset: usize) -> Result<EncodedToken> {
    let mut surface = String::with_capacity(word.len() * 2);
    for (i, c) in word.chars().enumerate() {
        if i > 0 {
            surface.push(WORD_SEPARATOR);
        }
        surface.push_str(encode_char(c, table, offset + i)?);
    }
    Ok(EncodedToken {
        kind: TokenKind::WubiWord,
        surface,
    })
}

fn passthrough(token: &str, punct: &PunctuationMap) -> EncodedToken {
    let surface = if needs_escape(token, punct) {
        format!("{ESCAPE}{token}")
    } else {
        token.to_owned()
    };
    EncodedToken {
        kind: TokenKind::Passthrough,
        surface,
    }
}

/// Encodes one pre-segmented sentence.
pub fn encode_sentence(
    sentence: &str,
    table: &WubiTable,
    punct: &PunctuationMap,
    mode: Mode,
) -> Result<Encoded> {
    let mut out = Encoded::default();
    if sentence.is_empty() {
        return Ok(out);
    }
    let mut pos = 0;
    for token in sentence.split(' ') {
        let len = token.chars().count();
        if token.is_empty() || token.contains(char::is_whitespace) {
            match mode {
                Mode::Strict => {
                    return Err(Error::MalformedInput {
                        pos,
                        reason: "tokens must be separated by single spaces",
                    })
                }
                Mode::Lenient => {
                    out.diagnostics.push(Diagnostic::IrregularSpacing { pos });
                    let mut sub_pos = pos;
                    for piece in token.split(char::is_whitespace) {
                        if !piece.is_empty() {
                            encode_token(piece, sub_pos, table, punct, mode, &mut out)?;
                        }
                        sub_pos += piece.chars().count() + 1;
                    }
                }
            }
        } else {
            encode_token(token, pos, table, punct, mode, &mut out)?;
        }
        pos += len + 1;
    }
    Ok(out)
}

fn encode_token(
    token: &str,
    pos: usize,
    table: &WubiTable,
    punct: &PunctuationMap,
    mode: Mode,
    out: &mut Encoded,
) -> Result<()> {
    if all_cjk(token) {
        return encode_cjk_run(token, pos, table, mode, out);
    }
    if !contains_cjk(token) {
        let tok = encode_non_cjk(token, pos, punct, &mut out.diagnostics);
        out.text.tokens.push(tok);
        return Ok(());
    }
    if mode == Mode::Strict {
        return Err(Error::MixedToken {
            token: token.to_owned(),
            pos,
        });
    }
    out.diagnostics.push(Diagnostic::MixedToken {
        token: token.to_owned(),
        pos,
    });
    let mut run_start = pos;
    for run in script_runs(token) {
        if is_cjk(run.chars().next().expect("runs are non-empty")) {
            encode_cjk_run(run, run_start, table, mode, out)?;
        } else {
            let tok = encode_non_cjk(run, run_start, punct, &mut out.diagnostics);
            out.text.tokens.push(tok);
        }
        run_start += run.chars().count();
    }
    Ok(())
}

fn encode_non_cjk(
    token: &str,
    pos: usize,
    punct: &PunctuationMap,
    diagnostics: &mut Vec<Diagnostic>,
) -> EncodedToken {
    let mut chars = token.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        if let Some(form) = punct.normalize(c) {
            return EncodedToken {
                kind: TokenKind::Punctuation,
                surface: form.to_owned(),
            };
        }
        if !c.is_ascii() && is_punctuation(c) {
            diagnostics.push(Diagnostic::UnmappedPunctuation { ch: c, pos });
        }
    }
    passthrough(token, punct)
}

/// Encodes an all-CJK run. In lenient mode unknown characters are split out
/// into raw passthrough tokens between the encodable stretches.
fn encode_cjk_run(
    run: &str,
    pos: usize,
    table: &WubiTable,
    mode: Mode,
    out: &mut Encoded,
) -> Result<()> {
    if mode == Mode::Strict || run.chars().all(|c| table.contains(c)) {
        out.text.tokens.push(encode_word_at(run, table, pos)?);
        return Ok(());
    }
    let mut start = 0;
    let mut start_pos = pos;
    let mut known: Option<bool> = None;
    let flush = |slice: &str, slice_pos: usize, is_known: bool, out: &mut Encoded| {
        if is_known {
            let tok = encode_word_at(slice, table, slice_pos).expect("characters checked");
            out.text.tokens.push(tok);
        } else {
            out.text.tokens.push(EncodedToken {
                kind: TokenKind::Passthrough,
                surface: slice.to_owned(),
            });
        }
    };
    for (i, (byte_idx, c)) in run.char_indices().enumerate() {
        let k = table.contains(c);
        if !k {
            out.diagnostics
                .push(Diagnostic::UnknownCharacter { ch: c, pos: pos + i });
        }
        match known {
            Some(prev) if prev != k => {
                flush(&run[start..byte_idx], start_pos, prev, out);
                start = byte_idx;
                start_pos = pos + i;
            }
            _ => {}
        }
        known = Some(k);
    }
    if let Some(k) = known {
        flush(&run[start..], start_pos, k, out);
    }
    Ok(())
}

/// Maximal runs of CJK / non-CJK scalars.
fn script_runs(token: &str) -> Vec<&str> {
    let mut runs = Vec::new();
    let mut start = 0;
    let mut prev: Option<bool> = None;
    for (i, c) in token.char_indices() {
        let cls = is_cjk(c);
        if prev.is_some_and(|p| p != cls) {
            runs.push(&token[start..i]);
            start = i;
        }
        prev = Some(cls);
    }
    if start < token.len() {
        runs.push(&token[start..]);
    }
    runs
}

/// Inverse of [`encode_sentence`] for strict-mode output.
pub fn decode_sentence(encoded: &str, table: &WubiTable, punct: &PunctuationMap) -> Result<String> {
    let mut out = String::with_capacity(encoded.len());
    if encoded.is_empty() {
        return Ok(out);
    }
    for (i, token) in encoded.split(' ').enumerate() {
        if i > 0 {
            out.push(' ');
        }
        decode_token(token, table, punct, &mut out)?;
    }
    Ok(out)
}

fn decode_token(
    token: &str,
    table: &WubiTable,
    punct: &PunctuationMap,
    out: &mut String,
) -> Result<()> {
    if let Some(rest) = token.strip_prefix(ESCAPE) {
        out.push_str(rest);
    } else if let Some(mark) = punct.denormalize(token) {
        out.push(mark);
    } else if is_wubi_word(token) {
        for code in token.split(WORD_SEPARATOR) {
            let c = table.char_of(code).ok_or_else(|| Error::Decode {
                token: token.to_owned(),
                reason: format!("no character has code `{code}`"),
            })?;
            out.push(c);
        }
    } else if is_wubi_shaped(token) {
        return Err(Error::Decode {
            token: token.to_owned(),
            reason: "misplaced `|` separator".into(),
        });
    } else {
        out.push_str(token);
    }
    Ok(())
}

/// A table and punctuation map bundled for repeated use.
#[derive(Debug, Clone)]
pub struct Codec {
    pub table: WubiTable,
    pub punct: PunctuationMap,
}

impl Codec {
    pub fn new(table: WubiTable, punct: PunctuationMap) -> Self {
        Codec { table, punct }
    }

    /// Fixture table with the builtin punctuation map.
    pub fn fixture() -> Self {
        Codec::new(WubiTable::fixture(), PunctuationMap::builtin())
    }

    pub fn encode(&self, sentence: &str, mode: Mode) -> Result<Encoded> {
        encode_sentence(sentence, &self.table, &self.punct, mode)
    }

    pub fn decode(&self, encoded: &str) -> Result<String> {
        decode_sentence(encoded, &self.table, &self.punct)
    }
}
