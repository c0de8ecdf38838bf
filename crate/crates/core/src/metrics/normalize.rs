//! Brings Chinese-side system output into the Wubi space before scoring, so
//! Chinese-producing and Wubi-producing systems are compared on equal terms.

use rayon::prelude::*;

use crate::codec::{encode_sentence, Diagnostic, Mode};
use crate::punct::PunctuationMap;
use crate::script::is_cjk;
use crate::wubi_table::WubiTable;

/// Which script a stream is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    /// Chinese if any line contains a Chinese character or a mapped
    /// Chinese punctuation mark, Wubi otherwise.
    #[default]
    Auto,
    Chinese,
    Wubi,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub lines: Vec<String>,
    /// False when the stream was already Wubi and passed through unchanged.
    pub converted: bool,
    /// `(line index, diagnostic)` for everything lenient encoding worked around.
    pub diagnostics: Vec<(usize, Diagnostic)>,
}

pub fn detect_side<S: AsRef<str>>(lines: &[S], punct: &PunctuationMap) -> Side {
    let chinese = lines
        .iter()
        .any(|l| l.as_ref().chars().any(|c| is_cjk(c) || punct.is_mark(c)));
    if chinese {
        Side::Chinese
    } else {
        Side::Wubi
    }
}

/// Encodes a Chinese stream to Wubi in lenient mode; Wubi streams pass through.
pub fn normalize_for_bleu<S: AsRef<str> + Sync>(
    lines: &[S],
    side: Side,
    table: &WubiTable,
    punct: &PunctuationMap,
) -> Normalized {
    let side = match side {
        Side::Auto => detect_side(lines, punct),
        s => s,
    };
    if side == Side::Wubi {
        return Normalized {
            lines: lines.iter().map(|l| l.as_ref().to_owned()).collect(),
            converted: false,
            diagnostics: Vec::new(),
        };
    }
    let encoded: Vec<_> = lines
        .par_iter()
        .map(|line| {
            encode_sentence(line.as_ref(), table, punct, Mode::Lenient)
                .expect("lenient encoding does not fail")
        })
        .collect();
    let mut out = Vec::with_capacity(lines.len());
    let mut diagnostics = Vec::new();
    for (i, enc) in encoded.into_iter().enumerate() {
        diagnostics.extend(enc.diagnostics.into_iter().map(|d| (i, d)));
        out.push(enc.text.render());
    }
    Normalized {
        lines: out,
        converted: true,
        diagnostics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::bleu::corpus_bleu;

    #[test]
    fn chinese_reference_meets_wubi_hypothesis() {
        let (t, p) = (WubiTable::fixture(), PunctuationMap::builtin());
        let refs = normalize_for_bleu(&["承诺"], Side::Auto, &t, &p);
        let hyps = normalize_for_bleu(&["bd|yad"], Side::Auto, &t, &p);
        assert!(refs.converted);
        assert!(!hyps.converted);
        assert_eq!(refs.lines, hyps.lines);
        assert_eq!(corpus_bleu(&hyps.lines, &refs.lines).unwrap().corpus_bleu, 100.0);
    }

    #[test]
    fn wubi_input_is_untouched() {
        let (t, p) = (WubiTable::fixture(), PunctuationMap::builtin());
        let lines = ["py|wf gn w|sc .", "hello  world"];
        let n = normalize_for_bleu(&lines, Side::Auto, &t, &p);
        assert_eq!(n.lines, lines);
    }

    #[test]
    fn unknown_characters_are_flagged() {
        let (t, p) = (WubiTable::fixture(), PunctuationMap::builtin());
        let n = normalize_for_bleu(&["承诺 龘"], Side::Auto, &t, &p);
        assert_eq!(n.lines, ["bd|yad 龘"]);
        assert_eq!(
            n.diagnostics,
            vec![(0, Diagnostic::UnknownCharacter { ch: '龘', pos: 3 })]
        );
    }
}
