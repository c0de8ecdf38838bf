use proptest::prelude::*;

use wubi_core::script::is_cjk;
use wubi_core::segmenter::{segment, segment_tokens, Lexicon};

const CHARS: &[char] = &['人', '权', '问', '题', '社', '会', '与', '中', '国'];

fn cjk_string(max: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(proptest::sample::select(CHARS), 1..max)
        .prop_map(|v| v.into_iter().collect())
}

fn raw_sentence() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        4 => cjk_string(8),
        1 => "[a-z0-9]{1,4}",
        1 => proptest::sample::select(vec!["。", "，", " ", "、", "!"]).prop_map(str::to_owned),
    ];
    proptest::collection::vec(piece, 0..8).prop_map(|v| v.concat())
}

proptest! {
    #[test]
    fn concatenation_identity(
        words in proptest::collection::vec(cjk_string(5), 0..12),
        s in raw_sentence(),
    ) {
        let lex = Lexicon::new(words);
        let joined: String = segment(&s, &lex).split(' ').collect();
        let expect: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(joined, expect);
    }

    #[test]
    fn greedy_dominance(
        words in proptest::collection::vec(cjk_string(5), 0..12),
        s in proptest::collection::vec(proptest::sample::select(CHARS), 0..30),
    ) {
        let s: String = s.into_iter().collect();
        let lex = Lexicon::new(words.clone());
        let tokens = segment_tokens(&s, &lex);
        let chars: Vec<char> = s.chars().collect();
        let mut pos = 0;
        for tok in &tokens {
            let len = tok.chars().count();
            prop_assert!(len == 1 || lex.contains(tok));
            // no lexicon word starting here is longer than the chosen token
            for w in &words {
                let wl = w.chars().count();
                if wl > len && pos + wl <= chars.len() {
                    let candidate: String = chars[pos..pos + wl].iter().collect();
                    prop_assert_ne!(&candidate, w, "token {} at {} could extend", tok, pos);
                }
            }
            pos += len;
        }
        prop_assert_eq!(pos, chars.len());
        prop_assert_eq!(segment(&s, &lex), segment(&s, &lex));
    }

    #[test]
    fn non_chinese_runs_stay_whole(s in raw_sentence()) {
        let lex = Lexicon::new(["人权"]);
        for tok in segment_tokens(&s, &lex) {
            let cjk = tok.chars().filter(|c| is_cjk(*c)).count();
            prop_assert!(cjk == 0 || cjk == tok.chars().count(), "{}", tok);
        }
    }
}
