//! Character classes used by the codec and the segmenter.

/// Returns true for CJK unified and compatibility ideographs.
pub fn is_cjk(c: char) -> bool {
    matches!(c as u32,
        0x3400..=0x4DBF
        | 0x4E00..=0x9FFF
        | 0xF900..=0xFAFF
        | 0x20000..=0x2A6DF
        | 0x2A700..=0x2EBEF
        | 0x2F800..=0x2FA1F
        | 0x30000..=0x3134F)
}

/// Punctuation in the ASCII, general, CJK and full-width blocks.
pub fn is_punctuation(c: char) -> bool {
    if c.is_ascii_punctuation() {
        return true;
    }
    matches!(c as u32,
        0x2010..=0x2027
        | 0x2030..=0x205E
        | 0x3001..=0x3006
        | 0x3008..=0x303F
        | 0xFE10..=0xFE19
        | 0xFE30..=0xFE4F
        | 0xFF01..=0xFF0F
        | 0xFF1A..=0xFF20
        | 0xFF3B..=0xFF40
        | 0xFF5B..=0xFF65)
}

pub fn contains_cjk(s: &str) -> bool {
    s.chars().any(is_cjk)
}

pub fn all_cjk(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_cjk)
}
