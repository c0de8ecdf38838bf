//! Character-level streams.

/// Stands in for an original space so the transform stays invertible.
pub const SPACE_TOKEN: &str = "<sp>";

/// One token per scalar; spaces become `<sp>`.
pub fn to_characters(sentence: &str) -> String {
    let mut out = String::with_capacity(sentence.len() * 2);
    for (i, c) in sentence.chars().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        if c == ' ' {
            out.push_str(SPACE_TOKEN);
        } else {
            out.push(c);
        }
    }
    out
}

/// Inverse of [`to_characters`].
pub fn from_characters(tokens: &str) -> String {
    if tokens.is_empty() {
        return String::new();
    }
    tokens
        .split(' ')
        .map(|t| if t == SPACE_TOKEN { " " } else { t })
        .collect()
}
