//! Two-column tab-separated files with `#` comments, shared by the table
//! and punctuation loaders.

use std::io::BufRead;

use crate::error::{Error, Result};

/// One data line: 1-based line number plus its two fields.
pub(crate) struct Row {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub(crate) fn read_rows<R: BufRead>(reader: R) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::Parse {
                line: lineno,
                msg: "invalid UTF-8".into(),
            },
            _ => Error::Io(e),
        })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(key), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 2 tab-separated fields in {line:?}"),
            });
        };
        rows.push(Row {
            line: lineno,
            key: key.to_owned(),
            value: value.to_owned(),
        });
    }
    Ok(rows)
}

/// Returns the only scalar of `s`, or `None` if `s` is not exactly one scalar.
pub(crate) fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}
