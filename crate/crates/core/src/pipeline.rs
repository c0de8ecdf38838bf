//! Ordered parallel processing of line-oriented files.
//!
//! Input is read in fixed-size chunks; each chunk is mapped on a worker pool
//! and written back in input order before the next chunk is read, so memory
//! stays bounded by the chunk size and output line `i` always corresponds to
//! input line `i`.

use std::io::{BufRead, Write};

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{Error, Result};

pub const CHUNK_LINES: usize = 4096;

/// Output for one input line plus any notes to report for it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Processed {
    pub line: String,
    pub notes: Vec<String>,
}

impl From<String> for Processed {
    fn from(line: String) -> Self {
        Processed {
            line,
            notes: Vec::new(),
        }
    }
}

/// An error tied to a 1-based input line.
#[derive(Debug)]
pub struct LineError {
    pub line: usize,
    pub error: Error,
}

impl std::fmt::Display for LineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

impl std::error::Error for LineError {}

pub fn build_pool(threads: usize) -> Result<ThreadPool> {
    if threads == 0 {
        return Err(Error::InvalidArgument("thread count must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Reads LF-terminated UTF-8 lines in chunks.
pub struct LineChunks<R> {
    reader: R,
    next_line: usize,
    buf: Vec<u8>,
    done: bool,
}

impl<R: BufRead> LineChunks<R> {
    pub fn new(reader: R) -> Self {
        LineChunks {
            reader,
            next_line: 1,
            buf: Vec::new(),
            done: false,
        }
    }

    /// Next chunk with the 1-based number of its first line; `None` at EOF.
    pub fn next_chunk(&mut self, max: usize) -> std::result::Result<Option<(usize, Vec<String>)>, LineError> {
        if self.done {
            return Ok(None);
        }
        let first = self.next_line;
        let mut lines = Vec::with_capacity(max.min(CHUNK_LINES));
        while lines.len() < max {
            self.buf.clear();
            let n = self
                .reader
                .read_until(b'\n', &mut self.buf)
                .map_err(|e| LineError {
                    line: self.next_line,
                    error: e.into(),
                })?;
            if n == 0 {
                self.done = true;
                break;
            }
            if self.buf.last() == Some(&b'\n') {
                self.buf.pop();
            }
            let line = String::from_utf8(std::mem::take(&mut self.buf)).map_err(|_| LineError {
                line: self.next_line,
                error: Error::Parse {
                    line: self.next_line,
                    msg: "invalid UTF-8".into(),
                },
            })?;
            lines.push(line);
            self.next_line += 1;
        }
        if lines.is_empty() {
            Ok(None)
        } else {
            Ok(Some((first, lines)))
        }
    }
}

/// Reads every line of a reader.
pub fn read_all_lines<R: BufRead>(reader: R) -> std::result::Result<Vec<String>, LineError> {
    let mut chunks = LineChunks::new(reader);
    let mut out = Vec::new();
    while let Some((_, mut lines)) = chunks.next_chunk(CHUNK_LINES)? {
        out.append(&mut lines);
    }
    Ok(out)
}

/// Maps every line through `f` on `pool`, writing results in input order.
///
/// Stops at the first failing line (in input order). Notes are handed to
/// `on_note` in input order with their 1-based line number. Returns the
/// number of lines processed.
pub fn map_lines<R, W, F, N>(
    reader: R,
    mut writer: W,
    pool: &ThreadPool,
    f: F,
    mut on_note: N,
) -> std::result::Result<usize, LineError>
where
    R: BufRead,
    W: Write,
    F: Fn(&str) -> Result<Processed> + Sync,
    N: FnMut(usize, &str),
{
    let mut chunks = LineChunks::new(reader);
    let mut count = 0;
    let chunk_size = CHUNK_LINES.max(pool.current_num_threads() * 256);
    while let Some((first, lines)) = chunks.next_chunk(chunk_size)? {
        let results: Vec<Result<Processed>> =
            pool.install(|| lines.par_iter().map(|l| f(l)).collect());
        for (offset, result) in results.into_iter().enumerate() {
            let line = first + offset;
            let processed = result.map_err(|error| LineError { line, error })?;
            for note in &processed.notes {
                on_note(line, note);
            }
            writer
                .write_all(processed.line.as_bytes())
                .and_then(|_| writer.write_all(b"\n"))
                .map_err(|e| LineError {
                    line,
                    error: e.into(),
                })?;
            count += 1;
        }
    }
    writer.flush().map_err(|e| LineError {
        line: count,
        error: e.into(),
    })?;
    Ok(count)
}
