//! Wubi character-code tables.
//!
//! A raw table lists each Chinese character with its base code: one to five
//! letters from the 25 Wubi keys `a`..`y`. Several characters may share a base
//! code. [`disambiguate`] turns the raw list into an injective [`WubiTable`] by
//! giving every member of a shared group a decimal suffix (`0`, `1`, ...) in
//! ascending code point order. Digits never occur in base codes, so a suffixed
//! code can never equal a bare one.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::script::is_cjk;
use crate::tsv;

/// The fixture table shipped with the crate (`data/wubi_fixture.tsv`).
pub const FIXTURE_TABLE: &str = include_str!("../data/wubi_fixture.tsv");

pub const MAX_CODE_LEN: usize = 5;

/// True for the 25 Wubi key letters (`z` is not a key).
pub fn is_wubi_key(b: u8) -> bool {
    (b'a'..=b'y').contains(&b)
}

pub fn is_valid_base_code(code: &str) -> bool {
    (1..=MAX_CODE_LEN).contains(&code.len()) && code.bytes().all(is_wubi_key)
}

/// Splits a final code into its letter part and its (possibly empty) digit suffix.
pub fn split_suffix(code: &str) -> (&str, &str) {
    let cut = code
        .find(|c: char| c.is_ascii_digit())
        .unwrap_or(code.len());
    code.split_at(cut)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawTableEntry {
    pub character: char,
    pub base_code: String,
}

impl RawTableEntry {
    pub fn new(character: char, base_code: impl Into<String>) -> Self {
        RawTableEntry {
            character,
            base_code: base_code.into(),
        }
    }
}

/// Parses a table file: `<char>\t<code>` per line, `#` comments.
///
/// Duplicate identical lines collapse; a character listed with two different
/// codes is a [`Error::ConflictingCode`].
pub fn load_table<R: BufRead>(reader: R) -> Result<Vec<RawTableEntry>> {
    let mut seen: HashMap<char, String> = HashMap::new();
    let mut entries = Vec::new();
    for row in tsv::read_rows(reader)? {
        let character = tsv::single_char(&row.key)
            .filter(|&c| is_cjk(c))
            .ok_or_else(|| Error::Parse {
                line: row.line,
                msg: format!("{:?} is not a single Chinese character", row.key),
            })?;
        if !is_valid_base_code(&row.value) {
            return Err(Error::Parse {
                line: row.line,
                msg: format!("{:?} is not a 1-5 letter code over a-y", row.value),
            });
        }
        match seen.get(&character) {
            Some(prev) if *prev == row.value => continue,
            Some(prev) => {
                return Err(Error::ConflictingCode {
                    line: row.line,
                    ch: character,
                    first: prev.clone(),
                    second: row.value,
                })
            }
            None => {}
        }
        seen.insert(character, row.value.clone());
        entries.push(RawTableEntry::new(character, row.value));
    }
    Ok(entries)
}

/// Bidirectional, collision-free character/code mapping.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WubiTable {
    forward: HashMap<char, String>,
    reverse: HashMap<String, char>,
    collision_groups: BTreeMap<String, Vec<char>>,
}

/// Assigns digit suffixes to shared base codes and builds the lookup maps.
///
/// Deterministic: the result depends only on the set of entries, not their order.
pub fn disambiguate(entries: &[RawTableEntry]) -> WubiTable {
    let mut groups: BTreeMap<&str, BTreeSet<char>> = BTreeMap::new();
    for e in entries {
        groups.entry(&e.base_code).or_default().insert(e.character);
    }
    let mut table = WubiTable::default();
    for (base, members) in groups {
        if members.len() == 1 {
            let c = *members.first().expect("non-empty group");
            table.insert(c, base.to_owned());
            continue;
        }
        for (i, &c) in members.iter().enumerate() {
            table.insert(c, format!("{base}{i}"));
        }
        table
            .collision_groups
            .insert(base.to_owned(), members.into_iter().collect());
    }
    table
}

impl WubiTable {
    /// The shipped fixture table.
    pub fn fixture() -> Self {
        let entries = load_table(FIXTURE_TABLE.as_bytes()).expect("fixture table is valid");
        disambiguate(&entries)
    }

    pub fn from_reader<R: BufRead>(reader: R) -> Result<Self> {
        Ok(disambiguate(&load_table(reader)?))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file))
    }

    /// Builds a table from an explicit forward map without any checking.
    /// Intended for inspecting hand-made tables with [`validate`].
    pub fn from_forward(forward: HashMap<char, String>) -> Self {
        let mut table = WubiTable::default();
        let mut chars: Vec<_> = forward.keys().copied().collect();
        chars.sort_unstable();
        for c in chars {
            table.reverse.entry(forward[&c].clone()).or_insert(c);
        }
        for (c, code) in &forward {
            let (base, suffix) = split_suffix(code);
            if !suffix.is_empty() {
                table
                    .collision_groups
                    .entry(base.to_owned())
                    .or_default()
                    .push(*c);
            }
        }
        for members in table.collision_groups.values_mut() {
            members.sort_unstable();
        }
        table.forward = forward;
        table
    }

    fn insert(&mut self, c: char, code: String) {
        self.reverse.insert(code.clone(), c);
        self.forward.insert(c, code);
    }

    pub fn code_of(&self, c: char) -> Option<&str> {
        self.forward.get(&c).map(String::as_str)
    }

    pub fn char_of(&self, code: &str) -> Option<char> {
        self.reverse.get(code).copied()
    }

    pub fn contains(&self, c: char) -> bool {
        self.forward.contains_key(&c)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn forward(&self) -> &HashMap<char, String> {
        &self.forward
    }

    pub fn reverse(&self) -> &HashMap<String, char> {
        &self.reverse
    }

    /// Base codes shared by two or more characters, with members in suffix order.
    pub fn collision_groups(&self) -> &BTreeMap<String, Vec<char>> {
        &self.collision_groups
    }

    /// Characters in code point order.
    pub fn characters(&self) -> Vec<char> {
        let mut chars: Vec<char> = self.forward.keys().copied().collect();
        chars.sort_unstable();
        chars
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Several characters map to the same final code, or the reverse map
    /// disagrees with the forward map.
    Injectivity { code: String, chars: Vec<char> },
    /// A collision group is not suffixed `0..n`, or a bare code coexists with
    /// suffixed siblings, or a lone code carries a suffix.
    Suffix { base: String, detail: String },
    /// Letters outside `a`..`y`, a base part of the wrong length, or a
    /// malformed digit suffix.
    Alphabet { ch: char, code: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Injectivity { code, chars } => {
                write!(f, "code `{code}` is claimed by {chars:?}")
            }
            Violation::Suffix { base, detail } => write!(f, "base code `{base}`: {detail}"),
            Violation::Alphabet { ch, code } => {
                write!(f, "character {ch:?} has malformed code `{code}`")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks injectivity, the suffix rule and the code alphabet.
pub fn validate(table: &WubiTable) -> ValidationReport {
    let mut violations = Vec::new();

    let mut by_code: BTreeMap<&str, Vec<char>> = BTreeMap::new();
    for (c, code) in &table.forward {
        by_code.entry(code).or_default().push(*c);
    }
    for (code, chars) in &mut by_code {
        chars.sort_unstable();
        let reverse_ok = chars.len() == 1 && table.char_of(code) == Some(chars[0]);
        if !reverse_ok {
            violations.push(Violation::Injectivity {
                code: (*code).to_owned(),
                chars: chars.clone(),
            });
        }
    }
    if table.reverse.len() != table.forward.len() {
        for (code, c) in &table.reverse {
            if table.code_of(*c) != Some(code.as_str()) {
                violations.push(Violation::Injectivity {
                    code: code.clone(),
                    chars: vec![*c],
                });
            }
        }
    }

    // base -> (bare present?, suffixes)
    let mut groups: BTreeMap<&str, (bool, Vec<&str>)> = BTreeMap::new();
    let mut chars: Vec<_> = table.forward.iter().collect();
    chars.sort_unstable();
    for (c, code) in chars {
        let (base, suffix) = split_suffix(code);
        let suffix_ok = suffix.bytes().all(|b| b.is_ascii_digit())
            && (suffix.len() <= 1 || !suffix.starts_with('0'));
        if !is_valid_base_code(base) || !suffix_ok {
            violations.push(Violation::Alphabet {
                ch: *c,
                code: code.clone(),
            });
            continue;
        }
        let group = groups.entry(base).or_default();
        if suffix.is_empty() {
            group.0 = true;
        } else {
            group.1.push(suffix);
        }
    }
    for (base, (bare, suffixes)) in groups {
        if suffixes.is_empty() {
            continue;
        }
        if bare {
            violations.push(Violation::Suffix {
                base: base.to_owned(),
                detail: "bare code coexists with suffixed codes".into(),
            });
        }
        if suffixes.len() < 2 {
            violations.push(Violation::Suffix {
                base: base.to_owned(),
                detail: format!("suffix {} without a collision", suffixes[0]),
            });
            continue;
        }
        let mut nums: Vec<usize> = suffixes.iter().filter_map(|s| s.parse().ok()).collect();
        nums.sort_unstable();
        if nums != (0..suffixes.len()).collect::<Vec<_>>() {
            violations.push(Violation::Suffix {
                base: base.to_owned(),
                detail: format!("suffixes {nums:?} are not 0..{}", suffixes.len()),
            });
        }
    }

    ValidationReport { violations }
}
