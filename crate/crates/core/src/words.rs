//! Alphabets, finite words, and factor extraction.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A letter, stored as its index within an [`Alphabet`].
pub type Letter = u8;

/// A finite word: a sequence of letter indices.
pub type Word = Vec<Letter>;

/// Largest supported alphabet.
pub const MAX_LETTERS: usize = 128;

/// Placeholder for the empty word in the text formats.
pub const EMPTY_WORD_TOKEN: &str = "-";

/// An ordered alphabet mapping letter names to compact indices.
///
/// The order of names is the order of first appearance and fixes every
/// lexicographic order used elsewhere in the crate.  Names are restricted to
/// ASCII alphanumerics and `_` so they can never collide with the
/// punctuation of the text formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// Builds an alphabet from distinct letter names.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::invalid("alphabet must not be empty"));
        }
        if names.len() > MAX_LETTERS {
            return Err(Error::invalid(format!(
                "alphabet has {} letters, maximum is {MAX_LETTERS}",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty()
                || !name
                    .bytes()
                    .all(|b| b.is_ascii_alphanumeric() || b == b'_')
            {
                return Err(Error::invalid(format!(
                    "letter name {name:?} must be non-empty and use only ASCII alphanumerics or '_'"
                )));
            }
            if names[..i].contains(name) {
                return Err(Error::invalid(format!("duplicate letter name {name:?}")));
            }
        }
        Ok(Alphabet { names })
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Always false; alphabets are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Name of a letter index.
    ///
    /// # Panics
    /// Panics if `l` is out of range.
    pub fn name(&self, l: Letter) -> &str {
        &self.names[l as usize]
    }

    /// Index of a letter name, if present.
    pub fn index_of(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name).map(|i| i as Letter)
    }

    /// Letter indices in order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len()).map(|i| i as Letter)
    }

    /// Letter names in index order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    /// True when every letter name is a single character, which enables the
    /// compact contiguous word syntax.
    pub fn single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parses a word.
    ///
    /// `-` denotes the empty word.  Words over single-character alphabets
    /// may be written contiguously (`abba`); words with whitespace are split
    /// into letter-name tokens, which is the only accepted form when some
    /// letter name has several characters.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::parse("empty word text (use '-' for the empty word)"));
        }
        if text == EMPTY_WORD_TOKEN {
            return Ok(Word::new());
        }
        if text.split_whitespace().nth(1).is_some() || !self.single_char() {
            text.split_whitespace()
                .map(|tok| {
                    self.index_of(tok)
                        .ok_or_else(|| Error::parse(format!("unknown letter {tok:?}")))
                })
                .collect()
        } else {
            text.chars()
                .map(|c| {
                    self.index_of(&c.to_string())
                        .ok_or_else(|| Error::parse(format!("unknown letter {c:?}")))
                })
                .collect()
        }
    }

    /// Formats a word; inverse of [`Alphabet::parse_word`].
    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return EMPTY_WORD_TOKEN.to_string();
        }
        let sep = if self.single_char() { "" } else { " " };
        let mut out = String::new();
        for (i, &l) in w.iter().enumerate() {
            if i > 0 {
                out.push_str(sep);
            }
            out.push_str(self.name(l));
        }
        out
    }
}

/// All start positions (overlapping) of `v` inside `w`, in increasing order.
///
/// `v` must be non-empty.
pub fn occurrences(w: &[Letter], v: &[Letter]) -> Result<Vec<usize>> {
    if v.is_empty() {
        return Err(Error::invalid("occurrences of the empty word are undefined"));
    }
    if v.len() > w.len() {
        return Ok(Vec::new());
    }
    Ok((0..=w.len() - v.len())
        .filter(|&i| &w[i..i + v.len()] == v)
        .collect())
}

/// The set of length-`n` factors of `w`.
///
/// Returns `{ε}` for `n = 0` and the empty set when `n > |w|`.
pub fn factors(w: &[Letter], n: usize) -> BTreeSet<Word> {
    let mut set = BTreeSet::new();
    if n == 0 {
        set.insert(Word::new());
        return set;
    }
    if n > w.len() {
        return set;
    }
    for win in w.windows(n) {
        set.insert(win.to_vec());
    }
    set
}
