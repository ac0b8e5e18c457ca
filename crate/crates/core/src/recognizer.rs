//! Window recognizers: locating substitution cut positions from bounded
//! context, and exact factor membership for long words via recursive
//! desubstitution.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::substitution::{recognizer_cut_data, FactorLanguage, Substitution};
use crate::words::{Alphabet, Letter, Word};

/// Default cap on the recognizer radius search.
pub const DEFAULT_MAX_RADIUS: usize = 16;

/// Default multiple of the recurrence gap used for coverage prefixes.
pub const DEFAULT_COVERAGE_FACTOR: usize = 4;

/// Depth of the periodicity screen applied before building recognizers.
const APERIODICITY_DEPTH: usize = 64;

/// Doubling rounds allowed while topping up window coverage.
const COVERAGE_DOUBLINGS: usize = 8;

/// Recursive desubstitution call budget per membership query.
const MEMBERSHIP_CALL_BUDGET: usize = 1 << 16;

/// A cut-position recognizer: maps every admissible window of length
/// `2*radius + 1` to the cut verdict at its center — either the letter
/// whose image block starts there, or no cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recognizer {
    radius: usize,
    alphabet: Alphabet,
    table: BTreeMap<Word, Option<Letter>>,
}

/// Result of sliding a recognizer over a word: the absolute positions that
/// carry cuts and the source letter of each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub cuts: Vec<usize>,
    pub sources: Word,
}

impl Recognizer {
    /// Window radius.
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Alphabet the windows range over.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Verdict for one window of length `2*radius + 1`: `None` when the
    /// window is unknown, otherwise the cut verdict at its center.
    pub fn verdict(&self, window: &[Letter]) -> Option<&Option<Letter>> {
        self.table.get(window)
    }

    /// Number of known windows.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    /// True when the table is empty (never holds for built recognizers).
    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Applies the recognizer to every full window of `w` and reports all
    /// recognized cut positions with their source letters.
    ///
    /// Errors when `w` is shorter than one window or contains a window
    /// missing from the table.
    pub fn decode(&self, w: &[Letter]) -> Result<Decoded> {
        let win = 2 * self.radius + 1;
        if w.len() < win {
            return Err(Error::invalid(format!(
                "word of length {} is shorter than one window ({win})",
                w.len()
            )));
        }
        let mut cuts = Vec::new();
        let mut sources = Word::new();
        for i in 0..=w.len() - win {
            match self.table.get(&w[i..i + win]) {
                None => {
                    return Err(Error::invalid(format!(
                        "window {:?} is not in the recognizer table",
                        self.alphabet.format_word(&w[i..i + win])
                    )))
                }
                Some(None) => {}
                Some(Some(src)) => {
                    cuts.push(i + self.radius);
                    sources.push(*src);
                }
            }
        }
        Ok(Decoded { cuts, sources })
    }

    /// Serializes the table: a `radius:` header, then one
    /// `window -> verdict` line per window in lexicographic order, with `#`
    /// for "no cut".
    pub fn dump(&self) -> String {
        let mut out = format!("radius: {}\n", self.radius);
        for (w, v) in &self.table {
            out.push_str(&self.alphabet.format_word(w));
            out.push_str(" -> ");
            match v {
                Some(l) => out.push_str(self.alphabet.name(*l)),
                None => out.push('#'),
            }
            out.push('\n');
        }
        out
    }

    /// Parses the [`Recognizer::dump`] format.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::parse("empty recognizer"))?;
        let radius: usize = header
            .strip_prefix("radius:")
            .ok_or_else(|| Error::parse("missing 'radius:' header"))?
            .trim()
            .parse()
            .map_err(|_| Error::parse("bad radius value"))?;
        let mut table = BTreeMap::new();
        for line in lines {
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::parse(format!("missing '->' in {line:?}")))?;
            let w = alphabet.parse_word(lhs)?;
            if w.len() != 2 * radius + 1 {
                return Err(Error::parse(format!(
                    "window {:?} does not match radius {radius}",
                    lhs.trim()
                )));
            }
            let rhs = rhs.trim();
            let v = if rhs == "#" {
                None
            } else {
                Some(
                    alphabet
                        .index_of(rhs)
                        .ok_or_else(|| Error::parse(format!("unknown letter {rhs:?}")))?,
                )
            };
            if table.insert(w, v).is_some() {
                return Err(Error::parse(format!("duplicate window in {line:?}")));
            }
        }
        if table.is_empty() {
            return Err(Error::parse("recognizer has no windows"));
        }
        Ok(Recognizer {
            radius,
            alphabet: alphabet.clone(),
            table,
        })
    }

    /// Iterates over `(window, verdict)` pairs in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Option<Letter>)> {
        self.table.iter()
    }
}

/// Builds the window-to-cut-verdict table at `radius` with the verdict read
/// at `offset` from the window start (the recognizer itself uses
/// `offset = radius`).  Returns `None` when two occurrences of a window
/// disagree, i.e. the window length does not determine the verdict.
pub(crate) fn offset_cut_table(
    lang: &mut FactorLanguage,
    radius: usize,
    offset: usize,
    coverage_factor: usize,
) -> Result<Option<BTreeMap<Word, Option<Letter>>>> {
    let win = 2 * radius + 1;
    debug_assert!(offset < win);
    let s = lang.substitution().clone();
    let gap = lang.recurrence_gap(win)?;
    let target = lang.block_words(win)?.len();
    let mut n = coverage_factor * gap + win + 1;
    for _ in 0..COVERAGE_DOUBLINGS {
        let data = recognizer_cut_data(&s, n)?;
        let verdicts: BTreeMap<usize, Letter> = data
            .cuts
            .iter()
            .copied()
            .zip(data.sources.iter().copied())
            .collect();
        let x = &data.prefix;
        let mut table: BTreeMap<Word, Option<Letter>> = BTreeMap::new();
        let mut conflict = false;
        for i in 0..=x.len() - win {
            let v = verdicts.get(&(i + offset)).copied();
            match table.entry(x[i..i + win].to_vec()) {
                alloc::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(v);
                }
                alloc::collections::btree_map::Entry::Occupied(e) => {
                    if *e.get() != v {
                        conflict = true;
                        break;
                    }
                }
            }
        }
        if conflict {
            return Ok(None);
        }
        // windows of the fixed point are admissible, so reaching the full
        // count means the table is total on the admissible windows
        if table.len() == target {
            return Ok(Some(table));
        }
        n *= 2;
    }
    Err(Error::budget("window coverage did not stabilize"))
}

/// Builds a recognizer for a primitive aperiodic substitution: the smallest
/// radius at most `max_radius` whose centered windows determine cut
/// positions without conflict along a coverage prefix.
pub fn build_recognizer(
    s: &Substitution,
    max_radius: usize,
    coverage_factor: usize,
) -> Result<Recognizer> {
    if coverage_factor == 0 {
        return Err(Error::invalid("coverage factor must be at least 1"));
    }
    let mut lang = FactorLanguage::new(s)?;
    if !lang.is_aperiodic(APERIODICITY_DEPTH)? {
        return Err(Error::unsupported(
            "recognizer requires an aperiodic subshift",
        ));
    }
    for radius in 0..=max_radius {
        if let Some(table) = offset_cut_table(&mut lang, radius, radius, coverage_factor)? {
            return Ok(Recognizer {
                radius,
                alphabet: s.alphabet().clone(),
                table,
            });
        }
    }
    Err(Error::budget(format!(
        "no conflict-free recognizer radius up to {max_radius}"
    )))
}

/// Exact factor membership, efficient for words far longer than the
/// materialized language sets: short words fall back to the factor sets,
/// long words are desubstituted with the recognizer and checked recursively.
#[derive(Debug, Clone)]
pub struct MembershipOracle {
    subst: Substitution,
    rec: Recognizer,
    lang: FactorLanguage,
    base_len: usize,
}

impl MembershipOracle {
    /// `rec` must be a recognizer for `s`.
    pub fn new(s: &Substitution, rec: Recognizer) -> Result<Self> {
        if rec.alphabet() != s.alphabet() {
            return Err(Error::invalid("recognizer alphabet mismatch"));
        }
        let lang = FactorLanguage::new(s)?;
        let max_img = s
            .alphabet()
            .letters()
            .map(|a| s.image(a).len())
            .max()
            .unwrap_or(1);
        let win = 2 * rec.radius() + 1;
        let base_len = (2 * win).max(win + max_img + 1).max(16);
        Ok(MembershipOracle {
            subst: s.clone(),
            rec,
            lang,
            base_len,
        })
    }

    /// The underlying factor language (shared cache).
    pub fn language_mut(&mut self) -> &mut FactorLanguage {
        &mut self.lang
    }

    /// True when `w` is an admissible word of the subshift.
    pub fn contains(&mut self, w: &[Letter]) -> Result<bool> {
        let mut budget = MEMBERSHIP_CALL_BUDGET;
        self.contains_inner(w, &mut budget)
    }

    fn contains_inner(&mut self, w: &[Letter], budget: &mut usize) -> Result<bool> {
        if *budget == 0 {
            return Err(Error::budget("membership recursion budget exhausted"));
        }
        *budget -= 1;
        if w.len() <= self.base_len {
            return self.lang.contains(w);
        }
        let radius = self.rec.radius();
        let win = 2 * radius + 1;
        // decode; any unknown window settles the question
        let mut cuts: Vec<usize> = Vec::new();
        let mut srcs: Word = Word::new();
        for i in 0..=w.len() - win {
            match self.rec.verdict(&w[i..i + win]) {
                None => return Ok(false),
                Some(None) => {}
                Some(Some(src)) => {
                    cuts.push(i + radius);
                    srcs.push(*src);
                }
            }
        }
        if cuts.is_empty() {
            // long words always straddle at least one block boundary
            return Ok(false);
        }
        // verify the decoded tiling letter by letter; collect the fully
        // contained blocks as the desubstituted core
        let mut v = Word::new();
        let mut c_end = cuts[0];
        for (k, (&c, &src)) in cuts.iter().zip(srcs.iter()).enumerate() {
            let img = self.subst.image(src);
            if k + 1 < cuts.len() {
                if cuts[k + 1] != c + img.len()
                    || &w[c..c + img.len()] != img
                {
                    return Ok(false);
                }
                v.push(src);
                c_end = c + img.len();
            } else {
                let avail = img.len().min(w.len() - c);
                if &w[c..c + avail] != &img[..avail] {
                    return Ok(false);
                }
                if avail == img.len() {
                    v.push(src);
                    c_end = c + img.len();
                } else {
                    c_end = c;
                }
            }
        }
        let head = &w[..cuts[0]];
        let tail = &w[c_end..];
        let pres = self.left_covers(head);
        let posts = self.right_covers(tail);
        let mut seen: BTreeSet<Word> = BTreeSet::new();
        for pre in &pres {
            for post in &posts {
                let mut u = Word::with_capacity(pre.len() + v.len() + post.len());
                u.extend_from_slice(pre);
                u.extend_from_slice(&v);
                u.extend_from_slice(post);
                if u.len() >= w.len() || !seen.insert(u.clone()) {
                    continue;
                }
                if self.contains_inner(&u, budget)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Words `u` whose image ends by covering `head`: the final letters of
    /// `s(u)` equal `head`, with the first block allowed to overflow to the
    /// left.  `head` must be shorter than a few blocks; the search is a
    /// small DFS over matching last blocks.
    fn left_covers(&self, head: &[Letter]) -> Vec<Word> {
        let mut out = Vec::new();
        if head.is_empty() {
            out.push(Word::new());
            return out;
        }
        for b in self.subst.alphabet().letters() {
            let img = self.subst.image(b);
            let m = img.len().min(head.len());
            if img[img.len() - m..] != head[head.len() - m..] {
                continue;
            }
            if m == head.len() {
                out.push(vec![b]);
            } else {
                for mut u in self.left_covers(&head[..head.len() - img.len()]) {
                    u.push(b);
                    out.push(u);
                }
            }
        }
        out
    }

    /// Words `u` whose image starts by covering `tail`, mirror of
    /// [`Self::left_covers`].
    fn right_covers(&self, tail: &[Letter]) -> Vec<Word> {
        let mut out = Vec::new();
        if tail.is_empty() {
            out.push(Word::new());
            return out;
        }
        for b in self.subst.alphabet().letters() {
            let img = self.subst.image(b);
            let m = img.len().min(tail.len());
            if img[..m] != tail[..m] {
                continue;
            }
            if m == tail.len() {
                out.push(vec![b]);
            } else {
                for u in self.right_covers(&tail[img.len()..]) {
                    let mut v = vec![b];
                    v.extend_from_slice(&u);
                    out.push(v);
                }
            }
        }
        out
    }
}
