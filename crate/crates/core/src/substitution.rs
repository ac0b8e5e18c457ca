//! Substitutions, their matrices, factor languages, and fixed points.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::words::{factors, Alphabet, Letter, Word};

/// Hard cap on materialized image length when taking substitution powers.
const POWER_LETTER_CAP: usize = 1 << 24;

/// Hard cap on the prefix length scanned while measuring recurrence gaps.
const GAP_PREFIX_CAP: usize = 1 << 25;

/// Exponent cap for [`FactorLanguage::bounded_power_exponent`].
const POWER_EXPONENT_CAP: usize = 64;

/// The abelianization matrix of a substitution.
///
/// Row `a`, column `b` holds the number of occurrences of letter `b` in the
/// image of letter `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstMatrix {
    n: usize,
    entries: Vec<u64>,
}

impl SubstMatrix {
    /// Dimension (number of letters).
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at row `a`, column `b`.
    pub fn entry(&self, a: usize, b: usize) -> u64 {
        self.entries[a * self.n + b]
    }

    /// Row `a` as a slice.
    pub fn row(&self, a: usize) -> &[u64] {
        &self.entries[a * self.n..(a + 1) * self.n]
    }

    /// Row sums, i.e. image lengths of each letter.
    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.n).map(|a| self.row(a).iter().sum()).collect()
    }

    /// True when some power of the matrix is entrywise positive.
    ///
    /// Checked on the 0/1 pattern up to the Wielandt bound `(n-1)^2 + 1`.
    pub fn is_primitive(&self) -> bool {
        self.primitivity_power().is_some()
    }

    /// Smallest exponent making the pattern all-positive, if one exists.
    pub fn primitivity_power(&self) -> Option<usize> {
        let n = self.n;
        debug_assert!(n <= 128);
        let full: u128 = if n == 128 { !0 } else { (1u128 << n) - 1 };
        let base: Vec<u128> = (0..n)
            .map(|a| {
                (0..n)
                    .filter(|&b| self.entry(a, b) > 0)
                    .fold(0u128, |m, b| m | (1u128 << b))
            })
            .collect();
        let mut acc = base.clone();
        let bound = (n - 1) * (n - 1) + 1;
        for k in 1..=bound {
            if acc.iter().all(|&r| r == full) {
                return Some(k);
            }
            // boolean product acc * base
            acc = acc
                .iter()
                .map(|&r| {
                    (0..n)
                        .filter(|&b| r & (1u128 << b) != 0)
                        .fold(0u128, |m, b| m | base[b])
                })
                .collect();
        }
        None
    }
}

/// A substitution: a map from letters to non-empty words, extended to words
/// by concatenation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Substitution {
    /// Builds a substitution from an alphabet and one non-empty image per
    /// letter, in alphabet order.
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::invalid(format!(
                "expected {} images, got {}",
                alphabet.len(),
                images.len()
            )));
        }
        for (a, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::invalid(format!(
                    "image of {:?} is empty",
                    alphabet.name(a as Letter)
                )));
            }
            if let Some(&l) = img.iter().find(|&&l| (l as usize) >= alphabet.len()) {
                return Err(Error::invalid(format!("letter index {l} out of range")));
            }
        }
        Ok(Substitution { alphabet, images })
    }

    /// Parses the substitution text format: one `letter -> image` rule per
    /// line, `#` starts a comment, blank lines are ignored.  The alphabet is
    /// the left-hand sides in order of appearance.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rules: Vec<(String, String, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::parse(format!("line {}: missing '->'", idx + 1)))?;
            let lhs = lhs.trim();
            if lhs.split_whitespace().nth(1).is_some() {
                return Err(Error::parse(format!(
                    "line {}: left-hand side must be a single letter",
                    idx + 1
                )));
            }
            rules.push((lhs.into(), rhs.trim().into(), idx + 1));
        }
        if rules.is_empty() {
            return Err(Error::parse("no rules found"));
        }
        let alphabet = Alphabet::new(rules.iter().map(|(l, _, _)| l.clone()))?;
        let mut images = Vec::with_capacity(rules.len());
        for (_, rhs, line_no) in &rules {
            let img = alphabet
                .parse_word(rhs)
                .map_err(|e| Error::parse(format!("line {line_no}: {e}")))?;
            if img.is_empty() {
                return Err(Error::parse(format!(
                    "line {line_no}: images must be non-empty"
                )));
            }
            images.push(img);
        }
        Substitution::new(alphabet, images)
    }

    /// Formats the substitution in the same text format accepted by
    /// [`Substitution::parse`].
    pub fn format(&self) -> String {
        let mut out = String::new();
        for a in self.alphabet.letters() {
            out.push_str(self.alphabet.name(a));
            out.push_str(" -> ");
            out.push_str(&self.alphabet.format_word(&self.images[a as usize]));
            out.push('\n');
        }
        out
    }

    /// The alphabet.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Image of a single letter.
    pub fn image(&self, a: Letter) -> &[Letter] {
        &self.images[a as usize]
    }

    /// Image of a word.
    pub fn apply(&self, w: &[Letter]) -> Word {
        let mut out = Word::with_capacity(w.iter().map(|&a| self.images[a as usize].len()).sum());
        for &a in w {
            out.extend_from_slice(&self.images[a as usize]);
        }
        out
    }

    /// Composition `self ∘ inner` (first `inner`, then `self`).
    pub fn compose(&self, inner: &Substitution) -> Result<Substitution> {
        if self.alphabet != inner.alphabet {
            return Err(Error::invalid("composition requires a common alphabet"));
        }
        let images = inner.images.iter().map(|img| self.apply(img)).collect();
        Substitution::new(self.alphabet.clone(), images)
    }

    /// `k`-th compositional power; `power(0)` is the identity substitution.
    pub fn power(&self, k: usize) -> Result<Substitution> {
        let mut images: Vec<Word> = self.alphabet.letters().map(|a| vec![a]).collect();
        for _ in 0..k {
            let total: usize = images.iter().map(|w| w.len()).sum();
            if total > POWER_LETTER_CAP {
                return Err(Error::budget("substitution power grew past the letter cap"));
            }
            images = images.iter().map(|w| self.apply(w)).collect();
        }
        Substitution::new(self.alphabet.clone(), images)
    }

    /// The abelianization matrix.
    pub fn matrix(&self) -> SubstMatrix {
        let n = self.alphabet.len();
        let mut entries = vec![0u64; n * n];
        for a in 0..n {
            for &b in &self.images[a] {
                entries[a * n + b as usize] += 1;
            }
        }
        SubstMatrix { n, entries }
    }

    /// Common image length, when all images have one.
    pub fn uniform_length(&self) -> Option<usize> {
        let l = self.images[0].len();
        self.images.iter().all(|w| w.len() == l).then_some(l)
    }

    /// True when letter images are pairwise distinct.
    pub fn injective_on_letters(&self) -> bool {
        let set: BTreeSet<&Word> = self.images.iter().collect();
        set.len() == self.images.len()
    }

    /// True when the abelianization matrix is primitive.
    pub fn is_primitive(&self) -> bool {
        self.matrix().is_primitive()
    }

    /// True when iterating the substitution on `seed` converges to a fixed
    /// point starting with `seed`.
    pub fn prolongable_at(&self, seed: Letter) -> bool {
        (seed as usize) < self.images.len() && {
            let img = &self.images[seed as usize];
            img.len() >= 2 && img[0] == seed
        }
    }

    /// Finds a seed letter and the smallest power prolongable at it.
    ///
    /// Follows the first-letter graph to its cycles and picks the shortest
    /// cycle (smallest letter on ties) that eventually grows.
    pub fn prolongable_seed(&self) -> Result<(Letter, usize)> {
        let n = self.alphabet.len();
        let first: Vec<Letter> = self.images.iter().map(|w| w[0]).collect();
        let mut best: Option<(usize, Letter)> = None;
        for start in 0..n as Letter {
            // locate the cycle reachable from `start`
            let mut seen = vec![usize::MAX; n];
            let (mut cur, mut step) = (start, 0usize);
            while seen[cur as usize] == usize::MAX {
                seen[cur as usize] = step;
                cur = first[cur as usize];
                step += 1;
            }
            let cycle_len = step - seen[cur as usize];
            // walk the cycle: usable iff some letter on it has a growing image
            let mut grows = false;
            let mut min_letter = cur;
            let mut l = cur;
            for _ in 0..cycle_len {
                grows |= self.images[l as usize].len() >= 2;
                min_letter = min_letter.min(l);
                l = first[l as usize];
            }
            if grows {
                let cand = (cycle_len, min_letter);
                if best.map_or(true, |b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        let (c, _) = best.ok_or_else(|| {
            Error::unsupported("substitution has no growing fixed point under any power")
        })?;
        // smallest letter usable at cycle length c
        let mut seed = None;
        for a in 0..n as Letter {
            let mut l = a;
            for _ in 0..c {
                l = first[l as usize];
            }
            if l == a {
                // a lies on a c-cycle; check growth along it
                let mut grows = false;
                let mut m = a;
                for _ in 0..c {
                    grows |= self.images[m as usize].len() >= 2;
                    m = first[m as usize];
                }
                if grows {
                    seed = Some(a);
                    break;
                }
            }
        }
        Ok((seed.ok_or_else(|| Error::internal("cycle search inconsistency"))?, c))
    }

    /// Prefix of length `n` of the fixed point obtained by iterating on
    /// `seed`; requires [`Substitution::prolongable_at`] `seed`.
    pub fn fixed_point_prefix(&self, seed: Letter, n: usize) -> Result<Word> {
        if !self.prolongable_at(seed) {
            return Err(Error::invalid(format!(
                "substitution is not prolongable at {:?}",
                self.alphabet.name(seed)
            )));
        }
        let mut w = vec![seed];
        while w.len() < n {
            w = self.apply(&w);
            if w.len() > n {
                w.truncate(n);
            }
        }
        w.truncate(n);
        Ok(w)
    }
}

/// Cut positions of a one-sided fixed point: the prefix itself, the sorted
/// positions where substitution blocks start, and the letter whose image
/// forms each block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutData {
    pub prefix: Word,
    pub cuts: Vec<usize>,
    pub sources: Vec<Letter>,
}

/// Cut data for the fixed point of `s` at `seed`, covering positions up to
/// `n` inclusive.
pub fn cut_data(s: &Substitution, seed: Letter, n: usize) -> Result<CutData> {
    if !s.prolongable_at(seed) {
        return Err(Error::invalid(format!(
            "substitution is not prolongable at {:?}",
            s.alphabet().name(seed)
        )));
    }
    let y = s.fixed_point_prefix(seed, n + 1)?;
    cut_data_from_preimage(s, &y, n)
}

/// Cut data for a canonical fixed point of some power of `s`, for
/// substitutions with no directly prolongable letter.
pub(crate) fn recognizer_cut_data(s: &Substitution, n: usize) -> Result<CutData> {
    let (seed, c) = s.prolongable_seed()?;
    if c == 1 {
        return cut_data(s, seed, n);
    }
    let sc = s.power(c)?;
    let x = sc.fixed_point_prefix(seed, n + 1)?;
    let y = s.power(c - 1)?.apply(&x);
    cut_data_from_preimage(s, &y, n)
}

fn cut_data_from_preimage(s: &Substitution, y: &[Letter], n: usize) -> Result<CutData> {
    let mut cuts = Vec::new();
    let mut sources = Vec::new();
    let mut prefix = Word::with_capacity(n);
    let mut cum = 0usize;
    for &a in y {
        if cum > n {
            break;
        }
        cuts.push(cum);
        sources.push(a);
        prefix.extend_from_slice(s.image(a));
        cum += s.image(a).len();
    }
    if cum < n {
        return Err(Error::internal("preimage too short for requested cut data"));
    }
    prefix.truncate(n);
    Ok(CutData {
        prefix,
        cuts,
        sources,
    })
}

/// Factor language of the subshift generated by a primitive substitution,
/// with per-length memoization.
#[derive(Debug, Clone)]
pub struct FactorLanguage {
    subst: Substitution,
    cache: BTreeMap<usize, BTreeSet<Word>>,
}

impl FactorLanguage {
    /// Requires a primitive substitution with at least one growing image.
    pub fn new(s: &Substitution) -> Result<Self> {
        if !s.is_primitive() {
            return Err(Error::unsupported(
                "factor language requires a primitive substitution",
            ));
        }
        if s.matrix().row_sums().iter().all(|&l| l <= 1) {
            return Err(Error::unsupported(
                "factor language requires a growing substitution",
            ));
        }
        Ok(FactorLanguage {
            subst: s.clone(),
            cache: BTreeMap::new(),
        })
    }

    /// The underlying substitution.
    pub fn substitution(&self) -> &Substitution {
        &self.subst
    }

    /// The set of admissible words of length `n`.
    pub fn block_words(&mut self, n: usize) -> Result<&BTreeSet<Word>> {
        if !self.cache.contains_key(&n) {
            let set = self.compute_block_words(n)?;
            self.cache.insert(n, set);
        }
        Ok(&self.cache[&n])
    }

    /// Membership test for a single word.
    pub fn contains(&mut self, w: &[Letter]) -> Result<bool> {
        Ok(self.block_words(w.len())?.contains(w))
    }

    /// Factor complexity `p(n)`.
    pub fn complexity(&mut self, n: usize) -> Result<usize> {
        Ok(self.block_words(n)?.len())
    }

    /// Definitively periodic inputs return `false` (complexity `p(n) <= n`
    /// for some `n <= depth`); `true` means no periodicity witness was found
    /// up to `depth`.
    pub fn is_aperiodic(&mut self, depth: usize) -> Result<bool> {
        if depth == 0 {
            return Err(Error::invalid("aperiodicity check needs depth >= 1"));
        }
        for n in 1..=depth {
            let p = self.complexity(n)?;
            if p <= n {
                return Ok(false);
            }
            // complexity never decreases with n, so once it clears `depth`
            // every remaining comparison up to `depth` succeeds as well
            if p > depth {
                break;
            }
        }
        Ok(true)
    }

    fn compute_block_words(&self, n: usize) -> Result<BTreeSet<Word>> {
        let mut set = BTreeSet::new();
        if n == 0 {
            set.insert(Word::new());
            return Ok(set);
        }
        // grow every letter image past length n, then close under the
        // substitution until no new factors appear
        let mut imgs: Vec<Word> = self
            .subst
            .alphabet()
            .letters()
            .map(|a| vec![a])
            .collect();
        let cap = n + self.subst.alphabet().len() * self.subst.alphabet().len() + 8;
        for _ in 0..cap {
            if imgs.iter().all(|w| w.len() >= n) {
                break;
            }
            imgs = imgs.iter().map(|w| self.subst.apply(w)).collect();
        }
        if imgs.iter().any(|w| w.len() < n) {
            return Err(Error::internal("letter images failed to grow"));
        }
        for w in &imgs {
            set.extend(factors(w, n));
        }
        loop {
            let mut grew = false;
            for w in set.clone() {
                for f in factors(&self.subst.apply(&w), n) {
                    grew |= set.insert(f);
                }
            }
            if !grew {
                return Ok(set);
            }
        }
    }

    /// Largest gap between consecutive occurrences of any admissible
    /// length-`n` word along the fixed point, measured over a prefix long
    /// enough that every word recurs and the maximum stabilizes under
    /// doubling.
    pub fn recurrence_gap(&mut self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::invalid("recurrence gap needs n >= 1"));
        }
        let target = self.block_words(n)?.clone();
        let mut len = (4 * n).max(1024);
        let mut prev: Option<usize> = None;
        loop {
            if len > GAP_PREFIX_CAP {
                return Err(Error::budget("recurrence gap did not stabilize"));
            }
            let data = recognizer_cut_data(&self.subst, len)?;
            let x = &data.prefix;
            let mut last: BTreeMap<&[Letter], usize> = BTreeMap::new();
            let mut gap: BTreeMap<&[Letter], (usize, usize)> = BTreeMap::new(); // (max gap, count)
            if x.len() >= n {
                for i in 0..=x.len() - n {
                    let w = &x[i..i + n];
                    if let Some(&p) = last.get(w) {
                        let e = gap.entry(w).or_insert((0, 1));
                        e.0 = e.0.max(i - p);
                        e.1 += 1;
                    } else {
                        gap.insert(w, (0, 1));
                    }
                    last.insert(w, i);
                }
            }
            let covered = target
                .iter()
                .all(|w| gap.get(w.as_slice()).is_some_and(|&(_, c)| c >= 2));
            if covered {
                let cur = target
                    .iter()
                    .map(|w| gap[w.as_slice()].0)
                    .max()
                    .unwrap_or(0);
                if prev == Some(cur) {
                    return Ok(cur);
                }
                prev = Some(cur);
            } else {
                prev = None;
            }
            len *= 2;
        }
    }

    /// Smallest `N >= 2` such that no non-empty word of length at most
    /// `max_len` has its `N`-th power admissible.
    ///
    /// Equivalently: one more than the largest admissible power of a short
    /// word.  A word that is itself a power is covered by its primitive
    /// root, so only primitive words are tried.
    pub fn bounded_power_exponent(&mut self, max_len: usize) -> Result<usize> {
        if max_len == 0 {
            return Err(Error::invalid("bounded power exponent needs max_len >= 1"));
        }
        let mut best = 1usize;
        for l in 1..=max_len {
            let words: Vec<Word> = self.block_words(l)?.iter().cloned().collect();
            for w in words {
                if !is_primitive_word(&w) {
                    continue;
                }
                let mut n = 1usize;
                loop {
                    let mut p = Word::with_capacity(w.len() * (n + 1));
                    for _ in 0..=n {
                        p.extend_from_slice(&w);
                    }
                    if !self.contains(&p)? {
                        break;
                    }
                    n += 1;
                    if n > POWER_EXPONENT_CAP {
                        return Err(Error::budget(
                            "power exponent exceeds cap; input may be periodic",
                        ));
                    }
                }
                best = best.max(n);
            }
        }
        Ok(best + 1)
    }
}

/// True when `w` is not a proper power of a shorter word.
fn is_primitive_word(w: &[Letter]) -> bool {
    let n = w.len();
    for d in 1..n {
        if n % d == 0 && w.iter().zip(w.iter().cycle().skip(d).take(n)).all(|(a, b)| a == b) {
            // w is d-periodic with d | n, so w = u^(n/d)
            return false;
        }
    }
    true
}
