//! Dill maps: sliding-window codes whose outputs are finite words, possibly
//! empty.  Ordinary block maps and substitutions embed as special cases, and
//! composition stays in the class.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::recognizer::{offset_cut_table, Recognizer};
use crate::substitution::{FactorLanguage, Substitution};
use crate::words::{Alphabet, Letter, Word, EMPTY_WORD_TOKEN};

/// Cap on the window length tried while composing two dill maps.
const COMPOSE_WINDOW_CAP: usize = 256;

/// A sliding block code with forward radius `radius`: the output letter at
/// position `i` is a function of the window `x[i..=i+radius]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRule {
    radius: usize,
    domain: Alphabet,
    codomain: Alphabet,
    table: BTreeMap<Word, Letter>,
}

impl BlockRule {
    pub fn new(
        domain: Alphabet,
        codomain: Alphabet,
        radius: usize,
        table: BTreeMap<Word, Letter>,
    ) -> Result<Self> {
        for (w, l) in &table {
            if w.len() != radius + 1 {
                return Err(Error::invalid("window length does not match radius"));
            }
            if w.iter().any(|&a| a as usize >= domain.len()) || *l as usize >= codomain.len() {
                return Err(Error::invalid("letter out of alphabet range"));
            }
        }
        if table.is_empty() {
            return Err(Error::invalid("block rule has no windows"));
        }
        Ok(BlockRule {
            radius,
            domain,
            codomain,
            table,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn codomain(&self) -> &Alphabet {
        &self.codomain
    }

    pub fn rule(&self, window: &[Letter]) -> Option<Letter> {
        self.table.get(window).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Letter)> {
        self.table.iter()
    }

    /// Slides the rule over `w`; the output is `w.len() - radius` letters.
    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        if w.len() <= self.radius {
            return Err(Error::invalid("word shorter than one window"));
        }
        let mut out = Word::with_capacity(w.len() - self.radius);
        for i in 0..w.len() - self.radius {
            let win = &w[i..=i + self.radius];
            match self.table.get(win) {
                Some(l) => out.push(*l),
                None => {
                    return Err(Error::invalid(format!(
                        "window {:?} has no rule",
                        self.domain.format_word(win)
                    )))
                }
            }
        }
        Ok(out)
    }

    /// One `window -> letter` line per window after a `radius:` header.
    pub fn dump(&self) -> String {
        let mut out = format!("radius: {}\n", self.radius);
        for (w, l) in &self.table {
            out.push_str(&format!(
                "{} -> {}\n",
                self.domain.format_word(w),
                self.codomain.name(*l)
            ));
        }
        out
    }

    pub fn parse(text: &str, domain: &Alphabet, codomain: &Alphabet) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::parse("empty block rule"))?;
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
            let w = domain.parse_word(lhs)?;
            let rhs = rhs.trim();
            let l = codomain
                .index_of(rhs)
                .ok_or_else(|| Error::parse(format!("unknown letter {rhs:?}")))?;
            if table.insert(w, l).is_some() {
                return Err(Error::parse(format!("duplicate window in {line:?}")));
            }
        }
        BlockRule::new(domain.clone(), codomain.clone(), radius, table)
    }
}

/// A dill map given by a finite table: the block written at position `i`
/// is a function of the window `x[i..=i+in_radius]` and may be any finite
/// word, including the empty one.  The image of `x` is the concatenation
/// of the blocks over all positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DillTable {
    in_radius: usize,
    domain: Alphabet,
    codomain: Alphabet,
    entries: BTreeMap<Word, Word>,
}

impl DillTable {
    pub fn new(
        domain: Alphabet,
        codomain: Alphabet,
        in_radius: usize,
        entries: BTreeMap<Word, Word>,
    ) -> Result<Self> {
        for (w, out) in &entries {
            if w.len() != in_radius + 1 {
                return Err(Error::invalid("window length does not match in_radius"));
            }
            if w.iter().any(|&a| a as usize >= domain.len())
                || out.iter().any(|&a| a as usize >= codomain.len())
            {
                return Err(Error::invalid("letter out of alphabet range"));
            }
        }
        if entries.is_empty() {
            return Err(Error::invalid("dill table has no windows"));
        }
        Ok(DillTable {
            in_radius,
            domain,
            codomain,
            entries,
        })
    }

    /// A substitution is a dill map with window length 1.
    pub fn from_substitution(s: &Substitution) -> Self {
        let entries = s
            .alphabet()
            .letters()
            .map(|a| (alloc::vec![a], s.image(a).to_vec()))
            .collect();
        DillTable {
            in_radius: 0,
            domain: s.alphabet().clone(),
            codomain: s.alphabet().clone(),
            entries,
        }
    }

    /// A block rule is a dill map whose outputs all have length one.
    pub fn from_block_rule(b: &BlockRule) -> Self {
        let entries = b
            .entries()
            .map(|(w, l)| (w.clone(), alloc::vec![*l]))
            .collect();
        DillTable {
            in_radius: b.radius(),
            domain: b.domain().clone(),
            codomain: b.codomain().clone(),
            entries,
        }
    }

    pub fn in_radius(&self) -> usize {
        self.in_radius
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn codomain(&self) -> &Alphabet {
        &self.codomain
    }

    pub fn output(&self, window: &[Letter]) -> Option<&Word> {
        self.entries.get(window)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Word)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Concatenates the output blocks over every full window of `w`.
    pub fn apply_prefix(&self, w: &[Letter]) -> Result<Word> {
        if w.len() <= self.in_radius {
            return Err(Error::invalid("word shorter than one window"));
        }
        let mut out = Word::new();
        for i in 0..w.len() - self.in_radius {
            let win = &w[i..=i + self.in_radius];
            match self.entries.get(win) {
                Some(block) => out.extend_from_slice(block),
                None => {
                    return Err(Error::invalid(format!(
                        "window {:?} has no output",
                        self.domain.format_word(win)
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Smallest-radius table defining the same map: drops trailing window
    /// letters that never influence the output.  Canonical tables of equal
    /// maps (total on the same language) are identical.
    pub fn canonicalize(&self) -> DillTable {
        'shrink: for r in 0..self.in_radius {
            let mut grouped: BTreeMap<&[Letter], &Word> = BTreeMap::new();
            for (w, out) in &self.entries {
                match grouped.entry(&w[..=r]) {
                    alloc::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(out);
                    }
                    alloc::collections::btree_map::Entry::Occupied(e) => {
                        if *e.get() != out {
                            continue 'shrink;
                        }
                    }
                }
            }
            let entries = grouped
                .into_iter()
                .map(|(w, out)| (w.to_vec(), out.clone()))
                .collect();
            return DillTable {
                in_radius: r,
                domain: self.domain.clone(),
                codomain: self.codomain.clone(),
                entries,
            };
        }
        self.clone()
    }

    /// True when some bi-infinite sequence of overlapping windows emits
    /// only empty blocks, i.e. the map erases a whole point.
    pub fn has_vanishing_cycle(&self) -> bool {
        // graph on empty-output windows, w -> w' when w' can follow w
        let nodes: Vec<&Word> = self
            .entries
            .iter()
            .filter(|(_, out)| out.is_empty())
            .map(|(w, _)| w)
            .collect();
        let index: BTreeMap<&Word, usize> = nodes.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let succ: Vec<Vec<usize>> = nodes
            .iter()
            .map(|w| {
                nodes
                    .iter()
                    .enumerate()
                    .filter(|(_, w2)| w[1..] == w2[..w2.len() - 1])
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let _ = &index;
        // iterative three-color DFS
        let mut color = alloc::vec![0u8; nodes.len()];
        for start in 0..nodes.len() {
            if color[start] != 0 {
                continue;
            }
            let mut stack = alloc::vec![(start, 0usize)];
            color[start] = 1;
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i < succ[v].len() {
                    let u = succ[v][*i];
                    *i += 1;
                    match color[u] {
                        0 => {
                            color[u] = 1;
                            stack.push((u, 0));
                        }
                        1 => return true,
                        _ => {}
                    }
                } else {
                    color[v] = 2;
                    stack.pop();
                }
            }
        }
        false
    }

    /// One `window -> output` line per window after an `in_radius:` header,
    /// with `-` standing for the empty output.
    pub fn dump(&self) -> String {
        let mut out = format!("in_radius: {}\n", self.in_radius);
        for (w, block) in &self.entries {
            out.push_str(&format!(
                "{} -> {}\n",
                self.domain.format_word(w),
                self.codomain.format_word(block)
            ));
        }
        out
    }

    pub fn parse(text: &str, domain: &Alphabet, codomain: &Alphabet) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::parse("empty dill table"))?;
        let in_radius: usize = header
            .strip_prefix("in_radius:")
            .ok_or_else(|| Error::parse("missing 'in_radius:' header"))?
            .trim()
            .parse()
            .map_err(|_| Error::parse("bad in_radius value"))?;
        let mut entries = BTreeMap::new();
        for line in lines {
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::parse(format!("missing '->' in {line:?}")))?;
            let w = domain.parse_word(lhs)?;
            let out = codomain.parse_word(rhs)?;
            if entries.insert(w, out).is_some() {
                return Err(Error::parse(format!("duplicate window in {line:?}")));
            }
        }
        let _ = EMPTY_WORD_TOKEN; // rhs `-` parses to the empty word
        DillTable::new(domain.clone(), codomain.clone(), in_radius, entries)
    }
}

/// Composes two dill maps: `compose(g, f, lang)(x) = g(f(x))`, where `lang`
/// is the factor language of the domain of `f`.  The window length grows
/// until every admissible window sees enough of `f`'s output to evaluate
/// `g` across its first block; the result is canonicalized.
pub fn compose(g: &DillTable, f: &DillTable, lang: &mut FactorLanguage) -> Result<DillTable> {
    if lang.substitution().alphabet() != f.domain() {
        return Err(Error::invalid("language alphabet does not match the inner map"));
    }
    if f.codomain() != g.domain() {
        return Err(Error::invalid("maps are not composable"));
    }
    let gi = g.in_radius;
    let mut k = f.in_radius;
    loop {
        if k > COMPOSE_WINDOW_CAP {
            return Err(Error::budget("composition window exceeded the cap"));
        }
        let windows = lang.block_words(k + 1)?.clone();
        let mut entries: BTreeMap<Word, Word> = BTreeMap::new();
        let mut enough = true;
        'next: for w in &windows {
            let first = f
                .output(&w[..=f.in_radius])
                .ok_or_else(|| Error::invalid("inner map is not total on the language"))?;
            let m = first.len();
            if m == 0 {
                entries.insert(w.clone(), Word::new());
                continue;
            }
            let y = f.apply_prefix(w)?;
            if y.len() < m + gi {
                enough = false;
                break 'next;
            }
            let mut out = Word::new();
            for j in 0..m {
                match g.output(&y[j..=j + gi]) {
                    Some(block) => out.extend_from_slice(block),
                    None => return Err(Error::invalid("outer map is not total on the image")),
                }
            }
            entries.insert(w.clone(), out);
        }
        if enough {
            let table = DillTable::new(f.domain().clone(), g.codomain().clone(), k, entries)?;
            return Ok(table.canonicalize());
        }
        k += 1;
    }
}

/// Three-valued verdicts for numerically observed properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl core::fmt::Display for TriState {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Unknown => "unknown",
        })
    }
}

/// Observed expansion rate and defect of a dill map along a sample word.
///
/// `z_estimate` is the mean output length per window; `d_observed` is the
/// largest deviation of the output length from the linear trend `z * n`
/// over all prefixes, with `z` taken from the hint when one is given.
#[derive(Debug, Clone, Copy)]
pub struct Invariants {
    pub z_estimate: f64,
    pub z_width: f64,
    pub d_observed: f64,
    pub d_bounded: TriState,
}

#[derive(Debug, Clone, Copy)]
pub struct InvariantsConfig {
    /// Exact expansion rate, when known; sharpens the defect measurement.
    pub z_hint: Option<f64>,
    /// Defect level above which boundedness is reported as `No`.
    pub d_threshold: f64,
}

impl Default for InvariantsConfig {
    fn default() -> Self {
        InvariantsConfig {
            z_hint: None,
            d_threshold: 64.0,
        }
    }
}

/// Number of geometric sample points used for the rate estimate.
const RATE_SAMPLES: usize = 8;

/// Measures [`Invariants`] of `d` along the admissible word `x`, which
/// should be a long prefix of a point of the domain subshift.
pub fn invariants(d: &DillTable, x: &[Letter], cfg: &InvariantsConfig) -> Result<Invariants> {
    let i = d.in_radius;
    if x.len() < i + RATE_SAMPLES + 2 {
        return Err(Error::invalid("sample word is too short"));
    }
    let steps = x.len() - i;
    // cumulative output lengths per window step
    let mut sums: Vec<u64> = Vec::with_capacity(steps + 1);
    sums.push(0);
    let mut acc = 0u64;
    for p in 0..steps {
        let win = &x[p..=p + i];
        let block = d
            .output(win)
            .ok_or_else(|| Error::invalid(format!("window {:?} has no output", d.domain.format_word(win))))?;
        acc += block.len() as u64;
        sums.push(acc);
    }
    // rate samples at geometrically spaced prefixes
    let mut rates = Vec::with_capacity(RATE_SAMPLES);
    let mut n = steps;
    for _ in 0..RATE_SAMPLES {
        rates.push(sums[n] as f64 / n as f64);
        n /= 2;
        if n == 0 {
            break;
        }
    }
    let z_estimate = rates[0];
    let recent = &rates[..rates.len().div_ceil(2)];
    let z_width = recent.iter().cloned().fold(f64::MIN, f64::max)
        - recent.iter().cloned().fold(f64::MAX, f64::min);
    let z = cfg.z_hint.unwrap_or(z_estimate);
    let mut d_full = 0f64;
    let mut d_half = 0f64;
    for (w, &s) in sums.iter().enumerate() {
        let dev = (s as f64 - z * w as f64).abs();
        if dev > d_full {
            d_full = dev;
        }
        if w <= steps / 2 && dev > d_half {
            d_half = dev;
        }
    }
    let d_bounded = if d_full > cfg.d_threshold {
        TriState::No
    } else if (d_full - d_half) <= (0.01 * d_full).max(1e-9) {
        TriState::Yes
    } else {
        TriState::Unknown
    };
    Ok(Invariants {
        z_estimate,
        z_width,
        d_observed: d_full,
        d_bounded,
    })
}

/// Tests whether `f` and `g` agree up to dropping finitely many leading
/// output letters: searches shifts `i, j <= shift_bound` such that
/// `f(x)[i..]` and `g(x)[j..]` coincide on their overlap, which must cover
/// at least half of the shorter output.  Returns the smallest such pair
/// ordered by `i + j`, then `i`.
pub fn almost_equivalent(
    f: &DillTable,
    g: &DillTable,
    x: &[Letter],
    shift_bound: usize,
) -> Result<Option<(usize, usize)>> {
    let yf = f.apply_prefix(x)?;
    let yg = g.apply_prefix(x)?;
    let min_overlap = yf.len().min(yg.len()) / 2;
    if min_overlap <= shift_bound {
        return Err(Error::invalid("sample word is too short for the shift bound"));
    }
    let mut best: Option<(usize, usize)> = None;
    for i in 0..=shift_bound.min(yf.len()) {
        for j in 0..=shift_bound.min(yg.len()) {
            if let Some((bi, bj)) = best {
                if i + j > bi + bj || (i + j == bi + bj && i > bi) {
                    continue;
                }
            }
            let m = (yf.len() - i).min(yg.len() - j);
            if m >= min_overlap && yf[i..i + m] == yg[j..j + m] {
                best = Some((i, j));
            }
        }
    }
    Ok(best)
}

/// Builds a dill map inverting the substitution up to shift: sliding it
/// over `s(x)` recovers `x` with boundary letters dropped.  The window of
/// length `2L + 1` (from the recognizer radius `L`) reads off the cut
/// verdict at the smallest in-window offset that is conflict-free, writing
/// the source letter at cuts and nothing elsewhere.
pub fn almost_inverse(
    s: &Substitution,
    rec: &Recognizer,
    coverage_factor: usize,
) -> Result<DillTable> {
    let radius = rec.radius();
    let mut lang = FactorLanguage::new(s)?;
    for offset in 0..=2 * radius {
        if let Some(table) = offset_cut_table(&mut lang, radius, offset, coverage_factor)? {
            let entries = table
                .into_iter()
                .map(|(w, v)| (w, v.map_or(Word::new(), |l| alloc::vec![l])))
                .collect();
            return DillTable::new(s.alphabet().clone(), s.alphabet().clone(), 2 * radius, entries);
        }
    }
    // the centered offset equals the recognizer table and cannot conflict
    Err(Error::internal("no conflict-free offset despite the recognizer"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognizer::build_recognizer;

    fn thue_morse() -> Substitution {
        Substitution::parse("0 -> 01\n1 -> 10\n").unwrap()
    }

    fn fibonacci() -> Substitution {
        Substitution::parse("a -> ab\nb -> a\n").unwrap()
    }

    const TM_INVERSE: &str = "\
in_radius: 4
00101 -> -
00110 -> -
01001 -> -
01011 -> 0
01100 -> 0
01101 -> 0
10010 -> 1
10011 -> 1
10100 -> 1
10110 -> -
11001 -> -
11010 -> -
";

    const FIB_INVERSE: &str = "\
in_radius: 2
aab -> b
aba -> a
baa -> -
bab -> -
";

    #[test]
    fn inverse_tables() {
        for (s, expect) in [(thue_morse(), TM_INVERSE), (fibonacci(), FIB_INVERSE)] {
            let rec = build_recognizer(&s, 8, 4).unwrap();
            let inv = almost_inverse(&s, &rec, 4).unwrap();
            assert_eq!(inv.dump(), expect);
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        for s in [thue_morse(), fibonacci()] {
            let rec = build_recognizer(&s, 8, 4).unwrap();
            let inv = almost_inverse(&s, &rec, 4).unwrap();
            let tau = DillTable::from_substitution(&s);
            let mut lang = FactorLanguage::new(&s).unwrap();
            let round = compose(&inv, &tau, &mut lang).unwrap();
            assert_eq!(round.in_radius(), 0);
            for a in s.alphabet().letters() {
                assert_eq!(round.output(&[a]).unwrap().as_slice(), &[a]);
            }
        }
    }

    #[test]
    fn inverse_slides_to_sources() {
        let s = fibonacci();
        let rec = build_recognizer(&s, 8, 4).unwrap();
        let inv = almost_inverse(&s, &rec, 4).unwrap();
        let x = s.fixed_point_prefix(0, 600).unwrap();
        let y = s.apply(&x);
        let back = inv.apply_prefix(&y).unwrap();
        assert_eq!(&back[..], &x[..back.len()]);
        assert!(x.len() - back.len() <= inv.in_radius());
    }

    #[test]
    fn dump_round_trip() {
        let s = thue_morse();
        let rec = build_recognizer(&s, 8, 4).unwrap();
        let inv = almost_inverse(&s, &rec, 4).unwrap();
        let parsed = DillTable::parse(&inv.dump(), s.alphabet(), s.alphabet()).unwrap();
        assert_eq!(parsed, inv);
        let tau = DillTable::from_substitution(&s);
        assert_eq!(
            DillTable::parse(&tau.dump(), s.alphabet(), s.alphabet()).unwrap(),
            tau
        );
    }

    #[test]
    fn canonicalize_drops_dead_context() {
        let s = thue_morse();
        let tau = DillTable::from_substitution(&s);
        // pad the substitution table to radius 2; output ignores the padding
        let mut lang = FactorLanguage::new(&s).unwrap();
        let entries = lang
            .block_words(3)
            .unwrap()
            .iter()
            .map(|w| (w.clone(), s.image(w[0]).to_vec()))
            .collect();
        let padded =
            DillTable::new(s.alphabet().clone(), s.alphabet().clone(), 2, entries).unwrap();
        assert_eq!(padded.canonicalize(), tau);
        assert_eq!(tau.canonicalize(), tau);
    }

    #[test]
    fn block_rules_embed() {
        let s = thue_morse();
        let mut table = BTreeMap::new();
        for w in FactorLanguage::new(&s).unwrap().block_words(2).unwrap() {
            table.insert(w.clone(), w[0] ^ w[1]);
        }
        let b = BlockRule::new(s.alphabet().clone(), s.alphabet().clone(), 1, table).unwrap();
        assert_eq!(b.apply(&[0, 1, 1, 0]).unwrap(), alloc::vec![1, 0, 1]);
        let d = DillTable::from_block_rule(&b);
        assert_eq!(d.apply_prefix(&[0, 1, 1, 0]).unwrap(), alloc::vec![1, 0, 1]);
        let parsed = BlockRule::parse(&b.dump(), b.domain(), b.codomain()).unwrap();
        assert_eq!(parsed, b);
    }

    #[test]
    fn vanishing_cycles() {
        let s = fibonacci();
        let rec = build_recognizer(&s, 8, 4).unwrap();
        let inv = almost_inverse(&s, &rec, 4).unwrap();
        assert!(!inv.has_vanishing_cycle());
        let mut erased = BTreeMap::new();
        for (w, _) in inv.entries() {
            erased.insert(w.clone(), Word::new());
        }
        let dead = DillTable::new(
            s.alphabet().clone(),
            s.alphabet().clone(),
            inv.in_radius(),
            erased,
        )
        .unwrap();
        assert!(dead.has_vanishing_cycle());
    }

    #[test]
    fn expansion_invariants() {
        let s = thue_morse();
        let tau = DillTable::from_substitution(&s);
        let x = s.fixed_point_prefix(0, 1 << 14).unwrap();
        let inv = invariants(&tau, &x, &InvariantsConfig::default()).unwrap();
        assert!((inv.z_estimate - 2.0).abs() < 1e-9);
        assert!(inv.z_width < 1e-9);
        assert!(inv.d_observed <= 2.0);
        assert_eq!(inv.d_bounded, TriState::Yes);

        let f = fibonacci();
        let tf = DillTable::from_substitution(&f);
        let y = f.fixed_point_prefix(0, 1 << 14).unwrap();
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let cfg = InvariantsConfig {
            z_hint: Some(phi),
            ..Default::default()
        };
        let invf = invariants(&tf, &y, &cfg).unwrap();
        assert!((invf.z_estimate - phi).abs() < 1e-3);
        assert!(invf.d_observed < 2.0);
        assert_eq!(invf.d_bounded, TriState::Yes);
    }

    #[test]
    fn almost_equivalence_up_to_shift() {
        let s = thue_morse();
        let tau = DillTable::from_substitution(&s);
        let mut lang = FactorLanguage::new(&s).unwrap();
        // same map reading one letter further ahead: g(x) = tau(shift(x))
        let entries = lang
            .block_words(2)
            .unwrap()
            .iter()
            .map(|w| (w.clone(), s.image(w[1]).to_vec()))
            .collect();
        let shifted =
            DillTable::new(s.alphabet().clone(), s.alphabet().clone(), 1, entries).unwrap();
        let x = s.fixed_point_prefix(0, 4096).unwrap();
        assert_eq!(
            almost_equivalent(&tau, &shifted, &x, 8).unwrap(),
            Some((2, 0))
        );
        assert_eq!(almost_equivalent(&tau, &tau, &x, 8).unwrap(), Some((0, 0)));
        // erasing map never lines up
        let erase = {
            let mut e = BTreeMap::new();
            e.insert(alloc::vec![0u8], Word::new());
            e.insert(alloc::vec![1u8], alloc::vec![0u8, 1]);
            DillTable::new(s.alphabet().clone(), s.alphabet().clone(), 0, e).unwrap()
        };
        assert_eq!(almost_equivalent(&tau, &erase, &x, 8).unwrap(), None);
    }
}
