//! Exhaustive enumeration of block maps between two substitution subshifts,
//! with deduplication up to composition with shift powers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dill::BlockRule;
use crate::error::{Error, Result};
use crate::recognizer::{build_recognizer, MembershipOracle, Recognizer};
use crate::substitution::{FactorLanguage, Substitution};
use crate::words::{Alphabet, Letter, Word};

/// Default cap on DFS nodes before giving up.
pub const DEFAULT_NODE_BUDGET: usize = 1 << 20;

/// Default cap on the verification prefix length.
pub const DEFAULT_PREFIX_CAP: usize = 1 << 18;

/// Default shift bound used when grouping maps into classes.
pub const DEFAULT_SHIFT_BOUND: usize = 32;

/// Factor lengths checked incrementally while assignments are partial.
const PRUNE_LADDER: [usize; 4] = [2, 4, 16, 64];

/// How many occurrences of a window feed the incremental check.
const PRUNE_OCCURRENCES: usize = 8;

#[derive(Debug, Clone, Copy)]
pub struct EnumerationConfig {
    pub node_budget: usize,
    pub prefix_cap: usize,
    /// Length of the prefix used for incremental pruning; raised
    /// automatically until every admissible window occurs in it.
    pub prune_prefix: usize,
    pub shift_bound: usize,
    pub max_recognizer_radius: usize,
    pub coverage_factor: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            prefix_cap: DEFAULT_PREFIX_CAP,
            prune_prefix: 1 << 13,
            shift_bound: DEFAULT_SHIFT_BOUND,
            max_recognizer_radius: crate::recognizer::DEFAULT_MAX_RADIUS,
            coverage_factor: crate::recognizer::DEFAULT_COVERAGE_FACTOR,
        }
    }
}

/// One equivalence class of maps under composition with shift powers.
#[derive(Debug, Clone)]
pub struct MorphismClass {
    /// Index into `maps` of the member with the least table dump.
    pub representative: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BlockMapEnumeration {
    pub radius: usize,
    /// Every total map of the given radius that passed verification.
    pub maps: Vec<BlockRule>,
    pub classes: Vec<MorphismClass>,
    /// Depth of the admissibility guarantee: every admissible domain word
    /// of at most this length has an admissible image under each map.
    pub verified_to: usize,
    pub nodes_visited: usize,
}

impl BlockMapEnumeration {
    pub fn summary(&self) -> String {
        format!(
            "classes={} radius={} verified_to={}",
            self.classes.len(),
            self.radius,
            self.verified_to
        )
    }
}

/// Picks the verification prefix: the longest level image of a short
/// prefix containing every admissible pair, subject to the length cap.
///
/// Every factor of length at most the shortest level-`k` letter image
/// spans at most two level-`k` blocks, so it occurs inside the level-`k`
/// image of some admissible pair, and hence inside the level-`k` image of
/// a prefix containing all pairs, which is itself a prefix of the fixed
/// point.  That image length is the returned prefix length, the shortest
/// letter image the returned guarantee depth.
fn coverage_plan(
    s: &Substitution,
    lang: &mut FactorLanguage,
    radius: usize,
    prefix_cap: usize,
) -> Result<(usize, usize)> {
    let (seed, c) = s.prolongable_seed()?;
    let level = s.power(c)?;
    let g2 = lang.recurrence_gap(2)? + 2;
    let x2 = s.fixed_point_prefix(seed, g2)?;
    let n_letters = s.alphabet().len();
    // lengths of level-k images per letter
    let mut len_k: Vec<u128> = vec![1; n_letters];
    let mut best: Option<(usize, usize)> = None;
    for _ in 0..128 {
        let cover: u128 = x2.iter().map(|&a| len_k[a as usize]).sum();
        let shortest = len_k.iter().copied().min().unwrap_or(1);
        let need = cover.saturating_add(radius as u128 + 8);
        if need > prefix_cap as u128 {
            break;
        }
        best = Some((need as usize, shortest as usize));
        let next: Vec<u128> = (0..n_letters)
            .map(|a| {
                level
                    .image(a as Letter)
                    .iter()
                    .map(|&b| len_k[b as usize])
                    .fold(0u128, |acc, v| acc.saturating_add(v))
            })
            .collect();
        len_k = next;
    }
    let (mut n, verified_to) =
        best.ok_or_else(|| Error::budget("verification prefix does not fit the cap"))?;
    // the prefix must also exhibit every window of the map
    let window_cover = lang.recurrence_gap(radius + 1)? + radius + 1;
    if window_cover > n {
        n = window_cover;
    }
    if n > prefix_cap {
        return Err(Error::budget("verification prefix does not fit the cap"));
    }
    Ok((n, verified_to))
}

struct Dfs<'a> {
    windows: &'a [Word],
    out_letters: usize,
    /// Window index at every position of the verification prefix.
    win_at: &'a [u32],
    occurrences: &'a [Vec<u32>],
    /// When non-zero, the image is complete up to this length at the given
    /// depth and is checked exactly.
    check_at: &'a [usize],
    ladder_sets: &'a BTreeMap<usize, BTreeSet<Word>>,
    oracle: &'a mut MembershipOracle,
    assign: Vec<Option<Letter>>,
    nodes: usize,
    budget: usize,
    found: Vec<BTreeMap<Word, Letter>>,
}

impl<'a> Dfs<'a> {
    fn run(&mut self, depth: usize) -> Result<()> {
        if depth == self.windows.len() {
            return self.leaf();
        }
        for letter in 0..self.out_letters {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::budget("enumeration node budget exhausted"));
            }
            self.assign[depth] = Some(letter as Letter);
            if self.local_ok(depth)? && self.frontier_ok(depth)? {
                self.run(depth + 1)?;
            }
            self.assign[depth] = None;
        }
        Ok(())
    }

    /// Exact membership of the completed image prefix, at exponentially
    /// spaced frontier lengths.  A true morphism maps the admissible
    /// prefix to an admissible word, so this never prunes one.
    fn frontier_ok(&mut self, depth: usize) -> Result<bool> {
        let len = self.check_at[depth];
        if len == 0 {
            return Ok(true);
        }
        let mut y = Word::with_capacity(len);
        for &idx in &self.win_at[..len] {
            y.push(self.assign[idx as usize].expect("prefix is complete up to the frontier"));
        }
        self.oracle.contains(&y)
    }

    /// Checks ladder-length factors of the partial image around the
    /// occurrences of the window assigned at `depth`.  Only fully assigned
    /// stretches are tested, so nothing admissible is ever pruned.
    fn local_ok(&self, depth: usize) -> Result<bool> {
        let mut image = Word::new();
        for &p in &self.occurrences[depth] {
            let p = p as usize;
            for &len in &PRUNE_LADDER {
                if len > self.win_at.len() {
                    continue;
                }
                let set = &self.ladder_sets[&len];
                let lo = p.saturating_sub(len - 1);
                let hi = p.min(self.win_at.len() - len);
                'starts: for s in lo..=hi {
                    image.clear();
                    for q in s..s + len {
                        match self.assign[self.win_at[q] as usize] {
                            Some(l) => image.push(l),
                            None => continue 'starts,
                        }
                    }
                    if !set.contains(&image) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    fn leaf(&mut self) -> Result<()> {
        // full image of the verification prefix, then exact membership
        let mut y = Word::with_capacity(self.win_at.len());
        for &idx in self.win_at {
            y.push(self.assign[idx as usize].expect("leaf has a total assignment"));
        }
        if self.oracle.contains(&y)? {
            let table = self
                .windows
                .iter()
                .enumerate()
                .map(|(i, w)| (w.clone(), self.assign[i].unwrap()))
                .collect();
            self.found.push(table);
        }
        Ok(())
    }
}

/// Enumerates every block map of forward radius `radius` from the subshift
/// of `tau` to the subshift of `rho` whose image stays admissible, checked
/// exactly on a long prefix; see [`BlockMapEnumeration::verified_to`] for
/// the resulting guarantee.  Maps are grouped up to shift.
pub fn enumerate_block_maps(
    tau: &Substitution,
    rho: &Substitution,
    radius: usize,
    cfg: &EnumerationConfig,
) -> Result<BlockMapEnumeration> {
    let mut lang_tau = FactorLanguage::new(tau)?;
    let mut lang_rho = FactorLanguage::new(rho)?;
    let (prefix_len, verified_to) = coverage_plan(tau, &mut lang_tau, radius, cfg.prefix_cap)?;
    let (seed, _) = tau.prolongable_seed()?;
    let x = tau.fixed_point_prefix(seed, prefix_len)?;

    // windows ordered by sorted order first (for leaf lookup), then a
    // frequency-ordered permutation drives the DFS
    let window_set = lang_tau.block_words(radius + 1)?.clone();
    let sorted_windows: Vec<Word> = window_set.iter().cloned().collect();

    let prune_len = x
        .len()
        .min(cfg.prune_prefix.max(lang_tau.recurrence_gap(radius + 1)? + radius + 1));
    let prune_positions = prune_len - radius;
    let positions = x.len() - radius;
    let index_of: BTreeMap<&[Letter], u32> = sorted_windows
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_slice(), i as u32))
        .collect();
    let mut win_at = vec![0u32; positions];
    let mut freq = vec![0usize; sorted_windows.len()];
    let mut occurrences: Vec<Vec<u32>> = vec![Vec::new(); sorted_windows.len()];
    for q in 0..positions {
        let idx = index_of[&x[q..=q + radius]] as usize;
        win_at[q] = idx as u32;
        if q < prune_positions {
            freq[idx] += 1;
            if occurrences[idx].len() < PRUNE_OCCURRENCES {
                occurrences[idx].push(q as u32);
            }
        }
    }

    // DFS order: by first occurrence in the prefix.  Every position before
    // the first occurrence of the current window then uses already
    // assigned windows, so the partial image is complete up to there and
    // contradictions surface as early as possible.
    let mut first_occ = vec![u32::MAX; sorted_windows.len()];
    for q in (0..positions).rev() {
        first_occ[win_at[q] as usize] = q as u32;
    }
    let mut order: Vec<usize> = (0..sorted_windows.len()).collect();
    order.sort_by(|&i, &j| {
        first_occ[i]
            .cmp(&first_occ[j])
            .then(freq[j].cmp(&freq[i]))
            .then(sorted_windows[i].cmp(&sorted_windows[j]))
    });
    let ordered_windows: Vec<Word> = order.iter().map(|&i| sorted_windows[i].clone()).collect();
    let mut rank = vec![0u32; sorted_windows.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new as u32;
    }
    let win_at_ranked: Vec<u32> = win_at.iter().map(|&i| rank[i as usize]).collect();
    let occ_ranked: Vec<Vec<u32>> = order.iter().map(|&i| occurrences[i].clone()).collect();

    // with first-occurrence ordering the image is complete up to the
    // current window's first occurrence; schedule exact checks when that
    // frontier crosses a geometric threshold
    let mut check_at = vec![0usize; order.len()];
    {
        let mut threshold = 256usize;
        for (d, &old) in order.iter().enumerate() {
            let frontier = first_occ[old] as usize + 1;
            if frontier >= threshold {
                let mut chosen = 0;
                while threshold <= frontier {
                    chosen = threshold;
                    threshold *= 4;
                }
                check_at[d] = chosen;
            }
        }
    }

    let mut ladder_sets = BTreeMap::new();
    for len in PRUNE_LADDER {
        ladder_sets.insert(len, lang_rho.block_words(len)?.clone());
    }

    let rec = build_recognizer(rho, cfg.max_recognizer_radius, cfg.coverage_factor)?;
    let mut oracle = MembershipOracle::new(rho, rec)?;

    let mut dfs = Dfs {
        windows: &ordered_windows,
        out_letters: rho.alphabet().len(),
        win_at: &win_at_ranked,
        occurrences: &occ_ranked,
        check_at: &check_at,
        ladder_sets: &ladder_sets,
        oracle: &mut oracle,
        assign: vec![None; sorted_windows.len()],
        nodes: 0,
        budget: cfg.node_budget,
        found: Vec::new(),
    };
    dfs.run(0)?;
    let nodes_visited = dfs.nodes;

    let mut maps = Vec::new();
    for table in dfs.found {
        maps.push(BlockRule::new(
            tau.alphabet().clone(),
            rho.alphabet().clone(),
            radius,
            table,
        )?);
    }
    maps.sort_by(|a, b| a.dump().cmp(&b.dump()));

    let classes = group_up_to_shift(&maps, &mut lang_tau, cfg.shift_bound)?;
    Ok(BlockMapEnumeration {
        radius,
        maps,
        classes,
        verified_to,
        nodes_visited,
    })
}

/// True when `f` equals `g` composed with a shift power of exponent at
/// most `shift_bound`, in either direction, as maps on the subshift of
/// `lang`.
pub fn same_up_to_shift(
    f: &BlockRule,
    g: &BlockRule,
    lang: &mut FactorLanguage,
    shift_bound: usize,
) -> Result<bool> {
    for k in 0..=shift_bound {
        if matches_with_shift(f, g, lang, k)? || matches_with_shift(g, f, lang, k)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Checks `f = g . shift^k` exactly: both sides are evaluated on every
/// admissible word long enough to feed the wider of the two windows.
fn matches_with_shift(
    f: &BlockRule,
    g: &BlockRule,
    lang: &mut FactorLanguage,
    k: usize,
) -> Result<bool> {
    let need = (f.radius() + 1).max(k + g.radius() + 1);
    for w in lang.block_words(need)? {
        let lhs = f.rule(&w[..=f.radius()]);
        let rhs = g.rule(&w[k..=k + g.radius()]);
        if lhs.is_none() || rhs.is_none() || lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

fn group_up_to_shift(
    maps: &[BlockRule],
    lang: &mut FactorLanguage,
    shift_bound: usize,
) -> Result<Vec<MorphismClass>> {
    let n = maps.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = i;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for i in 0..n {
        for j in i + 1..n {
            if find(&mut parent, i) != find(&mut parent, j)
                && same_up_to_shift(&maps[i], &maps[j], lang, shift_bound)?
            {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut grouped: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        grouped.entry(root).or_default().push(i);
    }
    // maps are sorted by dump, so the first member is the representative
    Ok(grouped
        .into_values()
        .map(|members| MorphismClass {
            representative: members[0],
            members,
        })
        .collect())
}

/// For a uniform codomain substitution of block length `u`, the image of
/// a point inherits a cutting grid; its phase is constant along the orbit
/// of the image.  Returns `(u - first_cut_residue) mod u`, or `None` when
/// the codomain is not uniform or the residues disagree.
pub fn period_class(
    f: &BlockRule,
    tau: &Substitution,
    rho: &Substitution,
    rec: &Recognizer,
    horizon: usize,
) -> Result<Option<usize>> {
    let u = match rho.uniform_length() {
        Some(u) if u > 1 => u,
        _ => return Ok(None),
    };
    let (seed, _) = tau.prolongable_seed()?;
    let x = tau.fixed_point_prefix(seed, horizon)?;
    let y = f.apply(&x)?;
    let decoded = rec.decode(&y)?;
    let mut residues = decoded.cuts.iter().map(|c| c % u);
    let first = match residues.next() {
        Some(r) => r,
        None => return Ok(None),
    };
    if residues.all(|r| r == first) {
        Ok(Some((u - first % u) % u))
    } else {
        Ok(None)
    }
}

/// Which image lengths the family uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyVariant {
    /// All images have length `n`.
    Uniform,
    /// The `b`-letter images carry one extra letter.
    NonUniform,
}

/// Builds the two-parameter family of substitution pairs used to study
/// morphisms that are not conjugacies: `tau` cycles `m` letter pairs
/// `a_i, b_i`; `rho` is `tau` with the image of `b_0` rewritten onto a
/// fresh letter `c` that itself expands like `a_0`.  The pair has equal
/// dominant eigenvalues by construction.
pub fn example_family(
    m: usize,
    n: usize,
    variant: FamilyVariant,
) -> Result<(Substitution, Substitution)> {
    if m < 2 || n < 3 {
        return Err(Error::invalid("family needs m >= 2 and n >= 3"));
    }
    let a = |i: usize| i as Letter;
    let b = |i: usize| (m + i) as Letter;
    let c = (2 * m) as Letter;
    let mut names: Vec<String> = (0..m).map(|i| format!("a{i}")).collect();
    names.extend((0..m).map(|i| format!("b{i}")));
    let tau_alphabet = Alphabet::new(names.clone())?;
    names.push("c".into());
    let rho_alphabet = Alphabet::new(names)?;

    let a_run = |i: usize, count: usize| -> Word { vec![a(i); count] };
    let tau_a = |i: usize| -> Word {
        let mut w = vec![b((i + 1) % m)];
        w.extend(a_run(i, n - 1));
        w
    };
    let tau_b = |i: usize| -> Word {
        let mut w = vec![b(i)];
        w.extend(a_run(
            i,
            match variant {
                FamilyVariant::Uniform => n - 1,
                FamilyVariant::NonUniform => n,
            },
        ));
        w
    };

    let mut tau_images: Vec<Word> = (0..m).map(tau_a).collect();
    tau_images.extend((0..m).map(tau_b));
    let tau = Substitution::new(tau_alphabet, tau_images.clone())?;

    let mut rho_images = tau_images;
    let b0_len = rho_images[m].len();
    rho_images[m] = {
        let mut w = vec![b(0)];
        w.extend(vec![c; b0_len - 1]);
        w
    };
    rho_images.push(tau.image(a(0)).to_vec());
    let rho = Substitution::new(rho_alphabet, rho_images)?;
    Ok((tau, rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::eigenvalues_match;

    fn thue_morse() -> Substitution {
        Substitution::parse("0 -> 01\n1 -> 10\n").unwrap()
    }

    fn fibonacci() -> Substitution {
        Substitution::parse("a -> ab\nb -> a\n").unwrap()
    }

    fn tribonacci() -> Substitution {
        Substitution::parse("a -> ab\nb -> ac\nc -> a\n").unwrap()
    }

    /// Brute force over all assignments, filtered by checking every
    /// admissible word up to `depth`.
    fn naive_maps(tau: &Substitution, rho: &Substitution, radius: usize, depth: usize) -> Vec<BlockRule> {
        let mut lt = FactorLanguage::new(tau).unwrap();
        let mut lr = FactorLanguage::new(rho).unwrap();
        let windows: Vec<Word> = lt.block_words(radius + 1).unwrap().iter().cloned().collect();
        let k = rho.alphabet().len();
        let total = k.pow(windows.len() as u32);
        let domain_words = lt.block_words(depth + radius).unwrap().clone();
        let image_words = lr.block_words(depth).unwrap().clone();
        let mut out = Vec::new();
        'cand: for code in 0..total {
            let mut c = code;
            let mut table = BTreeMap::new();
            for w in &windows {
                table.insert(w.clone(), (c % k) as Letter);
                c /= k;
            }
            let rule =
                BlockRule::new(tau.alphabet().clone(), rho.alphabet().clone(), radius, table)
                    .unwrap();
            for w in &domain_words {
                if !image_words.contains(&rule.apply(w).unwrap()) {
                    continue 'cand;
                }
            }
            out.push(rule);
        }
        out.sort_by(|a, b| a.dump().cmp(&b.dump()));
        out
    }

    #[test]
    fn thue_morse_endomorphism_counts() {
        let s = thue_morse();
        for (radius, expect_maps) in [(0usize, 2usize), (1, 4), (2, 6), (3, 8)] {
            let e = enumerate_block_maps(&s, &s, radius, &EnumerationConfig::default()).unwrap();
            assert_eq!(e.maps.len(), expect_maps, "radius {radius}");
            assert_eq!(e.classes.len(), 2, "radius {radius}");
        }
    }

    #[test]
    fn thue_morse_matches_naive() {
        let s = thue_morse();
        let e = enumerate_block_maps(&s, &s, 2, &EnumerationConfig::default()).unwrap();
        let naive = naive_maps(&s, &s, 2, 20);
        let dumps: Vec<String> = e.maps.iter().map(|m| m.dump()).collect();
        let naive_dumps: Vec<String> = naive.iter().map(|m| m.dump()).collect();
        assert_eq!(dumps, naive_dumps);
        assert!(e.verified_to >= 1 << 10);
    }

    #[test]
    fn fibonacci_shift_powers_only() {
        let s = fibonacci();
        for (radius, expect_maps) in [(1usize, 2usize), (3, 4)] {
            let e = enumerate_block_maps(&s, &s, radius, &EnumerationConfig::default()).unwrap();
            assert_eq!(e.maps.len(), expect_maps, "radius {radius}");
            assert_eq!(e.classes.len(), 1, "radius {radius}");
        }
        let e = enumerate_block_maps(&s, &s, 1, &EnumerationConfig::default()).unwrap();
        let naive = naive_maps(&s, &s, 1, 20);
        assert_eq!(
            e.maps.iter().map(|m| m.dump()).collect::<Vec<_>>(),
            naive.iter().map(|m| m.dump()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn tribonacci_radius_two() {
        let s = tribonacci();
        let e = enumerate_block_maps(&s, &s, 2, &EnumerationConfig::default()).unwrap();
        assert_eq!(e.maps.len(), 3);
        assert_eq!(e.classes.len(), 1);
        assert_eq!(e.summary(), format!("classes=1 radius=2 verified_to={}", e.verified_to));
    }

    #[test]
    fn shift_grouping() {
        let s = thue_morse();
        let mut lang = FactorLanguage::new(&s).unwrap();
        let windows: Vec<Word> = lang.block_words(2).unwrap().iter().cloned().collect();
        let mk = |pick: fn(&Word) -> Letter| {
            let table = windows.iter().map(|w| (w.clone(), pick(w))).collect();
            BlockRule::new(s.alphabet().clone(), s.alphabet().clone(), 1, table).unwrap()
        };
        let id = mk(|w| w[0]);
        let shift = mk(|w| w[1]);
        let flip = mk(|w| 1 - w[0]);
        assert!(same_up_to_shift(&id, &shift, &mut lang, 8).unwrap());
        assert!(!same_up_to_shift(&id, &flip, &mut lang, 8).unwrap());
    }

    #[test]
    fn phases_of_shift_powers() {
        let s = thue_morse();
        let rec = build_recognizer(&s, 8, 4).unwrap();
        let mut lang = FactorLanguage::new(&s).unwrap();
        let windows: Vec<Word> = lang.block_words(3).unwrap().iter().cloned().collect();
        let mk = |j: usize| {
            let table = windows.iter().map(|w| (w.clone(), w[j])).collect();
            BlockRule::new(s.alphabet().clone(), s.alphabet().clone(), 2, table).unwrap()
        };
        assert_eq!(period_class(&mk(0), &s, &s, &rec, 4096).unwrap(), Some(0));
        assert_eq!(period_class(&mk(1), &s, &s, &rec, 4096).unwrap(), Some(1));
        assert_eq!(period_class(&mk(2), &s, &s, &rec, 4096).unwrap(), Some(0));
        // non-uniform codomain has no phase
        let f = fibonacci();
        let rec_f = build_recognizer(&f, 8, 4).unwrap();
        let mut lf = FactorLanguage::new(&f).unwrap();
        let wf: Vec<Word> = lf.block_words(1).unwrap().iter().cloned().collect();
        let idf = BlockRule::new(
            f.alphabet().clone(),
            f.alphabet().clone(),
            0,
            wf.iter().map(|w| (w.clone(), w[0])).collect(),
        )
        .unwrap();
        assert_eq!(period_class(&idf, &f, &f, &rec_f, 4096).unwrap(), None);
    }

    #[test]
    fn family_construction() {
        let (tau, rho) = example_family(3, 4, FamilyVariant::Uniform).unwrap();
        assert_eq!(tau.alphabet().len(), 6);
        assert_eq!(rho.alphabet().len(), 7);
        assert_eq!(rho.alphabet().name(6), "c");
        // frozen image table for (m, n) = (3, 4), letters indexed
        // a0,a1,a2,b0,b1,b2,c
        let expect: [&[Letter]; 7] = [
            &[4, 0, 0, 0],
            &[5, 1, 1, 1],
            &[3, 2, 2, 2],
            &[3, 6, 6, 6],
            &[4, 1, 1, 1],
            &[5, 2, 2, 2],
            &[4, 0, 0, 0],
        ];
        for (i, img) in expect.iter().enumerate() {
            assert_eq!(rho.image(i as Letter), *img, "letter {i}");
        }
        for i in 0..6 {
            assert_eq!(tau.image(i as Letter), rho.image(i as Letter).iter().map(|&l| if l == 6 { 0 } else { l }).collect::<Vec<_>>().as_slice(), "tau letter {i}");
        }
        assert_eq!(tau.uniform_length(), Some(4));
        assert_eq!(rho.uniform_length(), Some(4));
        assert!(tau.is_primitive());
        assert!(rho.is_primitive());
        assert!(eigenvalues_match(&tau.matrix(), &rho.matrix(), 1e-9).unwrap());

        let (tau2, rho2) = example_family(3, 4, FamilyVariant::NonUniform).unwrap();
        assert_eq!(rho2.image(3), &[3, 6, 6, 6, 6]);
        assert_eq!(tau2.uniform_length(), None);
        assert!(eigenvalues_match(&tau2.matrix(), &rho2.matrix(), 1e-9).unwrap());

        assert!(example_family(1, 4, FamilyVariant::Uniform).is_err());
    }
}
