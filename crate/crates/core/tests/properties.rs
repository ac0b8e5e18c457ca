//! Randomized invariants: algebraic laws of substitutions, closure of the
//! factor language, composition and canonicalization of dill tables, and a
//! floating point cross-check of the exact Pisot test.

use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;

use dill_core::conjugation::{alpha_bound, shift_map};
use dill_core::dill::{almost_equivalent, compose, DillTable};
use dill_core::spectra::{char_poly, dominant_eigenvalue, is_pisot, PisotMode};
use dill_core::substitution::{FactorLanguage, Substitution};
use dill_core::words::{Alphabet, Word};

fn letters(k: usize) -> Alphabet {
    let names: Vec<String> = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Alphabet::new(names).unwrap()
}

/// Random primitive growing substitution on 2 or 3 letters.
fn arb_substitution() -> impl Strategy<Value = Substitution> {
    (2usize..=3)
        .prop_flat_map(|k| {
            proptest::collection::vec(proptest::collection::vec(0..k as u8, 1..=4), k)
        })
        .prop_map(|images| Substitution::new(letters(images.len()), images).unwrap())
        .prop_filter("primitive and growing", |s| {
            s.is_primitive() && s.alphabet().letters().any(|a| s.image(a).len() > 1)
        })
}

fn arb_raw_word(k: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0..k as u8, 0..=max_len)
}

/// Fixed point prefix of the prolongable power of `s`.
fn fixed_prefix(s: &Substitution, n: usize) -> Word {
    let (seed, p) = s.prolongable_seed().unwrap();
    s.power(p).unwrap().fixed_point_prefix(seed, n).unwrap()
}

proptest! {
    /// A substitution is a monoid morphism: it distributes over
    /// concatenation of arbitrary (even inadmissible) words.
    #[test]
    fn apply_distributes_over_concatenation(
        s in arb_substitution(),
        split in (any::<u16>(), any::<u16>()),
    ) {
        let k = s.alphabet().len();
        let u: Word = (0..12).map(|i| ((split.0 as usize >> i) % k) as u8).collect();
        let v: Word = (0..12).map(|i| ((split.1 as usize >> i) % k) as u8).collect();
        let mut uv = u.clone();
        uv.extend_from_slice(&v);
        let mut expected = s.apply(&u);
        expected.extend_from_slice(&s.apply(&v));
        prop_assert_eq!(s.apply(&uv), expected);
    }

    /// Letter counts of an image are a linear function of the letter counts
    /// of the source, with the substitution matrix as the transition.
    #[test]
    fn abelianization_follows_the_matrix(s in arb_substitution(), w_seed in any::<u64>()) {
        let k = s.alphabet().len();
        let w: Word = (0..20).map(|i| ((w_seed as usize >> i) % k) as u8).collect();
        let m = s.matrix();
        let count = |word: &[u8], l: u8| word.iter().filter(|&&x| x == l).count() as u64;
        let image = s.apply(&w);
        for b in s.alphabet().letters() {
            let predicted: u64 = s
                .alphabet()
                .letters()
                .map(|a| count(&w, a) * m.entry(a as usize, b as usize))
                .sum();
            prop_assert_eq!(count(&image, b), predicted);
        }
    }

    /// Every slice of an admissible word is admissible.
    #[test]
    fn factors_of_admissible_words_are_admissible(
        s in arb_substitution(),
        pick in any::<u32>(),
        lo in 0usize..8,
        hi in 1usize..=8,
    ) {
        let mut lang = FactorLanguage::new(&s).unwrap();
        let words: Vec<Word> = lang.block_words(8).unwrap().iter().cloned().collect();
        let w = &words[pick as usize % words.len()];
        let (lo, hi) = (lo.min(hi - 1), hi);
        prop_assert!(lang.contains(&w[lo..hi]).unwrap());
    }

    /// The fixed point is fixed: applying the prolongable power of the
    /// substitution to a prefix reproduces that prefix (and extends it).
    #[test]
    fn fixed_point_prefix_is_fixed(s in arb_substitution(), n in 1usize..=64) {
        let (seed, p) = s.prolongable_seed().unwrap();
        let level = s.power(p).unwrap();
        let x = level.fixed_point_prefix(seed, n).unwrap();
        prop_assert_eq!(x.len(), n);
        let y = level.apply(&x);
        prop_assert!(y.len() >= n);
        prop_assert_eq!(&y[..n], &x[..]);
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Composing shift powers adds their exponents, with exact alignment.
    #[test]
    fn shift_powers_compose_additively(
        s in arb_substitution(),
        i in 0usize..=3,
        j in 0usize..=3,
        n in 24usize..=60,
    ) {
        let mut lang = FactorLanguage::new(&s).unwrap();
        if !lang.is_aperiodic(16).unwrap() {
            return Ok(());
        }
        let f = shift_map(&mut lang, i).unwrap();
        let g = shift_map(&mut lang, j).unwrap();
        let h = compose(&g, &f, &mut lang).unwrap();
        prop_assert_eq!(h.in_radius(), i + j);
        let x = fixed_prefix(&s, n);
        prop_assert_eq!(h.apply_prefix(&x).unwrap(), x[i + j..].to_vec());
    }

}

proptest! {
    /// Canonicalization never grows the radius, is idempotent, and the
    /// original sliding outputs survive as a prefix.
    #[test]
    fn canonicalize_is_idempotent(
        outputs in proptest::collection::vec(proptest::collection::vec(0u8..2, 0..=2), 8),
        w in arb_raw_word(2, 30),
    ) {
        // total table on all binary windows of length 3
        let alphabet = letters(2);
        let entries: BTreeMap<Word, Word> = (0..8u8)
            .map(|i| (vec![(i >> 2) & 1, (i >> 1) & 1, i & 1], outputs[i as usize].clone()))
            .collect();
        let t = DillTable::new(alphabet.clone(), alphabet, 2, entries).unwrap();
        let c = t.canonicalize();
        prop_assert!(c.in_radius() <= t.in_radius());
        prop_assert_eq!(&c.canonicalize(), &c);
        if w.len() > t.in_radius() {
            let full = t.apply_prefix(&w).unwrap();
            let reduced = c.apply_prefix(&w).unwrap();
            prop_assert!(reduced.len() >= full.len());
            prop_assert_eq!(&reduced[..full.len()], &full[..]);
        }
    }

    /// Shift powers of the same point are almost equivalent, with the
    /// minimal shift pair determined by the difference of exponents; the
    /// relation is symmetric.
    #[test]
    fn shift_powers_are_almost_equivalent(
        s in arb_substitution(),
        i in 0usize..=4,
        j in 0usize..=4,
    ) {
        let mut lang = FactorLanguage::new(&s).unwrap();
        if !lang.is_aperiodic(16).unwrap() {
            return Ok(());
        }
        let f = shift_map(&mut lang, i).unwrap();
        let g = shift_map(&mut lang, j).unwrap();
        let x = fixed_prefix(&s, 512);
        let fwd = almost_equivalent(&f, &g, &x, 16).unwrap();
        let bwd = almost_equivalent(&g, &f, &x, 16).unwrap();
        prop_assert_eq!(fwd, Some((j.saturating_sub(i), i.saturating_sub(j))));
        prop_assert_eq!(bwd, fwd.map(|(a, b)| (b, a)));
    }

    /// The affine fixed point bound really bounds the iteration
    /// `B -> a * B + b`.
    #[test]
    fn affine_bound_absorbs_one_step(a in 0.0f64..0.95, b in 0.0f64..100.0) {
        let bound = alpha_bound(a, b).unwrap();
        prop_assert!(bound >= b);
        prop_assert!(a * bound + b <= bound, "a={a} b={b} bound={bound}");
    }

    /// Exact Pisot classification agrees with floating point root finding
    /// whenever every root is safely away from the decision margins.
    #[test]
    fn pisot_test_matches_float_roots(s in arb_substitution()) {
        let m = s.matrix();
        let poly = char_poly(&m);
        let coeffs: Vec<f64> = poly.iter().map(|c| {
            let s = c.to_string();
            s.parse::<f64>().unwrap()
        }).collect();
        let roots = durand_kerner(&coeffs);
        prop_assume!(!roots.is_empty());
        // keep clear of the margins: distinct roots, circle, growth
        for (a, r) in roots.iter().enumerate() {
            for q in roots.iter().skip(a + 1) {
                prop_assume!((r - q).norm() > 1e-4);
            }
            prop_assume!((r.norm() - 1.0).abs() > 1e-4);
        }
        let dominant = roots
            .iter()
            .cloned()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap();
        prop_assume!(dominant.norm() > 1.0 + 1e-4);
        prop_assert!(dominant.im.abs() < 1e-6, "dominant root must be real");
        let expected = roots
            .iter()
            .all(|r| (r - dominant).norm() < 1e-4 || r.norm() < 1.0);
        prop_assert_eq!(is_pisot(&m, PisotMode::Literal).unwrap(), expected);
        // strict implies literal, and the eigenvalue bracket contains the root
        if is_pisot(&m, PisotMode::Strict).unwrap() {
            prop_assert!(is_pisot(&m, PisotMode::Literal).unwrap());
        }
        let ev = dominant_eigenvalue(&m, 1e-9).unwrap();
        prop_assert!((ev.approx() - dominant.re).abs() < 1e-6);
    }
}

/// Durand-Kerner iteration for all complex roots of a monic polynomial
/// with coefficients low -> high.
fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    assert_eq!(coeffs[n], 1.0, "monic expected");
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let base = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| base.powu(k as u32 + 1)).collect();
    for _ in 0..400 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= roots[k] - roots[j];
                }
            }
            let delta = eval(roots[k]) / denom;
            roots[k] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-12 {
            break;
        }
    }
    roots
}
