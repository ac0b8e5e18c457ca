//! Exact spectral analysis of substitution matrices.
//!
//! Characteristic polynomials are computed over the integers, the dominant
//! eigenvalue is isolated with Sturm chains over big rationals, and the
//! Pisot property is decided exactly: unit-circle eigenvalues are detected
//! through the reciprocal-pair factor of the squarefree characteristic
//! polynomial, and the number of eigenvalues outside the unit disk is
//! counted with a Routh-type chain after a Möbius transform.  No floating
//! point enters any decision.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::substitution::SubstMatrix;

/// Refinement iteration cap for root isolation; far beyond any realistic
/// root separation at the degrees handled here.
const ISOLATION_CAP: usize = 512;

type IntPoly = Vec<BigInt>;
type RatPoly = Vec<BigRational>;

// ---------------------------------------------------------------------------
// integer polynomial helpers (coefficients low -> high, trimmed)

fn int_trim(mut p: IntPoly) -> IntPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn int_degree(p: &[BigInt]) -> usize {
    debug_assert!(!p.is_empty());
    p.len() - 1
}

fn int_eval(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

fn int_derivative(p: &[BigInt]) -> IntPoly {
    if p.len() <= 1 {
        return vec![BigInt::zero()];
    }
    int_trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

fn int_content(p: &[BigInt]) -> BigInt {
    use num_integer::Integer;
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
    }
    g
}

/// Primitive part with positive leading coefficient; zero stays zero.
fn int_normalize(p: IntPoly) -> IntPoly {
    let p = int_trim(p);
    if p.is_empty() {
        return p;
    }
    let mut c = int_content(&p);
    if p.last().unwrap() < &BigInt::zero() {
        c = -c;
    }
    p.into_iter().map(|x| x / &c).collect()
}

fn int_to_rat(p: &[BigInt]) -> RatPoly {
    p.iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

/// Clears denominators and normalizes to a primitive positive-leading poly.
fn rat_to_int_normalized(p: &[BigRational]) -> IntPoly {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for c in p {
        lcm = lcm.lcm(c.denom());
    }
    let ints: IntPoly = p
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    int_normalize(ints)
}

fn int_gcd(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut r0 = int_to_rat(&int_trim(a.to_vec()));
    let mut r1 = int_to_rat(&int_trim(b.to_vec()));
    if r0.is_empty() {
        return int_normalize(b.to_vec());
    }
    while !r1.is_empty() {
        let r = rat_rem(&r0, &r1);
        r0 = r1;
        r1 = r;
    }
    rat_to_int_normalized(&r0)
}

/// Exact quotient `a / b`; errors internally if the division is not exact.
fn int_div_exact(a: &[BigInt], b: &[BigInt]) -> Result<IntPoly> {
    let (q, r) = rat_divmod(&int_to_rat(a), &int_to_rat(b));
    if !r.is_empty() {
        return Err(Error::internal("expected exact polynomial division"));
    }
    let mut out = IntPoly::with_capacity(q.len());
    for c in &q {
        if !c.denom().is_one() {
            return Err(Error::internal("expected integral quotient"));
        }
        out.push(c.numer().clone());
    }
    Ok(int_trim(out))
}

/// `p / gcd(p, p')`: same roots, all simple.
fn squarefree_part(p: &[BigInt]) -> Result<IntPoly> {
    let g = int_gcd(p, &int_derivative(p));
    if int_degree(&g) == 0 {
        return Ok(int_normalize(p.to_vec()));
    }
    Ok(int_normalize(int_div_exact(p, &g)?))
}

/// Coefficients reversed; drops roots at zero, inverts the others.
fn int_reverse(p: &[BigInt]) -> IntPoly {
    let r: IntPoly = p.iter().rev().cloned().collect();
    int_normalize(r)
}

// ---------------------------------------------------------------------------
// rational polynomial division and Sturm chains

fn rat_trim(mut p: RatPoly) -> RatPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn rat_divmod(a: &[BigRational], b: &[BigRational]) -> (RatPoly, RatPoly) {
    let b = rat_trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = rat_trim(a.to_vec());
    if r.len() < b.len() {
        return (RatPoly::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.len() - b.len();
        let c = r.last().unwrap() / b.last().unwrap();
        for (i, bc) in b.iter().enumerate() {
            let t = bc * &c;
            r[k + i] -= t;
        }
        q[k] = c;
        r = rat_trim(r);
    }
    (rat_trim(q), r)
}

fn rat_rem(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    rat_divmod(a, b).1
}

/// Standard Sturm chain: f, f', then negated remainders.
fn sturm_chain(p: &[BigInt]) -> Vec<RatPoly> {
    let f = rat_trim(int_to_rat(p));
    let mut chain = vec![f.clone()];
    let d = rat_trim(int_to_rat(&int_derivative(p)));
    if f.len() <= 1 || d.is_empty() {
        return chain;
    }
    chain.push(d);
    loop {
        let n = chain.len();
        let r = rat_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            return chain;
        }
        chain.push(r.iter().map(|c| -c).collect());
    }
}

fn rat_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn sign_at(p: &[BigRational], x: &BigRational) -> i8 {
    let v = rat_eval(p, x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_at_inf(p: &[BigRational], positive: bool) -> i8 {
    if p.is_empty() {
        return 0;
    }
    let lead = p.last().unwrap();
    let mut s: i8 = if lead.is_positive() { 1 } else { -1 };
    if !positive && (p.len() - 1) % 2 == 1 {
        s = -s;
    }
    s
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut prev: i8 = 0;
    for s in signs {
        if s != 0 {
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
    }
    count
}

fn variations_at(chain: &[RatPoly], x: &BigRational) -> usize {
    variations(chain.iter().map(|p| sign_at(p, x)))
}

fn variations_at_inf(chain: &[RatPoly], positive: bool) -> usize {
    variations(chain.iter().map(|p| sign_at_inf(p, positive)))
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
///
/// With zero signs skipped the variation count is right-continuous, so
/// endpoint roots need no special casing: a root at `a` is excluded, a root
/// at `b` is included.  Requires a squarefree `chain[0]`.
fn count_roots(chain: &[RatPoly], a: &BigRational, b: &BigRational) -> Result<usize> {
    debug_assert!(a < b);
    let va = variations_at(chain, a);
    let vb = variations_at(chain, b);
    if va < vb {
        return Err(Error::internal("Sturm variations increased"));
    }
    Ok(va - vb)
}

// ---------------------------------------------------------------------------
// characteristic polynomial

/// Characteristic polynomial `det(xI - M)`, coefficients low -> high, monic.
///
/// Computed with the Faddeev-LeVerrier recurrence in exact integers.
pub fn char_poly(m: &SubstMatrix) -> Vec<BigInt> {
    let n = m.dim();
    let a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(m.entry(i, j))).collect())
        .collect();
    // c[k] is the coefficient of x^(n-k)
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = BigInt::one();
    let mut nmat = a.clone();
    for k in 1..=n {
        let tr: BigInt = (0..n).map(|i| nmat[i][i].clone()).sum();
        c[k] = -tr / BigInt::from(k as u64);
        if k == n {
            break;
        }
        // nmat <- a * (nmat + c[k] I)
        let mut tmp = nmat.clone();
        for (i, row) in tmp.iter_mut().enumerate() {
            row[i] += &c[k];
        }
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for (l, t) in tmp.iter().enumerate() {
                    s += &a[i][l] * &t[j];
                }
                next[i][j] = s;
            }
        }
        nmat = next;
    }
    c.reverse();
    c
}

/// Renders a polynomial as text, highest degree first, e.g. `x^2 - 2x`.
pub fn format_poly(coeffs: &[BigInt], var: &str) -> String {
    let p = int_trim(coeffs.to_vec());
    if p.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let unit_coeff = mag.is_one() && i > 0;
        if !unit_coeff {
            out.push_str(&mag.to_string());
        }
        if i > 0 {
            out.push_str(var);
            if i > 1 {
                out.push_str(&format!("^{i}"));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// dominant eigenvalue

/// An isolating interval `(lower, upper]` for the dominant eigenvalue; when
/// `exact` is set both endpoints equal the eigenvalue itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenvalue {
    pub lower: BigRational,
    pub upper: BigRational,
    pub exact: bool,
}

impl Eigenvalue {
    /// Floating point approximation (midpoint of the bracket).
    pub fn approx(&self) -> f64 {
        if self.exact {
            rat_to_f64(&self.lower)
        } else {
            rat_to_f64(&((&self.lower + &self.upper) / BigRational::from_integer(2.into())))
        }
    }

    /// Bracket width as floating point.
    pub fn width(&self) -> f64 {
        rat_to_f64(&(&self.upper - &self.lower))
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // scale both parts down; only reachable with astronomically large terms
        let shift = (r.numer().bits().max(r.denom().bits())).saturating_sub(512) as u64;
        let n = r.numer() >> shift;
        let d = r.denom() >> shift;
        n.to_f64().unwrap_or(f64::MAX) / d.to_f64().unwrap_or(1.0)
    })
}

/// Isolates the largest real root of squarefree `s` within `(0, hi]`.
///
/// Returns an `Eigenvalue` whose interval contains only that root, refined
/// until its width is at most `max_width`; integer roots are recognized
/// exactly.  `hi` must bound all real roots of `s` from above.
fn largest_root_interval(s: &[BigInt], hi: &BigRational, max_width: &BigRational) -> Result<Eigenvalue> {
    let chain = sturm_chain(s);
    let mut b = hi + BigRational::one();
    if sign_at(&chain[0], &b) == 0 {
        // cannot happen for hi = row-sum bound, defensive
        b += BigRational::one();
    }
    // exact integer roots first (rational roots of monic integer polys are
    // integers, so this catches every exact-rational case)
    let mut k = hi.floor().to_integer();
    while k >= BigInt::one() {
        let kr = BigRational::from_integer(k.clone());
        if int_eval(s, &kr).is_zero() {
            if count_roots(&chain, &kr, &b)? == 0 {
                return Ok(Eigenvalue {
                    lower: kr.clone(),
                    upper: kr,
                    exact: true,
                });
            }
            break; // roots above k exist and none of them is an integer
        }
        k -= 1;
    }
    // 1/2 is never a root of a monic integer polynomial, unlike 0
    let mut a = BigRational::new(1.into(), 2.into());
    if sign_at(&chain[0], &a) == 0 {
        return Err(Error::internal("unexpected non-integer rational root"));
    }
    let mut count = count_roots(&chain, &a, &b)?;
    if count == 0 {
        return Err(Error::internal("no root in largest-root isolation range"));
    }
    for _ in 0..ISOLATION_CAP {
        if count == 1 && &b - &a <= *max_width {
            return Ok(Eigenvalue {
                lower: a,
                upper: b,
                exact: false,
            });
        }
        let mid = (&a + &b) / BigRational::from_integer(2.into());
        let above = count_roots(&chain, &mid, &b)?;
        if above > 0 {
            a = mid;
            count = above;
        } else {
            b = mid;
            count = count_roots(&chain, &a, &b)?;
        }
    }
    Err(Error::internal("root isolation failed to converge"))
}

/// Dominant (Perron) eigenvalue of a primitive matrix, as an exact rational
/// bracket of width at most `tol`.
pub fn dominant_eigenvalue(m: &SubstMatrix, tol: f64) -> Result<Eigenvalue> {
    if !m.is_primitive() {
        return Err(Error::unsupported(
            "dominant eigenvalue requires a primitive matrix",
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let sums = m.row_sums();
    let lo = *sums.iter().min().unwrap();
    let hi = *sums.iter().max().unwrap();
    let p = char_poly(m);
    let s = squarefree_part(&p)?;
    if lo == hi {
        // constant row sums: the row-sum value is the eigenvalue
        let v = BigRational::from_integer(BigInt::from(lo));
        if !int_eval(&s, &v).is_zero() {
            return Err(Error::internal("row-sum eigenvalue not a root"));
        }
        return Ok(Eigenvalue {
            lower: v.clone(),
            upper: v,
            exact: true,
        });
    }
    let width = BigRational::from_float(tol)
        .filter(|w| w.is_positive())
        .ok_or_else(|| Error::invalid("tolerance must be positive and finite"))?;
    largest_root_interval(&s, &BigRational::from_integer(BigInt::from(hi)), &width)
}

/// Exact equality test for the dominant eigenvalues of two primitive
/// matrices.
///
/// `tol` gives the initial bracket refinement; the decision itself is exact
/// (common-root check against `gcd` of the squarefree characteristic
/// polynomials, refined further as needed).
pub fn eigenvalues_match(m1: &SubstMatrix, m2: &SubstMatrix, tol: f64) -> Result<bool> {
    let e1 = dominant_eigenvalue(m1, tol)?;
    let e2 = dominant_eigenvalue(m2, tol)?;
    if e1.exact && e2.exact {
        return Ok(e1.lower == e2.lower);
    }
    let s1 = squarefree_part(&char_poly(m1))?;
    let s2 = squarefree_part(&char_poly(m2))?;
    if e1.exact {
        return Ok(int_eval(&s2, &e1.lower).is_zero() && e2.lower < e1.lower && e1.lower <= e2.upper);
    }
    if e2.exact {
        return Ok(int_eval(&s1, &e2.lower).is_zero() && e1.lower < e2.lower && e2.lower <= e1.upper);
    }
    let g = int_gcd(&s1, &s2);
    if int_degree(&g) == 0 {
        return Ok(false);
    }
    let chain = sturm_chain(&g);
    let mut i1 = (e1.lower, e1.upper);
    let mut i2 = (e2.lower, e2.upper);
    let c1 = sturm_chain(&s1);
    let c2 = sturm_chain(&s2);
    // each eigenvalue must itself be a root of g
    if count_roots(&chain, &i1.0, &i1.1)? == 0 || count_roots(&chain, &i2.0, &i2.1)? == 0 {
        return Ok(false);
    }
    for _ in 0..ISOLATION_CAP {
        if i1.1 <= i2.0 || i2.1 <= i1.0 {
            return Ok(false); // disjoint brackets
        }
        let lo = if i1.0 > i2.0 { i1.0.clone() } else { i2.0.clone() };
        let hi = if i1.1 < i2.1 { i1.1.clone() } else { i2.1.clone() };
        // skip the decision for this round if an endpoint hits any root
        let clean = lo < hi
            && [&chain, &c1, &c2]
                .iter()
                .all(|c| sign_at(&c[0], &lo) != 0 && sign_at(&c[0], &hi) != 0);
        if clean
            && count_roots(&chain, &lo, &hi)? == 1
            && count_roots(&c1, &lo, &hi)? >= 1
            && count_roots(&c2, &lo, &hi)? >= 1
        {
            // the overlap holds exactly one common root and also holds both
            // dominant eigenvalues, which are common roots: they coincide
            return Ok(true);
        }
        i1 = bisect_once(&c1, i1)?;
        i2 = bisect_once(&c2, i2)?;
    }
    Err(Error::internal("eigenvalue comparison failed to converge"))
}

/// One bisection step keeping the unique root of `chain` in the interval.
fn bisect_once(
    chain: &[RatPoly],
    (a, b): (BigRational, BigRational),
) -> Result<(BigRational, BigRational)> {
    let mid = (&a + &b) / BigRational::from_integer(2.into());
    if count_roots(chain, &mid, &b)? > 0 {
        Ok((mid, b))
    } else {
        Ok((a, mid))
    }
}

// ---------------------------------------------------------------------------
// Pisot test

/// Which reading of the Pisot property to decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PisotMode {
    /// Dominant eigenvalue simple and greater than one, all other
    /// eigenvalues strictly inside the unit circle.
    Literal,
    /// Additionally requires the dominant eigenvalue to be irrational.
    Strict,
}

/// Decides the Pisot property of a primitive matrix exactly.
pub fn is_pisot(m: &SubstMatrix, mode: PisotMode) -> Result<bool> {
    if !m.is_primitive() {
        return Err(Error::unsupported("Pisot test requires a primitive matrix"));
    }
    let hi = BigRational::from_integer(BigInt::from(
        *m.row_sums().iter().max().unwrap(),
    ));
    pisot_poly(&char_poly(m), &hi, mode)
}

/// Pisot decision on a monic integer polynomial whose real roots are bounded
/// above by `hi`.
fn pisot_poly(p: &[BigInt], hi: &BigRational, mode: PisotMode) -> Result<bool> {
    let s = squarefree_part(p)?;
    if int_degree(&s) == 0 {
        return Ok(false);
    }
    let one = BigRational::one();
    // roots at +-1 sit on the unit circle
    if int_eval(&s, &one).is_zero() || int_eval(&s, &(-one.clone())).is_zero() {
        return Ok(false);
    }
    // dominant eigenvalue must exceed 1
    let chain_s = sturm_chain(&s);
    let b = hi + BigRational::one();
    if count_roots(&chain_s, &one, &b)? == 0 {
        return Ok(false);
    }
    let lambda = largest_root_interval(&s, hi, &BigRational::new(1.into(), 4.into()))?;
    // dominant eigenvalue must be simple in the full characteristic poly
    let mult = int_gcd(p, &int_derivative(p));
    if int_degree(&mult) > 0 {
        let w = int_gcd(&s, &mult);
        if int_degree(&w) > 0 {
            let repeated = if lambda.exact {
                int_eval(&w, &lambda.lower).is_zero()
            } else {
                count_roots(&sturm_chain(&w), &lambda.lower, &lambda.upper)? > 0
            };
            if repeated {
                return Ok(false);
            }
        }
    }
    // reciprocal-pair factor: carries every unit-circle root
    let g = int_gcd(&s, &int_reverse(&s));
    let g_deg = int_degree(&g);
    if g_deg > 0 {
        if g_deg % 2 != 0 {
            return Err(Error::internal("reciprocal factor of odd degree"));
        }
        // palindromic by construction; detect circle roots via y = x + 1/x
        let rev_g = int_reverse(&g);
        if rev_g != g {
            return Err(Error::internal("reciprocal factor not palindromic"));
        }
        let h = half_transform(&g);
        let chain_h = sturm_chain(&h);
        let two = BigRational::from_integer(2.into());
        if count_roots(&chain_h, &(-two.clone()), &two)? > 0 {
            return Ok(false); // eigenvalues on the unit circle
        }
    }
    // count roots outside the unit disk
    let rest = int_div_exact(&s, &g)?;
    let mut outside = g_deg / 2; // reciprocal pairs split evenly, none on the circle
    if int_degree(&rest) > 0 {
        outside += rhp_count(&mobius_transform(&rest)?)?;
    }
    if outside != 1 {
        return Ok(false);
    }
    match mode {
        PisotMode::Literal => Ok(true),
        // monic integer polynomial: a rational dominant root is an integer
        // and is always recognized exactly by the isolation routine
        PisotMode::Strict => Ok(!lambda.exact),
    }
}

/// For palindromic `g` of degree `2m`, the polynomial `H(y)` of degree `m`
/// with `g(x) = x^m H(x + 1/x)`.
fn half_transform(g: &[BigInt]) -> IntPoly {
    let m = int_degree(g) / 2;
    // base polynomials b_k(y) = x^k + x^(-k): b_0 = 2, b_1 = y,
    // b_{k+1} = y b_k - b_{k-1}
    let mut b_prev: IntPoly = vec![BigInt::from(2)];
    let mut b_cur: IntPoly = vec![BigInt::zero(), BigInt::one()];
    let mut h = vec![BigInt::zero(); m + 1];
    h[0] = g[m].clone();
    for k in 1..=m {
        for (i, c) in b_cur.iter().enumerate() {
            h[i] += &g[m + k] * c;
        }
        if k < m {
            // multiply b_cur by y, subtract b_prev
            let mut next = vec![BigInt::zero(); b_cur.len() + 1];
            for (i, c) in b_cur.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            for (i, c) in b_prev.iter().enumerate() {
                next[i] -= c;
            }
            b_prev = b_cur;
            b_cur = int_trim(next);
        }
    }
    int_trim(h)
}

/// Möbius substitution `q(w) = (1-w)^d h((1+w)/(1-w))`, mapping the unit
/// circle to the imaginary axis and the outside of the disk to the right
/// half-plane.
fn mobius_transform(h: &[BigInt]) -> Result<IntPoly> {
    let d = int_degree(h);
    // (1+w)^i (1-w)^(d-i) accumulated per coefficient
    let mut q = vec![BigInt::zero(); d + 1];
    for (i, c) in h.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let a = binom_expand(i, false); // (1+w)^i
        let b = binom_expand(d - i, true); // (1-w)^(d-i)
        // convolve
        for (x, ca) in a.iter().enumerate() {
            for (y, cb) in b.iter().enumerate() {
                q[x + y] += c * ca * cb;
            }
        }
    }
    let q = int_trim(q);
    if q.len() != d + 1 {
        return Err(Error::internal("Möbius transform dropped degree"));
    }
    Ok(q)
}

fn binom_expand(n: usize, minus: bool) -> IntPoly {
    let mut out = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); out.len() + 1];
        for (i, c) in out.iter().enumerate() {
            next[i] += c;
            if minus {
                next[i + 1] -= c;
            } else {
                next[i + 1] += c;
            }
        }
        out = next;
    }
    out
}

/// Number of roots of `q` in the open right half-plane, for `q` with no
/// imaginary-axis roots and no root pair `w, -w`: a Routh-type count via the
/// Cauchy index of the alternating even/odd split.
fn rhp_count(q: &[BigInt]) -> Result<usize> {
    let d = int_degree(q);
    if d == 0 {
        return Ok(0);
    }
    // f0 collects a_d, -a_{d-2}, a_{d-4}, ... on descending even offsets,
    // f1 the same starting from a_{d-1}
    let mut f0 = vec![BigRational::zero(); d + 1];
    let mut f1 = vec![BigRational::zero(); d + 1];
    let mut sign = BigInt::one();
    let mut k = d;
    loop {
        f0[k] = BigRational::from_integer(&sign * &q[k]);
        if k < 2 {
            break;
        }
        k -= 2;
        sign = -sign;
    }
    sign = BigInt::one();
    let mut k = d - 1;
    loop {
        f1[k] = BigRational::from_integer(&sign * &q[k]);
        if k < 2 {
            break;
        }
        k -= 2;
        sign = -sign;
    }
    let f0 = rat_trim(f0);
    let f1 = rat_trim(f1);
    if f1.is_empty() {
        return Err(Error::internal("degenerate Routh chain"));
    }
    let mut chain = vec![f0, f1];
    loop {
        let n = chain.len();
        let r = rat_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.iter().map(|c| -c).collect());
    }
    if chain.last().unwrap().len() != 1 {
        return Err(Error::internal("Routh chain shares a nonconstant factor"));
    }
    let i = variations_at_inf(&chain, false) as isize - variations_at_inf(&chain, true) as isize;
    let twice = d as isize - i;
    if twice < 0 || twice % 2 != 0 || twice / 2 > d as isize {
        return Err(Error::internal("Routh count out of range"));
    }
    Ok((twice / 2) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::Substitution;

    fn sub(text: &str) -> Substitution {
        Substitution::parse(text).unwrap()
    }

    fn ip(coeffs: &[i64]) -> IntPoly {
        coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn char_polys() {
        let tm = sub("0 -> 01\n1 -> 10\n").matrix();
        assert_eq!(char_poly(&tm), ip(&[0, -2, 1]));
        assert_eq!(format_poly(&char_poly(&tm), "x"), "x^2 - 2x");
        let fib = sub("a -> ab\nb -> a\n").matrix();
        assert_eq!(char_poly(&fib), ip(&[-1, -1, 1]));
        assert_eq!(format_poly(&char_poly(&fib), "x"), "x^2 - x - 1");
        let trib = sub("a -> ab\nb -> ac\nc -> a\n").matrix();
        assert_eq!(format_poly(&char_poly(&trib), "x"), "x^3 - x^2 - x - 1");
        let unb = sub("0 -> 0001\n1 -> 110\n").matrix();
        assert_eq!(format_poly(&char_poly(&unb), "x"), "x^2 - 5x + 5");
    }

    #[test]
    fn poly_helpers() {
        assert_eq!(squarefree_part(&ip(&[4, -8, 4])).unwrap(), ip(&[-1, 1])); // 4(x-1)^2
        assert_eq!(int_gcd(&ip(&[-2, 1]), &ip(&[-3, 1])), ip(&[1]));
        assert_eq!(
            int_gcd(&ip(&[2, -3, 1]), &ip(&[-2, 1, 1])), // (x-1)(x-2), (x-1)(x+2)
            ip(&[-1, 1])
        );
        // reversal drops the zero root and normalizes the leading sign
        assert_eq!(int_reverse(&ip(&[0, -2, 1])), ip(&[-1, 2]));
        assert_eq!(int_div_exact(&ip(&[2, -3, 1]), &ip(&[-1, 1])).unwrap(), ip(&[-2, 1]));
        assert!(int_div_exact(&ip(&[1, 0, 1]), &ip(&[-1, 1])).is_err());
    }

    #[test]
    fn sturm_counting() {
        // (x-1)(x-2)(x-3)
        let p = ip(&[-6, 11, -6, 1]);
        let chain = sturm_chain(&p);
        let r = |a: i64, b: i64| {
            count_roots(
                &chain,
                &BigRational::from_integer(a.into()),
                &BigRational::from_integer(b.into()),
            )
            .unwrap()
        };
        assert_eq!(r(0, 4), 3);
        assert_eq!(r(0, 10), 3);
        assert_eq!(r(-4, 0), 0);
        // half-open: root at the right endpoint counts
        assert_eq!(
            count_roots(
                &chain,
                &BigRational::new(3.into(), 2.into()),
                &BigRational::from_integer(2.into())
            )
            .unwrap(),
            1
        );
    }

    #[test]
    fn dominant_eigenvalues() {
        let tm = sub("0 -> 01\n1 -> 10\n").matrix();
        let e = dominant_eigenvalue(&tm, 1e-9).unwrap();
        assert!(e.exact);
        assert_eq!(e.approx(), 2.0);
        let fib = sub("a -> ab\nb -> a\n").matrix();
        let e = dominant_eigenvalue(&fib, 1e-9).unwrap();
        assert!(!e.exact);
        assert!((e.approx() - 1.618033988749895).abs() < 1e-8);
        assert!(e.width() <= 1e-9);
        let trib = sub("a -> ab\nb -> ac\nc -> a\n").matrix();
        let e = dominant_eigenvalue(&trib, 1e-9).unwrap();
        assert!((e.approx() - 1.839286755214161).abs() < 1e-8);
        let unb = sub("0 -> 0001\n1 -> 110\n").matrix();
        let e = dominant_eigenvalue(&unb, 1e-9).unwrap();
        assert!((e.approx() - 3.618033988749895).abs() < 1e-8);
        // integer eigenvalue of a non-uniform substitution is found exactly
        let m = sub("0 -> 0011\n1 -> 01\n").matrix(); // rows (2,2),(1,1): eigenvalue 3
        let e = dominant_eigenvalue(&m, 1e-9).unwrap();
        assert!(e.exact);
        assert_eq!(e.approx(), 3.0);
        let red = sub("a -> ab\nb -> bb\n").matrix();
        assert!(dominant_eigenvalue(&red, 1e-9).is_err());
    }

    #[test]
    fn eigenvalue_matching() {
        let tm = sub("0 -> 01\n1 -> 10\n").matrix();
        let two = sub("a -> aa\n").matrix();
        assert!(eigenvalues_match(&tm, &two, 1e-9).unwrap());
        let fib = sub("a -> ab\nb -> a\n").matrix();
        assert!(!eigenvalues_match(&tm, &fib, 1e-9).unwrap());
        let fib_perm = sub("a -> b\nb -> ba\n").matrix();
        assert!(eigenvalues_match(&fib, &fib_perm, 1e-9).unwrap());
        // golden mean vs its square: close in poly structure, different value
        let fib2 = sub("a -> aba\nb -> ab\n").matrix();
        assert!(!eigenvalues_match(&fib, &fib2, 1e-9).unwrap());
        assert!(eigenvalues_match(&fib, &fib, 1e-9).unwrap());
    }

    #[test]
    fn pisot_matrices() {
        let tm = sub("0 -> 01\n1 -> 10\n").matrix();
        assert!(is_pisot(&tm, PisotMode::Literal).unwrap());
        assert!(!is_pisot(&tm, PisotMode::Strict).unwrap());
        let fib = sub("a -> ab\nb -> a\n").matrix();
        assert!(is_pisot(&fib, PisotMode::Literal).unwrap());
        assert!(is_pisot(&fib, PisotMode::Strict).unwrap());
        let trib = sub("a -> ab\nb -> ac\nc -> a\n").matrix();
        assert!(is_pisot(&trib, PisotMode::Literal).unwrap());
        assert!(is_pisot(&trib, PisotMode::Strict).unwrap());
        let unb = sub("0 -> 0001\n1 -> 110\n").matrix();
        assert!(!is_pisot(&unb, PisotMode::Literal).unwrap());
        assert!(!is_pisot(&unb, PisotMode::Strict).unwrap());
    }

    #[test]
    fn pisot_poly_cases() {
        let hi = |v: i64| BigRational::from_integer(v.into());
        // x^2 - 3x + 1: roots phi^2 and phi^-2, a reciprocal pair off the circle
        assert!(pisot_poly(&ip(&[1, -3, 1]), &hi(3), PisotMode::Literal).unwrap());
        assert!(pisot_poly(&ip(&[1, -3, 1]), &hi(3), PisotMode::Strict).unwrap());
        // (x^2 - 3x + 1)(x^2 + 1): adds a circle pair at +-i
        assert!(!pisot_poly(&ip(&[1, -3, 2, -3, 1]), &hi(3), PisotMode::Literal).unwrap());
        // (x - 2)^2: dominant root not simple
        assert!(!pisot_poly(&ip(&[4, -4, 1]), &hi(2), PisotMode::Literal).unwrap());
        // x - 1: dominant root on the circle
        assert!(!pisot_poly(&ip(&[-1, 1]), &hi(1), PisotMode::Literal).unwrap());
        // x - 3: integer Pisot number
        assert!(pisot_poly(&ip(&[-3, 1]), &hi(3), PisotMode::Literal).unwrap());
        assert!(!pisot_poly(&ip(&[-3, 1]), &hi(3), PisotMode::Strict).unwrap());
        // x^2 - x - 3: second root ~ -1.3, outside
        assert!(!pisot_poly(&ip(&[-3, -1, 1]), &hi(3), PisotMode::Literal).unwrap());
        // x^3 - x - 1: smallest Pisot number (plastic constant)
        assert!(pisot_poly(&ip(&[-1, -1, 0, 1]), &hi(2), PisotMode::Strict).unwrap());
        // x^2 - 4x + 1: roots 2 +- sqrt(3), reciprocal pair, Pisot
        assert!(pisot_poly(&ip(&[1, -4, 1]), &hi(4), PisotMode::Strict).unwrap());
    }

    #[test]
    fn half_transform_cases() {
        // x^2 - 3x + 1 -> y - 3
        assert_eq!(half_transform(&ip(&[1, -3, 1])), ip(&[-3, 1]));
        // x^4 + x^3 + x^2 + x + 1 -> y^2 + y - 1
        assert_eq!(half_transform(&ip(&[1, 1, 1, 1, 1])), ip(&[-1, 1, 1]));
        // x^2 + 1 -> y
        assert_eq!(half_transform(&ip(&[1, 0, 1])), ip(&[0, 1]));
    }

    #[test]
    fn rhp_counts() {
        assert_eq!(rhp_count(&ip(&[1, 1])).unwrap(), 0); // root -1
        assert_eq!(rhp_count(&ip(&[-1, 1])).unwrap(), 1); // root 1
        assert_eq!(rhp_count(&ip(&[2, 3, 1])).unwrap(), 0); // -1, -2
        assert_eq!(rhp_count(&ip(&[2, -3, 1])).unwrap(), 2); // 1, 2
        assert_eq!(rhp_count(&ip(&[-1, 2, 3])).unwrap(), 1); // 1/3, -1
        assert_eq!(rhp_count(&ip(&[1, -8, 11])).unwrap(), 2);
        // complex pairs: (w^2 + 2w + 2)(w - 1) = w^3 + w^2 - 2: roots -1 +- i, 1
        assert_eq!(rhp_count(&ip(&[-2, 0, 1, 1])).unwrap(), 1);
        // (w^2 - 2w + 2)(w + 2): roots 1 +- i, -2
        assert_eq!(rhp_count(&ip(&[4, -2, 0, 1])).unwrap(), 2);
    }
}
