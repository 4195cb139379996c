//! Root datum of type A_{2l}^{(2)}: the lattice spanned by `alpha_0..alpha_l`,
//! its invariant form, positive roots, the convex preorder around `delta`,
//! and cuspidal words.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::{Add, Sub};

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};

/// Lattice vector in the basis `alpha_0..alpha_l`; coordinates are stored doubled.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector {
    doubled: Vec<i64>,
}

impl RootVector {
    pub fn zero(ell: usize) -> Self {
        Self { doubled: vec![0; ell + 1] }
    }

    pub fn simple(ell: usize, i: usize) -> Self {
        let mut v = Self::zero(ell);
        v.doubled[i] = 2;
        v
    }

    /// `delta = 2 (alpha_0 + ... + alpha_{l-1}) + alpha_l`
    pub fn delta(ell: usize) -> Self {
        let mut coeffs = vec![2; ell + 1];
        coeffs[ell] = 1;
        Self::from_coeffs(&coeffs)
    }

    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Self { doubled: coeffs.iter().map(|c| 2 * c).collect() }
    }

    pub fn from_doubled(doubled: Vec<i64>) -> Self {
        Self { doubled }
    }

    pub fn ell(&self) -> usize {
        self.doubled.len() - 1
    }

    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    pub fn is_integral(&self) -> bool {
        self.doubled.iter().all(|c| c % 2 == 0)
    }

    /// Undoubled coefficients, if integral.
    pub fn coeffs(&self) -> Option<Vec<i64>> {
        self.is_integral().then(|| self.doubled.iter().map(|c| c / 2).collect())
    }

    pub fn coeff(&self, i: usize) -> Rational64 {
        Rational64::new(self.doubled[i], 2)
    }

    pub fn is_zero(&self) -> bool {
        self.doubled.iter().all(|&c| c == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.doubled.iter().all(|&c| c >= 0)
    }

    /// Element of `Q_+`: integral with nonnegative coefficients.
    pub fn in_q_plus(&self) -> bool {
        self.is_integral() && self.is_nonnegative()
    }

    pub fn scale(&self, k: i64) -> Self {
        Self { doubled: self.doubled.iter().map(|c| c * k).collect() }
    }

    /// Coordinatewise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.doubled.iter().zip(&other.doubled).all(|(a, b)| a <= b)
    }

    pub fn add_simple(&mut self, i: usize, times: i64) {
        self.doubled[i] += 2 * times;
    }

    pub fn height(&self) -> Result<Rational64> {
        if !self.is_nonnegative() {
            return Err(SpinError::NegativeCoordinate);
        }
        Ok(Rational64::new(self.doubled.iter().sum(), 2))
    }

    /// Height of an element of the lattice without the sign check.
    fn raw_height2(&self) -> i64 {
        self.doubled.iter().sum()
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.doubled.len() != other.doubled.len() {
            return Err(SpinError::RankMismatch(self.ell(), other.ell()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(Self {
            doubled: self.doubled.iter().zip(&other.doubled).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(Self {
            doubled: self.doubled.iter().zip(&other.doubled).map(|(a, b)| a - b).collect(),
        })
    }
}

impl Add for &RootVector {
    type Output = RootVector;
    fn add(self, rhs: &RootVector) -> RootVector {
        self.checked_add(rhs).expect("rank mismatch")
    }
}

impl Sub for &RootVector {
    type Output = RootVector;
    fn sub(self, rhs: &RootVector) -> RootVector {
        self.checked_sub(rhs).expect("rank mismatch")
    }
}

impl fmt::Debug for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coeffs() {
            Some(c) => write!(f, "{c:?}"),
            None => write!(f, "{:?}/2", self.doubled),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RootVectorRepr {
    Plain(Vec<i64>),
    Half { coords: Vec<i64>, half: bool },
}

impl Serialize for RootVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.coeffs() {
            Some(c) => RootVectorRepr::Plain(c),
            None => RootVectorRepr::Half { coords: self.doubled.clone(), half: true },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match RootVectorRepr::deserialize(d)? {
            RootVectorRepr::Plain(c) => RootVector::from_coeffs(&c),
            RootVectorRepr::Half { coords, half: true } => RootVector::from_doubled(coords),
            RootVectorRepr::Half { coords, half: false } => RootVector::from_coeffs(&coords),
        })
    }
}

/// `p = 2l + 1`
pub fn p_of(ell: usize) -> usize {
    2 * ell + 1
}

pub fn ell_of(p: usize) -> Result<usize> {
    if p < 3 || p % 2 == 0 {
        return Err(SpinError::InvalidP(p));
    }
    Ok((p - 1) / 2)
}

/// Gram matrix `(alpha_i | alpha_j)`.
pub fn gram(ell: usize) -> Vec<Vec<i64>> {
    let n = ell + 1;
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        g[i][i] = if i == 0 {
            2
        } else if i == ell {
            8
        } else {
            4
        };
    }
    for i in 0..ell {
        let off = if i + 1 == ell { -4 } else { -2 };
        g[i][i + 1] = off;
        g[i + 1][i] = off;
    }
    g
}

/// `(alpha_i | alpha_i)`
pub fn simple_norm(ell: usize, i: usize) -> i64 {
    gram(ell)[i][i]
}

/// Exponent `s` with `q_i = q^s`, i.e. `(alpha_i|alpha_i)/2`.
pub fn q_exponent(ell: usize, i: usize) -> i32 {
    (simple_norm(ell, i) / 2) as i32
}

/// `(alpha_i | Lambda_j) = delta_ij (alpha_i|alpha_i)/2`
pub fn fundamental_pairing(ell: usize, i: usize, j: usize) -> i64 {
    if i == j {
        simple_norm(ell, i) / 2
    } else {
        0
    }
}

/// Coefficients `a_i^vee` of the canonical central element.
pub fn coroot_marks(ell: usize) -> Vec<i64> {
    (0..=ell).map(|i| if i == 0 { 1 } else { 2 }).collect()
}

pub fn pairing(a: &RootVector, b: &RootVector) -> Result<i64> {
    a.check_rank(b)?;
    let g = gram(a.ell());
    let mut s = 0i64;
    for (i, ai) in a.doubled.iter().enumerate() {
        for (j, bj) in b.doubled.iter().enumerate() {
            s += ai * bj * g[i][j];
        }
    }
    if s % 4 != 0 {
        return Err(SpinError::NonIntegralPairing);
    }
    Ok(s / 4)
}

/// `<h_i, beta> = 2 (alpha_i | beta) / (alpha_i | alpha_i)`
pub fn coroot_pairing(i: usize, beta: &RootVector) -> Result<i64> {
    let ell = beta.ell();
    let num = 2 * pairing(&RootVector::simple(ell, i), beta)?;
    let den = simple_norm(ell, i);
    if num % den != 0 {
        return Err(SpinError::NonIntegralPairing);
    }
    Ok(num / den)
}

// ---------------------------------------------------------------------------
// Words

/// Word over `I = {0..l}`, optionally with divided-power exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Word {
    pub letters: Vec<usize>,
    pub divided: Option<Vec<u32>>,
}

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Self { letters, divided: None }
    }

    pub fn divided(letters: Vec<usize>, exps: Vec<u32>) -> Result<Self> {
        if letters.len() != exps.len() || exps.iter().any(|&m| m == 0) {
            return Err(SpinError::MalformedWord("exponents must be >= 1 and align with letters".into()));
        }
        Ok(Self { letters, divided: Some(exps) })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.divided.clone().unwrap_or_else(|| vec![1; self.letters.len()])
    }

    pub fn validate(&self, ell: usize) -> Result<()> {
        if let Some(&letter) = self.letters.iter().find(|&&i| i > ell) {
            return Err(SpinError::LetterOutOfRange { letter, ell });
        }
        if let Some(e) = &self.divided {
            if e.len() != self.letters.len() || e.iter().any(|&m| m == 0) {
                return Err(SpinError::MalformedWord("bad divided exponents".into()));
            }
        }
        Ok(())
    }

    /// Replace each `i^(m)` by `m` copies of `i`.
    pub fn expand(&self) -> Word {
        let mut out = Vec::new();
        for (&i, m) in self.letters.iter().zip(self.exponents()) {
            out.extend(std::iter::repeat_n(i, m as usize));
        }
        Word::new(out)
    }

    pub fn concat(&self, other: &Word) -> Word {
        if self.divided.is_none() && other.divided.is_none() {
            let mut l = self.letters.clone();
            l.extend(&other.letters);
            return Word::new(l);
        }
        let mut l = self.letters.clone();
        l.extend(&other.letters);
        let mut e = self.exponents();
        e.extend(other.exponents());
        Word { letters: l, divided: Some(e) }
    }

    /// Digit string for `l <= 9` (exponents as `i^m`), comma separated otherwise.
    pub fn render(&self, ell: usize) -> String {
        let exps = self.exponents();
        let compact = ell <= 9 && self.divided.is_none();
        let toks: Vec<String> = self
            .letters
            .iter()
            .zip(&exps)
            .map(|(i, m)| if *m == 1 { i.to_string() } else { format!("{i}^{m}") })
            .collect();
        if compact {
            toks.concat()
        } else {
            toks.join(",")
        }
    }

    /// Parses `"0100"`, `"0,1,0,0"` or `"2,1^2,0^2"`.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Word::new(vec![]));
        }
        if s.chars().all(|c| c.is_ascii_digit()) {
            return Ok(Word::new(s.chars().map(|c| c as usize - '0' as usize).collect()));
        }
        let mut letters = Vec::new();
        let mut exps = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let (l, m) = match tok.split_once('^') {
                Some((l, m)) => (l, m.trim_matches(|c| c == '(' || c == ')')),
                None => (tok, "1"),
            };
            let l: usize = l.parse().map_err(|_| SpinError::MalformedWord(s.to_string()))?;
            let m: u32 = m.parse().map_err(|_| SpinError::MalformedWord(s.to_string()))?;
            if m == 0 {
                return Err(SpinError::MalformedWord(s.to_string()));
            }
            letters.push(l);
            exps.push(m);
        }
        if exps.iter().all(|&m| m == 1) {
            Ok(Word::new(letters))
        } else {
            Ok(Word { letters, divided: Some(exps) })
        }
    }
}

/// `||w|| = alpha_{i_1} + ... + alpha_{i_n}` (divided exponents multiply).
pub fn word_content(w: &Word, ell: usize) -> Result<RootVector> {
    w.validate(ell)?;
    let mut v = RootVector::zero(ell);
    for (&i, m) in w.letters.iter().zip(w.exponents()) {
        v.add_simple(i, m as i64);
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Positive roots

/// Finite root in orthonormal coordinates `sum c_i e_i`, converted to doubled alpha-coordinates
/// with `e_i = alpha_i + ... + alpha_{l-1} + alpha_l / 2` (1-based `i`).
fn finite_root(ell: usize, e: &[i64]) -> RootVector {
    let mut d = vec![0i64; ell + 1];
    let mut acc = 0;
    for k in 1..ell {
        acc += e[k - 1];
        d[k] = 2 * acc;
    }
    d[ell] = e.iter().sum();
    RootVector::from_doubled(d)
}

/// Type C_l roots split as (short, long), in alpha-coordinates over `alpha_1..alpha_l`.
fn finite_roots(ell: usize) -> (Vec<RootVector>, Vec<RootVector>) {
    let mut short = Vec::new();
    let mut long = Vec::new();
    for i in 0..ell {
        for s in [1i64, -1] {
            let mut e = vec![0; ell];
            e[i] = 2 * s;
            long.push(finite_root(ell, &e));
        }
        for j in i + 1..ell {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut e = vec![0; ell];
                e[i] = si;
                e[j] = sj;
                short.push(finite_root(ell, &e));
            }
        }
    }
    (short, long)
}

/// All positive roots of height at most `h`, real roots first, sorted by height then coordinates.
pub fn positive_roots_up_to(h: usize, ell: usize) -> Vec<RootVector> {
    let delta = RootVector::delta(ell);
    let p = p_of(ell) as i64;
    let h2 = 2 * h as i64;
    let (short, long) = finite_roots(ell);
    let mut out: HashSet<RootVector> = HashSet::new();
    let mut push = |v: RootVector| {
        if v.is_nonnegative() && !v.is_zero() && v.raw_height2() <= h2 {
            out.insert(v);
        }
    };
    for r in short.iter().chain(&long) {
        push(r.clone());
    }
    let nmax = h as i64 / p + 2;
    for n in 1..=nmax {
        for a in &short {
            push(a + &delta.scale(n));
        }
        for a in &long {
            push(a + &delta.scale(2 * n));
            // (a + (2n-1) delta) / 2
            let v = a + &delta.scale(2 * n - 1);
            push(RootVector::from_doubled(v.doubled.iter().map(|c| c / 2).collect()));
        }
        push(delta.scale(n));
    }
    let mut v: Vec<RootVector> = out.into_iter().collect();
    v.sort_by_key(|r| (r.raw_height2(), std::cmp::Reverse(r.doubled.clone())));
    v
}

pub fn is_imaginary(beta: &RootVector) -> bool {
    let ell = beta.ell();
    let d = RootVector::delta(ell);
    // beta = n delta  <=>  doubled coords proportional to (4,..,4,2)
    let n2 = beta.doubled[ell];
    n2 > 0 && n2 % 2 == 0 && *beta == d.scale(n2 / 2)
}

pub fn is_positive_root(beta: &RootVector) -> bool {
    if !beta.is_nonnegative() || beta.is_zero() {
        return false;
    }
    let h = (beta.raw_height2() / 2 + 1) as usize;
    positive_roots_up_to(h, beta.ell()).contains(beta)
}

// ---------------------------------------------------------------------------
// Convex preorder

/// Value of the linear functional used for the preorder, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiValue {
    pub vec: Vec<Rational64>,
}

impl PartialOrd for ChiValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ChiValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vec.cmp(&other.vec)
    }
}

impl ChiValue {
    fn scaled(&self, k: Rational64) -> ChiValue {
        ChiValue { vec: self.vec.iter().map(|x| x * k).collect() }
    }
}

/// Splits `beta = t delta + v` with `v` in the span of `alpha_1..alpha_l`; returns `(t, v)`.
fn delta_decomposition(beta: &RootVector) -> (Rational64, Vec<Rational64>) {
    let ell = beta.ell();
    let a0 = beta.coeff(0);
    let t = a0 / 2;
    // alpha_0 = (delta - theta)/2 with theta = 2 e_1 the highest root
    let mut v = vec![Rational64::zero(); ell + 1];
    for (i, vi) in v.iter_mut().enumerate().skip(1) {
        let theta_i = if i == ell { 1 } else { 2 };
        *vi = beta.coeff(i) - a0 * Rational64::new(theta_i, 2);
    }
    (t, v)
}

/// `chi(alpha_j) = (1, e_j, 0)` for `0 < j < l`, `chi(-theta) = (1, e_l, 0)`, `chi(delta) = (0, .., 0, 1)`.
pub fn chi(beta: &RootVector) -> ChiValue {
    let ell = beta.ell();
    let (t, v) = delta_decomposition(beta);
    // v = sum_{j<l} c_j alpha_j + c_l (-theta)
    let mut c = vec![Rational64::zero(); ell + 1];
    c[ell] = -v[ell];
    for j in 1..ell {
        c[j] = v[j] + c[ell] * 2;
    }
    let mut out = Vec::with_capacity(ell + 2);
    out.push(c[1..].iter().copied().sum());
    out.extend_from_slice(&c[1..]);
    out.push(t);
    ChiValue { vec: out }
}

fn compare_raw(beta: &RootVector, gamma: &RootVector) -> Ordering {
    let hb = Rational64::new(beta.raw_height2(), 2);
    let hg = Rational64::new(gamma.raw_height2(), 2);
    chi(beta).scaled(hg).cmp(&chi(gamma).scaled(hb))
}

/// Compares `beta` and `gamma` in the convex preorder.
pub fn compare_preorder(beta: &RootVector, gamma: &RootVector) -> Result<Ordering> {
    beta.check_rank(gamma)?;
    if !is_positive_root(beta) || !is_positive_root(gamma) {
        return Err(SpinError::NotPositiveRoot);
    }
    Ok(compare_raw(beta, gamma))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeltaSide {
    Below,
    Above,
    Imaginary,
}

/// Position of a positive root relative to `delta`, read off from its finite part.
pub fn classify_vs_delta(beta: &RootVector) -> Result<DeltaSide> {
    if !is_positive_root(beta) {
        return Err(SpinError::NotPositiveRoot);
    }
    Ok(classify_unchecked(beta))
}

fn classify_unchecked(beta: &RootVector) -> DeltaSide {
    let c = chi(beta);
    let finite = &c.vec[..c.vec.len() - 1];
    match finite.iter().find(|x| !x.is_zero()) {
        None => DeltaSide::Imaginary,
        Some(x) if x.is_positive() => DeltaSide::Above,
        Some(_) => DeltaSide::Below,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConeSide {
    AtMostDelta,
    AtLeastDelta,
}

/// Memoized membership test for the cones spanned by roots on one side of `delta`.
pub struct ConeChecker {
    ell: usize,
    roots: [Vec<RootVector>; 2],
    max_height: usize,
    memo: [HashMap<Vec<i64>, bool>; 2],
}

impl ConeChecker {
    pub fn new(ell: usize) -> Self {
        Self { ell, roots: [vec![], vec![]], max_height: 0, memo: [HashMap::new(), HashMap::new()] }
    }

    fn ensure_height(&mut self, h: usize) {
        if h <= self.max_height {
            return;
        }
        let all = positive_roots_up_to(h, self.ell);
        let mut below = Vec::new();
        let mut above = Vec::new();
        for r in all {
            match classify_unchecked(&r) {
                DeltaSide::Below => below.push(r),
                DeltaSide::Above => above.push(r),
                DeltaSide::Imaginary => {
                    below.push(r.clone());
                    above.push(r);
                }
            }
        }
        self.roots = [below, above];
        self.max_height = h;
        // memo entries stay valid: a larger root list only matters for larger targets,
        // and every summand of theta has height <= ht(theta)
    }

    pub fn member(&mut self, theta: &RootVector, side: ConeSide) -> Result<bool> {
        if theta.ell() != self.ell {
            return Err(SpinError::RankMismatch(theta.ell(), self.ell));
        }
        if !theta.in_q_plus() {
            return Err(SpinError::NegativeCoordinate);
        }
        let h = (theta.raw_height2() / 2) as usize;
        self.ensure_height(h.max(1));
        let k = match side {
            ConeSide::AtMostDelta => 0,
            ConeSide::AtLeastDelta => 1,
        };
        Ok(self.go(theta.doubled.clone(), k))
    }

    fn go(&mut self, t: Vec<i64>, k: usize) -> bool {
        if t.iter().all(|&c| c == 0) {
            return true;
        }
        if let Some(&b) = self.memo[k].get(&t) {
            return b;
        }
        let mut found = false;
        for idx in 0..self.roots[k].len() {
            let r = &self.roots[k][idx];
            if r.doubled.iter().zip(&t).all(|(a, b)| a <= b) {
                let rest: Vec<i64> = t.iter().zip(&r.doubled).map(|(a, b)| a - b).collect();
                if self.go(rest, k) {
                    found = true;
                    break;
                }
            }
        }
        self.memo[k].insert(t, found);
        found
    }

    /// Every split `w = jk` has `||j||` in the lower cone and `||k||` in the upper cone.
    pub fn is_cuspidal(&mut self, w: &Word) -> Result<bool> {
        let w = w.expand();
        let content = word_content(&w, self.ell)?;
        let delta = RootVector::delta(self.ell);
        let d = content.doubled[self.ell] / 2;
        if d <= 0 || content != delta.scale(d) {
            return Err(SpinError::NotDeltaMultiple);
        }
        let mut prefix = RootVector::zero(self.ell);
        for cut in 0..=w.len() {
            if cut > 0 {
                prefix.add_simple(w.letters[cut - 1], 1);
            }
            let suffix = &content - &prefix;
            if !self.member(&prefix, ConeSide::AtMostDelta)?
                || !self.member(&suffix, ConeSide::AtLeastDelta)?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn cone_member(theta: &RootVector, side: ConeSide) -> Result<bool> {
    ConeChecker::new(theta.ell()).member(theta, side)
}

pub fn is_cuspidal(w: &Word, ell: usize) -> Result<bool> {
    ConeChecker::new(ell).is_cuspidal(w)
}

// ---------------------------------------------------------------------------
// Explicit cuspidal words of content delta

/// `j^i = (l-1)(l-2)...1 0 0 1 ... (i-1)` and `k^i = (l-1) ... i`.
pub fn shuffle_pieces(ell: usize, i: usize) -> (Vec<usize>, Vec<usize>) {
    let mut j: Vec<usize> = (0..ell).rev().collect();
    j.extend(0..i);
    let k: Vec<usize> = (i..ell).rev().collect();
    (j, k)
}

/// All shuffles of two sequences.
pub fn shuffles(a: &[usize], b: &[usize]) -> Vec<Vec<usize>> {
    fn rec(a: &[usize], b: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if a.is_empty() && b.is_empty() {
            out.push(cur.clone());
            return;
        }
        if let Some((&x, rest)) = a.split_first() {
            cur.push(x);
            rec(rest, b, cur, out);
            cur.pop();
        }
        if let Some((&x, rest)) = b.split_first() {
            cur.push(x);
            rec(a, rest, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(a, b, &mut Vec::new(), &mut out);
    out
}

/// Words `l` followed by a shuffle of `j^i` and `k^i` for some `1 <= i <= l`.
pub fn explicit_cuspidal_words(ell: usize) -> HashSet<Vec<usize>> {
    let mut out = HashSet::new();
    for i in 1..=ell {
        let (j, k) = shuffle_pieces(ell, i);
        for s in shuffles(&j, &k) {
            let mut w = vec![ell];
            w.extend(s);
            out.insert(w);
        }
    }
    out
}

/// All distinct words with the given multiset content.
pub fn words_of_content(theta: &RootVector) -> Vec<Vec<usize>> {
    let mut counts: Vec<usize> = theta.coeffs().expect("integral content").iter().map(|&c| c as usize).collect();
    let n: usize = counts.iter().sum();
    let mut out = Vec::new();
    fn rec(counts: &mut [usize], cur: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..counts.len() {
            if counts[i] > 0 {
                counts[i] -= 1;
                cur.push(i);
                rec(counts, cur, n, out);
                cur.pop();
                counts[i] += 1;
            }
        }
    }
    rec(&mut counts, &mut Vec::new(), n, &mut out);
    out
}

/// Gelfand-Graev divided word `l (l-1)^(2) ... (i+1)^(2) i ... 1 0^(2) 1 ... i`.
pub fn gg_piece(ell: usize, i: usize) -> Result<Word> {
    if i >= ell {
        return Err(SpinError::Invalid(format!("Gelfand-Graev index {i} must be < {ell}")));
    }
    let mut letters = vec![ell];
    let mut exps = vec![1];
    for k in (i + 1..ell).rev() {
        letters.push(k);
        exps.push(2);
    }
    for k in (1..=i).rev() {
        letters.push(k);
        exps.push(1);
    }
    letters.push(0);
    exps.push(2);
    for k in 1..=i {
        letters.push(k);
        exps.push(1);
    }
    Word::divided(letters, exps)
}

/// Concatenation of Gelfand-Graev pieces for each index in `seq`.
pub fn gg_word(ell: usize, seq: &[usize]) -> Result<Word> {
    let mut w = Word::divided(vec![], vec![])?;
    for &i in seq {
        w = w.concat(&gg_piece(ell, i)?);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gram_values() {
        for ell in 1..5 {
            let a0 = RootVector::simple(ell, 0);
            let al = RootVector::simple(ell, ell);
            let d = RootVector::delta(ell);
            assert_eq!(pairing(&a0, &a0).unwrap(), 2);
            assert_eq!(pairing(&al, &al).unwrap(), 8);
            assert_eq!(pairing(&d, &d).unwrap(), 0);
            for i in 0..=ell {
                assert_eq!(pairing(&d, &RootVector::simple(ell, i)).unwrap(), 0);
            }
            assert_eq!(d.height().unwrap(), Rational64::from_integer(p_of(ell) as i64));
            assert_eq!(d.scale(2).height().unwrap(), Rational64::from_integer(2 * p_of(ell) as i64));
        }
        assert!(pairing(&RootVector::zero(1), &RootVector::zero(2)).is_err());
    }

    #[test]
    fn central_element_pairings() {
        // <K, alpha_j> = 0 and <K, Lambda_0> = 1
        for ell in 1..5 {
            let marks = coroot_marks(ell);
            for j in 0..=ell {
                let s: i64 = (0..=ell)
                    .map(|i| marks[i] * coroot_pairing(i, &RootVector::simple(ell, j)).unwrap())
                    .sum();
                assert_eq!(s, 0);
            }
            let lam0: i64 = (0..=ell)
                .map(|i| marks[i] * 2 * fundamental_pairing(ell, i, 0) / simple_norm(ell, i))
                .sum();
            assert_eq!(lam0, 1);
        }
    }

    #[test]
    fn words_and_content() {
        let w = Word::parse("010").unwrap();
        assert_eq!(word_content(&w, 1).unwrap(), RootVector::from_coeffs(&[2, 1]));
        assert!(word_content(&Word::new(vec![]), 2).unwrap().is_zero());
        assert!(word_content(&Word::parse("3").unwrap(), 2).is_err());
        let w = Word::parse("2,1^2,0^2").unwrap();
        assert_eq!(w.expand().letters, vec![2, 1, 1, 0, 0]);
        assert_eq!(Word::parse(&w.render(2)).unwrap(), w);
    }

    #[test]
    fn gelfand_graev_expansions() {
        assert_eq!(gg_piece(2, 0).unwrap().expand().letters, vec![2, 1, 1, 0, 0]);
        assert_eq!(gg_piece(2, 1).unwrap().expand().letters, vec![2, 1, 0, 0, 1]);
        assert!(gg_piece(2, 2).is_err());
        for ell in 1..5 {
            for i in 0..ell {
                let w = gg_piece(ell, i).unwrap();
                assert_eq!(word_content(&w, ell).unwrap(), RootVector::delta(ell));
                assert!(is_cuspidal(&w, ell).unwrap());
            }
            let w = gg_word(ell, &[0, ell - 1]).unwrap();
            assert_eq!(word_content(&w, ell).unwrap(), RootVector::delta(ell).scale(2));
        }
    }

    #[test]
    fn small_heights() {
        for ell in 1..4 {
            let r = positive_roots_up_to(1, ell);
            let simple: Vec<_> = (0..=ell).map(|i| RootVector::simple(ell, i)).collect();
            assert_eq!(r, simple);
            let all = positive_roots_up_to(3 * p_of(ell), ell);
            let d = RootVector::delta(ell);
            assert_eq!(all.iter().filter(|x| **x == d).count(), 1);
            let half = RootVector::from_coeffs(&vec![1; ell + 1]);
            assert!(all.contains(&half));
            assert!(!positive_roots_up_to(ell, ell).contains(&half));
            assert!(all.iter().all(|r| r.is_integral()));
        }
    }

    #[test]
    fn preorder_examples() {
        for ell in 1..4 {
            let d = RootVector::delta(ell);
            let a0 = RootVector::simple(ell, 0);
            assert_eq!(compare_preorder(&d, &d.scale(2)).unwrap(), Ordering::Equal);
            assert_eq!(compare_preorder(&a0, &d).unwrap(), Ordering::Greater);
            assert_eq!(classify_vs_delta(&a0).unwrap(), DeltaSide::Above);
            assert_eq!(classify_vs_delta(&d).unwrap(), DeltaSide::Imaginary);
            assert_eq!(classify_vs_delta(&(&d - &a0)).unwrap(), DeltaSide::Below);
            for j in 1..ell {
                assert_eq!(classify_vs_delta(&RootVector::simple(ell, j)).unwrap(), DeltaSide::Above);
            }
            assert!(compare_preorder(&a0.scale(2), &d).is_err());
        }
    }

    #[test]
    fn cone_examples() {
        let mut cc = ConeChecker::new(3);
        for side in [ConeSide::AtMostDelta, ConeSide::AtLeastDelta] {
            assert!(cc.member(&RootVector::zero(3), side).unwrap());
            assert!(cc.member(&RootVector::delta(3), side).unwrap());
        }
        // a word starting 3 2 1 1 is not cuspidal; its prefix leaves the lower cone
        let prefix = word_content(&Word::parse("3211").unwrap(), 3).unwrap();
        assert!(!cc.member(&prefix, ConeSide::AtMostDelta).unwrap());
    }

    #[test]
    fn cuspidal_words_match_shuffles() {
        for ell in 1..=3 {
            let mut cc = ConeChecker::new(ell);
            let expected = explicit_cuspidal_words(ell);
            for w in words_of_content(&RootVector::delta(ell)) {
                let c = cc.is_cuspidal(&Word::new(w.clone())).unwrap();
                assert_eq!(c, expected.contains(&w), "{w:?}");
                if w[0] != ell {
                    assert!(!c);
                }
            }
        }
        assert!(is_cuspidal(&Word::parse("01").unwrap(), 1).is_err());
    }

    #[test]
    fn shuffles_of_cuspidal_words_stay_cuspidal() {
        let ell = 2;
        let cus: Vec<Vec<usize>> = explicit_cuspidal_words(ell).into_iter().collect();
        let mut cc = ConeChecker::new(ell);
        for a in cus.iter().take(3) {
            for b in cus.iter().take(3) {
                for s in shuffles(a, b).into_iter().step_by(7) {
                    assert!(cc.is_cuspidal(&Word::new(s)).unwrap());
                }
            }
        }
    }

    #[test]
    fn json_shapes() {
        let v = RootVector::from_coeffs(&[2, 1]);
        assert_eq!(serde_json::to_string(&v).unwrap(), "[2,1]");
        let h = RootVector::from_doubled(vec![1, 3]);
        let js = serde_json::to_string(&h).unwrap();
        assert_eq!(js, r#"{"coords":[1,3],"half":true}"#);
        assert_eq!(serde_json::from_str::<RootVector>(&js).unwrap(), h);
    }

    #[test]
    fn convexity_on_root_sums() {
        for ell in 1..4 {
            let roots = positive_roots_up_to(2 * p_of(ell), ell);
            let set: HashSet<&RootVector> = roots.iter().collect();
            for x in &roots {
                for y in &roots {
                    let s = x + y;
                    if !set.contains(&s) {
                        continue;
                    }
                    let (lo, hi) = if compare_raw(x, y) != Ordering::Greater { (x, y) } else { (y, x) };
                    assert_ne!(compare_raw(lo, &s), Ordering::Greater);
                    assert_ne!(compare_raw(&s, hi), Ordering::Greater);
                }
            }
        }
    }

    fn root_strategy() -> impl Strategy<Value = (usize, usize, usize)> {
        (1usize..4).prop_flat_map(|ell| {
            let n = positive_roots_up_to(4 * p_of(ell), ell).len();
            (Just(ell), 0..n, 0..n)
        })
    }

    proptest! {
        #[test]
        fn classification_agrees_with_preorder((ell, a, _b) in root_strategy()) {
            let roots = positive_roots_up_to(4 * p_of(ell), ell);
            let beta = &roots[a];
            let d = RootVector::delta(ell);
            let side = classify_vs_delta(beta).unwrap();
            let ord = compare_preorder(beta, &d).unwrap();
            let expect = match side {
                DeltaSide::Above => Ordering::Greater,
                DeltaSide::Below => Ordering::Less,
                DeltaSide::Imaginary => Ordering::Equal,
            };
            prop_assert_eq!(ord, expect);
        }

        #[test]
        fn chi_is_linear(ell in 1usize..4, a in prop::collection::vec(-3i64..4, 4), b in prop::collection::vec(-3i64..4, 4)) {
            let x = RootVector::from_coeffs(&a[..=ell]);
            let y = RootVector::from_coeffs(&b[..=ell]);
            let sum: Vec<Rational64> = chi(&x).vec.iter().zip(&chi(&y).vec).map(|(p, q)| p + q).collect();
            prop_assert_eq!(chi(&(&x + &y)).vec, sum);
            if !x.is_zero() {
                prop_assert!(chi(&x).vec.iter().any(|c| !c.is_zero()));
            }
        }
    }
}
