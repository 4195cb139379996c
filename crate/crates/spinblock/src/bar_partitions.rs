//! p-strict partitions, bar abaci, bar cores and quotients.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::laurent::LaurentPoly;
use crate::root_datum::{ell_of, RootVector};

/// Weakly decreasing sequence of positive integers.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = SpinError;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.parts
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl Partition {
    /// Trailing zeros are dropped; anything else out of order is rejected.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(SpinError::MalformedPartition(parts));
        }
        Ok(Self { parts })
    }

    /// Sorts the input first.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn height(&self) -> usize {
        self.parts.len()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Row length (1-based row, 0 beyond the last row).
    pub fn row(&self, r: usize) -> usize {
        if r == 0 {
            return usize::MAX;
        }
        self.parts.get(r - 1).copied().unwrap_or(0)
    }

    pub fn contains_node(&self, r: usize, c: usize) -> bool {
        r >= 1 && c >= 1 && self.row(r) >= c
    }

    pub fn is_strict(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }

    pub fn is_p_strict(&self, p: usize) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1] || w[0] % p == 0)
    }

    pub fn is_restricted(&self, p: usize) -> bool {
        if !self.is_p_strict(p) {
            return false;
        }
        (0..self.parts.len()).all(|k| {
            let next = self.parts.get(k + 1).copied().unwrap_or(0);
            let gap = self.parts[k] - next;
            if self.parts[k] % p == 0 {
                gap < p
            } else {
                gap <= p
            }
        })
    }

    /// `mu` is contained in `self` as Young diagrams.
    pub fn contains(&self, mu: &Partition) -> bool {
        mu.height() <= self.height() && mu.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// Collected form `(l_1^{m_1}, ..., l_k^{m_k})`.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &x in &self.parts {
            match out.last_mut() {
                Some((l, m)) if *l == x => *m += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    /// Set row `r` (1-based) to `len`, re-validating shape.
    pub fn with_row(&self, r: usize, len: usize) -> Option<Partition> {
        let mut parts = self.parts.clone();
        if r > parts.len() + 1 || r == 0 {
            return None;
        }
        if r == parts.len() + 1 {
            parts.push(len);
        } else {
            parts[r - 1] = len;
        }
        Partition::new(parts).ok()
    }

    pub fn conjugate(&self) -> Partition {
        let n = self.parts.first().copied().unwrap_or(0);
        Partition { parts: (1..=n).map(|c| self.parts.iter().filter(|&&x| x >= c).count()).collect() }
    }

    pub fn require_p_strict(&self, p: usize) -> Result<()> {
        if self.is_p_strict(p) {
            Ok(())
        } else {
            Err(SpinError::NotPStrict(self.parts.clone(), p))
        }
    }
}

/// Tuple of partitions.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multipartition {
    pub components: Vec<Partition>,
}

impl fmt::Debug for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c:?}")?;
        }
        write!(f, ")")
    }
}

impl Multipartition {
    pub fn new(components: Vec<Partition>) -> Self {
        Self { components }
    }

    pub fn empty(level: usize) -> Self {
        Self { components: vec![Partition::empty(); level] }
    }

    pub fn single(p: Partition) -> Self {
        Self { components: vec![p] }
    }

    pub fn level(&self) -> usize {
        self.components.len()
    }

    pub fn size(&self) -> usize {
        self.components.iter().map(Partition::size).sum()
    }

    /// Total number of nonzero parts.
    pub fn height(&self) -> usize {
        self.components.iter().map(Partition::height).sum()
    }

    pub fn is_p_strict(&self, p: usize) -> bool {
        self.components.iter().all(|c| c.is_p_strict(p))
    }

    pub fn is_strict(&self) -> bool {
        self.components.iter().all(Partition::is_strict)
    }
}

// ---------------------------------------------------------------------------
// Residues, contents, norms

/// Residue of a node in column `col` (1-based): pattern `0,1,..,l,..,1,0` repeating.
pub fn residue_of_col(col: usize, p: usize) -> usize {
    let k = (col - 1) % p;
    k.min(p - 1 - k)
}

pub fn residue(_row: usize, col: usize, p: usize) -> usize {
    residue_of_col(col, p)
}

pub fn content(lambda: &Partition, p: usize) -> Result<RootVector> {
    let ell = ell_of(p)?;
    let mut v = RootVector::zero(ell);
    for &len in lambda.parts() {
        for c in 1..=len {
            v.add_simple(residue_of_col(c, p), 1);
        }
    }
    Ok(v)
}

pub fn multi_content(m: &Multipartition, p: usize) -> Result<RootVector> {
    let mut v = RootVector::zero(ell_of(p)?);
    for c in &m.components {
        v = &v + &content(c, p)?;
    }
    Ok(v)
}

/// `prod_{r: p | l_r} prod_{s=1}^{m_r} (1 - (-q^2)^s)`
pub fn norm_poly(lambda: &Partition, p: usize) -> LaurentPoly {
    let mut out = LaurentPoly::one();
    for (l, m) in lambda.runs() {
        if l % p == 0 {
            for s in 1..=m {
                out = &out * &zeta_factor(s);
            }
        }
    }
    out
}

/// `1 - (-q^2)^m`
pub fn zeta_factor(m: usize) -> LaurentPoly {
    let sign = if m % 2 == 0 { -1 } else { 1 };
    LaurentPoly::from_terms([(0, 1), (2 * m as i32, sign)])
}

pub fn multi_norm(m: &Multipartition, p: usize) -> LaurentPoly {
    m.components.iter().map(|c| norm_poly(c, p)).product()
}

// ---------------------------------------------------------------------------
// Abacus

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Abacus {
    pub p: usize,
    /// position -> multiplicity
    pub beads: BTreeMap<usize, usize>,
    pub bead_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlideDirection {
    Up,
    Down,
}

impl Abacus {
    pub fn runner_of(&self, pos: usize) -> usize {
        pos % self.p
    }

    pub fn occupied(&self, pos: usize) -> bool {
        self.beads.get(&pos).copied().unwrap_or(0) > 0
    }

    pub fn multiplicity(&self, pos: usize) -> usize {
        self.beads.get(&pos).copied().unwrap_or(0)
    }

    /// Rows of beads on runner `j`, with repetition, ascending.
    pub fn runner_rows(&self, j: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (&pos, &m) in &self.beads {
            if pos % self.p == j {
                out.extend(std::iter::repeat_n(pos / self.p, m));
            }
        }
        out
    }

    /// `b_j`: beads on runner `j`, not counting row 0 of runner 0.
    pub fn b(&self, j: usize) -> usize {
        self.beads.iter().filter(|(&pos, _)| pos % self.p == j && pos > 0).map(|(_, &m)| m).sum()
    }

    pub fn check(&self) -> Result<()> {
        if let Some((&pos, _)) = self.beads.iter().find(|(&pos, &m)| pos % self.p != 0 && m > 1) {
            return Err(SpinError::Invalid(format!("position {pos} holds more than one bead")));
        }
        let total: usize = self.beads.values().sum();
        if total != self.bead_count {
            return Err(SpinError::Invalid("bead count does not match".into()));
        }
        Ok(())
    }

    fn remove_bead(&mut self, pos: usize) {
        let m = self.beads.get_mut(&pos).expect("bead present");
        *m -= 1;
        if *m == 0 {
            self.beads.remove(&pos);
        }
    }

    fn add_bead(&mut self, pos: usize) {
        *self.beads.entry(pos).or_insert(0) += 1;
    }

    /// Move one bead at `pos` by `p` positions.
    pub fn slide(&self, pos: usize, dir: SlideDirection, strict: bool) -> Result<Abacus> {
        if !self.occupied(pos) {
            return Err(SpinError::IllegalSlide(format!("no bead at position {pos}")));
        }
        let target = match dir {
            SlideDirection::Down => pos + self.p,
            SlideDirection::Up => pos
                .checked_sub(self.p)
                .ok_or_else(|| SpinError::IllegalSlide(format!("position {pos} is in row 0")))?,
        };
        let on_zero = pos % self.p == 0;
        if self.occupied(target) && (strict || !on_zero) {
            return Err(SpinError::IllegalSlide(format!("position {target} is occupied")));
        }
        let mut out = self.clone();
        out.remove_bead(pos);
        out.add_bead(target);
        Ok(out)
    }
}

pub fn to_abacus(lambda: &Partition, p: usize, n: usize) -> Result<Abacus> {
    ell_of(p)?;
    if n < lambda.height() {
        return Err(SpinError::TooFewBeads { beads: n, parts: lambda.height() });
    }
    lambda.require_p_strict(p)?;
    let mut beads = BTreeMap::new();
    for &x in lambda.parts() {
        *beads.entry(x).or_insert(0) += 1;
    }
    if n > lambda.height() {
        beads.insert(0, n - lambda.height());
    }
    Ok(Abacus { p, beads, bead_count: n })
}

pub fn from_abacus(a: &Abacus) -> Result<Partition> {
    a.check()?;
    let mut parts = Vec::new();
    for (&pos, &m) in a.beads.iter().rev() {
        if pos > 0 {
            parts.extend(std::iter::repeat_n(pos, m));
        }
    }
    Partition::new(parts)
}

/// Bead count used when none is given: `h + wt + 1`.
pub fn default_bead_count(lambda: &Partition, p: usize) -> Result<usize> {
    Ok(lambda.height() + bar_weight(lambda, p)? + 1)
}

/// `b_j^lambda`: number of positive parts congruent to `j` mod `p`.
pub fn b_counts(lambda: &Partition, p: usize) -> Vec<usize> {
    let mut b = vec![0; p];
    for &x in lambda.parts() {
        b[x % p] += 1;
    }
    b
}

// ---------------------------------------------------------------------------
// Cores, weights, quotients

/// Bar core from bead counts: runner 0 emptied, runners `j`/`p-j` cancelled, beads packed up.
pub fn bar_core(lambda: &Partition, p: usize) -> Result<Partition> {
    ell_of(p)?;
    lambda.require_p_strict(p)?;
    let b = b_counts(lambda, p);
    let mut parts = Vec::new();
    for j in 1..p {
        let c = b[j] - b[j].min(b[p - j]);
        parts.extend((0..c).map(|r| j + r * p));
    }
    Ok(Partition::from_unsorted(parts))
}

/// One available bar removal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BarRemoval {
    /// Subtract `p` from the part at this index.
    Shorten(usize),
    /// Delete the two parts at these indices (they sum to `p`).
    Pair(usize, usize),
}

pub fn bar_removals(lambda: &Partition, p: usize) -> Vec<BarRemoval> {
    let parts = lambda.parts();
    let mut out = Vec::new();
    for (k, &x) in parts.iter().enumerate() {
        if x >= p && (x % p == 0 || !parts.contains(&(x - p))) {
            // skip duplicates of equal multiples of p
            if k == 0 || parts[k - 1] != x {
                out.push(BarRemoval::Shorten(k));
            }
        }
    }
    for a in 0..parts.len() {
        for b in a + 1..parts.len() {
            if parts[a] + parts[b] == p {
                out.push(BarRemoval::Pair(a, b));
            }
        }
    }
    out
}

pub fn apply_removal(lambda: &Partition, p: usize, r: &BarRemoval) -> Partition {
    let mut parts = lambda.parts().to_vec();
    match *r {
        BarRemoval::Shorten(k) => parts[k] -= p,
        BarRemoval::Pair(a, b) => {
            parts[a] = 0;
            parts[b] = 0;
        }
    }
    Partition::from_unsorted(parts)
}

/// Core by repeated removals; `choose(n)` picks which of `n` available moves to apply.
pub fn bar_core_greedy(lambda: &Partition, p: usize, mut choose: impl FnMut(usize) -> usize) -> Result<Partition> {
    lambda.require_p_strict(p)?;
    let mut cur = lambda.clone();
    loop {
        let moves = bar_removals(&cur, p);
        if moves.is_empty() {
            return Ok(cur);
        }
        let k = choose(moves.len()) % moves.len();
        cur = apply_removal(&cur, p, &moves[k]);
    }
}

pub fn is_bar_core(lambda: &Partition, p: usize) -> bool {
    lambda.is_p_strict(p) && bar_removals(lambda, p).is_empty()
}

pub fn bar_weight(lambda: &Partition, p: usize) -> Result<usize> {
    let core = bar_core(lambda, p)?;
    Ok((lambda.size() - core.size()) / p)
}

/// For the runner pair `(j, p-j)`: the runner carrying the surplus and the surplus size.
fn charge(b: &[usize], p: usize, j: usize) -> (usize, usize) {
    if b[j] >= b[p - j] {
        (j, b[j] - b[p - j])
    } else {
        (p - j, b[p - j] - b[j])
    }
}

/// Bar quotient `(lambda^(0), ..., lambda^(l))`.
pub fn bar_quotient(lambda: &Partition, p: usize) -> Result<Multipartition> {
    let ell = ell_of(p)?;
    lambda.require_p_strict(p)?;
    let b = b_counts(lambda, p);
    let mut comps = Vec::with_capacity(ell + 1);
    comps.push(Partition::from_unsorted(
        lambda.parts().iter().filter(|&&x| x % p == 0).map(|&x| x / p).collect(),
    ));
    for j in 1..=ell {
        let (a, s) = charge(&b, p, j);
        let other = p - a;
        let rows_a: Vec<i64> = lambda.parts().iter().filter(|&&x| x % p == a).map(|&x| (x / p) as i64).collect();
        let rows_o: Vec<i64> = lambda.parts().iter().filter(|&&x| x % p == other).map(|&x| (x / p) as i64).collect();
        let depth = rows_o.iter().copied().max().unwrap_or(0) + 2;
        // Maya set: rows of runner a, and negatives except -1-b for rows b of the other runner
        let mut xs: Vec<i64> = rows_a;
        xs.extend((1..=depth + s as i64 + rows_o.len() as i64 + 2).map(|m| -m).filter(|m| !rows_o.contains(&(-1 - m))));
        xs.sort_unstable_by(|x, y| y.cmp(x));
        let parts: Vec<usize> = xs
            .iter()
            .enumerate()
            .map(|(k, &x)| x + (k as i64 + 1) - s as i64)
            .take_while(|&v| v > 0)
            .map(|v| v as usize)
            .collect();
        comps.push(Partition::new(parts)?);
    }
    Ok(Multipartition::new(comps))
}

/// Rebuilds `lambda` from its core and quotient.
pub fn quotient_inverse(rho: &Partition, quot: &Multipartition, p: usize) -> Result<Partition> {
    let ell = ell_of(p)?;
    if !is_bar_core(rho, p) {
        return Err(SpinError::NotCore(rho.parts().to_vec(), p));
    }
    if quot.level() != ell + 1 {
        return Err(SpinError::Invalid(format!("quotient must have {} components", ell + 1)));
    }
    let b = b_counts(rho, p);
    let mut parts: Vec<usize> = quot.components[0].parts().iter().map(|&r| r * p).collect();
    for j in 1..=ell {
        let (a, s) = charge(&b, p, j);
        let other = p - a;
        let q = &quot.components[j];
        let len = q.height() as i64;
        let s = s as i64;
        let kmax = len + s + 1;
        let xs: Vec<i64> = (1..=kmax).map(|k| q.row(k as usize) as i64 - k + s).collect();
        for &x in &xs {
            if x >= 0 {
                parts.push(x as usize * p + a);
            }
        }
        // negatives below s - len are all present; gaps above that are rows of the other runner
        for m in (s - len).min(-1)..=-1 {
            if !xs.contains(&m) {
                let row = -1 - m;
                parts.push(row as usize * p + other);
            }
        }
    }
    Ok(Partition::from_unsorted(parts))
}

// ---------------------------------------------------------------------------
// Enumeration

/// Partitions of `n` in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn p_strict_partitions(n: usize, p: usize) -> Vec<Partition> {
    partitions(n).into_iter().filter(|l| l.is_p_strict(p)).collect()
}

pub fn strict_partitions(n: usize) -> Vec<Partition> {
    partitions(n).into_iter().filter(Partition::is_strict).collect()
}

/// All `k`-multipartitions of `n`.
pub fn multipartitions(n: usize, k: usize) -> Vec<Multipartition> {
    fn rec(n: usize, k: usize, cur: &mut Vec<Partition>, out: &mut Vec<Multipartition>) {
        if k == 1 {
            for l in partitions(n) {
                cur.push(l);
                out.push(Multipartition::new(cur.clone()));
                cur.pop();
            }
            return;
        }
        for m in (0..=n).rev() {
            for l in partitions(m) {
                cur.push(l);
                rec(n - m, k - 1, cur, out);
                cur.pop();
            }
        }
    }
    if k == 0 {
        return if n == 0 { vec![Multipartition::default()] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// All level-`k` multipartitions of `n` with every component p-strict.
pub fn p_strict_multipartitions(n: usize, k: usize, p: usize) -> Vec<Multipartition> {
    multipartitions(n, k).into_iter().filter(|m| m.is_p_strict(p)).collect()
}

/// `P_p(rho, d)`: p-strict partitions with core `rho` and weight `d`, sorted.
pub fn block_partitions(rho: &Partition, p: usize, d: usize) -> Result<Vec<Partition>> {
    let ell = ell_of(p)?;
    let mut out = Vec::new();
    for q in multipartitions(d, ell + 1) {
        out.push(quotient_inverse(rho, &q, p)?);
    }
    out.sort();
    Ok(out)
}

/// `P_0(rho, d)`: the strict members of `P_p(rho, d)`.
pub fn strict_block_partitions(rho: &Partition, p: usize, d: usize) -> Result<Vec<Partition>> {
    Ok(block_partitions(rho, p, d)?.into_iter().filter(Partition::is_strict).collect())
}

// ---------------------------------------------------------------------------
// Rouquier cores

pub fn is_rouquier(rho: &Partition, p: usize, d: usize) -> Result<bool> {
    let ell = ell_of(p)?;
    if !is_bar_core(rho, p) {
        return Err(SpinError::NotCore(rho.parts().to_vec(), p));
    }
    if d == 0 {
        return Ok(true);
    }
    let b = b_counts(rho, p);
    let d = d as i64;
    Ok(b[1] as i64 >= d && (2..=ell).all(|j| b[j] as i64 - b[j - 1] as i64 >= d - 1))
}

/// Smallest core with `b_j = d + (j-1)(d-1)` beads packed on runner `j`, `1 <= j <= l`.
pub fn rouquier_core(p: usize, d: usize) -> Result<Partition> {
    let ell = ell_of(p)?;
    if d == 0 {
        return Ok(Partition::empty());
    }
    let mut parts = Vec::new();
    for j in 1..=ell {
        let bj = d + (j - 1) * (d - 1);
        parts.extend((0..bj).map(|r| j + r * p));
    }
    Ok(Partition::from_unsorted(parts))
}

/// All bar cores of size `n`.
pub fn bar_cores(n: usize, p: usize) -> Vec<Partition> {
    p_strict_partitions(n, p).into_iter().filter(|l| is_bar_core(l, p)).collect()
}
