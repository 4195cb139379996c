//! The twisted group superalgebra `T_n` over finite fields: products, spin
//! Jucys-Murphy elements, weight idempotents and superblocks, the Sergeev
//! isomorphism and twisted wreath superproducts.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;
use serde::Serialize;

use crate::bar_partitions::{bar_core, content, p_strict_partitions, strict_partitions, Partition};
use crate::dims::strict_kostka;
use crate::error::{Result, SpinError};
use crate::root_datum::{ell_of, word_content, RootVector, Word};
use crate::super_algebra::{
    add_into, basis_elem, compose, permutations, permute_tensor, reduced_word, tensor, tensor_power_mul,
    transposition, Coeff, Elem, Perm, SuperAlgebra, TableAlgebra, Wreath,
};

pub trait Scalar:
    Copy + PartialEq + Debug + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// `k` in the same ring as `self`.
    fn from_int(&self, k: i64) -> Self;
    fn is_zero(&self) -> bool;
}

/// Residue modulo `m`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize)]
pub struct Zmod {
    pub v: u64,
    #[serde(skip)]
    pub m: u64,
}

impl Zmod {
    pub fn new(k: i64, m: u64) -> Self {
        Self { v: k.rem_euclid(m as i64) as u64, m }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = self.from_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for Zmod {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { v: (self.v + o.v) % self.m, m: self.m }
    }
}
impl Sub for Zmod {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { v: (self.v + self.m - o.v) % self.m, m: self.m }
    }
}
impl Mul for Zmod {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { v: ((self.v as u128 * o.v as u128) % self.m as u128) as u64, m: self.m }
    }
}
impl Neg for Zmod {
    type Output = Self;
    fn neg(self) -> Self {
        Self { v: (self.m - self.v) % self.m, m: self.m }
    }
}
impl Scalar for Zmod {
    fn from_int(&self, k: i64) -> Self {
        Zmod::new(k, self.m)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
}

fn is_odd_prime(p: usize) -> bool {
    p >= 3 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn require_prime(p: usize) -> Result<()> {
    if is_odd_prime(p) && p < (1 << 16) {
        Ok(())
    } else {
        Err(SpinError::UnsupportedPrime(p))
    }
}

/// `a + b x` in `F_p[x]/(x^2 - nu)`, `nu` the least non-residue.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Fq {
    pub a: u32,
    pub b: u32,
    pub p: u32,
    pub nu: u32,
}

impl Fq {
    pub fn field(p: usize) -> Result<Fq> {
        require_prime(p)?;
        let p = p as u32;
        let squares: Vec<u32> = (1..p).map(|x| x * x % p).collect();
        let nu = (2..p).find(|k| !squares.contains(k)).expect("non-residue exists");
        Ok(Fq { a: 0, b: 0, p, nu })
    }

    pub fn elem(&self, a: i64, b: i64) -> Fq {
        let p = self.p as i64;
        Fq { a: a.rem_euclid(p) as u32, b: b.rem_euclid(p) as u32, ..*self }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.p as i64).flat_map(move |a| (0..self.p as i64).map(move |b| self.elem(a, b)))
    }

    pub fn inv(self) -> Option<Fq> {
        let p = self.p as u64;
        let (a, b) = (self.a as u64, self.b as u64);
        let norm = (a * a + p * p - (self.nu as u64 * b % p) * b % p) % p;
        if norm == 0 {
            return None;
        }
        let ninv = Zmod::new(norm as i64, p).pow(p - 2).v as i64;
        Some(self.elem(a as i64 * ninv, -(b as i64) * ninv))
    }

    pub fn sqrt(self) -> Option<Fq> {
        self.elements().find(|&y| y * y == self)
    }
}

impl Add for Fq {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fq { a: (self.a + o.a) % self.p, b: (self.b + o.b) % self.p, ..self }
    }
}
impl Sub for Fq {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}
impl Mul for Fq {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = self.p as u64;
        let (a, b, c, d) = (self.a as u64, self.b as u64, o.a as u64, o.b as u64);
        let re = (a * c + (b * d % p) * self.nu as u64) % p;
        let im = (a * d + b * c) % p;
        Fq { a: re as u32, b: im as u32, ..self }
    }
}
impl Neg for Fq {
    type Output = Self;
    fn neg(self) -> Self {
        Fq { a: (self.p - self.a) % self.p, b: (self.p - self.b) % self.p, ..self }
    }
}
impl Scalar for Fq {
    fn from_int(&self, k: i64) -> Self {
        self.elem(k, 0)
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

// ---------------------------------------------------------------------------
// The basis t_w and its multiplication table

/// `S_n` together with canonical reduced words and the sign table of
/// `t_v t_w = +-t_{vw}`.
pub struct TwistedGroup {
    pub n: usize,
    pub perms: Vec<Perm>,
    index: HashMap<Perm, usize>,
    /// `words[w] = (r_1, .., r_k)` with `t_w = t_{r_1} .. t_{r_k}` (0-based generators).
    pub words: Vec<Vec<usize>>,
    /// `left[r][w] = (index of s_r w, sign)`
    left: Vec<Vec<(usize, i8)>>,
    /// packed `(index << 1) | negative`
    table: Vec<u32>,
}

fn left_descent(w: &[usize]) -> Option<usize> {
    let pos = |v: usize| w.iter().position(|&x| x == v).expect("value");
    (0..w.len().saturating_sub(1)).find(|&r| pos(r) > pos(r + 1))
}

fn length(w: &[usize]) -> usize {
    let mut k = 0;
    for a in 0..w.len() {
        for b in a + 1..w.len() {
            if w[a] > w[b] {
                k += 1;
            }
        }
    }
    k
}

fn clifford_sign(s: u32, t: u32) -> bool {
    // parity of #{(a in s, b in t) : a > b}
    let mut k = 0;
    for b in 0..32 {
        if t >> b & 1 == 1 {
            k += (s >> (b + 1)).count_ones();
        }
    }
    k % 2 == 1
}

/// `t_r -> c_r - c_{r+1}` in the Clifford algebra, a representation on which
/// every `t_w` acts invertibly, so it fixes the signs.
fn clifford_mul(x: &[i64], y: &[i64]) -> Vec<i64> {
    let mut out = vec![0; x.len()];
    for (s, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (t, &b) in y.iter().enumerate() {
            if b != 0 {
                let sign = if clifford_sign(s as u32, t as u32) { -1 } else { 1 };
                out[s ^ t] += sign * a * b;
            }
        }
    }
    out
}

fn ratio_sign(x: &[i64], y: &[i64]) -> i8 {
    let k = y.iter().position(|&c| c != 0).expect("invertible image");
    assert!(x[k] != 0, "images not proportional");
    if (x[k] > 0) == (y[k] > 0) {
        1
    } else {
        -1
    }
}

impl TwistedGroup {
    pub fn new(n: usize) -> Self {
        let perms = permutations(n);
        let index: HashMap<Perm, usize> = perms.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let size = perms.len();
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by_key(|&i| length(&perms[i]));
        let dim = 1usize << n;
        let gen_image = |r: usize| {
            let mut v = vec![0i64; dim];
            v[1 << r] = 1;
            v[1 << (r + 1)] = -1;
            v
        };
        let mut words = vec![Vec::new(); size];
        let mut images = vec![Vec::new(); size];
        let mut id_img = vec![0i64; dim];
        id_img[0] = 1;
        images[order[0]] = id_img;
        for &w in &order[1..] {
            let r = left_descent(&perms[w]).expect("non-identity");
            let shorter = index[&compose(&transposition(n, r), &perms[w])];
            let mut word = vec![r];
            word.extend(&words[shorter]);
            words[w] = word;
            images[w] = clifford_mul(&gen_image(r), &images[shorter]);
        }
        let left: Vec<Vec<(usize, i8)>> = (0..n.saturating_sub(1))
            .map(|r| {
                let g = gen_image(r);
                (0..size)
                    .map(|w| {
                        let target = index[&compose(&transposition(n, r), &perms[w])];
                        (target, ratio_sign(&clifford_mul(&g, &images[w]), &images[target]))
                    })
                    .collect()
            })
            .collect();
        let mut table = vec![0u32; size * size];
        for &v in &order {
            if v == order[0] {
                for w in 0..size {
                    table[v * size + w] = (w as u32) << 1;
                }
                continue;
            }
            let r = words[v][0];
            let rest = index[&compose(&transposition(n, r), &perms[v])];
            for w in 0..size {
                let packed = table[rest * size + w];
                let (u, neg) = ((packed >> 1) as usize, packed & 1);
                let (u2, s) = left[r][u];
                table[v * size + w] = ((u2 as u32) << 1) | (neg ^ u32::from(s < 0));
            }
        }
        Self { n, perms, index, words, left, table }
    }

    pub fn size(&self) -> usize {
        self.perms.len()
    }

    pub fn index_of(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn identity(&self) -> usize {
        self.index[&(0..self.n).collect::<Perm>()]
    }

    pub fn generator(&self, r: usize) -> usize {
        self.index[&transposition(self.n, r)]
    }

    /// `t_v t_w = sign * t_u`
    pub fn product(&self, v: usize, w: usize) -> (usize, bool) {
        let packed = self.table[v * self.size() + w];
        ((packed >> 1) as usize, packed & 1 == 1)
    }

    pub fn left_generator(&self, r: usize, w: usize) -> (usize, i8) {
        self.left[r][w]
    }

    pub fn parity(&self, w: usize) -> u8 {
        (self.words[w].len() % 2) as u8
    }

    pub fn zero<K: Scalar>(&self, proto: K) -> TgElement<K> {
        TgElement { coeffs: vec![proto.from_int(0); self.size()] }
    }

    pub fn basis<K: Scalar>(&self, w: usize, proto: K) -> TgElement<K> {
        let mut x = self.zero(proto);
        x.coeffs[w] = proto.from_int(1);
        x
    }

    pub fn one<K: Scalar>(&self, proto: K) -> TgElement<K> {
        self.basis(self.identity(), proto)
    }

    /// `t_r`, generators numbered from 0.
    pub fn t<K: Scalar>(&self, r: usize, proto: K) -> TgElement<K> {
        self.basis(self.generator(r), proto)
    }

    pub fn mul<K: Scalar>(&self, x: &TgElement<K>, y: &TgElement<K>) -> TgElement<K> {
        let size = self.size();
        let zero = x.coeffs[0].from_int(0);
        let xs: Vec<(usize, K)> = x.support().collect();
        let ys: Vec<(usize, K)> = y.support().collect();
        let partial = |chunk: &[(usize, K)]| {
            let mut out = vec![zero; size];
            for &(v, a) in chunk {
                let row = &self.table[v * size..(v + 1) * size];
                for &(w, b) in &ys {
                    let packed = row[w];
                    let u = (packed >> 1) as usize;
                    let c = a * b;
                    out[u] = if packed & 1 == 1 { out[u] - c } else { out[u] + c };
                }
            }
            out
        };
        let add = |mut a: Vec<K>, b: Vec<K>| {
            for (s, t) in a.iter_mut().zip(b) {
                *s = *s + t;
            }
            a
        };
        #[cfg(feature = "parallel")]
        let coeffs = {
            use rayon::prelude::*;
            if xs.len() * ys.len() > 1 << 16 {
                xs.par_chunks(32).map(partial).reduce(|| vec![zero; size], add)
            } else {
                partial(&xs)
            }
        };
        #[cfg(not(feature = "parallel"))]
        let coeffs = {
            let _ = add;
            partial(&xs)
        };
        TgElement { coeffs }
    }

    pub fn pow<K: Scalar>(&self, x: &TgElement<K>, mut e: u64) -> TgElement<K> {
        let mut acc = self.one(x.coeffs[0]);
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `m_r` by `m_1 = 0, m_{r+1} = -t_r m_r t_r + t_r` (1-based `r`).
    pub fn jm<K: Scalar>(&self, r: usize, proto: K) -> TgElement<K> {
        let mut m = self.zero(proto);
        for k in 1..r {
            let t = self.t(k - 1, proto);
            m = self.mul(&self.mul(&t, &m), &t).scale(proto.from_int(-1)).add(&t);
        }
        m
    }

    /// `sum_{s<r} (-1)^{r-s-1} t_{r-1} .. t_{s+1} t_s t_{s+1} .. t_{r-1}` (1-based).
    pub fn jm_closed<K: Scalar>(&self, r: usize, proto: K) -> TgElement<K> {
        let mut m = self.zero(proto);
        for s in 1..r {
            let mut x = self.t(s - 1, proto);
            for k in s + 1..r {
                let t = self.t(k - 1, proto);
                x = self.mul(&self.mul(&t, &x), &t);
            }
            let sign = if (r - s - 1) % 2 == 0 { 1 } else { -1 };
            m = m.add(&x.scale(proto.from_int(sign)));
        }
        m
    }
}

/// Dense element of `T_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TgElement<K> {
    pub coeffs: Vec<K>,
}

impl<K: Scalar> TgElement<K> {
    pub fn support(&self) -> impl Iterator<Item = (usize, K)> + '_ {
        self.coeffs.iter().copied().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| a - b).collect() }
    }

    pub fn scale(&self, c: K) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&a| a * c).collect() }
    }

    /// Parity of every term, `None` for an inhomogeneous element.
    pub fn parity(&self, g: &TwistedGroup) -> Option<u8> {
        let mut pars = self.support().map(|(w, _)| g.parity(w));
        let first = pars.next().unwrap_or(0);
        pars.all(|q| q == first).then_some(first)
    }
}

// ---------------------------------------------------------------------------
// Weight idempotents and superblocks

/// Semisimple part `a^{p^k}` for `p^k` past the nilpotency index, followed by
/// eigenprojectors `1 - (s - lambda)^{p-1}`.
fn eigenprojectors(
    g: &TwistedGroup,
    a: &TgElement<Zmod>,
    p: u64,
    eigenvalues: &[Zmod],
) -> Result<Vec<TgElement<Zmod>>> {
    let mut s = a.clone();
    let mut span = 1u64;
    while span < g.size() as u64 {
        s = g.pow(&s, p);
        span = span.saturating_mul(p);
    }
    let proto = Zmod::new(0, p);
    let one = g.one(proto);
    let projectors: Vec<TgElement<Zmod>> = eigenvalues
        .iter()
        .map(|&lam| {
            let shifted = s.sub(&one.scale(lam));
            one.sub(&g.pow(&shifted, p - 1))
        })
        .collect();
    let total = projectors.iter().fold(g.zero(proto), |acc, x| acc.add(x));
    if total != one {
        // some eigenvalue lies outside the expected list; name one if it is in F_p
        let bad = (0..p)
            .find(|&lam| {
                !eigenvalues.contains(&Zmod::new(lam as i64, p)) && {
                    let shifted = s.sub(&one.scale(Zmod::new(lam as i64, p)));
                    !one.sub(&g.pow(&shifted, p - 1)).is_zero()
                }
            })
            .unwrap_or(p);
        return Err(SpinError::UnexpectedEigenvalue(bad));
    }
    Ok(projectors)
}

/// `e(i)` for all residue sequences with nonzero idempotent, ordered lexicographically.
pub fn weight_idempotents(g: &TwistedGroup, p: usize) -> Result<Vec<(Vec<usize>, TgElement<Zmod>)>> {
    require_prime(p)?;
    let ell = (p - 1) / 2;
    let proto = Zmod::new(0, p as u64);
    let eigenvalues: Vec<Zmod> = (0..=ell).map(|i| Zmod::new((i * (i + 1) / 2) as i64, p as u64)).collect();
    let mut current = vec![(Vec::new(), g.one(proto))];
    for r in 1..=g.n {
        let m = g.jm(r, proto);
        let sq = g.mul(&m, &m);
        let proj = eigenprojectors(g, &sq, p as u64, &eigenvalues)?;
        let mut next = Vec::new();
        for (seq, e) in &current {
            for (i, pi) in proj.iter().enumerate() {
                let x = g.mul(e, pi);
                if !x.is_zero() {
                    let mut s2 = seq.clone();
                    s2.push(i);
                    next.push((s2, x));
                }
            }
        }
        current = next;
    }
    Ok(current)
}

/// Lift an idempotent from `F_p` to `Z/p^k` by `e -> 3e^2 - 2e^3`.
fn lift_idempotent(g: &TwistedGroup, e: &TgElement<Zmod>, modulus: u64) -> TgElement<Zmod> {
    let mut x = TgElement { coeffs: e.coeffs.iter().map(|c| Zmod::new(c.v as i64, modulus)).collect() };
    let proto = Zmod::new(0, modulus);
    loop {
        let x2 = g.mul(&x, &x);
        if x2 == x {
            return x;
        }
        let x3 = g.mul(&x2, &x);
        x = x2.scale(proto.from_int(3)).sub(&x3.scale(proto.from_int(2)));
    }
}

/// `dim e T_n` for an idempotent `e` over `F_p`: the trace `n! e_1` of left
/// multiplication, read modulo `p^k > n!` after lifting.
pub fn idempotent_rank(g: &TwistedGroup, e: &TgElement<Zmod>, p: usize) -> u128 {
    let size = g.size() as u64;
    let mut modulus = p as u64;
    while modulus <= size {
        modulus *= p as u64;
    }
    let lifted = lift_idempotent(g, e, modulus);
    let trace = Zmod::new(0, modulus).from_int(size as i64) * lifted.coeffs[g.identity()];
    trace.v as u128
}

#[derive(Clone, Debug, Serialize)]
pub struct Superblock {
    pub theta: RootVector,
    pub dimension: u128,
    pub num_weight_words: usize,
    #[serde(skip)]
    pub weight_words: Vec<Vec<usize>>,
    #[serde(skip)]
    pub idempotent: TgElement<Zmod>,
}

impl Superblock {
    /// `(one-line permutation, coefficient)` for the support of `e_theta`.
    pub fn idempotent_terms(&self, g: &TwistedGroup) -> Vec<(Vec<usize>, u64)> {
        self.idempotent.support().map(|(w, c)| (g.perms[w].iter().map(|x| x + 1).collect(), c.v)).collect()
    }
}

/// Superblocks of `T_n` in characteristic `p`, sorted by `theta`.
pub fn superblocks(n: usize, p: usize) -> Result<Vec<Superblock>> {
    let g = TwistedGroup::new(n);
    superblocks_in(&g, p)
}

pub fn superblocks_in(g: &TwistedGroup, p: usize) -> Result<Vec<Superblock>> {
    let ell = ell_of(p)?;
    let mut grouped: BTreeMap<RootVector, (Vec<Vec<usize>>, TgElement<Zmod>)> = BTreeMap::new();
    let proto = Zmod::new(0, p as u64);
    for (seq, e) in weight_idempotents(g, p)? {
        let theta = word_content(&Word::new(seq.clone()), ell)?;
        let entry = grouped.entry(theta).or_insert_with(|| (Vec::new(), g.zero(proto)));
        entry.0.push(seq);
        entry.1 = entry.1.add(&e);
    }
    Ok(grouped
        .into_iter()
        .map(|(theta, (words, e))| Superblock {
            theta,
            dimension: idempotent_rank(g, &e, p),
            num_weight_words: words.len(),
            weight_words: words,
            idempotent: e,
        })
        .collect())
}

/// Block labels and dimensions from strict partitions in characteristic zero:
/// `theta -> sum 2^{n-h(lambda)} g_lambda^2` over strict `lambda` of content `theta`.
pub fn block_dims_from_partitions(n: usize, p: usize) -> Result<BTreeMap<RootVector, u128>> {
    let mut out = BTreeMap::new();
    for lam in strict_partitions(n) {
        let g = strict_kostka(&lam)?;
        *out.entry(content(&lam, p)?).or_insert(0) += (1u128 << (n - lam.height())) * g * g;
    }
    Ok(out)
}

/// `theta -> bar cores` over p-strict partitions of `n`.
pub fn labels_with_cores(n: usize, p: usize) -> Result<BTreeMap<RootVector, Vec<Partition>>> {
    let mut out: BTreeMap<RootVector, Vec<Partition>> = BTreeMap::new();
    for lam in p_strict_partitions(n, p) {
        let core = bar_core(&lam, p)?;
        let e = out.entry(content(&lam, p)?).or_default();
        if !e.contains(&core) {
            e.push(core);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// C_1 wr S_n and T_n (x) C_n as monomial superalgebras

type Key = (usize, u32);
pub type Sparse<K> = BTreeMap<Key, K>;

pub trait MonomialAlgebra {
    /// Product of two basis keys: `(key, negated)`.
    fn mul_keys(&self, a: Key, b: Key) -> (Key, bool);
    fn one_key(&self) -> Key;
}

pub fn smul<K: Scalar>(alg: &dyn MonomialAlgebra, x: &Sparse<K>, y: &Sparse<K>) -> Sparse<K> {
    let mut out = Sparse::new();
    for (&a, &c) in x {
        for (&b, &d) in y {
            let (k, neg) = alg.mul_keys(a, b);
            let v = if neg { -(c * d) } else { c * d };
            let e = out.entry(k).or_insert_with(|| v.from_int(0));
            *e = *e + v;
            if e.is_zero() {
                out.remove(&k);
            }
        }
    }
    out
}

fn sadd<K: Scalar>(x: &Sparse<K>, y: &Sparse<K>, c: K) -> Sparse<K> {
    let mut out = x.clone();
    for (&k, &v) in y {
        let e = out.entry(k).or_insert_with(|| v.from_int(0));
        *e = *e + v * c;
        if e.is_zero() {
            out.remove(&k);
        }
    }
    out
}

fn key_elem<K: Scalar>(k: Key, c: K) -> Sparse<K> {
    BTreeMap::from([(k, c)])
}

/// `C_1 wr S_n` with basis `c_S w`.
pub struct CliffordWreath<'a> {
    pub g: &'a TwistedGroup,
}

impl MonomialAlgebra for CliffordWreath<'_> {
    fn mul_keys(&self, (w, s): Key, (v, t): Key) -> (Key, bool) {
        let perm = &self.g.perms[w];
        let members: Vec<usize> = (0..self.g.n).filter(|&b| t >> b & 1 == 1).collect();
        let moved: Vec<usize> = members.iter().map(|&b| perm[b]).collect();
        let mut inv = 0;
        for a in 0..moved.len() {
            for b in a + 1..moved.len() {
                if moved[a] > moved[b] {
                    inv += 1;
                }
            }
        }
        let wt: u32 = moved.iter().map(|&b| 1u32 << b).sum();
        let (wv, _) = self.g.product(w, v);
        ((wv, s ^ wt), (inv % 2 == 1) ^ clifford_sign(s, wt))
    }
    fn one_key(&self) -> Key {
        (self.g.identity(), 0)
    }
}

/// `T_n (x) C_n` with basis `t_w (x) c_S`.
pub struct Sergeev<'a> {
    pub g: &'a TwistedGroup,
}

impl MonomialAlgebra for Sergeev<'_> {
    fn mul_keys(&self, (v, s): Key, (w, t): Key) -> (Key, bool) {
        let (u, neg) = self.g.product(v, w);
        let koszul = s.count_ones() % 2 == 1 && self.g.parity(w) == 1;
        ((u, s ^ t), neg ^ koszul ^ clifford_sign(s, t))
    }
    fn one_key(&self) -> Key {
        (self.g.identity(), 0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SergeevReport {
    pub forward_relations: bool,
    pub backward_relations: bool,
    pub round_trip: bool,
    pub dimension: u128,
}

impl SergeevReport {
    pub fn passed(&self) -> bool {
        self.forward_relations && self.backward_relations && self.round_trip
    }
}

/// Images of the generators `c_r` and `s_r` / `t_r` under the two maps.
struct SergeevMaps<'a> {
    g: &'a TwistedGroup,
    f: Fq,
    /// `1/sqrt(-2)`
    k: Fq,
}

impl SergeevMaps<'_> {
    fn one(&self) -> Fq {
        self.f.from_int(1)
    }

    fn c(&self, r: usize) -> Sparse<Fq> {
        key_elem((self.g.identity(), 1 << r), self.one())
    }

    fn perm(&self, r: usize) -> Sparse<Fq> {
        key_elem((self.g.generator(r), 0), self.one())
    }

    /// `s_r -> k t_r (x) (c_r - c_{r+1})`
    fn se_s(&self, r: usize) -> Sparse<Fq> {
        let t = self.g.generator(r);
        BTreeMap::from([((t, 1 << r), self.k), ((t, 1 << (r + 1)), -self.k)])
    }

    /// `t_r -> -k s_r (c_r - c_{r+1})`
    fn se_inv_t(&self, r: usize) -> Sparse<Fq> {
        let lhs = CliffordWreath { g: self.g };
        let diff = sadd(&self.c(r), &self.c(r + 1), -self.one());
        smul(&lhs, &self.perm(r), &diff).into_iter().map(|(key, v)| (key, -(self.k * v))).collect()
    }

    /// `Se(c_S w)`
    fn se(&self, (w, s): Key) -> Sparse<Fq> {
        let rhs = Sergeev { g: self.g };
        let mut acc = key_elem((self.g.identity(), s), self.one());
        for r in reduced_word(&self.g.perms[w]) {
            acc = smul(&rhs, &acc, &self.se_s(r));
        }
        acc
    }

    /// `Se^{-1}(t_w (x) c_S)`
    fn se_inv(&self, (w, s): Key) -> Sparse<Fq> {
        let lhs = CliffordWreath { g: self.g };
        let mut acc = key_elem(lhs.one_key(), self.one());
        for &r in &self.g.words[w] {
            acc = smul(&lhs, &acc, &self.se_inv_t(r));
        }
        smul(&lhs, &acc, &key_elem((self.g.identity(), s), self.one()))
    }

    fn apply(&self, x: &Sparse<Fq>, f: impl Fn(Key) -> Sparse<Fq>) -> Sparse<Fq> {
        let mut out = Sparse::new();
        for (&k, &c) in x {
            out = sadd(&out, &f(k), c);
        }
        out
    }
}

fn sergeev_setup(g: &TwistedGroup, p: usize) -> Result<SergeevMaps<'_>> {
    let f = Fq::field(p)?;
    let root = f.from_int(-2).sqrt().expect("-2 is a square in F_{p^2}");
    let k = root.inv().expect("nonzero");
    Ok(SergeevMaps { g, f, k })
}

/// Relations of `C_1 wr S_n` on candidate images of `c_r` and `s_r`.
fn wreath_relations(alg: &dyn MonomialAlgebra, n: usize, c: &[Sparse<Fq>], s: &[Sparse<Fq>], one: &Sparse<Fq>) -> bool {
    let m = |x: &Sparse<Fq>, y: &Sparse<Fq>| smul(alg, x, y);
    let minus_one = one.values().next().map(|v| -*v).expect("unit");
    let anti = |x: &Sparse<Fq>, y: &Sparse<Fq>| sadd(&m(x, y), &m(y, x), minus_one.from_int(1)).is_empty();
    for a in 0..n {
        if &m(&c[a], &c[a]) != one {
            return false;
        }
        for b in a + 1..n {
            if !anti(&c[a], &c[b]) {
                return false;
            }
        }
    }
    for r in 0..n.saturating_sub(1) {
        if &m(&s[r], &s[r]) != one {
            return false;
        }
        if r + 2 < n && m(&m(&s[r], &s[r + 1]), &s[r]) != m(&m(&s[r + 1], &s[r]), &s[r + 1]) {
            return false;
        }
        for t in r + 2..n - 1 {
            if m(&s[r], &s[t]) != m(&s[t], &s[r]) {
                return false;
            }
        }
        for t in 0..n {
            let st = if t == r { r + 1 } else if t == r + 1 { r } else { t };
            if m(&s[r], &c[t]) != m(&c[st], &s[r]) {
                return false;
            }
        }
    }
    true
}

/// Relations of `T_n (x) C_n` on candidate images of `t_r` and `c_r`.
fn sergeev_relations(alg: &dyn MonomialAlgebra, n: usize, t: &[Sparse<Fq>], c: &[Sparse<Fq>], one: &Sparse<Fq>) -> bool {
    let m = |x: &Sparse<Fq>, y: &Sparse<Fq>| smul(alg, x, y);
    let unit = *one.values().next().expect("unit");
    let anti = |x: &Sparse<Fq>, y: &Sparse<Fq>| sadd(&m(x, y), &m(y, x), unit).is_empty();
    for a in 0..n {
        if &m(&c[a], &c[a]) != one {
            return false;
        }
        for b in a + 1..n {
            if !anti(&c[a], &c[b]) {
                return false;
            }
        }
    }
    for r in 0..n.saturating_sub(1) {
        if &m(&t[r], &t[r]) != one {
            return false;
        }
        if r + 2 < n {
            let x = m(&t[r], &t[r + 1]);
            if &m(&m(&x, &x), &x) != one {
                return false;
            }
        }
        for u in r + 2..n - 1 {
            if !anti(&t[r], &t[u]) {
                return false;
            }
        }
        for a in 0..n {
            if !anti(&t[r], &c[a]) {
                return false;
            }
        }
    }
    true
}

/// The maps `s_r -> (1/sqrt(-2)) t_r (x) (c_r - c_{r+1})`, `c_r -> 1 (x) c_r` and
/// their inverse respect all defining relations and are mutually inverse.
pub fn sergeev_iso_check(n: usize, p: usize) -> Result<SergeevReport> {
    if n == 0 {
        return Err(SpinError::Invalid("n must be at least 1".into()));
    }
    let g = TwistedGroup::new(n);
    let maps = sergeev_setup(&g, p)?;
    let lhs = CliffordWreath { g: &g };
    let rhs = Sergeev { g: &g };
    let one_l = key_elem(lhs.one_key(), maps.one());
    let one_r = key_elem(rhs.one_key(), maps.one());
    let cs: Vec<Sparse<Fq>> = (0..n).map(|r| maps.c(r)).collect();
    let se_s: Vec<Sparse<Fq>> = (0..n - 1).map(|r| maps.se_s(r)).collect();
    let inv_t: Vec<Sparse<Fq>> = (0..n - 1).map(|r| maps.se_inv_t(r)).collect();
    let forward_relations = wreath_relations(&rhs, n, &cs, &se_s, &one_r);
    let backward_relations = sergeev_relations(&lhs, n, &inv_t, &cs, &one_l);
    let round_trip = (0..n - 1).all(|r| {
        maps.apply(&maps.se_s(r), |k| maps.se_inv(k)) == maps.perm(r)
            && maps.apply(&maps.se_inv_t(r), |k| maps.se(k)) == maps.perm(r)
    }) && (0..n).all(|r| maps.apply(&maps.c(r), |k| maps.se(k)) == maps.c(r));
    let fact: u128 = (1..=n as u128).product();
    Ok(SergeevReport { forward_relations, backward_relations, round_trip, dimension: fact << n })
}

/// `phi(x_i)` in `C_1 wr S_n`: `phi(x_1) = 0`, `phi(x_{i+1}) = s_i phi(x_i) s_i + s_i + c_i c_{i+1} s_i`.
fn level_one_x(maps: &SergeevMaps<'_>, i: usize) -> Sparse<Fq> {
    let lhs = CliffordWreath { g: maps.g };
    let mut x = Sparse::new();
    for k in 1..i {
        let s = maps.perm(k - 1);
        let cc = smul(&lhs, &maps.c(k - 1), &maps.c(k));
        let conj = smul(&lhs, &smul(&lhs, &s, &x), &s);
        x = sadd(&sadd(&conj, &s, maps.one()), &smul(&lhs, &cc, &s), maps.one());
    }
    x
}

/// `Se(phi(x_i)^2) = 2 m_i^2 (x) 1` for every `i <= n`.
pub fn levelone_jm_check(n: usize, p: usize) -> Result<bool> {
    let g = TwistedGroup::new(n);
    let maps = sergeev_setup(&g, p)?;
    let lhs = CliffordWreath { g: &g };
    for i in 1..=n {
        let x = level_one_x(&maps, i);
        let lhs_side = maps.apply(&smul(&lhs, &x, &x), |k| maps.se(k));
        let m = g.jm(i, maps.f);
        let m2 = g.mul(&m, &m).scale(maps.f.from_int(2));
        let rhs_side: Sparse<Fq> = m2.support().map(|(w, c)| ((w, 0), c)).collect();
        if lhs_side != rhs_side {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Twisted wreath superproducts

/// `A wr T_d`: basis `(a_1 (x) .. (x) a_d) t_w`, with
/// `t_r a = (-1)^{sum_{u != r, r+1} |a_u|} (s_r a) t_r`.
pub fn twisted_wreath(a: &TableAlgebra, d: usize) -> Result<TableAlgebra> {
    if d == 0 {
        return Err(SpinError::Invalid("d must be at least 1".into()));
    }
    let g = TwistedGroup::new(d);
    let na = a.dim();
    let size = g.size();
    let tensors = tensor_basis(na, d);
    let tindex = |t: &[usize]| t.iter().fold(0, |acc, &b| acc * na + b);
    let mut labels = Vec::new();
    let mut bidegrees = Vec::new();
    for t in &tensors {
        for w in 0..size {
            let parts: Vec<String> = t.iter().map(|&b| a.label(b)).collect();
            let word: String = g.words[w].iter().map(|r| (r + 1).to_string()).collect();
            labels.push(format!("{}·t[{word}]", parts.join("⊗")));
            let (deg, par) = t.iter().fold((0, 0), |(dd, pp), &b| {
                let (db, pb) = a.bidegree(b);
                (dd + db, (pp + pb) % 2)
            });
            bidegrees.push((deg, (par + g.parity(w)) % 2));
        }
    }
    let unit_tensors = expand_unit(a, d, &[], &[]);
    let mut unit = Elem::new();
    for (t, c) in unit_tensors {
        add_into(&mut unit, &basis_elem(tindex(&t) * size + g.identity()), c);
    }
    let parity = |b: usize| a.parity(b);
    Ok(TableAlgebra::new(labels, bidegrees, unit, |x, y| {
        let (ta, v) = (&tensors[x / size], x % size);
        let (tb, w) = (&tensors[y / size], y % size);
        // t_v b = sign (^v b) t_v, letter by letter from the right
        let mut b = tb.clone();
        let mut sign = 1i64;
        for &r in g.words[v].iter().rev() {
            let outside: u32 = (0..d).filter(|&u| u != r && u != r + 1).map(|u| parity(b[u]) as u32).sum();
            if outside % 2 == 1 {
                sign = -sign;
            }
            let (sb, s) = permute_tensor(&transposition(d, r), &b, parity);
            b = sb;
            sign *= s;
        }
        let (u, neg) = g.product(v, w);
        if neg {
            sign = -sign;
        }
        let mut out = Elem::new();
        for (t, c) in tensor_power_mul(a, ta, &b) {
            add_into(&mut out, &basis_elem(tindex(&t) * size + u), c * Coeff::from_integer(sign));
        }
        out
    }))
}

fn tensor_basis(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                (0..n).map(move |k| {
                    let mut t2 = t.clone();
                    t2.push(k);
                    t2
                })
            })
            .collect();
    }
    out
}

/// Pure tensors of `1 (x) .. (x) 1` with `fixed[k]` inserted at `positions[k]`.
fn expand_unit(a: &dyn SuperAlgebra, d: usize, positions: &[usize], fixed: &[usize]) -> Vec<(Vec<usize>, Coeff)> {
    let unit = a.unit();
    let mut acc: Vec<(Vec<usize>, Coeff)> = vec![(vec![], Coeff::one())];
    for pos in 0..d {
        let choices: Vec<(usize, Coeff)> = match positions.iter().position(|&q| q == pos) {
            Some(k) => vec![(fixed[k], Coeff::one())],
            None => unit.iter().map(|(&k, &c)| (k, c)).collect(),
        };
        acc = acc
            .into_iter()
            .flat_map(|(t, c)| {
                choices.iter().map(move |&(k, e)| {
                    let mut t2 = t.clone();
                    t2.push(k);
                    (t2, c * e)
                })
            })
            .collect();
    }
    acc
}

/// `x + y sqrt(-2)` with `x, y` in a rational algebra.
#[derive(Clone, Debug, PartialEq, Default)]
struct Root2 {
    re: Elem,
    im: Elem,
}

impl Root2 {
    fn real(x: Elem) -> Self {
        Self { re: x, im: Elem::new() }
    }

    fn mul(&self, alg: &dyn SuperAlgebra, o: &Root2) -> Root2 {
        let mut re = alg.mul(&self.re, &o.re);
        add_into(&mut re, &alg.mul(&self.im, &o.im), Coeff::from_integer(-2));
        let mut im = alg.mul(&self.re, &o.im);
        add_into(&mut im, &alg.mul(&self.im, &o.re), Coeff::one());
        Root2 { re, im }
    }

    fn add_scaled(&mut self, o: &Root2, c: Coeff) {
        add_into(&mut self.re, &o.re, c);
        add_into(&mut self.im, &o.im, c);
    }
}

fn apply_map(images: &[Root2], x: &Elem) -> Root2 {
    let mut out = Root2::default();
    for (&k, &c) in x {
        out.add_scaled(&images[k], c);
    }
    out
}

/// Checks that the assignments
/// `(a (x) x)_r -> (-1)^{r|a|} a_r (x) x_r`, `s_r -> (1/sqrt(-2)) t_r (x) (c_r - c_{r+1})`
/// define mutually inverse isomorphisms `(A (x) C_1) wr S_d -> (A wr T_d) (x) C_d`.
pub fn semi_direct_check(a: &TableAlgebra, d: usize) -> Result<bool> {
    let c1 = crate::super_algebra::clifford(1);
    let ac = tensor(a, &c1);
    let lhs = Wreath::new(&ac, d);
    let tw = twisted_wreath(a, d)?;
    let cd = crate::super_algebra::clifford(d);
    let rhs = tensor(&tw, &cd);
    let g = TwistedGroup::new(d);
    let size = g.size();
    let nc = cd.dim();
    let na = a.dim();
    let half = Coeff::new(1, 2);
    let tw_index = |t: &[usize], w: usize| t.iter().fold(0, |acc, &b| acc * na + b) * size + w;
    let id = g.identity();

    // forward images of generators
    let tw_elem = |positions: &[usize], fixed: &[usize], w: usize| -> Elem {
        let mut out = Elem::new();
        for (t, c) in expand_unit(a, d, positions, fixed) {
            add_into(&mut out, &basis_elem(tw_index(&t, w)), c);
        }
        out
    };
    let with_cliff = |x: &Elem, mask: usize| -> Elem { x.iter().map(|(&k, &c)| (k * nc + mask, c)).collect() };
    let sign_r = |r: usize, b: usize| if (r + 1) % 2 == 1 && a.parity(b) == 1 { -Coeff::one() } else { Coeff::one() };
    let phi_insert = |r: usize, part: usize| -> Root2 {
        let (b, x) = (part / 2, part % 2);
        let e = with_cliff(&tw_elem(&[r], &[b], id), if x == 1 { 1 << r } else { 0 });
        Root2::real(e.into_iter().map(|(k, c)| (k, c * sign_r(r, b))).collect())
    };
    let phi_s = |r: usize| -> Root2 {
        let t = tw_elem(&[], &[], g.generator(r));
        let mut im = with_cliff(&t, 1 << r);
        add_into(&mut im, &with_cliff(&t, 1 << (r + 1)), -Coeff::one());
        Root2 { re: Elem::new(), im: im.into_iter().map(|(k, c)| (k, -c * half)).collect() }
    };
    let forward: Vec<Root2> = (0..lhs.dim())
        .map(|i| {
            let (parts, w) = lhs.decode(i);
            let mut acc = Root2::real(rhs.unit());
            for (r, &part) in parts.iter().enumerate() {
                acc = acc.mul(&rhs, &phi_insert(r, part));
            }
            for r in reduced_word(&w) {
                acc = acc.mul(&rhs, &phi_s(r));
            }
            acc
        })
        .collect();

    // backward images
    let wr_elem = |positions: &[usize], fixed: &[usize], w: &[usize]| -> Elem {
        let mut out = Elem::new();
        for (t, c) in expand_unit(&ac, d, positions, fixed) {
            add_into(&mut out, &basis_elem(lhs.index(&t, w)), c);
        }
        out
    };
    let idp: Perm = (0..d).collect();
    let unit_a: Vec<(usize, Coeff)> = a.unit().into_iter().collect();
    let c_at = |r: usize| -> Elem {
        let mut out = Elem::new();
        for &(e, c) in &unit_a {
            add_into(&mut out, &wr_elem(&[r], &[e * 2 + 1], &idp), c);
        }
        out
    };
    let psi_t = |r: usize| -> Root2 {
        let s = wr_elem(&[], &[], &transposition(d, r));
        let mut diff = c_at(r);
        add_into(&mut diff, &c_at(r + 1), -Coeff::one());
        let x = lhs.mul(&s, &diff);
        Root2 { re: Elem::new(), im: x.into_iter().map(|(k, c)| (k, c * half)).collect() }
    };
    let tensors = tensor_basis(na, d);
    let backward: Vec<Root2> = (0..rhs.dim())
        .map(|i| {
            let (twi, mask) = (i / nc, i % nc);
            let (t, w) = (&tensors[twi / size], twi % size);
            let mut acc = Root2::real(lhs.unit());
            for (r, &b) in t.iter().enumerate() {
                let e = wr_elem(&[r], &[b * 2], &idp);
                acc = acc.mul(&lhs, &Root2::real(e.into_iter().map(|(k, c)| (k, c * sign_r(r, b))).collect()));
            }
            for &r in &g.words[w] {
                acc = acc.mul(&lhs, &psi_t(r));
            }
            for r in 0..d {
                if mask >> r & 1 == 1 {
                    acc = acc.mul(&lhs, &Root2::real(c_at(r)));
                }
            }
            acc
        })
        .collect();

    let homomorphism = |src: &dyn SuperAlgebra, dst: &dyn SuperAlgebra, img: &[Root2]| {
        apply_map(img, &src.unit()) == Root2::real(dst.unit())
            && (0..src.dim()).all(|i| {
                (0..src.dim()).all(|j| apply_map(img, &src.mul_basis(i, j)) == img[i].mul(dst, &img[j]))
            })
    };
    let compose_id = |img: &[Root2], back: &[Root2], n: usize| {
        (0..n).all(|i| {
            let x = &img[i];
            let mut out = apply_map(back, &x.re);
            let y = apply_map(back, &x.im);
            // (re + im r) with back(im) = y.re + y.im r contributes y.re r - 2 y.im
            add_into(&mut out.re, &y.im, Coeff::from_integer(-2));
            add_into(&mut out.im, &y.re, Coeff::one());
            out == Root2::real(basis_elem(i))
        })
    };
    Ok(homomorphism(&lhs, &rhs, &forward)
        && homomorphism(&rhs, &lhs, &backward)
        && compose_id(&forward, &backward, lhs.dim())
        && compose_id(&backward, &forward, rhs.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::super_algebra::{build_a, clifford, is_associative, is_graded_unital};
    use proptest::prelude::*;

    fn zp(p: u64) -> Zmod {
        Zmod::new(0, p)
    }

    #[test]
    fn field_arithmetic() {
        for p in [3, 5, 7, 11, 13] {
            let f = Fq::field(p).unwrap();
            let m1 = f.from_int(-1).sqrt().unwrap();
            assert_eq!(m1 * m1, f.from_int(-1));
            let m2 = f.from_int(-2).sqrt().unwrap();
            assert_eq!(m2 * m2, f.from_int(-2));
            for x in f.elements().filter(|x| !x.is_zero()) {
                assert_eq!(x * x.inv().unwrap(), f.from_int(1));
            }
        }
        assert!(Fq::field(9).is_err());
        assert!(Fq::field(2).is_err());
    }

    #[test]
    fn generator_relations() {
        for n in 1..=5 {
            let g = TwistedGroup::new(n);
            let k = zp(7);
            let one = g.one(k);
            for r in 0..n.saturating_sub(1) {
                let t = g.t(r, k);
                assert_eq!(g.mul(&t, &t), one);
                if r + 1 < n - 1 {
                    let x = g.mul(&t, &g.t(r + 1, k));
                    assert_eq!(g.pow(&x, 3), one);
                }
                for s in r + 2..n - 1 {
                    let u = g.t(s, k);
                    assert_eq!(g.mul(&t, &u), g.mul(&u, &t).scale(k.from_int(-1)));
                }
            }
            // t_w is the product along its word
            for w in 0..g.size() {
                let mut x = one.clone();
                for &r in &g.words[w] {
                    x = g.mul(&x, &g.t(r, k));
                }
                assert_eq!(x, g.basis(w, k));
                assert_eq!(g.words[w].len() % 2, length(&g.perms[w]) % 2);
            }
        }
    }

    #[test]
    fn table_is_associative() {
        let g = TwistedGroup::new(4);
        for u in 0..g.size() {
            for v in 0..g.size() {
                for w in 0..g.size() {
                    let (uv, s1) = g.product(u, v);
                    let (uvw, s2) = g.product(uv, w);
                    let (vw, s3) = g.product(v, w);
                    let (uvw2, s4) = g.product(u, vw);
                    assert_eq!(uvw, uvw2);
                    assert_eq!(s1 ^ s2, s3 ^ s4);
                }
            }
        }
    }

    #[test]
    fn jucys_murphy() {
        let g = TwistedGroup::new(5);
        let k = zp(11);
        assert!(g.jm(1, k).is_zero());
        assert_eq!(g.jm(2, k), g.t(0, k));
        for r in 1..=5 {
            let m = g.jm(r, k);
            assert_eq!(m, g.jm_closed(r, k));
            if r >= 2 {
                assert_eq!(m.parity(&g), Some(1));
            }
        }
        let sq: Vec<_> = (1..=5).map(|r| {
            let m = g.jm(r, k);
            g.mul(&m, &m)
        }).collect();
        for a in &sq {
            for b in &sq {
                assert_eq!(g.mul(a, b), g.mul(b, a));
            }
        }
    }

    #[test]
    fn small_superblocks() {
        let blocks = superblocks(3, 3).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].theta, RootVector::from_coeffs(&[2, 1]));
        assert_eq!(blocks[0].dimension, 6);
        for n in 1..=5 {
            for p in [3, 5, 7] {
                let g = TwistedGroup::new(n);
                let blocks = superblocks_in(&g, p).unwrap();
                let total: u128 = blocks.iter().map(|b| b.dimension).sum();
                assert_eq!(total, g.size() as u128);
                let oracle = block_dims_from_partitions(n, p).unwrap();
                let got: BTreeMap<RootVector, u128> = blocks.iter().map(|b| (b.theta.clone(), b.dimension)).collect();
                assert_eq!(got, oracle, "n={n} p={p}");
                let labels = labels_with_cores(n, p).unwrap();
                assert!(labels.values().all(|cores| cores.len() == 1));
                assert_eq!(labels.keys().cloned().collect::<Vec<_>>(), got.keys().cloned().collect::<Vec<_>>());
                let proto = zp(p as u64);
                let mut sum = g.zero(proto);
                for b in &blocks {
                    let e = &b.idempotent;
                    assert_eq!(&g.mul(e, e), e);
                    assert_eq!(e.parity(&g), Some(0));
                    sum = sum.add(e);
                    for r in 0..n.saturating_sub(1) {
                        let x = g.t(r, proto);
                        assert_eq!(g.mul(e, &x), g.mul(&x, e));
                    }
                }
                assert_eq!(sum, g.one(proto));
            }
        }
    }

    #[test]
    fn weight_idempotents_are_orthogonal() {
        let g = TwistedGroup::new(4);
        let p = 3;
        let proto = zp(p as u64);
        let es = weight_idempotents(&g, p).unwrap();
        for (i, (_, a)) in es.iter().enumerate() {
            for (j, (_, b)) in es.iter().enumerate() {
                let ab = g.mul(a, b);
                if i == j {
                    assert_eq!(&ab, a);
                } else {
                    assert!(ab.is_zero());
                }
            }
        }
        // each e(i) lies in the span of monomials in the m_r^2
        let sq: Vec<_> = (1..=4).map(|r| {
            let m = g.jm(r, proto);
            g.mul(&m, &m)
        }).collect();
        let mut span = vec![g.one(proto)];
        let mut frontier = span.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &sq {
                    let y = g.mul(x, s);
                    if !in_span(&span, &y) {
                        span.push(y.clone());
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        for (_, e) in &es {
            assert!(in_span(&span, e));
        }
    }

    fn in_span(basis: &[TgElement<Zmod>], x: &TgElement<Zmod>) -> bool {
        rank(basis) == rank(&[basis, std::slice::from_ref(x)].concat())
    }

    fn rank(rows: &[TgElement<Zmod>]) -> usize {
        let mut m: Vec<Vec<Zmod>> = rows.iter().map(|r| r.coeffs.clone()).collect();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rk = 0;
        for c in 0..cols {
            let Some(piv) = (rk..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
            m.swap(rk, piv);
            let inv = m[rk][c].pow(m[rk][c].m - 2);
            for r in 0..m.len() {
                if r != rk && !m[r][c].is_zero() {
                    let f = m[r][c] * inv;
                    for k in 0..cols {
                        let v = m[rk][k];
                        m[r][k] = m[r][k] - f * v;
                    }
                }
            }
            rk += 1;
        }
        rk
    }

    #[test]
    fn sergeev() {
        for n in 1..=4 {
            for p in [3, 5] {
                let r = sergeev_iso_check(n, p).unwrap();
                assert!(r.passed(), "n={n} p={p} {r:?}");
                assert!(levelone_jm_check(n, p).unwrap(), "n={n} p={p}");
            }
        }
        let g = TwistedGroup::new(2);
        let maps = sergeev_setup(&g, 3).unwrap();
        let s = maps.se_s(0);
        let one = key_elem((g.identity(), 0), maps.one());
        assert_eq!(smul(&Sergeev { g: &g }, &s, &s), one);
        assert_eq!(sergeev_iso_check(3, 5).unwrap().dimension, 48);
    }

    #[test]
    fn twisted_wreath_products() {
        let f = clifford(0);
        for d in 1..=4 {
            let tw = twisted_wreath(&f, d).unwrap();
            let g = TwistedGroup::new(d);
            assert_eq!(tw.dim(), g.size());
            for v in 0..g.size() {
                for w in 0..g.size() {
                    let (u, neg) = g.product(v, w);
                    let c = if neg { -Coeff::one() } else { Coeff::one() };
                    assert_eq!(tw.mul_basis(v, w), BTreeMap::from([(u, c)]));
                }
            }
        }
        let a1 = build_a(1).unwrap();
        let c1 = clifford(1);
        for (alg, d) in [(&c1, 2), (&a1, 2), (&c1, 3)] {
            let tw = twisted_wreath(alg, d).unwrap();
            let fact: usize = (1..=d).product();
            assert_eq!(tw.dim(), fact * alg.dim().pow(d as u32));
            assert!(is_graded_unital(&tw));
            if tw.dim() <= 32 {
                assert!(is_associative(&tw));
            }
        }
        assert!(semi_direct_check(&clifford(0), 3).unwrap());
        assert!(semi_direct_check(&c1, 2).unwrap());
        assert!(semi_direct_check(&a1, 2).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn zmod_field_laws(a in 0i64..1000, b in 0i64..1000, c in 0i64..1000) {
            let (x, y, z) = (Zmod::new(a, 13), Zmod::new(b, 13), Zmod::new(c, 13));
            prop_assert_eq!(x * (y + z), x * y + x * z);
            prop_assert_eq!((x - y) + y, x);
            let f = Fq::field(7).unwrap();
            let (u, v) = (f.elem(a, b), f.elem(b, c));
            prop_assert_eq!(u * v, v * u);
            prop_assert_eq!((u * v) * f.elem(c, a), u * (v * f.elem(c, a)));
        }
    }
}
