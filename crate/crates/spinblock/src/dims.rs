//! Graded dimensions of cyclotomic quiver Hecke superalgebras and the
//! dimension identities for RoCK blocks.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::bar_partitions::{
    bar_core, bar_quotient, bar_weight, is_rouquier, multi_content, multi_norm, partitions, quotient_inverse,
    strict_block_partitions, strict_partitions, Multipartition, Partition,
};
use crate::error::{Result, SpinError};
use crate::laurent::LaurentPoly;
use crate::root_datum::{coroot_pairing, ell_of, gg_word, q_exponent, simple_norm, word_content, RootVector, Word};
use crate::tableaux::{add_node, d_up, enumerate_std, node_sets, proper_removable_all, remove_node, tableau_degree, Tableau};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedDim {
    pub dim: LaurentPoly,
    /// Set when a word does not have content `theta`; `dim` is then zero.
    pub content_mismatch: bool,
}

#[cfg(feature = "parallel")]
fn map_ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_ordered<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Layer `k` holds the shapes reachable by the first `k` letters, each with
/// `sum deg(T)` over tableaux of that shape and word prefix.
fn degree_layers(level: usize, p: usize, w: &[usize]) -> Result<BTreeMap<Multipartition, LaurentPoly>> {
    let mut layer: BTreeMap<Multipartition, LaurentPoly> = BTreeMap::new();
    layer.insert(Multipartition::empty(level), LaurentPoly::one());
    for &i in w {
        let mut shapes = BTreeSet::new();
        for mu in layer.keys() {
            for b in node_sets(mu, i, p).proper_addable {
                shapes.insert(add_node(mu, &b).expect("addable"));
            }
        }
        let shapes: Vec<Multipartition> = shapes.into_iter().collect();
        // pull each coefficient from the previous layer via removals
        let coeffs = map_ordered(&shapes, |nu| -> Result<LaurentPoly> {
            let mut c = LaurentPoly::zero();
            for a in proper_removable_all(nu, p) {
                if a.residue(p) != i {
                    continue;
                }
                let mu = remove_node(nu, &a).expect("removable");
                if let Some(prev) = layer.get(&mu) {
                    c += &(prev * &d_up(&a, &mu, p)?);
                }
            }
            Ok(c)
        });
        let mut next = BTreeMap::new();
        for (nu, c) in shapes.into_iter().zip(coeffs) {
            let c = c?;
            if !c.is_zero() {
                next.insert(nu, c);
            }
        }
        layer = next;
    }
    Ok(layer)
}

fn check_word(w: &Word, ell: usize) -> Result<Word> {
    w.validate(ell)?;
    Ok(w.expand())
}

/// `sum_lambda sum_{S,T} deg(S) deg(T) ||lambda||`.
pub fn graded_dim(level: usize, theta: &RootVector, wi: &Word, wj: &Word, p: usize) -> Result<GradedDim> {
    let ell = ell_of(p)?;
    if theta.ell() != ell {
        return Err(SpinError::RankMismatch(theta.ell(), ell));
    }
    let (wi, wj) = (check_word(wi, ell)?, check_word(wj, ell)?);
    if &word_content(&wi, ell)? != theta || &word_content(&wj, ell)? != theta {
        return Ok(GradedDim { dim: LaurentPoly::zero(), content_mismatch: true });
    }
    let li = degree_layers(level, p, &wi.letters)?;
    let lj = if wi == wj { li.clone() } else { degree_layers(level, p, &wj.letters)? };
    let mut dim = LaurentPoly::zero();
    for (m, ci) in &li {
        if let Some(cj) = lj.get(m) {
            dim += &(&(ci * cj) * &multi_norm(m, p));
        }
    }
    Ok(GradedDim { dim, content_mismatch: false })
}

/// Convenience form of [`graded_dim`] taking `theta` from the first word.
pub fn graded_dim_words(level: usize, wi: &Word, wj: &Word, p: usize) -> Result<GradedDim> {
    let ell = ell_of(p)?;
    let theta = word_content(&check_word(wi, ell)?, ell)?;
    graded_dim(level, &theta, wi, wj, p)
}

/// Strictly standard tableaux with word `w`, counted per shape.
fn strict_counts(level: usize, p: usize, w: &[usize]) -> BTreeMap<Multipartition, u128> {
    let mut layer = BTreeMap::new();
    layer.insert(Multipartition::empty(level), 1u128);
    for &i in w {
        let mut next = BTreeMap::new();
        for (mu, c) in &layer {
            for b in node_sets(mu, i, p).proper_addable {
                let nu = add_node(mu, &b).expect("addable");
                if nu.is_strict() {
                    *next.entry(nu).or_insert(0) += c;
                }
            }
        }
        layer = next;
    }
    layer
}

/// Ungraded dimension as a sum of `2^{m_0 - h}` over strict shapes.
pub fn ungraded_dim(level: usize, theta: &RootVector, wi: &Word, wj: &Word, p: usize) -> Result<u128> {
    let ell = ell_of(p)?;
    let (wi, wj) = (check_word(wi, ell)?, check_word(wj, ell)?);
    if &word_content(&wi, ell)? != theta || &word_content(&wj, ell)? != theta {
        return Ok(0);
    }
    let m0 = theta.coeffs().ok_or(SpinError::NonIntegralPairing)?[0] as usize;
    let ci = strict_counts(level, p, &wi.letters);
    let cj = strict_counts(level, p, &wj.letters);
    let mut total = 0u128;
    for (m, a) in &ci {
        if let Some(b) = cj.get(m) {
            let h = m.height();
            if h > m0 {
                return Err(SpinError::Invalid(format!("height {h} exceeds m_0 = {m0}")));
            }
            total += (1u128 << (m0 - h)) * a * b;
        }
    }
    Ok(total)
}

/// `i! q^{<i>}` for a divided word: `prod [m]_{i}! * q^{sum (a|a) m(m-1)/4}`.
pub fn divided_factor(w: &Word, p: usize) -> Result<(LaurentPoly, i32)> {
    let ell = ell_of(p)?;
    w.validate(ell)?;
    let mut fact = LaurentPoly::one();
    let mut shift = 0i64;
    for (&i, m) in w.letters.iter().zip(w.exponents()) {
        fact = &fact * &LaurentPoly::quantum_factorial(m, q_exponent(ell, i));
        shift += simple_norm(ell, i) * (m as i64) * (m as i64 - 1) / 4;
    }
    Ok((fact, shift as i32))
}

/// `dim_q e(i) R e(j)` for divided-power words.
pub fn divided_power_dim(level: usize, theta: &RootVector, wi: &Word, wj: &Word, p: usize) -> Result<LaurentPoly> {
    let g = graded_dim(level, theta, wi, wj, p)?.dim;
    let (fi, si) = divided_factor(wi, p)?;
    let (fj, sj) = divided_factor(wj, p)?;
    let den = (&fi * &fj).shift(si - sj);
    g.div_exact(&den)
        .ok_or_else(|| SpinError::NonDivisible(format!("{g} by {den}")))
}

/// `(1+q^2)(1+q^-2)(1+q^4)^{l-i-1}(1+q^-4)^{l-j-1}`
pub fn m_ij(ell: usize, i: usize, j: usize) -> LaurentPoly {
    let a = LaurentPoly::from_terms([(0, 1), (2, 1)]);
    let b = LaurentPoly::from_terms([(0, 1), (4, 1)]);
    &(&(&a * &a.bar()) * &b.pow((ell - i - 1) as u32)) * &b.bar().pow((ell - j - 1) as u32)
}

/// Graded dimension of `e^i A e^j` for the Brauer tree algebra on `l` vertices.
pub fn zigzag_block_dim(i: usize, j: usize) -> LaurentPoly {
    match (i, j) {
        (0, 0) => LaurentPoly::from_terms([(0, 1), (2, 1), (4, 1)]),
        _ if i == j => LaurentPoly::from_terms([(0, 1), (4, 1)]),
        _ if j == i + 1 => LaurentPoly::one(),
        _ if i == j + 1 => LaurentPoly::q_pow(4),
        _ => LaurentPoly::zero(),
    }
}

/// `chi^i_k`
pub fn chi_poly(i: usize, k: usize, ell: usize) -> LaurentPoly {
    let base = &LaurentPoly::from_terms([(2, 1), (-2, 1)]).pow((ell - i - 1) as u32)
        * &LaurentPoly::from_terms([(0, 1), (2, 1)]);
    if k == i + 1 {
        base.shift(1)
    } else if k == i {
        base.shift(-1)
    } else {
        LaurentPoly::zero()
    }
}

/// Hat Gelfand-Graev word `g^i` with every divided power expanded.
pub fn gg_hat(ell: usize, i: usize) -> Result<Word> {
    Ok(gg_word(ell, &[i])?.expand())
}

/// `sum_S deg(S)/deg(U)` over p-standard `S` of shape `target` restricting to `u`
/// whose word continues with `suffix`.
pub fn extension_sum(u: &Tableau, target: &Multipartition, suffix: &[usize], p: usize) -> Result<LaurentPoly> {
    let deg_u = tableau_degree(u, p)?;
    let mut total = LaurentPoly::zero();
    let mut stack = vec![u.clone()];
    while let Some(t) = stack.pop() {
        let k = t.len() - u.len();
        if k == suffix.len() {
            if t.shape == *target {
                total += &tableau_degree(&t, p)?;
            }
            continue;
        }
        for b in node_sets(&t.shape, suffix[k], p).proper_addable {
            let comp = &target.components[b.comp - 1];
            if !comp.contains_node(b.row, b.col) {
                continue;
            }
            let mut t2 = t.clone();
            t2.shape = add_node(&t.shape, &b).expect("addable");
            t2.filling.push(b);
            stack.push(t2);
        }
    }
    total
        .div_exact(&deg_u)
        .ok_or_else(|| SpinError::NonDivisible(format!("{total} by deg(U) = {deg_u}")))
}

/// `rho` with one elementary slide down on runner `k`.
pub fn slide_down(rho: &Partition, k: usize, p: usize) -> Result<Partition> {
    let ell = ell_of(p)?;
    let mut comps = vec![Partition::empty(); ell + 1];
    comps[k] = Partition::new(vec![1])?;
    quotient_inverse(rho, &Multipartition::new(comps), p)
}

fn require_rouquier(rho: &Partition, p: usize, d: usize) -> Result<()> {
    if !is_rouquier(rho, p, d)? {
        return Err(SpinError::NotRouquier(d));
    }
    Ok(())
}

/// Level-one sum over the runner-`k` slide of `rho`, extending `u` by the hat word of `i`.
pub fn slide_family_degree_sum(rho: &Partition, u: &Tableau, i: usize, k: usize, p: usize) -> Result<LaurentPoly> {
    let ell = ell_of(p)?;
    require_rouquier(rho, p, 1)?;
    let lam = slide_down(rho, k, p)?;
    extension_sum(u, &Multipartition::single(lam), &gg_hat(ell, i)?.letters, p)
}

/// `rho^N` with component `s` (1-based) replaced by the runner-`k` slide.
fn level_slide(rho: &Partition, level: usize, s: usize, k: usize, p: usize) -> Result<Multipartition> {
    let mut comps = vec![rho.clone(); level];
    comps[s - 1] = slide_down(rho, k, p)?;
    Ok(Multipartition::new(comps))
}

/// Weight-one double sum `sum_lambda ||lambda|| (sum_S deg S/deg U)(sum_T deg T/deg V)`.
pub fn weight_one_double_sum(
    rho: &Partition,
    p: usize,
    u: &Tableau,
    v: &Tableau,
    i: usize,
    j: usize,
) -> Result<LaurentPoly> {
    let ell = ell_of(p)?;
    require_rouquier(rho, p, 1)?;
    let level = u.shape.level();
    let (gi, gj) = (gg_hat(ell, i)?, gg_hat(ell, j)?);
    let mut total = LaurentPoly::zero();
    for s in 1..=level {
        for k in 0..=ell {
            let lam = level_slide(rho, level, s, k, p)?;
            let a = extension_sum(u, &lam, &gi.letters, p)?;
            let b = extension_sum(v, &lam, &gj.letters, p)?;
            total += &(&(&a * &b) * &multi_norm(&lam, p));
        }
    }
    Ok(total)
}

/// `1 + q^4 + ... + q^{4(N-1)}`
pub fn level_factor(level: usize) -> LaurentPoly {
    LaurentPoly::from_terms((0..level).map(|s| (4 * s as i32, 1)))
}

pub fn dim_y1(level: usize, i: usize, j: usize) -> LaurentPoly {
    &level_factor(level) * &zigzag_block_dim(i, j)
}

fn rho_level(rho: &Partition, level: usize) -> Multipartition {
    Multipartition::new(vec![rho.clone(); level])
}

/// Distinct residue words of `Std_p(rho^N)`.
fn core_words(rho: &Partition, level: usize, p: usize) -> Vec<Word> {
    let set: BTreeSet<Vec<usize>> = enumerate_std(&rho_level(rho, level), p, None)
        .iter()
        .map(|t| t.filling.iter().map(|n| n.residue(p)).collect())
        .collect();
    set.into_iter().map(Word::new).collect()
}

/// `dim_q R^{N Lambda_0}_{N cont(rho)}` as a sum over pairs of words.
pub fn core_block_dim(rho: &Partition, level: usize, p: usize) -> Result<LaurentPoly> {
    let words = core_words(rho, level, p);
    let alpha = multi_content(&rho_level(rho, level), p)?;
    let mut total = LaurentPoly::zero();
    for k in &words {
        for l in &words {
            total += &graded_dim(level, &alpha, k, l, p)?.dim;
        }
    }
    Ok(total)
}

/// `sum_{k,l} dim_q e(k g^i) R e(l g^j)` over words of `N cont(rho)`.
pub fn gg_truncated_dim(rho: &Partition, p: usize, level: usize, i: usize, j: usize) -> Result<LaurentPoly> {
    let ell = ell_of(p)?;
    require_rouquier(rho, p, 1)?;
    let words = core_words(rho, level, p);
    let theta = &multi_content(&rho_level(rho, level), p)? + &RootVector::delta(ell);
    let (gi, gj) = (gg_word(ell, &[i])?, gg_word(ell, &[j])?);
    let (gi, gj) = (&gi, &gj);
    let pairs: Vec<(Word, Word)> =
        words.iter().flat_map(|k| words.iter().map(move |l| (k.concat(gi), l.concat(gj)))).collect();
    let parts = map_ordered(&pairs, |(a, b)| divided_power_dim(level, &theta, a, b, p));
    let mut total = LaurentPoly::zero();
    for x in parts {
        total += &x?;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Ungraded identities

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn dim_yd_closed(p: usize, d: usize) -> Result<u128> {
    ell_of(p)?;
    Ok(factorial(d) * (2 * p as u128 - 3).pow(d as u32))
}

fn multinomial(parts: &[usize]) -> u128 {
    let n: usize = parts.iter().sum();
    parts.iter().fold(factorial(n), |acc, &k| acc / factorial(k))
}

/// Sum over `P_0(rho, d)` of `2^{2d - h(l0) - 2|l_l|} binom^2 K'^2 prod K^2`.
pub fn dim_yd_sum(rho: &Partition, p: usize, d: usize) -> Result<u128> {
    let ell = ell_of(p)?;
    let mut total = 0u128;
    for lam in strict_block_partitions(rho, p, d)? {
        let quot = bar_quotient(&lam, p)?;
        let c = &quot.components;
        let sizes: Vec<usize> = c.iter().map(Partition::size).collect();
        let exp = 2 * d - c[0].height() - 2 * sizes[ell];
        let mut term = (1u128 << exp) * multinomial(&sizes).pow(2) * strict_kostka(&c[0])?.pow(2);
        for comp in &c[1..] {
            term *= kostka(comp).pow(2);
        }
        total += term;
    }
    Ok(total)
}

fn count_tableaux(lam: &Partition, strict: bool, memo: &mut HashMap<Partition, u128>) -> u128 {
    if lam.is_empty() {
        return 1;
    }
    if let Some(&c) = memo.get(lam) {
        return c;
    }
    let mut total = 0;
    for r in 1..=lam.height() {
        let len = lam.row(r);
        if lam.row(r + 1) < len {
            let mu = lam.with_row(r, len - 1).expect("corner");
            if !strict || mu.is_strict() {
                total += count_tableaux(&mu, strict, memo);
            }
        }
    }
    memo.insert(lam.clone(), total);
    total
}

/// Number of standard Young tableaux.
pub fn kostka(lam: &Partition) -> u128 {
    count_tableaux(lam, false, &mut HashMap::new())
}

/// Number of tableaux whose every prefix has distinct parts.
pub fn strict_kostka(lam: &Partition) -> Result<u128> {
    if !lam.is_strict() {
        return Err(SpinError::Invalid(format!("{:?} is not strict", lam.parts())));
    }
    Ok(count_tableaux(lam, true, &mut HashMap::new()))
}

fn quotient_contains(big: &Multipartition, small: &Multipartition) -> bool {
    big.components.iter().zip(&small.components).all(|(a, b)| a.contains(b))
}

/// Strict `(rho, lambda)`-sequences, each step a slide on one runner; optionally
/// with the colour sequence fixed.
pub fn seq_count(rho: &Partition, lam: &Partition, p: usize, colors: Option<&Word>) -> Result<u128> {
    let ell = ell_of(p)?;
    if !lam.is_strict() {
        return Err(SpinError::Invalid(format!("{:?} is not strict", lam.parts())));
    }
    if bar_core(lam, p)? != *rho {
        return Err(SpinError::Invalid("core of lambda differs from rho".into()));
    }
    let d = bar_weight(lam, p)?;
    if let Some(w) = colors {
        w.validate(ell)?;
        if w.len() != d {
            return Ok(0);
        }
    }
    let target = bar_quotient(lam, p)?;
    let mut layer: BTreeMap<Partition, u128> = BTreeMap::new();
    layer.insert(rho.clone(), 1);
    for c in 0..d {
        let mut next = BTreeMap::new();
        for (mu, n) in &layer {
            let quot = bar_quotient(mu, p)?;
            for t in 0..=ell {
                if colors.is_some_and(|w| w.letters[c] != t) {
                    continue;
                }
                let comp = &quot.components[t];
                for r in 1..=comp.height() + 1 {
                    let Some(grown) = comp.with_row(r, comp.row(r) + 1) else { continue };
                    let mut comps = quot.components.clone();
                    comps[t] = grown;
                    let q2 = Multipartition::new(comps);
                    if !quotient_contains(&target, &q2) {
                        continue;
                    }
                    let nu = quotient_inverse(rho, &q2, p)?;
                    if nu.is_strict() && nu.contains(mu) && lam.contains(&nu) {
                        *next.entry(nu).or_insert(0) += n;
                    }
                }
            }
        }
        layer = next;
    }
    Ok(layer.get(lam).copied().unwrap_or(0))
}

/// `binom(d; |l0|..|l_l|) K'_{l0} prod K_{l_j}`
pub fn seq_count_formula(lam: &Partition, p: usize, colored: bool) -> Result<u128> {
    let quot = bar_quotient(lam, p)?;
    let sizes: Vec<usize> = quot.components.iter().map(Partition::size).collect();
    let mut out = strict_kostka(&quot.components[0])?;
    for c in &quot.components[1..] {
        out *= kostka(c);
    }
    Ok(if colored { out } else { out * multinomial(&sizes) })
}

/// A divided word `i` of content `N cont(rho)` with `dim_q e(i) R e(i) = 1`, found by
/// walking the Weyl orbit of `N Lambda_0` with maximal divided powers.
pub fn find_unit_divided_word(rho: &Partition, level: usize, p: usize) -> Result<Word> {
    let ell = ell_of(p)?;
    let target = multi_content(&rho_level(rho, level), p)?;
    let mut cont = RootVector::zero(ell);
    let (mut letters, mut exps) = (vec![], vec![]);
    while cont != target {
        let mut moved = false;
        for i in 0..=ell {
            let a = if i == 0 { level as i64 } else { 0 } - coroot_pairing(i, &cont)?;
            if a <= 0 {
                continue;
            }
            let mut next = cont.clone();
            next.add_simple(i, a);
            if next.le(&target) {
                cont = next;
                letters.push(i);
                exps.push(a as u32);
                moved = true;
                break;
            }
        }
        if !moved {
            return Err(SpinError::Invalid("no extremal path to the core content".into()));
        }
    }
    let w = Word::divided(letters, exps)?;
    let dim = divided_power_dim(level, &target, &w, &w, p)?;
    if dim != LaurentPoly::one() {
        return Err(SpinError::Invalid(format!("word {} has dimension {dim}", w.render(ell))));
    }
    Ok(w)
}

/// `sum_{lambda in P_0(n)} 2^{n-h} K'^2`
pub fn strict_square_sum(n: usize) -> Result<u128> {
    let mut total = 0;
    for lam in strict_partitions(n) {
        total += (1u128 << (n - lam.height())) * strict_kostka(&lam)?.pow(2);
    }
    Ok(total)
}

pub fn square_sum(n: usize) -> u128 {
    partitions(n).iter().map(|l| kostka(l).pow(2)).sum()
}
