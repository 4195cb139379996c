//! Addable and removable nodes, node degrees, and p-standard tableaux.

use std::cmp::Reverse;

use serde::{Deserialize, Serialize};

use crate::bar_partitions::{residue_of_col, zeta_factor, Multipartition, Partition};
use crate::error::{Result, SpinError};
use crate::laurent::LaurentPoly;
use crate::root_datum::{ell_of, q_exponent, Word};

/// Node `(row, col)` of component `comp`; all indices 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 3]", into = "[usize; 3]")]
pub struct Node {
    pub row: usize,
    pub col: usize,
    pub comp: usize,
}

impl From<[usize; 3]> for Node {
    fn from(a: [usize; 3]) -> Self {
        Node { row: a[0], col: a[1], comp: a[2] }
    }
}

impl From<Node> for [usize; 3] {
    fn from(n: Node) -> Self {
        [n.row, n.col, n.comp]
    }
}

impl Node {
    pub fn new(row: usize, col: usize, comp: usize) -> Self {
        Self { row, col, comp }
    }

    pub fn residue(&self, p: usize) -> usize {
        residue_of_col(self.col, p)
    }

    /// Strict part of the node preorder: later components come first, then columns.
    pub fn precedes(&self, other: &Node) -> bool {
        self.comp > other.comp || (self.comp == other.comp && self.col < other.col)
    }

    /// Key compatible with the preorder, refined by row.
    fn order_key(&self) -> (Reverse<usize>, usize, usize) {
        (Reverse(self.comp), self.col, self.row)
    }
}

/// The four node sets for a fixed residue.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSets {
    pub addable: Vec<Node>,
    pub removable: Vec<Node>,
    pub proper_addable: Vec<Node>,
    pub proper_removable: Vec<Node>,
}

fn component_sets(lam: &Partition, t: usize, i: usize, p: usize, out: &mut NodeSets) {
    let res = |c: usize| residue_of_col(c, p);
    let strict_row = |r: usize, len: usize| lam.with_row(r, len).is_some_and(|m| m.is_p_strict(p));
    let h = lam.height();
    for r in 1..=h {
        let len = lam.row(r);
        if res(len) == i && strict_row(r, len - 1) {
            out.removable.push(Node::new(r, len, t));
            out.proper_removable.push(Node::new(r, len, t));
        }
        if len >= 2 && res(len - 1) == i && res(len) == i && strict_row(r, len - 1) && strict_row(r, len - 2) {
            out.removable.push(Node::new(r, len - 1, t));
        }
    }
    for r in 1..=h + 1 {
        let len = lam.row(r);
        if res(len + 1) == i && strict_row(r, len + 1) {
            out.addable.push(Node::new(r, len + 1, t));
            out.proper_addable.push(Node::new(r, len + 1, t));
        }
        if res(len + 1) == i && res(len + 2) == i && strict_row(r, len + 1) && strict_row(r, len + 2) {
            out.addable.push(Node::new(r, len + 2, t));
        }
    }
}

/// `i`-addable, `i`-removable and the proper variants, over all components.
pub fn node_sets(m: &Multipartition, i: usize, p: usize) -> NodeSets {
    let mut out = NodeSets::default();
    for (t, lam) in m.components.iter().enumerate() {
        component_sets(lam, t + 1, i, p, &mut out);
    }
    for v in [&mut out.addable, &mut out.removable, &mut out.proper_addable, &mut out.proper_removable] {
        v.sort_by_key(Node::order_key);
    }
    out
}

pub fn partition_node_sets(lam: &Partition, i: usize, p: usize) -> NodeSets {
    node_sets(&Multipartition::single(lam.clone()), i, p)
}

fn component<'a>(m: &'a Multipartition, node: &Node) -> Result<&'a Partition> {
    m.components
        .get(node.comp.wrapping_sub(1))
        .ok_or_else(|| SpinError::Invalid(format!("component {} out of range", node.comp)))
}

fn multiplicity(lam: &Partition, len: usize) -> usize {
    lam.parts().iter().filter(|&&x| x == len).count()
}

/// Degree factor `d^B` of a properly addable node.
pub fn d_up(b: &Node, m: &Multipartition, p: usize) -> Result<LaurentPoly> {
    let ell = ell_of(p)?;
    let i = b.residue(p);
    let sets = node_sets(m, i, p);
    if !sets.proper_addable.contains(b) {
        return Err(SpinError::NotProper { row: b.row, col: b.col, comp: b.comp, kind: "addable" });
    }
    let below = |v: &[Node]| v.iter().filter(|c| c.precedes(b)).count() as i32;
    let eta = below(&sets.addable) - below(&sets.removable);
    let lam = component(m, b)?;
    let l = b.col - 1;
    let zeta = if l > 0 && l % p == 0 { zeta_factor(multiplicity(lam, l)) } else { LaurentPoly::one() };
    Ok(&LaurentPoly::q_pow(q_exponent(ell, i) * eta) * &zeta)
}

/// Degree factor `d_A` of a properly removable node.
pub fn d_down(a: &Node, m: &Multipartition, p: usize) -> Result<LaurentPoly> {
    let ell = ell_of(p)?;
    let i = a.residue(p);
    let sets = node_sets(m, i, p);
    if !sets.proper_removable.contains(a) {
        return Err(SpinError::NotProper { row: a.row, col: a.col, comp: a.comp, kind: "removable" });
    }
    let above = |v: &[Node]| v.iter().filter(|c| a.precedes(c)).count() as i32;
    let eta = above(&sets.removable) - above(&sets.addable);
    let lam = component(m, a)?;
    let zeta = if a.col % p == 0 { zeta_factor(multiplicity(lam, a.col)) } else { LaurentPoly::one() };
    Ok(&LaurentPoly::q_pow(q_exponent(ell, i) * eta) * &zeta)
}

/// Shape with one node added or removed (no validity check beyond shape).
pub fn add_node(m: &Multipartition, n: &Node) -> Option<Multipartition> {
    let lam = m.components.get(n.comp - 1)?;
    if lam.row(n.row) + 1 != n.col {
        return None;
    }
    let mut out = m.clone();
    out.components[n.comp - 1] = lam.with_row(n.row, n.col)?;
    Some(out)
}

pub fn remove_node(m: &Multipartition, n: &Node) -> Option<Multipartition> {
    let lam = m.components.get(n.comp - 1)?;
    if lam.row(n.row) != n.col {
        return None;
    }
    let mut out = m.clone();
    out.components[n.comp - 1] = lam.with_row(n.row, n.col - 1)?;
    Some(out)
}

/// Nodes whose removal leaves a p-strict multipartition, in preorder.
pub fn proper_removable_all(m: &Multipartition, p: usize) -> Vec<Node> {
    let ell = (p - 1) / 2;
    let mut out: Vec<Node> = (0..=ell).flat_map(|i| node_sets(m, i, p).proper_removable).collect();
    out.sort_by_key(Node::order_key);
    out
}

pub fn proper_addable_all(m: &Multipartition, p: usize) -> Vec<Node> {
    let ell = (p - 1) / 2;
    let mut out: Vec<Node> = (0..=ell).flat_map(|i| node_sets(m, i, p).proper_addable).collect();
    out.sort_by_key(Node::order_key);
    out
}

// ---------------------------------------------------------------------------
// Tableaux

/// `filling[k-1]` is the node holding entry `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tableau {
    pub shape: Multipartition,
    pub filling: Vec<Node>,
}

impl Tableau {
    pub fn empty(level: usize) -> Self {
        Self { shape: Multipartition::empty(level), filling: vec![] }
    }

    pub fn len(&self) -> usize {
        self.filling.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filling.is_empty()
    }

    /// Shapes `T({1..k})` for `k = 0..n`, or `None` if some prefix is not a diagram.
    pub fn prefix_shapes(&self) -> Option<Vec<Multipartition>> {
        let mut cur = Multipartition::empty(self.shape.level());
        let mut out = vec![cur.clone()];
        for n in &self.filling {
            cur = add_node(&cur, n)?;
            out.push(cur.clone());
        }
        (cur == self.shape).then_some(out)
    }

    pub fn is_p_standard(&self, p: usize) -> bool {
        self.prefix_shapes().is_some_and(|v| v.iter().all(|s| s.is_p_strict(p)))
    }

    /// Every prefix shape has distinct parts in each component.
    pub fn is_strictly_standard(&self) -> bool {
        self.prefix_shapes().is_some_and(|v| v.iter().all(Multipartition::is_strict))
    }

    /// Restriction to `{1..k}`.
    pub fn restrict(&self, k: usize) -> Tableau {
        let filling = self.filling[..k].to_vec();
        let mut shape = Multipartition::empty(self.shape.level());
        for n in &filling {
            shape = add_node(&shape, n).expect("prefix of a tableau");
        }
        Tableau { shape, filling }
    }
}

/// Residue word `i^T`.
pub fn word_of(t: &Tableau, p: usize) -> Word {
    Word::new(t.filling.iter().map(|n| n.residue(p)).collect())
}

/// `deg(T) = prod_k d^{T(k)}(T({1..k-1}))`.
pub fn tableau_degree(t: &Tableau, p: usize) -> Result<LaurentPoly> {
    if !t.is_p_standard(p) {
        return Err(SpinError::NotStandard);
    }
    let mut cur = Multipartition::empty(t.shape.level());
    let mut deg = LaurentPoly::one();
    for n in &t.filling {
        deg = &deg * &d_up(n, &cur, p)?;
        cur = add_node(&cur, n).ok_or(SpinError::NotStandard)?;
    }
    Ok(deg)
}

/// `Std_p(shape)` (optionally restricted to residue word `filter`), by backtracking over
/// proper removals. With `strict`, every prefix must have distinct parts (`Std_0`).
pub fn enumerate_std_with(m: &Multipartition, p: usize, filter: Option<&Word>, strict: bool) -> Vec<Tableau> {
    if !m.is_p_strict(p) || (strict && !m.is_strict()) {
        return vec![];
    }
    if let Some(w) = filter {
        if w.len() != m.size() {
            return vec![];
        }
    }
    let mut out = Vec::new();
    let mut rev: Vec<Node> = Vec::new();
    fn rec(
        cur: &Multipartition,
        p: usize,
        filter: Option<&[usize]>,
        strict: bool,
        rev: &mut Vec<Node>,
        shape: &Multipartition,
        out: &mut Vec<Tableau>,
    ) {
        let n = cur.size();
        if n == 0 {
            let filling: Vec<Node> = rev.iter().rev().copied().collect();
            out.push(Tableau { shape: shape.clone(), filling });
            return;
        }
        for a in proper_removable_all(cur, p) {
            if let Some(w) = filter {
                if a.residue(p) != w[n - 1] {
                    continue;
                }
            }
            let next = remove_node(cur, &a).expect("removable");
            if strict && !next.is_strict() {
                continue;
            }
            rev.push(a);
            rec(&next, p, filter, strict, rev, shape, out);
            rev.pop();
        }
    }
    rec(m, p, filter.map(|w| w.letters.as_slice()), strict, &mut rev, m, &mut out);
    out
}

pub fn enumerate_std(m: &Multipartition, p: usize, filter: Option<&Word>) -> Vec<Tableau> {
    enumerate_std_with(m, p, filter, false)
}

pub fn enumerate_std_strict(m: &Multipartition, p: usize, filter: Option<&Word>) -> Vec<Tableau> {
    enumerate_std_with(m, p, filter, true)
}

/// All p-standard tableaux of level `level` with residue word `w`, grown forward by proper additions.
pub fn std_by_word(level: usize, p: usize, w: &Word) -> Vec<Tableau> {
    let mut cur = vec![Tableau::empty(level)];
    for &i in &w.letters {
        let mut next = Vec::new();
        for t in &cur {
            for b in node_sets(&t.shape, i, p).proper_addable {
                let mut t2 = t.clone();
                t2.shape = add_node(&t.shape, &b).expect("addable");
                t2.filling.push(b);
                next.push(t2);
            }
        }
        cur = next;
    }
    cur
}
