//! Finite-dimensional graded superalgebras given by structure constants, the
//! Brauer tree algebras, Clifford and matrix superalgebras, wreath superproducts
//! and the affine algebra `H_d(A_l)` with its PBW normal form.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Result, SpinError};

pub type Coeff = Rational64;
/// Sparse linear combination of basis indices.
pub type Elem = BTreeMap<usize, Coeff>;

pub fn add_into(acc: &mut Elem, x: &Elem, c: Coeff) {
    for (&k, &v) in x {
        let e = acc.entry(k).or_insert_with(Coeff::zero);
        *e += v * c;
        if e.is_zero() {
            acc.remove(&k);
        }
    }
}

pub fn basis_elem(i: usize) -> Elem {
    BTreeMap::from([(i, Coeff::one())])
}

pub fn scale(x: &Elem, c: Coeff) -> Elem {
    let mut out = Elem::new();
    add_into(&mut out, x, c);
    out
}

pub fn sum(xs: &[(Elem, Coeff)]) -> Elem {
    let mut out = Elem::new();
    for (x, c) in xs {
        add_into(&mut out, x, *c);
    }
    out
}

fn int(k: i64) -> Coeff {
    Coeff::from_integer(k)
}

pub trait SuperAlgebra {
    fn dim(&self) -> usize;
    fn label(&self, i: usize) -> String;
    /// `(degree, parity)`
    fn bidegree(&self, i: usize) -> (i32, u8);
    fn mul_basis(&self, i: usize, j: usize) -> Elem;
    fn unit(&self) -> Elem;

    fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = Elem::new();
        for (&i, &a) in x {
            for (&j, &b) in y {
                add_into(&mut out, &self.mul_basis(i, j), a * b);
            }
        }
        out
    }

    fn parity(&self, i: usize) -> u8 {
        self.bidegree(i).1
    }

    /// `sum_n dim A_n q^n` as `degree -> dimension`.
    fn graded_dim(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for i in 0..self.dim() {
            *out.entry(self.bidegree(i).0).or_insert(0) += 1;
        }
        out
    }

    /// `a -> (-1)^{|a|} a`
    fn sigma(&self, x: &Elem) -> Elem {
        x.iter().map(|(&k, &v)| (k, if self.parity(k) == 1 { -v } else { v })).collect()
    }
}

/// Checks `(xy)z = x(yz)` on the given triples of basis indices.
pub fn associative_on(alg: &dyn SuperAlgebra, triples: impl IntoIterator<Item = (usize, usize, usize)>) -> bool {
    triples.into_iter().all(|(i, j, k)| {
        let ij = alg.mul_basis(i, j);
        let jk = alg.mul_basis(j, k);
        alg.mul(&ij, &basis_elem(k)) == alg.mul(&basis_elem(i), &jk)
    })
}

pub fn is_associative(alg: &dyn SuperAlgebra) -> bool {
    let n = alg.dim();
    associative_on(alg, (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))))
}

/// Unit laws and bidegree additivity of every nonzero basis product.
pub fn is_graded_unital(alg: &dyn SuperAlgebra) -> bool {
    let n = alg.dim();
    let one = alg.unit();
    for i in 0..n {
        let b = basis_elem(i);
        if alg.mul(&one, &b) != b || alg.mul(&b, &one) != b {
            return false;
        }
        for j in 0..n {
            let (di, pi) = alg.bidegree(i);
            let (dj, pj) = alg.bidegree(j);
            for &k in alg.mul_basis(i, j).keys() {
                if alg.bidegree(k) != (di + dj, (pi + pj) % 2) {
                    return false;
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Structure-constant algebras

#[derive(Clone, Debug, PartialEq)]
pub struct TableAlgebra {
    pub labels: Vec<String>,
    pub bidegrees: Vec<(i32, u8)>,
    table: Vec<Elem>,
    unit: Elem,
}

impl TableAlgebra {
    pub fn new(labels: Vec<String>, bidegrees: Vec<(i32, u8)>, unit: Elem, f: impl Fn(usize, usize) -> Elem) -> Self {
        let n = labels.len();
        let table = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { labels, bidegrees, table, unit }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn b(&self, label: &str) -> Elem {
        basis_elem(self.index_of(label).unwrap_or_else(|| panic!("no basis element {label}")))
    }

    /// Labels, bidegrees and nonzero structure constants as JSON.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.dim();
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let e = &self.table[i * n + j];
                if !e.is_empty() {
                    let terms: Vec<(usize, String)> = e.iter().map(|(&k, v)| (k, v.to_string())).collect();
                    products.push(serde_json::json!([i, j, terms]));
                }
            }
        }
        serde_json::json!({
            "basis": self.labels,
            "bidegrees": self.bidegrees,
            "products": products,
        })
    }
}

impl SuperAlgebra for TableAlgebra {
    fn dim(&self) -> usize {
        self.labels.len()
    }
    fn label(&self, i: usize) -> String {
        self.labels[i].clone()
    }
    fn bidegree(&self, i: usize) -> (i32, u8) {
        self.bidegrees[i]
    }
    fn mul_basis(&self, i: usize, j: usize) -> Elem {
        self.table[i * self.dim() + j].clone()
    }
    fn unit(&self) -> Elem {
        self.unit.clone()
    }
}

/// Arrow of a quiver with relations of Brauer-line type; `left`/`right` are the
/// vertices with `e^left x e^right = x`.
struct Arrow {
    name: String,
    left: usize,
    right: usize,
    bideg: (i32, u8),
}

/// Path algebra modulo: paths of length >= 3 vanish, non-cycles of length 2 vanish,
/// all 2-cycles at a vertex are equal to `c_vertex`.
fn brauer_line(vertices: &[String], cycle_names: &[String], vertex_parity: u8, arrows: Vec<Arrow>) -> TableAlgebra {
    let nv = vertices.len();
    let mut labels: Vec<String> = vertices.to_vec();
    labels.extend(cycle_names.iter().cloned());
    labels.extend(arrows.iter().map(|a| a.name.clone()));
    let mut bidegrees = vec![(0, 0); nv];
    bidegrees.extend(std::iter::repeat_n((4, vertex_parity), nv));
    bidegrees.extend(arrows.iter().map(|a| a.bideg));
    // (left, right) idempotents for every basis element
    let mut ends: Vec<(usize, usize)> = (0..nv).map(|v| (v, v)).collect();
    ends.extend((0..nv).map(|v| (v, v)));
    ends.extend(arrows.iter().map(|a| (a.left, a.right)));
    let kind = |i: usize| if i < nv { 0 } else if i < 2 * nv { 2 } else { 1 }; // path length
    let unit: Elem = (0..nv).map(|v| (v, Coeff::one())).collect();
    TableAlgebra::new(labels, bidegrees, unit, |i, j| {
        let (li, ri) = ends[i];
        let (lj, rj) = ends[j];
        if ri != lj {
            return Elem::new();
        }
        match (kind(i), kind(j)) {
            (0, _) => basis_elem(j),
            (_, 0) => basis_elem(i),
            (1, 1) if rj == li => basis_elem(nv + li),
            _ => Elem::new(),
        }
    })
}

/// Brauer tree algebra `A_l`, basis `e^j, c^j, a^{k,k+1}, a^{k+1,k}, u`.
pub fn build_a(ell: usize) -> Result<TableAlgebra> {
    if ell == 0 {
        return Err(SpinError::Invalid("l must be at least 1".into()));
    }
    let vertices: Vec<String> = (0..ell).map(|j| format!("e{j}")).collect();
    let cycles: Vec<String> = (0..ell).map(|j| format!("c{j}")).collect();
    let mut arrows = Vec::new();
    for k in 0..ell - 1 {
        arrows.push(Arrow { name: format!("a{},{}", k, k + 1), left: k, right: k + 1, bideg: (0, 0) });
    }
    for k in 0..ell - 1 {
        arrows.push(Arrow { name: format!("a{},{}", k + 1, k), left: k + 1, right: k, bideg: (4, 0) });
    }
    arrows.push(Arrow { name: "u".into(), left: 0, right: 0, bideg: (2, 1) });
    Ok(brauer_line(&vertices, &cycles, 0, arrows))
}

/// `tr(c^j) = 1`, zero on the rest of the standard basis.
pub fn trace_a(a: &TableAlgebra, x: &Elem) -> Coeff {
    x.iter().filter(|(&k, _)| a.labels[k].starts_with('c')).map(|(_, &v)| v).sum()
}

/// Dense matrix of rationals.
pub type Matrix = Vec<Vec<Coeff>>;

pub fn gram_matrix(a: &TableAlgebra) -> Matrix {
    let n = a.dim();
    (0..n).map(|i| (0..n).map(|j| trace_a(a, &a.mul_basis(i, j))).collect()).collect()
}

pub fn determinant(m: &Matrix) -> Coeff {
    let mut m = m.clone();
    let n = m.len();
    let mut det = Coeff::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else { return Coeff::zero() };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                let v = m[col][c];
                m[r][c] -= f * v;
            }
        }
    }
    det
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Coeff::one() } else { Coeff::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let d = a[col][col];
        for c in 0..2 * n {
            a[col][c] /= d;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..2 * n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `nabla = sum_l a^l (x) b^l` for dual bases under `(a,b) = tr(ab)`, as a map
/// `(i, j) -> coefficient` on pairs of basis indices.
pub fn nabla_from_trace(a: &TableAlgebra) -> Option<BTreeMap<(usize, usize), Coeff>> {
    let g = gram_matrix(a);
    let inv = inverse(&g)?;
    // b^l = sum_k X[l][k] a^k with sum_k G[m][k] X[l][k] = delta, so X = (G^{-1})^T
    let n = a.dim();
    let mut out = BTreeMap::new();
    for l in 0..n {
        for k in 0..n {
            let x = inv[k][l];
            if !x.is_zero() {
                out.insert((l, k), x);
            }
        }
    }
    Some(out)
}

/// The displayed `nabla = u(x)u + sum c^j(x)e^j + e^j(x)c^j + sum a(x)a`.
pub fn nabla_formula(a: &TableAlgebra, ell: usize) -> BTreeMap<(usize, usize), Coeff> {
    let ix = |s: String| a.index_of(&s).expect("label");
    let mut out = BTreeMap::new();
    out.insert((ix("u".into()), ix("u".into())), Coeff::one());
    for j in 0..ell {
        out.insert((ix(format!("c{j}")), ix(format!("e{j}"))), Coeff::one());
        out.insert((ix(format!("e{j}")), ix(format!("c{j}"))), Coeff::one());
    }
    for k in 0..ell.saturating_sub(1) {
        out.insert((ix(format!("a{},{}", k + 1, k)), ix(format!("a{},{}", k, k + 1))), Coeff::one());
        out.insert((ix(format!("a{},{}", k, k + 1)), ix(format!("a{},{}", k + 1, k))), Coeff::one());
    }
    out
}

// ---------------------------------------------------------------------------
// Clifford, matrix and tensor superalgebras

/// `C_n`: basis `c_S` for subsets `S` (bitmasks), `c_r^2 = 1`, anticommuting.
pub fn clifford(n: usize) -> TableAlgebra {
    let dim = 1usize << n;
    let label = |s: usize| {
        if s == 0 {
            "1".to_string()
        } else {
            (0..n).filter(|r| s >> r & 1 == 1).map(|r| format!("c{}", r + 1)).collect::<Vec<_>>().join("")
        }
    };
    let labels = (0..dim).map(label).collect();
    let bidegrees = (0..dim).map(|s| (0, (s.count_ones() % 2) as u8)).collect();
    TableAlgebra::new(labels, bidegrees, basis_elem(0), |s, t| {
        let mut swaps = 0;
        for r in 0..n {
            if t >> r & 1 == 1 {
                swaps += (s >> (r + 1)).count_ones();
            }
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        BTreeMap::from([(s ^ t, int(sign))])
    })
}

/// `M_{m|n}`: matrix units `E_{r,s}` with parity `p(r) + p(s)`.
pub fn matrix_super(m: usize, n: usize) -> TableAlgebra {
    let size = m + n;
    let par = |r: usize| u8::from(r >= m);
    let mut labels = Vec::new();
    let mut bidegrees = Vec::new();
    for r in 0..size {
        for s in 0..size {
            labels.push(format!("E{},{}", r + 1, s + 1));
            bidegrees.push((0, (par(r) + par(s)) % 2));
        }
    }
    let unit = (0..size).map(|r| (r * size + r, Coeff::one())).collect();
    TableAlgebra::new(labels, bidegrees, unit, |i, j| {
        let (r, s) = (i / size, i % size);
        let (t, u) = (j / size, j % size);
        if s == t {
            basis_elem(r * size + u)
        } else {
            Elem::new()
        }
    })
}

/// `(a(x)b)(a'(x)b') = (-1)^{|b||a'|} aa' (x) bb'`
pub fn tensor(a: &dyn SuperAlgebra, b: &dyn SuperAlgebra) -> TableAlgebra {
    let (na, nb) = (a.dim(), b.dim());
    let mut labels = Vec::new();
    let mut bidegrees = Vec::new();
    for i in 0..na {
        for j in 0..nb {
            labels.push(format!("{}⊗{}", a.label(i), b.label(j)));
            let (da, pa) = a.bidegree(i);
            let (db, pb) = b.bidegree(j);
            bidegrees.push((da + db, (pa + pb) % 2));
        }
    }
    let mut unit = Elem::new();
    for (&i, &x) in &a.unit() {
        for (&j, &y) in &b.unit() {
            unit.insert(i * nb + j, x * y);
        }
    }
    TableAlgebra::new(labels, bidegrees, unit, |x, y| {
        let (i, j) = (x / nb, x % nb);
        let (k, l) = (y / nb, y % nb);
        let sign = if b.parity(j) * a.parity(k) == 1 { -1 } else { 1 };
        let mut out = Elem::new();
        for (&p, &c) in &a.mul_basis(i, k) {
            for (&q, &d) in &b.mul_basis(j, l) {
                add_into(&mut out, &basis_elem(p * nb + q), c * d * int(sign));
            }
        }
        out
    })
}

// ---------------------------------------------------------------------------
// B_l and the isomorphism A_l (x) C_1 -> B_l

/// `B_l` in its quiver basis together with the involution swapping primed and
/// unprimed vertices and arrows.
pub struct ZigzagB {
    pub algebra: TableAlgebra,
    pub sigma: Vec<usize>,
}

pub fn build_b(ell: usize) -> Result<ZigzagB> {
    if ell == 0 {
        return Err(SpinError::Invalid("l must be at least 1".into()));
    }
    // vertex j is index j, vertex j' is index ell + j
    let mut vertices: Vec<String> = (0..ell).map(|j| format!("f{j}")).collect();
    vertices.extend((0..ell).map(|j| format!("f{j}'")));
    let mut cycles: Vec<String> = (0..ell).map(|j| format!("c{j}")).collect();
    cycles.extend((0..ell).map(|j| format!("c{j}'")));
    let mut arrows = Vec::new();
    for (shift, tick) in [(0, ""), (ell, "'")] {
        for k in 0..ell - 1 {
            arrows.push(Arrow {
                name: format!("b{k}{tick},{}{tick}", k + 1),
                left: shift + k,
                right: shift + k + 1,
                bideg: (0, 0),
            });
        }
        for k in 0..ell - 1 {
            arrows.push(Arrow {
                name: format!("b{}{tick},{k}{tick}", k + 1),
                left: shift + k + 1,
                right: shift + k,
                bideg: (4, 0),
            });
        }
    }
    arrows.push(Arrow { name: "v".into(), left: ell, right: 0, bideg: (2, 0) });
    arrows.push(Arrow { name: "v'".into(), left: 0, right: ell, bideg: (2, 0) });
    let algebra = brauer_line(&vertices, &cycles, 0, arrows);
    let swap = |s: &str| -> String {
        match s {
            "v" => "v'".into(),
            "v'" => "v".into(),
            _ if s.contains('\'') => s.replace('\'', ""),
            _ => {
                // add a tick after every vertex index
                let head = &s[..1];
                let rest = &s[1..];
                let parts: Vec<String> = rest.split(',').map(|x| format!("{x}'")).collect();
                format!("{head}{}", parts.join(","))
            }
        }
    };
    let sigma = (0..algebra.dim())
        .map(|i| algebra.index_of(&swap(&algebra.labels[i])).expect("primed partner"))
        .collect();
    Ok(ZigzagB { algebra, sigma })
}

impl ZigzagB {
    pub fn apply_sigma(&self, x: &Elem) -> Elem {
        x.iter().map(|(&k, &v)| (self.sigma[k], v)).collect()
    }

    /// Homogeneous basis `x + sigma(x)` (even) and `x - sigma(x)` (odd).
    pub fn homogeneous(&self) -> TableAlgebra {
        let a = &self.algebra;
        let reps: Vec<usize> = (0..a.dim()).filter(|&i| i < self.sigma[i]).collect();
        let mut vecs: Vec<Elem> = Vec::new();
        let mut labels = Vec::new();
        let mut bidegrees = Vec::new();
        for &i in &reps {
            for (sign, par, tag) in [(1, 0u8, "+"), (-1, 1u8, "-")] {
                vecs.push(BTreeMap::from([(i, Coeff::one()), (self.sigma[i], int(sign))]));
                labels.push(format!("{}{tag}", a.labels[i]));
                bidegrees.push((a.bidegree(i).0, par));
            }
        }
        // coordinates: x = sum over reps of (x_i + x_{s i})/2 * plus + (x_i - x_{s i})/2 * minus
        let coords = |x: &Elem| -> Elem {
            let mut out = Elem::new();
            for (r, &i) in reps.iter().enumerate() {
                let xi = x.get(&i).copied().unwrap_or_default();
                let xs = x.get(&self.sigma[i]).copied().unwrap_or_default();
                let half = Coeff::new(1, 2);
                add_into(&mut out, &basis_elem(2 * r), (xi + xs) * half);
                add_into(&mut out, &basis_elem(2 * r + 1), (xi - xs) * half);
            }
            out
        };
        let unit = coords(&a.unit());
        TableAlgebra::new(labels, bidegrees, unit, |i, j| coords(&a.mul(&vecs[i], &vecs[j])))
    }
}

/// Results of checking the two assignment lists between `A_l (x) C_1` and `B_l`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ZigzagReport {
    pub forward_multiplicative: bool,
    pub backward_multiplicative: bool,
    pub round_trip_source: bool,
    pub round_trip_target: bool,
    pub preserves_bidegree: bool,
}

impl ZigzagReport {
    pub fn all(&self) -> bool {
        self.forward_multiplicative
            && self.backward_multiplicative
            && self.round_trip_source
            && self.round_trip_target
            && self.preserves_bidegree
    }
}

fn linear(images: &[Elem], x: &Elem) -> Elem {
    let mut out = Elem::new();
    for (&k, &v) in x {
        add_into(&mut out, &images[k], v);
    }
    out
}

fn multiplicative(src: &dyn SuperAlgebra, dst: &dyn SuperAlgebra, images: &[Elem]) -> bool {
    let n = src.dim();
    if linear(images, &src.unit()) != dst.unit() {
        return false;
    }
    (0..n).all(|i| {
        (0..n).all(|j| linear(images, &src.mul_basis(i, j)) == dst.mul(&images[i], &images[j]))
    })
}

pub fn check_zigzag_iso(ell: usize) -> Result<ZigzagReport> {
    let a = build_a(ell)?;
    let c1 = clifford(1);
    let ac = tensor(&a, &c1);
    let bq = build_b(ell)?;
    let b = &bq.algebra;
    let half = Coeff::new(1, 2);
    let bb = |s: &str| b.b(s);
    let ab = |s: &str, gamma: usize| basis_elem(a.index_of(s).expect("label") * 2 + gamma);

    // A (x) C_1 -> B on generators x(x)1, then extended through products
    let mut gen_img: BTreeMap<String, Elem> = BTreeMap::new();
    for j in 0..ell {
        gen_img.insert(format!("e{j}"), sum(&[(bb(&format!("f{j}")), int(1)), (bb(&format!("f{j}'")), int(1))]));
    }
    gen_img.insert("u".into(), sum(&[(bb("v"), int(1)), (bb("v'"), int(-1))]));
    for k in 0..ell - 1 {
        gen_img.insert(
            format!("a{},{}", k, k + 1),
            sum(&[(bb(&format!("b{},{}", k, k + 1)), int(1)), (bb(&format!("b{}',{}'", k, k + 1)), int(1))]),
        );
        gen_img.insert(
            format!("a{},{}", k + 1, k),
            sum(&[(bb(&format!("b{},{}", k + 1, k)), int(-1)), (bb(&format!("b{}',{}'", k + 1, k)), int(-1))]),
        );
    }
    gen_img.insert("c0".into(), b.mul(&gen_img["u"], &gen_img["u"]));
    for j in 1..ell {
        let x = b.mul(&gen_img[&format!("a{},{}", j, j - 1)], &gen_img[&format!("a{},{}", j - 1, j)]);
        gen_img.insert(format!("c{j}"), x);
    }
    let one_c = sum(&(0..ell)
        .flat_map(|i| [(bb(&format!("f{i}")), int(1)), (bb(&format!("f{i}'")), int(-1))])
        .collect::<Vec<_>>());
    let mut forward = Vec::with_capacity(ac.dim());
    for i in 0..a.dim() {
        let x = gen_img[&a.labels[i]].clone();
        forward.push(x.clone());
        forward.push(b.mul(&x, &one_c));
    }

    // B -> A (x) C_1
    let plus = |s: &str, sign: i64| sum(&[(ab(s, 0), half * int(sign)), (ab(s, 1), half * int(sign))]);
    let minus = |s: &str, sign: i64| sum(&[(ab(s, 0), half * int(sign)), (ab(s, 1), -half * int(sign))]);
    let mut back_img: BTreeMap<String, Elem> = BTreeMap::new();
    for j in 0..ell {
        back_img.insert(format!("f{j}"), plus(&format!("e{j}"), 1));
        back_img.insert(format!("f{j}'"), minus(&format!("e{j}"), 1));
    }
    back_img.insert("v".into(), plus("u", 1));
    back_img.insert("v'".into(), minus("u", -1));
    for k in 0..ell - 1 {
        let up = format!("a{},{}", k, k + 1);
        let down = format!("a{},{}", k + 1, k);
        back_img.insert(format!("b{},{}", k, k + 1), plus(&up, 1));
        back_img.insert(format!("b{}',{}'", k, k + 1), minus(&up, 1));
        back_img.insert(format!("b{},{}", k + 1, k), plus(&down, -1));
        back_img.insert(format!("b{}',{}'", k + 1, k), minus(&down, -1));
    }
    back_img.insert("c0".into(), ac.mul(&back_img["v'"], &back_img["v"]));
    back_img.insert("c0'".into(), ac.mul(&back_img["v"], &back_img["v'"]));
    for j in 1..ell {
        for t in ["", "'"] {
            let x = ac.mul(&back_img[&format!("b{j}{t},{}{t}", j - 1)], &back_img[&format!("b{}{t},{j}{t}", j - 1)]);
            back_img.insert(format!("c{j}{t}"), x);
        }
    }
    let backward: Vec<Elem> = (0..b.dim()).map(|i| back_img[&b.labels[i]].clone()).collect();

    let mut report = ZigzagReport {
        forward_multiplicative: multiplicative(&ac, b, &forward),
        backward_multiplicative: multiplicative(b, &ac, &backward),
        ..Default::default()
    };
    report.round_trip_source = (0..ac.dim()).all(|i| linear(&backward, &forward[i]) == basis_elem(i));
    report.round_trip_target = (0..b.dim()).all(|i| linear(&forward, &backward[i]) == basis_elem(i));
    report.preserves_bidegree = (0..ac.dim()).all(|i| {
        let img = &forward[i];
        let deg_ok = img.keys().all(|&k| b.bidegree(k).0 == ac.bidegree(i).0);
        let par_ok = bq.apply_sigma(img) == linear(&forward, &ac.sigma(&basis_elem(i)));
        deg_ok && par_ok
    });
    Ok(report)
}

// ---------------------------------------------------------------------------
// Permutations and wreath superproducts

pub type Perm = Vec<usize>;

pub fn permutations(d: usize) -> Vec<Perm> {
    let mut out = vec![vec![]];
    for n in 0..d {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=n {
                let mut q = p.clone();
                q.insert(pos, n);
                next.push(q);
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// `(w w')(i) = w(w'(i))`
pub fn compose(w: &[usize], v: &[usize]) -> Perm {
    v.iter().map(|&i| w[i]).collect()
}

pub fn transposition(d: usize, r: usize) -> Perm {
    let mut w: Perm = (0..d).collect();
    w.swap(r, r + 1);
    w
}

/// `s_{r_1} ... s_{r_k} = w`, positions 0-based.
pub fn reduced_word(w: &[usize]) -> Vec<usize> {
    // bubble sort of w^{-1}: repeatedly strip a right descent
    let mut cur = w.to_vec();
    let mut word = Vec::new();
    loop {
        let Some(r) = (0..cur.len().saturating_sub(1)).find(|&r| cur[r] > cur[r + 1]) else { break };
        cur.swap(r, r + 1);
        word.push(r);
    }
    word.reverse();
    word
}

/// `^w(v_1 (x) ... (x) v_d)`: factor `v_a` moves to position `w(a)`; the sign counts
/// pairs of odd factors whose relative order is reversed.
pub fn permute_tensor(w: &[usize], parts: &[usize], parity: impl Fn(usize) -> u8) -> (Vec<usize>, i64) {
    let d = parts.len();
    let mut out = vec![0; d];
    let mut odd = 0;
    for a in 0..d {
        out[w[a]] = parts[a];
        for c in a + 1..d {
            if w[a] > w[c] {
                odd += (parity(parts[a]) * parity(parts[c])) as usize;
            }
        }
    }
    (out, if odd % 2 == 0 { 1 } else { -1 })
}

/// Product of pure tensors `(x_1..x_d)(y_1..y_d)` with the Koszul sign.
pub(crate) fn tensor_power_mul(alg: &dyn SuperAlgebra, x: &[usize], y: &[usize]) -> Vec<(Vec<usize>, Coeff)> {
    let d = x.len();
    let mut odd = 0;
    for i in 0..d {
        for j in 0..i {
            odd += (alg.parity(x[i]) * alg.parity(y[j])) as usize;
        }
    }
    let sign = if odd % 2 == 0 { Coeff::one() } else { -Coeff::one() };
    let mut acc: Vec<(Vec<usize>, Coeff)> = vec![(vec![], sign)];
    for i in 0..d {
        let prod = alg.mul_basis(x[i], y[i]);
        let mut next = Vec::new();
        for (t, c) in &acc {
            for (&k, &v) in &prod {
                let mut t2 = t.clone();
                t2.push(k);
                next.push((t2, *c * v));
            }
        }
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    acc
}

/// `A wr S_d` with basis `(b_1 (x) ... (x) b_d) w`, indexed lexicographically.
pub struct Wreath<'a> {
    pub base: &'a dyn SuperAlgebra,
    pub d: usize,
    pub perms: Vec<Perm>,
}

impl<'a> Wreath<'a> {
    pub fn new(base: &'a dyn SuperAlgebra, d: usize) -> Self {
        Self { base, d, perms: permutations(d) }
    }

    pub fn index(&self, parts: &[usize], w: &[usize]) -> usize {
        let n = self.base.dim();
        let t = parts.iter().fold(0, |acc, &b| acc * n + b);
        t * self.perms.len() + self.perms.iter().position(|p| p == w).expect("permutation")
    }

    pub fn decode(&self, i: usize) -> (Vec<usize>, Perm) {
        let n = self.base.dim();
        let w = self.perms[i % self.perms.len()].clone();
        let mut t = i / self.perms.len();
        let mut parts = vec![0; self.d];
        for k in (0..self.d).rev() {
            parts[k] = t % n;
            t /= n;
        }
        (parts, w)
    }
}

impl SuperAlgebra for Wreath<'_> {
    fn dim(&self) -> usize {
        self.base.dim().pow(self.d as u32) * self.perms.len()
    }
    fn label(&self, i: usize) -> String {
        let (parts, w) = self.decode(i);
        let t: Vec<String> = parts.iter().map(|&b| self.base.label(b)).collect();
        format!("{}·{:?}", t.join("⊗"), w)
    }
    fn bidegree(&self, i: usize) -> (i32, u8) {
        let (parts, _) = self.decode(i);
        parts.iter().fold((0, 0), |(d, p), &b| {
            let (db, pb) = self.base.bidegree(b);
            (d + db, (p + pb) % 2)
        })
    }
    fn mul_basis(&self, i: usize, j: usize) -> Elem {
        let (x, w) = self.decode(i);
        let (y, v) = self.decode(j);
        let (wy, sign) = permute_tensor(&w, &y, |b| self.base.parity(b));
        let wv = compose(&w, &v);
        let mut out = Elem::new();
        for (t, c) in tensor_power_mul(self.base, &x, &wy) {
            add_into(&mut out, &basis_elem(self.index(&t, &wv)), c * int(sign));
        }
        out
    }
    fn unit(&self) -> Elem {
        let id: Perm = (0..self.d).collect();
        let mut acc: Vec<(Vec<usize>, Coeff)> = vec![(vec![], Coeff::one())];
        let u = self.base.unit();
        for _ in 0..self.d {
            acc = acc
                .into_iter()
                .flat_map(|(t, c)| {
                    u.iter().map(move |(&k, &v)| {
                        let mut t2 = t.clone();
                        t2.push(k);
                        (t2, c * v)
                    })
                })
                .collect();
        }
        let mut out = Elem::new();
        for (t, c) in acc {
            add_into(&mut out, &basis_elem(self.index(&t, &id)), c);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// H_d(A_l)

/// PBW monomial `z_1^{a_1} ... z_d^{a_d} (b_1 (x) ... (x) b_d) w`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HdMonomial {
    pub z: Vec<u32>,
    pub b: Vec<usize>,
    pub w: Perm,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HdElement {
    pub terms: BTreeMap<HdMonomial, i64>,
}

impl HdElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: HdMonomial, c: i64) -> Self {
        let mut x = Self::zero();
        x.add_term(m, c);
        x
    }

    pub fn add_term(&mut self, m: HdMonomial, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn add(&mut self, other: &HdElement, c: i64) {
        for (m, &v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn z_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.z.iter().sum()).max().unwrap_or(0)
    }
}

/// `H_d(A_l)` with multiplication by rewriting into normal form.
pub struct Hd {
    pub a: TableAlgebra,
    pub ell: usize,
    pub d: usize,
    idx: HashMapLabels,
}

type HashMapLabels = BTreeMap<String, usize>;

impl Hd {
    pub fn new(ell: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(SpinError::Invalid("d must be at least 1".into()));
        }
        let a = build_a(ell)?;
        let idx = a.labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Ok(Self { a, ell, d, idx })
    }

    fn ix(&self, label: &str) -> usize {
        self.idx[label]
    }

    fn unit_index(&self) -> Vec<usize> {
        // the unit of A is sum e^j; pure tensors of it expand
        vec![]
    }

    pub fn identity_perm(&self) -> Perm {
        (0..self.d).collect()
    }

    pub fn one(&self) -> HdElement {
        let _ = self.unit_index();
        let mut out = HdElement::zero();
        for t in self.pure_unit_tensors() {
            out.add_term(HdMonomial { z: vec![0; self.d], b: t, w: self.identity_perm() }, 1);
        }
        out
    }

    fn pure_unit_tensors(&self) -> Vec<Vec<usize>> {
        let es: Vec<usize> = (0..self.ell).map(|j| self.ix(&format!("e{j}"))).collect();
        let mut out = vec![vec![]];
        for _ in 0..self.d {
            out = out
                .into_iter()
                .flat_map(|t: Vec<usize>| {
                    es.iter().map(move |&e| {
                        let mut t2 = t.clone();
                        t2.push(e);
                        t2
                    })
                })
                .collect();
        }
        out
    }

    /// `z_t` (0-based position).
    pub fn z(&self, t: usize) -> HdElement {
        let mut out = HdElement::zero();
        for (m, c) in self.one().terms {
            let mut z = m.z.clone();
            z[t] += 1;
            out.add_term(HdMonomial { z, ..m }, c);
        }
        out
    }

    /// `s_r` swapping positions `r, r+1` (0-based).
    pub fn s(&self, r: usize) -> HdElement {
        self.perm(&transposition(self.d, r))
    }

    pub fn perm(&self, w: &[usize]) -> HdElement {
        let mut out = HdElement::zero();
        for (m, c) in self.one().terms {
            out.add_term(HdMonomial { w: w.to_vec(), ..m }, c);
        }
        out
    }

    /// `1 (x) .. (x) x (x) .. (x) 1` with `x` at position `t`.
    pub fn single(&self, t: usize, label: &str) -> HdElement {
        let x = self.ix(label);
        let mut out = HdElement::zero();
        for (m, c) in self.one().terms {
            let mut b = m.b.clone();
            let prod = self.a.mul_basis(b[t], x);
            for (&k, v) in &prod {
                b[t] = k;
                out.add_term(HdMonomial { z: m.z.clone(), b: b.clone(), w: m.w.clone() }, c * v.to_integer());
            }
        }
        out
    }

    /// Pure tensor as an element.
    pub fn tensor_elem(&self, b: &[usize]) -> HdElement {
        HdElement::monomial(HdMonomial { z: vec![0; self.d], b: b.to_vec(), w: self.identity_perm() }, 1)
    }

    /// `e^i` for a sequence of vertices.
    pub fn idempotent(&self, seq: &[usize]) -> HdElement {
        let b: Vec<usize> = seq.iter().map(|&j| self.ix(&format!("e{j}"))).collect();
        self.tensor_elem(&b)
    }

    /// Right-hand side of the `s_r z_t` commutation rule, summed over `e^i`.
    pub fn szid_correction(&self, r: usize, t: usize) -> Vec<(Vec<usize>, i64)> {
        let coef = i64::from(r == t) - i64::from(r + 1 == t);
        let touch = r == t || r + 1 == t;
        if !touch {
            return vec![];
        }
        let mut out = Vec::new();
        for i in 0..self.ell {
            for j in 0..self.ell {
                let mut base = vec![usize::MAX; self.d];
                base[r] = self.ix(&format!("e{i}"));
                base[r + 1] = self.ix(&format!("e{j}"));
                let mut push = |pr: usize, pr1: usize, c: i64| {
                    let mut t = base.clone();
                    t[r] = pr;
                    t[r + 1] = pr1;
                    out.push((t, c));
                };
                if i == j {
                    let (e, c) = (self.ix(&format!("e{i}")), self.ix(&format!("c{i}")));
                    push(c, e, coef);
                    push(e, c, coef);
                    if i == 0 {
                        let u = self.ix("u");
                        push(u, u, 1);
                    }
                } else if i.abs_diff(j) == 1 {
                    push(self.ix(&format!("a{j},{i}")), self.ix(&format!("a{i},{j}")), coef);
                }
            }
        }
        // other positions carry the unit
        let es: Vec<usize> = (0..self.ell).map(|j| self.ix(&format!("e{j}"))).collect();
        let mut full = Vec::new();
        for (t, c) in out {
            let mut acc = vec![t];
            for pos in 0..self.d {
                if pos == r || pos == r + 1 {
                    continue;
                }
                acc = acc
                    .into_iter()
                    .flat_map(|t| {
                        es.iter().map(move |&e| {
                            let mut t2 = t.clone();
                            t2[pos] = e;
                            t2
                        })
                    })
                    .collect();
            }
            full.extend(acc.into_iter().map(|t| (t, c)));
        }
        full
    }

    /// Same correction computed from the distinguished element: `delta_{rt} nabla - delta_{r+1,t} ^s nabla`.
    pub fn nabla_correction(&self, r: usize, t: usize) -> HdElement {
        let nab = nabla_formula(&self.a, self.ell);
        let mut out = HdElement::zero();
        let s = transposition(self.d, r);
        for ((x, y), c) in &nab {
            let c = c.to_integer();
            let mut b = vec![0; self.d];
            b[r] = *x;
            b[r + 1] = *y;
            // x_r y_{r+1} = (.. x .. y ..) with units elsewhere
            for tens in self.fill_units(&b, &[r, r + 1]) {
                if r == t {
                    out.add_term(HdMonomial { z: vec![0; self.d], b: tens.clone(), w: self.identity_perm() }, c);
                }
                if r + 1 == t {
                    let (sw, sign) = permute_tensor(&s, &tens, |k| self.a.parity(k));
                    out.add_term(HdMonomial { z: vec![0; self.d], b: sw, w: self.identity_perm() }, -c * sign);
                }
            }
        }
        out
    }

    fn fill_units(&self, b: &[usize], fixed: &[usize]) -> Vec<Vec<usize>> {
        let es: Vec<usize> = (0..self.ell).map(|j| self.ix(&format!("e{j}"))).collect();
        let mut acc = vec![b.to_vec()];
        for pos in 0..self.d {
            if fixed.contains(&pos) {
                continue;
            }
            acc = acc
                .into_iter()
                .flat_map(|t| {
                    es.iter().map(move |&e| {
                        let mut t2 = t.clone();
                        t2[pos] = e;
                        t2
                    })
                })
                .collect();
        }
        acc
    }

    /// `beta * (z^a b w)` for a pure tensor `beta`.
    fn left_tensor(&self, beta: &[usize], m: &HdMonomial) -> HdElement {
        // beta z^a = (+-) z^a beta, u anticommutes with z
        let mut flips = 0u32;
        for t in 0..self.d {
            if self.a.parity(beta[t]) == 1 {
                flips += m.z[t];
            }
        }
        let sign = if flips % 2 == 0 { 1 } else { -1 };
        let mut out = HdElement::zero();
        for (t, c) in tensor_power_mul(&self.a, beta, &m.b) {
            out.add_term(HdMonomial { z: m.z.clone(), b: t, w: m.w.clone() }, sign * c.to_integer());
        }
        out
    }

    /// `s_r * (z^a b w)`
    fn left_s(&self, r: usize, m: &HdMonomial) -> HdElement {
        let Some(t) = (0..self.d).find(|&t| m.z[t] > 0) else {
            let s = transposition(self.d, r);
            let (sb, sign) = permute_tensor(&s, &m.b, |k| self.a.parity(k));
            return HdElement::monomial(HdMonomial { z: m.z.clone(), b: sb, w: compose(&s, &m.w) }, sign);
        };
        let mut rest = m.clone();
        rest.z[t] -= 1;
        // s_r z_t Y = z_{s_r(t)} (s_r Y) + corr_{r,t} Y
        let st = if t == r {
            r + 1
        } else if t == r + 1 {
            r
        } else {
            t
        };
        let mut out = HdElement::zero();
        for (mm, c) in self.left_s(r, &rest).terms {
            let mut z = mm.z.clone();
            z[st] += 1;
            out.add_term(HdMonomial { z, ..mm }, c);
        }
        for (beta, c) in self.szid_correction(r, t) {
            out.add(&self.left_tensor(&beta, &rest), c);
        }
        out
    }

    fn left_monomial(&self, m: &HdMonomial, y: &HdElement) -> HdElement {
        // m = z^a b w; w y = s_{r1}(..(s_{rk} y))
        let mut cur = y.clone();
        for &r in reduced_word(&m.w).iter().rev() {
            let mut next = HdElement::zero();
            for (mm, c) in &cur.terms {
                next.add(&self.left_s(r, mm), *c);
            }
            cur = next;
        }
        let mut out = HdElement::zero();
        for (mm, c) in &cur.terms {
            for (mm2, c2) in self.left_tensor(&m.b, mm).terms {
                let z: Vec<u32> = mm2.z.iter().zip(&m.z).map(|(a, b)| a + b).collect();
                out.add_term(HdMonomial { z, ..mm2 }, c * c2);
            }
        }
        out
    }

    pub fn mul(&self, x: &HdElement, y: &HdElement) -> HdElement {
        let mut out = HdElement::zero();
        for (m, c) in &x.terms {
            out.add(&self.left_monomial(m, y), *c);
        }
        out
    }

    pub fn label(&self, m: &HdMonomial) -> String {
        let z: Vec<String> = m
            .z
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(t, &a)| if a == 1 { format!("z{}", t + 1) } else { format!("z{}^{a}", t + 1) })
            .collect();
        let b: Vec<String> = m.b.iter().map(|&k| self.a.labels[k].clone()).collect();
        format!("{}[{}]{:?}", z.join(""), b.join("⊗"), m.w)
    }

    /// Basis of the `z = 0` part, which is the wreath superproduct.
    pub fn quotient_basis(&self) -> Vec<HdMonomial> {
        let n = self.a.dim();
        let mut tensors = vec![vec![]];
        for _ in 0..self.d {
            tensors = tensors
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
        let perms = permutations(self.d);
        tensors
            .into_iter()
            .flat_map(|b| perms.iter().map(move |w| HdMonomial { z: vec![0; b.len()], b: b.clone(), w: w.clone() }))
            .collect()
    }
}

/// Dimension of the `z = 0` quotient of `H_d(A_l)`.
pub fn hd_quotient_wreath_dim(ell: usize, d: usize) -> Result<u128> {
    if d == 0 {
        return Ok(1);
    }
    Ok(Hd::new(ell, d)?.quotient_basis().len() as u128)
}
