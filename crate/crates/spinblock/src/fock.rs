//! Level-N q-Fock space on p-strict multipartitions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bar_partitions::{multi_content, multi_norm, p_strict_multipartitions, Multipartition};
use crate::error::{Result, SpinError};
use crate::laurent::LaurentPoly;
use crate::root_datum::{ell_of, fundamental_pairing, pairing, q_exponent, word_content, RootVector, Word};
use crate::tableaux::{add_node, d_down, d_up, enumerate_std, node_sets, remove_node, tableau_degree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector {
    pub p: usize,
    pub level: usize,
    terms: BTreeMap<Multipartition, LaurentPoly>,
}

#[derive(Serialize, Deserialize)]
struct Term {
    multipartition: Multipartition,
    poly: LaurentPoly,
}

impl FockVector {
    pub fn zero(p: usize, level: usize) -> Self {
        Self { p, level, terms: BTreeMap::new() }
    }

    /// `u_{(empty, ..., empty)}`
    pub fn vacuum(p: usize, level: usize) -> Self {
        Self::basis(p, Multipartition::empty(level))
    }

    pub fn basis(p: usize, m: Multipartition) -> Self {
        let level = m.level();
        let mut v = Self::zero(p, level);
        v.add_term(m, LaurentPoly::one());
        v
    }

    pub fn add_term(&mut self, m: Multipartition, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multipartition, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Multipartition) -> LaurentPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.p, self.level);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, x) in &other.terms {
            out.add_term(m.clone(), x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&LaurentPoly::constant(-1)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v: Vec<Term> =
            self.terms.iter().map(|(m, c)| Term { multipartition: m.clone(), poly: c.clone() }).collect();
        serde_json::to_value(v).expect("serializable")
    }

    pub fn from_json(p: usize, level: usize, v: &serde_json::Value) -> Result<Self> {
        let terms: Vec<Term> =
            serde_json::from_value(v.clone()).map_err(|e| SpinError::Invalid(e.to_string()))?;
        let mut out = Self::zero(p, level);
        for t in terms {
            if t.multipartition.level() != level {
                return Err(SpinError::LevelMismatch(t.multipartition.level(), level));
            }
            out.add_term(t.multipartition, t.poly);
        }
        Ok(out)
    }
}

/// `F_i u = sum_B d^B u^B` over properly addable `i`-nodes.
pub fn apply_f(i: usize, v: &FockVector) -> Result<FockVector> {
    let mut out = FockVector::zero(v.p, v.level);
    for (m, c) in v.terms() {
        for b in node_sets(m, i, v.p).proper_addable {
            let d = d_up(&b, m, v.p)?;
            out.add_term(add_node(m, &b).expect("addable node"), c * &d);
        }
    }
    Ok(out)
}

/// `E_i u = sum_A d_A u_A` over properly removable `i`-nodes.
pub fn apply_e(i: usize, v: &FockVector) -> Result<FockVector> {
    let mut out = FockVector::zero(v.p, v.level);
    for (m, c) in v.terms() {
        for a in node_sets(m, i, v.p).proper_removable {
            let d = d_down(&a, m, v.p)?;
            out.add_term(remove_node(m, &a).expect("removable node"), c * &d);
        }
    }
    Ok(out)
}

/// Exponent of `T_i` on `u_m`: `(alpha_i | N Lambda_0 - cont(m))`.
pub fn t_exponent(i: usize, m: &Multipartition, p: usize) -> Result<i64> {
    let ell = ell_of(p)?;
    let cont = multi_content(m, p)?;
    Ok(m.level() as i64 * fundamental_pairing(ell, i, 0) - pairing(&RootVector::simple(ell, i), &cont)?)
}

/// `T_i^{sign}` for `sign = +1` or `-1`.
pub fn apply_t(i: usize, sign: i32, v: &FockVector) -> Result<FockVector> {
    let mut out = FockVector::zero(v.p, v.level);
    for (m, c) in v.terms() {
        let e = t_exponent(i, m, v.p)? as i32 * sign;
        out.add_term(m.clone(), c.shift(e));
    }
    Ok(out)
}

/// `(u_m, u_n) = delta_{m,n} ||m||`, extended bilinearly.
pub fn form(v: &FockVector, w: &FockVector) -> Result<LaurentPoly> {
    if v.level != w.level {
        return Err(SpinError::LevelMismatch(v.level, w.level));
    }
    if v.p != w.p {
        return Err(SpinError::Invalid("parameter mismatch".into()));
    }
    let mut out = LaurentPoly::zero();
    for (m, c) in v.terms() {
        if let Some(d) = w.terms.get(m) {
            out += &(&(c * d) * &multi_norm(m, v.p));
        }
    }
    Ok(out)
}

/// `F_{i_n} ... F_{i_1} v_+`
pub fn apply_word(w: &Word, p: usize, level: usize) -> Result<FockVector> {
    let mut v = FockVector::vacuum(p, level);
    for &i in &w.expand().letters {
        v = apply_f(i, &v)?;
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormMode {
    Direct,
    TableauSum,
}

/// `(F_{i_n}..F_{i_1} v_+, F_{j_n}..F_{j_1} v_+)`.
pub fn fv_form(wi: &Word, wj: &Word, level: usize, p: usize, mode: FormMode) -> Result<LaurentPoly> {
    let ell = ell_of(p)?;
    let (wi, wj) = (wi.expand(), wj.expand());
    if wi.len() != wj.len() || word_content(&wi, ell)? != word_content(&wj, ell)? {
        return Ok(LaurentPoly::zero());
    }
    match mode {
        FormMode::Direct => form(&apply_word(&wi, p, level)?, &apply_word(&wj, p, level)?),
        FormMode::TableauSum => {
            let theta = word_content(&wi, ell)?;
            let mut out = LaurentPoly::zero();
            for m in p_strict_multipartitions(wi.len(), level, p) {
                if multi_content(&m, p)? != theta {
                    continue;
                }
                let si: LaurentPoly =
                    enumerate_std(&m, p, Some(&wi)).iter().map(|t| tableau_degree(t, p)).sum::<Result<_>>()?;
                if si.is_zero() {
                    continue;
                }
                let sj: LaurentPoly =
                    enumerate_std(&m, p, Some(&wj)).iter().map(|t| tableau_degree(t, p)).sum::<Result<_>>()?;
                out += &(&(&si * &sj) * &multi_norm(&m, p));
            }
            Ok(out)
        }
    }
}

/// Checks `(E_i F_j - F_j E_i) u = delta_ij (T_i - T_i^{-1})/(q_i - q_i^{-1}) u` on a basis vector.
pub fn serre_holds(i: usize, j: usize, m: &Multipartition, p: usize) -> Result<bool> {
    let ell = ell_of(p)?;
    let u = FockVector::basis(p, m.clone());
    let lhs = apply_e(i, &apply_f(j, &u)?)?.sub(&apply_f(j, &apply_e(i, &u)?)?);
    let rhs = if i == j {
        let s = q_exponent(ell, i);
        let num = &LaurentPoly::q_pow(t_exponent(i, m, p)? as i32) - &LaurentPoly::q_pow(-t_exponent(i, m, p)? as i32);
        let den = &LaurentPoly::q_pow(s) - &LaurentPoly::q_pow(-s);
        let c = num
            .div_exact(&den)
            .ok_or_else(|| SpinError::NonDivisible(format!("T_{i} quotient on {m:?}")))?;
        u.scale(&c)
    } else {
        FockVector::zero(p, m.level())
    };
    Ok(lhs == rhs)
}

/// `(F_i v, w) = (v, q_i^{-1} T_i E_i w)`
pub fn contravariance_holds(i: usize, v: &FockVector, w: &FockVector) -> Result<bool> {
    let ell = ell_of(v.p)?;
    let lhs = form(&apply_f(i, v)?, w)?;
    let rhs_vec = apply_t(i, 1, &apply_e(i, w)?)?.scale(&LaurentPoly::q_pow(-q_exponent(ell, i)));
    Ok(lhs == form(v, &rhs_vec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bar_partitions::Partition;

    fn single(v: &[usize]) -> Multipartition {
        Multipartition::single(Partition::new(v.to_vec()).unwrap())
    }

    #[test]
    fn f0_on_552() {
        let u = FockVector::basis(5, single(&[5, 5, 2]));
        let v = apply_f(0, &u).unwrap();
        let mut expect = FockVector::zero(5, 1);
        expect.add_term(single(&[6, 5, 2]), LaurentPoly::from_terms([(0, 1), (4, -1)]));
        expect.add_term(single(&[5, 5, 2, 1]), LaurentPoly::one());
        assert_eq!(v, expect);
    }

    #[test]
    fn vacuum_facts() {
        for p in [3, 5] {
            let ell = (p - 1) / 2;
            for level in 1..3 {
                let v = FockVector::vacuum(p, level);
                for i in 0..=ell {
                    assert!(apply_e(i, &v).unwrap().is_zero());
                }
                assert_eq!(form(&v, &v).unwrap(), LaurentPoly::one());
            }
            let t = apply_t(0, 1, &FockVector::vacuum(p, 1)).unwrap();
            assert_eq!(t, FockVector::vacuum(p, 1).scale(&LaurentPoly::q_pow(1)));
        }
    }

    #[test]
    fn forms() {
        let u3 = FockVector::basis(3, single(&[3]));
        assert_eq!(form(&u3, &u3).unwrap(), LaurentPoly::from_terms([(0, 1), (2, 1)]));
        let u21 = FockVector::basis(3, single(&[2, 1]));
        assert!(form(&u3, &u21).unwrap().is_zero());
        assert!(form(&u3, &FockVector::vacuum(3, 2)).is_err());
        let w = Word::parse("010").unwrap();
        let expect = LaurentPoly::from_terms([(0, 1), (2, 1), (4, 1)]);
        assert_eq!(fv_form(&w, &w, 1, 3, FormMode::Direct).unwrap(), expect);
        assert_eq!(fv_form(&w, &w, 1, 3, FormMode::TableauSum).unwrap(), expect);
        let other = Word::parse("011").unwrap();
        assert!(fv_form(&w, &other, 1, 3, FormMode::Direct).unwrap().is_zero());
    }

    #[test]
    fn weight_grading() {
        for p in [3, 5] {
            let ell = (p - 1) / 2;
            for n in 0..6 {
                for m in p_strict_multipartitions(n, 2, p) {
                    let c = multi_content(&m, p).unwrap();
                    for i in 0..=ell {
                        let v = apply_f(i, &FockVector::basis(p, m.clone())).unwrap();
                        for (k, _) in v.terms() {
                            let mut expect = c.clone();
                            expect.add_simple(i, 1);
                            assert_eq!(multi_content(k, p).unwrap(), expect);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let v = apply_word(&Word::parse("0100").unwrap(), 3, 2).unwrap();
        let js = v.to_json();
        assert_eq!(FockVector::from_json(3, 2, &js).unwrap(), v);
    }

    #[test]
    fn serre_small() {
        for p in [3, 5] {
            let ell = (p - 1) / 2;
            for n in 0..5 {
                for m in p_strict_multipartitions(n, 1, p) {
                    for i in 0..=ell {
                        for j in 0..=ell {
                            assert!(serre_holds(i, j, &m, p).unwrap(), "{m:?} {i} {j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn contravariance_small() {
        for p in [3, 5] {
            let ell = (p - 1) / 2;
            for n in 0..5 {
                let shapes = p_strict_multipartitions(n, 2, p);
                let bigger = p_strict_multipartitions(n + 1, 2, p);
                for m in shapes.iter().take(12) {
                    for k in bigger.iter().take(12) {
                        let v = FockVector::basis(p, m.clone());
                        let w = FockVector::basis(p, k.clone());
                        for i in 0..=ell {
                            assert!(contravariance_holds(i, &v, &w).unwrap());
                        }
                    }
                }
            }
        }
    }
}
