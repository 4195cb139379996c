//! Browser bindings for the demo page: bar data of a partition, graded
//! dimensions and small superblock decompositions.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use spinblock::bar_partitions::{bar_core, bar_quotient, bar_weight, content, Partition};
use spinblock::dims::graded_dim_words;
use spinblock::root_datum::Word;
use spinblock::spin_blocks::superblocks;
use spinblock::SpinError;

/// Largest n offered on the page; the regular module has n! elements.
pub const DEMO_MAX_N: usize = 6;

#[derive(Debug, Serialize, PartialEq)]
pub struct BarData {
    pub core: Vec<usize>,
    pub quotient: Vec<Vec<usize>>,
    pub weight: usize,
    pub content: Vec<i64>,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct DimData {
    pub terms: Vec<(i32, i64)>,
    pub text: String,
    pub at_one: i64,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct BlockRow {
    pub theta: Vec<i64>,
    pub dimension: u64,
    pub weight_words: usize,
}

fn parse_parts(s: &str) -> Result<Partition, SpinError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Partition::empty());
    }
    let parts = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| SpinError::Invalid(format!("bad part {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Partition::new(parts)
}

pub fn bar_data_native(p: usize, lambda: &str) -> Result<BarData, SpinError> {
    let lam = parse_parts(lambda)?;
    lam.require_p_strict(p)?;
    Ok(BarData {
        core: bar_core(&lam, p)?.parts().to_vec(),
        quotient: bar_quotient(&lam, p)?.components.iter().map(|c| c.parts().to_vec()).collect(),
        weight: bar_weight(&lam, p)?,
        content: content(&lam, p)?.coeffs().unwrap_or_default(),
    })
}

pub fn graded_dim_native(p: usize, level: usize, i: &str, j: &str) -> Result<DimData, SpinError> {
    if level == 0 {
        return Err(SpinError::Invalid("N must be at least 1".into()));
    }
    let (wi, wj) = (Word::parse(i)?, Word::parse(j)?);
    if wi.len() > 8 || wj.len() > 8 {
        return Err(SpinError::Invalid("words are limited to 8 letters on this page".into()));
    }
    let d = graded_dim_words(level, &wi, &wj, p)?.dim;
    Ok(DimData { terms: d.terms().collect(), text: d.to_string(), at_one: d.eval_one() })
}

pub fn blocks_native(n: usize, p: usize) -> Result<Vec<BlockRow>, SpinError> {
    if n > DEMO_MAX_N {
        return Err(SpinError::Invalid(format!("n is limited to {DEMO_MAX_N} on this page")));
    }
    Ok(superblocks(n, p)?
        .into_iter()
        .map(|b| BlockRow {
            theta: b.theta.coeffs().unwrap_or_default(),
            dimension: b.dimension as u64,
            weight_words: b.num_weight_words,
        })
        .collect())
}

fn to_js<T: Serialize>(r: Result<T, SpinError>) -> Result<JsValue, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_wasm_bindgen::to_value(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = barData)]
pub fn bar_data(p: usize, lambda: &str) -> Result<JsValue, JsError> {
    to_js(bar_data_native(p, lambda))
}

#[wasm_bindgen(js_name = gradedDim)]
pub fn graded_dim(p: usize, level: usize, i: &str, j: &str) -> Result<JsValue, JsError> {
    to_js(graded_dim_native(p, level, i, j))
}

#[wasm_bindgen]
pub fn blocks(n: usize, p: usize) -> Result<JsValue, JsError> {
    to_js(blocks_native(n, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn native_entry_points() {
        let b = bar_data_native(5, "16,11,10,10,9,4,1").unwrap();
        assert_eq!(b.core, vec![1]);
        assert_eq!(b.quotient, vec![vec![2, 2], vec![3, 3, 2], vec![]]);
        let d = graded_dim_native(3, 1, "010", "010").unwrap();
        assert_eq!(d.terms, vec![(0, 1), (2, 1), (4, 1)]);
        assert_eq!(d.at_one, 3);
        let rows = blocks_native(3, 3).unwrap();
        assert_eq!(rows, vec![BlockRow { theta: vec![2, 1], dimension: 6, weight_words: 1 }]);
        assert!(blocks_native(7, 3).is_err());
        assert!(bar_data_native(4, "3").is_err());
    }
}
