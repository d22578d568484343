//! Exact evaluation of generating forms and formulas on finite coefficient tables.
//!
//! A [`SeriesTable`] holds the nonconstant coefficients `a_{n,k}` of the
//! factors `1 + sum_k a_{n,k} λ^k`, one row per factor. Evaluating a formula on
//! a table replaces every generating form by its finite row sum.

mod float;
mod oracle;

use std::collections::HashMap;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

pub use float::{
    averaged_tail_estimate, evaluate_formula_f64, pairwise_sum, truncation_sequence, FloatTable, RowGenerator,
};
pub use oracle::{distinct_sum_bruteforce, sorted_index_sum_bruteforce, truncated_product};

use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::formula::{xk_formula, FormulaPolynomial};
use crate::limits::Limits;
use crate::rational::{self, Rational};

/// `N x K` matrix of exact rationals; row `n` is factor `n`, column `k` the
/// coefficient of `λ^k`. The constant term 1 of every factor is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesTable {
    cols: usize,
    rows: Vec<Vec<Rational>>,
}

impl SeriesTable {
    pub fn zeros(n: usize, k: usize) -> Self {
        SeriesTable {
            cols: k,
            rows: vec![vec![Rational::zero(); k]; n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::invalid(format!(
                "row {} has {} entries, expected {cols}",
                i + 1,
                r.len()
            )));
        }
        Ok(SeriesTable { cols, rows })
    }

    /// `n` copies of the same row.
    pub fn repeated(row: Vec<Rational>, n: usize) -> Self {
        SeriesTable {
            cols: row.len(),
            rows: vec![row; n],
        }
    }

    /// Number of factors `N`.
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Truncation degree `K`.
    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// `a_{n,k}` with one-based `n` and `k`.
    pub fn get(&self, n: usize, k: usize) -> &Rational {
        &self.rows[n - 1][k - 1]
    }

    pub fn set(&mut self, n: usize, k: usize, value: Rational) {
        self.rows[n - 1][k - 1] = value;
    }

    /// The first `n` factors only.
    pub fn prefix(&self, n: usize) -> SeriesTable {
        SeriesTable {
            cols: self.cols,
            rows: self.rows[..n.min(self.rows.len())].to_vec(),
        }
    }

    pub fn to_float(&self) -> FloatTable {
        FloatTable::from_rows(
            self.rows
                .iter()
                .map(|r| r.iter().map(rational::to_f64).collect())
                .collect(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TableJson = serde_json::from_str(text).map_err(|e| Error::from_json(&e))?;
        if doc.a.len() != doc.n {
            return Err(Error::invalid(format!("\"N\" is {} but \"a\" has {} rows", doc.n, doc.a.len())));
        }
        let mut rows = Vec::with_capacity(doc.n);
        for (i, row) in doc.a.into_iter().enumerate() {
            if row.len() != doc.k {
                return Err(Error::invalid(format!(
                    "row {} has {} entries, expected K = {}",
                    i + 1,
                    row.len(),
                    doc.k
                )));
            }
            let parsed = row
                .into_iter()
                .enumerate()
                .map(|(j, e)| match e {
                    Entry::Int(v) => Ok(rational::from_int(v)),
                    Entry::Text(s) => rational::parse(&s).map_err(|err| {
                        Error::invalid(format!("entry at row {}, column {}: {err}", i + 1, j + 1))
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(parsed);
        }
        Ok(SeriesTable { cols: doc.k, rows })
    }

    pub fn to_json(&self) -> String {
        let doc = TableJson {
            n: self.rows.len(),
            k: self.cols,
            a: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| Entry::Text(rational::format(v))).collect())
                .collect(),
        };
        serde_json::to_string(&doc).expect("table serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "K")]
    k: usize,
    a: Vec<Vec<Entry>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

fn check_columns(max_part: usize, t: &SeriesTable) -> Result<()> {
    if max_part > t.num_cols() {
        return Err(Error::invalid(format!(
            "table truncated at degree {} but a part {max_part} is needed",
            t.num_cols()
        )));
    }
    Ok(())
}

/// `sum_{n=1}^{N} prod_j a_{n, L_j}`.
pub fn evaluate_form(l: &Partition, t: &SeriesTable) -> Result<Rational> {
    check_columns(l.max_part().unwrap_or(0), t)?;
    Ok(form_value(l, t))
}

fn form_value(l: &Partition, t: &SeriesTable) -> Rational {
    let mut total = Rational::zero();
    for row in t.rows() {
        let mut prod = Rational::one();
        for &part in l.parts() {
            let v = &row[part - 1];
            if v.is_zero() {
                prod.set_zero();
                break;
            }
            prod *= v;
        }
        total += prod;
    }
    total
}

/// Sum over terms of `coeff * prod(evaluate_form(factor))`.
pub fn evaluate_formula(f: &FormulaPolynomial, t: &SeriesTable) -> Result<Rational> {
    check_columns(f.max_part(), t)?;
    let mut forms: HashMap<&Partition, Rational> = HashMap::new();
    let mut total = Rational::zero();
    for (key, coeff) in f.terms() {
        let mut term = coeff.clone();
        for factor in key.factors() {
            let v = forms.entry(factor).or_insert_with(|| form_value(factor, t));
            term *= &*v;
        }
        total += term;
    }
    Ok(total)
}

/// `X_k` of the finite product described by `t`; `X_0 = 1`.
pub fn coefficient(t: &SeriesTable, k: usize, limits: &Limits) -> Result<Rational> {
    if k == 0 {
        return Ok(Rational::one());
    }
    evaluate_formula(&*xk_formula(k, limits)?, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_frac, from_int};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn table(rows: &[&[i64]]) -> SeriesTable {
        SeriesTable::from_rows(rows.iter().map(|r| r.iter().map(|&v| from_int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn single_part_form() {
        assert_eq!(evaluate_form(&p(&[1]), &table(&[&[1], &[2]])).unwrap(), from_int(3));
        let mut t = SeriesTable::zeros(1, 2);
        t.set(1, 2, from_frac(3, 2));
        assert_eq!(evaluate_form(&p(&[2, 2]), &t).unwrap(), from_frac(9, 4));
    }

    #[test]
    fn mixed_form() {
        let t = table(&[&[2, 0, 3], &[-1, 5, 7]]);
        // 2^2*3 + (-1)^2*7
        assert_eq!(evaluate_form(&p(&[1, 1, 3]), &t).unwrap(), from_int(19));
        assert!(evaluate_form(&p(&[4]), &t).is_err());
    }

    #[test]
    fn evaluate_xk_examples() {
        let lim = Limits::default();
        let one_plus = table(&[&[1, 0]]);
        assert_eq!(evaluate_formula(&xk_formula(2, &lim).unwrap(), &one_plus).unwrap(), from_int(0));
        let ones = table(&[&[1, 0], &[1, 0], &[1, 0], &[1, 0], &[1, 0]]);
        assert_eq!(evaluate_formula(&xk_formula(2, &lim).unwrap(), &ones).unwrap(), from_int(10));
        assert!(evaluate_formula(&xk_formula(3, &lim).unwrap(), &ones).is_err());
        assert_eq!(coefficient(&ones, 0, &lim).unwrap(), from_int(1));
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let t = SeriesTable::from_json(r#"{"N":2,"K":2,"a":[["1/2",3],["-4","0"]]}"#).unwrap();
        assert_eq!(t.get(1, 1), &from_frac(1, 2));
        assert_eq!(t.get(1, 2), &from_int(3));
        assert_eq!(SeriesTable::from_json(&t.to_json()).unwrap(), t);
        assert!(SeriesTable::from_json(r#"{"N":3,"K":2,"a":[["1",3],["-4","0"]]}"#).is_err());
        assert!(SeriesTable::from_json(r#"{"N":2,"K":2,"a":[["1"],["-4","0"]]}"#).is_err());
        assert!(SeriesTable::from_json(r#"{"N":1,"K":1,"a":[["1/0"]]}"#).is_err());
        match SeriesTable::from_json("{\"N\":1,\n\"K\":1,\n\"a\":[[\"1\",]]}") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(SeriesTable::from_rows(vec![vec![from_int(1)], vec![]]).is_err());
    }
}
