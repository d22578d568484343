//! Floating-point evaluation used for long truncation runs.

use std::collections::HashMap;
use std::str::FromStr;

use rayon::prelude::*;

use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::formula::{xk_formula, FormulaPolynomial};
use crate::limits::Limits;
use crate::rational::{self, Rational};
use crate::series::{evaluate_formula, SeriesTable};

/// `N x K` table of `f64` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatTable {
    cols: usize,
    rows: Vec<Vec<f64>>,
}

impl FloatTable {
    /// Rows are expected to share one length.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        FloatTable { cols, rows }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    fn form_value(&self, l: &Partition, n: usize) -> f64 {
        let terms: Vec<f64> = self.rows[..n]
            .iter()
            .map(|row| l.parts().iter().map(|&p| row[p - 1]).product())
            .collect();
        pairwise_sum(&terms)
    }
}

const PAIRWISE_BLOCK: usize = 16;

/// Tree summation; error grows like `O(log n)` rather than `O(n)`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let (lo, hi) = values.split_at(values.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Floating counterpart of `evaluate_formula` over the first `n` rows of `t`.
pub fn evaluate_formula_f64(f: &FormulaPolynomial, t: &FloatTable, n: usize) -> Result<f64> {
    if f.max_part() > t.num_cols() {
        return Err(Error::invalid(format!(
            "table truncated at degree {} but a part {} is needed",
            t.num_cols(),
            f.max_part()
        )));
    }
    let n = n.min(t.num_rows());
    let mut forms: HashMap<&Partition, f64> = HashMap::new();
    let mut terms = Vec::with_capacity(f.len());
    for (key, coeff) in f.terms() {
        let mut term = rational::to_f64(coeff);
        for factor in key.factors() {
            term *= *forms.entry(factor).or_insert_with(|| t.form_value(factor, n));
        }
        terms.push(term);
    }
    Ok(pairwise_sum(&terms))
}

/// Built-in coefficient generators `a_{n,k}` for truncation runs.
#[derive(Debug, Clone, PartialEq)]
pub enum RowGenerator {
    /// `(-1)^(nk) / (k! n^(k/4))`, the coefficients of `exp((-1)^n x / n^(1/4))`.
    AltQuartic,
    /// `-1` when `k = n`, else 0; the product is Euler's function.
    Euler,
    /// `x^k`.
    Geometric(Rational),
    /// `x` in column 1, else 0.
    Binomial(Rational),
    Zero,
}

impl FromStr for RowGenerator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        match (name, arg) {
            ("alt_quartic", None) => Ok(RowGenerator::AltQuartic),
            ("euler", None) => Ok(RowGenerator::Euler),
            ("zero", None) => Ok(RowGenerator::Zero),
            ("geometric", Some(x)) => Ok(RowGenerator::Geometric(rational::parse(x)?)),
            ("binomial", Some(x)) => Ok(RowGenerator::Binomial(rational::parse(x)?)),
            _ => Err(Error::invalid(format!(
                "unknown generator {s:?} (expected alt_quartic, euler, zero, geometric:x or binomial:x)"
            ))),
        }
    }
}

impl RowGenerator {
    /// `a_{n,k}` with one-based `n` and `k`.
    pub fn value(&self, n: usize, k: usize) -> f64 {
        match self {
            RowGenerator::AltQuartic => {
                let sign = if (n * k) % 2 == 0 { 1.0 } else { -1.0 };
                let k_fact: f64 = (1..=k).map(|i| i as f64).product();
                sign / (k_fact * (n as f64).powf(k as f64 / 4.0))
            }
            RowGenerator::Euler => {
                if k == n {
                    -1.0
                } else {
                    0.0
                }
            }
            RowGenerator::Geometric(x) => rational::to_f64(x).powi(k as i32),
            RowGenerator::Binomial(x) => {
                if k == 1 {
                    rational::to_f64(x)
                } else {
                    0.0
                }
            }
            RowGenerator::Zero => 0.0,
        }
    }

    /// Exact `a_{n,k}` where the generator is rational-valued.
    pub fn exact_value(&self, n: usize, k: usize) -> Option<Rational> {
        use num::{One, Zero};
        match self {
            RowGenerator::AltQuartic => None,
            RowGenerator::Euler => Some(if k == n { -Rational::one() } else { Rational::zero() }),
            RowGenerator::Geometric(x) => Some(num::pow(x.clone(), k)),
            RowGenerator::Binomial(x) => Some(if k == 1 { x.clone() } else { Rational::zero() }),
            RowGenerator::Zero => Some(Rational::zero()),
        }
    }

    /// Exact `n x k` table, for rational-valued generators only.
    pub fn exact_table(&self, n: usize, k: usize) -> Option<SeriesTable> {
        let rows = (1..=n)
            .map(|row| (1..=k).map(|col| self.exact_value(row, col)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(SeriesTable::from_rows(rows).expect("rows share a length"))
    }

    pub fn table(&self, n: usize, k: usize) -> FloatTable {
        FloatTable::from_rows(
            (1..=n)
                .map(|row| (1..=k).map(|col| self.value(row, col)).collect())
                .collect(),
        )
    }
}

/// `X_k^{(N)}` (the coefficient for the product of the first `N` factors) for every
/// `N` in `ns`.
///
/// Rational-valued generators are evaluated exactly and converted at the end;
/// `alt_quartic` is evaluated in floating point with tree summation over rows.
pub fn truncation_sequence(
    generator: &RowGenerator,
    k: usize,
    ns: &[usize],
    limits: &Limits,
) -> Result<Vec<(usize, f64)>> {
    if ns.contains(&0) {
        return Err(Error::invalid("truncation sizes must be positive"));
    }
    if k == 0 {
        return Ok(ns.iter().map(|&n| (n, 1.0)).collect());
    }
    let formula = xk_formula(k, limits)?;
    let max_n = ns.iter().copied().max().unwrap_or(0);
    if let Some(exact) = generator.exact_table(max_n, k) {
        return ns
            .par_iter()
            .map(|&n| Ok((n, rational::to_f64(&evaluate_formula(&formula, &exact.prefix(n))?))))
            .collect();
    }
    let table = generator.table(max_n, k);
    ns.par_iter()
        .map(|&n| Ok((n, evaluate_formula_f64(&formula, &table, n)?)))
        .collect()
}

/// Heuristic limit estimate: mean of `X_k^{(N-1)}` and `X_k^{(N)}`.
///
/// Only meaningful for generators whose truncated values alternate around the limit.
pub fn averaged_tail_estimate(generator: &RowGenerator, k: usize, n: usize, limits: &Limits) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("averaged tail estimate needs N >= 2"));
    }
    let seq = truncation_sequence(generator, k, &[n - 1, n], limits)?;
    Ok((seq[0].1 + seq[1].1) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_frac;

    #[test]
    fn pairwise_matches_exact_small_sums() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn generator_names() {
        assert_eq!("alt_quartic".parse::<RowGenerator>().unwrap(), RowGenerator::AltQuartic);
        assert_eq!(
            "geometric:1/2".parse::<RowGenerator>().unwrap(),
            RowGenerator::Geometric(from_frac(1, 2))
        );
        assert_eq!(
            "binomial:3".parse::<RowGenerator>().unwrap(),
            RowGenerator::Binomial(from_frac(3, 1))
        );
        for bad in ["bogus", "euler:2", "geometric", "geometric:x"] {
            assert!(bad.parse::<RowGenerator>().is_err(), "{bad}");
        }
    }

    #[test]
    fn alt_quartic_values() {
        let g = RowGenerator::AltQuartic;
        assert_eq!(g.value(1, 1), -1.0);
        assert_eq!(g.value(1, 2), 0.5);
        assert!((g.value(16, 1) - 0.5).abs() < 1e-15);
        assert!((g.value(4, 2) - 0.25).abs() < 1e-15);
        assert!((g.value(3, 3) + 1.0 / (6.0 * 3f64.powf(0.75))).abs() < 1e-15);
    }

    #[test]
    fn euler_sequence_is_constant() {
        let seq = truncation_sequence(&RowGenerator::Euler, 5, &[5, 6, 10], &Limits::default()).unwrap();
        assert_eq!(seq, vec![(5, 1.0), (6, 1.0), (10, 1.0)]);
    }

    #[test]
    fn zero_generator_gives_zero() {
        let seq = truncation_sequence(&RowGenerator::Zero, 3, &[1, 7], &Limits::default()).unwrap();
        assert_eq!(seq, vec![(1, 0.0), (7, 0.0)]);
        let x0 = truncation_sequence(&RowGenerator::Zero, 0, &[4], &Limits::default()).unwrap();
        assert_eq!(x0, vec![(4, 1.0)]);
        assert!(truncation_sequence(&RowGenerator::Zero, 1, &[0], &Limits::default()).is_err());
    }

    #[test]
    fn binomial_generator_gives_binomials() {
        let g = RowGenerator::Binomial(from_frac(1, 1));
        let seq = truncation_sequence(&g, 3, &[6], &Limits::default()).unwrap();
        assert_eq!(seq, vec![(6, 20.0)]);
    }
}
