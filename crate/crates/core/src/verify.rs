//! Seeded randomized cross-checks between the formula path and the direct oracles.

use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::Partition;
use crate::error::Result;
use crate::formula::{distinct_index_formula, symmetrized_formula, xk_formula_collapsed, FormulaCache};
use crate::limits::Limits;
use crate::rational::{self, Rational};
use crate::series::{
    distinct_sum_bruteforce, evaluate_formula, sorted_index_sum_bruteforce, truncated_product, SeriesTable,
};

/// Random rational with numerator in `[-9, 9]` and denominator in `[1, 9]`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    rational::from_frac(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

pub fn random_table<R: Rng>(rng: &mut R, n: usize, k: usize) -> SeriesTable {
    SeriesTable::from_rows(
        (0..n)
            .map(|_| (0..k).map(|_| random_rational(rng)).collect())
            .collect(),
    )
    .expect("rows share a length")
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub k_max: usize,
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub limits: Limits,
    pub cache: FormulaCache,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            k_max: 5,
            n_max: 5,
            trials: 100,
            seed: 42,
            limits: Limits::default(),
            cache: FormulaCache::in_memory(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Enough detail to replay the first mismatch.
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            passed: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, recipe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(recipe());
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
    pub vacuous: bool,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.vacuous {
            out.push_str("warning: zero trials requested, randomized suites checked nothing\n");
        }
        for s in &self.suites {
            writeln!(out, "{}: {} passed, {} failed", s.name, s.passed, s.failed).unwrap();
            if let Some(f) = &s.first_failure {
                writeln!(out, "  first failure: {f}").unwrap();
            }
        }
        if self.all_passed() {
            writeln!(out, "all {} suites passed", self.suites.len()).unwrap();
        } else {
            let failed = self.suites.iter().filter(|s| s.failed > 0).count();
            writeln!(out, "{failed} of {} suites failed", self.suites.len()).unwrap();
        }
        out
    }
}

/// `X_k` from the formula path against the truncated product, for every
/// `k <= k_max` and `trials` random tables each.
pub fn oracle_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("oracle-equivalence");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 1..=cfg.k_max {
        let formula = cfg.cache.get(k, &cfg.limits)?;
        for trial in 0..cfg.trials {
            let n = rng.gen_range(1..=cfg.n_max.max(1));
            let table = random_table(&mut rng, n, k);
            let lhs = evaluate_formula(&formula, &table)?;
            let rhs = truncated_product(&table, k)?.pop().expect("k >= 1");
            report.record(lhs == rhs, || {
                format!(
                    "k={k} seed={} trial={trial}: formula {} != product {} on table {}",
                    cfg.seed,
                    rational::format(&lhs),
                    rational::format(&rhs),
                    table.to_json()
                )
            });
        }
    }
    Ok(report)
}

pub fn random_partition<R: Rng>(rng: &mut R, max_len: usize, max_part: usize) -> Partition {
    let len = rng.gen_range(1..=max_len);
    Partition::new((0..len).map(|_| rng.gen_range(1..=max_part)).collect()).expect("parts are positive")
}

/// Both index identities: pairwise-distinct sums and sorted-index sums over
/// orderings, each against its formula, on random partitions with at most
/// four parts each at most four.
pub fn lemma_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("lemma-equivalence");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    for trial in 0..cfg.trials {
        let l = random_partition(&mut rng, 4, 4);
        let n = rng.gen_range(1..=cfg.n_max.max(1));
        let table = random_table(&mut rng, n, 4);
        let distinct_ok = distinct_sum_bruteforce(&l, &table)?
            == evaluate_formula(&distinct_index_formula(&l, &cfg.limits)?, &table)?;
        let sorted_ok = sorted_index_sum_bruteforce(&l, &table)?
            == evaluate_formula(&symmetrized_formula(&l, &cfg.limits)?, &table)?;
        report.record(distinct_ok && sorted_ok, || {
            format!(
                "L={l} seed={} trial={trial} (distinct ok: {distinct_ok}, sorted ok: {sorted_ok}) on table {}",
                cfg.seed,
                table.to_json()
            )
        });
    }
    Ok(report)
}

/// The set-partition construction against the formula in use, for `k <= k_max`.
pub fn collapsed_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("collapsed-equality");
    for k in 1..=cfg.k_max {
        let used = cfg.cache.get(k, &cfg.limits)?;
        let collapsed = xk_formula_collapsed(k, &cfg.limits)?;
        report.record(*used == collapsed, || format!("k={k}: collapsed construction differs from X_{k} in use"));
    }
    Ok(report)
}

pub fn run_all(cfg: &VerifyConfig) -> Result<VerifyReport> {
    Ok(VerifyReport {
        suites: vec![oracle_suite(cfg)?, lemma_suite(cfg)?, collapsed_suite(cfg)?],
        vacuous: cfg.trials == 0,
    })
}
