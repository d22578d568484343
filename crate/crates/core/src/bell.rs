//! Ordinary Bell polynomials and the alternating multinomial expansion.
//!
//! Signature convention: `B̂_{n,k}(x_1, .., x_{n-k+1})` is the coefficient of
//! `t^n` in `(x_1 t + x_2 t^2 + ..)^k`, so `n` is the total degree and `k` the
//! number of factors. Powers `f(λ)^N` of a series `f = 1 + a_1 λ + ..` map onto
//! this with `n = k_f + N`, `k = N` and `x = (1, a_1, .., a_{k_f})`.

use num::{BigInt, One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formula::xk_formula;
use crate::limits::Limits;
use crate::rational::{factorial, Rational};
use crate::series::{evaluate_formula, SeriesTable};

/// Arguments of `B̂_{n,k}`; `xs` holds `x_1, .., x_{n-k+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellQuery {
    n: usize,
    k: usize,
    xs: Vec<Rational>,
}

impl BellQuery {
    pub fn new(n: usize, k: usize, xs: Vec<Rational>) -> Result<Self> {
        if k == 0 || n < k {
            return Err(Error::invalid(format!("Bell query needs n >= k >= 1, got n={n}, k={k}")));
        }
        if xs.len() != n - k + 1 {
            return Err(Error::invalid(format!(
                "B̂_{{{n},{k}}} takes {} arguments, got {}",
                n - k + 1,
                xs.len()
            )));
        }
        Ok(BellQuery { n, k, xs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn xs(&self) -> &[Rational] {
        &self.xs
    }
}

/// Sums `k!/(j_1! .. j_r!) prod x_i^{j_i}` over `j >= 0` with `sum j_i = k`
/// and `sum i j_i = n`.
pub fn bell_ordinary_direct(q: &BellQuery) -> Rational {
    struct Walk<'a> {
        xs: &'a [Rational],
        k_fact: BigInt,
        total: Rational,
    }

    impl Walk<'_> {
        // index i is the 1-based x_i being assigned
        fn go(&mut self, i: usize, count_left: usize, degree_left: usize, denom: BigInt, prod: Rational) {
            if i > self.xs.len() {
                if count_left == 0 && degree_left == 0 {
                    self.total += prod * Rational::new(self.k_fact.clone(), denom);
                }
                return;
            }
            let max_j = count_left.min(degree_left / i);
            let mut power = Rational::one();
            for j in 0..=max_j {
                if j > 0 {
                    power *= &self.xs[i - 1];
                }
                self.go(
                    i + 1,
                    count_left - j,
                    degree_left - i * j,
                    &denom * factorial(j),
                    &prod * &power,
                );
            }
        }
    }

    let mut walk = Walk {
        xs: &q.xs,
        k_fact: factorial(q.k),
        total: Rational::zero(),
    };
    walk.go(1, q.k, q.n, BigInt::one(), Rational::one());
    walk.total
}

/// `X_k` of `(1 + a_1 λ + .. + a_k λ^k)^N` through the coefficient formula,
/// i.e. `B̂_{k+N,N}(1, a_1, .., a_k)`. Uses `N` identical rows.
pub fn bell_via_main(k: usize, n_factors: usize, a: &[Rational], limits: &Limits) -> Result<Rational> {
    if n_factors == 0 {
        return Err(Error::invalid("number of factors must be positive"));
    }
    if a.len() != k {
        return Err(Error::invalid(format!("expected {k} coefficients a_1..a_{k}, got {}", a.len())));
    }
    if k == 0 {
        return Ok(Rational::one());
    }
    let table = SeriesTable::repeated(a.to_vec(), n_factors);
    evaluate_formula(&*xk_formula(k, limits)?, &table)
}

/// `B̂_{n,k}(x0, rest..)` for any leading argument.
///
/// `rest` holds the `n - k` arguments after `x0`. For `x0 != 0` this rescales to a
/// unit leading argument, `x0^k B̂_{n,k}(1, rest/x0)`, and evaluates through the
/// coefficient formula. A zero leading argument has no such rescaling and is
/// evaluated directly.
pub fn bell_general(n: usize, k: usize, x0: &Rational, rest: &[Rational], limits: &Limits) -> Result<Rational> {
    if k == 0 || n < k {
        return Err(Error::invalid(format!("Bell query needs n >= k >= 1, got n={n}, k={k}")));
    }
    if rest.len() != n - k {
        return Err(Error::invalid(format!(
            "expected {} arguments after x0, got {}",
            n - k,
            rest.len()
        )));
    }
    if n == k {
        return Ok(num::pow(x0.clone(), k));
    }
    if x0.is_zero() {
        // vanishes whenever n < 2k; otherwise only the direct sum applies
        if n < 2 * k {
            return Ok(Rational::zero());
        }
        let mut xs = Vec::with_capacity(rest.len() + 1);
        xs.push(Rational::zero());
        xs.extend_from_slice(rest);
        return Ok(bell_ordinary_direct(&BellQuery::new(n, k, xs)?));
    }
    if x0.is_one() {
        return bell_via_main(n - k, k, rest, limits);
    }
    let scaled: Vec<Rational> = rest.iter().map(|x| x / x0).collect();
    Ok(num::pow(x0.clone(), k) * bell_via_main(n - k, k, &scaled, limits)?)
}

/// `(1 + a_1 + .. + a_α)^N` as `1 + sum_{k=1}^{αN} X_k`, each `X_k` evaluated
/// through the coefficient formula on `N` identical rows.
///
/// Needs `X_{αN}`, so it is only practical while `αN` stays within the
/// formula caps.
pub fn multinomial_via_main(a: &[Rational], n_factors: usize, limits: &Limits) -> Result<Rational> {
    if a.is_empty() || n_factors == 0 {
        return Err(Error::invalid("multinomial needs at least one coefficient and one factor"));
    }
    let degree = a.len() * n_factors;
    let mut row = a.to_vec();
    row.resize(degree, Rational::zero());
    let table = SeriesTable::repeated(row, n_factors);
    let parts = (1..=degree)
        .into_par_iter()
        .map(|k| evaluate_formula(&*xk_formula(k, limits)?, &table))
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().fold(Rational::one(), |acc, x| acc + x))
}
