//! Direct computations that do not go through the formula engine.

use num::{One, Zero};

use super::SeriesTable;
use crate::combinatorics::{next_lex_permutation, Partition};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Multiplies the factors `1 + sum_{j<=k_max} a_{n,j} λ^j` truncating above
/// `λ^k_max` and returns `X_1, .., X_{k_max}`.
pub fn truncated_product(t: &SeriesTable, k_max: usize) -> Result<Vec<Rational>> {
    if k_max > t.num_cols() {
        return Err(Error::invalid(format!(
            "requested degree {k_max} exceeds table truncation {}",
            t.num_cols()
        )));
    }
    let mut acc = vec![Rational::zero(); k_max + 1];
    acc[0] = Rational::one();
    for row in t.rows() {
        // descending degree so each acc[d] is updated from untouched lower entries
        for d in (1..=k_max).rev() {
            let mut extra = Rational::zero();
            for j in 1..=d {
                let a = &row[j - 1];
                if !a.is_zero() && !acc[d - j].is_zero() {
                    extra += a * &acc[d - j];
                }
            }
            acc[d] += extra;
        }
    }
    acc.remove(0);
    Ok(acc)
}

fn check_parts(l: &Partition, t: &SeriesTable) -> Result<()> {
    match l.max_part() {
        Some(p) if p > t.num_cols() => Err(Error::invalid(format!(
            "part {p} exceeds table truncation {}",
            t.num_cols()
        ))),
        _ => Ok(()),
    }
}

/// Sum over ordered tuples of pairwise distinct rows `(n_1, .., n_m)` of
/// `prod_j a_{n_j, L_j}`. Costs `Θ(N^m)`; meant for small tables.
pub fn distinct_sum_bruteforce(l: &Partition, t: &SeriesTable) -> Result<Rational> {
    check_parts(l, t)?;
    fn go(parts: &[usize], t: &SeriesTable, used: &mut [bool], acc: &Rational, total: &mut Rational) {
        let Some((&part, rest)) = parts.split_first() else {
            *total += acc;
            return;
        };
        for n in 0..t.num_rows() {
            if used[n] {
                continue;
            }
            let a = &t.rows()[n][part - 1];
            if a.is_zero() {
                continue;
            }
            used[n] = true;
            go(rest, t, used, &(acc * a), total);
            used[n] = false;
        }
    }
    let mut total = Rational::zero();
    go(l.parts(), t, &mut vec![false; t.num_rows()], &Rational::one(), &mut total);
    Ok(total)
}

/// Sum over every distinct ordering `(k_1, .., k_m)` of the parts of `l` and
/// every strictly increasing row tuple `n_1 < .. < n_m` of `prod_j a_{n_j, k_j}`.
pub fn sorted_index_sum_bruteforce(l: &Partition, t: &SeriesTable) -> Result<Rational> {
    check_parts(l, t)?;
    fn go(order: &[usize], t: &SeriesTable, start: usize, acc: &Rational, total: &mut Rational) {
        let Some((&part, rest)) = order.split_first() else {
            *total += acc;
            return;
        };
        for n in start..t.num_rows() {
            let a = &t.rows()[n][part - 1];
            if !a.is_zero() {
                go(rest, t, n + 1, &(acc * a), total);
            }
        }
    }
    let mut total = Rational::zero();
    // lexicographic successors of the sorted parts visit each distinct ordering once
    let mut order = l.parts().to_vec();
    loop {
        go(&order, t, 0, &Rational::one(), &mut total);
        if !next_lex_permutation(&mut order) {
            break;
        }
    }
    Ok(total)
}
