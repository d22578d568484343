//! Symbolic construction of `X_k` as a polynomial over the generating forms.
//!
//! A generating form is `S[L] = sum_n prod_j a_{n, L_j}` for a partition `L`.
//! A [`TermKey`] is a product of such forms and a [`FormulaPolynomial`] is a
//! finite rational combination of term keys.
//!
//! `X_k` is assembled as the sum over `L ⊢ k` of
//! `(1 / C_stb(L)) * sum_{σ ∈ S_ℓ(L)} sign(σ) * A_{σ,L}`, where `A_{σ,L}`
//! groups the parts of `L` along the cycles of `σ`.

mod cache;
mod render;

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, Zero};
use rayon::prelude::*;

pub use cache::FormulaCache;
pub use render::{from_json, render, Format};

use crate::combinatorics::{
    next_lex_permutation, partitions_of, set_partitions_of, stabilizer_count, Partition, Permutation,
};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::rational::Rational;

/// A monomial over the generating forms: a canonical multiset of partitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermKey {
    factors: Vec<Partition>,
}

impl TermKey {
    pub fn new(mut factors: Vec<Partition>) -> Self {
        factors.sort_unstable();
        TermKey { factors }
    }

    pub fn factors(&self) -> &[Partition] {
        &self.factors
    }

    /// Total of all parts across all factors.
    pub fn degree(&self) -> usize {
        self.factors.iter().map(Partition::sum).sum()
    }

    /// The partition obtained by merging every factor.
    pub fn support(&self) -> Partition {
        Partition::from_parts_unchecked(self.factors.iter().flat_map(|f| f.parts().iter().copied()).collect())
    }
}

/// Terms are grouped by their support partition (canonical partition order),
/// then listed from most to fewest factors, then lexicographically.
impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.support()
            .cmp(&other.support())
            .then(Reverse(self.factors.len()).cmp(&Reverse(other.factors.len())))
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite map from term keys to nonzero exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaPolynomial {
    k: usize,
    label: String,
    terms: BTreeMap<TermKey, Rational>,
}

impl FormulaPolynomial {
    pub fn zero(k: usize, label: impl Into<String>) -> Self {
        FormulaPolynomial {
            k,
            label: label.into(),
            terms: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &TermKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `coeff` to the coefficient of `key`, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: TermKey, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn merge(mut self, other: FormulaPolynomial) -> Self {
        for (key, coeff) in other.terms {
            self.add_term(key, coeff);
        }
        self
    }

    /// Largest part appearing in any key; evaluation needs at least this many columns.
    pub fn max_part(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|k| k.factors.iter().filter_map(Partition::max_part))
            .max()
            .unwrap_or(0)
    }

    fn from_counts(k: usize, label: String, counts: HashMap<TermKey, i128>, divisor: &BigInt) -> Self {
        let mut out = FormulaPolynomial::zero(k, label);
        for (key, count) in counts {
            if count != 0 {
                out.terms
                    .insert(key, Rational::new(BigInt::from(count), divisor.clone()));
            }
        }
        out
    }
}

/// Groups the parts of `l` along the cycles of `sigma`.
pub fn term_key_of(sigma: &Permutation, l: &Partition) -> Result<TermKey> {
    if sigma.len() != l.len() {
        return Err(Error::invalid(format!(
            "permutation on {} points does not match partition of length {}",
            sigma.len(),
            l.len()
        )));
    }
    Ok(key_from_images(sigma.images(), l.parts(), &mut vec![false; l.len()]))
}

fn key_from_images(images: &[usize], parts: &[usize], seen: &mut [bool]) -> TermKey {
    seen.iter_mut().for_each(|s| *s = false);
    let mut factors = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut block = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            block.push(parts[i]);
            i = images[i];
        }
        factors.push(Partition::from_parts_unchecked(block));
    }
    TermKey::new(factors)
}

fn cycle_parity_sign(images: &[usize], seen: &mut [bool]) -> i128 {
    seen.iter_mut().for_each(|s| *s = false);
    let mut cycles = 0;
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = images[i];
        }
    }
    if (images.len() - cycles) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `sum_{σ ∈ S_m} sign(σ) [A_{σ,L}]` as integer counts per key.
fn signed_counts_direct(l: &Partition, limits: &Limits) -> Result<HashMap<TermKey, i128>> {
    let m = l.len();
    if m == 0 {
        return Err(Error::invalid("partition must be non-empty"));
    }
    limits.check_permutations(m)?;
    let parts = l.parts();
    // split S_m by σ(0) so the stream can be consumed in parallel
    let counts = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut counts: HashMap<TermKey, i128> = HashMap::new();
            let mut seen = vec![false; m];
            let mut rest: Vec<usize> = (0..m).filter(|&x| x != first).collect();
            let mut images = Vec::with_capacity(m);
            loop {
                images.clear();
                images.push(first);
                images.extend_from_slice(&rest);
                let sign = cycle_parity_sign(&images, &mut seen);
                let key = key_from_images(&images, parts, &mut seen);
                *counts.entry(key).or_insert(0) += sign;
                if !next_lex_permutation(&mut rest) {
                    break;
                }
            }
            counts
        })
        .reduce(HashMap::new, merge_counts);
    Ok(counts)
}

/// Same sum re-indexed by the set partition of cycle supports: each block of
/// size `q` carries weight `(-1)^(q-1) (q-1)!`.
fn signed_counts_collapsed(l: &Partition, limits: &Limits) -> Result<HashMap<TermKey, i128>> {
    let m = l.len();
    if m == 0 {
        return Err(Error::invalid("partition must be non-empty"));
    }
    limits.check_set_partitions(m)?;
    let parts = l.parts();
    let block_weight: Vec<i128> = (0..=m)
        .map(|q| {
            if q == 0 {
                return 1;
            }
            let f: i128 = (1..q as i128).product();
            if q % 2 == 1 {
                f
            } else {
                -f
            }
        })
        .collect();
    let mut counts: HashMap<TermKey, i128> = HashMap::new();
    for sp in set_partitions_of(m, limits)? {
        let mut weight = 1i128;
        let factors = sp
            .blocks()
            .iter()
            .map(|b| {
                weight *= block_weight[b.len()];
                Partition::from_parts_unchecked(b.iter().map(|&i| parts[i]).collect())
            })
            .collect();
        *counts.entry(TermKey::new(factors)).or_insert(0) += weight;
    }
    Ok(counts)
}

fn merge_counts(mut a: HashMap<TermKey, i128>, b: HashMap<TermKey, i128>) -> HashMap<TermKey, i128> {
    if a.len() < b.len() {
        return merge_counts(b, a);
    }
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Right-hand side of the pairwise-distinct index identity:
/// `sum_{σ ∈ S_m} sign(σ) A_{σ,L}`, collected per key.
pub fn distinct_index_formula(l: &Partition, limits: &Limits) -> Result<FormulaPolynomial> {
    let counts = signed_counts_direct(l, limits)?;
    Ok(FormulaPolynomial::from_counts(
        l.sum(),
        format!("distinct-index sum for {l}"),
        counts,
        &BigInt::from(1),
    ))
}

/// `distinct_index_formula(l) / C_stb(l)`: the sum over all orderings of the
/// parts of `l` with strictly increasing row indices.
pub fn symmetrized_formula(l: &Partition, limits: &Limits) -> Result<FormulaPolynomial> {
    let counts = signed_counts_direct(l, limits)?;
    Ok(FormulaPolynomial::from_counts(
        l.sum(),
        format!("symmetrized sum for {l}"),
        counts,
        &stabilizer_count(l)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Route {
    Direct,
    Collapsed,
    Auto,
}

fn auto_direct_len(limits: &Limits) -> usize {
    limits.direct_max_len.min(limits.max_permutation_m)
}

// the longest partition of k is [1; k], so checking m = k covers every L ⊢ k
fn check_route(k: usize, limits: &Limits, route: Route) -> Result<()> {
    match route {
        Route::Direct => limits.check_permutations(k),
        Route::Collapsed => limits.check_set_partitions(k),
        Route::Auto if k <= auto_direct_len(limits) => Ok(()),
        Route::Auto => limits.check_set_partitions(k),
    }
}

fn build_xk(k: usize, limits: &Limits, route: Route) -> Result<FormulaPolynomial> {
    if k == 0 {
        return Err(Error::invalid("X_k formulas are defined for k >= 1"));
    }
    check_route(k, limits, route)?;
    let label = format!("X_{k}");
    partitions_of(k)?
        .into_par_iter()
        .map(|l| {
            let direct = match route {
                Route::Direct => true,
                Route::Collapsed => false,
                Route::Auto => l.len() <= auto_direct_len(limits),
            };
            let counts = if direct {
                signed_counts_direct(&l, limits)?
            } else {
                signed_counts_collapsed(&l, limits)?
            };
            Ok(FormulaPolynomial::from_counts(k, label.clone(), counts, &stabilizer_count(&l)?))
        })
        .try_reduce(|| FormulaPolynomial::zero(k, label.clone()), |a, b| Ok(a.merge(b)))
}

fn memo() -> &'static Mutex<HashMap<usize, Arc<FormulaPolynomial>>> {
    static MEMO: OnceLock<Mutex<HashMap<usize, Arc<FormulaPolynomial>>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `X_k` over the generating forms.
///
/// Partitions no longer than `limits.direct_max_len` are expanded over
/// permutations and longer ones over set partitions. Results are memoized per
/// process; caps are still enforced on every call.
pub fn xk_formula(k: usize, limits: &Limits) -> Result<Arc<FormulaPolynomial>> {
    if k == 0 {
        return Err(Error::invalid("X_k formulas are defined for k >= 1"));
    }
    check_route(k, limits, Route::Auto)?;
    if let Some(f) = memo().lock().expect("formula memo poisoned").get(&k) {
        return Ok(Arc::clone(f));
    }
    let built = Arc::new(build_xk(k, limits, Route::Auto)?);
    memo()
        .lock()
        .expect("formula memo poisoned")
        .entry(k)
        .or_insert_with(|| Arc::clone(&built));
    Ok(built)
}

/// `X_k` built only from the literal signed permutation sums.
pub fn xk_formula_direct(k: usize, limits: &Limits) -> Result<FormulaPolynomial> {
    build_xk(k, limits, Route::Direct)
}

/// `X_k` built only from set partitions; identical to [`xk_formula_direct`].
pub fn xk_formula_collapsed(k: usize, limits: &Limits) -> Result<FormulaPolynomial> {
    build_xk(k, limits, Route::Collapsed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_frac, from_int};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn key(factors: &[&[usize]]) -> TermKey {
        TermKey::new(factors.iter().map(|f| p(f)).collect())
    }

    fn terms_of(f: &FormulaPolynomial) -> Vec<(TermKey, Rational)> {
        f.terms().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    #[test]
    fn term_key_groups_parts_along_cycles() {
        let sigma = Permutation::from_one_based(&[2, 4, 6, 1, 5, 3]).unwrap();
        // distinct symbolic parts k_1..k_6 stood in by 1..6
        let l = p(&[1, 2, 3, 4, 5, 6]);
        assert_eq!(term_key_of(&sigma, &l).unwrap(), key(&[&[1, 2, 4], &[3, 6], &[5]]));
        assert_eq!(
            term_key_of(&Permutation::identity(3), &p(&[1, 2, 3])).unwrap(),
            key(&[&[1], &[2], &[3]])
        );
        let cyc = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(term_key_of(&cyc, &p(&[1, 1, 1])).unwrap(), key(&[&[1, 1, 1]]));
        assert!(term_key_of(&cyc, &p(&[1, 1])).is_err());
    }

    #[test]
    fn term_key_canonical_and_degree() {
        let a = key(&[&[3, 1], &[2]]);
        let b = key(&[&[2], &[1, 3]]);
        assert_eq!(a, b);
        assert_eq!(a.degree(), 6);
        assert_eq!(a.factors(), &[p(&[2]), p(&[1, 3])]);
    }

    #[test]
    fn distinct_index_one_two_three() {
        let f = distinct_index_formula(&p(&[1, 2, 3]), &Limits::default()).unwrap();
        let expected = vec![
            (key(&[&[1], &[2], &[3]]), from_int(1)),
            (key(&[&[1], &[2, 3]]), from_int(-1)),
            (key(&[&[2], &[1, 3]]), from_int(-1)),
            (key(&[&[3], &[1, 2]]), from_int(-1)),
            (key(&[&[1, 2, 3]]), from_int(2)),
        ];
        let mut got = terms_of(&f);
        got.sort_by(|a, b| a.0.cmp(&b.0));
        let mut exp = expected;
        exp.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(got, exp);
    }

    #[test]
    fn distinct_index_five_ones_gives_class_sizes() {
        let f = distinct_index_formula(&p(&[1, 1, 1, 1, 1]), &Limits::default()).unwrap();
        let cases: [(&[&[usize]], i64); 7] = [
            (&[&[1], &[1], &[1], &[1], &[1]], 1),
            (&[&[1], &[1], &[1], &[1, 1]], -10),
            (&[&[1], &[1], &[1, 1, 1]], 20),
            (&[&[1], &[1, 1], &[1, 1]], 15),
            (&[&[1], &[1, 1, 1, 1]], -30),
            (&[&[1, 1], &[1, 1, 1]], -20),
            (&[&[1, 1, 1, 1, 1]], 24),
        ];
        assert_eq!(f.len(), 7);
        for (k, c) in cases {
            assert_eq!(f.coefficient(&key(k)), from_int(c));
        }
        let single = distinct_index_formula(&p(&[1]), &Limits::default()).unwrap();
        assert_eq!(terms_of(&single), vec![(key(&[&[1]]), from_int(1))]);
    }

    #[test]
    fn symmetrized_small_cases() {
        let lim = Limits::default();
        let f = symmetrized_formula(&p(&[1, 1]), &lim).unwrap();
        assert_eq!(
            terms_of(&f),
            vec![(key(&[&[1], &[1]]), from_frac(1, 2)), (key(&[&[1, 1]]), from_frac(-1, 2))]
        );
        let f = symmetrized_formula(&p(&[2]), &lim).unwrap();
        assert_eq!(terms_of(&f), vec![(key(&[&[2]]), from_int(1))]);
        let f = symmetrized_formula(&p(&[1, 1, 1]), &lim).unwrap();
        assert_eq!(
            terms_of(&f),
            vec![
                (key(&[&[1], &[1], &[1]]), from_frac(1, 6)),
                (key(&[&[1], &[1, 1]]), from_frac(-1, 2)),
                (key(&[&[1, 1, 1]]), from_frac(1, 3)),
            ]
        );
    }

    #[test]
    fn low_degree_xk() {
        let lim = Limits::default();
        assert_eq!(terms_of(&xk_formula(1, &lim).unwrap()), vec![(key(&[&[1]]), from_int(1))]);
        assert_eq!(
            terms_of(&xk_formula(2, &lim).unwrap()),
            vec![
                (key(&[&[2]]), from_int(1)),
                (key(&[&[1], &[1]]), from_frac(1, 2)),
                (key(&[&[1, 1]]), from_frac(-1, 2)),
            ]
        );
        assert_eq!(
            terms_of(&xk_formula(3, &lim).unwrap()),
            vec![
                (key(&[&[3]]), from_int(1)),
                (key(&[&[1], &[2]]), from_int(1)),
                (key(&[&[1, 2]]), from_int(-1)),
                (key(&[&[1], &[1], &[1]]), from_frac(1, 6)),
                (key(&[&[1], &[1, 1]]), from_frac(-1, 2)),
                (key(&[&[1, 1, 1]]), from_frac(1, 3)),
            ]
        );
        assert!(xk_formula(0, &lim).is_err());
    }

    #[test]
    fn collapsed_matches_direct() {
        let lim = Limits::default();
        assert_eq!(terms_of(&xk_formula_collapsed(1, &lim).unwrap()), vec![(key(&[&[1]]), from_int(1))]);
        for k in 1..=6 {
            assert_eq!(xk_formula_collapsed(k, &lim).unwrap(), xk_formula_direct(k, &lim).unwrap(), "k={k}");
        }
    }

    #[test]
    fn homogeneous_degree() {
        let lim = Limits::default();
        for k in 1..=7 {
            let f = xk_formula(k, &lim).unwrap();
            assert!(f.terms().all(|(key, c)| key.degree() == k && !c.is_zero()));
        }
    }

    #[test]
    fn caps_are_enforced() {
        let tight = Limits {
            max_permutation_m: 3,
            max_set_partition_m: 4,
            direct_max_len: 3,
        };
        assert!(matches!(xk_formula_direct(4, &tight), Err(Error::ResourceLimit { .. })));
        assert!(xk_formula_collapsed(4, &tight).is_ok());
        assert!(matches!(xk_formula_collapsed(5, &tight), Err(Error::ResourceLimit { .. })));
        assert!(matches!(xk_formula(5, &tight), Err(Error::ResourceLimit { .. })));
        assert!(xk_formula(4, &tight).is_ok());
        assert!(matches!(
            distinct_index_formula(&p(&[1, 1, 1, 1]), &tight),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
