use num::{BigInt, One, Signed, Zero};
use proptest::prelude::*;
use prodseries::bell::{bell_general, bell_ordinary_direct, BellQuery};
use prodseries::combinatorics::{cycle_decomposition, partitions_of, Permutation};
use prodseries::formula::{from_json, render, Format};
use prodseries::formula::{distinct_index_formula, xk_formula};
use prodseries::rational::{from_frac, to_f64};
use prodseries::series::{distinct_sum_bruteforce, evaluate_formula, evaluate_formula_f64, truncated_product};
use prodseries::{FormulaPolynomial, Limits, Partition, Rational, SeriesTable};

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(p, q)| from_frac(p, q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn table(max_rows: usize, cols: usize) -> impl Strategy<Value = SeriesTable> {
    prop::collection::vec(prop::collection::vec(rational(), cols), 1..=max_rows)
        .prop_map(|rows| SeriesTable::from_rows(rows).unwrap())
}

fn small_partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..=4, 1..=4).prop_map(|parts| Partition::new(parts).unwrap())
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn formula_matches_truncated_product((k, t) in (1usize..=6).prop_flat_map(|k| (Just(k), table(5, k)))) {
        let f = xk_formula(k, &Limits::default()).unwrap();
        prop_assert_eq!(evaluate_formula(&f, &t).unwrap(), truncated_product(&t, k).unwrap()[k - 1].clone());
    }

    #[test]
    fn binomial_restriction(k in 1usize..=8, n in 1usize..=8, x in rational()) {
        let mut t = SeriesTable::zeros(n, k);
        for row in 1..=n {
            t.set(row, 1, x.clone());
        }
        let f = xk_formula(k, &Limits::default()).unwrap();
        let expected = Rational::from_integer(binomial(n, k)) * num::pow(x, k);
        prop_assert_eq!(evaluate_formula(&f, &t).unwrap(), expected);
    }

    #[test]
    fn single_row_reduces_to_its_entry((k, t) in (1usize..=7).prop_flat_map(|k| (Just(k), table(1, k)))) {
        let f = xk_formula(k, &Limits::default()).unwrap();
        prop_assert_eq!(evaluate_formula(&f, &t).unwrap(), t.get(1, k).clone());
    }

    #[test]
    fn row_order_and_term_order_do_not_matter(
        (k, t, shift) in (1usize..=5).prop_flat_map(|k| (Just(k), table(6, k), 0usize..6))
    ) {
        let f = xk_formula(k, &Limits::default()).unwrap();
        let mut rows = t.rows().to_vec();
        let len = rows.len();
        rows.rotate_left(shift % len);
        rows.reverse();
        let permuted = SeriesTable::from_rows(rows).unwrap();

        let mut reversed = FormulaPolynomial::zero(k, f.label());
        let terms: Vec<_> = f.terms().collect();
        for (key, coeff) in terms.into_iter().rev() {
            reversed.add_term(key.clone(), coeff.clone());
        }
        let base = evaluate_formula(&f, &t).unwrap();
        prop_assert_eq!(evaluate_formula(&f, &permuted).unwrap(), base.clone());
        prop_assert_eq!(evaluate_formula(&reversed, &t).unwrap(), base);
    }

    #[test]
    fn float_tracks_exact((k, t) in (1usize..=7).prop_flat_map(|k| (Just(k), table(6, k)))) {
        let f = xk_formula(k, &Limits::default()).unwrap();
        let exact = to_f64(&evaluate_formula(&f, &t).unwrap());
        let float = evaluate_formula_f64(&f, &t.to_float(), t.num_rows()).unwrap();
        prop_assert!((float - exact).abs() <= 1e-9 * exact.abs().max(1.0), "float {} exact {}", float, exact);
    }

    #[test]
    fn distinct_index_lemma(l in small_partition(), t in table(6, 4)) {
        let f = distinct_index_formula(&l, &Limits::default()).unwrap();
        prop_assert_eq!(evaluate_formula(&f, &t).unwrap(), distinct_sum_bruteforce(&l, &t).unwrap());
    }

    #[test]
    fn table_json_round_trip(t in table(4, 3)) {
        prop_assert_eq!(SeriesTable::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn bell_generating_identity(k in 1usize..=5, xs in prop::collection::vec(rational(), 6)) {
        // (x_1 t + .. + x_6 t^6)^k by repeated convolution
        let mut power = vec![Rational::one()];
        for _ in 0..k {
            let mut next = vec![Rational::zero(); power.len() + xs.len()];
            for (i, a) in power.iter().enumerate() {
                for (j, x) in xs.iter().enumerate() {
                    next[i + j + 1] += a * x;
                }
            }
            power = next;
        }
        for n in k..=k + 5 {
            let q = BellQuery::new(n, k, xs[..n - k + 1].to_vec()).unwrap();
            prop_assert_eq!(bell_ordinary_direct(&q), power[n].clone());
        }
    }

    #[test]
    fn bell_scaling_coherence(
        (n, k, x0, rest) in (1usize..=5, 0usize..=4).prop_flat_map(|(k, extra)| {
            (Just(k + extra), Just(k), nonzero_rational(), prop::collection::vec(rational(), extra))
        })
    ) {
        let mut xs = vec![x0.clone()];
        xs.extend(rest.iter().cloned());
        let direct = bell_ordinary_direct(&BellQuery::new(n, k, xs).unwrap());
        prop_assert_eq!(bell_general(n, k, &x0, &rest, &Limits::default()).unwrap(), direct);
    }

    #[test]
    fn cycle_decomposition_round_trip(images in Just((0..7usize).collect::<Vec<_>>()).prop_shuffle()) {
        let sigma = Permutation::new(images).unwrap();
        let cycles = cycle_decomposition(&sigma);
        prop_assert_eq!(cycles.to_permutation(), sigma.clone());
        prop_assert_eq!(cycle_decomposition(&cycles.to_permutation()), cycles);
    }
}

#[test]
fn bell_scaling_coherence_fixed_seed() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(30);
    let lim = Limits::default();
    for _ in 0..30 {
        let k = rng.gen_range(1..=5);
        let n = k + rng.gen_range(0..=4);
        let x0 = loop {
            let x = prodseries::verify::random_rational(&mut rng);
            if !x.is_zero() {
                break x;
            }
        };
        let rest: Vec<Rational> = (0..n - k).map(|_| prodseries::verify::random_rational(&mut rng)).collect();
        let mut xs = vec![x0.clone()];
        xs.extend(rest.iter().cloned());
        let direct = bell_ordinary_direct(&BellQuery::new(n, k, xs).unwrap());
        assert_eq!(bell_general(n, k, &x0, &rest, &lim).unwrap(), direct, "n={n} k={k}");
    }
}

#[test]
fn json_render_is_injective_and_round_trips() {
    let lim = Limits::default();
    let mut seen = std::collections::HashSet::new();
    for k in 1..=6 {
        let f = xk_formula(k, &lim).unwrap();
        let text = render(&f, Format::Json);
        assert!(seen.insert(text.clone()));
        assert_eq!(&from_json(&text).unwrap(), &*f);
    }
    // changing one coefficient changes the rendering
    let f = xk_formula(3, &lim).unwrap();
    let (key, coeff) = f.terms().next().map(|(k, c)| (k.clone(), c.clone())).unwrap();
    let mut g = (*f).clone();
    g.add_term(key, -coeff.clone() - coeff.abs() - Rational::one());
    assert_ne!(render(&g, Format::Json), render(&f, Format::Json));
}

#[test]
fn every_key_has_degree_k() {
    let lim = Limits::default();
    for k in 1..=8 {
        let f = xk_formula(k, &lim).unwrap();
        assert!(f.terms().all(|(key, _)| key.degree() == k));
        assert!(partitions_of(k).unwrap().iter().all(|l| l.sum() == k));
    }
}
