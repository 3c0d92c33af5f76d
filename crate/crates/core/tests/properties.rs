mod oracle;

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use proptest::prelude::*;

use chow_core::abgroup::{quotient, smith_normal_form, IntMatrix};
use chow_core::chow::{chow_group, exact_sequence_data, principal_divisor_test, PrincipalVerdict};
use chow_core::declared::{declared_order, transcribe, DeclaredField, DeclaredPlace, DeclaredPrime};
use chow_core::divisor::{Divisor, Level, PlaceLabel};
use chow_core::orders::{is_conductor_ideal, OrderData};
use chow_core::quadfield::QuadField;

const DISCS: [i64; 10] = [-7, -23, -4, -3, -84, -20, 5, 13, 40, 229];

fn fields() -> &'static [Arc<QuadField>] {
    static F: OnceLock<Vec<Arc<QuadField>>> = OnceLock::new();
    F.get_or_init(|| DISCS.iter().map(|&d| Arc::new(QuadField::new(d).unwrap())).collect())
}

fn element() -> impl Strategy<Value = (i64, i64, i64)> {
    (-40i64..40, -40i64..40, 1i64..12).prop_filter("nonzero", |(a, b, _)| *a != 0 || *b != 0)
}

fn invariants(o: &OrderData) -> Vec<BigInt> {
    chow_group(o).unwrap().group().invariant_factors().to_vec()
}

/// One conductor prime over 7 with the given residue degrees.
fn declared_one_prime(degrees: &[u32]) -> OrderData {
    let places = degrees
        .iter()
        .enumerate()
        .map(|(j, &degree)| DeclaredPlace {
            label: format!("P{j}"),
            degree,
            ramification: 1,
            class_image: Some(Vec::new()),
        })
        .collect();
    let field = DeclaredField {
        description: String::new(),
        class_invariants: Vec::new(),
        conductor_primes: vec![DeclaredPrime { p: 7, residue_size_below: 7, places }],
        orders: Default::default(),
    };
    declared_order(&field, "0").unwrap()
}

/// `[O/p_i : O/p]`-weighted images of the places above the non-invertible
/// primes, as rows over the primes of `O`.
fn pushforward_rows(order: &OrderData) -> Vec<Vec<BigInt>> {
    let primes = order.noninvertible_primes();
    let mut rows = Vec::new();
    for q in primes {
        for pl in &q.places {
            let d = Divisor::from_terms(Level::Maximal, [(pl.label.clone(), BigInt::one())]);
            let image = order.pushforward(&d).unwrap();
            rows.push(primes.iter().map(|x| image.coeff(&x.label)).collect());
        }
    }
    rows
}

fn cokernel_order(order: &OrderData) -> BigInt {
    let rows = pushforward_rows(order);
    let r = order.noninvertible_primes().len();
    quotient(r, &IntMatrix::from_rows(r, &rows).unwrap()).unwrap().cardinality().unwrap()
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-12i64..12, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_matches_determinantal_divisors(m in matrix()) {
        let flat: Vec<i64> = m.iter().flatten().copied().collect();
        let mat = IntMatrix::from_i64(m.len(), m[0].len(), &flat).unwrap();
        let snf = smith_normal_form(&mat);
        let got: Vec<BigInt> = snf.invariant_factors().iter().map(|x| x.abs()).collect();
        prop_assert_eq!(got, oracle::determinant_divisor_invariants(&m));
        prop_assert_eq!(snf.left.mul(&mat).unwrap().mul(&snf.right).unwrap(), snf.diagonal);
    }

    #[test]
    fn quotient_order_is_the_determinant(m in (1usize..=4).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..9, n), n))) {
        let n = m.len();
        let flat: Vec<i64> = m.iter().flatten().copied().collect();
        let g = quotient(n, &IntMatrix::from_i64(n, n, &flat).unwrap()).unwrap();
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let det = oracle::det(&big).abs();
        match g.cardinality() {
            Some(c) => prop_assert_eq!(c, det),
            None => prop_assert!(det == BigInt::from(0)),
        }
    }

    #[test]
    fn pushforward_of_maximal_divisor((x, y, m) in element(), fi in 0usize..10, f in 1u64..30) {
        let field = &fields()[fi];
        let order = OrderData::from_conductor(field.clone(), f).unwrap();
        let a = field.element(x, y, m).unwrap();
        let d = order.div_over_order(&a).unwrap();
        prop_assert_eq!(&d, &order.pushforward(&field.div_maximal(&a).unwrap()).unwrap());
        if let Err(e) = oracle::check_order_divisor(&order, &a, &d) {
            return Err(TestCaseError::fail(e));
        }
    }

    #[test]
    fn principal_divisors_round_trip((x, y, m) in element(), fi in 0usize..10, f in 1u64..16) {
        let field = &fields()[fi];
        let order = OrderData::from_conductor(field.clone(), f).unwrap();
        let a = field.element(x, y, m).unwrap();
        let d = order.div_over_order(&a).unwrap();
        match principal_divisor_test(&order, &d, None).unwrap() {
            PrincipalVerdict::Generator(b) => {
                prop_assert_eq!(order.div_over_order(&b).unwrap(), d.clone());
                if let Err(e) = oracle::check_order_divisor(&order, &b, &d) {
                    return Err(TestCaseError::fail(e));
                }
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn chow_order_is_image_times_locals(fi in 0usize..10, f in 1u64..40) {
        let order = OrderData::from_conductor(fields()[fi].clone(), f).unwrap();
        let seq = exact_sequence_data(&order).unwrap();
        let locals: BigInt = seq.local_orders.iter().product();
        prop_assert_eq!(seq.chow.cardinality().unwrap(), seq.image.cardinality().unwrap() * locals);
    }

    #[test]
    fn bezout_choice_does_not_matter(fi in 0usize..10, f in 2u64..40) {
        let order = OrderData::from_conductor(fields()[fi].clone(), f).unwrap();
        let base = invariants(&order);
        for (i, q) in order.noninvertible_primes().iter().enumerate() {
            if q.places.len() == 2 {
                prop_assert_eq!(&invariants(&order.reorder_places(i, &[1, 0]).unwrap()), &base);
            }
        }
    }

    #[test]
    fn declared_transcription_agrees(fi in 0usize..10, f in 1u64..40) {
        let order = OrderData::from_conductor(fields()[fi].clone(), f).unwrap();
        let declared = declared_order(&transcribe(&order).unwrap(), "main").unwrap();
        prop_assert_eq!(invariants(&declared), invariants(&order));
    }

    #[test]
    fn conductor_ideals_are_f_times_maximal(fi in 0usize..10, ks in prop::collection::vec(0i64..5, 6)) {
        let field = &fields()[fi];
        let mut d = Divisor::zero(Level::Maximal);
        for (p, k) in [2u64, 3, 5].iter().zip(ks.chunks(2)) {
            for (pl, &e) in field.splitting(*p).unwrap().iter().zip(k) {
                d.add_term(pl.label(), &BigInt::from(e));
            }
        }
        prop_assert_eq!(is_conductor_ideal(field, &d).unwrap(), oracle::is_f_times_maximal(field, &d));
    }

    #[test]
    fn kernel_generators_span(degrees in prop::collection::vec(1u32..7, 1..5), raw in prop::collection::vec(-6i64..6, 4)) {
        let order = declared_one_prime(&degrees);
        let q = &order.noninvertible_primes()[0];
        let n = degrees.len();
        let last = i64::from(degrees[n - 1]);
        let mut a: Vec<i64> = raw[..n].to_vec();
        let s: i64 = a.iter().zip(&degrees).map(|(x, &d)| x * i64::from(d)).sum();
        if s % last == 0 {
            a[n - 1] -= s / last;
        } else {
            a.iter_mut().for_each(|x| *x *= last);
            a[n - 1] -= s;
        }
        let target = Divisor::from_terms(Level::Maximal, q.places.iter().zip(&a).map(|(pl, &c)| (pl.label.clone(), BigInt::from(c))));
        prop_assert!(order.pushforward(&target).unwrap().is_zero());
        let gens = order.kernel_generators();
        for g in &gens {
            prop_assert!(order.pushforward(g).unwrap().is_zero());
        }
        let rows: Vec<Vec<BigInt>> = gens.iter().map(|g| q.places.iter().map(|pl| g.coeff(&pl.label)).collect()).collect();
        let span = quotient(n, &IntMatrix::from_rows(n, &rows).unwrap()).unwrap();
        let coords: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
        prop_assert!(span.member(&coords).unwrap().is_zero());
    }

    #[test]
    fn pushforward_cokernel_is_product_of_g(degrees in prop::collection::vec(1u32..9, 1..5), fi in 0usize..10, f in 1u64..60) {
        let order = declared_one_prime(&degrees);
        prop_assert_eq!(cokernel_order(&order), order.noninvertible_primes()[0].g.clone());
        let order = OrderData::from_conductor(fields()[fi].clone(), f).unwrap();
        let g: BigInt = order.noninvertible_primes().iter().map(|q| q.g.clone()).product();
        prop_assert_eq!(cokernel_order(&order), g);
    }

    #[test]
    fn conductor_test_is_multiplicative(fi in 0usize..10, ka in prop::collection::vec(0i64..6, 2), kb in prop::collection::vec(0i64..6, 2)) {
        let field = &fields()[fi];
        let part = |p: u64, ks: &[i64]| {
            let mut d = Divisor::zero(Level::Maximal);
            for (pl, &e) in field.splitting(p).unwrap().iter().zip(ks) {
                d.add_term(pl.label(), &BigInt::from(e));
            }
            d
        };
        let (a, b) = (part(2, &ka), part(7, &kb));
        let both = is_conductor_ideal(field, &a).unwrap() && is_conductor_ideal(field, &b).unwrap();
        prop_assert_eq!(is_conductor_ideal(field, &a.add(&b)).unwrap(), both);
    }
}

#[test]
fn class_numbers_match_analytic_formula() {
    for d in -2000i64..=2000 {
        if !oracle::is_fundamental(d) {
            continue;
        }
        let field = QuadField::new(d).unwrap();
        let h = field.class_number().unwrap().to_i64().unwrap();
        let expected = if d < 0 {
            oracle::class_number_imaginary(d)
        } else {
            oracle::class_number_real(&field, &field.fundamental_unit().unwrap())
        };
        assert_eq!(h, expected, "d = {d}");
    }
}

#[test]
fn pic_matches_form_count() {
    for d in [-3i64, -4, -7, -8, -15, -20, -23, -84] {
        let field = Arc::new(QuadField::new(d).unwrap());
        for f in 1u64..12 {
            let order = OrderData::from_conductor(field.clone(), f).unwrap();
            let pic = chow_core::chow::pic_cardinality(&order).unwrap().pic_cardinality;
            let disc = d * (f * f) as i64;
            assert_eq!(pic, BigInt::from(oracle::count_reduced_forms(disc)), "d = {d}, f = {f}");
        }
    }
}

#[test]
fn non_principal_places_are_detected() {
    let field = Arc::new(QuadField::new(-23).unwrap());
    let order = OrderData::from_conductor(field, 5).unwrap();
    let d = Divisor::from_terms(Level::Order, [(PlaceLabel::Branch(2, 0), BigInt::one())]);
    assert_eq!(principal_divisor_test(&order, &d, None).unwrap(), PrincipalVerdict::NotPrincipal { step: 5 });
    let cube = d.scale(&BigInt::from(3));
    assert!(matches!(principal_divisor_test(&order, &cube, None).unwrap(), PrincipalVerdict::Generator(_)));
}

#[test]
fn fix_conditions_four_and_five_agree() {
    for d in -500i64..=500 {
        if !oracle::is_fundamental(d) {
            continue;
        }
        let field = Arc::new(QuadField::new(d).unwrap());
        for f in 1u64..=50 {
            let report = OrderData::from_conductor(field.clone(), f).unwrap().prop_fix_report().unwrap();
            assert_eq!(report.condition4, report.condition5, "d = {d}, f = {f}");
        }
    }
}
