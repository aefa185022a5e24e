use std::sync::OnceLock;

use proptest::prelude::*;
use rug::Rational;
use vpt_core::dpoly::DPolynomial;
use vpt_core::perturbation::{epsilon_coefficients, epsilon_d_expansion, ExactDimension, Symbolic, WeakSeries};

const ORDER: usize = 30;

fn symbolic() -> &'static WeakSeries<DPolynomial> {
    static S: OnceLock<WeakSeries<DPolynomial>> = OnceLock::new();
    S.get_or_init(|| epsilon_coefficients(&Symbolic, ORDER).unwrap())
}

fn power(d: &Rational, j: usize) -> Rational {
    let mut p = Rational::from(1);
    for _ in 0..j {
        p *= d;
    }
    p
}

#[test]
fn expansion_lengths_and_degrees() {
    for k in 1..=20 {
        let terms = epsilon_d_expansion(symbolic(), k).unwrap();
        assert_eq!(terms.len(), k + 1, "k = {k}");
        assert_eq!(symbolic().epsilon(k).degree(), Some(k + 1));
        assert_ne!(terms[k].1, 0, "k = {k}");
        // No constant term: every order vanishes at D = 0.
        assert_eq!(symbolic().epsilon(k).coeff(0), 0);
    }
}

#[test]
fn out_of_range_order_is_rejected() {
    assert!(epsilon_d_expansion(symbolic(), 0).is_err());
    assert!(epsilon_d_expansion(symbolic(), ORDER + 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn expansion_round_trip(num in 1i64..200, den in 1i64..40) {
        let d = Rational::from((num, den));
        let exact = epsilon_coefficients(&ExactDimension::new(d.clone()).unwrap(), ORDER).unwrap();
        for k in 1..=ORDER {
            let mut sum = Rational::new();
            for (j, c) in epsilon_d_expansion(symbolic(), k).unwrap() {
                sum += c * power(&d, j);
            }
            prop_assert_eq!(&sum, exact.epsilon(k), "k = {}", k);
            prop_assert_eq!(&symbolic().epsilon(k).eval_rational(&d), exact.epsilon(k));
        }
    }
}
