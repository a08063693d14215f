//! Exact identities of the series coefficients, checked against a Bernoulli
//! recurrence that is independent of the library's tangent-number table.

mod common;

use std::sync::OnceLock;

use num_rational::BigRational;
use proptest::prelude::*;
use sinc_certify::certify::eval_f_a;
use sinc_certify::exactnum::bernoulli;
use sinc_certify::series::{alpha, e_coeff, frak_m, ln_cos_coeff, ln_sinc_coeff, neg_ln_cos_half_coeff};
use sinc_certify::{Enclosure, Rational};

fn reference_bernoulli() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| common::bernoulli_by_recurrence(242))
}

#[test]
fn bernoulli_matches_recurrence() {
    let b = reference_bernoulli();
    for two_k in (2..=240).step_by(2) {
        assert_eq!(
            bernoulli(two_k).unwrap(),
            common::to_rational(&b[two_k as usize]),
            "B_{two_k}"
        );
    }
}

#[test]
fn ln_sinc_starts_with_known_coefficients() {
    assert_eq!(ln_sinc_coeff(1).unwrap(), Rational::frac(-1, 6));
    assert_eq!(ln_sinc_coeff(2).unwrap(), Rational::frac(-1, 180));
    assert_eq!(ln_sinc_coeff(3).unwrap(), Rational::frac(-1, 2835));
}

fn four_pow(k: u32) -> Rational {
    Rational::from_bigint(num_bigint::BigInt::from(1) << (2 * k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn coefficient_formulas(k in 1u32..=120) {
        let b = reference_bernoulli();
        let s = common::sinc_magnitude(b, k);
        prop_assert_eq!(ln_sinc_coeff(k).unwrap(), -&s);
        // l_k = (4^k − 1) s_k
        let l = &(&four_pow(k) - &Rational::one()) * &s;
        prop_assert_eq!(ln_cos_coeff(k).unwrap(), -&l);
        // −ln cos(x/2) has coefficients l_k / 4^k
        prop_assert_eq!(neg_ln_cos_half_coeff(k).unwrap(), l.checked_div(&four_pow(k)).unwrap());
    }

    #[test]
    fn e_coeff_is_the_combination(num in 1001i64..4000, k in 1u32..=60) {
        let a = Rational::frac(num, 1000);
        let combo = &(&a * &ln_sinc_coeff(k).unwrap()) + &(&Rational::from_integer(2) * &neg_ln_cos_half_coeff(k).unwrap());
        prop_assert_eq!(e_coeff(&a, k).unwrap(), combo);
    }

    #[test]
    fn sign_pattern_of_f_a(num in 1i64..500_000) {
        // a = 3/2 + num / 10^6 covers (3/2, 2)
        let a = &Rational::frac(3, 2) + &Rational::frac(num, 1_000_000);
        let m = frak_m(&a).unwrap();
        // 𝔪(a) = m exactly when α_m < a ≤ α_{m+1}
        prop_assert!(alpha(m).unwrap() < a);
        prop_assert!(a <= alpha(m + 1).unwrap());
        for k in 1..=m {
            prop_assert!(e_coeff(&a, k).unwrap().is_negative());
        }
        let next = e_coeff(&a, m + 1).unwrap();
        prop_assert!(!next.is_negative());
        prop_assert_eq!(next.is_zero(), a == alpha(m + 1).unwrap());
        for k in m + 2..=m + 10 {
            prop_assert!(e_coeff(&a, k).unwrap().is_positive());
        }
    }

    #[test]
    fn alpha_boundaries_zero_the_coefficient(k in 1u32..=30) {
        let a = alpha(k).unwrap();
        prop_assert!(e_coeff(&a, k).unwrap().is_zero());
        // the right end of (α_{k−1}, α_k] still belongs to k − 1
        prop_assert_eq!(frak_m(&a).unwrap(), k - 1);
    }

    #[test]
    fn f_a_decreases_in_a(n1 in 1501i64..1999, gap in 1i64..400, xn in 50i64..3100) {
        let a1 = Rational::frac(n1, 1000);
        let a2 = &a1 + &Rational::frac(gap, 1000);
        let x = Enclosure::from_rational(&Rational::frac(xn, 1000), 256);
        prop_assert!(eval_f_a(&a2, &x).unwrap().certainly_lt(&eval_f_a(&a1, &x).unwrap()));
    }
}

#[test]
fn three_halves_has_only_non_negative_coefficients() {
    let a = Rational::frac(3, 2);
    assert!(e_coeff(&a, 1).unwrap().is_zero());
    assert!((2..=50).all(|k| e_coeff(&a, k).unwrap().is_positive()));
}
