use proptest::prelude::*;

use super::*;
use crate::arith::{gcd, rational, TwoAdic, Valuation};
use crate::modsym::LatticeShape;
use crate::testutil::engine;

fn spec(m: u64) -> DivisorSpec {
    DivisorSpec::from_modulus(m).unwrap()
}

#[test]
fn divisor_specs() {
    assert!(DivisorSpec::new(0, 9).is_err());
    assert!(DivisorSpec::new(0, 6).is_err());
    assert!(DivisorSpec::new(2, 3).is_err());
    assert_eq!(spec(60).modulus(), 60);
    assert!(spec(4).divides(&spec(20)));
    assert!(!spec(4).divides(&spec(5)));
    assert!(spec(5).divides(&spec(20)));
    let fam: Vec<u64> = spec(105).primed_family().iter().map(|d| d.modulus()).collect();
    assert_eq!(fam, vec![1, 3, 5, 7, 15, 21, 35, 105]);
    let fam: Vec<u64> = spec(60).primed_family().iter().map(|d| d.modulus()).collect();
    assert_eq!(fam, vec![4, 12, 20, 60]);
}

#[test]
fn base_values() {
    let e34 = engine("34a1");
    assert_eq!(e34.t1().unwrap(), rational(1, 3));
    assert_eq!(e34.t1().unwrap().v2(), 0);
    let e37 = engine("37a1");
    assert_eq!(e37.t1().unwrap(), rational(0, 1));
    assert_eq!(e37.t4().unwrap(), rational(2, 1));
    // chi_4(3) [3/4]^- = [1/4]^- by antisymmetry
    let direct = e37.t_dm_direct(spec(4), spec(4)).unwrap().value;
    assert_eq!(direct, e37.symbol(1, 4, crate::modsym::Sign::Minus).unwrap() * rational(2, 1));
    // exactly zero, matching the infinite entry for m = 5
    assert_eq!(e37.t_m(spec(20)).unwrap().v2(), Valuation::Infinity);
}

#[test]
fn factorization_examples() {
    let e34 = engine("34a1");
    assert_eq!(e34.ap(5).unwrap(), 0);
    let f = e34.t_dm_factored(spec(1), spec(5)).unwrap();
    assert_eq!(f.value, e34.t1().unwrap() * rational(-2, 1));
    assert_eq!(f.v2(), 1);
    assert_eq!(f.value, e34.t_dm_direct(spec(1), spec(5)).unwrap().value);

    let e37 = engine("37a1");
    assert_eq!(e37.ap(3).unwrap(), -3);
    let f = e37.t_dm_factored(spec(4), spec(12)).unwrap();
    assert_eq!(f.value, e37.t4().unwrap() * rational(-1, 1));
    assert_eq!(f.value, e37.t_dm_direct(spec(4), spec(12)).unwrap().value);

    let same = e34.t_dm_factored(spec(35), spec(35)).unwrap();
    assert_eq!(same.value, e34.t_m(spec(35)).unwrap());
    assert!(e34.t_dm_factored(spec(1), spec(20)).is_err());
    assert!(e34.t_dm_direct(spec(3), spec(5)).is_err());
    assert!(e34.t_dm_direct(spec(1), spec(17)).is_err());
}

#[test]
fn recursion_examples() {
    let e34 = engine("34a1");
    let e37 = engine("37a1");
    assert!(e34.check_lemma_recursion(5, spec(1), spec(5)).unwrap().holds);
    assert!(e37.check_lemma_recursion(3, spec(4), spec(12)).unwrap().holds);
    assert!(e34.check_lemma_recursion(7, spec(5), spec(35)).unwrap().holds);
    assert!(e34.check_lemma_recursion(5, spec(5), spec(35)).is_err());
}

#[test]
fn character_sums() {
    assert_eq!(char_sum_sigma(spec(15), 1).unwrap(), 4);
    assert_eq!(char_sum_sigma(spec(15), 2).unwrap(), 0);
    assert_eq!(char_sum_sigma(spec(12), 5).unwrap(), 0);
    assert!(char_sum_sigma(spec(15), 3).is_err());
    for m in 1..=500u64 {
        let Ok(s) = DivisorSpec::from_modulus(m) else { continue };
        for k in 1..=m as i64 {
            if gcd(k, m as i64) != 1 {
                continue;
            }
            let direct = char_sum_sigma(s, k).unwrap();
            assert_eq!(direct, char_sum_closed_form(s, k).unwrap(), "M={m} k={k}");
            assert!(direct.v2() >= s.r() as i64);
        }
    }
}

#[test]
fn integrality_examples() {
    let e34 = engine("34a1");
    assert_eq!(e34.shape(), LatticeShape::Rectangular);
    assert!(e34.check_integrality(2, 7).unwrap().holds());
    assert!(engine("37a1").check_integrality(1, 4).unwrap().holds());
    assert!(engine("11a1").check_integrality(3, 7).unwrap().holds());
}

#[test]
fn sum_bound_examples() {
    let e34 = engine("34a1");
    let c = e34.check_sum_bound_general(spec(5)).unwrap();
    assert_eq!(c.bound, Some(1));
    assert!(c.holds);
    let c = e34.check_sum_bound_general(spec(145)).unwrap();
    assert_eq!(c.bound, Some(2));
    assert!(c.holds);
    let e37 = engine("37a1");
    let c = e37.check_sum_bound_general(spec(12)).unwrap();
    assert_eq!(c.bound, Some(1));
    assert!(c.holds);

    let p = e34.check_sum_bound_plus(spec(5)).unwrap();
    let p = p.applicable().unwrap();
    assert_eq!(p.bound, Some(2));
    assert!(p.holds);
    let p = e37.check_sum_bound_plus(spec(20)).unwrap();
    assert_eq!(p.applicable().unwrap().bound, Some(2));
    assert!(p.applicable().unwrap().holds);
    assert!(!e34.check_sum_bound_plus(spec(7)).unwrap().is_applicable());
    assert!(!e34.check_sum_bound_plus(spec(1)).unwrap().is_applicable());
    assert!(e37.check_sum_bound_plus(spec(4)).unwrap().is_applicable());
}

#[test]
fn before_twist_examples() {
    let e34 = engine("34a1");
    let c = e34.check_before_twist(5).unwrap();
    assert!(c.t1_difference);
    assert!(!c.t4_membership.is_applicable());
    // the stated first inequality asks for v2(a_5 - 6) >= 2, but a_5 - 6 = -6
    let p = &c.prime_bounds[0];
    assert_eq!(p.first.valuation, 1);
    assert_eq!(p.first.bound, Some(2));
    assert!(!p.first.holds);
    assert!(p.first_single_prime.holds);

    let e37 = engine("37a1");
    let c = e37.check_before_twist(3).unwrap();
    assert!(c.memberships_hold());
    assert!(!c.even_ap_strengthening.is_applicable());
    assert_eq!(c.t4_membership, Gated::Applicable(true));
    let c = e37.check_before_twist(5).unwrap();
    assert_eq!(c.even_ap_strengthening, Gated::Applicable(true));
    assert!(c.single_prime_bounds_hold());
    assert!(e37.check_before_twist(37).is_err());
}

#[test]
fn frak_invariants() {
    assert_eq!(frak_vw(&[0, -2]), (Valuation::Finite(1), 1));
    assert_eq!(frak_vw(&[-3, 0]), (Valuation::Finite(0), 0));
    assert_eq!(frak_vw(&[2]), (Valuation::Infinity, 1));
}

fn squarefree_odd_coprime(n: u64) -> impl Strategy<Value = u64> {
    (1u64..400).prop_filter("odd squarefree coprime", move |m| {
        m % 2 == 1 && crate::arith::is_squarefree(*m) && gcd(*m as i64, n as i64) == 1
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn direct_matches_factored_37a(m in squarefree_odd_coprime(37), four in any::<bool>(), mask in any::<u8>()) {
        let e = engine("37a1");
        let big = DivisorSpec::new(four as u8, m).unwrap();
        let primes = big.primes();
        let d: u64 = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, q)| q).product();
        let small = DivisorSpec::new(four as u8, d).unwrap();
        prop_assert_eq!(
            e.t_dm_direct(small, big).unwrap().value,
            e.t_dm_factored(small, big).unwrap().value
        );
    }

    #[test]
    fn sum_bounds_34a(m in squarefree_odd_coprime(34)) {
        let e = engine("34a1");
        prop_assert!(e.check_sum_bound_general(spec(m)).unwrap().holds);
        prop_assert!(e.check_sum_bound_plus(spec(m)).unwrap().map_ref(|c| c.holds).holds_or_gated());
    }

    #[test]
    fn integrality_11a(m in 2u64..300, k in 1i64..300) {
        prop_assume!(gcd(k, m as i64) == 1 && m % 11 != 0);
        prop_assert!(engine("11a1").check_integrality(k, m).unwrap().holds());
    }
}
