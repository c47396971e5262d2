use super::*;
use crate::arith::{TwoAdic, Valuation};
use crate::error::Error;
use crate::testutil::engine;
use crate::twist::{DivisorSpec, Gated};

#[test]
fn classification_examples() {
    let e37 = engine("37a1");
    let e34 = engine("34a1");
    let c = classify_prime(&e37, 41).unwrap();
    assert_eq!((c.sign, c.i), (1, Valuation::Finite(0)));
    assert_eq!(c.name(), "S0+");
    let c = classify_prime(&e34, 5).unwrap();
    assert_eq!((c.sign, c.i), (1, Valuation::Finite(1)));
    let c = classify_prime(&e37, 5).unwrap();
    assert_eq!((c.sign, c.i), (1, Valuation::Finite(2)));
    // a_23 = 2 for 37a
    assert_eq!(classify_prime(&e37, 23).unwrap().i, Valuation::Infinity);
    assert!(classify_prime(&e37, 37).is_err());
    assert!(classify_prime(&e37, 9).is_err());
    assert_eq!(parse_class("S1-").unwrap(), (Valuation::Finite(1), -1));
    assert!(parse_class("T1+").is_err());
}

#[test]
fn frak_examples() {
    assert_eq!(frak_invariants(&engine("34a1"), 5).unwrap(), (Valuation::Finite(1), 1, 1));
    let e37 = engine("37a1");
    assert_eq!(frak_invariants(&e37, 3 * 41).unwrap(), (Valuation::Finite(0), 0, 2));
    assert_eq!(frak_invariants(&e37, 5 * 13).unwrap(), (Valuation::Finite(2), 1, 2));
}

#[test]
fn bound_examples() {
    let (_, b) = theorem_bound(&engine("34a1"), 0, 5).unwrap();
    assert_eq!(b.plus, Gated::Applicable(1));
    assert!(b.equality_condition_met());

    let e37 = engine("37a1");
    let (_, b) = theorem_bound(&e37, 1, 41).unwrap();
    assert_eq!(b.plus, Gated::Applicable(0));
    assert_eq!(b.equality_condition_plus, Gated::Applicable(true));

    let (_, b) = theorem_bound(&e37, 1, 3).unwrap();
    assert!(!b.plus.is_applicable());
    assert_eq!(b.general, 0);

    assert!(matches!(theorem_bound(&e37, 1, 37), Err(Error::NotCoprime { .. })));
    assert!(matches!(theorem_bound(&e37, 1, 137), Err(Error::HypothesisNotMet(_))));
    assert!(theorem_bound(&engine("34a1"), 1, 5).is_err());
}

#[test]
fn report_examples() {
    let e34 = engine("34a1");
    let r = verify_twist(&e34, 0, 11).unwrap();
    assert_eq!(r.actual, Valuation::Infinity);
    assert!(r.inequality_holds && !r.equality_attained);
    let r = verify_twist(&e34, 0, 29).unwrap();
    assert_eq!((r.actual, r.bound.applicable), (Valuation::Finite(1), 1));
    assert!(r.equality_condition_met && r.equality_attained);
    let r = verify_twist(&e34, 0, 145).unwrap();
    assert_eq!(r.r, 2);
    assert_eq!(r.bound.applicable, 2);
    assert!(r.inequality_holds && r.equality_consistent);

    let e37 = engine("37a1");
    let r = verify_twist(&e37, 1, 59).unwrap();
    assert_eq!(r.actual, Valuation::Finite(3));
    assert!(r.bound.general <= 3 && r.inequality_holds);
    assert_eq!(r.tau_shift, 1);
}

#[test]
fn tables_against_reference() {
    let t = generate_table(&engine("34a1"), 0, 3, 191).unwrap();
    let a = audit_table(&t, REFERENCE_34A_N0);
    assert!(a.missing.is_empty());
    assert_eq!(a.data_matches(), 30);
    assert_eq!(a.flags_match(), 30);
    assert_eq!(a.uniform_matches(), 30);
    assert!(a.applicable_differs().contains(&11));
    // 3 lies in S2- but is not printed
    assert_eq!(a.extra, vec![3]);

    let t = generate_table(&engine("37a1"), 1, 3, 151).unwrap();
    let a = audit_table(&t, REFERENCE_37A_N1);
    assert!(a.missing.is_empty() && a.extra.is_empty());
    assert_eq!(a.data_matches(), 30);
    assert_eq!(a.flags_match(), 30);
    assert_eq!(a.uniform_differs(), vec![5, 13, 29, 113]);

    assert!(generate_table(&engine("37a1"), 1, 100, 90).unwrap().is_empty());
}

#[test]
fn prime_scan() {
    let e37 = engine("37a1");
    assert_eq!(intro_prime_scan(&e37, 5).unwrap(), vec![41, 53, 73, 101, 149]);
    assert!(intro_prime_scan(&e37, 0).unwrap().is_empty());
    assert_eq!(
        scan_class(&engine("34a1"), Valuation::Finite(1), 1, 5).unwrap(),
        vec![5, 29, 37, 61, 109]
    );
}

#[test]
fn factor_shift_for_s0_primes() {
    let e37 = engine("37a1");
    for m in [3u64, 7, 11, 41, 53] {
        let big = DivisorSpec::new(1, m).unwrap();
        let d = DivisorSpec::new(1, 1).unwrap();
        let lhs = e37.t_dm_direct(d, big).unwrap().v2();
        let a = e37.ap(m).unwrap() + 2 * if m % 4 == 1 { -1 } else { 1 };
        assert_eq!(lhs, e37.t4().unwrap().v2() + a.v2());
    }
}
