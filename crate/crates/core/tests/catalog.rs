mod common;

use adicscope::catalog::*;
use adicscope::{DiagramSpec, Error, OrderWord};
use common::*;
use num_bigint::BigUint;
use num_traits::Zero;

#[test]
fn every_example_is_proper_with_declared_lengths() {
    for id in 1..=6u8 {
        let (s, meta) = build_example(id, 6).unwrap();
        assert_eq!(meta.depth, 6);
        assert!(s.validate_properness().all_ok(), "example {id}");
        for n in 2..=6 {
            for t in s.vertices() {
                assert_eq!(s.word(n, t).unwrap().len(), &example_q(n));
            }
        }
    }
}

#[test]
fn example_two_lengths_follow_the_period_count() {
    let (s, _) = build_example(2, 4).unwrap();
    for n in 3..=4 {
        let c = example_c(2, n).unwrap();
        assert_eq!(s.q(n).unwrap(), BigUint::from(12 * c + 1));
    }
    assert_eq!(example_q(3), big(15625));
    assert_eq!(example_c(2, 3), Some(1302));
}

#[test]
fn metadata_lists_the_claimed_structure() {
    let (_, m1) = build_example(1, 4).unwrap();
    let (_, m2) = build_example(2, 4).unwrap();
    assert!(m1.model_family && !m2.model_family);
    assert_eq!(m1.measure_sets, m2.measure_sets);
    let total: f64 = m2.tower_limits.iter().map(|l| l.value()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    for id in 1..=6u8 {
        let (_, m) = build_example(id, 4).unwrap();
        for ev in &m.eigenvalues {
            assert!(ev.set < m.measure_sets.len());
            assert_eq!(ev.b % ev.bb, 0);
        }
    }
    let (_, m6) = build_example(6, 4).unwrap();
    assert!(m6.eigenvalues.iter().any(|e| e.b == 8 && !e.noncontinuous));
}

#[test]
fn scaled_builders_check_their_degrees() {
    let (s, _) = build_example_scaled(2, &[big(25), big(37)]).unwrap();
    assert_eq!(s.q(4).unwrap(), big(37));
    assert!(s.validate_properness().all_ok());
    assert!(build_example_scaled(2, &[big(13)]).is_err());
    assert!(build_example_scaled(2, &[big(26)]).is_err());
    let (s3, _) = build_example_scaled(3, &[big(10), big(13)]).unwrap();
    assert!(s3.validate_properness().all_ok());
    assert!(build_example_scaled(3, &[big(7)]).is_err());
}

#[test]
fn builders_are_deterministic() {
    assert_eq!(build_example(5, 6).unwrap(), build_example(5, 6).unwrap());
    assert!(matches!(build_example(0, 4), Err(Error::Invalid(_))));
}

#[test]
fn example_two_follows_the_model_scheme() {
    let (s, _) = build_example(2, 6).unwrap();
    let r = model1_conformance(&s, 12).unwrap();
    assert!(r.passed);
    assert!(r.max_exceptions <= BigUint::from(12u32));
    assert_eq!(r.words.len(), 7 * 4);
    for w in &r.words {
        assert!(w.best_exceptions <= w.exceptions);
        if [1, 4, 7].contains(&w.vertex.label()) {
            assert!(w.exceptions.is_zero());
        }
    }
    assert!(r.kmap.same_values(&model_kmap()));
}

#[test]
fn example_five_leaves_the_scheme_on_its_second_block() {
    let (s, _) = build_example(5, 4).unwrap();
    let r = model1_conformance(&s, 12).unwrap();
    assert!(!r.passed);
    for w in &r.words {
        let big_gap = w.best_exceptions > BigUint::from(12u32);
        assert_eq!(big_gap, w.vertex.label() >= 4, "level {} vertex {:?}", w.level, w.vertex);
    }
}

#[test]
fn a_pure_cyclic_word_has_no_exceptions() {
    let w = OrderWord::from_labels(&[1, 2, 3, 4, 5, 6, 7, 2, 3, 1]).unwrap();
    let wrong = OrderWord::from_labels(&[1, 3, 2, 1, 2, 3, 1, 5, 6, 1]).unwrap();
    let mut levels = vec![vec![w.clone(); 7], vec![w.clone(); 7]];
    levels[1][0] = wrong;
    let s = DiagramSpec::toeplitz(7, &[big(10), big(10)], levels).unwrap();
    let r = model1_conformance(&s, 0).unwrap();
    assert_eq!(r.words.len(), 7);
    // classes 0 2 1 0 1 2 0 1 2 0 against 0 1 2 0 ...: two swapped positions
    assert_eq!(r.words[0].exceptions, big(2));
    for w in &r.words[1..] {
        let own_class_first = w.vertex.label() % 3 == 1;
        assert_eq!(w.exceptions, if own_class_first { big(0) } else { big(10) });
        assert!(w.best_exceptions.is_zero() && w.best_start == 0);
    }
    assert!(!r.passed);
    let (s3, _) = build_example(3, 4).unwrap();
    let small = cyclic_toy(3);
    assert!(model1_conformance(&s3, 12).is_ok());
    assert!(matches!(model1_conformance(&small, 12), Err(Error::Precondition(_))));
}
