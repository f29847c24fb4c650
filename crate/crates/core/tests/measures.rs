mod common;

use adicscope::arith::{rational, rational_to_f64};
use adicscope::catalog::{build_example, example_c};
use adicscope::measures::*;
use common::*;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

fn primitive_toy(depth: usize) -> adicscope::DiagramSpec {
    repeated_toy(&[&[1, 1, 2, 1], &[1, 2, 2, 2]], depth)
}

#[test]
fn masses_are_exact_probability_vectors_and_consistent() {
    for id in [2u8, 3, 5] {
        let (s, _) = build_example(id, 5).unwrap();
        let seed = set_seed(7, &vs(&[1, 3, 6]));
        let deep = measure_estimate(&s, 4, 5, &seed).unwrap();
        for l in 1..4 {
            let mv = measure_estimate(&s, l, 5, &seed).unwrap();
            assert_eq!(mv.total(), BigRational::one());
            let p = s.product_matrix(l, 4).unwrap();
            for t1 in 0..7 {
                let via: BigRational = (0..7)
                    .map(|t2| BigRational::from_integer(BigInt::from(p.get(t1, t2).clone())) * &deep.base[t2])
                    .sum();
                assert_eq!(via, mv.base[t1], "example {id} level {l}");
            }
        }
    }
}

#[test]
fn point_seed_is_the_normalized_column() {
    let (s, _) = build_example(4, 4).unwrap();
    let p = s.product_matrix(2, 4).unwrap();
    let h = s.heights(2).unwrap();
    let col = 3;
    let mv = measure_estimate(&s, 2, 4, &point_seed(7, v(col as u32 + 1))).unwrap();
    let weights: Vec<BigUint> = (0..7).map(|t| p.get(t, col) * &h[t]).collect();
    let total: BigUint = weights.iter().sum();
    for t in 0..7 {
        assert_eq!(mv.tower[t], rational(&weights[t], &total));
    }
}

#[test]
fn diameter_contracts_on_a_primitive_toy() {
    let s = primitive_toy(5);
    let two = simplex_diameter(&s, 1, 2).unwrap();
    let three = simplex_diameter(&s, 1, 3).unwrap();
    assert!(three < two);
    let mut last = two;
    for n in 3..=5 {
        let d = simplex_diameter(&s, 1, n).unwrap();
        assert!(d <= last);
        last = d;
    }
    let flat = repeated_toy(&[&[1, 2], &[2, 1]], 2);
    assert!(simplex_diameter(&flat, 1, 2).unwrap().is_zero());
}

#[test]
fn two_measure_example_keeps_a_wide_simplex() {
    let (s, _) = build_example(3, 5).unwrap();
    let d = rational_to_f64(&simplex_diameter(&s, 2, 5).unwrap());
    assert!(d > 1.5, "diameter {d}");
    let (s2, _) = build_example(2, 5).unwrap();
    assert!(rational_to_f64(&simplex_diameter(&s2, 2, 5).unwrap()) < 0.01);
}

#[test]
fn cleanliness_partitions_of_the_examples() {
    for id in 2..=6u8 {
        let (s, meta) = build_example(id, 5).unwrap();
        let r = cleanliness_classify(&s, 5, DEFAULT_DELTA, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(r.sets(), meta.measure_sets, "example {id}");
        assert_eq!(r.exact, id == 2);
        let mut seen = std::collections::BTreeSet::new();
        for set in r.sets() {
            for t in set {
                assert!(seen.insert(t), "example {id}: {t:?} in two sets");
            }
        }
    }
    assert!(cleanliness_classify(&primitive_toy(3), 3, 0.05, 0.02).is_err());
}

#[test]
fn low_independence_on_toys_and_examples() {
    let s = primitive_toy(4);
    for m in 1..3 {
        let r = low_independence_check(&s, &vs(&[1, 2]), m, 4, 0.05).unwrap();
        assert!(r.ratios.iter().all(|&(_, x)| x >= 0.25));
    }
    let (s2, _) = build_example(2, 5).unwrap();
    let all: Vec<_> = s2.vertices().collect();
    let r = low_independence_check(&s2, &all, 2, 5, 0.05).unwrap();
    assert_eq!(r.n0, Some(3));
    let single = low_independence_check(&s2, &vs(&[4]), 2, 4, 0.05).unwrap();
    let p = s2.product_matrix(2, 4).unwrap();
    let share = rational_to_f64(&rational(p.get(3, 3), &s2.q_window(2, 4).unwrap()));
    assert_eq!(single.ratios.last().unwrap(), &(4, share));
    assert!(low_independence_check(&s2, &[], 2, 4, 0.05).is_err());
}

#[test]
fn tower_masses_of_example_two_sit_inside_the_letter_count_bracket() {
    let (s, meta) = build_example(2, 5).unwrap();
    let rows = tower_mass_limit_table(&s, 5).unwrap();
    for row in rows.iter().filter(|r| r.vertex == v(1) && (2..5).contains(&r.level)) {
        let c = example_c(2, row.level + 1).unwrap();
        let q = s.q(row.level + 1).unwrap();
        let lo = rational(&BigUint::from(c + 1), &q);
        let hi = rational(&BigUint::from(c + 4), &q);
        assert!(lo < row.uniform && row.uniform < hi, "level {}", row.level);
    }
    for lim in &meta.tower_limits {
        let row = rows.iter().find(|r| r.level == 3 && r.vertex == lim.vertex).unwrap();
        assert!((rational_to_f64(&row.uniform) - lim.value()).abs() < 5e-3);
        assert!(row.lo <= row.uniform && row.uniform <= row.hi);
    }
}

#[test]
fn cyclic_toy_masses_are_thirds() {
    let s = cyclic_toy(4);
    let third = BigRational::new(1.into(), 3.into());
    for row in tower_mass_limit_table(&s, 4).unwrap() {
        assert_eq!(row.uniform, third);
    }
}

#[test]
fn outside_columns_are_bounded_by_outside_masses() {
    for id in [3u8, 4, 5, 6] {
        let (s, meta) = build_example(id, 5).unwrap();
        for set in &meta.measure_sets {
            let seed = set_seed(7, set);
            for m in 2..4 {
                let mv = measure_estimate(&s, m, 5, &seed).unwrap().tower_f64();
                let p = s.product_matrix(m, 5).unwrap();
                let q = s.q_window(m, 5).unwrap();
                for t1 in s.vertices().filter(|t| !set.contains(t)) {
                    for &t2 in set {
                        let share = rational_to_f64(&rational(p.get(t1.index(), t2.index()), &q));
                        assert!(share <= mv[t1.index()] / DEFAULT_DELTA + 1e-9, "example {id} m={m} {t1:?}->{t2:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn seeds_must_be_probability_vectors() {
    let s = cyclic_toy(3);
    let half = BigRational::new(1.into(), 2.into());
    assert!(measure_estimate(&s, 1, 3, &[half.clone(), half.clone()]).is_err());
    assert!(measure_estimate(&s, 1, 3, &[half.clone(), half, BigRational::one()]).is_err());
}
