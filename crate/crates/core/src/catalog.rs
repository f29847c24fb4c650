//! The six rank-7 worked examples and the conformance check for the
//! class-cyclic model scheme they are built from.
//!
//! All examples share `q_1 = 1`, `q_2 = 50` and `q_n = 25^n` for `n ≥ 3`.
//! Level 2 is not prescribed by the construction; every example uses the
//! word `1 (2 3 4 5 6 7 1)^7` for all seven vertices.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::add_progression;
use crate::diagram::DiagramSpec;
use crate::eigen::KMap;
use crate::error::{Error, Result};
use crate::word::{Block, OrderWord, Vertex};

pub const RANK: usize = 7;

/// `q_n` of the examples, with `q_1 = 1`.
pub fn example_q(n: usize) -> BigUint {
    match n {
        0 | 1 => BigUint::one(),
        2 => BigUint::from(50u32),
        _ => BigUint::from(25u32).pow(n as u32),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimedEigenvalue {
    /// Index into `ExampleMeta::measure_sets`.
    pub set: usize,
    pub b: u64,
    pub bb: u64,
    /// Whether `exp(2πi/b)` is claimed to be a non-continuous eigenvalue for that measure.
    pub noncontinuous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimedLimit {
    pub vertex: Vertex,
    /// Limit of `μ(τ_n = vertex)`, as `num/den`.
    pub num: u64,
    pub den: u64,
}

impl ClaimedLimit {
    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExampleMeta {
    pub id: u8,
    pub depth: usize,
    /// The example is an instance standing for the model family.
    pub model_family: bool,
    /// Claimed cleanliness sets, one per ergodic measure.
    pub measure_sets: Vec<Vec<Vertex>>,
    pub eigenvalues: Vec<ClaimedEigenvalue>,
    pub tower_limits: Vec<ClaimedLimit>,
    /// Deviations from the printed word tables and builder choices.
    pub notes: Vec<String>,
}

enum Part<'a> {
    Lit(&'a str),
    Rep(&'a str, BigUint),
}

fn letters(s: &str) -> Vec<Vertex> {
    s.bytes().map(|c| Vertex::new((c - b'0') as u32)).collect()
}

fn build(parts: &[Part<'_>]) -> OrderWord {
    let blocks = parts
        .iter()
        .map(|p| match p {
            Part::Lit(s) => Block::literal(letters(s)),
            Part::Rep(s, r) => Block::new(letters(s), r.clone()),
        })
        .collect();
    OrderWord::from_blocks(blocks).expect("example words are nonempty")
}

fn level_two() -> Vec<OrderWord> {
    vec![build(&[Part::Lit("1"), Part::Rep("2345671", 7u32.into())]); RANK]
}

fn set(labels: &[u32]) -> Vec<Vertex> {
    labels.iter().map(|&l| Vertex::new(l)).collect()
}

/// Words of one level `≥ 3` of example `id` (2..=6) with in-degree `q`.
fn words(id: u8, q: &BigUint, repair_notes: &mut Vec<String>) -> Vec<OrderWord> {
    use Part::{Lit as L, Rep as R};
    let q = q.clone();
    let c12 = (&q - 1u32) / 12u32;
    let c = |k: u32, minus: u32| &c12 * k - minus;
    match id {
        2 => vec![
            build(&[R("123456723756", c(1, 0)), L("1")]),
            build(&[L("1"), R("312645372675", c(1, 1)), R("312", 3u32.into()), L("671")]),
            build(&[L("1"), R("123456723756", c(1, 1)), R("123", 3u32.into()), L("451")]),
            build(&[R("156423756723", c(1, 0)), L("1")]),
            build(&[L("1"), R("345612375672", c(1, 1)), R("645", 3u32.into()), L("311")]),
            build(&[L("1"), R("156423756723", c(1, 1)), R("723", 3u32.into()), L("121")]),
            build(&[R("153426753726", c(1, 0)), L("1")]),
        ],
        3 => {
            let c3 = (&q - 1u32) / 3u32 - 2u32;
            vec![
                build(&[R("123", c3.clone()), L("4567231")]),
                build(&[L("13"), R("123", c3.clone()), L("45671")]),
                build(&[L("1"), R("123", c3.clone()), L("456721")]),
                build(&[L("146"), R("456", c3.clone()), L("7231")]),
                build(&[L("14"), R("456", c3.clone()), L("12371")]),
                build(&[L("1"), R("456", c3.clone()), L("123761")]),
                build(&[L("156"), R("456", c3), L("7231")]),
            ]
        }
        4 => {
            if repair_notes.is_empty() {
                repair_notes.push(
                    "words 3 and 6 use the period exponent c-1 instead of the printed c-2, \
                     which would give length 12c-11 instead of q = 12c+1"
                        .into(),
                );
            }
            vec![
                build(&[R("123456423156", c(1, 1)), R("123", 3u32.into()), L("7561")]),
                build(&[L("1"), R("312645342615", c(1, 1)), R("312", 3u32.into()), L("671")]),
                build(&[L("1"), R("123456423156", c(1, 1)), R("123", 3u32.into()), L("751")]),
                build(&[R("156423456123", c(1, 1)), R("123", 3u32.into()), L("7561")]),
                build(&[L("1"), R("345612315642", c(1, 1)), R("645", 3u32.into()), L("371")]),
                build(&[L("1"), R("156423456123", c(1, 1)), R("123", 3u32.into()), L("721")]),
                build(&[L("1"), R("7", &q - 7u32), L("654321")]),
            ]
        }
        5 | 6 => {
            let mut ws = vec![
                build(&[R("123", c(4, 2)), L("1245671")]),
                build(&[L("1"), R("312", c(4, 2)), L("345671")]),
                build(&[L("1"), R("123", c(4, 2)), L("145671")]),
            ];
            if id == 5 {
                ws.extend([
                    build(&[L("1"), R("5674", c(3, 2)), L("23745671")]),
                    build(&[L("15"), R("7456", c(3, 2)), L("7452371")]),
                    build(&[L("15"), R("4567", c(3, 2)), L("2367471")]),
                    build(&[L("12"), R("5674", c(3, 2)), L("3674571")]),
                ]);
            } else {
                ws.extend([
                    build(&[L("1"), R("647465", c(2, 1)), L("237461")]),
                    build(&[L("1"), R("656574", c(2, 1)), L("652361")]),
                    build(&[L("16"), R("646575", c(2, 1)), L("72361")]),
                    build(&[L("16"), R("757564", c(2, 1)), L("73261")]),
                ]);
            }
            ws
        }
        _ => unreachable!("example ids are checked by the caller"),
    }
}

fn meta(id: u8, depth: usize) -> ExampleMeta {
    let all = set(&[1, 2, 3, 4, 5, 6, 7]);
    let ev = |set, b, bb, noncontinuous| ClaimedEigenvalue { set, b, bb, noncontinuous };
    let lim = |v, num, den| ClaimedLimit { vertex: Vertex::new(v), num, den };
    let (measure_sets, eigenvalues, tower_limits) = match id {
        1 | 2 => (
            vec![all],
            vec![ev(0, 6, 3, true)],
            vec![lim(1, 1, 12), lim(2, 1, 6), lim(3, 1, 6), lim(4, 1, 12), lim(5, 1, 6), lim(6, 1, 6), lim(7, 1, 6)],
        ),
        3 => (vec![set(&[1, 2, 3]), set(&[4, 5, 6])], vec![ev(0, 6, 3, true), ev(1, 6, 3, true)], vec![]),
        4 => (vec![set(&[1, 2, 3, 4, 5, 6]), set(&[7])], vec![ev(0, 6, 3, true), ev(1, 6, 3, false)], vec![]),
        5 => (vec![set(&[1, 2, 3]), set(&[4, 5, 6, 7])], vec![ev(0, 6, 3, true), ev(1, 8, 4, true)], vec![]),
        _ => (
            vec![set(&[1, 2, 3]), set(&[4, 5, 6, 7])],
            vec![ev(0, 6, 3, true), ev(1, 4, 2, true), ev(1, 8, 4, false)],
            vec![],
        ),
    };
    let mut notes = vec!["level 2 uses the word 1 (2 3 4 5 6 7 1)^7 for every vertex".to_string()];
    if id == 1 {
        notes.push("the model scheme is instantiated by the example 2 words".into());
    }
    ExampleMeta { id, depth, model_family: id == 1, measure_sets, eigenvalues, tower_limits, notes }
}

/// Builds example `id` (1..=6) down to level `depth ≥ 3`.
/// Example 1 is the model scheme; it is instantiated by the example 2 words.
pub fn build_example(id: u8, depth: usize) -> Result<(DiagramSpec, ExampleMeta)> {
    if !(1..=6).contains(&id) {
        return Err(Error::Invalid(format!("unknown example {id}; expected 1..=6")));
    }
    if depth < 3 {
        return Err(Error::Invalid(format!("examples need depth ≥ 3, got {depth}")));
    }
    let qs: Vec<BigUint> = (3..=depth).map(example_q).collect();
    build_example_scaled(id, &qs)
}

/// Same words as [`build_example`] with custom in-degrees for levels `3, 4, ...`.
/// Each `q` must be `1 mod 12` (`1 mod 3` for example 3) and large enough for
/// every repeated block to occur at least once (`q ≥ 25`, or `q ≥ 10` for example 3).
pub fn build_example_scaled(id: u8, level_qs: &[BigUint]) -> Result<(DiagramSpec, ExampleMeta)> {
    if !(1..=6).contains(&id) {
        return Err(Error::Invalid(format!("unknown example {id}; expected 1..=6")));
    }
    let word_id = if id == 1 { 2 } else { id };
    let (modulus, min_q) = if word_id == 3 { (3u32, 10u32) } else { (12, 25) };
    for q in level_qs {
        if q % modulus != BigUint::one() || *q < BigUint::from(min_q) {
            return Err(Error::Invalid(format!("q = {q} must be 1 mod {modulus} and at least {min_q}")));
        }
    }
    let mut m = meta(id, level_qs.len() + 2);
    let mut repairs = Vec::new();
    let mut qs = vec![example_q(2)];
    let mut levels = vec![level_two()];
    for q in level_qs {
        qs.push(q.clone());
        levels.push(words(word_id, q, &mut repairs));
    }
    m.notes.extend(repairs);
    Ok((DiagramSpec::toeplitz(RANK, &qs, levels)?, m))
}

/// 0-based model class: 0 for {1,4,7}, 1 for {2,5}, 2 for {3,6}.
pub fn model_class(t: Vertex) -> u64 {
    (t.label() as u64 - 1) % 3
}

/// `k(t1, t2) = j - i mod 3` for `t1` in class `i` and `t2` in class `j`.
pub fn model_kmap() -> KMap {
    let all: Vec<Vertex> = (1..=RANK as u32).map(Vertex::new).collect();
    KMap::from_fn(3, &all, &all, |t1, t2| (model_class(t2) + 3 - model_class(t1)) % 3)
}

#[derive(Debug, Clone, Serialize)]
pub struct WordConformance {
    pub level: usize,
    pub vertex: Vertex,
    /// Positions whose letter class differs from the cyclic pattern started at the vertex's own class.
    pub exceptions: BigUint,
    /// Fewest mismatches against the cyclic pattern over all three starting classes.
    pub best_exceptions: BigUint,
    /// Starting class (0-based) attaining `best_exceptions`, smallest on ties.
    pub best_start: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConformanceReport {
    pub l_bound: u64,
    pub words: Vec<WordConformance>,
    pub max_exceptions: BigUint,
    pub passed: bool,
    /// `k(t1, t2) = j - i mod 3`, the class map the scheme induces.
    pub kmap: KMap,
}

/// Mismatch counts of one word against the three cyclic class patterns,
/// indexed by the class of the pattern's first letter.
fn pattern_mismatches(w: &OrderWord) -> [BigUint; 3] {
    // hits[s][c]: positions ≡ s mod 3 carrying a letter of class c
    let mut hits = vec![vec![BigUint::zero(); 3]; 3];
    for (j0, block) in w.runs() {
        let len = block.letters.len() as u64;
        let j0 = crate::arith::mod_u64(&j0, 3);
        for (a, &v) in block.letters.iter().enumerate() {
            let mut hist = vec![BigUint::zero(); 3];
            add_progression(&mut hist, j0 + a as u64, len, &block.repeat, 3);
            for (r, h) in hist.into_iter().enumerate() {
                hits[r][model_class(v) as usize] += h;
            }
        }
    }
    let total = w.len();
    std::array::from_fn(|start| {
        let matched: BigUint = (0..3).map(|r| &hits[r][(start + r) % 3]).sum();
        total - matched
    })
}

/// Compares every word at levels `≥ 3` with the class-cyclic pattern: the
/// word of `t` should read classes `c(t), c(t)+1, c(t)+2, ...` mod 3.
pub fn model1_conformance(spec: &DiagramSpec, l_bound: u64) -> Result<ConformanceReport> {
    if spec.rank() != RANK {
        return Err(Error::Precondition(format!("the model scheme needs rank 7, got {}", spec.rank())));
    }
    let mut words = Vec::new();
    for lvl in spec.levels().iter().filter(|l| l.level >= 3) {
        for t in spec.vertices() {
            let counts = pattern_mismatches(lvl.word(t));
            let best_start = (0..3).min_by_key(|&s| &counts[s]).unwrap();
            words.push(WordConformance {
                level: lvl.level,
                vertex: t,
                exceptions: counts[model_class(t) as usize].clone(),
                best_exceptions: counts[best_start].clone(),
                best_start: best_start as u64,
            });
        }
    }
    let max_exceptions = words.iter().map(|w| w.exceptions.clone()).max().unwrap_or_default();
    let passed = max_exceptions <= BigUint::from(l_bound);
    Ok(ConformanceReport { l_bound, words, max_exceptions, passed, kmap: model_kmap() })
}

/// Exact value `num/den` as a rational.
pub fn claimed_limit_rational(l: &ClaimedLimit) -> BigRational {
    BigRational::new(l.num.into(), l.den.into())
}

/// `c_n` with `q_n = 12 c_n + 1` (or `3 c_n + 1` for example 3).
pub fn example_c(id: u8, n: usize) -> Option<u64> {
    if n < 3 {
        return None;
    }
    let q = example_q(n);
    let div = if id == 3 { 3u32 } else { 12u32 };
    ((q - 1u32) / div).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_are_proper_with_exact_lengths() {
        for id in 1..=6 {
            let (s, m) = build_example(id, 5).unwrap();
            assert!(s.is_toeplitz(), "example {id}");
            assert!(s.validate_properness().all_ok(), "example {id}: {:?}", s.validate_properness().failures);
            for n in 2..=5 {
                assert_eq!(s.q(n).unwrap(), example_q(n));
            }
            assert_eq!(m.id, id);
        }
        assert_eq!(example_q(3), BigUint::from(15625u32));
        assert_eq!(example_c(2, 3), Some(1302));
        assert_eq!(example_c(3, 3), Some(5208));
    }

    #[test]
    fn builders_are_deterministic() {
        assert_eq!(build_example(4, 5).unwrap(), build_example(4, 5).unwrap());
        assert!(build_example(7, 5).is_err());
        assert!(build_example(2, 2).is_err());
    }

    #[test]
    fn example_four_records_its_repair() {
        let (_, m) = build_example(4, 4).unwrap();
        assert!(m.notes.iter().any(|n| n.contains("c-1")));
    }

    #[test]
    fn model_map_is_class_difference() {
        let k = model_kmap();
        let v = Vertex::new;
        assert_eq!(k.get(v(1), v(2)), Some(1));
        assert_eq!(k.get(v(2), v(1)), Some(2));
        assert_eq!(k.get(v(6), v(4)), Some(1));
        assert_eq!(k.get(v(7), v(7)), Some(0));
    }
}
