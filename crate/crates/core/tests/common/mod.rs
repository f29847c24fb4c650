//! Independent oracles shared by the integration tests. Nothing here goes
//! through the crate's composition, residue or successor code.
#![allow(dead_code)]

use adicscope::word::{Block, OrderWord, Vertex};
use adicscope::DiagramSpec;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5eed_7011;

pub fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

pub fn v(label: u32) -> Vertex {
    Vertex::new(label)
}

pub fn vs(labels: &[u32]) -> Vec<Vertex> {
    labels.iter().map(|&l| Vertex::new(l)).collect()
}

pub fn word(labels: &[u32]) -> OrderWord {
    OrderWord::from_labels(labels).unwrap()
}

/// Toeplitz spec with the same words at every level.
pub fn repeated_toy(words: &[&[u32]], depth: usize) -> DiagramSpec {
    let ws: Vec<OrderWord> = words.iter().map(|w| word(w)).collect();
    let q = big(words[0].len() as u64);
    DiagramSpec::toeplitz(words.len(), &vec![q; depth - 1], vec![ws; depth - 1]).unwrap()
}

/// The rank-3 toy with words `1 2 3 1`, `2 3 1 2`, `3 1 2 3` at every level.
pub fn cyclic_toy(depth: usize) -> DiagramSpec {
    repeated_toy(&[&[1, 2, 3, 1], &[2, 3, 1, 2], &[3, 1, 2, 3]], depth)
}

/// Letters of a word, expanded block by block.
pub fn expand(w: &OrderWord) -> Vec<u32> {
    let mut out = Vec::new();
    for b in w.blocks() {
        for _ in 0..b.repeat.to_u64().unwrap() {
            out.extend(b.letters.iter().map(|x| x.label()));
        }
    }
    out
}

/// One path of `E_{m,n}`: edge ranks `j_{m+1}, ..., j_n` (1-based) and its source vertex.
#[derive(Debug, Clone)]
pub struct OraclePath {
    pub ranks: Vec<u64>,
    pub source: u32,
}

/// All paths from level `m` into `t2` at level `n`, sorted by the induced
/// order (the rank at the highest level decides first).
pub fn enumerate_paths(spec: &DiagramSpec, m: usize, n: usize, t2: u32) -> Vec<OraclePath> {
    let mut out = Vec::new();
    let mut stack = vec![(n, t2, Vec::<u64>::new())];
    while let Some((level, t, ranks_top_down)) = stack.pop() {
        if level == m {
            let mut ranks = ranks_top_down.clone();
            ranks.reverse();
            out.push(OraclePath { ranks, source: t });
            continue;
        }
        let letters = expand(spec.word(level, Vertex::new(t)).unwrap());
        for (j, &u) in letters.iter().enumerate() {
            let mut r = ranks_top_down.clone();
            r.push(j as u64 + 1);
            stack.push((level - 1, u, r));
        }
    }
    out.sort_by(|a, b| a.ranks.iter().rev().cmp(b.ranks.iter().rev()));
    out
}

/// `(source, suffix)` for every path into `t2`; the `j`-th smallest of `q` paths has suffix `q - j`.
pub fn oracle_suffixes(spec: &DiagramSpec, m: usize, n: usize, t2: u32) -> Vec<(u32, u64)> {
    let paths = enumerate_paths(spec, m, n, t2);
    let total = paths.len() as u64;
    paths.iter().enumerate().map(|(j, p)| (p.source, total - (j as u64 + 1))).collect()
}

pub fn histogram(suffixes: &[(u32, u64)], rank: usize, modulus: u64) -> Vec<Vec<u64>> {
    let mut hist = vec![vec![0u64; modulus as usize]; rank];
    for &(t1, s) in suffixes {
        hist[t1 as usize - 1][(s % modulus) as usize] += 1;
    }
    hist
}

/// Histogram `[t1][k]` of suffixes mod `modulus` over the paths into `t2`.
pub fn oracle_histogram(spec: &DiagramSpec, m: usize, n: usize, t2: u32, modulus: u64) -> Vec<Vec<u64>> {
    histogram(&oracle_suffixes(spec, m, n, t2), spec.rank(), modulus)
}

fn random_word(rng: &mut ChaCha8Rng, d: usize, q: usize) -> OrderWord {
    let letter = |rng: &mut ChaCha8Rng| Vertex::new(rng.gen_range(1..=d as u32));
    if q >= 4 && rng.gen_bool(0.5) {
        // literal head, a repeated block, literal tail
        let block_len = rng.gen_range(1..=q / 2);
        let reps = rng.gen_range(1..=(q - 1) / block_len);
        let rest = q - block_len * reps;
        let head = rng.gen_range(0..=rest);
        let mut blocks = Vec::new();
        if head > 0 {
            blocks.push(Block::literal((0..head).map(|_| letter(rng)).collect()));
        }
        blocks.push(Block::new((0..block_len).map(|_| letter(rng)).collect(), reps as u64));
        if rest > head {
            blocks.push(Block::literal((0..rest - head).map(|_| letter(rng)).collect()));
        }
        OrderWord::from_blocks(blocks).unwrap()
    } else {
        OrderWord::from_letters((0..q).map(|_| letter(rng)).collect()).unwrap()
    }
}

/// Random Toeplitz spec with rank ≤ `max_rank`, depth ≤ `max_depth` and `q_n ≤ max_q`.
pub fn random_toy(rng: &mut ChaCha8Rng, max_rank: usize, max_depth: usize, max_q: usize) -> DiagramSpec {
    let d = rng.gen_range(1..=max_rank);
    let depth = rng.gen_range(2..=max_depth);
    let mut qs = Vec::new();
    let mut levels = Vec::new();
    for _ in 2..=depth {
        let q = rng.gen_range(2..=max_q);
        qs.push(big(q as u64));
        levels.push((0..d).map(|_| random_word(rng, d, q)).collect());
    }
    DiagramSpec::toeplitz(d, &qs, levels).unwrap()
}

/// The fixed toy corpus: `count` specs with d ≤ 4, q_n ≤ 12, depth ≤ 4.
pub fn toy_corpus(count: usize) -> Vec<DiagramSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..count).map(|_| random_toy(&mut rng, 4, 4, 12)).collect()
}

/// Windows `(m, n)` of a spec whose path count stays within `limit`.
pub fn small_windows(spec: &DiagramSpec, limit: u64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in 1..spec.depth() {
        for n in m + 1..=spec.depth() {
            if spec.q_window(m, n).unwrap() <= big(limit) {
                out.push((m, n));
            }
        }
    }
    out
}
