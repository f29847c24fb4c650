//! Ordered Bratteli diagrams of Toeplitz type, stored level by level as order words.
//!
//! Level 1 is implicit: every vertex has a single edge from the root, so
//! `q_1 = 1` and `h_1 = (1, ..., 1)`. Explicit levels run from 2 to the depth.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::word::{Block, OrderWord, Vertex};

/// Default bound on the number of letters materialized by explicit expansion.
pub const DEFAULT_EXPAND_LIMIT: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub level: usize,
    /// `words[t.index()]` orders the incoming edges of vertex `t`.
    pub words: Vec<OrderWord>,
}

impl LevelSpec {
    /// Common word length, if all vertices agree.
    pub fn q(&self) -> Option<&BigUint> {
        let first = self.words.first()?.len();
        self.words.iter().all(|w| w.len() == first).then_some(first)
    }

    pub fn word(&self, t: Vertex) -> &OrderWord {
        &self.words[t.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSpec {
    rank: usize,
    levels: Vec<LevelSpec>,
    toeplitz: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropernessReport {
    pub h1_ok: bool,
    pub h2_ok: bool,
    pub h3_ok: bool,
    pub h4_ok: bool,
    pub unique_min_ok: bool,
    /// Human-readable failure descriptions, one per offending level and property.
    pub failures: Vec<String>,
}

impl PropernessReport {
    pub fn all_ok(&self) -> bool {
        self.h1_ok && self.h2_ok && self.h3_ok && self.h4_ok && self.unique_min_ok
    }
}

/// A restriction of a diagram to a vertex subset, relabelled `1..=kept.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subdiagram {
    pub spec: DiagramSpec,
    /// `kept[i]` is the original label of new vertex `i + 1`.
    pub kept: Vec<Vertex>,
}

impl DiagramSpec {
    /// Checks alphabet ranges and level numbering; the Toeplitz flag is derived
    /// from the word lengths.
    pub fn new(rank: usize, levels: Vec<LevelSpec>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Invalid("rank must be positive".into()));
        }
        let depth = levels.len() + 1;
        for (i, lvl) in levels.iter().enumerate() {
            if lvl.level != i + 2 {
                return Err(Error::LevelSequence { depth, found: lvl.level });
            }
            if lvl.words.len() != rank {
                return Err(Error::MissingWord { level: lvl.level, vertex: lvl.words.len() as u32 + 1 });
            }
            for w in &lvl.words {
                let top = w.max_letter();
                if top.index() >= rank {
                    return Err(Error::VertexOutOfRange { vertex: top.label() as u64, rank });
                }
            }
        }
        let toeplitz = levels.iter().all(|l| l.q().is_some());
        Ok(DiagramSpec { rank, levels, toeplitz })
    }

    /// Like [`DiagramSpec::new`] but requires constant in-degree, checked
    /// against the declared `q_n` of each level (`qs[0]` is `q_2`).
    pub fn toeplitz(rank: usize, qs: &[BigUint], words: Vec<Vec<OrderWord>>) -> Result<Self> {
        if qs.len() != words.len() {
            return Err(Error::Invalid("one q value per level expected".into()));
        }
        let mut levels = Vec::with_capacity(words.len());
        for (i, (q, ws)) in qs.iter().zip(words).enumerate() {
            let level = i + 2;
            for (t, w) in ws.iter().enumerate() {
                if w.len() != q {
                    return Err(Error::LengthMismatch {
                        level,
                        vertex: t as u32 + 1,
                        found: w.len().to_string(),
                        expected: q.to_string(),
                    });
                }
            }
            levels.push(LevelSpec { level, words: ws });
        }
        Self::new(rank, levels)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn depth(&self) -> usize {
        self.levels.len() + 1
    }

    pub fn is_toeplitz(&self) -> bool {
        self.toeplitz
    }

    pub fn levels(&self) -> &[LevelSpec] {
        &self.levels
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.rank).map(Vertex::from_index)
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n < 2 || n > self.depth() {
            return Err(Error::LevelOutOfRange { level: n, depth: self.depth() });
        }
        Ok(())
    }

    fn check_window(&self, m: usize, n: usize) -> Result<()> {
        if m < 1 || m > n || n > self.depth() {
            return Err(Error::InvalidWindow { m, n, depth: self.depth() });
        }
        Ok(())
    }

    pub fn level(&self, n: usize) -> Result<&LevelSpec> {
        self.check_level(n)?;
        Ok(&self.levels[n - 2])
    }

    pub fn word(&self, n: usize, t: Vertex) -> Result<&OrderWord> {
        Ok(self.level(n)?.word(t))
    }

    /// `q_n`, with `q_1 = 1`.
    pub fn q(&self, n: usize) -> Result<BigUint> {
        if n == 1 {
            return Ok(BigUint::one());
        }
        self.level(n)?.q().cloned().ok_or(Error::NotToeplitz)
    }

    /// `q_{m,n} = q_{m+1} ... q_n`, with `q_{n,n} = 1`.
    pub fn q_window(&self, m: usize, n: usize) -> Result<BigUint> {
        self.check_window(m, n)?;
        let mut acc = BigUint::one();
        for l in m + 1..=n {
            acc *= self.q(l)?;
        }
        Ok(acc)
    }

    /// `p_n = q_1 ... q_n`, the common tower height at level `n`.
    pub fn p(&self, n: usize) -> Result<BigUint> {
        self.q_window(1, n)
    }

    /// Tower heights `h_n(t)`; all equal to `p_n` for Toeplitz diagrams.
    pub fn heights(&self, n: usize) -> Result<Vec<BigUint>> {
        self.check_window(1, n)?;
        let mut h = vec![BigUint::one(); self.rank];
        for l in 2..=n {
            h = self.incidence_matrix(l)?.left_mul(&h);
        }
        Ok(h)
    }

    /// `M_n[t1][t2]` = occurrences of `t1` in `w_n(t2)`.
    pub fn incidence_matrix(&self, n: usize) -> Result<Matrix> {
        let lvl = self.level(n)?;
        Ok(Matrix::from_columns(lvl.words.iter().map(|w| w.letter_counts(self.rank)).collect()))
    }

    /// `P_{m,n} = M_{m+1} ... M_n`, the identity when `m = n`.
    pub fn product_matrix(&self, m: usize, n: usize) -> Result<Matrix> {
        self.check_window(m, n)?;
        let mut acc = Matrix::identity(self.rank);
        for l in m + 1..=n {
            acc = &acc * &self.incidence_matrix(l)?;
        }
        Ok(acc)
    }

    /// Composed order words `W_{m,n}(t)` for every vertex `t` at level `n`.
    ///
    /// Literal blocks of `w_n(t)` splice in the already-encoded lower words;
    /// a repeated block has its lower words expanded once and keeps the
    /// repeat. `limit` bounds the number of stored letters per word.
    pub fn compose_all(&self, m: usize, n: usize, limit: u64) -> Result<Vec<OrderWord>> {
        if m >= n {
            return Err(Error::InvalidWindow { m, n, depth: self.depth() });
        }
        self.check_window(m, n)?;
        let mut cur: Vec<OrderWord> = self.level(m + 1)?.words.clone();
        for l in m + 2..=n {
            let lvl = self.level(l)?;
            cur = lvl
                .words
                .iter()
                .map(|w| substitute(w, &cur, limit))
                .collect::<Result<Vec<_>>>()?;
        }
        Ok(cur)
    }

    pub fn compose_words(&self, m: usize, n: usize, t: Vertex, limit: u64) -> Result<OrderWord> {
        self.check_level(n)?;
        if m + 1 == n {
            return Ok(self.level(n)?.word(t).clone());
        }
        if m >= n || m < 1 {
            return Err(Error::InvalidWindow { m, n, depth: self.depth() });
        }
        let lower = self.compose_all(m, n - 1, limit)?;
        substitute(self.level(n)?.word(t), &lower, limit)
    }

    /// Contraction to the given cut levels, which must start at 1 and increase.
    /// Levels beyond the last cut are dropped.
    pub fn telescope(&self, cuts: &[usize], limit: u64) -> Result<DiagramSpec> {
        if cuts.first() != Some(&1) || cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(format!("cut levels must start at 1 and increase: {cuts:?}")));
        }
        if *cuts.last().unwrap() > self.depth() {
            return Err(Error::LevelOutOfRange { level: *cuts.last().unwrap(), depth: self.depth() });
        }
        let levels = cuts
            .windows(2)
            .enumerate()
            .map(|(i, w)| Ok(LevelSpec { level: i + 2, words: self.compose_all(w[0], w[1], limit)? }))
            .collect::<Result<Vec<_>>>()?;
        DiagramSpec::new(self.rank, levels)
    }

    /// Restriction to the vertices in `keep` at every level, with order words
    /// filtered to kept letters and vertices relabelled in increasing order.
    pub fn restrict(&self, keep: &[Vertex]) -> Result<Subdiagram> {
        let mut kept: Vec<Vertex> = keep.to_vec();
        kept.sort();
        kept.dedup();
        if kept.is_empty() {
            return Err(Error::Invalid("empty vertex subset".into()));
        }
        if let Some(v) = kept.iter().find(|v| v.index() >= self.rank) {
            return Err(Error::VertexOutOfRange { vertex: v.label() as u64, rank: self.rank });
        }
        let mut relabel = vec![None; self.rank];
        for (i, v) in kept.iter().enumerate() {
            relabel[v.index()] = Some(Vertex::from_index(i));
        }
        let mut levels = Vec::with_capacity(self.levels.len());
        for lvl in &self.levels {
            let mut words = Vec::with_capacity(kept.len());
            for &t in &kept {
                let filtered = lvl
                    .word(t)
                    .filter(|v| relabel[v.index()].is_some())
                    .ok_or(Error::Disconnected { level: lvl.level, vertex: t.label() })?;
                words.push(filtered.map(|v| relabel[v.index()].unwrap()));
            }
            levels.push(LevelSpec { level: lvl.level, words });
        }
        Ok(Subdiagram { spec: DiagramSpec::new(kept.len(), levels)?, kept })
    }

    /// Checks the properness hypotheses: trivial first level, positive incidence
    /// matrices, constant rank, and common last (maximal) and first (minimal)
    /// letters at every explicit level.
    pub fn validate_properness(&self) -> PropernessReport {
        let mut failures = Vec::new();
        let mut h2_ok = true;
        let mut h4_ok = true;
        let mut unique_min_ok = true;
        for lvl in &self.levels {
            for (i, w) in lvl.words.iter().enumerate() {
                let missing: Vec<String> =
                    self.vertices().filter(|&v| !w.contains(v)).map(|v| v.to_string()).collect();
                if !missing.is_empty() {
                    h2_ok = false;
                    failures.push(format!(
                        "level {}: word {} misses letters {}",
                        lvl.level,
                        i + 1,
                        missing.join(",")
                    ));
                }
            }
            let lasts: Vec<Vertex> = lvl.words.iter().map(OrderWord::last).collect();
            if lasts.iter().any(|&v| v != lasts[0]) {
                h4_ok = false;
                failures.push(format!("level {}: last letters differ: {}", lvl.level, join(&lasts)));
            }
            let firsts: Vec<Vertex> = lvl.words.iter().map(OrderWord::first).collect();
            if firsts.iter().any(|&v| v != firsts[0]) {
                unique_min_ok = false;
                failures.push(format!("level {}: first letters differ: {}", lvl.level, join(&firsts)));
            }
        }
        PropernessReport { h1_ok: true, h2_ok, h3_ok: true, h4_ok, unique_min_ok, failures }
    }

    pub fn require_toeplitz(&self) -> Result<()> {
        if self.toeplitz {
            Ok(())
        } else {
            Err(Error::NotToeplitz)
        }
    }

    /// Truncation to levels `1..=depth`.
    pub fn truncate(&self, depth: usize) -> Result<DiagramSpec> {
        self.check_window(1, depth)?;
        DiagramSpec::new(self.rank, self.levels[..depth - 1].to_vec())
    }
}

fn join(vs: &[Vertex]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Replaces every letter `u` of `word` by `lower[u]`.
fn substitute(word: &OrderWord, lower: &[OrderWord], limit: u64) -> Result<OrderWord> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut stored: u64 = 0;
    let charge = |n: usize, stored: &mut u64| -> Result<()> {
        *stored += n as u64;
        if *stored > limit {
            return Err(Error::ExpansionLimit { letters: stored.to_string(), limit });
        }
        Ok(())
    };
    for b in word.blocks() {
        if b.repeat.is_one() {
            for u in &b.letters {
                let w = &lower[u.index()];
                charge(w.stored_letters(), &mut stored)?;
                blocks.extend(w.blocks().iter().cloned());
            }
        } else {
            let inner_len: BigUint = b.letters.iter().map(|u| lower[u.index()].len()).sum();
            let n = inner_len.to_u64().filter(|&n| n <= limit).ok_or_else(|| Error::ExpansionLimit {
                letters: inner_len.to_string(),
                limit,
            })?;
            charge(n as usize, &mut stored)?;
            let mut letters = Vec::with_capacity(n as usize);
            for u in &b.letters {
                letters.extend(lower[u.index()].expand(limit)?);
            }
            blocks.push(Block { letters, repeat: b.repeat.clone() });
        }
    }
    OrderWord::from_blocks(blocks)
}
