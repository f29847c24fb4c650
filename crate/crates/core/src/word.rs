//! Run-length encoded order words over a vertex alphabet.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex label, 1-based as in the diagram file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(u32);

impl Vertex {
    /// Panics on 0; use [`Vertex::checked`] for untrusted input.
    pub fn new(label: u32) -> Self {
        assert!(label >= 1, "vertex labels start at 1");
        Vertex(label)
    }

    pub fn checked(label: u64, rank: usize) -> Result<Self> {
        if label == 0 || label > rank as u64 {
            return Err(Error::VertexOutOfRange { vertex: label, rank });
        }
        Ok(Vertex(label as u32))
    }

    pub fn from_index(index: usize) -> Self {
        Vertex(index as u32 + 1)
    }

    pub fn label(self) -> u32 {
        self.0
    }

    /// 0-based position for array indexing.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand for building vertex lists from labels.
pub fn vertices(labels: &[u32]) -> Vec<Vertex> {
    labels.iter().map(|&l| Vertex::new(l)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub letters: Vec<Vertex>,
    pub repeat: BigUint,
}

impl Block {
    pub fn new(letters: Vec<Vertex>, repeat: impl Into<BigUint>) -> Self {
        Block { letters, repeat: repeat.into() }
    }

    pub fn literal(letters: Vec<Vertex>) -> Self {
        Block { letters, repeat: BigUint::one() }
    }

    pub fn len(&self) -> BigUint {
        &self.repeat * self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty() || self.repeat.is_zero()
    }
}

/// A word stored as a list of `(letters)^repeat` blocks.
///
/// Blocks with repeat 0 are dropped and adjacent literal blocks are merged,
/// so structurally equal words have equal block lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Block>", into = "Vec<Block>")]
pub struct OrderWord {
    blocks: Vec<Block>,
    #[serde(skip)]
    len: BigUint,
}

impl TryFrom<Vec<Block>> for OrderWord {
    type Error = Error;
    fn try_from(blocks: Vec<Block>) -> Result<Self> {
        OrderWord::from_blocks(blocks)
    }
}

impl From<OrderWord> for Vec<Block> {
    fn from(w: OrderWord) -> Self {
        w.blocks
    }
}

impl OrderWord {
    pub fn from_blocks(blocks: Vec<Block>) -> Result<Self> {
        let mut out: Vec<Block> = Vec::with_capacity(blocks.len());
        for b in blocks {
            if b.repeat.is_zero() {
                continue;
            }
            if b.letters.is_empty() {
                return Err(Error::EmptyWord);
            }
            match out.last_mut() {
                Some(prev) if prev.repeat.is_one() && b.repeat.is_one() => {
                    prev.letters.extend_from_slice(&b.letters)
                }
                _ => out.push(b),
            }
        }
        let len = out.iter().map(Block::len).sum::<BigUint>();
        if len.is_zero() {
            return Err(Error::EmptyWord);
        }
        Ok(OrderWord { blocks: out, len })
    }

    pub fn from_letters(letters: Vec<Vertex>) -> Result<Self> {
        Self::from_blocks(vec![Block::literal(letters)])
    }

    pub fn from_labels(labels: &[u32]) -> Result<Self> {
        Self::from_letters(vertices(labels))
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> &BigUint {
        &self.len
    }

    /// Number of letters physically stored (ignoring repeats).
    pub fn stored_letters(&self) -> usize {
        self.blocks.iter().map(|b| b.letters.len()).sum()
    }

    pub fn first(&self) -> Vertex {
        self.blocks[0].letters[0]
    }

    pub fn last(&self) -> Vertex {
        *self.blocks.last().unwrap().letters.last().unwrap()
    }

    pub fn max_letter(&self) -> Vertex {
        self.blocks
            .iter()
            .flat_map(|b| b.letters.iter().copied())
            .max()
            .unwrap()
    }

    /// Blocks paired with the 0-based position of their first letter.
    pub fn runs(&self) -> impl Iterator<Item = (BigUint, &Block)> {
        let mut offset = BigUint::zero();
        self.blocks.iter().map(move |b| {
            let start = offset.clone();
            offset += b.len();
            (start, b)
        })
    }

    /// Occurrences of each letter, indexed by `Vertex::index`.
    pub fn letter_counts(&self, alphabet: usize) -> Vec<BigUint> {
        let mut counts = vec![BigUint::zero(); alphabet];
        for b in &self.blocks {
            for v in &b.letters {
                counts[v.index()] += &b.repeat;
            }
        }
        counts
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.blocks.iter().any(|b| b.letters.contains(&v))
    }

    /// Letter at 1-based position `pos`.
    pub fn letter_at(&self, pos: &BigUint) -> Option<Vertex> {
        if pos.is_zero() || pos > &self.len {
            return None;
        }
        let mut rest = pos - 1u32;
        for b in &self.blocks {
            let l = b.len();
            if rest < l {
                let within = (rest % b.letters.len()).to_usize().unwrap();
                return Some(b.letters[within]);
            }
            rest -= l;
        }
        None
    }

    /// 1-based positions of the first and last occurrence of `v`.
    pub fn first_position(&self, v: Vertex) -> Option<BigUint> {
        for (start, b) in self.runs() {
            if let Some(a) = b.letters.iter().position(|&x| x == v) {
                return Some(start + a + 1u32);
            }
        }
        None
    }

    pub fn expand(&self, limit: u64) -> Result<Vec<Vertex>> {
        if self.len > BigUint::from(limit) {
            return Err(Error::ExpansionLimit { letters: self.len.to_string(), limit });
        }
        let mut out = Vec::with_capacity(self.len.to_usize().unwrap());
        for b in &self.blocks {
            let r = b.repeat.to_u64().unwrap();
            for _ in 0..r {
                out.extend_from_slice(&b.letters);
            }
        }
        Ok(out)
    }

    /// Keeps only letters for which `keep` holds, preserving order.
    /// Returns `None` when nothing survives.
    pub fn filter(&self, keep: impl Fn(Vertex) -> bool) -> Option<OrderWord> {
        let blocks: Vec<Block> = self
            .blocks
            .iter()
            .filter_map(|b| {
                let letters: Vec<Vertex> = b.letters.iter().copied().filter(|&v| keep(v)).collect();
                (!letters.is_empty()).then(|| Block { letters, repeat: b.repeat.clone() })
            })
            .collect();
        OrderWord::from_blocks(blocks).ok()
    }

    /// Applies `f` to every letter.
    pub fn map(&self, f: impl Fn(Vertex) -> Vertex) -> OrderWord {
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block { letters: b.letters.iter().map(|&v| f(v)).collect(), repeat: b.repeat.clone() })
            .collect();
        OrderWord::from_blocks(blocks).expect("mapping keeps the word nonempty")
    }

    pub fn concat(words: impl IntoIterator<Item = OrderWord>) -> Result<OrderWord> {
        OrderWord::from_blocks(words.into_iter().flat_map(|w| w.blocks).collect())
    }
}

impl fmt::Display for OrderWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for b in &self.blocks {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let inner = b.letters.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
            if b.repeat.is_one() {
                f.write_str(&inner)?;
            } else {
                write!(f, "({inner})^{}", b.repeat)?;
            }
        }
        Ok(())
    }
}
