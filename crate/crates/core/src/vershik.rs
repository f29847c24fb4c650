//! Finite paths, the Vershik successor map and phase stabilization along sampled paths.
//!
//! A path of depth `N` is stored by its edge ranks `j_2, ..., j_N`
//! (1-based positions in the order words) and the vertex chain they induce.
//! Its suffix counts are `s_n = q_{n+1} - j_{n+1}` and its entrance times
//! `r_n = Σ_{i<n} p_i s_i`.

use std::collections::BTreeMap;

use num_bigint::{BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::mod_u64;
use crate::diagram::DiagramSpec;
use crate::eigen::{EigenvalueCandidate, KMap};
use crate::error::{Error, Result};
use crate::measures::MeasureVector;
use crate::residue::ResidueLadder;
use crate::word::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathPoint {
    /// `ranks[n - 2] = j_n` for `n = 2..=N`.
    ranks: Vec<BigUint>,
    /// `chain[n - 1] = τ_n` for `n = 1..=N`.
    chain: Vec<Vertex>,
}

impl PathPoint {
    /// Path ending at `top` with the given edge ranks, listed from level 2 up.
    pub fn new(spec: &DiagramSpec, top: Vertex, ranks: Vec<BigUint>) -> Result<Self> {
        let depth = ranks.len() + 1;
        if depth > spec.depth() {
            return Err(Error::LevelOutOfRange { level: depth, depth: spec.depth() });
        }
        if top.index() >= spec.rank() {
            return Err(Error::VertexOutOfRange { vertex: top.label() as u64, rank: spec.rank() });
        }
        let mut chain = vec![top; depth];
        for n in (2..=depth).rev() {
            let word = spec.word(n, chain[n - 1])?;
            chain[n - 2] = word
                .letter_at(&ranks[n - 2])
                .ok_or_else(|| Error::Invalid(format!("rank {} outside the word at level {n}", ranks[n - 2])))?;
        }
        Ok(PathPoint { ranks, chain })
    }

    pub fn depth(&self) -> usize {
        self.chain.len()
    }

    pub fn rank_at(&self, n: usize) -> &BigUint {
        &self.ranks[n - 2]
    }

    pub fn ranks(&self) -> &[BigUint] {
        &self.ranks
    }

    /// `τ_n`.
    pub fn vertex(&self, n: usize) -> Vertex {
        self.chain[n - 1]
    }

    pub fn top(&self) -> Vertex {
        *self.chain.last().unwrap()
    }

    /// `s_n = q_{n+1} - j_{n+1}` for `1 ≤ n < N`.
    pub fn suffix(&self, spec: &DiagramSpec, n: usize) -> Result<BigUint> {
        let q = spec.level(n + 1)?.word(self.vertex(n + 1)).len().clone();
        Ok(q - &self.ranks[n - 1])
    }

    /// `s_{l,n} = Σ_{l ≤ i < n} q_{l,i} s_i`, the number of paths in `E_{l,n}`
    /// into `τ_n` above this one.
    pub fn window_suffix(&self, spec: &DiagramSpec, l: usize, n: usize) -> Result<BigUint> {
        let mut acc = BigUint::zero();
        let mut scale = BigUint::one();
        for i in l..n {
            acc += &scale * self.suffix(spec, i)?;
            scale *= spec.q(i + 1)?;
        }
        Ok(acc)
    }

    /// `r_n = Σ_{i=1}^{n-1} p_i s_i`.
    pub fn entrance_time(&self, spec: &DiagramSpec, n: usize) -> Result<BigUint> {
        let mut acc = BigUint::zero();
        for i in 1..n {
            acc += spec.p(i)? * self.suffix(spec, i)?;
        }
        Ok(acc)
    }

    pub fn is_max(&self, spec: &DiagramSpec) -> Result<bool> {
        for n in 2..=self.depth() {
            if &self.ranks[n - 2] != spec.word(n, self.vertex(n))?.len() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn extreme_path(spec: &DiagramSpec, depth: usize, top: Vertex, max: bool) -> Result<PathPoint> {
    if depth < 1 || depth > spec.depth() {
        return Err(Error::LevelOutOfRange { level: depth, depth: spec.depth() });
    }
    let mut chain = vec![top; depth];
    let mut ranks = vec![BigUint::one(); depth - 1];
    for n in (2..=depth).rev() {
        let w = spec.word(n, chain[n - 1])?;
        if max {
            ranks[n - 2] = w.len().clone();
            chain[n - 2] = w.last();
        } else {
            chain[n - 2] = w.first();
        }
    }
    Ok(PathPoint { ranks, chain })
}

/// Path into `top` taking the first edge at every level.
pub fn min_path(spec: &DiagramSpec, depth: usize, top: Vertex) -> Result<PathPoint> {
    extreme_path(spec, depth, top, false)
}

/// Path into `top` taking the last edge at every level.
pub fn max_path(spec: &DiagramSpec, depth: usize, top: Vertex) -> Result<PathPoint> {
    extreme_path(spec, depth, top, true)
}

/// Top vertex through which the minimal infinite path passes: the common
/// first letter of the words one level up, or vertex 1 at the last level.
pub fn canonical_min_top(spec: &DiagramSpec, depth: usize) -> Vertex {
    extreme_top(spec, depth, |w| w.first())
}

pub fn canonical_max_top(spec: &DiagramSpec, depth: usize) -> Vertex {
    extreme_top(spec, depth, |w| w.last())
}

fn extreme_top(spec: &DiagramSpec, depth: usize, pick: impl Fn(&crate::word::OrderWord) -> Vertex) -> Vertex {
    if let Ok(lvl) = spec.level(depth + 1) {
        let first = pick(&lvl.words[0]);
        if lvl.words.iter().all(|w| pick(w) == first) {
            return first;
        }
    }
    Vertex::new(1)
}

/// Vershik successor: the lowest non-maximal edge moves to its successor and
/// everything below restarts at the minimal path. At the maximal path this
/// is an error unless `wrap`, which returns the minimal path.
pub fn successor(spec: &DiagramSpec, x: &PathPoint, wrap: bool) -> Result<PathPoint> {
    let depth = x.depth();
    for n in 2..=depth {
        let w = spec.word(n, x.vertex(n))?;
        if &x.ranks[n - 2] < w.len() {
            let mut ranks = x.ranks.clone();
            let mut chain = x.chain.clone();
            ranks[n - 2] += 1u32;
            chain[n - 2] = w.letter_at(&ranks[n - 2]).unwrap();
            for l in (2..n).rev() {
                ranks[l - 2] = BigUint::one();
                chain[l - 2] = spec.word(l, chain[l - 1])?.first();
            }
            return Ok(PathPoint { ranks, chain });
        }
    }
    if wrap {
        min_path(spec, depth, canonical_min_top(spec, depth))
    } else {
        Err(Error::MaximalPath)
    }
}

/// Seeded generator for sample `index`: ChaCha8 keyed by `seed`, stream `index`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws the top vertex from `masses` and then a uniform path among the
/// `p_N` paths into it, decoded from a uniform rank through the mixed radix
/// `(q_2, ..., q_N)`.
pub fn sample_path(spec: &DiagramSpec, depth: usize, masses: &[f64], rng: &mut ChaCha8Rng) -> Result<PathPoint> {
    spec.require_toeplitz()?;
    if masses.len() != spec.rank() {
        return Err(Error::Invalid("one mass per vertex expected".into()));
    }
    let dist = WeightedIndex::new(masses).map_err(|e| Error::Invalid(format!("tower masses: {e}")))?;
    let top = Vertex::from_index(dist.sample(rng));
    let total = spec.p(depth)?;
    let mut rest = rng.gen_biguint_below(&total);
    let mut ranks = vec![BigUint::zero(); depth - 1];
    for n in 2..=depth {
        let q = spec.q(n)?;
        ranks[n - 2] = &rest % &q + 1u32;
        rest /= q;
    }
    PathPoint::new(spec, top, ranks)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub samples: usize,
    pub depth: usize,
    pub stable_levels: usize,
    pub stabilized: usize,
    pub fraction: f64,
    /// Paths that reached a vertex pair missing from the k-map.
    pub missing: usize,
    /// Count of samples by the last level at which the phase changed (1 when it never did).
    pub last_change: BTreeMap<usize, usize>,
}

/// Phase exponents `a (r_n + ρ_n(τ_n)) mod b` for `n = 2..=N`, with
/// `ρ_n(t) = -p k(t0, t)`; `None` when a needed k-map value is missing.
pub fn phase_exponents(
    spec: &DiagramSpec,
    candidate: &EigenvalueCandidate,
    kmap: &KMap,
    t0: Vertex,
    x: &PathPoint,
) -> Result<Option<Vec<u64>>> {
    let b = candidate.b;
    let p = candidate
        .p
        .ok_or_else(|| Error::Precondition("p_n mod b is not constant; telescope first".into()))?;
    let a = candidate.a_mod();
    let mut r = 0u64;
    let mut out = Vec::with_capacity(x.depth().saturating_sub(1));
    for n in 2..=x.depth() {
        let pi = candidate
            .p_mod(n - 1)
            .ok_or(Error::LevelOutOfRange { level: n - 1, depth: candidate.max_level })?;
        r = (r + pi * mod_u64(&x.suffix(spec, n - 1)?, b)) % b;
        let Some(k) = kmap.get(t0, x.vertex(n)) else {
            return Ok(None);
        };
        let rho = (b - (p * k) % b) % b;
        out.push(a * ((r + rho) % b) % b);
    }
    Ok(Some(out))
}

/// Samples `samples` paths at depth `N` and counts those whose phase is
/// constant over the last `stable_levels` levels.
#[allow(clippy::too_many_arguments)]
pub fn convergence_test(
    spec: &DiagramSpec,
    candidate: &EigenvalueCandidate,
    kmap: &KMap,
    t0: Vertex,
    samples: usize,
    depth: usize,
    seed: u64,
    masses: &[f64],
    stable_levels: usize,
) -> Result<ConvergenceReport> {
    if stable_levels < 1 || stable_levels > depth - 1 {
        return Err(Error::Precondition(format!("cannot check {stable_levels} levels at depth {depth}")));
    }
    let outcomes: Vec<Option<(bool, usize)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let x = sample_path(spec, depth, masses, &mut rng)?;
            let Some(e) = phase_exponents(spec, candidate, kmap, t0, &x)? else {
                return Ok(None);
            };
            let last_change = (1..e.len()).rev().find(|&i| e[i] != e[i - 1]).map(|i| i + 2).unwrap_or(1);
            let tail = &e[e.len() - stable_levels..];
            Ok(Some((tail.iter().all(|&v| v == tail[0]), last_change)))
        })
        .collect::<Result<_>>()?;
    let mut last = BTreeMap::new();
    let mut stabilized = 0;
    let mut missing = 0;
    for o in outcomes {
        match o {
            Some((s, l)) => {
                stabilized += s as usize;
                *last.entry(l).or_insert(0) += 1;
            }
            None => missing += 1,
        }
    }
    Ok(ConvergenceReport {
        samples,
        depth,
        stable_levels,
        stabilized,
        fraction: if samples == 0 { 0.0 } else { stabilized as f64 / samples as f64 },
        missing,
        last_change: last,
    })
}

/// Exact mass of the paths whose level-`(m,n)` suffix misses the class
/// `k(τ_m, τ_n)`, plus the mass of towers outside `I` at level `n`.
/// Class counts are taken mod `b/(b,p_m)`.
pub fn bad_set_measure(
    spec: &DiagramSpec,
    candidate: &EigenvalueCandidate,
    kmap: &KMap,
    set: &[Vertex],
    m: usize,
    n: usize,
    measure: &MeasureVector,
) -> Result<BigRational> {
    if measure.level != n {
        return Err(Error::Invalid(format!("measure is at level {}, window ends at {n}", measure.level)));
    }
    let ladder = ResidueLadder::new(spec, candidate.b)?;
    let t = ladder.window(m, n)?;
    let bb = candidate
        .bb_at(m)
        .ok_or(Error::LevelOutOfRange { level: m, depth: candidate.max_level })?;
    let pm = BigRational::from_integer(spec.p(m)?.into());
    let mut total = BigRational::zero();
    for &t2 in set {
        for t1 in spec.vertices() {
            let cell = t.cell(t1, t2);
            let all: BigUint = cell.iter().sum();
            if all.is_zero() {
                continue;
            }
            let k = kmap.get(t1, t2).ok_or(Error::MissingPair { t1: t1.label(), t2: t2.label() })?;
            let hit: BigUint = cell.iter().enumerate().filter(|(i, _)| *i as u64 % bb == k % bb).map(|(_, c)| c).sum();
            let miss = BigRational::from_integer((all - hit).into());
            total += miss * &pm * &measure.base[t2.index()];
        }
    }
    for t in spec.vertices().filter(|t| !set.contains(t)) {
        total += &measure.tower[t.index()];
    }
    Ok(total)
}

/// Number of paths below `p_N` for exhaustive iteration; `None` if too many.
pub fn path_count(spec: &DiagramSpec, depth: usize, limit: u64) -> Option<u64> {
    spec.p(depth).ok()?.to_u64().filter(|&x| x <= limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::OrderWord;

    fn toy() -> DiagramSpec {
        let w = |l: &[u32]| OrderWord::from_labels(l).unwrap();
        let words = vec![w(&[1, 2, 2, 1]), w(&[1, 1, 2, 1])];
        DiagramSpec::toeplitz(2, &[BigUint::from(4u32), BigUint::from(4u32)], vec![words.clone(), words]).unwrap()
    }

    #[test]
    fn extremes_and_successor_chain() {
        let s = toy();
        let top = Vertex::new(1);
        let min = min_path(&s, 3, top).unwrap();
        let max = max_path(&s, 3, top).unwrap();
        assert_eq!(min.entrance_time(&s, 3).unwrap(), BigUint::from(15u32));
        assert_eq!(max.entrance_time(&s, 3).unwrap(), BigUint::zero());
        let mut x = min;
        for step in 1..16u32 {
            x = successor(&s, &x, false).unwrap();
            assert_eq!(x.entrance_time(&s, 3).unwrap(), BigUint::from(15 - step));
        }
        assert_eq!(x, max);
        assert_eq!(successor(&s, &x, false).unwrap_err(), Error::MaximalPath);
        assert_eq!(successor(&s, &x, true).unwrap(), min_path(&s, 3, Vertex::new(1)).unwrap());
    }

    #[test]
    fn sampling_is_reproducible() {
        let s = toy();
        let a = sample_path(&s, 3, &[0.0, 1.0], &mut sample_rng(7, 3)).unwrap();
        let b = sample_path(&s, 3, &[0.0, 1.0], &mut sample_rng(7, 3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.top(), Vertex::new(2));
    }
}
