//! Residue-class statistics of suffix values.
//!
//! For a window `(m, n)` and vertices `t1` (level `m`), `t2` (level `n`), the
//! suffix set collects `q_{m,n} - j` over the positions `j` of `W_{m,n}(t2)`
//! carrying letter `t1`. A [`ResidueTensor`] stores, for a modulus `B`, how
//! many suffixes fall into each class mod `B`.

use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{add_progression, mod_u64, ratio_to_f64};
use crate::diagram::DiagramSpec;
use crate::eigen::EigenvalueCandidate;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::word::Vertex;

/// Largest window size `q_{m,n}` the brute-force enumeration accepts.
pub const ORACLE_SCALE: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueTensor {
    pub m: usize,
    pub n: usize,
    pub modulus: u64,
    pub q_mn: BigUint,
    rank: usize,
    counts: Vec<BigUint>,
}

impl ResidueTensor {
    fn zeros(m: usize, n: usize, modulus: u64, q_mn: BigUint, rank: usize) -> Self {
        let counts = vec![BigUint::zero(); rank * rank * modulus as usize];
        ResidueTensor { m, n, modulus, q_mn, rank, counts }
    }

    fn offset(&self, t1: usize, t2: usize) -> usize {
        (t1 * self.rank + t2) * self.modulus as usize
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Class histogram for the pair, indexed by residue.
    pub fn cell(&self, t1: Vertex, t2: Vertex) -> &[BigUint] {
        self.cell_at(t1.index(), t2.index())
    }

    pub fn cell_at(&self, t1: usize, t2: usize) -> &[BigUint] {
        let o = self.offset(t1, t2);
        &self.counts[o..o + self.modulus as usize]
    }

    fn cell_mut(&mut self, t1: usize, t2: usize) -> &mut [BigUint] {
        let o = self.offset(t1, t2);
        let b = self.modulus as usize;
        &mut self.counts[o..o + b]
    }

    /// Sum over residue classes, which is `P_{m,n}`.
    pub fn marginal(&self) -> Matrix {
        Matrix::from_columns(
            (0..self.rank)
                .map(|t2| (0..self.rank).map(|t1| self.cell_at(t1, t2).iter().sum()).collect())
                .collect(),
        )
    }

    /// Classes collapsed onto a divisor of the modulus.
    pub fn reduce(&self, modulus: u64) -> Result<ResidueTensor> {
        if modulus == 0 || !self.modulus.is_multiple_of(modulus) {
            return Err(Error::ModulusMismatch { tensor: self.modulus, candidate: modulus });
        }
        let mut out = ResidueTensor::zeros(self.m, self.n, modulus, self.q_mn.clone(), self.rank);
        for t1 in 0..self.rank {
            for t2 in 0..self.rank {
                let src = self.cell_at(t1, t2).to_vec();
                let dst = out.cell_mut(t1, t2);
                for (k, c) in src.into_iter().enumerate() {
                    dst[k % modulus as usize] += c;
                }
            }
        }
        Ok(out)
    }

    /// Rows `(m, n, t1, t2, k, count)`, with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,n,t1,t2,k,count\n");
        for t1 in 0..self.rank {
            for t2 in 0..self.rank {
                for (k, c) in self.cell_at(t1, t2).iter().enumerate() {
                    let _ = writeln!(s, "{},{},{},{},{},{}", self.m, self.n, t1 + 1, t2 + 1, k, c);
                }
            }
        }
        s
    }
}

/// Explicit suffix set from the expanded composed word.
pub fn suffix_set_bruteforce(spec: &DiagramSpec, m: usize, n: usize, t1: Vertex, t2: Vertex) -> Result<Vec<BigUint>> {
    spec.require_toeplitz()?;
    let q = spec.q_window(m, n)?;
    if q > BigUint::from(ORACLE_SCALE) {
        return Err(Error::ScaleExceeded { required: q.to_string(), limit: ORACLE_SCALE });
    }
    let word = spec.compose_words(m, n, t2, ORACLE_SCALE)?.expand(ORACLE_SCALE)?;
    let q = word.len();
    let mut out: Vec<BigUint> = word
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == t1)
        .map(|(j, _)| BigUint::from(q - (j + 1)))
        .collect();
    out.sort();
    Ok(out)
}

/// Residue histogram of explicit suffix sets, used as an oracle.
pub fn bruteforce_residue_counts(spec: &DiagramSpec, m: usize, n: usize, modulus: u64) -> Result<ResidueTensor> {
    let d = spec.rank();
    let mut out = ResidueTensor::zeros(m, n, modulus, spec.q_window(m, n)?, d);
    for t1 in spec.vertices() {
        for t2 in spec.vertices() {
            for s in suffix_set_bruteforce(spec, m, n, t1, t2)? {
                out.cell_mut(t1.index(), t2.index())[mod_u64(&s, modulus) as usize] += 1u32;
            }
        }
    }
    Ok(out)
}

/// Counts for the single-level window `(n-1, n)` read off the run-length
/// blocks: a letter at offset `a` of a block starting at 0-based position
/// `j0` with length `l` has suffixes `q - 1 - j0 - a - i*l` over repetitions `i`.
pub fn level_residue_counts(spec: &DiagramSpec, n: usize, modulus: u64) -> Result<ResidueTensor> {
    spec.require_toeplitz()?;
    if modulus == 0 {
        return Err(Error::Invalid("modulus must be positive".into()));
    }
    let q = spec.q(n)?;
    let q_mod = mod_u64(&q, modulus);
    let d = spec.rank();
    let mut out = ResidueTensor::zeros(n - 1, n, modulus, q.clone(), d);
    for t2 in spec.vertices() {
        let word = spec.word(n, t2)?;
        for (j0, block) in word.runs() {
            let l = block.letters.len() as u64;
            let step = (modulus - l % modulus) % modulus;
            let base = (q_mod + modulus - 1 + modulus - mod_u64(&j0, modulus)) % modulus;
            for (a, &t1) in block.letters.iter().enumerate() {
                let start = (base + modulus - (a as u64 % modulus)) % modulus;
                add_progression(out.cell_mut(t1.index(), t2.index()), start, step, &block.repeat, modulus);
            }
        }
    }
    Ok(out)
}

/// Composes `(m, l)` and `(l, n)` tensors into the `(m, n)` tensor using
/// `s_{m,n} = s_{m,l} + q_{m,l} s_{l,n}`.
pub fn compose_tensors(lower: &ResidueTensor, upper: &ResidueTensor) -> Result<ResidueTensor> {
    if lower.n != upper.m {
        return Err(Error::InvalidWindow { m: lower.m, n: upper.n, depth: upper.n });
    }
    if lower.modulus != upper.modulus {
        return Err(Error::ModulusMismatch { tensor: upper.modulus, candidate: lower.modulus });
    }
    let b = lower.modulus as usize;
    let d = lower.rank;
    let mult = mod_u64(&lower.q_mn, lower.modulus) as usize;
    let mut out = ResidueTensor::zeros(lower.m, upper.n, lower.modulus, &lower.q_mn * &upper.q_mn, d);
    let mut acc = vec![BigUint::zero(); b];
    for t1 in 0..d {
        for t2 in 0..d {
            acc.iter_mut().for_each(|x| x.set_zero());
            for u in 0..d {
                let lo = lower.cell_at(t1, u);
                let up = upper.cell_at(u, t2);
                for (k2, c2) in up.iter().enumerate() {
                    if c2.is_zero() {
                        continue;
                    }
                    let shift = (mult * k2) % b;
                    for (k1, c1) in lo.iter().enumerate() {
                        if !c1.is_zero() {
                            acc[(k1 + shift) % b] += c1 * c2;
                        }
                    }
                }
            }
            out.cell_mut(t1, t2).clone_from_slice(&acc);
        }
    }
    Ok(out)
}

/// Counts for the window `(m, n)` by composing single-level tensors upward.
pub fn range_residue_counts(spec: &DiagramSpec, m: usize, n: usize, modulus: u64) -> Result<ResidueTensor> {
    spec.require_toeplitz()?;
    if m >= n || m < 1 || n > spec.depth() {
        return Err(Error::InvalidWindow { m, n, depth: spec.depth() });
    }
    let mut acc = level_residue_counts(spec, m + 1, modulus)?;
    for l in m + 2..=n {
        acc = compose_tensors(&acc, &level_residue_counts(spec, l, modulus)?)?;
    }
    Ok(acc)
}

/// Memoized tensors for every window of one diagram and modulus.
/// Entries are computed on first use and never change afterwards.
pub struct ResidueLadder<'a> {
    spec: &'a DiagramSpec,
    modulus: u64,
    cells: Vec<OnceLock<ResidueTensor>>,
}

impl<'a> ResidueLadder<'a> {
    pub fn new(spec: &'a DiagramSpec, modulus: u64) -> Result<Self> {
        spec.require_toeplitz()?;
        if modulus == 0 {
            return Err(Error::Invalid("modulus must be positive".into()));
        }
        let depth = spec.depth();
        let cells = (0..(depth + 1) * (depth + 1)).map(|_| OnceLock::new()).collect();
        Ok(ResidueLadder { spec, modulus, cells })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn spec(&self) -> &DiagramSpec {
        self.spec
    }

    pub fn window(&self, m: usize, n: usize) -> Result<&ResidueTensor> {
        let depth = self.spec.depth();
        if m >= n || m < 1 || n > depth {
            return Err(Error::InvalidWindow { m, n, depth });
        }
        let cell = &self.cells[m * (depth + 1) + n];
        if let Some(t) = cell.get() {
            return Ok(t);
        }
        let t = if m + 1 == n {
            level_residue_counts(self.spec, n, self.modulus)?
        } else {
            compose_tensors(self.window(m, n - 1)?, self.window(n - 1, n)?)?
        };
        Ok(cell.get_or_init(|| t))
    }
}

/// Normalized exponential sums `Σ_{m,n}(t1,t2) / q_{m,n}` for one candidate.
#[derive(Debug, Clone, Serialize)]
pub struct SigmaTable {
    pub m: usize,
    pub n: usize,
    rank: usize,
    /// Row-major `(t1, t2)` sums divided by `q_{m,n}`.
    values: Vec<(f64, f64)>,
    /// `P_{m,n}[t1][t2] / q_{m,n}`.
    shares: Vec<f64>,
}

impl SigmaTable {
    /// Sums `Σ_k counts_k ω^k` with `ω = exp(-2πi step / B)`.
    pub fn compute(tensor: &ResidueTensor, step: u64) -> SigmaTable {
        let b = tensor.modulus;
        let d = tensor.rank;
        let roots: Vec<Complex64> = (0..b)
            .map(|k| {
                let e = ((step % b) * k % b) as f64 / b as f64;
                Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * e)
            })
            .collect();
        let mut values = Vec::with_capacity(d * d);
        let mut shares = Vec::with_capacity(d * d);
        for t1 in 0..d {
            for t2 in 0..d {
                let cell = tensor.cell_at(t1, t2);
                let mut z = Complex64::new(0.0, 0.0);
                let mut total = BigUint::zero();
                for (k, c) in cell.iter().enumerate() {
                    if !c.is_zero() {
                        z += roots[k] * ratio_to_f64(c, &tensor.q_mn);
                        total += c;
                    }
                }
                values.push((z.re, z.im));
                shares.push(ratio_to_f64(&total, &tensor.q_mn));
            }
        }
        SigmaTable { m: tensor.m, n: tensor.n, rank: d, values, shares }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn value(&self, t1: Vertex, t2: Vertex) -> Complex64 {
        let (re, im) = self.values[t1.index() * self.rank + t2.index()];
        Complex64::new(re, im)
    }

    /// `|Σ(t1,t2)| / q_{m,n}`.
    pub fn magnitude(&self, t1: Vertex, t2: Vertex) -> f64 {
        self.value(t1, t2).norm()
    }

    /// `P_{m,n}[t1][t2] / q_{m,n}`.
    pub fn share(&self, t1: Vertex, t2: Vertex) -> f64 {
        self.shares[t1.index() * self.rank + t2.index()]
    }
}

/// Exponential sums for `λ = exp(2πi a/b)`, whose phase step on a window
/// starting at level `m` is `a p_m mod b`.
pub fn sigma_sums(tensor: &ResidueTensor, candidate: &EigenvalueCandidate) -> Result<SigmaTable> {
    if tensor.modulus != candidate.b {
        return Err(Error::ModulusMismatch { tensor: tensor.modulus, candidate: candidate.b });
    }
    let step = candidate.phase_step(tensor.m).ok_or(Error::LevelOutOfRange {
        level: tensor.m,
        depth: candidate.max_level,
    })?;
    Ok(SigmaTable::compute(tensor, step))
}

/// Exact count of suffixes `0..q` in class `k` mod `B`, for cross-checks.
pub fn class_size(q: &BigUint, modulus: u64, k: u64) -> BigUint {
    let base = q / modulus;
    if k < mod_u64(q, modulus) {
        base + 1u32
    } else {
        base
    }
}

/// Residue of `x` mod `B` as `usize`, used when indexing tensors.
pub fn class_of(x: &BigUint, modulus: u64) -> usize {
    mod_u64(x, modulus).to_usize().unwrap()
}
