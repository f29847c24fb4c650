//! Rational eigenvalue diagnostics for Toeplitz-type diagrams.
//!
//! A candidate `λ = exp(2πi a/b)` is first classified from the residues
//! `p_n mod b`. Candidates with `1 < b/(b,p_n) ≤ d` are then examined through
//! the exponential sums of the suffix residue counts: deficiency tables,
//! dominant-class k-maps, cocycle identities and the per-measure survey.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd_u64, mod_u64};
use crate::diagram::DiagramSpec;
use crate::error::{Error, Result};
use crate::measures;
use crate::residue::{sigma_sums, ResidueLadder, ResidueTensor};
use crate::word::Vertex;

/// Number of trailing levels over which `(b, p_n)` must be constant.
pub const STABLE_LEVELS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateStatus {
    Continuous,
    Candidate,
    Rejected,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenvalueCandidate {
    pub a: i64,
    pub b: u64,
    pub rank: usize,
    pub max_level: usize,
    /// `residues[n-1] = p_n mod b` for `n = 1..=max_level`.
    pub residues: Vec<u64>,
    /// `gcds[n-1] = (b, p_n)`.
    pub gcds: Vec<u64>,
    /// First level from which `(b, p_n)` equals its value at `max_level`.
    pub stable_from: usize,
    /// `b / (b, p_{max_level})`.
    pub bb: u64,
    /// Common value of `p_n mod b` over `2 ≤ n ≤ max_level`, when there is one.
    pub p: Option<u64>,
    pub status: CandidateStatus,
}

impl EigenvalueCandidate {
    pub fn a_mod(&self) -> u64 {
        self.a.rem_euclid(self.b as i64) as u64
    }

    pub fn p_mod(&self, n: usize) -> Option<u64> {
        (n >= 1).then(|| self.residues.get(n - 1).copied()).flatten()
    }

    /// Phase step `a p_m mod b` of the exponential sums on windows starting at `m`.
    pub fn phase_step(&self, m: usize) -> Option<u64> {
        self.p_mod(m).map(|r| (self.a_mod() as u128 * r as u128 % self.b as u128) as u64)
    }

    /// `b / (b, p_m)`: the number of distinct phases on windows starting at `m`.
    pub fn bb_at(&self, m: usize) -> Option<u64> {
        (m >= 1).then(|| self.gcds.get(m - 1).map(|g| self.b / g)).flatten()
    }
}

pub fn classify_candidate(spec: &DiagramSpec, a: i64, b: u64, max_level: usize) -> Result<EigenvalueCandidate> {
    if b == 0 {
        return Err(Error::Invalid("denominator must be positive".into()));
    }
    if gcd_u64(a.unsigned_abs(), b) != 1 {
        return Err(Error::NotCoprime { a, b });
    }
    spec.require_toeplitz()?;
    if max_level < 1 || max_level > spec.depth() {
        return Err(Error::LevelOutOfRange { level: max_level, depth: spec.depth() });
    }
    let mut residues = Vec::with_capacity(max_level);
    for n in 1..=max_level {
        residues.push(mod_u64(&spec.p(n)?, b));
    }
    let gcds: Vec<u64> = residues.iter().map(|&r| gcd_u64(r, b)).collect();
    let last = *gcds.last().unwrap();
    let stable_from = gcds.iter().position(|&g| g == last).unwrap() + 1;
    let bb = b / last;
    let window_start = max_level.saturating_sub(STABLE_LEVELS - 1).max(1);
    let settled = gcds[window_start - 1..].iter().all(|&g| g == last);
    let status = if bb == 1 {
        CandidateStatus::Continuous
    } else if !settled {
        CandidateStatus::Undecided
    } else if bb <= spec.rank() as u64 {
        CandidateStatus::Candidate
    } else {
        CandidateStatus::Rejected
    };
    let p = (max_level >= 2 && residues[1..].iter().all(|&r| r == residues[1])).then(|| residues[1]);
    Ok(EigenvalueCandidate {
        a,
        b,
        rank: spec.rank(),
        max_level,
        residues,
        gcds,
        stable_from,
        bb,
        p,
        status,
    })
}

/// Cut levels on which every `p_n` has one residue mod `b`.
///
/// Among levels `2..=bound`, the residue seen most often (earliest on ties) is
/// kept; the cut is level 1 followed by the levels carrying that residue.
pub fn stabilizing_telescope(spec: &DiagramSpec, candidate: &EigenvalueCandidate, bound: usize) -> Result<Vec<usize>> {
    if candidate.status == CandidateStatus::Rejected {
        return Err(Error::Precondition(format!("b = {} is rejected", candidate.b)));
    }
    let bound = bound.min(spec.depth());
    let residues: Vec<u64> = (2..=bound).map(|n| Ok(mod_u64(&spec.p(n)?, candidate.b))).collect::<Result<_>>()?;
    if residues.iter().all(|&r| r == residues[0]) {
        return Ok((1..=bound).collect());
    }
    let mut tally: BTreeMap<u64, (usize, usize)> = BTreeMap::new();
    for (i, &r) in residues.iter().enumerate() {
        let e = tally.entry(r).or_insert((0, i));
        e.0 += 1;
    }
    let (&best, &(count, _)) = tally
        .iter()
        .max_by(|x, y| x.1 .0.cmp(&y.1 .0).then(y.1 .1.cmp(&x.1 .1)))
        .unwrap();
    if count < 2 {
        return Err(Error::Stabilization { bound, residues });
    }
    let mut cut = vec![1];
    cut.extend(residues.iter().enumerate().filter(|(_, &r)| r == best).map(|(i, _)| i + 2));
    Ok(cut)
}

/// Windows `(m, n)` with `2 ≤ m`, `n - m ≥ 2`, `n ≤ depth`, in lexicographic order.
pub fn default_ladder(depth: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in 2..=depth {
        for n in m + 2..=depth {
            out.push((m, n));
        }
    }
    out
}

/// Which window pairs the non-increase requirement compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderOrder {
    /// Consecutive windows in the order given.
    Sequential,
    /// Every pair `(m,n)`, `(m',n')` with `m' > m` and `n' ≥ n`. At a fixed
    /// start level the deficiency accumulates the defects of every added
    /// level, so it only shrinks when `m` grows.
    StartLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcceptanceThresholds {
    /// Largest deficiency accepted on the trailing windows.
    pub tau: f64,
    /// How many trailing windows of the ladder must stay below `tau`.
    pub last_windows: usize,
    /// Allowed floating-point increase between compared windows.
    pub monotone_slack: f64,
    pub order: LadderOrder,
}

impl Default for AcceptanceThresholds {
    fn default() -> Self {
        AcceptanceThresholds { tau: 0.05, last_windows: 3, monotone_slack: 1e-12, order: LadderOrder::StartLevel }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowRecord {
    pub m: usize,
    pub n: usize,
    pub t2: Vertex,
    /// `1 - Σ_{t1 ∈ S} |Σ_{m,n}(t1,t2)| / q_{m,n}`.
    pub deficiency: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapRecord {
    pub m: usize,
    pub n: usize,
    pub t1: Vertex,
    pub t2: Vertex,
    /// `P_{m,n}[t1][t2] / q_{m,n}`.
    pub share: f64,
    /// `(P - |Σ|) / q_{m,n}`.
    pub magnitude_gap: f64,
    /// `(P - N^{(k*)}) / q_{m,n}` with `k*` the dominant class mod `b/(b,p_m)`.
    pub dominant_gap: f64,
    pub dominant_class: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeficiencyReport {
    pub candidate: EigenvalueCandidate,
    /// `None` when the sums run over all vertices.
    pub sources: Option<Vec<Vertex>>,
    pub targets: Vec<Vertex>,
    pub windows: Vec<WindowRecord>,
    pub gaps: Vec<GapRecord>,
}

impl DeficiencyReport {
    pub fn deficiency(&self, m: usize, n: usize, t2: Vertex) -> Option<f64> {
        self.windows.iter().find(|r| r.m == m && r.n == n && r.t2 == t2).map(|r| r.deficiency)
    }

    /// Deficiencies of one target along the ladder, in window order.
    pub fn trajectory(&self, t2: Vertex) -> Vec<f64> {
        self.windows.iter().filter(|r| r.t2 == t2).map(|r| r.deficiency).collect()
    }
}

fn require_examinable(candidate: &EigenvalueCandidate) -> Result<()> {
    match candidate.status {
        CandidateStatus::Candidate | CandidateStatus::Continuous => Ok(()),
        s => Err(Error::Precondition(format!("b = {} has status {:?}", candidate.b, s))),
    }
}

/// Dominant class of a residue histogram folded mod `bb`, ties to the smallest class.
fn dominant(cell: &[BigUint], bb: u64) -> (u64, BigUint) {
    let mut folded = vec![BigUint::zero(); bb as usize];
    for (k, c) in cell.iter().enumerate() {
        folded[k % bb as usize] += c;
    }
    let mut best = 0;
    for k in 1..folded.len() {
        if folded[k] > folded[best] {
            best = k;
        }
    }
    (best as u64, folded.swap_remove(best))
}

fn gap_records(spec: &DiagramSpec, cand: &EigenvalueCandidate, t: &ResidueTensor, targets: &[Vertex]) -> Result<Vec<GapRecord>> {
    let sig = sigma_sums(t, cand)?;
    let bb = cand.bb_at(t.m).unwrap();
    let q = &t.q_mn;
    let mut out = Vec::new();
    for &t2 in targets {
        for t1 in spec.vertices() {
            let cell = t.cell(t1, t2);
            let total: BigUint = cell.iter().sum();
            let (k, dom) = dominant(cell, bb);
            out.push(GapRecord {
                m: t.m,
                n: t.n,
                t1,
                t2,
                share: sig.share(t1, t2),
                magnitude_gap: sig.share(t1, t2) - sig.magnitude(t1, t2),
                dominant_gap: crate::arith::ratio_to_f64(&(&total - &dom), q),
                dominant_class: (!total.is_zero()).then_some(k),
            });
        }
    }
    Ok(out)
}

/// Deficiencies over a window list. With `sources = Some(I)` the sums run over
/// `t1 ∈ I` and targets are `I`; otherwise over all vertices.
pub fn deficiency_table(
    spec: &DiagramSpec,
    candidate: &EigenvalueCandidate,
    windows: &[(usize, usize)],
    sources: Option<&[Vertex]>,
) -> Result<DeficiencyReport> {
    require_examinable(candidate)?;
    let ladder = ResidueLadder::new(spec, candidate.b)?;
    deficiency_with(&ladder, candidate, windows, sources)
}

fn deficiency_with(
    ladder: &ResidueLadder<'_>,
    candidate: &EigenvalueCandidate,
    windows: &[(usize, usize)],
    sources: Option<&[Vertex]>,
) -> Result<DeficiencyReport> {
    let spec = ladder.spec();
    let all: Vec<Vertex> = spec.vertices().collect();
    let source_set: Vec<Vertex> = sources.map(|s| s.to_vec()).unwrap_or_else(|| all.clone());
    let targets = source_set.clone();
    let mut records = Vec::new();
    let mut gaps = Vec::new();
    for &(m, n) in windows {
        let t = ladder.window(m, n)?;
        let sig = sigma_sums(t, candidate)?;
        for &t2 in &targets {
            let sum: f64 = source_set.iter().map(|&t1| sig.magnitude(t1, t2)).sum();
            records.push(WindowRecord { m, n, t2, deficiency: 1.0 - sum });
        }
        gaps.extend(gap_records(spec, candidate, t, &targets)?);
    }
    Ok(DeficiencyReport {
        candidate: candidate.clone(),
        sources: sources.map(|s| s.to_vec()),
        targets,
        windows: records,
        gaps,
    })
}

/// Residue-class map `k(t1, t2)` over `sources × targets`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMap {
    /// Classes are residues mod this value.
    pub modulus: u64,
    pub window: Option<(usize, usize)>,
    pub sources: Vec<Vertex>,
    pub targets: Vec<Vertex>,
    entries: BTreeMap<(Vertex, Vertex), u64>,
    masses: BTreeMap<(Vertex, Vertex), BigRational>,
}

impl KMap {
    pub fn from_fn(modulus: u64, sources: &[Vertex], targets: &[Vertex], f: impl Fn(Vertex, Vertex) -> u64) -> KMap {
        let mut entries = BTreeMap::new();
        for &t1 in sources {
            for &t2 in targets {
                entries.insert((t1, t2), f(t1, t2) % modulus);
            }
        }
        KMap {
            modulus,
            window: None,
            sources: sources.to_vec(),
            targets: targets.to_vec(),
            entries,
            masses: BTreeMap::new(),
        }
    }

    pub fn get(&self, t1: Vertex, t2: Vertex) -> Option<u64> {
        self.entries.get(&(t1, t2)).copied()
    }

    /// Share of `P_{m,n}[t1][t2]` carried by the dominant class.
    pub fn dominant_mass(&self, t1: Vertex, t2: Vertex) -> Option<&BigRational> {
        self.masses.get(&(t1, t2))
    }

    pub fn set(&mut self, t1: Vertex, t2: Vertex, k: u64) {
        self.entries.insert((t1, t2), k % self.modulus);
    }

    pub fn remove(&mut self, t1: Vertex, t2: Vertex) {
        self.entries.remove(&(t1, t2));
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vertex, Vertex, u64)> + '_ {
        self.entries.iter().map(|(&(a, b), &k)| (a, b, k))
    }

    pub fn same_values(&self, other: &KMap) -> bool {
        self.modulus == other.modulus && self.entries == other.entries
    }
}

#[derive(Serialize)]
struct KMapEntry {
    t1: Vertex,
    t2: Vertex,
    k: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    dominant_mass: Option<String>,
}

impl Serialize for KMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let entries: Vec<KMapEntry> = self
            .entries()
            .map(|(t1, t2, k)| KMapEntry {
                t1,
                t2,
                k,
                dominant_mass: self.dominant_mass(t1, t2).map(crate::arith::format_rational),
            })
            .collect();
        let mut st = serializer.serialize_struct("KMap", 5)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("window", &self.window)?;
        st.serialize_field("sources", &self.sources)?;
        st.serialize_field("targets", &self.targets)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Dominant residue classes mod `b/(b,p_m)` on the window `(m, n)`, for all
/// source vertices and the given targets. Pairs with `P_{m,n}[t1][t2] = 0`
/// are left out.
pub fn extract_kmap(
    spec: &DiagramSpec,
    candidate: &EigenvalueCandidate,
    m: usize,
    n: usize,
    targets: &[Vertex],
) -> Result<KMap> {
    require_examinable(candidate)?;
    let t = crate::residue::range_residue_counts(spec, m, n, candidate.b)?;
    kmap_from_tensor(spec, candidate, &t, targets)
}

pub fn kmap_from_tensor(
    spec: &DiagramSpec,
    candidate: &EigenvalueCandidate,
    t: &ResidueTensor,
    targets: &[Vertex],
) -> Result<KMap> {
    let bb = candidate
        .bb_at(t.m)
        .ok_or(Error::LevelOutOfRange { level: t.m, depth: candidate.max_level })?;
    let sources: Vec<Vertex> = spec.vertices().collect();
    let mut entries = BTreeMap::new();
    let mut masses = BTreeMap::new();
    for &t1 in &sources {
        for &t2 in targets {
            let cell = t.cell(t1, t2);
            let total: BigUint = cell.iter().sum();
            if total.is_zero() {
                continue;
            }
            let (k, dom) = dominant(cell, bb);
            entries.insert((t1, t2), k);
            masses.insert((t1, t2), BigRational::new(BigInt::from(dom), BigInt::from(total)));
        }
    }
    Ok(KMap { modulus: bb, window: Some((t.m, t.n)), sources, targets: targets.to_vec(), entries, masses })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CocycleLaw {
    /// `p k(t, t) ≡ 0`.
    Diagonal,
    /// `p k(t1, t2) ≡ -p k(t2, t1)`.
    Antisymmetry,
    /// `p k(t1, t3) ≡ p k(t1, t2) + p k(t2, t3)`.
    Additivity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleViolation {
    pub law: CocycleLaw,
    pub t1: Vertex,
    pub t2: Vertex,
    pub t3: Vertex,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    pub p: u64,
    pub b: u64,
    pub passed: bool,
    pub violations: Vec<CocycleViolation>,
}

/// Checks the additive cocycle identities of `p·k` mod `b` on `I`.
pub fn cocycle_check(kmap: &KMap, candidate: &EigenvalueCandidate, set: &[Vertex]) -> Result<CocycleReport> {
    let p = candidate
        .p
        .ok_or_else(|| Error::Precondition("p_n mod b is not constant; telescope first".into()))?;
    let b = candidate.b;
    let pk = |t1: Vertex, t2: Vertex| -> Result<u64> {
        let k = kmap.get(t1, t2).ok_or(Error::MissingPair { t1: t1.label(), t2: t2.label() })?;
        Ok((p as u128 * k as u128 % b as u128) as u64)
    };
    let mut violations = Vec::new();
    for &t1 in set {
        let d = pk(t1, t1)?;
        if d != 0 {
            violations.push(CocycleViolation { law: CocycleLaw::Diagonal, t1, t2: t1, t3: t1, lhs: d, rhs: 0 });
        }
        for &t2 in set {
            let lhs = pk(t1, t2)?;
            let rhs = (b - pk(t2, t1)?) % b;
            if lhs != rhs {
                violations.push(CocycleViolation { law: CocycleLaw::Antisymmetry, t1, t2, t3: t1, lhs, rhs });
            }
            for &t3 in set {
                let lhs = pk(t1, t3)?;
                let rhs = (pk(t1, t2)? + pk(t2, t3)?) % b;
                if lhs != rhs {
                    violations.push(CocycleViolation { law: CocycleLaw::Additivity, t1, t2, t3, lhs, rhs });
                }
            }
        }
    }
    Ok(CocycleReport { p, b, passed: violations.is_empty(), violations })
}

#[derive(Debug, Clone, Serialize)]
pub struct PsiAtom {
    pub class: u64,
    pub members: Vec<Vertex>,
    /// `Σ_{t1 ∈ atom} |Σ(t1,t2)| / q_{m,n}`.
    pub sum: f64,
    /// `|sum - 1/bb|`.
    pub distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PsiReport {
    pub m: usize,
    pub n: usize,
    pub t2: Vertex,
    pub bb: u64,
    pub atoms: Vec<PsiAtom>,
    pub onto: bool,
    /// Sources with `P_{m,n}[t1][t2] = 0`, which have no class.
    pub unassigned: Vec<Vertex>,
}

/// Partition of `domain` by the dominant class `k(t1, t2)`.
pub fn psi_partition(
    spec: &DiagramSpec,
    candidate: &EigenvalueCandidate,
    m: usize,
    n: usize,
    t2: Vertex,
    domain: &[Vertex],
) -> Result<PsiReport> {
    require_examinable(candidate)?;
    let t = crate::residue::range_residue_counts(spec, m, n, candidate.b)?;
    let kmap = kmap_from_tensor(spec, candidate, &t, &[t2])?;
    let sig = sigma_sums(&t, candidate)?;
    let bb = kmap.modulus;
    let mut atoms: Vec<PsiAtom> = (0..bb)
        .map(|class| PsiAtom { class, members: Vec::new(), sum: 0.0, distance: 0.0 })
        .collect();
    let mut unassigned = Vec::new();
    for &t1 in domain {
        match kmap.get(t1, t2) {
            Some(k) => {
                let atom = &mut atoms[k as usize];
                atom.members.push(t1);
                atom.sum += sig.magnitude(t1, t2);
            }
            None => unassigned.push(t1),
        }
    }
    for a in &mut atoms {
        a.distance = (a.sum - 1.0 / bb as f64).abs();
    }
    let onto = atoms.iter().all(|a| !a.members.is_empty());
    Ok(PsiReport { m, n, t2, bb, atoms, onto, unassigned })
}

/// `N / (1 - cos(2π/N))`, with 1 for `N = 1`.
pub fn root_constant(n: u64) -> f64 {
    if n <= 1 {
        return 1.0;
    }
    n as f64 / (1.0 - (2.0 * std::f64::consts::PI / n as f64).cos())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominantRoot {
    pub index: usize,
    pub weight: f64,
    /// `1 - C ε`, a lower bound for `weight`.
    pub bound: f64,
    pub constant: f64,
}

/// Given convex weights on the `N`-th roots of unity whose barycenter has
/// modulus above `1 - ε`, returns the heaviest root and the guaranteed bound.
pub fn dominant_root(weights: &[f64], epsilon: f64) -> Result<DominantRoot> {
    let n = weights.len();
    if n == 0 {
        return Err(Error::Precondition("no weights".into()));
    }
    if weights.iter().any(|&w| w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition("weights must be nonnegative and sum to 1".into()));
    }
    let z: num_complex::Complex64 = weights
        .iter()
        .enumerate()
        .map(|(k, &w)| num_complex::Complex64::from_polar(w, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .sum();
    if z.norm() <= 1.0 - epsilon {
        return Err(Error::Precondition(format!("|Σ w ζ| = {} is not above 1 - ε = {}", z.norm(), 1.0 - epsilon)));
    }
    let mut index = 0;
    for k in 1..n {
        if weights[k] > weights[index] {
            index = k;
        }
    }
    let constant = root_constant(n as u64);
    Ok(DominantRoot { index, weight: weights[index], bound: 1.0 - constant * epsilon, constant })
}

#[derive(Debug, Clone, Serialize)]
pub struct PairShare {
    pub m: usize,
    pub n: usize,
    pub t1: Vertex,
    pub t2: Vertex,
    pub magnitude: f64,
    /// `| |Σ|/q - 1/d |`.
    pub distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Corollary6Report {
    pub d: usize,
    pub pairs: Vec<PairShare>,
    /// Tower masses at the start level of the largest window, uniform seed at its end level.
    pub tower_masses: Vec<f64>,
    pub tower_distances: Vec<f64>,
    pub max_pair_distance: f64,
}

/// Pairwise sums against `1/d` for a candidate whose phase count equals the rank.
pub fn corollary6_check(
    spec: &DiagramSpec,
    candidate: &EigenvalueCandidate,
    windows: &[(usize, usize)],
) -> Result<Corollary6Report> {
    let d = spec.rank();
    if d < 2 || candidate.bb != d as u64 || candidate.status == CandidateStatus::Continuous {
        return Err(Error::Precondition(format!("b/(b,p_n) = {} differs from d = {}", candidate.bb, d)));
    }
    let ladder = ResidueLadder::new(spec, candidate.b)?;
    let target = 1.0 / d as f64;
    let mut pairs = Vec::new();
    for &(m, n) in windows {
        let sig = sigma_sums(ladder.window(m, n)?, candidate)?;
        for t1 in spec.vertices() {
            for t2 in spec.vertices() {
                let magnitude = sig.magnitude(t1, t2);
                pairs.push(PairShare { m, n, t1, t2, magnitude, distance: (magnitude - target).abs() });
            }
        }
    }
    let &(m, n) = windows
        .iter()
        .max_by_key(|(m, n)| (n - m, *n))
        .ok_or_else(|| Error::Precondition("no windows".into()))?;
    let mv = measures::measure_estimate(spec, m, n, &measures::uniform_seed(d))?;
    let tower_masses: Vec<f64> = mv.tower.iter().map(crate::arith::rational_to_f64).collect();
    let tower_distances = tower_masses.iter().map(|x| (x - target).abs()).collect();
    let max_pair_distance = pairs.iter().map(|p| p.distance).fold(0.0, f64::max);
    Ok(Corollary6Report { d, pairs, tower_masses, tower_distances, max_pair_distance })
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyEntry {
    pub b: u64,
    pub bb: u64,
    pub status: CandidateStatus,
    pub accepted: bool,
    pub reason: String,
    /// Deficiency per target at the last ladder window, when computed.
    pub final_deficiency: Vec<(Vertex, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureSurvey {
    pub set: Vec<Vertex>,
    pub entries: Vec<SurveyEntry>,
    /// Phase counts `b/(b,p_n)` of accepted candidates.
    pub accepted_bb: BTreeSet<u64>,
    /// Divisibility-maximal accepted phase count (1 when none is accepted).
    pub b_mu: u64,
    /// Whether `b_mu` is divisible by every accepted phase count.
    pub b_mu_unique: bool,
    /// Every accepted phase count is at most `#I`.
    pub bounded_by_set: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyResult {
    pub b_max: u64,
    pub depth: usize,
    pub windows: Vec<(usize, usize)>,
    pub thresholds: AcceptanceThresholds,
    pub measures: Vec<MeasureSurvey>,
    /// `Σ_μ b_μ`.
    pub sum_b_mu: u64,
    pub sum_bound_ok: bool,
    /// `d - Σ_μ (b_μ - 1)`, the bound on the number of ergodic measures.
    pub measure_count_bound: i64,
    pub measure_count_ok: bool,
}

impl SurveyResult {
    pub fn measure(&self, set: &[Vertex]) -> Option<&MeasureSurvey> {
        self.measures.iter().find(|m| m.set == set)
    }
}

impl MeasureSurvey {
    pub fn entry(&self, b: u64) -> Option<&SurveyEntry> {
        self.entries.iter().find(|e| e.b == b)
    }
}

/// Decides acceptance of one candidate for a vertex set from its ladder deficiencies.
pub fn accept(report: &DeficiencyReport, windows: &[(usize, usize)], th: &AcceptanceThresholds) -> (bool, String) {
    let tail = &windows[windows.len().saturating_sub(th.last_windows)..];
    for &t2 in &report.targets {
        for &(m, n) in tail {
            let d = report.deficiency(m, n, t2).unwrap_or(f64::INFINITY);
            if d >= th.tau {
                return (false, format!("deficiency {d:.6} ≥ {} at ({m},{n}) for t2 = {t2}", th.tau));
            }
        }
    }
    for &t2 in &report.targets {
        if let Some(((m0, n0), (m1, n1))) = ladder_increase(report, windows, t2, th) {
            return (false, format!("deficiency increases from ({m0},{n0}) to ({m1},{n1}) for t2 = {t2}"));
        }
    }
    (true, "deficiency below threshold and non-increasing".into())
}

/// First compared window pair on which the deficiency of `t2` grows beyond the slack.
pub fn ladder_increase(
    report: &DeficiencyReport,
    windows: &[(usize, usize)],
    t2: Vertex,
    th: &AcceptanceThresholds,
) -> Option<((usize, usize), (usize, usize))> {
    let d = |w: (usize, usize)| report.deficiency(w.0, w.1, t2).unwrap_or(f64::INFINITY);
    let grows = |a: (usize, usize), b: (usize, usize)| d(b) > d(a) + th.monotone_slack;
    match th.order {
        LadderOrder::Sequential => windows.windows(2).find(|p| grows(p[0], p[1])).map(|p| (p[0], p[1])),
        LadderOrder::StartLevel => windows.iter().find_map(|&a| {
            windows.iter().find(|&&b| b.0 > a.0 && b.1 >= a.1 && grows(a, b)).map(|&b| (a, b))
        }),
    }
}

/// Examines `λ = exp(2πi/b)` for `2 ≤ b ≤ b_max` against each hypothesized `I`.
pub fn survey(
    spec: &DiagramSpec,
    b_max: u64,
    depth: usize,
    hypotheses: &[Vec<Vertex>],
    windows: Option<&[(usize, usize)]>,
    th: &AcceptanceThresholds,
) -> Result<SurveyResult> {
    if b_max < 2 {
        return Err(Error::Precondition("b_max must be at least 2".into()));
    }
    let depth = depth.min(spec.depth());
    let windows: Vec<(usize, usize)> = windows.map(|w| w.to_vec()).unwrap_or_else(|| default_ladder(depth));
    if windows.is_empty() {
        return Err(Error::Precondition(format!("no windows for depth {depth}")));
    }
    let per_b: Vec<Vec<SurveyEntry>> = (2..=b_max)
        .into_par_iter()
        .map(|b| survey_one(spec, b, depth, hypotheses, &windows, th))
        .collect::<Result<_>>()?;
    let mut measures = Vec::new();
    for (h, set) in hypotheses.iter().enumerate() {
        let entries: Vec<SurveyEntry> = per_b.iter().map(|row| row[h].clone()).collect();
        let accepted_bb: BTreeSet<u64> = entries.iter().filter(|e| e.accepted).map(|e| e.bb).collect();
        let b_mu = accepted_bb.iter().copied().fold(1, |acc, x| if x % acc == 0 { x } else { acc });
        let b_mu_unique = accepted_bb.iter().all(|&x| b_mu % x == 0);
        let bounded_by_set = accepted_bb.iter().all(|&x| x <= set.len() as u64);
        measures.push(MeasureSurvey { set: set.clone(), entries, accepted_bb, b_mu, b_mu_unique, bounded_by_set });
    }
    let sum_b_mu: u64 = measures.iter().map(|m| m.b_mu).sum();
    let d = spec.rank() as i64;
    let measure_count_bound = d - measures.iter().map(|m| m.b_mu as i64 - 1).sum::<i64>();
    Ok(SurveyResult {
        b_max,
        depth,
        windows,
        thresholds: *th,
        sum_bound_ok: sum_b_mu <= spec.rank() as u64,
        measure_count_ok: measures.len() as i64 <= measure_count_bound,
        measures,
        sum_b_mu,
        measure_count_bound,
    })
}

fn survey_one(
    spec: &DiagramSpec,
    b: u64,
    depth: usize,
    hypotheses: &[Vec<Vertex>],
    windows: &[(usize, usize)],
    th: &AcceptanceThresholds,
) -> Result<Vec<SurveyEntry>> {
    let cand = classify_candidate(spec, 1, b, depth)?;
    let base = |accepted: bool, reason: String| SurveyEntry {
        b,
        bb: cand.bb,
        status: cand.status,
        accepted,
        reason,
        final_deficiency: Vec::new(),
    };
    if cand.status != CandidateStatus::Candidate {
        let reason = match cand.status {
            CandidateStatus::Continuous => "continuous eigenvalue".to_string(),
            CandidateStatus::Rejected => format!("b/(b,p_n) = {} exceeds d = {}", cand.bb, spec.rank()),
            _ => "(b, p_n) still growing at the last level".to_string(),
        };
        return Ok(hypotheses.iter().map(|_| base(false, reason.clone())).collect());
    }
    let ladder = ResidueLadder::new(spec, b)?;
    let (lm, ln) = *windows.last().unwrap();
    let mut out = Vec::with_capacity(hypotheses.len());
    for set in hypotheses {
        if cand.bb > set.len() as u64 {
            out.push(base(false, format!("b/(b,p_n) = {} exceeds #I = {}", cand.bb, set.len())));
            continue;
        }
        let report = deficiency_with(&ladder, &cand, windows, Some(set))?;
        let (accepted, reason) = accept(&report, windows, th);
        let mut e = base(accepted, reason);
        e.final_deficiency = set.iter().map(|&t| (t, report.deficiency(lm, ln, t).unwrap())).collect();
        out.push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{vertices, OrderWord};

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn cyclic_toy(depth: usize) -> DiagramSpec {
        let words = vec![
            OrderWord::from_labels(&[1, 2, 3, 1]).unwrap(),
            OrderWord::from_labels(&[2, 3, 1, 2]).unwrap(),
            OrderWord::from_labels(&[3, 1, 2, 3]).unwrap(),
        ];
        DiagramSpec::toeplitz(3, &vec![big(4); depth - 1], vec![words; depth - 1]).unwrap()
    }

    #[test]
    fn classification_statuses() {
        let s = cyclic_toy(4);
        let c = classify_candidate(&s, 1, 3, 4).unwrap();
        assert_eq!(c.status, CandidateStatus::Candidate);
        assert_eq!((c.bb, c.p), (3, Some(1)));
        assert_eq!(classify_candidate(&s, 1, 16, 4).unwrap().status, CandidateStatus::Continuous);
        assert_eq!(classify_candidate(&s, 1, 5, 4).unwrap().status, CandidateStatus::Rejected);
        assert_eq!(classify_candidate(&s, 1, 128, 4).unwrap().status, CandidateStatus::Undecided);
        assert_eq!(classify_candidate(&s, 2, 4, 4).unwrap_err(), Error::NotCoprime { a: 2, b: 4 });
    }

    #[test]
    fn telescoping_cut_for_alternating_residues() {
        let w = |l: &[u32]| OrderWord::from_labels(l).unwrap();
        let words2 = vec![w(&[1, 2]), w(&[2, 3]), w(&[3, 4]), w(&[4, 1])];
        let words3 = vec![w(&[1, 2, 3]), w(&[2, 3, 4]), w(&[3, 4, 1]), w(&[4, 1, 2])];
        let s = DiagramSpec::toeplitz(
            4,
            &[big(2), big(3), big(3), big(3)],
            vec![words2, words3.clone(), words3.clone(), words3],
        )
        .unwrap();
        let c = classify_candidate(&s, 1, 8, 5).unwrap();
        assert_eq!(c.residues, vec![1, 2, 6, 2, 6]);
        let cut = stabilizing_telescope(&s, &c, 5).unwrap();
        assert_eq!(cut, vec![1, 2, 4]);
        let t = s.telescope(&cut, 1000).unwrap();
        assert!((2..=t.depth()).all(|n| mod_u64(&t.p(n).unwrap(), 8) == 2));
        let one = classify_candidate(&s, 1, 1, 5).unwrap();
        assert_eq!(stabilizing_telescope(&s, &one, 5).unwrap(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn kmap_and_psi_on_the_cyclic_toy() {
        let s = cyclic_toy(2);
        let c = classify_candidate(&s, 1, 3, 2).unwrap();
        let v = Vertex::new;
        let k = extract_kmap(&s, &c, 1, 2, &[v(1)]).unwrap();
        assert_eq!((k.get(v(1), v(1)), k.get(v(2), v(1)), k.get(v(3), v(1))), (Some(0), Some(2), Some(1)));
        let psi = psi_partition(&s, &c, 1, 2, v(1), &vertices(&[1, 2, 3])).unwrap();
        assert!(psi.onto);
        let members: Vec<Vec<Vertex>> = psi.atoms.iter().map(|a| a.members.clone()).collect();
        assert_eq!(members, vec![vertices(&[1]), vertices(&[3]), vertices(&[2])]);
        assert!((psi.atoms[0].sum - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dominant_root_examples() {
        let r = dominant_root(&[1.0, 0.0, 0.0], 0.1).unwrap();
        assert_eq!((r.index, r.weight), (0, 1.0));
        let r = dominant_root(&[0.9, 0.1], 0.25).unwrap();
        assert_eq!(r.index, 0);
        assert!((r.constant - 1.0).abs() < 1e-15 && (r.bound - 0.75).abs() < 1e-12);
        let r = dominant_root(&[0.97, 0.01, 0.01, 0.01], 0.05).unwrap();
        assert_eq!(r.index, 0);
        assert!(r.weight > r.bound);
        assert!(dominant_root(&[0.5, 0.5], 0.5).is_err());
    }

    #[test]
    fn cocycle_violations_are_named() {
        let s = cyclic_toy(4);
        let c = classify_candidate(&s, 1, 3, 4).unwrap();
        let set = vertices(&[1, 2, 3]);
        let mut k = KMap::from_fn(3, &set, &set, |_, _| 0);
        assert!(cocycle_check(&k, &c, &set).unwrap().passed);
        k.set(Vertex::new(1), Vertex::new(2), 1);
        let r = cocycle_check(&k, &c, &set).unwrap();
        assert!(!r.passed);
        assert!(r.violations.iter().any(|v| v.law == CocycleLaw::Antisymmetry && v.t1 == Vertex::new(1)));
        k.remove(Vertex::new(3), Vertex::new(3));
        assert_eq!(cocycle_check(&k, &c, &set).unwrap_err(), Error::MissingPair { t1: 3, t2: 3 });
    }

    #[test]
    fn ladder_order() {
        assert_eq!(default_ladder(5), vec![(2, 4), (2, 5), (3, 5)]);
        assert!(default_ladder(3).is_empty());
    }
}
