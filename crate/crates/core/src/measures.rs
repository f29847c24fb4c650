//! Invariant measure estimates from deep tower seeds.
//!
//! A probability vector on the level-`n` towers fixes the base masses
//! `μ_n(t) = seed(t) / h_n(t)`; lower levels follow from `μ_m = P_{m,n} μ_n`.
//! Ergodic measures are approximated by point-mass seeds at the deepest level.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{rational, rational_to_f64};
use crate::diagram::DiagramSpec;
use crate::error::{Error, Result};
use crate::word::Vertex;

/// Default lower bound on tower masses of vertices in a cleanliness set.
pub const DEFAULT_DELTA: f64 = 0.05;
/// Default L1 distance under which two seed columns are merged.
pub const DEFAULT_CLUSTER_TOL: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureVector {
    pub level: usize,
    /// Base masses `μ_m(t)`.
    pub base: Vec<BigRational>,
    /// Tower masses `μ(τ_m = t) = h_m(t) μ_m(t)`.
    pub tower: Vec<BigRational>,
}

impl MeasureVector {
    pub fn tower_f64(&self) -> Vec<f64> {
        self.tower.iter().map(rational_to_f64).collect()
    }

    pub fn total(&self) -> BigRational {
        self.tower.iter().sum()
    }
}

pub fn uniform_seed(d: usize) -> Vec<BigRational> {
    vec![BigRational::new(BigInt::one(), BigInt::from(d)); d]
}

pub fn point_seed(d: usize, t: Vertex) -> Vec<BigRational> {
    let mut s = vec![BigRational::zero(); d];
    s[t.index()] = BigRational::one();
    s
}

/// Uniform seed over a vertex subset.
pub fn set_seed(d: usize, set: &[Vertex]) -> Vec<BigRational> {
    let mut s = vec![BigRational::zero(); d];
    let w = BigRational::new(BigInt::one(), BigInt::from(set.len()));
    for t in set {
        s[t.index()] = w.clone();
    }
    s
}

/// Level-`m` masses induced by a probability vector on the level-`n` towers.
pub fn measure_estimate(spec: &DiagramSpec, m: usize, n: usize, seed: &[BigRational]) -> Result<MeasureVector> {
    let d = spec.rank();
    if seed.len() != d {
        return Err(Error::Invalid(format!("seed has {} entries, rank is {d}", seed.len())));
    }
    if seed.iter().any(|x| x < &BigRational::zero()) || seed.iter().sum::<BigRational>() != BigRational::one() {
        return Err(Error::Invalid("seed must be a probability vector".into()));
    }
    let hn = spec.heights(n)?;
    let hm = spec.heights(m)?;
    let p = spec.product_matrix(m, n)?;
    let mu_n: Vec<BigRational> = seed
        .iter()
        .zip(&hn)
        .map(|(s, h)| s / BigRational::from_integer(BigInt::from(h.clone())))
        .collect();
    let base: Vec<BigRational> = (0..d)
        .map(|t1| {
            (0..d)
                .filter(|&t2| !mu_n[t2].is_zero())
                .map(|t2| BigRational::from_integer(BigInt::from(p.get(t1, t2).clone())) * &mu_n[t2])
                .sum()
        })
        .collect();
    let tower = base
        .iter()
        .zip(&hm)
        .map(|(b, h)| b * BigRational::from_integer(BigInt::from(h.clone())))
        .collect();
    Ok(MeasureVector { level: m, base, tower })
}

/// Level-`m` tower vectors obtained from point-mass seeds at each level-`n` vertex.
pub fn point_columns(spec: &DiagramSpec, m: usize, n: usize) -> Result<Vec<Vec<BigRational>>> {
    spec.vertices()
        .map(|t| Ok(measure_estimate(spec, m, n, &point_seed(spec.rank(), t))?.tower))
        .collect()
}

fn l1(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| if x > y { x - y } else { y - x }).sum()
}

/// Largest L1 distance between level-`m` tower vectors of point-mass seeds at level `n`.
pub fn simplex_diameter(spec: &DiagramSpec, m: usize, n: usize) -> Result<BigRational> {
    let cols = point_columns(spec, m, n)?;
    let mut best = BigRational::zero();
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let d = l1(&cols[i], &cols[j]);
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureGroup {
    /// Level-`N` vertices whose point-mass columns fell into this group.
    pub seeds: Vec<Vertex>,
    /// Vertices whose tower mass stays at least `delta` on all trajectory levels.
    pub set: Vec<Vertex>,
    /// `(level, tower masses)` under the uniform seed on `seeds`.
    pub trajectory: Vec<(usize, Vec<f64>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CleanlinessReport {
    pub delta: f64,
    pub cluster_tol: f64,
    pub depth: usize,
    pub cluster_level: usize,
    pub groups: Vec<MeasureGroup>,
    /// Vertices in no group's set.
    pub vanishing: Vec<Vertex>,
    /// Some set contains every vertex.
    pub exact: bool,
}

impl CleanlinessReport {
    pub fn sets(&self) -> Vec<Vec<Vertex>> {
        self.groups.iter().filter(|g| !g.set.is_empty()).map(|g| g.set.clone()).collect()
    }
}

/// Groups deep point-mass columns that agree within `cluster_tol` (single
/// linkage in L1 at level `depth - 3`), then keeps per group the vertices
/// whose tower mass is at least `delta` at levels `depth-3 ..= depth-1`.
/// A vertex claimed by several groups stays with the one giving it the
/// largest minimum mass.
pub fn cleanliness_classify(spec: &DiagramSpec, depth: usize, delta: f64, cluster_tol: f64) -> Result<CleanlinessReport> {
    if depth < 4 || depth > spec.depth() {
        return Err(Error::Precondition(format!("cleanliness needs 4 ≤ depth ≤ {}, got {depth}", spec.depth())));
    }
    let d = spec.rank();
    let cluster_level = depth - 3;
    let cols: Vec<Vec<f64>> = point_columns(spec, cluster_level, depth)?
        .iter()
        .map(|c| c.iter().map(rational_to_f64).collect())
        .collect();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for i in 0..d {
        for j in i + 1..d {
            let dist: f64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| (a - b).abs()).sum();
            if dist <= cluster_tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut seeds_by_root: Vec<Vec<Vertex>> = vec![Vec::new(); d];
    for i in 0..d {
        let r = find(&mut parent, i);
        seeds_by_root[r].push(Vertex::from_index(i));
    }
    let levels: Vec<usize> = (depth - 3..depth).collect();
    let mut groups = Vec::new();
    let mut min_mass: Vec<Vec<f64>> = Vec::new();
    for seeds in seeds_by_root.into_iter().filter(|s| !s.is_empty()) {
        let seed = set_seed(d, &seeds);
        let mut trajectory = Vec::new();
        let mut mins = vec![f64::INFINITY; d];
        for &l in &levels {
            let masses = measure_estimate(spec, l, depth, &seed)?.tower_f64();
            for (m, x) in mins.iter_mut().zip(&masses) {
                *m = m.min(*x);
            }
            trajectory.push((l, masses));
        }
        groups.push(MeasureGroup { seeds, set: Vec::new(), trajectory });
        min_mass.push(mins);
    }
    for t in 0..d {
        let owner = (0..groups.len())
            .filter(|&g| min_mass[g][t] >= delta)
            .max_by(|&a, &b| min_mass[a][t].total_cmp(&min_mass[b][t]));
        if let Some(g) = owner {
            groups[g].set.push(Vertex::from_index(t));
        }
    }
    let vanishing = (0..d)
        .map(Vertex::from_index)
        .filter(|v| groups.iter().all(|g| !g.set.contains(v)))
        .collect();
    let exact = groups.iter().any(|g| g.set.len() == d);
    Ok(CleanlinessReport { delta, cluster_tol, depth, cluster_level, groups, vanishing, exact })
}

#[derive(Debug, Clone, Serialize)]
pub struct LowIndependenceReport {
    pub m: usize,
    pub threshold: f64,
    /// `(n, min_{t1,t2 ∈ I} P_{m,n}[t1][t2] / q_{m,n})` for `n = m+1..=depth`.
    pub ratios: Vec<(usize, f64)>,
    /// First `n` from which every ratio up to `depth` reaches the threshold.
    pub n0: Option<usize>,
}

pub fn low_independence_check(
    spec: &DiagramSpec,
    set: &[Vertex],
    m: usize,
    depth: usize,
    delta: f64,
) -> Result<LowIndependenceReport> {
    if set.is_empty() {
        return Err(Error::Precondition("empty vertex set".into()));
    }
    let threshold = delta / 3.0;
    let mut ratios = Vec::new();
    for n in m + 1..=depth {
        let p = spec.product_matrix(m, n)?;
        let q = spec.q_window(m, n)?;
        let mut min = f64::INFINITY;
        for &t1 in set {
            for &t2 in set {
                min = min.min(rational_to_f64(&rational(p.get(t1.index(), t2.index()), &q)));
            }
        }
        ratios.push((n, min));
    }
    let mut n0 = None;
    for &(n, r) in ratios.iter().rev() {
        if r >= threshold {
            n0 = Some(n);
        } else {
            break;
        }
    }
    Ok(LowIndependenceReport { m, threshold, ratios, n0 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerMassRow {
    pub level: usize,
    pub vertex: Vertex,
    /// Smallest and largest tower mass over point-mass seeds at the deepest level.
    pub lo: BigRational,
    pub hi: BigRational,
    /// Tower mass under the uniform seed at the deepest level.
    pub uniform: BigRational,
}

/// Per-vertex tower-mass ranges at levels `1..depth`, seeded at `depth`.
pub fn tower_mass_limit_table(spec: &DiagramSpec, depth: usize) -> Result<Vec<TowerMassRow>> {
    if depth < 3 || depth > spec.depth() {
        return Err(Error::Precondition(format!("table needs 3 ≤ depth ≤ {}, got {depth}", spec.depth())));
    }
    let d = spec.rank();
    let mut rows = Vec::new();
    for level in 1..depth {
        let cols = point_columns(spec, level, depth)?;
        let uni = measure_estimate(spec, level, depth, &uniform_seed(d))?;
        for t in 0..d {
            let lo = cols.iter().map(|c| &c[t]).min().unwrap().clone();
            let hi = cols.iter().map(|c| &c[t]).max().unwrap().clone();
            rows.push(TowerMassRow { level, vertex: Vertex::from_index(t), lo, hi, uniform: uni.tower[t].clone() });
        }
    }
    Ok(rows)
}
