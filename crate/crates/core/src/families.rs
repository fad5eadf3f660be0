//! Generators for the structured instance families used by the experiments.
//!
//! Each generator emits an exactly normalized instance (the closed forms sum
//! to one), so downstream graph tests see exact zero patterns. Generators
//! validate their parameters against the family's hypothesis range and are
//! deterministic: identical parameters (and random stream, where applicable)
//! reproduce bit-identical instances.

use crate::error::{Error, Result};
use crate::instance::{GroundTruth, Instance, WeightMatrix};
use crate::rng::RandomStream;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Simple undirected graph without self-loops, used to parameterize the
/// one-parameter family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Build from an edge list; loops are rejected, duplicates collapsed.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut es: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::ParameterRange(format!("self-loop at node {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::ParameterRange(format!("edge ({a}, {b}) outside [0, {n})")));
            }
            es.push((a.min(b), a.max(b)));
        }
        es.sort_unstable();
        es.dedup();
        Ok(Self { n, edges: es })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    pub fn is_independent(&self, nodes: &[usize]) -> bool {
        for (k, &a) in nodes.iter().enumerate() {
            for &b in &nodes[k + 1..] {
                if self.has_edge(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Size of a maximum independent set, by exhaustive bitmask sweep
    /// (restricted to n <= 20).
    pub fn max_independent_set_size(&self) -> Result<usize> {
        if self.n > 20 {
            return Err(Error::EnumerationLimit { n: self.n, limit: 20 });
        }
        let mut adj = vec![0usize; self.n];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        let size = 1usize << self.n;
        let mut independent = vec![false; size];
        independent[0] = true;
        let mut best = 0usize;
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            independent[mask] = independent[rest] && (adj[low] & rest) == 0;
            if independent[mask] {
                best = best.max(mask.count_ones() as usize);
            }
        }
        Ok(best)
    }
}

/// Graph whose maximum independent set is exactly `[0, m)`: those nodes are
/// pairwise non-adjacent, the remaining `n - m` nodes form a clique and attach
/// to every independent node. `m = n` yields the empty graph.
pub fn split_graph(n: usize, m: usize) -> Result<SimpleGraph> {
    if m == 0 || m > n {
        return Err(Error::ParameterRange(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
    }
    let mut edges = Vec::new();
    for a in m..n {
        for b in (a + 1)..n {
            edges.push((a, b));
        }
        for s in 0..m {
            edges.push((s, a));
        }
    }
    SimpleGraph::new(n, edges)
}

/// The tight instance for the restricted-isometry upper bound: every entry
/// `(1 + delta)/Z` except `C_00 = (1 - delta)/Z`, truth `e_0`, with
/// `Z = (1 + delta) n^2 - 2 delta`.
pub fn rip_extremal_instance(n: usize, delta: f64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::ParameterRange(format!("need n >= 2, got {n}")));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::ParameterRange(format!("delta = {delta} outside [0, 1)")));
    }
    let z = (1.0 + delta) * (n * n) as f64 - 2.0 * delta;
    let mut c = vec![(1.0 + delta) / z; n * n];
    c[0] = (1.0 - delta) / z;
    let mut u = vec![0.0; n];
    u[0] = 1.0;
    Ok(Instance::pre_normalized(WeightMatrix::from_raw(n, c), GroundTruth::new(u)))
}

/// The incoherence-aware lower-bound instance: the first row/column is
/// down-weighted towards nodes `1..l` with `l = ceil(n / mu)`, and the truth
/// is uniform on those `l` nodes (hence mu-incoherent). For `mu > n/2` the
/// construction routes to [`rip_extremal_instance`].
pub fn rip3_instance(n: usize, mu: f64, delta: f64) -> Result<Instance> {
    if n < 4 {
        return Err(Error::ParameterRange(format!("need n >= 4, got {n}")));
    }
    if !(1.0..=n as f64).contains(&mu) {
        return Err(Error::ParameterRange(format!("mu = {mu} outside [1, n]")));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::ParameterRange(format!("delta = {delta} outside [0, 1)")));
    }
    if mu > n as f64 / 2.0 {
        return rip_extremal_instance(n, delta);
    }
    let l = (n as f64 / mu).ceil() as usize;
    debug_assert!(l >= 2);
    let z = (1.0 + delta) * (n * n) as f64 - 4.0 * delta * (l - 1) as f64;
    let mut c = vec![(1.0 + delta) / z; n * n];
    for i in 1..l {
        c[i] = (1.0 - delta) / z;
        c[i * n] = (1.0 - delta) / z;
    }
    let mut u = vec![0.0; n];
    for v in u.iter_mut().take(l) {
        *v = 1.0 / l as f64;
    }
    Ok(Instance::pre_normalized(WeightMatrix::from_raw(n, c), GroundTruth::new(u)))
}

fn check_signs(n: usize, signs: &[i8]) -> Result<()> {
    if signs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: signs.len() });
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::ParameterRange("signs must be +1 or -1".into()));
    }
    Ok(())
}

/// Canonical minimum-complexity instance at the star weight: zero diagonal,
/// uniform off-diagonal weights `1/(n(n-1))`, truth components `signs_i / n`.
pub fn easiest_star(n: usize, signs: &[i8]) -> Result<Instance> {
    if n < 5 {
        return Err(Error::ParameterRange(format!("need n >= 5, got {n}")));
    }
    check_signs(n, signs)?;
    let off = 1.0 / (n * (n - 1)) as f64;
    let mut c = vec![off; n * n];
    for i in 0..n {
        c[i * n + i] = 0.0;
    }
    let u = signs.iter().map(|&s| s as f64 / n as f64).collect();
    Ok(Instance::pre_normalized(WeightMatrix::from_raw(n, c), GroundTruth::new(u)))
}

/// Canonical minimum-complexity instance at the diamond weight: uniform
/// weights `1/n^2` everywhere, truth components `signs_i / n`.
pub fn easiest_diamond(n: usize, signs: &[i8]) -> Result<Instance> {
    if n < 5 {
        return Err(Error::ParameterRange(format!("need n >= 5, got {n}")));
    }
    check_signs(n, signs)?;
    let c = vec![1.0 / (n * n) as f64; n * n];
    let u = signs.iter().map(|&s| s as f64 / n as f64).collect();
    Ok(Instance::pre_normalized(WeightMatrix::from_raw(n, c), GroundTruth::new(u)))
}

/// One-parameter family on a graph with maximum independent set `s`: weight
/// `eps/Z` between distinct independent nodes, `1/Z` on the graph's edges and
/// on the whole diagonal, zero elsewhere; truth uniform on `s`. The
/// normalizer is `Z = 2|E| + n + m(m-1) eps`.
///
/// `s` must be an independent set of maximum size; the exhaustive maximality
/// check runs for `n <= 20` and is skipped above that.
pub fn one_param_instance(graph: &SimpleGraph, s: &[usize], eps: f64) -> Result<Instance> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::ParameterRange(format!("eps = {eps} outside [0, 1]")));
    }
    let n = graph.n();
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != s.len() || sorted.iter().any(|&i| i >= n) {
        return Err(Error::ParameterRange("independent set has duplicates or bad nodes".into()));
    }
    if !graph.is_independent(&sorted) {
        return Err(Error::NotIndependent(format!("{sorted:?}")));
    }
    if n <= 20 {
        let best = graph.max_independent_set_size()?;
        if sorted.len() < best {
            return Err(Error::NotMaximal { larger: best });
        }
    }
    let m = sorted.len();
    let z = 2.0 * graph.edge_count() as f64 + n as f64 + (m * (m - 1)) as f64 * eps;
    let mut c = vec![0.0; n * n];
    for &i in &sorted {
        for &j in &sorted {
            if i != j {
                c[i * n + j] = eps / z;
            }
        }
    }
    for &(a, b) in graph.edges() {
        c[a * n + b] = 1.0 / z;
        c[b * n + a] = 1.0 / z;
    }
    for i in 0..n {
        c[i * n + i] = 1.0 / z;
    }
    let mut u = vec![0.0; n];
    for &i in &sorted {
        u[i] = 1.0 / m as f64;
    }
    Ok(Instance::pre_normalized(WeightMatrix::from_raw(n, c), GroundTruth::new(u)))
}

/// Sampling metadata for a Bernoulli draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BernoulliMeta {
    /// Times the all-zero mask was redrawn.
    pub resamples: usize,
    /// Number of nonzero ordered entries; every nonzero weight equals its
    /// reciprocal.
    pub nonzero_ordered: usize,
}

/// Symmetric Bernoulli mask, normalized: each unordered pair (and each
/// diagonal entry) is observed independently with probability `p` and
/// mirrored, so the matrix stays symmetric; the all-zero event is resampled
/// and counted.
pub fn bernoulli_weights(n: usize, p: f64, stream: RandomStream) -> Result<(WeightMatrix, BernoulliMeta)> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::ParameterRange(format!("p = {p} outside (0, 1]")));
    }
    if n == 0 {
        return Err(Error::ParameterRange("n = 0".into()));
    }
    let mut rng = stream.rng();
    let mut resamples = 0usize;
    loop {
        let mut mask = vec![false; n * n];
        let mut nonzero_ordered = 0usize;
        for i in 0..n {
            for j in i..n {
                if rng.random::<f64>() < p {
                    mask[i * n + j] = true;
                    mask[j * n + i] = true;
                    nonzero_ordered += if i == j { 1 } else { 2 };
                }
            }
        }
        if nonzero_ordered == 0 {
            resamples += 1;
            continue;
        }
        let v = 1.0 / nonzero_ordered as f64;
        let c = mask.iter().map(|&b| if b { v } else { 0.0 }).collect();
        return Ok((WeightMatrix::from_raw(n, c), BernoulliMeta { resamples, nonzero_ordered }));
    }
}

/// Bernoulli-weight instance with a caller-supplied truth vector (normalized
/// on construction).
pub fn bernoulli_instance(
    n: usize,
    p: f64,
    truth: GroundTruth,
    stream: RandomStream,
) -> Result<(Instance, BernoulliMeta)> {
    let (weights, meta) = bernoulli_weights(n, p, stream)?;
    let inst = Instance::new(weights, truth)?.normalize()?;
    Ok((inst, meta))
}

/// Uniform-on-support truth with incoherence `n / ceil(n/mu) <= mu`.
pub fn incoherent_truth(n: usize, mu: f64) -> Result<GroundTruth> {
    if !(1.0..=n as f64).contains(&mu) {
        return Err(Error::ParameterRange(format!("mu = {mu} outside [1, n]")));
    }
    let support = (n as f64 / mu).ceil() as usize;
    let mut u = vec![0.0; n];
    for v in u.iter_mut().take(support) {
        *v = 1.0 / support as f64;
    }
    Ok(GroundTruth::new(u))
}

/// Declarative description of a family member, usable from config files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    RipExtremal { n: usize, delta: f64 },
    Rip3 { n: usize, mu: f64, delta: f64 },
    EasiestStar { n: usize, signs: Option<Vec<i8>> },
    EasiestDiamond { n: usize, signs: Option<Vec<i8>> },
    /// One-parameter family on [`split_graph`]`(n, m)`.
    OneParam { n: usize, m: usize, eps: f64 },
    /// Bernoulli weights with a uniform truth on `ceil(n/mu)` nodes.
    Bernoulli { n: usize, p: f64, mu: f64, seed: u64, stream: u64 },
}

impl FamilySpec {
    pub fn build(&self) -> Result<Instance> {
        match *self {
            FamilySpec::RipExtremal { n, delta } => rip_extremal_instance(n, delta),
            FamilySpec::Rip3 { n, mu, delta } => rip3_instance(n, mu, delta),
            FamilySpec::EasiestStar { n, ref signs } => {
                easiest_star(n, &signs.clone().unwrap_or_else(|| vec![1; n]))
            }
            FamilySpec::EasiestDiamond { n, ref signs } => {
                easiest_diamond(n, &signs.clone().unwrap_or_else(|| vec![1; n]))
            }
            FamilySpec::OneParam { n, m, eps } => {
                let graph = split_graph(n, m)?;
                let s: Vec<usize> = (0..m).collect();
                one_param_instance(&graph, &s, eps)
            }
            FamilySpec::Bernoulli { n, p, mu, seed, stream } => {
                let truth = incoherent_truth(n, mu)?;
                bernoulli_instance(n, p, truth, RandomStream::new(seed, stream)).map(|(i, _)| i)
            }
        }
    }
}
