//! Graph-theoretic characterization of instances with non-unique solutions.
//!
//! The weighted graph of an instance has an edge `{i, j}` (self-loops allowed)
//! exactly when `C_ij > 0`, tested exactly on the stored normalized values; no
//! epsilon thresholding. The subgraph induced by the support of `u*` decides
//! solvability: the global solution is unique (up to sign) iff that subgraph is
//! connected and non-bipartite and every zero-support node with no edge into
//! the support carries a self-loop. A self-loop counts as an odd cycle, so a
//! single node with a self-loop is non-bipartite.
//!
//! Note two deliberately distinct predicates: [`second_solution`] (exact
//! membership in the degenerate set, which tests self-loops on isolated
//! zero-support nodes) and [`in_closure`] (closure membership, where any
//! nonempty isolated zero-support set suffices). They differ on boundary
//! instances.

use crate::error::{Error, Result};
use crate::instance::{Instance, Point, WeightMatrix};

/// Unweighted view of the positive-support pattern of `C`, with edge weights
/// retained for cut computations.
#[derive(Debug, Clone)]
pub struct InstanceGraph {
    n: usize,
    /// adjacency[i] lists neighbors j (may include i itself for a self-loop)
    adjacency: Vec<Vec<usize>>,
}

impl InstanceGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    pub fn has_self_loop(&self, i: usize) -> bool {
        self.has_edge(i, i)
    }

    /// Edge set as unordered pairs (i <= j), sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for &j in &self.adjacency[i] {
                if j >= i {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Build the instance graph: edge present iff `C_ij > 0`.
pub fn build_graph(instance: &Instance) -> InstanceGraph {
    build_graph_of_weights(instance.weights())
}

pub fn build_graph_of_weights(weights: &WeightMatrix) -> InstanceGraph {
    let n = weights.n();
    let mut adjacency = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if weights.get(i, j) > 0.0 {
                adjacency[i].push(j);
            }
        }
    }
    InstanceGraph { n, adjacency }
}

/// Index sets classifying `u*` support: `i1` nonzero, `i0` zero, and
/// `i00 ⊆ i0` the zero-support nodes with no edge into `i1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPartition {
    pub i1: Vec<usize>,
    pub i0: Vec<usize>,
    pub i00: Vec<usize>,
}

pub fn support_partition(instance: &Instance) -> SupportPartition {
    let graph = build_graph(instance);
    support_partition_with(instance, &graph)
}

pub fn support_partition_with(instance: &Instance, graph: &InstanceGraph) -> SupportPartition {
    let t = instance.truth().values();
    let i1: Vec<usize> = (0..instance.n()).filter(|&i| t[i] != 0.0).collect();
    let i0: Vec<usize> = (0..instance.n()).filter(|&i| t[i] == 0.0).collect();
    let in_i1 = membership(instance.n(), &i1);
    let i00 = i0
        .iter()
        .copied()
        .filter(|&i| !graph.neighbors(i).iter().any(|&j| in_i1[j]))
        .collect();
    SupportPartition { i1, i0, i00 }
}

fn membership(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &i in set {
        m[i] = true;
    }
    m
}

/// Connected components of the subgraph induced by the support of `u*`,
/// each sorted, ordered by smallest node index. Self-loops do not matter here.
pub fn g1_subgraph_components(instance: &Instance) -> Vec<Vec<usize>> {
    let graph = build_graph(instance);
    let support = support_partition_with(instance, &graph);
    induced_components(&graph, &support.i1)
}

/// Connected components of the subgraph induced by `nodes`.
pub fn induced_components(graph: &InstanceGraph, nodes: &[usize]) -> Vec<Vec<usize>> {
    let inside = membership(graph.n(), nodes);
    let mut seen = vec![false; graph.n()];
    let mut components = Vec::new();
    for &start in nodes {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = std::collections::VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &w in graph.neighbors(v) {
                if w != v && inside[w] && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// Outcome of a bipartiteness test on an induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartiteness {
    /// Two color classes witnessing bipartiteness (either may be empty).
    Bipartite { class_a: Vec<usize>, class_b: Vec<usize> },
    /// Node sequence of a closed odd walk; a self-loop yields `[i]`.
    OddCycle(Vec<usize>),
}

impl Bipartiteness {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartiteness::Bipartite { .. })
    }
}

/// 2-color the subgraph induced by `nodes`, or exhibit an odd cycle.
pub fn bipartiteness(graph: &InstanceGraph, nodes: &[usize]) -> Bipartiteness {
    let inside = membership(graph.n(), nodes);
    for &i in nodes {
        if graph.has_self_loop(i) {
            return Bipartiteness::OddCycle(vec![i]);
        }
    }
    let n = graph.n();
    let mut color: Vec<Option<bool>> = vec![None; n];
    let mut parent: Vec<usize> = vec![usize::MAX; n];
    let mut class_a = Vec::new();
    let mut class_b = Vec::new();
    for &start in nodes {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let cv = color[v].unwrap();
            for &w in graph.neighbors(v) {
                if w == v || !inside[w] {
                    continue;
                }
                match color[w] {
                    None => {
                        color[w] = Some(!cv);
                        parent[w] = v;
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cv => {
                        return Bipartiteness::OddCycle(odd_cycle(&parent, v, w));
                    }
                    _ => {}
                }
            }
        }
    }
    for &i in nodes {
        match color[i] {
            Some(false) => class_a.push(i),
            Some(true) => class_b.push(i),
            None => unreachable!("every requested node gets colored"),
        }
    }
    class_a.sort_unstable();
    class_b.sort_unstable();
    Bipartiteness::Bipartite { class_a, class_b }
}

/// Merge the tree paths of two equally-colored endpoints of an edge into a
/// closed odd walk through their lowest common ancestor.
fn odd_cycle(parent: &[usize], v: usize, w: usize) -> Vec<usize> {
    let path_to_root = |mut x: usize| {
        let mut p = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            p.push(x);
        }
        p
    };
    let pv = path_to_root(v);
    let pw = path_to_root(w);
    // strip the common suffix, keeping the LCA once
    let mut a = pv.len();
    let mut b = pw.len();
    while a > 1 && b > 1 && pv[a - 2] == pw[b - 2] {
        a -= 1;
        b -= 1;
    }
    let mut cycle = pv[..a].to_vec();
    cycle.extend(pw[..b - 1].iter().rev());
    cycle
}

/// If the instance admits a second global solution `u` with
/// `u u^T != u* u*^T`, return one, built by the explicit constructions:
/// sign flip across components, 2x/0.5x scaling across a bipartition, or a
/// unit value at an isolated zero-support node lacking a self-loop.
pub fn second_solution(instance: &Instance) -> Result<Option<Point>> {
    if !instance.is_normalized() {
        return Err(Error::NotNormalized);
    }
    instance.ensure_nonzero_truth()?;
    let graph = build_graph(instance);
    let support = support_partition_with(instance, &graph);
    let t = instance.truth().values();
    let n = instance.n();

    let components = induced_components(&graph, &support.i1);
    if components.len() >= 2 {
        let mut u = vec![0.0; n];
        for &i in &components[0] {
            u[i] = t[i];
        }
        for comp in &components[1..] {
            for &i in comp {
                u[i] = -t[i];
            }
        }
        return Ok(Some(Point::new(u).expect("finite witness")));
    }

    if let Bipartiteness::Bipartite { class_a, class_b } = bipartiteness(&graph, &support.i1) {
        let mut u = vec![0.0; n];
        for &i in &class_a {
            u[i] = t[i] / 2.0;
        }
        for &i in &class_b {
            u[i] = 2.0 * t[i];
        }
        return Ok(Some(Point::new(u).expect("finite witness")));
    }

    for &i in &support.i00 {
        if !graph.has_self_loop(i) {
            let mut u = t.to_vec();
            u[i] = 1.0;
            return Ok(Some(Point::new(u).expect("finite witness")));
        }
    }

    Ok(None)
}

/// True iff the instance has multiple essentially different global solutions.
pub fn is_degenerate(instance: &Instance) -> Result<bool> {
    Ok(second_solution(instance)?.is_some())
}

/// Closure membership: the support subgraph is disconnected or bipartite, or
/// some zero-support node has no edge into the support (self-loops ignored
/// here, unlike [`second_solution`]).
pub fn in_closure(instance: &Instance) -> Result<bool> {
    if !instance.is_normalized() {
        return Err(Error::NotNormalized);
    }
    instance.ensure_nonzero_truth()?;
    let graph = build_graph(instance);
    let support = support_partition_with(instance, &graph);
    if !support.i00.is_empty() {
        return Ok(true);
    }
    let components = induced_components(&graph, &support.i1);
    if components.len() != 1 {
        return Ok(true);
    }
    Ok(bipartiteness(&graph, &support.i1).is_bipartite())
}

/// Membership in the robust degenerate set: support subgraph disconnected with
/// every component non-bipartite, and no isolated zero-support node.
pub fn in_sd(instance: &Instance) -> Result<bool> {
    if !instance.is_normalized() {
        return Err(Error::NotNormalized);
    }
    if instance.has_degenerate_truth() {
        return Ok(false);
    }
    let graph = build_graph(instance);
    let support = support_partition_with(instance, &graph);
    if !support.i00.is_empty() {
        return Ok(false);
    }
    let components = induced_components(&graph, &support.i1);
    if components.len() < 2 {
        return Ok(false);
    }
    Ok(components.iter().all(|c| !bipartiteness(&graph, c).is_bipartite()))
}

/// [`in_sd`] with magnitude floors: every nonzero weight and every nonzero
/// truth component must be at least `eps`.
pub fn in_sd_eps(instance: &Instance, eps: f64) -> Result<bool> {
    if !in_sd(instance)? {
        return Ok(false);
    }
    let ok_weights = instance
        .weights()
        .entries()
        .iter()
        .all(|&c| c == 0.0 || c >= eps);
    let ok_truth = instance
        .truth()
        .values()
        .iter()
        .all(|&v| v == 0.0 || v.abs() >= eps);
    Ok(ok_weights && ok_truth)
}

/// Combinatorial structure whose zero pattern places a target instance in the
/// closure of the degenerate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CertificateKind {
    Disconnect,
    Bipartite,
    IsolatedZeroNode,
}

impl std::fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CertificateKind::Disconnect => "disconnect",
            CertificateKind::Bipartite => "bipartite",
            CertificateKind::IsolatedZeroNode => "isolated-zero-node",
        };
        f.write_str(s)
    }
}

/// A degeneracy certificate: the target support `T` for the perturbed truth
/// plus the combinatorial witness forcing entries of `C` to zero.
///
/// Zero sets by kind (ordered index pairs):
/// - `Disconnect`: all cross pairs between `part_i` and `part_j` (both
///   nonempty, partitioning `support`).
/// - `Bipartite`: all within-`part_i` pairs, all within-`part_j` pairs, and
///   every diagonal `(i, i)` for `i` in `support`; `part_j` may be empty.
/// - `IsolatedZeroNode`: all pairs joining `node` (outside `support`) to
///   `support`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub support: Vec<usize>,
    pub part_i: Vec<usize>,
    pub part_j: Vec<usize>,
    pub node: Option<usize>,
}

impl Certificate {
    pub fn disconnect(support: Vec<usize>, part_i: Vec<usize>, part_j: Vec<usize>) -> Self {
        debug_assert!(!part_i.is_empty() && !part_j.is_empty());
        debug_assert_eq!(part_i.len() + part_j.len(), support.len());
        Self { kind: CertificateKind::Disconnect, support, part_i, part_j, node: None }
    }

    pub fn bipartite(support: Vec<usize>, part_i: Vec<usize>, part_j: Vec<usize>) -> Self {
        debug_assert_eq!(part_i.len() + part_j.len(), support.len());
        Self { kind: CertificateKind::Bipartite, support, part_i, part_j, node: None }
    }

    pub fn isolated_zero_node(support: Vec<usize>, node: usize) -> Self {
        debug_assert!(!support.contains(&node));
        Self { kind: CertificateKind::IsolatedZeroNode, support, part_i: vec![], part_j: vec![], node: Some(node) }
    }

    /// Ordered index pairs forced to zero.
    pub fn zero_set(&self) -> Vec<(usize, usize)> {
        let mut z = Vec::new();
        match self.kind {
            CertificateKind::Disconnect => {
                for &i in &self.part_i {
                    for &j in &self.part_j {
                        z.push((i, j));
                        z.push((j, i));
                    }
                }
            }
            CertificateKind::Bipartite => {
                for part in [&self.part_i, &self.part_j] {
                    for &i in part.iter() {
                        for &j in part.iter() {
                            if i != j {
                                z.push((i, j));
                            }
                        }
                    }
                }
                for &i in &self.support {
                    z.push((i, i));
                }
            }
            CertificateKind::IsolatedZeroNode => {
                let i = self.node.expect("isolated certificate carries a node");
                for &j in &self.support {
                    z.push((i, j));
                    z.push((j, i));
                }
            }
        }
        z.sort_unstable();
        z
    }

    /// Number of ordered pairs in the zero set.
    pub fn zero_set_len(&self) -> usize {
        match self.kind {
            CertificateKind::Disconnect => 2 * self.part_i.len() * self.part_j.len(),
            CertificateKind::Bipartite => {
                let a = self.part_i.len();
                let b = self.part_j.len();
                a * a.saturating_sub(1) + b * b.saturating_sub(1) + self.support.len()
            }
            CertificateKind::IsolatedZeroNode => 2 * self.support.len(),
        }
    }

    /// Total weight mass on the zero set.
    pub fn zero_mass(&self, weights: &WeightMatrix) -> f64 {
        self.zero_set().iter().map(|&(i, j)| weights.get(i, j)).sum()
    }
}
