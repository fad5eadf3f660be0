//! Exact computation of the complexity metric plus its closed forms.
//!
//! The complexity of a normalized instance is the inverse of the weighted l1
//! distance from `(C, u*)` to the closure of the degenerate set,
//!
//! ```text
//! d_alpha = min  alpha ||C - C~||_1 + (1 - alpha) ||u* - u~||_1 .
//! ```
//!
//! Closure membership is a zero-pattern condition, so the minimum is attained
//! by a [`Certificate`]: a target support `T` plus a disconnecting cut, a
//! bipartition, or an isolated node, whose zero set `Z` must vanish in the
//! perturbed weights. For a certificate with zero mass `s = sum_Z C` and
//! off-support truth mass `t = sum_{i not in T} |u*_i|`, the optimal
//! redistribution gives `d = 2*alpha*s + 2*(1-alpha)*t`: removed mass must be
//! re-added elsewhere to stay on the unit sphere, doubling each side.
//! [`exact_metric`] enumerates every certificate, solving the per-support
//! min-cut/max-cut by brute-force bipartition enumeration over subset-sum
//! tables; total cost is about `3^n`, so the dimension is capped (default 14).

use crate::error::{Error, Result};
use crate::graph::{self, Certificate};
use crate::instance::{GroundTruth, Instance, WeightMatrix};

/// Hard cap on `n` for the certificate enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 14;

/// Result of a metric computation: value, minimized distance, and the
/// certificate with a degenerate instance realizing it. The certificate and
/// nearest instance are absent only when no certificate exists at all
/// (n = 1, or an empty feasible set in [`metric_sd_eps`]).
#[derive(Debug, Clone)]
pub struct MetricResult {
    pub value: f64,
    pub distance: f64,
    pub certificate: Option<Certificate>,
    pub nearest: Option<Instance>,
}

/// Subset-sum tables: `get(i, mask) = sum_{j in mask} C_ij`.
struct RowSums {
    n: usize,
    table: Vec<f64>,
}

impl RowSums {
    fn new(weights: &WeightMatrix) -> Self {
        let n = weights.n();
        let size = 1usize << n;
        let mut table = vec![0.0; n * size];
        for i in 0..n {
            let base = i * size;
            for mask in 1..size {
                let low = mask.trailing_zeros() as usize;
                table[base + mask] = table[base + (mask & (mask - 1))] + weights.get(i, low);
            }
        }
        Self { n, table }
    }

    #[inline]
    fn get(&self, i: usize, mask: usize) -> f64 {
        self.table[i * (1 << self.n) + mask]
    }
}

fn mask_to_vec(mask: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        v.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    v
}

fn invert(d: f64) -> f64 {
    if d == 0.0 {
        f64::INFINITY
    } else if d.is_infinite() {
        0.0
    } else {
        1.0 / d
    }
}

/// Exact complexity metric by certificate enumeration over all target
/// supports. Ties between equal-distance certificates resolve to the
/// lexicographically smallest (kind, then sorted node sets), so the result is
/// deterministic and independent of the parallel schedule.
pub fn exact_metric(instance: &Instance, alpha: f64) -> Result<MetricResult> {
    exact_metric_with_limit(instance, alpha, DEFAULT_ENUMERATION_LIMIT)
}

pub fn exact_metric_with_limit(
    instance: &Instance,
    alpha: f64,
    limit: usize,
) -> Result<MetricResult> {
    if !instance.is_normalized() {
        return Err(Error::NotNormalized);
    }
    instance.ensure_nonzero_truth()?;
    check_unit("alpha", alpha)?;
    let n = instance.n();
    if n > limit {
        return Err(Error::EnumerationLimit { n, limit });
    }

    let rows = RowSums::new(instance.weights());
    let truth = instance.truth().values();
    let total_abs: f64 = truth.iter().map(|v| v.abs()).sum();
    let full = (1usize << n) - 1;

    use rayon::prelude::*;
    let best = (1..=full)
        .into_par_iter()
        .filter_map(|t_mask| best_for_support(&rows, truth, total_abs, alpha, t_mask, n))
        .reduce_with(min_candidate);

    let (distance, certificate) = match best {
        Some((d, c)) => (d, Some(c)),
        None => (f64::INFINITY, None),
    };
    let nearest = certificate.as_ref().map(|c| realize_nearest(instance, c));
    Ok(MetricResult { value: invert(distance), distance, certificate, nearest })
}

fn min_candidate(a: (f64, Certificate), b: (f64, Certificate)) -> (f64, Certificate) {
    if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::ParameterRange(format!("{name} = {v} outside [0, 1]")))
    }
}

/// Best certificate whose target support is `t_mask`.
fn best_for_support(
    rows: &RowSums,
    truth: &[f64],
    total_abs: f64,
    alpha: f64,
    t_mask: usize,
    n: usize,
) -> Option<(f64, Certificate)> {
    let t_nodes = mask_to_vec(t_mask);
    let in_t_abs: f64 = t_nodes.iter().map(|&i| truth[i].abs()).sum();
    // cancellation can leave tiny negative residues; masses are nonnegative
    let truth_term = 2.0 * (1.0 - alpha) * (total_abs - in_t_abs).max(0.0);
    let anchor = t_mask.trailing_zeros() as usize;
    let size = t_nodes.len();

    let mut best: Option<(f64, Certificate)> = None;
    let mut consider = |d: f64, make: &dyn Fn() -> Certificate| match &mut best {
        Some((bd, bc)) => {
            if d < *bd {
                *bd = d;
                *bc = make();
            } else if d == *bd {
                let c = make();
                if c < *bc {
                    *bc = c;
                }
            }
        }
        None => best = Some((d, make())),
    };

    // total within-T weight including the diagonal
    let w_t: f64 = t_nodes.iter().map(|&i| rows.get(i, t_mask)).sum();

    // Bipartitions (I, J) of T with the anchor kept in I. J = empty is kept
    // for the bipartite certificate (an edgeless class is legal) but its zero
    // set may cover the whole matrix, in which case it is skipped.
    let rest = t_mask & !(1usize << anchor);
    let mut sub = rest;
    loop {
        let i_mask = sub | (1usize << anchor);
        let j_mask = t_mask & !i_mask;
        let cut: f64 = mask_to_vec(i_mask)
            .iter()
            .map(|&i| rows.get(i, t_mask) - rows.get(i, i_mask))
            .sum();

        if j_mask != 0 {
            let s = (2.0 * cut).max(0.0);
            let d = 2.0 * alpha * s + truth_term;
            consider(d, &|| {
                Certificate::disconnect(
                    mask_to_vec(t_mask),
                    mask_to_vec(i_mask),
                    mask_to_vec(j_mask),
                )
            });
        }

        let zero_len = {
            let a = i_mask.count_ones() as usize;
            let b = j_mask.count_ones() as usize;
            a * a.saturating_sub(1) + b * b.saturating_sub(1) + size
        };
        if zero_len < n * n {
            let s = (w_t - 2.0 * cut).max(0.0);
            let d = 2.0 * alpha * s + truth_term;
            consider(d, &|| {
                Certificate::bipartite(
                    mask_to_vec(t_mask),
                    mask_to_vec(i_mask),
                    mask_to_vec(j_mask),
                )
            });
        }

        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }

    for i in 0..n {
        if t_mask & (1usize << i) == 0 {
            let s = (2.0 * rows.get(i, t_mask)).max(0.0);
            let d = 2.0 * alpha * s + truth_term;
            consider(d, &|| Certificate::isolated_zero_node(mask_to_vec(t_mask), i));
        }
    }

    best
}

/// Build the degenerate instance realizing a certificate's distance: zero the
/// certificate's entries and spread the removed weight uniformly over the
/// remaining ones; zero the off-support truth components and move their mass
/// onto the largest-magnitude support entry, preserving its sign.
pub fn realize_nearest(instance: &Instance, certificate: &Certificate) -> Instance {
    let n = instance.n();
    let mut c = instance.weights().entries().to_vec();
    let zero_set = certificate.zero_set();
    let mut removed = 0.0;
    for &(i, j) in &zero_set {
        removed += c[i * n + j];
        c[i * n + j] = 0.0;
    }
    let free = n * n - zero_set.len();
    debug_assert!(free > 0, "certificates never cover every entry");
    if removed > 0.0 {
        let add = removed / free as f64;
        let mut in_zero = vec![false; n * n];
        for &(i, j) in &zero_set {
            in_zero[i * n + j] = true;
        }
        for (k, v) in c.iter_mut().enumerate() {
            if !in_zero[k] {
                *v += add;
            }
        }
    }

    let truth = instance.truth().values();
    let mut u = vec![0.0; n];
    let mut moved = 0.0;
    for (i, &v) in truth.iter().enumerate() {
        if certificate.support.contains(&i) {
            u[i] = v;
        } else {
            moved += v.abs();
        }
    }
    if moved > 0.0 {
        let receiver = *certificate
            .support
            .iter()
            .max_by(|&&a, &&b| {
                truth[a].abs().partial_cmp(&truth[b].abs()).unwrap().then(b.cmp(&a))
            })
            .expect("support is nonempty");
        let sign = if truth[receiver] < 0.0 { -1.0 } else { 1.0 };
        u[receiver] += sign * moved;
    }

    Instance::pre_normalized(WeightMatrix::from_raw(n, c), GroundTruth::new(u))
}

/// Weight at which the metric's minimum over instances bottoms out at
/// `n / (4 alpha)`; also the boundary of the first closed-form regime.
pub fn alpha_star(n: usize) -> f64 {
    let n = n as f64;
    (n * n - 5.0 * n + 4.0) / (n * n - 3.0 * n - 2.0)
}

/// Weight at which the uniform-weight instance is the unique minimizer.
pub fn alpha_diamond(n: usize) -> f64 {
    n as f64 / (n as f64 + 2.0)
}

/// The six affine pieces (in the off-diagonal level c) whose lower envelope is
/// the worst-case distance to the degenerate set: two increasing pieces from
/// disconnecting cuts, four decreasing ones from bipartite zero patterns on
/// supports of size 4, 3, 2, 1.
fn envelope_lines(n: usize, alpha: f64) -> [(f64, f64); 6] {
    let nf = n as f64;
    let beta = 2.0 * (1.0 - alpha);
    [
        (beta * (nf - 2.0) / nf, 4.0 * alpha),
        (0.0, 4.0 * alpha * (nf - 1.0)),
        (beta * (nf - 4.0) / nf + 8.0 * alpha / nf, -8.0 * alpha * (nf - 2.0)),
        (beta * (nf - 3.0) / nf + 6.0 * alpha / nf, -2.0 * alpha * (3.0 * nf - 5.0)),
        (beta * (nf - 2.0) / nf + 4.0 * alpha / nf, -4.0 * alpha * (nf - 1.0)),
        (beta * (nf - 1.0) / nf + 2.0 * alpha / nf, -2.0 * alpha * (nf - 1.0)),
    ]
}

fn envelope_min(lines: &[(f64, f64); 6], c: f64) -> f64 {
    lines.iter().map(|&(a, b)| a + b * c).fold(f64::INFINITY, f64::min)
}

/// Minimum possible metric value over all normalized instances (n >= 5).
pub fn metric_min(n: usize, alpha: f64) -> Result<f64> {
    metric_min_argmax(n, alpha).map(|(v, _)| v)
}

/// [`metric_min`] together with the maximizing off-diagonal weight level `c`,
/// which identifies an extremal instance: `C_ij = c` off the diagonal,
/// `C_ii = 1/n - (n-1) c`, `|u*_i| = 1/n`. The maximum of the envelope sits at
/// an interval endpoint or a pairwise intersection of the six lines; all
/// candidates are evaluated.
pub fn metric_min_argmax(n: usize, alpha: f64) -> Result<(f64, f64)> {
    if n < 5 {
        return Err(Error::Hypothesis(format!("metric_min needs n >= 5, got {n}")));
    }
    check_unit("alpha", alpha)?;
    let lines = envelope_lines(n, alpha);
    let c_max = 1.0 / (n as f64 * (n as f64 - 1.0));
    let mut candidates = vec![0.0, c_max];
    for i in 0..6 {
        for j in (i + 1)..6 {
            let (a1, b1) = lines[i];
            let (a2, b2) = lines[j];
            if b1 != b2 {
                let c = (a2 - a1) / (b1 - b2);
                if c > 0.0 && c < c_max {
                    candidates.push(c);
                }
            }
        }
    }
    let (mut best_g, mut best_c) = (f64::NEG_INFINITY, 0.0);
    for &c in &candidates {
        let g = envelope_min(&lines, c);
        if g > best_g {
            best_g = g;
            best_c = c;
        }
    }
    Ok((invert(best_g), best_c))
}

/// Which extremal-instance shape to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremalKind {
    /// Zero diagonal, uniform off-diagonal weights; the unique minimizer at
    /// [`alpha_star`] up to truth sign flips.
    Star,
    /// Uniform weights everywhere; the unique minimizer at [`alpha_diamond`].
    Diamond,
}

/// Whether the instance is the canonical minimizer of the given kind, up to
/// sign flips of the truth components. Entries are compared within 1e-12.
pub fn easiest_instances_check(instance: &Instance, kind: ExtremalKind) -> Result<bool> {
    if !instance.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let n = instance.n();
    if n < 5 {
        return Err(Error::Hypothesis(format!("extremal instances need n >= 5, got {n}")));
    }
    let tol = 1e-12;
    let nf = n as f64;
    if !instance.truth().values().iter().all(|v| (v.abs() - 1.0 / nf).abs() <= tol) {
        return Ok(false);
    }
    let (diag, off) = match kind {
        ExtremalKind::Star => (0.0, 1.0 / (nf * (nf - 1.0))),
        ExtremalKind::Diamond => (1.0 / (nf * nf), 1.0 / (nf * nf)),
    };
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { diag } else { off };
            if (instance.weights().get(i, j) - want).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Closed-form metric of the one-parameter family on a graph with
/// `edge_count` edges and an independent support of size `m` in dimension `n`.
/// The distance is the cheapest of: removing one self-loop and concentrating
/// the truth there, splitting off one support node and zeroing its truth, or
/// disconnecting one support node from the other `m - 1`.
pub fn metric_one_param(
    n: usize,
    m: usize,
    edge_count: usize,
    eps: f64,
    alpha: f64,
) -> Result<f64> {
    if m < 5 || n < m {
        return Err(Error::Hypothesis(format!("need n >= m >= 5, got n = {n}, m = {m}")));
    }
    check_unit("eps", eps)?;
    check_unit("alpha", alpha)?;
    let mf = m as f64;
    let z = 2.0 * edge_count as f64 + n as f64 + mf * (mf - 1.0) * eps;
    let d = (2.0 * alpha / z + 2.0 * (1.0 - alpha) * (mf - 1.0) / mf)
        .min(4.0 * alpha * eps / z + 2.0 * (1.0 - alpha) * (mf - 2.0) / mf)
        .min(4.0 * alpha * (mf - 1.0) * eps / z);
    Ok(invert(d))
}

/// Metric with the weight matrix held fixed: only the truth vector may move,
/// so a support `T` is admissible iff the weight support graph restricted to
/// `T` is disconnected or bipartite, or some node outside `T` has no edge into
/// `T`. Returns 0 when no support is admissible (e.g. strictly positive
/// weights) and infinity when the full support already is.
pub fn metric_fixed_c(instance: &Instance) -> Result<f64> {
    if !instance.is_normalized() {
        return Err(Error::NotNormalized);
    }
    instance.ensure_nonzero_truth()?;
    let n = instance.n();
    if n > 20 {
        return Err(Error::EnumerationLimit { n, limit: 20 });
    }
    let g = graph::build_graph(instance);
    let truth = instance.truth().values();
    let total_abs: f64 = truth.iter().map(|v| v.abs()).sum();
    let mut best = f64::INFINITY;
    for t_mask in 1usize..(1 << n) {
        let t = mask_to_vec(t_mask);
        let t_mass = (total_abs - t.iter().map(|&i| truth[i].abs()).sum::<f64>()).max(0.0);
        let d = 2.0 * t_mass;
        if d >= best {
            continue;
        }
        let admissible = graph::induced_components(&g, &t).len() != 1
            || graph::bipartiteness(&g, &t).is_bipartite()
            || (0..n)
                .any(|i| t_mask & (1usize << i) == 0 && t.iter().all(|&j| !g.has_edge(i, j)));
        if admissible {
            best = d;
        }
    }
    Ok(invert(best))
}

// ---------------------------------------------------------------------------
// Metric over the eps-floored robust degenerate set
// ---------------------------------------------------------------------------

/// Enumeration cap for [`metric_sd_eps`]; the pattern sweep is exponential in
/// `n(n+1)/2`, so this is a theory-demonstration operation.
pub const SD_EPS_LIMIT: usize = 6;

const SD_EPS_MAX_SMALL_CELLS: usize = 12;

/// One resolved choice for the free (outside the support block) entries:
/// total excluded mass, total lift cost, floored ordered-entry count, and the
/// unordered cells kept in the pattern.
#[derive(Clone, Debug)]
struct Trade {
    excluded: f64,
    lifted: f64,
    ordered: usize,
    cells: Vec<(usize, usize)>,
}

/// Per-support data for the free entries: every feasible undominated trade.
fn free_entry_trades(
    weights: &WeightMatrix,
    eps: f64,
    t_mask: usize,
    n: usize,
) -> Result<Vec<Trade>> {
    let in_t = |i: usize| t_mask & (1usize << i) != 0;

    // base: always-included cells (value >= eps) cost nothing
    let mut base_cells: Vec<(usize, usize)> = Vec::new();
    let mut base_lift = 0.0;
    let mut base_ordered = 0usize;
    // decisions: cells with value strictly inside (0, eps)
    struct Small {
        cell: (usize, usize),
        mass: f64,
        lift: f64,
        ordered: usize,
        cover_row: Option<usize>,
    }
    let mut smalls: Vec<Small> = Vec::new();

    for i in 0..n {
        for j in i..n {
            if in_t(i) && in_t(j) {
                continue; // support block handled by the pattern sweep
            }
            let w = if i == j { 1.0 } else { 2.0 };
            let v = weights.get(i, j);
            if v >= eps {
                base_cells.push((i, j));
                base_ordered += w as usize;
            } else if v > 0.0 {
                smalls.push(Small {
                    cell: (i, j),
                    mass: w * v,
                    lift: w * (eps - v),
                    ordered: w as usize,
                    cover_row: None,
                });
            }
        }
    }

    // Isolated-node exclusion: every node outside T needs an edge into T.
    for i in (0..n).filter(|&i| !in_t(i)) {
        let covered = base_cells
            .iter()
            .any(|&(a, b)| (a == i && in_t(b)) || (b == i && in_t(a)));
        if covered {
            continue;
        }
        let mut candidates: Vec<usize> = Vec::new();
        for (k, s) in smalls.iter().enumerate() {
            let (a, b) = s.cell;
            if (a == i && in_t(b)) || (b == i && in_t(a)) {
                candidates.push(k);
            }
        }
        if candidates.is_empty() {
            // lift a zero entry to eps; the lexicographically first support
            // column is as good as any
            let j = mask_to_vec(t_mask)[0];
            let cell = if i < j { (i, j) } else { (j, i) };
            base_cells.push(cell);
            base_lift += 2.0 * eps;
            base_ordered += 2;
        } else {
            for k in candidates {
                smalls[k].cover_row = Some(i);
            }
        }
    }

    if smalls.len() > SD_EPS_MAX_SMALL_CELLS {
        return Err(Error::ParameterRange(format!(
            "metric_sd_eps: {} entries in (0, eps); limit {}",
            smalls.len(),
            SD_EPS_MAX_SMALL_CELLS
        )));
    }

    let cover_rows: Vec<usize> = {
        let mut r: Vec<usize> = smalls.iter().filter_map(|s| s.cover_row).collect();
        r.sort_unstable();
        r.dedup();
        r
    };

    let mut trades: Vec<Trade> = Vec::new();
    'subsets: for include in 0usize..(1 << smalls.len()) {
        for &row in &cover_rows {
            let ok = smalls.iter().enumerate().any(|(k, s)| {
                include & (1usize << k) != 0 && s.cover_row == Some(row)
            });
            if !ok {
                continue 'subsets;
            }
        }
        let mut t = Trade {
            excluded: 0.0,
            lifted: base_lift,
            ordered: base_ordered,
            cells: base_cells.clone(),
        };
        for (k, s) in smalls.iter().enumerate() {
            if include & (1usize << k) != 0 {
                t.lifted += s.lift;
                t.ordered += s.ordered;
                t.cells.push(s.cell);
            } else {
                t.excluded += s.mass;
            }
        }
        let dominated = trades.iter().any(|o| {
            o.excluded <= t.excluded && o.lifted <= t.lifted && o.ordered <= t.ordered
        });
        if !dominated {
            trades.retain(|o| {
                !(t.excluded <= o.excluded && t.lifted <= o.lifted && t.ordered <= o.ordered)
            });
            trades.push(t);
        }
    }
    Ok(trades)
}

/// Disconnectedness with all-non-bipartite components for a pattern on `T`
/// given as adjacency masks plus a self-loop mask.
fn sd_pattern_ok(t_nodes: &[usize], adj: &[usize], loops: usize) -> bool {
    let mut seen = 0usize;
    let mut comps: Vec<usize> = Vec::new();
    for &start in t_nodes {
        if seen & (1usize << start) != 0 {
            continue;
        }
        let mut comp = 1usize << start;
        loop {
            let mut grown = comp;
            let mut m = comp;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                grown |= adj[v];
            }
            if grown == comp {
                break;
            }
            comp = grown;
        }
        seen |= comp;
        comps.push(comp);
    }
    if comps.len() < 2 {
        return false;
    }
    comps.iter().all(|&c| !mask_subgraph_bipartite(c, adj, loops))
}

fn mask_subgraph_bipartite(comp: usize, adj: &[usize], loops: usize) -> bool {
    if comp & loops != 0 {
        return false; // self-loop is an odd cycle
    }
    let mut color = vec![0i8; adj.len()];
    let mut m = comp;
    while m != 0 {
        let start = m.trailing_zeros() as usize;
        m &= m - 1;
        if color[start] != 0 {
            continue;
        }
        color[start] = 1;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let mut nb = adj[v] & comp;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if color[w] == 0 {
                    color[w] = -color[v];
                    stack.push(w);
                } else if color[w] == color[v] {
                    return false;
                }
            }
        }
    }
    true
}

/// Metric restricted to the eps-floored robust degenerate set: the nearest
/// instance must have a disconnected support subgraph with every component
/// non-bipartite, no isolated zero-support node, and every nonzero weight and
/// truth entry at least `eps`. Returns distance infinity (value 0) when the
/// floors make the whole set unreachable.
pub fn metric_sd_eps(instance: &Instance, alpha: f64, eps: f64) -> Result<MetricResult> {
    if !instance.is_normalized() {
        return Err(Error::NotNormalized);
    }
    instance.ensure_nonzero_truth()?;
    let n = instance.n();
    if n > SD_EPS_LIMIT {
        return Err(Error::EnumerationLimit { n, limit: SD_EPS_LIMIT });
    }
    check_unit("alpha", alpha)?;
    if eps <= 0.0 || eps > 1.0 {
        return Err(Error::ParameterRange(format!("eps = {eps} outside (0, 1]")));
    }

    let truth = instance.truth().values();
    let weights = instance.weights();
    let total_abs: f64 = truth.iter().map(|v| v.abs()).sum();

    struct Best {
        distance: f64,
        t_mask: usize,
        cells: Vec<(usize, usize)>,
    }
    let mut best: Option<Best> = None;

    for t_mask in 1usize..(1 << n) {
        let t_nodes = mask_to_vec(t_mask);
        if t_nodes.len() < 2 {
            continue; // a disconnected support subgraph needs two nodes
        }
        if eps * t_nodes.len() as f64 > 1.0 + 1e-15 {
            continue; // truth floors infeasible
        }
        let in_t_abs: f64 = t_nodes.iter().map(|&i| truth[i].abs()).sum();
        let t_removed = (total_abs - in_t_abs).max(0.0);
        let t_lift: f64 = t_nodes.iter().map(|&i| (eps - truth[i].abs()).max(0.0)).sum();
        let d_truth = 2.0 * t_removed.max(t_lift);

        let trades = free_entry_trades(weights, eps, t_mask, n)?;
        if trades.is_empty() {
            continue;
        }
        let min_excluded = trades.iter().map(|t| t.excluded).fold(f64::INFINITY, f64::min);
        let min_lifted = trades.iter().map(|t| t.lifted).fold(f64::INFINITY, f64::min);

        let cells: Vec<(usize, usize)> = t_nodes
            .iter()
            .flat_map(|&i| t_nodes.iter().filter(move |&&j| j >= i).map(move |&j| (i, j)))
            .collect();

        for pattern in 0usize..(1 << cells.len()) {
            let mut adj = vec![0usize; n];
            let mut loops = 0usize;
            let mut s0 = 0.0;
            let mut l0 = 0.0;
            let mut ordered0 = 0usize;
            for (k, &(i, j)) in cells.iter().enumerate() {
                let w = if i == j { 1.0 } else { 2.0 };
                let v = weights.get(i, j);
                if pattern & (1usize << k) != 0 {
                    l0 += w * (eps - v).max(0.0);
                    ordered0 += w as usize;
                    if i == j {
                        loops |= 1usize << i;
                    } else {
                        adj[i] |= 1usize << j;
                        adj[j] |= 1usize << i;
                    }
                } else {
                    s0 += w * v;
                }
            }
            // cheap lower bound before the structural check
            let floor = alpha * 2.0 * (s0 + min_excluded).max(l0 + min_lifted)
                + (1.0 - alpha) * d_truth;
            if best.as_ref().is_some_and(|b| floor >= b.distance) {
                continue;
            }
            if !sd_pattern_ok(&t_nodes, &adj, loops) {
                continue;
            }
            for tr in &trades {
                if eps * (ordered0 + tr.ordered) as f64 > 1.0 + 1e-15 {
                    continue;
                }
                let d_c = 2.0 * (s0 + tr.excluded).max(l0 + tr.lifted);
                let d = alpha * d_c + (1.0 - alpha) * d_truth;
                if best.as_ref().is_none_or(|b| d < b.distance) {
                    let mut chosen: Vec<(usize, usize)> = cells
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| pattern & (1usize << k) != 0)
                        .map(|(_, &c)| c)
                        .collect();
                    chosen.extend_from_slice(&tr.cells);
                    best = Some(Best { distance: d, t_mask, cells: chosen });
                }
            }
        }
    }

    match best {
        None => Ok(MetricResult {
            value: 0.0,
            distance: f64::INFINITY,
            certificate: None,
            nearest: None,
        }),
        Some(b) => {
            let nearest = realize_sd_eps(instance, eps, b.t_mask, &b.cells);
            let t_nodes = mask_to_vec(b.t_mask);
            // the pattern's components on T give a disconnect certificate
            let mut adj = vec![0usize; n];
            for &(i, j) in &b.cells {
                if b.t_mask & (1usize << i) != 0 && b.t_mask & (1usize << j) != 0 && i != j {
                    adj[i] |= 1usize << j;
                    adj[j] |= 1usize << i;
                }
            }
            let mut comp = 1usize << t_nodes[0];
            loop {
                let mut grown = comp;
                let mut m = comp;
                while m != 0 {
                    let v = m.trailing_zeros() as usize;
                    m &= m - 1;
                    grown |= adj[v] & b.t_mask;
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            let part_i = mask_to_vec(comp);
            let part_j = mask_to_vec(b.t_mask & !comp);
            let certificate = Certificate::disconnect(t_nodes, part_i, part_j);
            Ok(MetricResult {
                value: invert(b.distance),
                distance: b.distance,
                certificate: Some(certificate),
                nearest: Some(nearest),
            })
        }
    }
}

/// Water-filling realization of the nearest eps-floored instance for a chosen
/// support pattern: every kept cell gets `max(C_e, eps)`, then the total mass
/// is balanced to one by topping up the first kept cell or draining slack in
/// lexicographic order.
fn realize_sd_eps(
    instance: &Instance,
    eps: f64,
    t_mask: usize,
    cells: &[(usize, usize)],
) -> Instance {
    let n = instance.n();
    let weights = instance.weights();
    let mut kept = cells.to_vec();
    kept.sort_unstable();
    kept.dedup();

    let mut values: Vec<f64> = kept
        .iter()
        .map(|&(i, j)| weights.get(i, j).max(eps))
        .collect();
    let w = |&(i, j): &(usize, usize)| if i == j { 1.0 } else { 2.0 };
    let total: f64 = kept.iter().zip(&values).map(|(c, v)| w(c) * v).sum();
    if total <= 1.0 {
        values[0] += (1.0 - total) / w(&kept[0]);
    } else {
        let mut excess = total - 1.0;
        for (k, cell) in kept.iter().enumerate() {
            if excess <= 0.0 {
                break;
            }
            let slack = (values[k] - eps) * w(cell);
            let take = slack.min(excess);
            values[k] -= take / w(cell);
            excess -= take;
        }
        debug_assert!(excess <= 1e-12, "pattern was checked feasible");
    }
    let mut c = vec![0.0; n * n];
    for (k, &(i, j)) in kept.iter().enumerate() {
        c[i * n + j] = values[k];
        c[j * n + i] = values[k];
    }

    let truth = instance.truth().values();
    let t_nodes = mask_to_vec(t_mask);
    let mut u = vec![0.0; n];
    for &i in &t_nodes {
        let sign = if truth[i] < 0.0 { -1.0 } else { 1.0 };
        u[i] = sign * truth[i].abs().max(eps);
    }
    let total_u: f64 = u.iter().map(|v| v.abs()).sum();
    if total_u <= 1.0 {
        let receiver = *t_nodes
            .iter()
            .max_by(|&&a, &&b| {
                truth[a].abs().partial_cmp(&truth[b].abs()).unwrap().then(b.cmp(&a))
            })
            .expect("support nonempty");
        let sign = if u[receiver] < 0.0 { -1.0 } else { 1.0 };
        u[receiver] += sign * (1.0 - total_u);
    } else {
        let mut excess = total_u - 1.0;
        for &i in &t_nodes {
            if excess <= 0.0 {
                break;
            }
            let slack = u[i].abs() - eps;
            let take = slack.min(excess);
            u[i] -= u[i].signum() * take;
            excess -= take;
        }
        debug_assert!(excess <= 1e-12, "support was checked feasible");
    }

    Instance::pre_normalized(WeightMatrix::from_raw(n, c), GroundTruth::new(u))
}
