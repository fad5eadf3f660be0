//! The reduced m-dimensional problem behind the one-parameter family.
//!
//! Second-order critical points of the family instance correspond to those of
//!
//! ```text
//! f(x) = sum_i (x_i^2 - 1)^2 + eps * sum_{i != j} (x_i x_j - 1)^2
//! ```
//!
//! (ordered pairs), via the scaling `u_i = x_i / m` on the independent support
//! and zero elsewhere. This module evaluates the reduced derivatives, builds
//! the explicit spurious second-order points for small `eps` (the balanced
//! sign pattern for even `m`, the two-level cubic construction for odd `m`),
//! lifts reduced points to the full instance, and hunts critical points by
//! multistart Newton.

use crate::error::{Error, Result};
use crate::instance::Point;
use crate::linalg::{damped_newton_step, min_symmetric_eigenvalue};
use crate::rng::RandomStream;
use rand::Rng;

/// The reduced problem. `eps` may exceed 1: the benign regime claims need
/// `eps > 18/m`, which leaves `[0, 1]` for moderate `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedProblem {
    pub m: usize,
    pub eps: f64,
}

impl ReducedProblem {
    pub fn new(m: usize, eps: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::ParameterRange("m must be at least 1".into()));
        }
        if !(eps >= 0.0) {
            return Err(Error::ParameterRange(format!("eps = {eps} must be nonnegative")));
        }
        Ok(Self { m, eps })
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.m);
        let mut acc = 0.0;
        for i in 0..self.m {
            let r = x[i] * x[i] - 1.0;
            acc += r * r;
            for j in 0..self.m {
                if j != i {
                    let r = x[i] * x[j] - 1.0;
                    acc += self.eps * r * r;
                }
            }
        }
        acc
    }

    /// `g_i = 4 [ x_i^3 - x_i + eps sum_{j != i} x_j (x_i x_j - 1) ]`.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.m);
        (0..self.m)
            .map(|i| {
                let mut acc = x[i] * x[i] * x[i] - x[i];
                for j in 0..self.m {
                    if j != i {
                        acc += self.eps * x[j] * (x[i] * x[j] - 1.0);
                    }
                }
                4.0 * acc
            })
            .collect()
    }

    /// `H_ii = 4 [ 3 x_i^2 - 1 + eps sum_{j != i} x_j^2 ]`,
    /// `H_ij = 4 eps (2 x_i x_j - 1)`.
    pub fn hessian(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.m);
        let m = self.m;
        let mut h = vec![0.0; m * m];
        let sum_sq: f64 = x.iter().map(|v| v * v).sum();
        for i in 0..m {
            h[i * m + i] = 4.0 * (3.0 * x[i] * x[i] - 1.0 + self.eps * (sum_sq - x[i] * x[i]));
            for j in (i + 1)..m {
                let v = 4.0 * self.eps * (2.0 * x[i] * x[j] - 1.0);
                h[i * m + j] = v;
                h[j * m + i] = v;
            }
        }
        h
    }

    pub fn grad_inf_norm(&self, x: &[f64]) -> f64 {
        self.gradient(x).iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn min_hessian_eig(&self, x: &[f64]) -> f64 {
        min_symmetric_eigenvalue(&self.hessian(x), self.m)
    }
}

/// Embed a reduced point into the full instance coordinates: `u_i = x_i / m`
/// on the support, zero elsewhere. Stationarity and block definiteness of the
/// Hessian transfer between the two problems.
pub fn lift_to_full(x: &[f64], n: usize, support: &[usize]) -> Result<Point> {
    if support.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: support.len(), got: x.len() });
    }
    let m = x.len() as f64;
    let mut u = vec![0.0; n];
    for (&i, &v) in support.iter().zip(x.iter()) {
        if i >= n {
            return Err(Error::ParameterRange(format!("support node {i} outside [0, {n})")));
        }
        u[i] = v / m;
    }
    Point::new(u)
}

/// Balanced two-sign spurious point for even `m`: half the entries at `+a`,
/// half at `-a` with `a^2 = (1 - eps)/(1 + (m-1) eps)`. Exactly stationary;
/// the Hessian is positive definite whenever
/// `2 - (m+4) eps - (m-2)(m+1) eps^2 > 0`, which is required.
pub fn spurious_even(m: usize, eps: f64) -> Result<Vec<f64>> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::ParameterRange(format!("m = {m} must be even and >= 2")));
    }
    if !(eps >= 0.0) {
        return Err(Error::ParameterRange(format!("eps = {eps} must be nonnegative")));
    }
    let mf = m as f64;
    let pd_margin = 2.0 - (mf + 4.0) * eps - (mf - 2.0) * (mf + 1.0) * eps * eps;
    if pd_margin <= 0.0 {
        return Err(Error::ParameterRange(format!(
            "eps = {eps} violates the positive-definiteness condition for m = {m}"
        )));
    }
    let a = ((1.0 - eps) / (1.0 + (mf - 1.0) * eps)).sqrt();
    let mut x = vec![a; m];
    for v in x.iter_mut().skip(m / 2) {
        *v = -a;
    }
    Ok(x)
}

/// Two-level spurious point for odd `m`, with the cubic solve diagnostics.
#[derive(Debug, Clone)]
pub struct OddSpuriousPoint {
    /// `k` entries at `y1`, `k + 1` entries at `y2`, `k = (m-1)/2`.
    pub x: Vec<f64>,
    pub y1: f64,
    pub y2: f64,
    /// The solved quantity `(1 - eps) y2^2` and its admissible bracket.
    pub z: f64,
    pub bracket: (f64, f64),
}

/// All real roots of `a z^3 + b z^2 + c z + d`.
fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    debug_assert!(a != 0.0);
    let p = b / a;
    let q = c / a;
    let r = d / a;
    // depressed cubic t^3 + pp t + qq, z = t - p/3
    let pp = q - p * p / 3.0;
    let qq = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    let shift = -p / 3.0;
    let disc = (qq / 2.0) * (qq / 2.0) + (pp / 3.0) * (pp / 3.0) * (pp / 3.0);
    if disc > 0.0 {
        // one real root (Cardano)
        let s = -qq / 2.0 + disc.sqrt();
        let t = -qq / 2.0 - disc.sqrt();
        vec![s.cbrt() + t.cbrt() + shift]
    } else {
        // three real roots (trigonometric form)
        let rho = (-pp / 3.0).max(0.0).sqrt();
        if rho == 0.0 {
            return vec![shift];
        }
        let cos_arg = (-qq / (2.0 * rho * rho * rho)).clamp(-1.0, 1.0);
        let theta = cos_arg.acos() / 3.0;
        (0..3)
            .map(|k| 2.0 * rho * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
            .collect()
    }
}

/// Spurious second-order point for odd `m >= 3` and `eps < 1/(13(m+1))`.
///
/// Solves the cubic for `z = (1 - eps) y2^2`, keeping the root inside
/// `[1 - (2k+1) eps, 1 - (3k/2 + 1) eps]` (one Newton polish step), derives
/// `y1` from the stated ratio, and verifies stationarity, positive
/// definiteness, and the level ranges `y1 in [-2, -3/5]`, `y2 in [1/2, 1]`
/// before returning.
pub fn spurious_odd(m: usize, eps: f64) -> Result<OddSpuriousPoint> {
    if m < 3 || m % 2 != 1 {
        return Err(Error::ParameterRange(format!("m = {m} must be odd and >= 3")));
    }
    let mf = m as f64;
    if !(eps > 0.0 && eps < 1.0 / (13.0 * (mf + 1.0))) {
        return Err(Error::ParameterRange(format!(
            "eps = {eps} outside (0, 1/(13(m+1))) for m = {m}"
        )));
    }
    let k = (m - 1) / 2;
    let kf = k as f64;

    let a3 = (1.0 + kf * eps) * (1.0 + 2.0 * kf * eps);
    let a2 = -2.0 * (1.0 + kf * eps) * (1.0 + (kf - 1.0) * eps);
    let a1 = (1.0 + kf * eps)
        * (1.0 + (kf - 1.0) * eps)
        * (2.0 * kf * kf * eps * eps + 2.0 * kf * eps * eps - kf * eps - eps + 1.0);
    let a0 = -kf * kf * eps * eps * (1.0 + (kf - 1.0) * eps) * (1.0 - eps) * (1.0 - eps);

    let lo = 1.0 - (2.0 * kf + 1.0) * eps;
    let hi = 1.0 - (1.5 * kf + 1.0) * eps;
    let cubic = |z: f64| ((a3 * z + a2) * z + a1) * z + a0;
    let cubic_deriv = |z: f64| (3.0 * a3 * z + 2.0 * a2) * z + a1;

    let mut root = None;
    for z in cubic_real_roots(a3, a2, a1, a0) {
        if z >= lo - 1e-12 && z <= hi + 1e-12 {
            root = Some(z);
            break;
        }
    }
    let mut z = root.ok_or(Error::NoRootInBracket { m, eps })?;
    // one Newton polish step tightens the closed-form root to full precision
    let dz = cubic_deriv(z);
    if dz != 0.0 {
        z -= cubic(z) / dz;
    }

    let y2 = (z / (1.0 - eps)).sqrt();
    let y1 = y2 / (kf * eps) * ((1.0 + kf * eps) * z - (kf * kf * eps * eps + (kf - 1.0) * eps + 1.0))
        / (z + 1.0 + (kf - 1.0) * eps);

    if !(-2.0..=-0.6).contains(&y1) {
        return Err(Error::VerificationFailed(format!("y1 = {y1} outside [-2, -3/5]")));
    }
    if !(0.5..=1.0).contains(&y2) {
        return Err(Error::VerificationFailed(format!("y2 = {y2} outside [1/2, 1]")));
    }

    let mut x = vec![y1; m];
    for v in x.iter_mut().skip(k) {
        *v = y2;
    }
    let problem = ReducedProblem::new(m, eps)?;
    let grad_inf = problem.grad_inf_norm(&x);
    if grad_inf > 1e-8 {
        return Err(Error::VerificationFailed(format!("gradient norm {grad_inf} too large")));
    }
    let min_eig = problem.min_hessian_eig(&x);
    if min_eig <= 0.0 {
        return Err(Error::VerificationFailed(format!("Hessian not positive definite: {min_eig}")));
    }
    Ok(OddSpuriousPoint { x, y1, y2, z, bracket: (lo, hi) })
}

/// Classification of a converged reduced critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedClass {
    GlobalMin,
    SpuriousSosp,
    StrictSaddle,
}

#[derive(Debug, Clone)]
pub struct ReducedCriticalPoint {
    pub x: Vec<f64>,
    pub grad_inf_norm: f64,
    pub min_hessian_eig: f64,
    pub class: ReducedClass,
}

impl ReducedCriticalPoint {
    pub fn is_spurious(&self) -> bool {
        self.class == ReducedClass::SpuriousSosp
    }
}

/// Multistart Newton configuration.
#[derive(Debug, Clone, Copy)]
pub struct NewtonConfig {
    pub max_iters: usize,
    pub grad_tol: f64,
    /// Singular values below this are dropped in the pseudo-inverse step.
    pub sv_cutoff: f64,
    /// Newton steps are clipped to this Euclidean norm.
    pub max_step_norm: f64,
    /// Converged roots closer than this (l2) are considered the same point.
    pub dedup_radius: f64,
    /// Eigenvalue slack separating second-order points from saddles.
    pub eig_tol: f64,
    /// Infinity-norm radius around `+-1` classified as the global minimum.
    pub global_radius: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            max_iters: 100,
            grad_tol: 1e-11,
            sv_cutoff: 1e-10,
            max_step_norm: 1.0,
            dedup_radius: 1e-6,
            eig_tol: 1e-8,
            global_radius: 1e-6,
        }
    }
}

/// Outcome of a multistart critical-point hunt.
#[derive(Debug, Clone)]
pub struct MultistartReport {
    /// Distinct critical points, in order of first discovery.
    pub points: Vec<ReducedCriticalPoint>,
    pub converged_starts: usize,
    pub dropped_starts: usize,
}

impl MultistartReport {
    pub fn spurious_count(&self) -> usize {
        self.points.iter().filter(|p| p.is_spurious()).count()
    }
}

/// Newton iterations from `starts` uniform points in `[-2, 2]^m`; converged
/// roots are deduplicated and classified by the reduced Hessian. Non-converged
/// starts are dropped and counted. Deterministic for a fixed stream,
/// independent of the parallel schedule.
pub fn find_critical_points_reduced(
    problem: &ReducedProblem,
    starts: usize,
    stream: RandomStream,
    config: &NewtonConfig,
) -> MultistartReport {
    use rayon::prelude::*;
    let m = problem.m;
    let roots: Vec<Option<Vec<f64>>> = (0..starts as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream.substream(trial).rng();
            let mut x: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
            for _ in 0..config.max_iters {
                let g = problem.gradient(&x);
                let ginf = g.iter().map(|v| v.abs()).fold(0.0, f64::max);
                if ginf <= config.grad_tol {
                    return Some(x);
                }
                let h = problem.hessian(&x);
                let step = damped_newton_step(&h, &g, m, config.sv_cutoff, config.max_step_norm);
                for (xi, si) in x.iter_mut().zip(step.iter()) {
                    *xi += si;
                }
                if x.iter().any(|v| !v.is_finite()) {
                    return None;
                }
            }
            None
        })
        .collect();

    let mut report = MultistartReport { points: Vec::new(), converged_starts: 0, dropped_starts: 0 };
    let mut reps: Vec<Vec<f64>> = Vec::new();
    for root in roots.into_iter() {
        let Some(x) = root else {
            report.dropped_starts += 1;
            continue;
        };
        report.converged_starts += 1;
        let fresh = reps.iter().all(|r| {
            let d2: f64 = r.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum();
            d2.sqrt() > config.dedup_radius
        });
        if fresh {
            reps.push(x.clone());
            let grad_inf_norm = problem.grad_inf_norm(&x);
            let min_hessian_eig = problem.min_hessian_eig(&x);
            let class = if min_hessian_eig < -config.eig_tol {
                ReducedClass::StrictSaddle
            } else {
                let to_plus = x.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
                let to_minus = x.iter().map(|v| (v + 1.0).abs()).fold(0.0, f64::max);
                if to_plus.min(to_minus) <= config.global_radius {
                    ReducedClass::GlobalMin
                } else {
                    ReducedClass::SpuriousSosp
                }
            };
            report.points.push(ReducedCriticalPoint { x, grad_inf_norm, min_hessian_eig, class });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{one_param_instance, split_graph};
    use crate::instance::Point;

    #[test]
    fn all_ones_is_stationary() {
        let p = ReducedProblem::new(6, 0.3).unwrap();
        let x = vec![1.0; 6];
        assert!(p.grad_inf_norm(&x) < 1e-15);
        assert_eq!(p.objective(&x), 0.0);
    }

    #[test]
    fn origin_is_a_strict_saddle() {
        let p = ReducedProblem::new(4, 0.2).unwrap();
        let x = vec![0.0; 4];
        assert!(p.grad_inf_norm(&x) < 1e-15);
        let h = p.hessian(&x);
        // diag -4, off-diag -4 eps
        assert!((h[0] + 4.0).abs() < 1e-15);
        assert!((h[1] + 4.0 * 0.2).abs() < 1e-15);
        assert!(p.min_hessian_eig(&x) < -1.0);
    }

    #[test]
    fn reduced_derivatives_match_finite_differences() {
        let p = ReducedProblem::new(5, 0.37).unwrap();
        let x = [0.9, -1.1, 0.3, 1.7, -0.2];
        let h = 1e-6;
        let g = p.gradient(&x);
        for i in 0..5 {
            let mut up = x;
            let mut dn = x;
            up[i] += h;
            dn[i] -= h;
            let fd = (p.objective(&up) - p.objective(&dn)) / (2.0 * h);
            assert!((g[i] - fd).abs() / g[i].abs().max(1.0) < 1e-6, "{} vs {fd}", g[i]);
        }
        let hess = p.hessian(&x);
        for i in 0..5 {
            let mut up = x;
            let mut dn = x;
            up[i] += h;
            dn[i] -= h;
            let gp = p.gradient(&up);
            let gm = p.gradient(&dn);
            for j in 0..5 {
                let fd = (gp[j] - gm[j]) / (2.0 * h);
                let a = hess[i * 5 + j];
                assert!((a - fd).abs() / a.abs().max(1.0) < 1e-5, "{a} vs {fd}");
            }
        }
    }

    #[test]
    fn spurious_even_point_is_a_strict_second_order_point() {
        // m = 2, eps = 0.2: level sqrt(2/3)
        let x = spurious_even(2, 0.2).unwrap();
        assert!((x[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let p = ReducedProblem::new(2, 0.2).unwrap();
        assert!(p.grad_inf_norm(&x) < 1e-12);
        assert!(p.min_hessian_eig(&x) > 0.0);

        for m in [4usize, 6, 8] {
            let eps = 0.8 / (m as f64 + 1.0);
            let x = spurious_even(m, eps).unwrap();
            let p = ReducedProblem::new(m, eps).unwrap();
            assert!(p.grad_inf_norm(&x) < 1e-10);
            assert!(p.min_hessian_eig(&x) > 0.0, "m = {m}");
        }
    }

    #[test]
    fn spurious_even_rejects_out_of_range_eps() {
        // violates 2 - (m+4) eps - (m-2)(m+1) eps^2 > 0
        assert!(spurious_even(4, 0.5).is_err());
        assert!(spurious_even(3, 0.1).is_err()); // odd m
    }

    #[test]
    fn spurious_even_eig_crosses_near_the_threshold() {
        // min eig stays positive below 1/(m+1) and the PD margin shrinks
        let m = 4;
        let p_low = ReducedProblem::new(m, 0.10).unwrap();
        let x = spurious_even(m, 0.10).unwrap();
        let e_low = p_low.min_hessian_eig(&x);
        let eps_hi = 0.199; // just under 1/(m+1) = 0.2
        let p_hi = ReducedProblem::new(m, eps_hi).unwrap();
        let x = spurious_even(m, eps_hi).unwrap();
        let e_hi = p_hi.min_hessian_eig(&x);
        assert!(e_low > e_hi && e_hi > 0.0, "{e_low} vs {e_hi}");
    }

    #[test]
    fn spurious_odd_construction_verifies() {
        let r = spurious_odd(3, 0.01).unwrap();
        let p = ReducedProblem::new(3, 0.01).unwrap();
        assert!(p.grad_inf_norm(&r.x) < 1e-8);
        assert!(p.min_hessian_eig(&r.x) > 0.0);
        assert!((-2.0..=-0.6).contains(&r.y1));
        assert!((0.5..=1.0).contains(&r.y2));
        // bracket for k = 1: [1 - 3 eps, 1 - 2.5 eps]
        assert!(r.z >= 1.0 - 3.0 * 0.01 - 1e-12 && r.z <= 1.0 - 2.5 * 0.01 + 1e-12);

        for m in [5usize, 7] {
            let eps = 0.5 / (13.0 * (m as f64 + 1.0));
            let r = spurious_odd(m, eps).unwrap();
            let p = ReducedProblem::new(m, eps).unwrap();
            assert!(p.grad_inf_norm(&r.x) < 1e-8, "m = {m}");
            assert!(p.min_hessian_eig(&r.x) > 0.0, "m = {m}");
        }
    }

    #[test]
    fn lift_preserves_stationarity_and_block_structure() {
        let n = 8;
        let m = 6;
        let graph = split_graph(n, m).unwrap();
        let support: Vec<usize> = (0..m).collect();
        let eps = 0.8 / (m as f64 + 1.0);
        let inst = one_param_instance(&graph, &support, eps).unwrap();
        let x = spurious_even(m, eps).unwrap();
        let u = lift_to_full(&x, n, &support).unwrap();
        let g = inst.gradient(&u).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-10), "lifted gradient {g:?}");
        let h = inst.hessian(&u).unwrap();
        // off-support block is diagonal with positive entries
        for i in m..n {
            for j in 0..n {
                if j != i {
                    assert!(h[i * n + j].abs() < 1e-15, "H[{i}][{j}] = {}", h[i * n + j]);
                }
            }
            assert!(h[i * n + i] > 0.0);
        }
        // global minimum of the family lifts from the all-ones point
        let u = lift_to_full(&vec![1.0; m], n, &support).unwrap();
        assert!(inst.solution_distance(&u).unwrap() < 1e-15);
    }

    #[test]
    fn multistart_finds_only_global_minima_in_the_benign_regime() {
        // m small, eps far above 18/m
        let p = ReducedProblem::new(4, 5.0).unwrap();
        let report =
            find_critical_points_reduced(&p, 400, RandomStream::new(21, 0), &NewtonConfig::default());
        assert_eq!(report.spurious_count(), 0);
        let globals = report
            .points
            .iter()
            .filter(|pt| pt.class == ReducedClass::GlobalMin)
            .count();
        assert!(globals >= 1);
    }

    #[test]
    fn multistart_finds_the_even_constructor_points() {
        let m = 2;
        let eps = 0.2;
        let p = ReducedProblem::new(m, eps).unwrap();
        let report =
            find_critical_points_reduced(&p, 500, RandomStream::new(22, 0), &NewtonConfig::default());
        let expected = spurious_even(m, eps).unwrap();
        let found = report.points.iter().any(|pt| {
            pt.is_spurious()
                && pt
                    .x
                    .iter()
                    .zip(&expected)
                    .all(|(a, b)| (a.abs() - b.abs()).abs() < 1e-6)
        });
        assert!(found, "constructor point not among {:?}", report.points);
    }

    #[test]
    fn even_constructor_orbit_counts_choose_m_half() {
        // permuting the balanced sign pattern yields C(m, m/2) distinct
        // stationary points, all second-order
        for m in [2usize, 4, 6, 8] {
            let eps = 0.9 / (m as f64 + 1.0);
            let base = spurious_even(m, eps).unwrap();
            let problem = ReducedProblem::new(m, eps).unwrap();
            let a = base[0].abs();
            let mut count = 0usize;
            for mask in 0usize..(1 << m) {
                if mask.count_ones() as usize != m / 2 {
                    continue;
                }
                let x: Vec<f64> =
                    (0..m).map(|i| if mask >> i & 1 == 1 { a } else { -a }).collect();
                assert!(problem.grad_inf_norm(&x) < 1e-12);
                assert!(problem.min_hessian_eig(&x) > 0.0);
                count += 1;
            }
            let choose: usize = (1..=m).product::<usize>()
                / ((1..=m / 2).product::<usize>() * (1..=m / 2).product::<usize>());
            assert_eq!(count, choose, "m = {m}");
        }
    }

    #[test]
    fn no_spurious_threshold_lies_in_the_proved_bracket() {
        // smallest eps at which the multistart census finds no spurious
        // second-order point, swept over a coarse grid
        for m in [6usize, 7] {
            let mf = m as f64;
            let lo = 1.0 / (13.0 * (mf + 1.0));
            let hi = 18.0 / mf;
            let grid = [0.02, 0.05, 0.09, 0.12, 0.16, 0.2, 0.3, 0.5, 1.0, 1.6, 2.2, 2.5];
            let mut smallest_clean = None;
            for &eps in &grid {
                let problem = ReducedProblem::new(m, eps).unwrap();
                let report = find_critical_points_reduced(
                    &problem,
                    2500,
                    RandomStream::new(24, m as u64),
                    &NewtonConfig::default(),
                );
                if report.spurious_count() == 0 {
                    smallest_clean = Some(eps);
                    break;
                }
            }
            let eps = smallest_clean.expect("some grid point is spurious-free");
            assert!(
                (lo..=hi).contains(&eps),
                "m = {m}: first spurious-free eps {eps} outside [{lo}, {hi}]"
            );
        }
    }

    #[test]
    fn one_dimensional_critical_points_are_the_cubic_roots() {
        let p = ReducedProblem::new(1, 0.7).unwrap();
        let report =
            find_critical_points_reduced(&p, 200, RandomStream::new(23, 0), &NewtonConfig::default());
        for pt in &report.points {
            let v = pt.x[0];
            assert!(
                v.abs() < 1e-8 || (v.abs() - 1.0).abs() < 1e-8,
                "unexpected critical point {v}"
            );
        }
    }

    #[test]
    fn lift_dimension_checks() {
        assert!(lift_to_full(&[1.0, 2.0], 4, &[0]).is_err());
        assert!(lift_to_full(&[1.0], 2, &[5]).is_err());
        let u: Point = lift_to_full(&[1.0, -1.0], 4, &[1, 3]).unwrap();
        assert_eq!(u.values(), &[0.0, 0.5, 0.0, -0.5]);
    }
}
