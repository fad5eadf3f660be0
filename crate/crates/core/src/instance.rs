//! Instance representation and exact evaluation of the completion loss.
//!
//! An instance pairs a symmetric nonnegative weight matrix `C` with a ground
//! truth vector `u*`. The landscape is scale-free, so instances are normalized
//! to `||C||_1 = ||u*||_1 = 1` before analysis; every operation that assumes
//! normalization checks the flag and errors otherwise.
//!
//! Derivatives of the loss, with `C` symmetric and the diagonal term counted
//! once per ordered pair:
//!
//! ```text
//! grad_k  = 4 sum_j C_kj u_j (u_k u_j - u*_k u*_j)
//! H_kk    = 4 [ C_kk (3 u_k^2 - u*_k^2) + sum_{j != k} C_kj u_j^2 ]
//! H_kl    = 4 C_kl (2 u_k u_l - u*_k u*_l)        (k != l)
//! ```

use crate::error::{Error, Result};
use crate::tol;

/// Symmetric nonnegative weight matrix, dense row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl WeightMatrix {
    /// Build from row-major entries. Rejects negative entries and wrong sizes;
    /// does not symmetrize (see [`Instance::normalize`]).
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: entries.len() });
        }
        for i in 0..n {
            for j in 0..n {
                if entries[i * n + j] < 0.0 {
                    return Err(Error::NegativeWeight { row: i, col: j });
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Entry-wise l1 norm (sum of absolute values; entries are nonnegative).
    pub fn l1_norm(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (i + 1..n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub(crate) fn from_raw(n: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Self { n, entries }
    }
}

/// Ground truth vector `u*`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    values: Vec<f64>,
}

impl GroundTruth {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    /// True when every component is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// Candidate solution vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    values: Vec<f64>,
}

impl Point {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinitePoint(i));
        }
        Ok(Self { values })
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl std::ops::Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.values
    }
}

/// A (possibly normalized) problem instance `MC(C, u*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    weights: WeightMatrix,
    truth: GroundTruth,
    normalized: bool,
}

impl Instance {
    /// Pair raw weights with a raw truth vector. The result is unnormalized;
    /// most operations require a [`Instance::normalize`] pass first.
    pub fn new(weights: WeightMatrix, truth: GroundTruth) -> Result<Self> {
        if weights.n() != truth.n() {
            return Err(Error::DimensionMismatch { expected: weights.n(), got: truth.n() });
        }
        Ok(Self { weights, truth, normalized: false })
    }

    /// Used by family generators whose closed forms are normalized by
    /// construction; debug-checks the invariants instead of rescaling.
    pub(crate) fn pre_normalized(weights: WeightMatrix, truth: GroundTruth) -> Self {
        debug_assert!((weights.l1_norm() - 1.0).abs() <= tol::NORMALIZATION);
        debug_assert!(truth.is_zero() || (truth.l1_norm() - 1.0).abs() <= tol::NORMALIZATION);
        debug_assert!(weights.is_symmetric());
        Self { weights, truth, normalized: true }
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn truth(&self) -> &GroundTruth {
        &self.truth
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// True for the `u* = 0` case, which only the zero-truth classifier
    /// accepts; all metric operations reject it.
    pub fn has_degenerate_truth(&self) -> bool {
        self.truth.is_zero()
    }

    /// Symmetrize `C <- (C + C^T)/2`, then scale `C` and `u*` to unit l1 norm.
    /// A zero truth vector is kept as-is (the instance is then marked
    /// degenerate-truth). Rejects `||C||_1 = 0`.
    pub fn normalize(&self) -> Result<Instance> {
        let n = self.n();
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                c[i * n + j] = 0.5 * (self.weights.get(i, j) + self.weights.get(j, i));
            }
        }
        let c_norm: f64 = c.iter().sum();
        if c_norm <= 0.0 {
            return Err(Error::ZeroWeights);
        }
        for v in &mut c {
            *v /= c_norm;
        }
        let mut u = self.truth.values().to_vec();
        let u_norm: f64 = u.iter().map(|v| v.abs()).sum();
        if u_norm > 0.0 {
            for v in &mut u {
                *v /= u_norm;
            }
        }
        Ok(Instance {
            weights: WeightMatrix::from_raw(n, c),
            truth: GroundTruth::new(u),
            normalized: true,
        })
    }

    fn ensure_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized)
        }
    }

    fn ensure_dims(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: point.len() });
        }
        Ok(())
    }

    pub fn ensure_nonzero_truth(&self) -> Result<()> {
        if self.has_degenerate_truth() {
            Err(Error::ZeroTruth)
        } else {
            Ok(())
        }
    }

    /// Loss value `sum_{i,j} C_ij (u_i u_j - u*_i u*_j)^2`.
    pub fn objective(&self, point: &Point) -> Result<f64> {
        self.ensure_normalized()?;
        self.ensure_dims(point)?;
        Ok(self.objective_unchecked(point))
    }

    pub(crate) fn objective_unchecked(&self, u: &[f64]) -> f64 {
        let n = self.n();
        let t = self.truth.values();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let c = self.weights.get(i, j);
                if c != 0.0 {
                    let r = u[i] * u[j] - t[i] * t[j];
                    acc += c * r * r;
                }
            }
        }
        acc
    }

    /// Gradient of the loss at `point`.
    pub fn gradient(&self, point: &Point) -> Result<Vec<f64>> {
        self.ensure_normalized()?;
        self.ensure_dims(point)?;
        let mut g = vec![0.0; self.n()];
        self.gradient_into(point, &mut g);
        Ok(g)
    }

    pub(crate) fn gradient_into(&self, u: &[f64], out: &mut [f64]) {
        let n = self.n();
        let t = self.truth.values();
        for k in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                let c = self.weights.get(k, j);
                if c != 0.0 {
                    acc += c * u[j] * (u[k] * u[j] - t[k] * t[j]);
                }
            }
            out[k] = 4.0 * acc;
        }
    }

    /// Hessian of the loss at `point`, row-major, symmetric by construction.
    pub fn hessian(&self, point: &Point) -> Result<Vec<f64>> {
        self.ensure_normalized()?;
        self.ensure_dims(point)?;
        Ok(self.hessian_unchecked(point))
    }

    pub(crate) fn hessian_unchecked(&self, u: &[f64]) -> Vec<f64> {
        let n = self.n();
        let t = self.truth.values();
        let mut h = vec![0.0; n * n];
        for k in 0..n {
            let mut diag = self.weights.get(k, k) * (3.0 * u[k] * u[k] - t[k] * t[k]);
            for j in 0..n {
                if j != k {
                    diag += self.weights.get(k, j) * u[j] * u[j];
                }
            }
            h[k * n + k] = 4.0 * diag;
            for l in (k + 1)..n {
                let v = 4.0 * self.weights.get(k, l) * (2.0 * u[k] * u[l] - t[k] * t[l]);
                h[k * n + l] = v;
                h[l * n + k] = v;
            }
        }
        h
    }

    /// Smallest `delta` for which the weight matrix passes the two-sided
    /// restricted isometry test: `(max C - min C) / (max C + min C)` when all
    /// entries are positive; `None` when some entry is zero (no `delta < 1`
    /// works).
    pub fn rip_constant(&self) -> Result<Option<f64>> {
        self.ensure_normalized()?;
        let min = self.weights.min_entry();
        if min <= 0.0 {
            return Ok(None);
        }
        let max = self.weights.max_entry();
        Ok(Some((max - min) / (max + min)))
    }

    /// Frobenius distance `|| u u^T - u* u*^T ||_F`; invariant under `u -> -u`.
    pub fn solution_distance(&self, point: &Point) -> Result<f64> {
        self.ensure_dims(point)?;
        Ok(solution_distance(point, &self.truth))
    }
}

/// Smallest incoherence parameter of `u*`: `n * max_i u*_i^2 / sum_j u*_j^2`.
/// Always lies in `[1, n]`; errors on the zero vector.
pub fn incoherence(truth: &GroundTruth) -> Result<f64> {
    if truth.is_zero() {
        return Err(Error::ZeroTruth);
    }
    let n = truth.n() as f64;
    let mut max_sq = 0.0_f64;
    let mut sum_sq = 0.0_f64;
    for &v in truth.values() {
        let s = v * v;
        max_sq = max_sq.max(s);
        sum_sq += s;
    }
    Ok(n * max_sq / sum_sq)
}

/// Frobenius distance between the rank-1 matrices of `u` and `u*`.
pub fn solution_distance(point: &Point, truth: &GroundTruth) -> f64 {
    solution_distance_raw(point.values(), truth.values())
}

pub(crate) fn solution_distance_raw(u: &[f64], t: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), t.len());
    let n = u.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let r = u[i] * u[j] - t[i] * t[j];
            acc += r * r;
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomStream;
    use proptest::prelude::*;
    use rand::Rng;

    fn instance(n: usize, c: Vec<f64>, u: Vec<f64>) -> Instance {
        Instance::new(WeightMatrix::new(n, c).unwrap(), GroundTruth::new(u))
            .unwrap()
            .normalize()
            .unwrap()
    }

    use crate::testutil::random_instance;

    #[test]
    fn normalize_rescales() {
        let inst = instance(2, vec![2.0, 0.0, 0.0, 2.0], vec![3.0, 0.0]);
        assert_eq!(inst.weights().entries(), &[0.5, 0.0, 0.0, 0.5]);
        assert_eq!(inst.truth().values(), &[1.0, 0.0]);
    }

    #[test]
    fn normalize_is_idempotent() {
        let inst = instance(2, vec![1.0, 2.0, 2.0, 3.0], vec![0.5, -0.5]);
        let again = inst.normalize().unwrap();
        for (a, b) in inst.weights().entries().iter().zip(again.weights().entries()) {
            assert!((a - b).abs() <= 1e-12);
        }
        for (a, b) in inst.truth().values().iter().zip(again.truth().values()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn normalize_symmetrizes_then_scales() {
        let inst = instance(2, vec![1.0, 3.0, 5.0, 1.0], vec![1.0, 0.0]);
        let expect = [0.1, 0.4, 0.4, 0.1];
        for (a, b) in inst.weights().entries().iter().zip(expect.iter()) {
            assert!((a - b).abs() <= 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn normalize_rejects_bad_weights() {
        assert!(WeightMatrix::new(2, vec![1.0, -0.1, -0.1, 1.0]).is_err());
        let z = Instance::new(
            WeightMatrix::new(2, vec![0.0; 4]).unwrap(),
            GroundTruth::new(vec![1.0, 0.0]),
        )
        .unwrap();
        assert!(matches!(z.normalize(), Err(Error::ZeroWeights)));
    }

    #[test]
    fn zero_truth_is_kept_and_marked() {
        let inst = instance(2, vec![1.0; 4], vec![0.0, 0.0]);
        assert!(inst.has_degenerate_truth());
        assert!(inst.ensure_nonzero_truth().is_err());
    }

    #[test]
    fn objective_at_truth_and_its_negation_is_zero() {
        let inst = random_instance(5, RandomStream::new(11, 0));
        let u = Point::new(inst.truth().values().to_vec()).unwrap();
        let neg = Point::new(inst.truth().values().iter().map(|v| -v).collect()).unwrap();
        assert_eq!(inst.objective(&u).unwrap(), 0.0);
        assert_eq!(inst.objective(&neg).unwrap(), 0.0);
    }

    #[test]
    fn objective_single_term() {
        let inst = instance(2, vec![1.0; 4], vec![1.0, 0.0]);
        let zero = Point::new(vec![0.0, 0.0]).unwrap();
        assert!((inst.objective(&zero).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn gradient_vanishes_at_truth() {
        let inst = random_instance(6, RandomStream::new(12, 0));
        let u = Point::new(inst.truth().values().to_vec()).unwrap();
        let g = inst.gradient(&u).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let inst = random_instance(4, RandomStream::new(13, 0));
        let p = Point::new(vec![0.0; 3]).unwrap();
        assert!(matches!(inst.objective(&p), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(inst.gradient(&p), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(inst.hessian(&p), Err(Error::DimensionMismatch { .. })));
    }

    /// Central finite differences of the objective.
    pub(crate) fn fd_gradient(inst: &Instance, u: &[f64], h: f64) -> Vec<f64> {
        (0..u.len())
            .map(|k| {
                let mut up = u.to_vec();
                let mut dn = u.to_vec();
                up[k] += h;
                dn[k] -= h;
                (inst.objective_unchecked(&up) - inst.objective_unchecked(&dn)) / (2.0 * h)
            })
            .collect()
    }

    /// Central finite differences of the gradient.
    pub(crate) fn fd_hessian(inst: &Instance, u: &[f64], h: f64) -> Vec<f64> {
        let n = u.len();
        let mut out = vec![0.0; n * n];
        let mut gp = vec![0.0; n];
        let mut gm = vec![0.0; n];
        for k in 0..n {
            let mut up = u.to_vec();
            let mut dn = u.to_vec();
            up[k] += h;
            dn[k] -= h;
            inst.gradient_into(&up, &mut gp);
            inst.gradient_into(&dn, &mut gm);
            for l in 0..n {
                out[k * n + l] = (gp[l] - gm[l]) / (2.0 * h);
            }
        }
        out
    }

    #[test]
    fn gradient_and_hessian_match_finite_differences() {
        for trial in 0..100u64 {
            let n = 2 + (trial % 5) as usize;
            let inst = random_instance(n, RandomStream::new(1000, trial));
            let mut rng = RandomStream::new(2000, trial).rng();
            let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();

            let g = inst.gradient(&Point::new(u.clone()).unwrap()).unwrap();
            let fd = fd_gradient(&inst, &u, 1e-5);
            let scale = g.iter().map(|v| v.abs()).fold(1e-12, f64::max);
            for (a, b) in g.iter().zip(fd.iter()) {
                assert!((a - b).abs() / scale < tol::GRAD_CHECK, "grad {a} vs fd {b}");
            }

            let hess = inst.hessian(&Point::new(u.clone()).unwrap()).unwrap();
            let fdh = fd_hessian(&inst, &u, 1e-5);
            let hscale = hess.iter().map(|v| v.abs()).fold(1e-12, f64::max);
            for (a, b) in hess.iter().zip(fdh.iter()) {
                assert!((a - b).abs() / hscale < tol::HESS_CHECK, "hess {a} vs fd {b}");
            }
        }
    }

    #[test]
    fn hessian_is_psd_at_truth_for_positive_weights() {
        let inst = random_instance(6, RandomStream::new(14, 0));
        let h = inst.hessian(&Point::new(inst.truth().values().to_vec()).unwrap()).unwrap();
        let min = crate::linalg::min_symmetric_eigenvalue(&h, 6);
        assert!(min >= -1e-12, "min eigenvalue {min}");
    }

    #[test]
    fn rip_constant_examples() {
        // uniform -> delta = 0
        let inst = instance(3, vec![1.0; 9], vec![1.0, 1.0, 1.0]);
        assert_eq!(inst.rip_constant().unwrap(), Some(0.0));
        // min/max = 1/3 -> delta = 1/2
        let mut c = vec![3.0; 9];
        c[0] = 1.0;
        let inst = Instance::new(WeightMatrix::new(3, c).unwrap(), GroundTruth::new(vec![1.0; 3]))
            .unwrap()
            .normalize()
            .unwrap();
        assert!((inst.rip_constant().unwrap().unwrap() - 0.5).abs() < 1e-15);
        // any zero entry -> none
        let mut c = vec![1.0; 9];
        c[1] = 0.0;
        c[3] = 0.0;
        let inst = Instance::new(WeightMatrix::new(3, c).unwrap(), GroundTruth::new(vec![1.0; 3]))
            .unwrap()
            .normalize()
            .unwrap();
        assert_eq!(inst.rip_constant().unwrap(), None);
    }

    #[test]
    fn incoherence_examples() {
        assert!((incoherence(&GroundTruth::new(vec![0.25; 4])).unwrap() - 1.0).abs() < 1e-15);
        assert!((incoherence(&GroundTruth::new(vec![1.0, 0.0, 0.0])).unwrap() - 3.0).abs() < 1e-15);
        let mu = incoherence(&GroundTruth::new(vec![0.5, 0.5, 0.0, 0.0])).unwrap();
        assert!((mu - 2.0).abs() < 1e-15);
        assert!(incoherence(&GroundTruth::new(vec![0.0; 3])).is_err());
    }

    #[test]
    fn solution_distance_examples() {
        let t = GroundTruth::new(vec![1.0]);
        assert!((solution_distance(&Point::new(vec![2.0]).unwrap(), &t) - 3.0).abs() < 1e-15);
        let t = GroundTruth::new(vec![0.0, 1.0]);
        let d = solution_distance(&Point::new(vec![1.0, 0.0]).unwrap(), &t);
        assert!((d - 2.0_f64.sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn sign_symmetry(seed in 0u64..500) {
            let n = 3 + (seed % 4) as usize;
            let inst = random_instance(n, RandomStream::new(31, seed));
            let mut rng = RandomStream::new(32, seed).rng();
            let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let neg: Vec<f64> = u.iter().map(|v| -v).collect();
            let pu = Point::new(u.clone()).unwrap();
            let pn = Point::new(neg).unwrap();
            prop_assert_eq!(inst.objective(&pu).unwrap(), inst.objective(&pn).unwrap());
            let gu = inst.gradient(&pu).unwrap();
            let gn = inst.gradient(&pn).unwrap();
            for (a, b) in gu.iter().zip(gn.iter()) {
                prop_assert_eq!(*a, -*b);
            }
        }

        #[test]
        fn scale_invariance_of_normalization(seed in 0u64..200, s1 in 0.1f64..10.0, s2 in 0.1f64..10.0) {
            let n = 3;
            let base = random_instance(n, RandomStream::new(33, seed));
            let scaled = Instance::new(
                WeightMatrix::new(n, base.weights().entries().iter().map(|v| v * s1).collect()).unwrap(),
                GroundTruth::new(base.truth().values().iter().map(|v| v * s2).collect()),
            ).unwrap().normalize().unwrap();
            for (a, b) in base.weights().entries().iter().zip(scaled.weights().entries()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
            for (a, b) in base.truth().values().iter().zip(scaled.truth().values()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn rip_constant_monotone_in_min_entry(seed in 0u64..200) {
            let n = 4;
            let inst = random_instance(n, RandomStream::new(34, seed));
            let delta0 = inst.rip_constant().unwrap().unwrap();
            // raise the minimum entry slightly (symmetrically), renormalize
            let mut c = inst.weights().entries().to_vec();
            let (mut mi, mut mj, mut best) = (0, 0, f64::INFINITY);
            for i in 0..n {
                for j in i..n {
                    if c[i * n + j] < best {
                        best = c[i * n + j];
                        mi = i;
                        mj = j;
                    }
                }
            }
            let bump = 0.25 * (inst.weights().max_entry() - best);
            c[mi * n + mj] += bump;
            c[mj * n + mi] = c[mi * n + mj];
            let bumped = Instance::new(
                WeightMatrix::new(n, c).unwrap(),
                GroundTruth::new(inst.truth().values().to_vec()),
            ).unwrap().normalize().unwrap();
            let delta1 = bumped.rip_constant().unwrap().unwrap();
            prop_assert!(delta1 <= delta0 + 1e-12);
        }

        #[test]
        fn incoherence_bounds(seed in 0u64..300) {
            let n = 2 + (seed % 6) as usize;
            let mut rng = RandomStream::new(35, seed).rng();
            let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let t = GroundTruth::new(u);
            let mu = incoherence(&t).unwrap();
            prop_assert!(mu >= 1.0 - 1e-12 && mu <= n as f64 + 1e-12);
        }
    }
}
