//! Optimization machinery: gradient descent with second-order classification,
//! the strict-saddle sampling scan, and the zero-truth dichotomy.

use crate::error::{Error, Result};
use crate::instance::{solution_distance_raw, Instance, Point, WeightMatrix};
use crate::linalg::min_symmetric_eigenvalue;
use crate::rng::RandomStream;
use crate::tol;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Step-size policy for gradient descent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StepRule {
    Fixed { step: f64 },
    /// Armijo backtracking: accept `u - s g` when the objective drops by at
    /// least `c * s * ||g||^2`, shrinking `s` otherwise. The accepted step is
    /// doubled as the next initial guess.
    Backtracking { c: f64, shrink: f64 },
}

/// Initialization scheme for a descent run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitScheme {
    /// Independent Gaussian entries with standard deviation `1/n`.
    GaussianOverDim,
    Gaussian { scale: f64 },
    UniformBox { radius: f64 },
    At(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub max_iters: usize,
    pub step_rule: StepRule,
    /// Termination threshold on the gradient infinity norm.
    pub grad_tol: f64,
    /// Frobenius radius around the truth's rank-1 matrix counted as success.
    pub success_tol: f64,
    /// Eigenvalue slack separating second-order points from saddles.
    pub eig_tol: f64,
    pub init: InitScheme,
    /// Objective values above this abort the run as divergent.
    pub overflow_guard: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iters: 200_000,
            step_rule: StepRule::Backtracking { c: 1e-4, shrink: 0.5 },
            grad_tol: 1e-12,
            success_tol: tol::SUCCESS,
            eig_tol: tol::EIG,
            init: InitScheme::GaussianOverDim,
            overflow_guard: 1e100,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::ParameterRange("max_iters must be at least 1".into()));
        }
        if !(self.grad_tol > 0.0 && self.success_tol > 0.0 && self.eig_tol > 0.0) {
            return Err(Error::ParameterRange("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome classification of a run or sampled point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    GlobalMin,
    SpuriousSosp,
    StrictSaddle,
    Unconverged,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::GlobalMin => "global-min",
            Classification::SpuriousSosp => "spurious-sosp",
            Classification::StrictSaddle => "strict-saddle",
            Classification::Unconverged => "unconverged",
        };
        f.write_str(s)
    }
}

/// Final state of a descent run: the point, first- and second-order
/// diagnostics, and the classification.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub point: Point,
    pub grad_inf_norm: f64,
    pub min_hessian_eig: f64,
    pub distance_to_truth: f64,
    pub classification: Classification,
    pub iterations: usize,
}

fn sample_init(instance: &Instance, init: &InitScheme, rng: &mut impl Rng) -> Result<Vec<f64>> {
    let n = instance.n();
    match init {
        InitScheme::GaussianOverDim => {
            let scale = 1.0 / n as f64;
            Ok((0..n).map(|_| scale * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)).collect())
        }
        InitScheme::Gaussian { scale } => {
            Ok((0..n).map(|_| scale * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)).collect())
        }
        InitScheme::UniformBox { radius } => {
            Ok((0..n).map(|_| rng.random::<f64>() * 2.0 * radius - radius).collect())
        }
        InitScheme::At(values) => {
            if values.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: values.len() });
            }
            Ok(values.clone())
        }
    }
}

/// One gradient-descent run from a seeded initialization. Terminates when the
/// iterate's rank-1 matrix is within `success_tol` of the truth, the gradient
/// infinity norm falls below `grad_tol`, or the iteration budget runs out;
/// the final point is then classified through the Hessian spectrum.
pub fn gd_run(instance: &Instance, config: &OptimizerConfig, stream: RandomStream) -> Result<CriticalPoint> {
    gd_run_traced(instance, config, stream).map(|(cp, _)| cp)
}

/// [`gd_run`] that also returns the objective value at every accepted iterate
/// (starting point included).
pub fn gd_run_traced(
    instance: &Instance,
    config: &OptimizerConfig,
    stream: RandomStream,
) -> Result<(CriticalPoint, Vec<f64>)> {
    if !instance.is_normalized() {
        return Err(Error::NotNormalized);
    }
    config.validate()?;
    let n = instance.n();
    let truth = instance.truth().values();
    let mut rng = stream.rng();
    let mut u = sample_init(instance, &config.init, &mut rng)?;

    let mut trace = Vec::new();
    let mut grad = vec![0.0; n];
    let mut step = 1.0_f64;
    let mut iterations = 0;
    let mut diverged = false;

    for iter in 0..config.max_iters {
        iterations = iter;
        if solution_distance_raw(&u, truth) <= config.success_tol {
            break;
        }
        let obj = instance.objective_unchecked(&u);
        trace.push(obj);
        if !obj.is_finite() || obj > config.overflow_guard {
            diverged = true;
            break;
        }
        instance.gradient_into(&u, &mut grad);
        let grad_inf = grad.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if grad_inf <= config.grad_tol {
            break;
        }
        match config.step_rule {
            StepRule::Fixed { step } => {
                for (ui, gi) in u.iter_mut().zip(grad.iter()) {
                    *ui -= step * gi;
                }
                if u.iter().any(|v| !v.is_finite()) {
                    diverged = true;
                    break;
                }
            }
            StepRule::Backtracking { c, shrink } => {
                let grad_sq: f64 = grad.iter().map(|v| v * v).sum();
                step = (step * 2.0).min(1e12);
                let mut accepted = false;
                while step >= 1e-20 {
                    let candidate: Vec<f64> =
                        u.iter().zip(grad.iter()).map(|(ui, gi)| ui - step * gi).collect();
                    let f = instance.objective_unchecked(&candidate);
                    if f.is_finite() && f <= obj - c * step * grad_sq {
                        u = candidate;
                        accepted = true;
                        break;
                    }
                    step *= shrink;
                }
                if !accepted {
                    break; // Armijo stalled at floating-point resolution
                }
            }
        }
    }

    let distance_to_truth = solution_distance_raw(&u, truth);
    instance.gradient_into(&u, &mut grad);
    let grad_inf_norm = grad.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let min_hessian_eig = min_symmetric_eigenvalue(&instance.hessian_unchecked(&u), n);
    trace.push(instance.objective_unchecked(&u));

    let classification = if diverged {
        Classification::Unconverged
    } else if distance_to_truth <= config.success_tol {
        Classification::GlobalMin
    } else if grad_inf_norm <= config.grad_tol {
        if min_hessian_eig >= -config.eig_tol {
            Classification::SpuriousSosp
        } else {
            Classification::StrictSaddle
        }
    } else {
        Classification::Unconverged
    };

    let point = Point::new(u).unwrap_or_else(|_| Point::from_raw(vec![f64::MAX; n]));
    Ok((
        CriticalPoint {
            point,
            grad_inf_norm,
            min_hessian_eig,
            distance_to_truth,
            classification,
            iterations,
        },
        trace,
    ))
}

/// Configuration of the strict-saddle sampling scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// l1 exclusion radius around the two truth vectors.
    pub eta: f64,
    pub samples: usize,
    /// Gradient infinity norms at or below this count as "small gradient".
    pub grad_threshold: f64,
    /// Curvature at or above `-threshold` counts as "no escape direction".
    pub curvature_threshold: f64,
    /// Optional descent steps applied to each sample before evaluating, to
    /// concentrate samples near critical points. Zero scans the raw draws.
    pub polish_iters: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            eta: 0.1,
            samples: 10_000,
            grad_threshold: 1e-6,
            curvature_threshold: 1e-6,
            polish_iters: 0,
        }
    }
}

/// Empirical strict-saddle diagnostics over a sampled region.
#[derive(Debug, Clone)]
pub struct ScanReport {
    /// Smallest gradient norm among points lacking an escape direction;
    /// infinity when no sample qualified.
    pub beta_hat: f64,
    /// Smallest `-lambda_min` among small-gradient points; infinity when no
    /// sample qualified. A value at or below zero flags a candidate
    /// second-order point away from the truth.
    pub gamma_hat: f64,
    /// Sampled points that are near-stationary with no escape direction while
    /// far from both signed truth vectors.
    pub violations: Vec<Point>,
    pub evaluated: usize,
}

impl ScanReport {
    pub fn violation_found(&self) -> bool {
        !self.violations.is_empty()
    }
}

/// Sample the ball `||u||_2 <= 8n + 2`, discard points l1-close to either
/// signed truth, and record the empirical strict-saddle margins: every kept
/// point should either have a large gradient or a direction of sufficiently
/// negative curvature.
pub fn strict_saddle_scan(
    instance: &Instance,
    config: &ScanConfig,
    stream: RandomStream,
) -> Result<ScanReport> {
    if !instance.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let n = instance.n();
    let radius = 8.0 * n as f64 + 2.0;
    let truth = instance.truth().values();

    let polish_config = OptimizerConfig {
        max_iters: config.polish_iters.max(1),
        init: InitScheme::At(vec![0.0; n]),
        ..OptimizerConfig::default()
    };

    use rayon::prelude::*;
    struct Eval {
        grad_inf: f64,
        min_eig: f64,
        point: Option<Point>,
    }
    let evals: Vec<Option<Eval>> = (0..config.samples as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream.substream(trial).rng();
            let mut u: Vec<f64> = (0..n)
                .map(|_| <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng))
                .collect();
            let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
            let r = radius * rng.random::<f64>().powf(1.0 / n as f64);
            for v in u.iter_mut() {
                *v *= r / norm;
            }
            if config.polish_iters > 0 {
                let cfg = OptimizerConfig {
                    init: InitScheme::At(u.clone()),
                    ..polish_config.clone()
                };
                if let Ok(cp) = gd_run(instance, &cfg, stream.substream(trial)) {
                    u = cp.point.values().to_vec();
                }
            }
            let d_plus: f64 = u.iter().zip(truth).map(|(a, b)| (a - b).abs()).sum();
            let d_minus: f64 = u.iter().zip(truth).map(|(a, b)| (a + b).abs()).sum();
            if d_plus.min(d_minus) <= config.eta {
                return None;
            }
            let mut grad = vec![0.0; n];
            instance.gradient_into(&u, &mut grad);
            let grad_inf = grad.iter().map(|v| v.abs()).fold(0.0, f64::max);
            let min_eig = min_symmetric_eigenvalue(&instance.hessian_unchecked(&u), n);
            let violating =
                grad_inf <= config.grad_threshold && min_eig >= -config.curvature_threshold;
            Some(Eval {
                grad_inf,
                min_eig,
                point: violating.then(|| Point::new(u).expect("finite sample")),
            })
        })
        .collect();

    let mut report = ScanReport {
        beta_hat: f64::INFINITY,
        gamma_hat: f64::INFINITY,
        violations: Vec::new(),
        evaluated: 0,
    };
    for eval in evals.into_iter().flatten() {
        report.evaluated += 1;
        if eval.min_eig > -config.curvature_threshold {
            report.beta_hat = report.beta_hat.min(eval.grad_inf);
        }
        if eval.grad_inf <= config.grad_threshold {
            report.gamma_hat = report.gamma_hat.min(-eval.min_eig);
        }
        if let Some(p) = eval.point {
            report.violations.push(p);
        }
    }
    Ok(report)
}

/// Outcome of the zero-truth dichotomy.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroTruthOutcome {
    /// Every diagonal weight is positive: the origin is the unique
    /// second-order critical point.
    NoSscp,
    /// Some diagonal weight vanishes: the returned unit vector is a nonzero
    /// global solution, so the instance cannot be solved uniquely.
    MultipleGlobalSolutions { witness: Point },
}

/// Classify the `u* = 0` instance of a normalized weight matrix.
pub fn classify_zero_truth(weights: &WeightMatrix) -> Result<ZeroTruthOutcome> {
    if (weights.l1_norm() - 1.0).abs() > tol::NORMALIZATION {
        return Err(Error::NotNormalized);
    }
    let n = weights.n();
    for i in 0..n {
        if weights.get(i, i) == 0.0 {
            let mut u = vec![0.0; n];
            u[i] = 1.0;
            return Ok(ZeroTruthOutcome::MultipleGlobalSolutions {
                witness: Point::new(u).expect("finite witness"),
            });
        }
    }
    Ok(ZeroTruthOutcome::NoSscp)
}
