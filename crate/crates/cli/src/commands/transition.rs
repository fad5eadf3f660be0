//! Success-rate transition curves for randomly initialized gradient descent
//! on the one-parameter family with a full independent support (m = n).
//!
//! For each dimension and each scaled parameter `eta = (n+1) eps`, the command
//! runs seeded descent trials, reports the success rate (final iterate within
//! the Frobenius tolerance of the truth), the smallest grid value attaining
//! rate one, and a single bisection refinement between the bracketing grid
//! points.

use crate::csvfmt::{Cell, CsvBuilder};
use mcmetric::families::{one_param_instance, split_graph};
use mcmetric::instance::Instance;
use mcmetric::landscape::{gd_run, Classification, CriticalPoint, OptimizerConfig};
use mcmetric::{Error, RandomStream};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Params {
    pub n_list: Vec<usize>,
    pub eta_grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Optional per-trial CSV (seed, trial, eta, diagnostics, classification).
    #[serde(default)]
    pub detail_out: Option<PathBuf>,
    #[serde(default)]
    pub max_iters: Option<usize>,
    #[serde(default)]
    pub success_tol: Option<f64>,
    #[serde(default)]
    pub grad_tol: Option<f64>,
}

impl Params {
    fn optimizer(&self) -> OptimizerConfig {
        let mut config = OptimizerConfig::default();
        if let Some(v) = self.max_iters {
            config.max_iters = v;
        }
        if let Some(v) = self.success_tol {
            config.success_tol = v;
        }
        if let Some(v) = self.grad_tol {
            config.grad_tol = v;
        }
        config
    }

    fn validate(&self) -> Result<(), Error> {
        if self.trials == 0 {
            return Err(Error::ParameterRange("trials must be at least 1".into()));
        }
        if self.eta_grid.is_empty() || self.eta_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::ParameterRange("eta grid must be nonempty and increasing".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RatePoint {
    pub eta: f64,
    pub eps: f64,
    pub successes: usize,
    pub rate: f64,
}

#[derive(Debug, Clone)]
pub struct TransitionResult {
    pub n: usize,
    pub rates: Vec<RatePoint>,
    /// Smallest grid eta with success rate one.
    pub threshold: Option<f64>,
    /// Threshold after one bisection pass into the preceding grid interval.
    pub refined: Option<f64>,
}

pub struct Output {
    pub per_n: Vec<TransitionResult>,
    pub csv: String,
    pub detail_csv: String,
}

struct TrialRecord {
    n: usize,
    eta: f64,
    trial: usize,
    point: CriticalPoint,
}

fn family_instance(n: usize, eta: f64) -> Result<Instance, Error> {
    let eps = eta / (n as f64 + 1.0);
    let graph = split_graph(n, n)?;
    let support: Vec<usize> = (0..n).collect();
    one_param_instance(&graph, &support, eps)
}

/// Stream id for one descent trial; grid index 0xFFFF is reserved for
/// bisection midpoints. Public so CSV rows can be re-validated externally.
pub fn stream_for(seed: u64, n_idx: usize, eta_idx: usize, trial: usize) -> RandomStream {
    let stream =
        ((n_idx as u64) << 44) | ((eta_idx as u64) << 28) | (trial as u64 & ((1 << 28) - 1));
    RandomStream::new(seed, stream)
}

/// The family member analyzed at one grid point: the one-parameter instance
/// on the empty graph with full independent support and `eps = eta/(n+1)`.
pub fn grid_instance(n: usize, eta: f64) -> Result<Instance, Error> {
    family_instance(n, eta)
}

fn run_batch(
    inst: &Instance,
    config: &OptimizerConfig,
    params: &Params,
    n: usize,
    n_idx: usize,
    eta: f64,
    eta_idx: usize,
) -> Result<(RatePoint, Vec<TrialRecord>), Error> {
    let outcomes: Vec<CriticalPoint> = (0..params.trials)
        .into_par_iter()
        .map(|trial| {
            gd_run(inst, config, stream_for(params.seed, n_idx, eta_idx, trial))
                .expect("normalized family instance")
        })
        .collect();
    let successes =
        outcomes.iter().filter(|cp| cp.classification == Classification::GlobalMin).count();
    let records = outcomes
        .into_iter()
        .enumerate()
        .map(|(trial, point)| TrialRecord { n, eta, trial, point })
        .collect();
    Ok((
        RatePoint {
            eta,
            eps: eta / (n as f64 + 1.0),
            successes,
            rate: successes as f64 / params.trials as f64,
        },
        records,
    ))
}

pub fn run(params: &Params) -> Result<Output, Error> {
    params.validate()?;
    let config = params.optimizer();
    let mut per_n = Vec::new();
    let mut details: Vec<TrialRecord> = Vec::new();

    for (n_idx, &n) in params.n_list.iter().enumerate() {
        let mut rates = Vec::new();
        for (eta_idx, &eta) in params.eta_grid.iter().enumerate() {
            let inst = family_instance(n, eta)?;
            let (point, records) =
                run_batch(&inst, &config, params, n, n_idx, eta, eta_idx)?;
            rates.push(point);
            details.extend(records);
        }
        let threshold_idx = rates.iter().position(|p| p.rate == 1.0);
        let threshold = threshold_idx.map(|i| rates[i].eta);
        let refined = match threshold_idx {
            Some(i) if i > 0 => {
                let mid = 0.5 * (rates[i - 1].eta + rates[i].eta);
                let inst = family_instance(n, mid)?;
                let (point, records) =
                    run_batch(&inst, &config, params, n, n_idx, mid, 0xFFFF)?;
                details.extend(records);
                if point.rate == 1.0 {
                    Some(mid)
                } else {
                    threshold
                }
            }
            other => other.map(|i| rates[i].eta),
        };
        per_n.push(TransitionResult { n, rates, threshold, refined });
    }

    let meta = vec![
        ("seed", params.seed.to_string()),
        ("trials", params.trials.to_string()),
        ("max_iters", config.max_iters.to_string()),
        ("step_rule", format!("{:?}", config.step_rule).replace(' ', "")),
        ("grad_tol", config.grad_tol.to_string()),
        ("success_tol", config.success_tol.to_string()),
        ("init", format!("{:?}", config.init).replace(' ', "")),
    ];
    let mut csv = CsvBuilder::new("transition", &meta);
    csv.header(&["row_kind", "n", "eta", "eps", "trials", "successes", "success_rate"]);
    for result in &per_n {
        for p in &result.rates {
            csv.row(vec![
                Cell::from("rate"),
                Cell::from(result.n),
                Cell::from(p.eta),
                Cell::from(p.eps),
                Cell::from(params.trials),
                Cell::from(p.successes),
                Cell::from(p.rate),
            ]);
        }
        csv.row(vec![
            Cell::from("threshold"),
            Cell::from(result.n),
            Cell::from(result.threshold.unwrap_or(f64::NAN)),
            Cell::from(result.refined.unwrap_or(f64::NAN)),
            Cell::from(params.trials),
            Cell::from("none".to_string()),
            Cell::from(if result.threshold.is_some() { "found" } else { "none" }),
        ]);
    }

    let mut detail = CsvBuilder::new("transition-detail", &[("seed", params.seed.to_string())]);
    detail.header(&[
        "seed",
        "trial",
        "n",
        "eta",
        "eps",
        "final_grad_inf",
        "min_hessian_eig",
        "distance",
        "classification",
        "iterations",
    ]);
    for r in &details {
        detail.row(vec![
            Cell::from(params.seed),
            Cell::from(r.trial),
            Cell::from(r.n),
            Cell::from(r.eta),
            Cell::from(r.eta / (r.n as f64 + 1.0)),
            Cell::from(r.point.grad_inf_norm),
            Cell::from(r.point.min_hessian_eig),
            Cell::from(r.point.distance_to_truth),
            Cell::from(r.point.classification.to_string()),
            Cell::from(r.point.iterations),
        ]);
    }

    Ok(Output { per_n, csv: csv.finish(), detail_csv: detail.finish() })
}
