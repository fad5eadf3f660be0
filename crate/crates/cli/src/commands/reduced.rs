//! Critical-point census of the reduced problem across a parameter grid,
//! with the three theoretical thresholds marked in every row.

use crate::csvfmt::{Cell, CsvBuilder};
use mcmetric::reduced::{find_critical_points_reduced, NewtonConfig, ReducedProblem};
use mcmetric::{Error, RandomStream};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Params {
    pub m: usize,
    pub eps_grid: Vec<f64>,
    pub starts: usize,
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub eps: f64,
    pub converged: usize,
    pub dropped: usize,
    pub distinct: usize,
    pub sosp_count: usize,
    pub spurious_count: usize,
    pub min_spurious_eig: f64,
}

pub struct Output {
    pub rows: Vec<Row>,
    pub csv: String,
}

pub fn run(params: &Params) -> Result<Output, Error> {
    if params.m > 12 {
        return Err(Error::EnumerationLimit { n: params.m, limit: 12 });
    }
    if params.starts == 0 {
        return Err(Error::ParameterRange("starts must be at least 1".into()));
    }
    let config = NewtonConfig::default();
    let mut rows = Vec::new();
    for (idx, &eps) in params.eps_grid.iter().enumerate() {
        let problem = ReducedProblem::new(params.m, eps)?;
        let report = find_critical_points_reduced(
            &problem,
            params.starts,
            RandomStream::new(params.seed, (idx as u64) << 32),
            &config,
        );
        let spurious: Vec<_> = report.points.iter().filter(|p| p.is_spurious()).collect();
        let sosp_count = report
            .points
            .iter()
            .filter(|p| p.min_hessian_eig >= -config.eig_tol)
            .count();
        rows.push(Row {
            eps,
            converged: report.converged_starts,
            dropped: report.dropped_starts,
            distinct: report.points.len(),
            sosp_count,
            spurious_count: spurious.len(),
            min_spurious_eig: spurious
                .iter()
                .map(|p| p.min_hessian_eig)
                .fold(f64::NAN, |a, b| if a.is_nan() { b } else { a.min(b) }),
        });
    }

    let mf = params.m as f64;
    let meta = vec![
        ("seed", params.seed.to_string()),
        ("m", params.m.to_string()),
        ("starts", params.starts.to_string()),
        ("threshold_odd", (1.0 / (13.0 * (mf + 1.0))).to_string()),
        ("threshold_even", (1.0 / (mf + 1.0)).to_string()),
        ("threshold_upper", (18.0 / mf).to_string()),
    ];
    let mut csv = CsvBuilder::new("reduced", &meta);
    csv.header(&[
        "m",
        "eps",
        "starts",
        "converged",
        "dropped",
        "distinct_critical_points",
        "sosp_count",
        "spurious_count",
        "min_spurious_eig",
        "thr_spurious_odd",
        "thr_spurious_even",
        "thr_no_spurious",
    ]);
    for r in &rows {
        csv.row(vec![
            Cell::from(params.m),
            Cell::from(r.eps),
            Cell::from(params.starts),
            Cell::from(r.converged),
            Cell::from(r.dropped),
            Cell::from(r.distinct),
            Cell::from(r.sosp_count),
            Cell::from(r.spurious_count),
            Cell::from(r.min_spurious_eig),
            Cell::from(1.0 / (13.0 * (mf + 1.0))),
            Cell::from(1.0 / (mf + 1.0)),
            Cell::from(18.0 / mf),
        ]);
    }
    Ok(Output { rows, csv: csv.finish() })
}
