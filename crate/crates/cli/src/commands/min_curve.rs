//! Minimum-metric curves over a weight grid, with the two special weights
//! merged into the grid and marked.

use crate::csvfmt::{Cell, CsvBuilder};
use mcmetric::metric::{alpha_diamond, alpha_star, metric_min};
use mcmetric::Error;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Params {
    pub n_list: Vec<usize>,
    pub alpha_grid: Vec<f64>,
    #[serde(default)]
    pub scaled: bool,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub n: usize,
    pub alpha: f64,
    pub value: f64,
    pub scaled: f64,
    pub special: &'static str,
}

pub struct Output {
    pub rows: Vec<Row>,
    pub csv: String,
}

pub fn run(params: &Params) -> Result<Output, Error> {
    let mut rows = Vec::new();
    for &n in &params.n_list {
        let star = alpha_star(n);
        let diamond = alpha_diamond(n);
        let mut alphas: Vec<(f64, &'static str)> =
            params.alpha_grid.iter().map(|&a| (a, "")).collect();
        alphas.push((star, "alpha_star"));
        alphas.push((diamond, "alpha_diamond"));
        alphas.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for (alpha, special) in alphas {
            let value = metric_min(n, alpha)?;
            rows.push(Row { n, alpha, value, scaled: value / n as f64, special });
        }
    }
    let mut csv = CsvBuilder::new(
        "min-curve",
        &[("scaled", params.scaled.to_string()), ("n", format!("{:?}", params.n_list))],
    );
    csv.header(&["n", "alpha", "d_min", "d_min_over_n", "special"]);
    for r in &rows {
        csv.row(vec![
            Cell::from(r.n),
            Cell::from(r.alpha),
            Cell::from(r.value),
            Cell::from(r.scaled),
            Cell::from(r.special),
        ]);
    }
    Ok(Output { rows, csv: csv.finish() })
}
