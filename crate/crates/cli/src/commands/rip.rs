//! Exact metric versus the restricted-isometry bounds on the tight instance
//! families, with tightness ratios.

use crate::csvfmt::{Cell, CsvBuilder};
use mcmetric::bounds::{bound_rip, bound_rip3_lower, bound_rip3_proof, bound_rip_incoh};
use mcmetric::families::{rip3_instance, rip_extremal_instance};
use mcmetric::instance::incoherence;
use mcmetric::metric::{exact_metric, DEFAULT_ENUMERATION_LIMIT};
use mcmetric::Error;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

fn default_mu_list() -> Vec<f64> {
    vec![1.0, 2.0]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub alpha_grid: Vec<f64>,
    pub delta_grid: Vec<f64>,
    /// Incoherence targets for the lower-bound construction rows.
    #[serde(default = "default_mu_list")]
    pub mu_list: Vec<f64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub family: &'static str,
    pub mu: f64,
    pub delta: f64,
    pub alpha: f64,
    pub exact: f64,
    pub upper: f64,
    pub ratio: f64,
    /// Printed lower-bound expression, evaluated literally (may overshoot).
    pub lower_printed: f64,
    /// Sharp lower bound from the construction's own derivation.
    pub lower_proof: f64,
    pub lower_holds: bool,
}

pub struct Output {
    pub rows: Vec<Row>,
    pub csv: String,
}

pub fn run(params: &Params) -> Result<Output, Error> {
    if params.n > DEFAULT_ENUMERATION_LIMIT {
        return Err(Error::EnumerationLimit { n: params.n, limit: DEFAULT_ENUMERATION_LIMIT });
    }
    let mut rows = Vec::new();
    for &delta in &params.delta_grid {
        let extremal = rip_extremal_instance(params.n, delta)?;
        for &alpha in &params.alpha_grid {
            let exact = exact_metric(&extremal, alpha)?.value;
            let upper = bound_rip(params.n, alpha, delta)?;
            rows.push(Row {
                family: "rip_extremal",
                mu: incoherence(extremal.truth())?,
                delta,
                alpha,
                exact,
                upper,
                ratio: exact / upper,
                lower_printed: f64::NAN,
                lower_proof: f64::NAN,
                lower_holds: true,
            });
        }
        for &mu in &params.mu_list {
            let inst = rip3_instance(params.n, mu, delta)?;
            for &alpha in &params.alpha_grid {
                let exact = exact_metric(&inst, alpha)?.value;
                let upper = bound_rip_incoh(params.n, alpha, delta, mu)?;
                let lower_printed = bound_rip3_lower(params.n, alpha, delta, mu)?;
                let lower_proof = bound_rip3_proof(params.n, alpha, delta, mu)?;
                rows.push(Row {
                    family: "rip3",
                    mu,
                    delta,
                    alpha,
                    exact,
                    upper,
                    ratio: exact / upper,
                    lower_printed,
                    lower_proof,
                    lower_holds: exact >= lower_proof * (1.0 - 1e-12),
                });
            }
        }
    }
    let meta =
        vec![("n", params.n.to_string()), ("mu_list", format!("{:?}", params.mu_list))];
    let mut csv = CsvBuilder::new("rip", &meta);
    csv.header(&[
        "family",
        "n",
        "mu",
        "delta",
        "alpha",
        "exact_metric",
        "upper_bound",
        "tightness_ratio",
        "lower_bound_printed",
        "lower_bound_proof",
        "lower_holds",
    ]);
    for r in &rows {
        csv.row(vec![
            Cell::from(r.family),
            Cell::from(params.n),
            Cell::from(r.mu),
            Cell::from(r.delta),
            Cell::from(r.alpha),
            Cell::from(r.exact),
            Cell::from(r.upper),
            Cell::from(r.ratio),
            Cell::from(r.lower_printed),
            Cell::from(r.lower_proof),
            Cell::from(u64::from(r.lower_holds)),
        ]);
    }
    Ok(Output { rows, csv: csv.finish() })
}
