//! Diagnostic report for one instance file: normalization, restricted
//! isometry constant, incoherence, degeneracy verdict with witness, the exact
//! metric with its certificate, bound checks, and the fixed-weights metric.

use mcmetric::bounds::{bound_rip, bound_rip_incoh};
use mcmetric::graph::{in_closure, second_solution};
use mcmetric::instance::{incoherence, Instance};
use mcmetric::landscape::{classify_zero_truth, ZeroTruthOutcome};
use mcmetric::metric::{exact_metric, metric_fixed_c, MetricResult, DEFAULT_ENUMERATION_LIMIT};
use mcmetric::{io, Error};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Params {
    pub instance: PathBuf,
    pub alpha: f64,
    #[serde(default)]
    pub raw: bool,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

pub struct Output {
    pub report: String,
    pub metric: Option<MetricResult>,
}

fn fmt_vec(values: &[f64]) -> String {
    let inner: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    format!("[{}]", inner.join(", "))
}

fn fmt_matrix(inst: &Instance) -> String {
    let n = inst.n();
    let mut s = String::new();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:.6}", inst.weights().get(i, j))).collect();
        let _ = writeln!(s, "    [{}]", row.join(", "));
    }
    s
}

pub fn run(params: &Params) -> Result<Output, Error> {
    let inst = io::read_instance(&params.instance, params.raw)?;
    let n = inst.n();
    let mut report = String::new();
    let w = &mut report;
    let _ = writeln!(w, "instance: {} (n = {n})", params.instance.display());
    let _ = writeln!(
        w,
        "normalization: {}",
        if params.raw { "raw (validated)" } else { "symmetrized and rescaled on load" }
    );

    let delta = inst.rip_constant()?;
    match delta {
        Some(d) => {
            let _ = writeln!(w, "rip constant delta: {d:.12}");
        }
        None => {
            let _ = writeln!(w, "rip constant delta: none (a weight entry is zero)");
        }
    }

    if inst.has_degenerate_truth() {
        let _ = writeln!(w, "ground truth: identically zero; zero-truth classification applies");
        match classify_zero_truth(inst.weights())? {
            ZeroTruthOutcome::NoSscp => {
                let _ = writeln!(
                    w,
                    "zero-truth verdict: no spurious second-order points; the origin is the unique critical point"
                );
            }
            ZeroTruthOutcome::MultipleGlobalSolutions { witness } => {
                let _ = writeln!(
                    w,
                    "zero-truth verdict: multiple global solutions; witness u = {}",
                    fmt_vec(witness.values())
                );
            }
        }
        return Ok(Output { report, metric: None });
    }

    let mu = incoherence(inst.truth())?;
    let _ = writeln!(w, "incoherence mu: {mu:.12}");

    match second_solution(&inst)? {
        Some(witness) => {
            let _ = writeln!(
                w,
                "degenerate: yes; witness second solution u = {}",
                fmt_vec(witness.values())
            );
        }
        None => {
            let _ = writeln!(w, "degenerate: no (unique solution up to sign)");
        }
    }
    let _ = writeln!(w, "in closure of the degenerate set: {}", in_closure(&inst)?);

    let metric = if n <= DEFAULT_ENUMERATION_LIMIT {
        let r = exact_metric(&inst, params.alpha)?;
        let _ = writeln!(
            w,
            "exact metric (alpha = {}): value = {:.12}, distance = {:.12}",
            params.alpha, r.value, r.distance
        );
        if let Some(cert) = &r.certificate {
            let _ = writeln!(
                w,
                "  certificate: kind = {}, support = {:?}, parts = {:?} | {:?}, node = {:?}",
                cert.kind, cert.support, cert.part_i, cert.part_j, cert.node
            );
            let _ = writeln!(w, "  zero entries: {:?}", cert.zero_set());
        }
        if let Some(nearest) = &r.nearest {
            let _ = writeln!(w, "  nearest degenerate weights:");
            let _ = write!(w, "{}", fmt_matrix(nearest));
            let _ = writeln!(w, "  nearest degenerate truth: {}", fmt_vec(nearest.truth().values()));
        }
        Some(r)
    } else {
        let _ = writeln!(
            w,
            "exact metric: skipped (n = {n} exceeds the enumeration limit {DEFAULT_ENUMERATION_LIMIT}); bounds only"
        );
        None
    };

    if let Some(d) = delta {
        let rip = bound_rip(n, params.alpha, d)?;
        let refined = bound_rip_incoh(n, params.alpha, d, mu)?;
        let verdict = |bound: f64| -> &'static str {
            match &metric {
                Some(r) if r.value <= bound * (1.0 + 1e-9) => {
                    if (r.value - bound).abs() <= 1e-9 * bound {
                        "holds (tight)"
                    } else {
                        "holds"
                    }
                }
                Some(_) => "VIOLATED",
                None => "not checked",
            }
        };
        let _ = writeln!(w, "rip upper bound: {rip:.12} -> {}", verdict(rip));
        let _ = writeln!(w, "rip+incoherence upper bound: {refined:.12} -> {}", verdict(refined));
    } else {
        let _ = writeln!(w, "rip bounds: not applicable (no rip constant)");
    }

    if n <= 20 {
        let _ = writeln!(w, "fixed-weights metric D_C(u*): {:.12}", metric_fixed_c(&inst)?);
    }

    Ok(Output { report, metric })
}
