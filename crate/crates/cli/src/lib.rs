//! Experiment harness for the completion-complexity library: seeded,
//! reproducible sweeps with fixed-schema CSV outputs.
//!
//! Every command is a pure function of its parameter struct, so runs can be
//! driven from the command line, from a JSON config file (`mcmetric run`), or
//! directly from tests. Randomized commands split one seed into per-trial
//! streams, which makes the emitted CSV byte-identical regardless of the
//! worker-thread count.

pub mod commands;
pub mod csvfmt;
pub mod grid;

use serde::{Deserialize, Serialize};

/// A whole experiment described in a config file; mirrors the CLI flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum ConfigFile {
    Analyze(commands::analyze::Params),
    MinCurve(commands::min_curve::Params),
    Transition(commands::transition::Params),
    Bernoulli(commands::bernoulli::Params),
    Rip(commands::rip::Params),
    Reduced(commands::reduced::Params),
}

/// Exit codes: 0 success, 2 parse/input error, 3 hypothesis-range error.
pub fn exit_code_for(err: &mcmetric::Error) -> u8 {
    use mcmetric::Error::*;
    match err {
        Json(_) | Io(_) | InstanceFile(_) | DimensionMismatch { .. } | NonFinitePoint(_) => 2,
        _ => 3,
    }
}
