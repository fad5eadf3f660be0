//! JSON instance files.
//!
//! ```json
//! {
//!   "n": 2,
//!   "C": [[0.25, 0.25], [0.25, 0.25]],
//!   "u_star": [1.0, 0.0],
//!   "meta": {"family": "example"}
//! }
//! ```
//!
//! `C` is row-major with nonnegative entries; readers symmetrize and normalize
//! on load unless raw mode is requested, in which case the stored values must
//! already satisfy the normalization invariants.

use crate::error::{Error, Result};
use crate::instance::{GroundTruth, Instance, WeightMatrix};
use crate::tol;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// On-disk shape of an instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    pub u_star: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<BTreeMap<String, String>>,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance) -> Self {
        let n = instance.n();
        let c = (0..n)
            .map(|i| (0..n).map(|j| instance.weights().get(i, j)).collect())
            .collect();
        Self { n, c, u_star: instance.truth().values().to_vec(), meta: None }
    }

    pub fn with_meta(mut self, key: &str, value: &str) -> Self {
        self.meta.get_or_insert_with(BTreeMap::new).insert(key.into(), value.into());
        self
    }

    fn into_raw_instance(self) -> Result<Instance> {
        if self.c.len() != self.n {
            return Err(Error::InstanceFile(format!(
                "C has {} rows, expected n = {}",
                self.c.len(),
                self.n
            )));
        }
        let mut entries = Vec::with_capacity(self.n * self.n);
        for (i, row) in self.c.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::InstanceFile(format!(
                    "C row {i} has {} entries, expected {}",
                    row.len(),
                    self.n
                )));
            }
            entries.extend_from_slice(row);
        }
        if self.u_star.len() != self.n {
            return Err(Error::InstanceFile(format!(
                "u_star has {} entries, expected {}",
                self.u_star.len(),
                self.n
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) || self.u_star.iter().any(|v| !v.is_finite()) {
            return Err(Error::InstanceFile("non-finite entry".into()));
        }
        let weights = WeightMatrix::new(self.n, entries)?;
        Instance::new(weights, GroundTruth::new(self.u_star))
    }

    /// Decode into an instance. Unless `raw`, the weights are symmetrized and
    /// both parts rescaled to unit l1 norm; in raw mode the stored values must
    /// already be normalized and symmetric.
    pub fn into_instance(self, raw: bool) -> Result<Instance> {
        let inst = self.into_raw_instance()?;
        if !raw {
            return inst.normalize();
        }
        if !inst.weights().is_symmetric() {
            return Err(Error::InstanceFile("raw mode requires a symmetric C".into()));
        }
        let normalized = inst.normalize()?;
        let close = normalized
            .weights()
            .entries()
            .iter()
            .zip(inst.weights().entries())
            .all(|(a, b)| (a - b).abs() <= tol::NORMALIZATION)
            && normalized
                .truth()
                .values()
                .iter()
                .zip(inst.truth().values())
                .all(|(a, b)| (a - b).abs() <= tol::NORMALIZATION);
        if !close {
            return Err(Error::InstanceFile(
                "raw mode requires normalized data (unit l1 norms)".into(),
            ));
        }
        Ok(normalized)
    }
}

/// Read an instance file; `raw` skips the symmetrize-and-normalize pass (the
/// stored data must then already be normalized).
pub fn read_instance(path: impl AsRef<Path>, raw: bool) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    let file: InstanceFile = serde_json::from_str(&text)?;
    file.into_instance(raw)
}

/// Write an instance as pretty-printed JSON.
pub fn write_instance(path: impl AsRef<Path>, instance: &Instance) -> Result<()> {
    let file = InstanceFile::from_instance(instance);
    let text = serde_json::to_string_pretty(&file)?;
    std::fs::write(path, text)?;
    Ok(())
}
