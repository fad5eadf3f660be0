//! Shared helpers for unit tests.

use crate::instance::{GroundTruth, Instance, WeightMatrix};
use crate::rng::RandomStream;
use rand::Rng;

/// Random normalized instance with strictly positive weights and a full
/// support truth vector with mixed signs.
pub(crate) fn random_instance(n: usize, stream: RandomStream) -> Instance {
    let mut rng = stream.rng();
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v: f64 = rng.random();
            c[i * n + j] = v;
            c[j * n + i] = v;
        }
    }
    let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
    Instance::new(WeightMatrix::new(n, c).unwrap(), GroundTruth::new(u))
        .unwrap()
        .normalize()
        .unwrap()
}
