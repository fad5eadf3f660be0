//! Evaluators for the printed complexity bounds.
//!
//! Pure arithmetic on the published expressions; hypothesis violations are
//! reported as errors rather than clamped. Bounds may legitimately evaluate
//! to infinity (e.g. at `alpha = 1` or `mu = n`).

use crate::error::{Error, Result};

fn check(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Hypothesis(msg.into()))
    }
}

/// Upper bound on the metric for instances passing the two-sided restricted
/// isometry test with constant `delta`:
/// `(n^2 (1 + delta) - 2 delta) / (2 alpha (1 - delta))`.
pub fn bound_rip(n: usize, alpha: f64, delta: f64) -> Result<f64> {
    check(n >= 2, format!("bound_rip needs n >= 2, got {n}"))?;
    check((0.0..=1.0).contains(&alpha), format!("alpha = {alpha} outside [0, 1]"))?;
    check((0.0..1.0).contains(&delta), format!("delta = {delta} outside [0, 1)"))?;
    let nf = n as f64;
    Ok((nf * nf * (1.0 + delta) - 2.0 * delta) / (2.0 * alpha * (1.0 - delta)))
}

/// Incoherence-refined upper bound:
/// `max{ n(1+d)/(4a(1-d)), 1/(2(1-a)mu) } * min{ (1/mu - 1/n)^{-1}, 3 mu }`.
pub fn bound_rip_incoh(n: usize, alpha: f64, delta: f64, mu: f64) -> Result<f64> {
    check(n >= 2, format!("bound_rip_incoh needs n >= 2, got {n}"))?;
    check((0.0..=1.0).contains(&alpha), format!("alpha = {alpha} outside [0, 1]"))?;
    check((0.0..1.0).contains(&delta), format!("delta = {delta} outside [0, 1)"))?;
    check((1.0..=n as f64).contains(&mu), format!("mu = {mu} outside [1, n]"))?;
    let nf = n as f64;
    let first = (nf * (1.0 + delta) / (4.0 * alpha * (1.0 - delta)))
        .max(1.0 / (2.0 * (1.0 - alpha) * mu));
    let gap = 1.0 / mu - 1.0 / nf;
    let second = if gap > 0.0 { (1.0 / gap).min(3.0 * mu) } else { 3.0 * mu };
    Ok(first * second)
}

/// High-probability upper bound under the Bernoulli sampling model:
/// `max{ 3n/(4a), 1/(2(1-a)mu) } * (1/mu - 1/n)^{-1}`.
pub fn bound_bernoulli(n: usize, alpha: f64, mu: f64) -> Result<f64> {
    check(n >= 2, format!("bound_bernoulli needs n >= 2, got {n}"))?;
    check((0.0..=1.0).contains(&alpha), format!("alpha = {alpha} outside [0, 1]"))?;
    check((1.0..=n as f64).contains(&mu), format!("mu = {mu} outside [1, n]"))?;
    let nf = n as f64;
    let first = (3.0 * nf / (4.0 * alpha)).max(1.0 / (2.0 * (1.0 - alpha) * mu));
    let gap = 1.0 / mu - 1.0 / nf;
    Ok(if gap > 0.0 { first / gap } else { f64::INFINITY })
}

/// Sampling rate at which the Bernoulli bound holds with probability at least
/// `1 - 3 n^(1 - eta/2)`: `min{ 1, (16 (1 + eta mu) ln n + 16) / n }`.
/// The logarithm is natural.
pub fn bernoulli_p_threshold(n: usize, mu: f64, eta: f64) -> Result<f64> {
    check(n >= 2, format!("threshold needs n >= 2, got {n}"))?;
    check(mu >= 1.0, format!("mu = {mu} < 1"))?;
    check(eta > 2.0, format!("eta = {eta} must exceed 2"))?;
    let nf = n as f64;
    Ok(1.0_f64.min((16.0 * (1.0 + eta * mu) * nf.ln() + 16.0) / nf))
}

/// Probability floor `1 - 3 n^(1 - eta/2)` attached to the Bernoulli bound;
/// can be negative (vacuous) at desk scale.
pub fn bernoulli_probability(n: usize, eta: f64) -> Result<f64> {
    check(n >= 2, format!("needs n >= 2, got {n}"))?;
    check(eta > 2.0, format!("eta = {eta} must exceed 2"))?;
    Ok(1.0 - 3.0 * (n as f64).powf(1.0 - eta / 2.0))
}

/// Printed lower bound of the incoherence-aware construction
/// ([`crate::families::rip3_instance`]):
/// `n(1+d)/(4a(1-d)) * min{ n mu / (mu l - mu), mu }` with `l = ceil(n/mu)`,
/// evaluated literally. The printed expression mixes `l` and `mu` oddly and
/// can exceed the construction's true metric by a few percent (e.g. it gives
/// 9 at n = 6, mu = 1, delta = 1/2, alpha = 1/2 where the exact metric is
/// 44/5); use [`bound_rip3_proof`] for the sharp value the construction
/// actually guarantees.
pub fn bound_rip3_lower(n: usize, alpha: f64, delta: f64, mu: f64) -> Result<f64> {
    check(n >= 4, format!("bound_rip3_lower needs n >= 4, got {n}"))?;
    check((0.0..=1.0).contains(&alpha), format!("alpha = {alpha} outside [0, 1]"))?;
    check((0.0..1.0).contains(&delta), format!("delta = {delta} outside [0, 1)"))?;
    check((1.0..=n as f64).contains(&mu), format!("mu = {mu} outside [1, n]"))?;
    let nf = n as f64;
    let l = (nf / mu).ceil();
    let first = nf * (1.0 + delta) / (4.0 * alpha * (1.0 - delta));
    let ratio = if l > 1.0 { nf * mu / (mu * l - mu) } else { f64::INFINITY };
    Ok(first * ratio.min(mu))
}

/// Sharp lower bound guaranteed by the incoherence-aware construction: the
/// weighted distance to the specific disconnected neighbor used in its
/// derivation. For `mu <= n/2` (block case, `l = ceil(n/mu)`):
/// `((1+d) n^2 - 4 d (l-1)) / (4 a (l-1) (1-d))`; for `mu > n/2` the
/// construction routes to the tight instance, whose metric is the upper bound
/// itself.
pub fn bound_rip3_proof(n: usize, alpha: f64, delta: f64, mu: f64) -> Result<f64> {
    check(n >= 4, format!("bound_rip3_proof needs n >= 4, got {n}"))?;
    check((0.0..=1.0).contains(&alpha), format!("alpha = {alpha} outside [0, 1]"))?;
    check((0.0..1.0).contains(&delta), format!("delta = {delta} outside [0, 1)"))?;
    check((1.0..=n as f64).contains(&mu), format!("mu = {mu} outside [1, n]"))?;
    let nf = n as f64;
    if mu > nf / 2.0 {
        return bound_rip(n, alpha, delta);
    }
    let l = (nf / mu).ceil();
    Ok(((1.0 + delta) * nf * nf - 4.0 * delta * (l - 1.0)) / (4.0 * alpha * (l - 1.0) * (1.0 - delta)))
}

/// The two metric thresholds of the one-parameter family: below the first
/// there are provably no spurious local minima, above the second they
/// provably exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneParamThresholds {
    pub no_spurious_below: f64,
    pub spurious_above: f64,
}

/// Threshold pair for the one-parameter family (requires `n >= m >= 36`):
///
/// ```text
/// no_spurious_below = [ 36 a / n^2 + min{ 72 a m / n^2, 2 (1 - a) } ]^{-1}
/// spurious_above    = (18/17) max{ 13 n^2 / (2a), 1 / (2 (1 - a)) }
/// ```
pub fn bounds_one_param(n: usize, m: usize, alpha: f64) -> Result<OneParamThresholds> {
    check(m >= 36 && n >= m, format!("need n >= m >= 36, got n = {n}, m = {m}"))?;
    check((0.0..=1.0).contains(&alpha), format!("alpha = {alpha} outside [0, 1]"))?;
    let nf = n as f64;
    let mf = m as f64;
    let n2 = nf * nf;
    let no_spurious_below =
        1.0 / (36.0 * alpha / n2 + (72.0 * alpha * mf / n2).min(2.0 * (1.0 - alpha)));
    let spurious_above =
        (18.0 / 17.0) * (13.0 * n2 / (2.0 * alpha)).max(1.0 / (2.0 * (1.0 - alpha)));
    Ok(OneParamThresholds { no_spurious_below, spurious_above })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rip_bound_values() {
        assert!((bound_rip(5, 0.5, 0.0).unwrap() - 25.0).abs() < 1e-12);
        assert!((bound_rip(5, 0.5, 0.5).unwrap() - 73.0).abs() < 1e-12);
        // increasing in delta
        let mut prev = 0.0;
        for k in 0..9 {
            let v = bound_rip(6, 0.7, 0.1 * k as f64).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(bound_rip(5, 0.5, 1.0).is_err());
    }

    #[test]
    fn bernoulli_bound_value() {
        let v = bound_bernoulli(10, 0.9, 1.0).unwrap();
        assert!((v - (30.0 / 3.6) / 0.9).abs() < 1e-12, "got {v}");
        assert!(bound_bernoulli(10, 0.9, 10.0).unwrap().is_infinite());
    }

    #[test]
    fn p_threshold_value() {
        let v = bernoulli_p_threshold(100, 1.0, 3.0).unwrap();
        let expect = (16.0 * 4.0 * (100.0_f64).ln() + 16.0) / 100.0;
        assert!((v - expect.min(1.0)).abs() < 1e-15);
        assert!(bernoulli_p_threshold(100, 1.0, 2.0).is_err());
        // small n saturates at 1
        assert_eq!(bernoulli_p_threshold(12, 1.0, 3.0).unwrap(), 1.0);
    }

    #[test]
    fn one_param_thresholds() {
        let t = bounds_one_param(40, 36, 0.5).unwrap();
        let expect = (18.0 / 17.0) * (13.0 * 1600.0 / 1.0_f64).max(1.0);
        assert!((t.spurious_above - expect).abs() < 1e-9);
        let expect_low = 1.0 / (36.0 * 0.5 / 1600.0 + (72.0 * 0.5 * 36.0 / 1600.0_f64).min(1.0));
        assert!((t.no_spurious_below - expect_low).abs() < 1e-12);
        assert!(bounds_one_param(40, 35, 0.5).is_err());
        assert!(bounds_one_param(35, 36, 0.5).is_err());
    }

    #[test]
    fn rip_incoh_bound_finite_cases() {
        let v = bound_rip_incoh(8, 0.8, 0.2, 2.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
        // mu = n picks the 3 mu branch
        let v = bound_rip_incoh(8, 0.8, 0.2, 8.0).unwrap();
        let first = (8.0_f64 * 1.2 / (4.0 * 0.8 * 0.8)).max(1.0 / (2.0 * 0.2 * 8.0));
        assert!((v - first * 24.0).abs() < 1e-12);
    }

    #[test]
    fn rip3_printed_bound_can_exceed_the_proof_bound() {
        // the garbled printed expression overshoots the sharp value here
        let printed = bound_rip3_lower(6, 0.5, 0.5, 1.0).unwrap();
        let proof = bound_rip3_proof(6, 0.5, 0.5, 1.0).unwrap();
        assert!((printed - 9.0).abs() < 1e-12);
        assert!((proof - 8.8).abs() < 1e-12);
    }

    #[test]
    fn probability_floor_is_vacuous_at_desk_scale() {
        let p = bernoulli_probability(12, 3.0).unwrap();
        assert!(p < 0.5, "p = {p}");
        let p = bernoulli_probability(10_000, 6.0).unwrap();
        assert!(p > 0.99);
    }
}
