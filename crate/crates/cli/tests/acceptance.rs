//! Acceptance criterion 7: desk-scale reproduction of the descent
//! success-rate transition. For n in {20, 40} with 200 seeded trials per grid
//! point (step 0.025), the smallest scaled parameter attaining a perfect
//! success rate must lie in [1 - 2.5 (n+1)^(-2/3), 1.1].

use mcmetric_cli::commands::transition::{run, Params};
use mcmetric_cli::grid::parse_grid;

#[test]
fn acceptance_07_transition_thresholds() {
    let params = Params {
        n_list: vec![20, 40],
        eta_grid: parse_grid("0.65:0.025:1.15").unwrap(),
        trials: 200,
        seed: 20_240_901,
        out: None,
        detail_out: None,
        max_iters: None,
        success_tol: None,
        grad_tol: None,
    };
    let out = run(&params).unwrap();
    let mut summary = Vec::new();
    for result in &out.per_n {
        let n = result.n;
        let lo = 1.0 - 2.5 * ((n as f64 + 1.0).powf(-2.0 / 3.0));
        let hi = 1.1;
        let threshold = result
            .threshold
            .unwrap_or_else(|| panic!("n = {n}: no grid point reached a perfect success rate"));
        let refined = result.refined.expect("refinement always set when a threshold exists");
        assert!(
            (lo..=hi).contains(&refined),
            "n = {n}: refined threshold {refined} outside [{lo:.4}, {hi}]"
        );
        assert!(
            (lo..=hi).contains(&threshold),
            "n = {n}: grid threshold {threshold} outside [{lo:.4}, {hi}]"
        );
        // threshold sanity: rate 1.0 at the threshold, below 1.0 just before
        let idx = result.rates.iter().position(|p| p.eta == threshold).unwrap();
        assert_eq!(result.rates[idx].rate, 1.0);
        if idx > 0 {
            assert!(result.rates[idx - 1].rate < 1.0);
        }
        summary.push(format!(
            "n = {n}: threshold {threshold:.3} (refined {refined:.4}) in [{lo:.3}, {hi}]"
        ));
    }
    println!(
        "ACCEPTANCE 7 PASS: transition thresholds at 200 trials, grid step 0.025: {}",
        summary.join("; ")
    );
}
