//! Precision and recall of the three schemes as predictions shrink or grow
//! relative to the labels, plus the balanced F1 that combines them.
//!
//! `cargo run --release --example matching_sweep`

use canopy_metrics::matching::{CostParams, DEFAULT_K_MAX};
use canopy_metrics::noise::{run_matching_sweep, stream_rng, synthetic_forest, CrownSizes, DEFAULT_JITTER};

fn main() -> canopy_metrics::Result<()> {
    let forest = synthetic_forest(&mut stream_rng(42, u64::MAX), 500, 10, &CrownSizes::default())?;
    let s_grid: Vec<f64> = (1..=7).map(|i| 0.25 * i as f64).collect();
    let rows = run_matching_sweep(&forest, &s_grid, &CostParams::with_gamma(1.0)?, DEFAULT_K_MAX, DEFAULT_JITTER, 42)?;
    println!("   s  preds   F1 1:1   F1 N:1   F1 1:N   bF1");
    for r in rows {
        println!(
            "{:4.2}  {:5}   {:6.3}   {:6.3}   {:6.3}  {:6.3}",
            r.s,
            r.n_preds,
            r.one_to_one.f1,
            r.many_to_one.f1,
            r.one_to_many.f1,
            r.bf1.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
