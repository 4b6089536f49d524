//! Full evaluation of noisy predictions against a synthetic forest,
//! printed as the JSON report the command line writes.
//!
//! `cargo run --example evaluate_patch`

use canopy_metrics::io::{EvalConfig, ReportDocument};
use canopy_metrics::metrics::evaluate_patches;
use canopy_metrics::noise::{perturb_predictions, stream_rng, synthetic_forest, CrownSizes};

fn main() -> canopy_metrics::Result<()> {
    let mut rng = stream_rng(7, 0);
    let forest = synthetic_forest(&mut rng, 120, 3, &CrownSizes::default())?;
    // predictions a little too small, with half a crown radius of jitter
    let preds: Vec<_> = forest
        .iter()
        .map(|p| perturb_predictions(p, 0.8, 0.5, &mut rng))
        .collect::<Result<_, _>>()?;
    let pairs: Vec<_> = forest.iter().zip(&preds).map(|(l, p)| (l.as_slice(), p.as_slice())).collect();

    let config = EvalConfig {
        resolution: Some(0.25),
        ..EvalConfig::default()
    };
    let report = evaluate_patches(&pairs, &config.settings())?;
    print!("{}", ReportDocument { config, report }.to_json()?);
    Ok(())
}
