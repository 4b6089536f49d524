//! Label split/merge noise: how the four graph-matching schemes score a
//! prediction set against noisy labels, as the labels drift from merging
//! crowns (negative bias) to splitting them (positive bias).
//!
//! `cargo run --release --example label_noise`

use canopy_metrics::noise::{noise_sweep, LabelNoiseModel, PredictionNoiseModel, Quantity};

fn main() -> canopy_metrics::Result<()> {
    let biases = [-0.6, -0.3, 0.0, 0.3, 0.6];
    let models: Vec<_> = biases
        .iter()
        .map(|&b| LabelNoiseModel::new(0.5, LabelNoiseModel::DEFAULT_RATE, b))
        .collect::<Result<_, _>>()?;
    let m = &models[2];
    println!(
        "unbiased label pmf: p(1) = {:.3}, p(2) = {:.4}, p(1/2) = {:.4}, p(3) = {:.5}",
        m.pmf(Quantity::ONE)?,
        m.pmf(Quantity::Whole(2))?,
        m.pmf(Quantity::Fraction(2))?,
        m.pmf(Quantity::Whole(3))?
    );
    let pred = PredictionNoiseModel::new(0.6, LabelNoiseModel::DEFAULT_RATE)?;
    println!("\n bias  scheme           precision  recall");
    for r in noise_sweep(10_000, &models, &pred, 42)? {
        println!("{:5.1}  {:15}  {:9.3}  {:6.3}", r.bias, r.scheme.as_str(), r.precision, r.recall);
    }
    Ok(())
}
