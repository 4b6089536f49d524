//! What a labeled crown area says about the real one, under the label
//! noise model and a log-normal prior on real crown areas.
//!
//! `cargo run --example crown_area_posterior`

use canopy_metrics::noise::{posterior_ca, posterior_entropy, CaGrid, LikelihoodParams, PosteriorModel};

fn main() -> canopy_metrics::Result<()> {
    let grid = CaGrid::log_spaced(1.0, 200.0, 100)?;
    let (mu, sd) = (15.0f64.ln(), 0.6);
    let prior: Vec<f64> = grid.values().iter().map(|&a| (-(a.ln() - mu).powi(2) / (2.0 * sd * sd)).exp() / a).collect();
    let model = PosteriorModel::new(grid.clone(), prior, LikelihoodParams::default())?;
    let post = posterior_ca(&model, &grid)?;
    let entropy = posterior_entropy(&post);
    println!("label CA   P(real = label)   posterior mean   entropy");
    for l in (0..grid.len()).step_by(11) {
        let col = &post.columns[l];
        let mean: f64 = col.iter().zip(grid.values()).map(|(p, a)| p * a).sum();
        println!("{:8.1}   {:15.3}   {:14.1}   {:7.3}", grid.values()[l], col[l], mean, entropy[l]);
    }
    Ok(())
}
