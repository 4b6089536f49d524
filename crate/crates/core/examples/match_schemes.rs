//! One prediction covering three small labels, matched under each scheme.
//!
//! `cargo run --example match_schemes`

use canopy_metrics::geometry::{cd_to_ca, Point, TreeRecord};
use canopy_metrics::matching::{choose_k, match_trees, CostParams, Scheme, DEFAULT_K_MAX};

fn tree(x: f64, y: f64, cd: f64) -> TreeRecord {
    TreeRecord::new("demo", Point::new(x, y), cd_to_ca(cd).expect("positive diameter")).expect("valid tree")
}

fn main() -> canopy_metrics::Result<()> {
    let labels = [tree(-2.0, 0.0, 3.0), tree(2.0, 0.0, 3.0), tree(0.0, 2.0, 3.0), tree(25.0, 0.0, 6.0)];
    let preds = [tree(0.0, 0.5, 8.0), tree(24.0, 1.0, 5.5)];
    let params = CostParams::with_gamma(1.0)?;
    let k = choose_k(labels.len(), preds.len(), DEFAULT_K_MAX);
    println!("{} labels, {} predictions, tiling k = {k}", labels.len(), preds.len());
    for scheme in Scheme::ALL {
        let m = match_trees(&labels, &preds, &params, scheme, k);
        println!("{scheme:>12}: tp {} fp {} fn {}  pairs {:?}", m.tp, m.fp, m.fn_, m.pairs);
    }
    Ok(())
}
